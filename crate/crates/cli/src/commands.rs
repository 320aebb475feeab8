//! The subcommands. Each returns a JSON-serializable report and writes its
//! files under the configured output directory.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use twinfield_core::dynamics::{boost_process, covariance_residual, evolve, rest_frame_emission, yukawa_first_order, EvolutionSign, Process};
use twinfield_core::fock::{FockState, Ladder, LadderString, OccBasisState, Truncation};
use twinfield_core::kinematics::{classify_mode_boost_with, flip_threshold_speed};
use twinfield_core::lorentz_rep::{
    c_operator_transform_check, commutation_preservation_check, probe_family, represent_boost, superposition_demo,
    unitarity_residual, vacuum_invariance_check,
};
use twinfield_core::propagator::{feynman_propagator, pauli_jordan, Dispersion, Interval, QuadratureParams};
use twinfield_core::twinspace::{
    apply_twin_operator, reduce_to_fock, schmidt_rank, trace_functional, TwinOperator, TwinOperatorTerm, TwinState, TwinTerm,
    DEFAULT_SCHMIDT_TOL,
};
use twinfield_core::{boost, classify_mode_boost, BoostAction, Complex64, FourVector, LorentzTransform, ModeLabel};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::serial::{to_sorted_json, AmplitudeJson, ModeJson, ProcessJson, TwinStateJson};

pub fn write_json<T: Serialize>(dir: &Path, name: &str, v: &T) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, to_sorted_json(v) + "\n").map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

fn unit(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(CliError::Usage("direction must be a nonzero finite vector".into()));
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

// ---------------------------------------------------------------------------
// invariance-suite

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub check_name: String,
    /// `null` when the check could not be evaluated.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub samples: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckResult {
    fn new(name: &str, tolerance: f64, samples: usize, outcome: Result<f64>) -> Self {
        match outcome {
            Ok(r) => CheckResult {
                check_name: name.into(),
                max_residual: Some(r),
                tolerance,
                samples,
                pass: r.is_finite() && r <= tolerance,
                error: None,
            },
            Err(e) => CheckResult {
                check_name: name.into(),
                max_residual: None,
                tolerance,
                samples,
                pass: false,
                error: Some(format!("{}: {e}", e.kind())),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub seed: u64,
    pub mass: f64,
    pub n_max: u32,
    pub label_tol: f64,
}

struct Sampler {
    rng: ChaCha8Rng,
    mass: f64,
}

impl Sampler {
    fn new(seed: u64, stream: u64, mass: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng, mass }
    }

    fn direction(&mut self) -> [f64; 3] {
        loop {
            let v: [f64; 3] = [self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 0.1 && n <= 1.0 {
                return [v[0] / n, v[1] / n, v[2] / n];
            }
        }
    }

    fn boost(&mut self) -> LorentzTransform {
        let n = self.direction();
        boost(n, self.rng.gen_range(0.0..0.99)).expect("unit direction and subluminal speed")
    }

    fn label(&mut self) -> ModeLabel {
        let n = self.direction();
        let a = self.mass * self.rng.gen_range(1.01..3.0);
        ModeLabel::new([a * n[0], a * n[1], a * n[2]], self.mass).expect("above the mass shell")
    }

    /// A boost that acts regularly on all the labels.
    fn regular_boost(&mut self, labels: &[ModeLabel]) -> LorentzTransform {
        loop {
            let l = self.boost();
            if labels.iter().all(|k| classify_mode_boost(&l, k).is_ok()) {
                return l;
            }
        }
    }

    fn complex(&mut self) -> Complex64 {
        Complex64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0))
    }

    fn fock(&mut self, pool: &[ModeLabel], cap: u32, trunc: &Truncation) -> Result<FockState> {
        let mut terms = Vec::new();
        for _ in 0..3 {
            let mut left = cap;
            let mut occ = Vec::new();
            for k in pool {
                let n = self.rng.gen_range(0..=left.min(2));
                left -= n;
                occ.push((*k, n));
            }
            terms.push((OccBasisState::from_occupancies(occ, trunc)?, self.complex()));
        }
        Ok(FockState::from_terms(terms, trunc))
    }

    fn word(&mut self, pool: &[ModeLabel], max_len: usize) -> LadderString {
        let len = self.rng.gen_range(0..=max_len);
        LadderString(
            (0..len)
                .map(|_| {
                    let k = pool[self.rng.gen_range(0..pool.len())];
                    if self.rng.gen_bool(0.5) {
                        Ladder::create(k)
                    } else {
                        Ladder::annihilate(k)
                    }
                })
                .collect(),
        )
    }
}

/// Number of label pairs that the configured tolerance fails to tell apart.
fn label_resolution(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 0, cfg.mass);
    let labels: Vec<ModeLabel> = (0..8).map(|_| s.label()).collect();
    let mut collisions = 0usize;
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            collisions += a.same_mode(b, cfg.label_tol) as usize;
        }
    }
    CheckResult::new("label_resolution", 0.0, labels.len(), Ok(collisions as f64))
}

fn vacuum_check(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 1, cfg.mass);
    let t = cfg.truncation();
    let n = 50;
    let r = (0..n).try_fold(0.0f64, |w, _| Ok::<_, CliError>(w.max(vacuum_invariance_check(&s.boost(), &t)?)));
    CheckResult::new("vacuum_invariance", 0.0, n, r)
}

fn commutation_check(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 2, cfg.mass);
    let t = cfg.truncation();
    let n = 30;
    let r = (0..n).try_fold(0.0f64, |w, i| {
        let k = s.label();
        let q = if i % 3 == 0 { k } else { s.label() };
        let l = s.regular_boost(&[k, q]);
        Ok::<_, CliError>(w.max(commutation_preservation_check(&l, &k, &q, &t)?))
    });
    CheckResult::new("commutation_preservation", 1e-12, n, r)
}

fn c_operator_check(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 3, cfg.mass);
    let t = cfg.truncation();
    let n = 10;
    let r = (0..n).try_fold(0.0f64, |w, _| {
        let k = s.label();
        let l = s.regular_boost(&[k]);
        let family = probe_family(&[k], 1, &t)?;
        Ok::<_, CliError>(w.max(c_operator_transform_check(&l, &k, &family, &t)?))
    });
    CheckResult::new("c_operator_transform", 1e-10, n, r)
}

fn unitarity_check(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 4, cfg.mass);
    let t = cfg.truncation();
    let n = 10;
    let r = (0..n).try_fold(0.0f64, |w, _| {
        let labels = [s.label(), s.label()];
        let l = s.regular_boost(&labels);
        let family = probe_family(&labels, 1, &t)?;
        Ok::<_, CliError>(w.max(unitarity_residual(&l, &family, &t)?))
    });
    CheckResult::new("boost_unitarity", 1e-12, n, r)
}

fn trace_check(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 5, cfg.mass);
    let t = cfg.truncation();
    let n = 20;
    let cap = t.n_max.min(3);
    let r = (0..n).try_fold(0.0f64, |w, _| {
        let pool = [s.label(), s.label()];
        let mut state = TwinState::zero();
        for _ in 0..3 {
            state.push(TwinTerm { alpha: s.complex(), ket: s.fock(&pool, cap, &t)?, bra: s.fock(&pool, cap, &t)? });
        }
        let time = s.rng.gen_range(-10.0..10.0);
        let d = trace_functional(&evolve(&state, time, EvolutionSign::Minus)) - trace_functional(&state);
        Ok::<_, CliError>(w.max(d.norm()))
    });
    CheckResult::new("trace_invariance", 1e-12, n, r)
}

/// `Tr(O s) = Σ c ⟨ξ|O₂†O₁|ψ⟩` on random operators and separable states.
fn reduction_check(cfg: &RunConfig) -> CheckResult {
    let mut s = Sampler::new(cfg.seed, 6, cfg.mass);
    // Words of length two on both sides need room above the state's quanta.
    let t = Truncation { n_max: cfg.n_max.max(8), ..cfg.truncation() };
    let (n_ops, n_states) = (10, 10);
    let mut run = || -> Result<f64> {
        let pool = [s.label(), s.label(), s.label()];
        let mut ops = Vec::new();
        for _ in 0..n_ops {
            let terms = (0..3).map(|_| TwinOperatorTerm { coeff: s.complex(), ket_op: s.word(&pool, 2), bra_op: s.word(&pool, 2) }).collect();
            ops.push(TwinOperator { terms });
        }
        let mut states = Vec::new();
        for _ in 0..n_states {
            states.push(TwinState::separable(s.complex(), s.fock(&pool, 3, &t)?, s.fock(&pool, 3, &t)?));
        }
        let mut worst: f64 = 0.0;
        for o in &ops {
            let r = reduce_to_fock(o);
            for st in &states {
                let lhs = trace_functional(&apply_twin_operator(o, st, &t)?);
                let rhs = r.expectation(st, &t)?;
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
            }
        }
        Ok(worst)
    };
    let r = run();
    CheckResult::new("reduction_identity", 1e-12, n_ops * n_states, r)
}

pub fn invariance_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let checks = vec![
        label_resolution(cfg),
        vacuum_check(cfg),
        commutation_check(cfg),
        c_operator_check(cfg),
        unitarity_check(cfg),
        trace_check(cfg),
        reduction_check(cfg),
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { checks, pass, seed: cfg.seed, mass: cfg.mass, n_max: cfg.n_max, label_tol: cfg.label_tol })
}

pub fn suite_failure(report: &SuiteReport) -> Option<CliError> {
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.check_name.as_str()).collect();
    (!failed.is_empty()).then(|| CliError::ChecksFailed { failed: failed.len(), total: report.checks.len(), names: failed.join(", ") })
}

// ---------------------------------------------------------------------------
// propagator-scan and pauli-jordan

/// Inclusive `start:stop:count` range, or a single value.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub values: Vec<f64>,
}

impl std::str::FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Usage(format!("range {s:?} is not start:stop:count or a number"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| bad());
        let values = match parts.as_slice() {
            [v] => vec![num(v)?],
            [a, b, n] => {
                let (a, b) = (num(a)?, num(b)?);
                let n: usize = n.parse().map_err(|_| bad())?;
                match n {
                    0 => return Err(bad()),
                    1 => vec![a],
                    _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
                }
            }
            _ => return Err(bad()),
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(bad());
        }
        Ok(Grid { values })
    }
}

/// Comma-separated list; the empty string gives an empty list.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|_| CliError::Usage(format!("{p:?} is not a number"))))
        .collect()
}

pub fn parse_vector(s: &str) -> Result<[f64; 3]> {
    let v = parse_list(s)?;
    <[f64; 3]>::try_from(v.as_slice()).map_err(|_| CliError::Usage(format!("{s:?} is not a 3-vector x,y,z")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanCsvRow {
    pub t: f64,
    pub r: f64,
    pub boost_speed: f64,
    pub re: Option<f64>,
    pub im: Option<f64>,
    pub err_estimate: Option<f64>,
    /// `|Δ(Λx) − Δ(x)| / |Δ(x)|`.
    pub deviation: Option<f64>,
    /// `ok`, or the error kind of a flagged row.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub rows: usize,
    pub flagged: usize,
    pub max_deviation: Option<f64>,
    /// The same restricted to the real part, relative to `|Δ(x)|`.
    pub max_re_deviation: Option<f64>,
    pub csv: PathBuf,
}

pub struct ScanSpec {
    pub t: Grid,
    pub r: Grid,
    pub speeds: Vec<f64>,
    pub direction: [f64; 3],
}

impl Default for ScanSpec {
    fn default() -> Self {
        ScanSpec {
            t: "0:2:5".parse().expect("valid"),
            r: "0.25:2.25:5".parse().expect("valid"),
            speeds: vec![0.3, 0.6, 0.9],
            direction: [1.0, 1.0, 0.0],
        }
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let csv_err = |e| CliError::Csv { path: path.to_path_buf(), source: e };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn points(spec_t: &Grid, spec_r: &Grid) -> Vec<(f64, f64)> {
    spec_t.values.iter().flat_map(|&t| spec_r.values.iter().map(move |&r| (t, r))).collect()
}

/// `Δ_F` at `x = (t, r x̂)` and at `Λx` for each speed. Rows come out in
/// grid order (t outer, r, speed inner) whatever the thread count.
pub fn propagator_scan(cfg: &RunConfig, spec: &ScanSpec) -> Result<(Vec<ScanCsvRow>, ScanSummary)> {
    let n = unit(spec.direction)?;
    let boosts: Vec<(f64, LorentzTransform)> =
        spec.speeds.iter().map(|&v| Ok((v, boost(n, v)?))).collect::<Result<Vec<_>>>()?;
    let q = cfg.quadrature();
    let m = cfg.mass;
    let pts = points(&spec.t, &spec.r);
    let rows: Vec<Vec<(ScanCsvRow, Option<f64>)>> = cfg.thread_pool()?.install(|| {
        pts.par_iter()
            .map(|&(t, r)| {
                let x = FourVector::new(t, r, 0.0, 0.0);
                let base = Interval::new(t, r).and_then(|iv| feynman_propagator(iv, m, &q));
                boosts
                    .iter()
                    .map(|(v, l)| {
                        let value = if *v == 0.0 { base.clone() } else { feynman_propagator(Interval::from_four_vector(l.apply(x)), m, &q) };
                        scan_row(t, r, *v, &base, &value)
                    })
                    .collect()
            })
            .collect()
    });
    let rows: Vec<(ScanCsvRow, Option<f64>)> = rows.into_iter().flatten().collect();
    let path = cfg.out.join("propagator_scan.csv");
    let csv_rows: Vec<ScanCsvRow> = rows.iter().map(|(r, _)| r.clone()).collect();
    write_csv(&path, &csv_rows)?;
    let fold = |it: &mut dyn Iterator<Item = f64>| it.fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))));
    let summary = ScanSummary {
        rows: rows.len(),
        flagged: csv_rows.iter().filter(|r| r.status != "ok").count(),
        max_deviation: fold(&mut csv_rows.iter().filter_map(|r| r.deviation)),
        max_re_deviation: fold(&mut rows.iter().filter_map(|(_, d)| *d)),
        csv: path,
    };
    Ok((csv_rows, summary))
}

fn scan_row(
    t: f64,
    r: f64,
    speed: f64,
    base: &twinfield_core::Result<twinfield_core::propagator::PropagatorValue>,
    value: &twinfield_core::Result<twinfield_core::propagator::PropagatorValue>,
) -> (ScanCsvRow, Option<f64>) {
    let mut row = ScanCsvRow { t, r, boost_speed: speed, re: None, im: None, err_estimate: None, deviation: None, status: "ok".into() };
    match value {
        Ok(v) => {
            row.re = Some(v.value.re);
            row.im = Some(v.value.im);
            row.err_estimate = Some(v.error);
        }
        Err(e) => row.status = CliError::from(e.clone()).kind().into(),
    }
    let mut re_dev = None;
    match (base, value) {
        (Ok(b), Ok(v)) => {
            let norm = b.value.norm();
            row.deviation = Some((v.value - b.value).norm() / norm);
            re_dev = Some((v.value.re - b.value.re).abs() / norm);
        }
        (Err(e), Ok(_)) => row.status = format!("base:{}", CliError::from(e.clone()).kind()),
        _ => {}
    }
    (row, re_dev)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContrastRow {
    pub t: f64,
    pub r: f64,
    pub separation: &'static str,
    pub ordinary_re: Option<f64>,
    pub ordinary_im: Option<f64>,
    pub ordinary_err: Option<f64>,
    pub tachyonic_re: Option<f64>,
    pub tachyonic_im: Option<f64>,
    pub tachyonic_err: Option<f64>,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContrastSummary {
    pub rows: usize,
    /// Spacelike points with `t ≠ 0`, where the contrast is informative.
    pub spacelike: usize,
    /// Of those, points where the ordinary value is below 10× its error.
    pub ordinary_vanishes: usize,
    /// Of those, points where the tachyonic value exceeds 10× its error.
    pub tachyonic_nonzero: usize,
    pub csv: PathBuf,
}

pub fn pauli_jordan_contrast(cfg: &RunConfig, t: &Grid, r: &Grid) -> Result<(Vec<ContrastRow>, ContrastSummary)> {
    let q: QuadratureParams = cfg.quadrature();
    let m = cfg.mass;
    let pts = points(t, r);
    let rows: Vec<ContrastRow> = cfg.thread_pool()?.install(|| {
        pts.par_iter()
            .map(|&(t, r)| {
                let iv = Interval::new(t, r);
                let ord = iv.clone().and_then(|x| pauli_jordan(x, m, Dispersion::Ordinary, &q));
                let tach = iv.and_then(|x| pauli_jordan(x, m, Dispersion::Tachyonic, &q));
                let status = match (&ord, &tach) {
                    (Ok(_), Ok(_)) => "ok".to_string(),
                    (Err(e), _) | (_, Err(e)) => CliError::from(e.clone()).kind().to_string(),
                };
                ContrastRow {
                    t,
                    r,
                    separation: if r > t.abs() { "spacelike" } else { "timelike" },
                    ordinary_re: ord.as_ref().ok().map(|v| v.value.re),
                    ordinary_im: ord.as_ref().ok().map(|v| v.value.im),
                    ordinary_err: ord.as_ref().ok().map(|v| v.error),
                    tachyonic_re: tach.as_ref().ok().map(|v| v.value.re),
                    tachyonic_im: tach.as_ref().ok().map(|v| v.value.im),
                    tachyonic_err: tach.as_ref().ok().map(|v| v.error),
                    status,
                }
            })
            .collect()
    });
    let path = cfg.out.join("pauli_jordan.csv");
    write_csv(&path, &rows)?;
    let informative: Vec<&ContrastRow> = rows.iter().filter(|r| r.separation == "spacelike" && r.t != 0.0 && r.status == "ok").collect();
    let mag = |re: Option<f64>, im: Option<f64>| re.unwrap_or(0.0).hypot(im.unwrap_or(0.0));
    let summary = ContrastSummary {
        rows: rows.len(),
        spacelike: informative.len(),
        ordinary_vanishes: informative
            .iter()
            .filter(|r| mag(r.ordinary_re, r.ordinary_im) < 10.0 * r.ordinary_err.unwrap_or(0.0))
            .count(),
        tachyonic_nonzero: informative
            .iter()
            .filter(|r| mag(r.tachyonic_re, r.tachyonic_im) > 10.0 * r.tachyonic_err.unwrap_or(0.0))
            .count(),
        csv: path,
    };
    Ok((rows, summary))
}

// ---------------------------------------------------------------------------
// boost-demo

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperpositionJson {
    pub xi1: ModeJson,
    pub xi2: ModeJson,
    pub before: TwinStateJson,
    pub after: TwinStateJson,
    pub schmidt_rank_before: usize,
    pub schmidt_rank_after: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoostDemo {
    pub k: ModeJson,
    pub speed: f64,
    pub direction: [f64; 3],
    pub threshold_speed: Option<f64>,
    pub classification: &'static str,
    pub boosted_label: ModeJson,
    pub before: TwinStateJson,
    pub after: TwinStateJson,
    pub schmidt_rank_before: usize,
    pub schmidt_rank_after: usize,
    pub trace_before: [f64; 2],
    pub trace_after: [f64; 2],
    /// `(|0⟩⊗⟨1_{−k}| + |0⟩⊗⟨1_k|)/√2` under the same boost.
    pub superposition: Option<SuperpositionJson>,
}

pub fn boost_demo(cfg: &RunConfig, k: [f64; 3], speed: f64, direction: [f64; 3]) -> Result<BoostDemo> {
    let n = unit(direction)?;
    let label = ModeLabel::new(k, cfg.mass)?;
    let l = boost(n, speed)?;
    let threshold = flip_threshold_speed(&label, n);
    let action = classify_mode_boost_with(&l, &label, cfg.degenerate_eps).map_err(|e| match e {
        twinfield_core::Error::DegenerateBoost { energy } => CliError::Degenerate {
            message: match threshold {
                Some(v) => format!("boost carries the mode to zero energy ((Λk)⁰ = {energy:e}); flip threshold speed ω_k/|k| = {v:.6}"),
                None => format!("boost carries the mode to zero energy ((Λk)⁰ = {energy:e})"),
            },
            energy,
            threshold_speed: threshold,
        },
        other => other.into(),
    })?;
    let t = cfg.truncation();
    let one = Complex64::new(1.0, 0.0);
    let before = TwinState::separable(one, FockState::one(label), FockState::vacuum());
    let after = represent_boost(&l, &before, &t)?;
    let mirror = ModeLabel::new([-k[0], -k[1], -k[2]], cfg.mass)?;
    let superposition = match superposition_demo(&l, &mirror, &label, DEFAULT_SCHMIDT_TOL, &t) {
        Ok(d) => Some(SuperpositionJson {
            xi1: ModeJson::from_label(&mirror),
            xi2: ModeJson::from_label(&label),
            before: TwinStateJson::from_state(&d.before, &t),
            after: TwinStateJson::from_state(&d.after, &t),
            schmidt_rank_before: d.rank_before,
            schmidt_rank_after: d.rank_after,
        }),
        Err(twinfield_core::Error::DegenerateBoost { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let tr = |s: &TwinState| {
        let z = trace_functional(s);
        [z.re, z.im]
    };
    Ok(BoostDemo {
        k: ModeJson::from_label(&label),
        speed,
        direction: n,
        threshold_speed: threshold,
        classification: match action {
            BoostAction::Preserved(_) => "Preserved",
            BoostAction::Flipped(_) => "Flipped",
        },
        boosted_label: ModeJson::from_label(action.label()),
        schmidt_rank_before: schmidt_rank(&before, DEFAULT_SCHMIDT_TOL, &t),
        schmidt_rank_after: schmidt_rank(&after, DEFAULT_SCHMIDT_TOL, &t),
        trace_before: tr(&before),
        trace_after: tr(&after),
        before: TwinStateJson::from_state(&before, &t),
        after: TwinStateJson::from_state(&after, &t),
        superposition,
    })
}

pub fn describe_boost_demo(d: &BoostDemo) -> String {
    // Adding zero turns -0.0 into 0.0 for display.
    let z = |x: f64| x + 0.0;
    let side = |s: &TwinStateJson| -> String {
        s.terms
            .iter()
            .map(|term| {
                let occ = |o: &[crate::serial::OccupancyJson]| {
                    if o.is_empty() {
                        "0".to_string()
                    } else {
                        o.iter()
                            .map(|x| format!("{}×({:.4},{:.4},{:.4})", x.n, z(x.mode.k[0]), z(x.mode.k[1]), z(x.mode.k[2])))
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                };
                format!("({:.4}{:+.4}i) |{}⟩⊗⟨{}|", term.alpha[0], term.alpha[1], occ(&term.ket), occ(&term.bra))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let b = &d.boosted_label;
    let mut s = format!(
        "mode k = ({:.4}, {:.4}, {:.4}), m = {}, boost speed {} along ({:.4}, {:.4}, {:.4})\n",
        d.k.k[0], d.k.k[1], d.k.k[2], d.k.mass, d.speed, d.direction[0], d.direction[1], d.direction[2]
    );
    match d.threshold_speed {
        Some(v) => s += &format!("flip threshold speed ω_k/(n̂·k) = {v:.6}\n"),
        None => s += "no flip threshold along this direction\n",
    }
    s += &format!("classification: {}\n", d.classification);
    s += &format!("boosted label ({:.5}, {:.5}, {:.5}), ω = {:.5}\n", z(b.k[0]), z(b.k[1]), z(b.k[2]), b.omega.unwrap_or(f64::NAN));
    s += &format!("before: {}\nafter:  {}\n", side(&d.before), side(&d.after));
    s += &format!("Schmidt rank {} -> {}, trace ({:.4}{:+.4}i) -> ({:.4}{:+.4}i)\n", d.schmidt_rank_before, d.schmidt_rank_after, d.trace_before[0], d.trace_before[1], d.trace_after[0], d.trace_after[1]);
    if let Some(sp) = &d.superposition {
        s += &format!("superposition of ⟨1_{{-k}}| and ⟨1_k|: Schmidt rank {} -> {}\n", sp.schmidt_rank_before, sp.schmidt_rank_after);
    }
    s
}

// ---------------------------------------------------------------------------
// yukawa-covariance

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceRow {
    pub speed: f64,
    pub residual: f64,
    pub tachyon_migrated: bool,
    pub balance_after: [f64; 4],
    pub expected: [f64; 4],
    pub amplitude: AmplitudeJson,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub process: ProcessJson,
    pub amplitude: AmplitudeJson,
    pub direction: [f64; 3],
    pub tolerance: f64,
    pub rows: Vec<CovarianceRow>,
    pub pass: bool,
}

/// The default process: `k → l + p` with `l` (mass 2m) at rest and the
/// tachyon emitted along x̂.
pub fn default_process(cfg: &RunConfig) -> Result<Process> {
    Ok(rest_frame_emission(2.0 * cfg.mass, cfg.mass, 1.0, [1.0, 0.0, 0.0])?)
}

pub fn load_process(path: &Path) -> Result<Process> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let doc: ProcessJson =
        serde_json::from_str(&text).map_err(|e| CliError::Json { context: path.display().to_string(), source: e })?;
    doc.to_process()
}

pub fn yukawa_covariance(p: &Process, speeds: &[f64], direction: [f64; 3]) -> Result<CovarianceReport> {
    let n = unit(direction)?;
    let tolerance = 1e-9;
    let before = yukawa_first_order(p)?;
    let mut rows = Vec::with_capacity(speeds.len());
    for &v in speeds {
        let l = boost(n, v)?;
        let (residual, migrated) = covariance_residual(&l, p)?;
        let after = yukawa_first_order(&boost_process(&l, p)?)?;
        rows.push(CovarianceRow {
            speed: v,
            residual,
            tachyon_migrated: migrated,
            balance_after: after.momentum_balance.to_array(),
            expected: l.apply(before.momentum_balance).to_array(),
            amplitude: AmplitudeJson::from(&after),
            pass: residual < tolerance && after.prefactor == before.prefactor,
        });
    }
    let pass = rows.iter().all(|r| r.pass);
    Ok(CovarianceReport {
        process: ProcessJson::from_process(p),
        amplitude: AmplitudeJson::from(&before),
        direction: n,
        tolerance,
        rows,
        pass,
    })
}
