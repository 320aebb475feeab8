//! Run configuration: defaults, a config file (flat `key = value` text or
//! JSON), then command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use twinfield_core::fock::Truncation;
use twinfield_core::propagator::{Damping, QuadratureParams};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Tachyon mass `m`.
    pub mass: f64,
    /// Total-quanta cap of each Fock factor.
    #[serde(alias = "nmax")]
    pub n_max: u32,
    /// Relative tolerance under which two mode labels coincide.
    #[serde(alias = "tau_label")]
    pub label_tol: f64,
    /// Amplitudes below this are dropped.
    #[serde(alias = "epsilon_prune")]
    pub prune_eps: f64,
    /// Relative accuracy demanded of extrapolated integrals.
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub epsilon_max: f64,
    pub epsilon_min: f64,
    pub extrapolation_steps: usize,
    /// Boosted energies below `degenerate_eps · m` are rejected.
    pub degenerate_eps: f64,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads for scans; 0 picks one per core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let q = QuadratureParams::default();
        let t = Truncation::default();
        RunConfig {
            mass: 1.0,
            n_max: t.n_max,
            label_tol: t.label_tol,
            prune_eps: t.prune_eps,
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            epsilon_max: q.epsilon_max,
            epsilon_min: q.epsilon_min,
            extrapolation_steps: q.extrapolation_steps,
            degenerate_eps: twinfield_core::kinematics::DEFAULT_DEGENERACY,
            seed: 0,
            out: PathBuf::from("out"),
            threads: 0,
        }
    }
}

/// Values given on the command line; `None` leaves the file or default.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub mass: Option<f64>,
    pub n_max: Option<u32>,
    pub label_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub degenerate_eps: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(file: Option<&Path>, overrides: &Overrides) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
                Self::parse(&text)?
            }
            None => RunConfig::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses JSON if the text starts with `{`, else `key = value` lines
    /// (`#` starts a comment; `:` is accepted in place of `=`).
    pub fn parse(text: &str) -> Result<Self> {
        let value = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?
        } else {
            let mut map = Map::new();
            for (n, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, val) = line
                    .split_once('=')
                    .or_else(|| line.split_once(':'))
                    .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
                map.insert(key.trim().replace('-', "_"), scalar(val.trim()));
            }
            Value::Object(map)
        };
        serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($field:ident),*) => { $(if let Some(v) = o.$field.clone() { self.$field = v; })* };
        }
        set!(mass, n_max, label_tol, rel_tol, degenerate_eps, seed, out, threads);
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("label_tol", self.label_tol),
            ("prune_eps", self.prune_eps),
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("epsilon_max", self.epsilon_max),
            ("epsilon_min", self.epsilon_min),
            ("degenerate_eps", self.degenerate_eps),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CliError::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.n_max == 0 {
            return Err(CliError::Config("n_max must be at least 1".into()));
        }
        if self.epsilon_min > self.epsilon_max || self.extrapolation_steps == 0 {
            return Err(CliError::Config("need epsilon_min <= epsilon_max and at least one extrapolation step".into()));
        }
        Ok(())
    }

    pub fn truncation(&self) -> Truncation {
        Truncation { n_max: self.n_max, label_tol: self.label_tol, prune_eps: self.prune_eps }
    }

    pub fn quadrature(&self) -> QuadratureParams {
        QuadratureParams {
            epsilon_max: self.epsilon_max,
            epsilon_min: self.epsilon_min,
            extrapolation_steps: self.extrapolation_steps,
            damping: Damping::Exponential,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
        }
    }

    pub fn thread_pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))
    }
}

fn scalar(s: &str) -> Value {
    let s = s.trim_matches('"');
    if let Ok(u) = s.parse::<u64>() {
        return Value::from(u);
    }
    match s.parse::<f64>() {
        Ok(f) => Value::from(f),
        Err(_) => Value::from(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_and_json_agree() {
        let kv = "# run\nmass = 2.0\nnmax: 6\nlabel-tol = 1e-8\nout = \"results\"\nseed = 7\n";
        let js = r#"{"mass": 2.0, "n_max": 6, "label_tol": 1e-8, "out": "results", "seed": 7}"#;
        let a = RunConfig::parse(kv).unwrap();
        assert_eq!(a, RunConfig::parse(js).unwrap());
        assert_eq!((a.mass, a.n_max, a.seed), (2.0, 6, 7));
        assert_eq!(a.out, PathBuf::from("results"));
        assert_eq!(a.rel_tol, RunConfig::default().rel_tol);
    }

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig::parse("mass = 2\nseed = 3").unwrap();
        c.apply(&Overrides { mass: Some(0.5), ..Default::default() });
        assert_eq!((c.mass, c.seed), (0.5, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("mass").is_err());
        let c = RunConfig { label_tol: 0.0, ..Default::default() };
        assert!(c.validate().is_err());
    }
}
