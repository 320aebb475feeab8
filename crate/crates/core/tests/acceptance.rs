//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so that every criterion reports even when
//! an earlier one fails. Exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use twinfield_core::dynamics::{
    covariance_residual, evolve, rest_frame_emission, s_matrix_free_limit_check, yukawa_first_order, EvolutionSign,
};
use twinfield_core::fock::{free_hamiltonian_apply, FockState, Truncation};
use twinfield_core::lorentz_rep::{commutation_preservation_check, represent_boost, superposition_demo, vacuum_invariance_check};
use twinfield_core::modes::{mode_boost_residual, SpacetimePoint};
use twinfield_core::propagator::{
    feynman_propagator_damped, feynman_propagator_oracle, invariance_scan, pauli_jordan, Damping, Dispersion, Interval,
    OracleGrid, QuadratureParams,
};
use twinfield_core::twinspace::{apply_twin_operator, reduce_to_fock, trace_functional, TwinState, DEFAULT_SCHMIDT_TOL};
use twinfield_core::{boost, classify_mode_boost, BoostAction, Complex64, FourVector, LorentzTransform, ModeLabel};

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

fn k15() -> ModeLabel {
    ModeLabel::new([1.5, 0.0, 0.0], 1.0).unwrap()
}

/// Samples a boost and label until the boost acts on the label as requested.
fn sample_action(rng: &mut rand_chacha::ChaCha8Rng, flipped: bool) -> (LorentzTransform, ModeLabel) {
    loop {
        let l = random_boost(rng, 0.99);
        let k = random_label(rng, 1.0, 3.0);
        if let Ok(a) = classify_mode_boost(&l, &k) {
            if a.is_flipped() == flipped {
                return (l, k);
            }
        }
    }
}

fn c1_vacuum() -> Outcome {
    let mut rng = rng(1);
    let t = Truncation::default();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        worst = worst.max(vacuum_invariance_check(&random_boost(&mut rng, 0.99), &t).unwrap());
    }
    outcome(worst == 0.0, format!("max residual {worst:e} over 50 boosts (required exactly 0)"))
}

fn c2_commutators() -> Outcome {
    let mut rng = rng(2);
    let t = Truncation::default();
    let mut worst: f64 = 0.0;
    let mut counts = [0usize; 3];
    for i in 0..100 {
        // Cases: both flipped, both preserved, mixed; some have l = k.
        let case = i % 3;
        let (k_flip, q_flip) = (case != 1, case == 0);
        let (l, k, q) = 'sample: loop {
            let (l, k) = sample_action(&mut rng, k_flip);
            if i % 4 == 0 && case != 2 {
                break (l, k, k);
            }
            for _ in 0..200 {
                let q = random_label(&mut rng, 1.0, 3.0);
                if matches!(classify_mode_boost(&l, &q), Ok(a) if a.is_flipped() == q_flip) {
                    break 'sample (l, k, q);
                }
            }
        };
        let kind = match (classify_mode_boost(&l, &k).unwrap().is_flipped(), classify_mode_boost(&l, &q).unwrap().is_flipped()) {
            (true, true) => 0,
            (false, false) => 1,
            _ => 2,
        };
        counts[kind] += 1;
        worst = worst.max(commutation_preservation_check(&l, &k, &q, &t).unwrap());
    }
    let covered = counts.iter().all(|&c| c > 0);
    outcome(
        worst < 1e-12 && covered,
        format!("max residual {worst:e} (tol 1e-12); flipped/preserved/mixed = {}/{}/{}", counts[0], counts[1], counts[2]),
    )
}

fn c3_single_particle() -> Outcome {
    let t = Truncation::default();
    let s = TwinState::separable(one(), FockState::one(k15()), FockState::vacuum());
    let fast = represent_boost(&boost([1.0, 0.0, 0.0], 0.9).unwrap(), &s, &t).unwrap();
    let mut ok = fast.len() == 1;
    let mut detail = String::new();
    if ok {
        let term = &fast.terms()[0];
        let (b, c) = term.bra.iter().next().unwrap();
        let lp = b.modes()[0].0;
        ok = term.ket == FockState::vacuum()
            && term.bra.len() == 1
            && b.total() == 1
            && lp.shell_defect().abs() < 1e-9
            && (term.alpha * c - one()).norm() < 1e-12;
        detail = format!("v=0.9: |0>(x)<1_l'| with l'=({:.5},{:.1},{:.1}), shell defect {:e}", lp.momentum()[0], lp.momentum()[1], lp.momentum()[2], lp.shell_defect());
    }
    let slow = represent_boost(&boost([1.0, 0.0, 0.0], 0.5).unwrap(), &s, &t).unwrap();
    let kept = slow.len() == 1 && slow.terms()[0].bra == FockState::vacuum() && slow.terms()[0].ket.len() == 1;
    outcome(ok && kept, format!("{detail}; v=0.5 stays on ket side: {kept}"))
}

fn c4_nonseparable() -> Outcome {
    let t = Truncation::default();
    let l = boost([1.0, 0.0, 0.0], 0.9).unwrap();
    let xi1 = ModeLabel::new([-1.5, 0.0, 0.0], 1.0).unwrap();
    let d = superposition_demo(&l, &xi1, &k15(), DEFAULT_SCHMIDT_TOL, &t).unwrap();
    outcome(d.rank_before == 1 && d.rank_after == 2, format!("Schmidt rank {} -> {}", d.rank_before, d.rank_after))
}

fn c5_reduction() -> Outcome {
    let mut rng = rng(5);
    let t = Truncation::with_n_max(8);
    let pool: Vec<ModeLabel> = (0..3).map(|_| random_label(&mut rng, 1.0, 4.0)).collect();
    let ops: Vec<_> = (0..20).map(|_| random_twin_operator(&mut rng, &pool, 3, 2)).collect();
    let states: Vec<TwinState> = (0..20)
        .map(|_| {
            // At most three quanta per side, so words of length two stay inside N_max = 8.
            TwinState::separable(random_complex(&mut rng), random_fock(&mut rng, &pool, 3, 1, &t), random_fock(&mut rng, &pool, 3, 1, &t))
        })
        .collect();
    let mut worst: f64 = 0.0;
    for o in &ops {
        let r = reduce_to_fock(o);
        for s in &states {
            let lhs = trace_functional(&apply_twin_operator(o, s, &t).unwrap());
            let rhs = r.expectation(s, &t).unwrap();
            worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
        }
    }
    outcome(worst < 1e-12, format!("max |Tr(O s) - <xi|R|psi>| {worst:e} over 20x20 (tol 1e-12)"))
}

fn c6_positivity() -> Outcome {
    let mut rng = rng(6);
    let t = Truncation::default();
    let mut min_e = f64::INFINITY;
    let mut worst_eig: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let pool: Vec<ModeLabel> = (0..n).map(|_| random_label(&mut rng, 1.0, 10.0)).collect();
        let b = random_basis(&mut rng, &pool, t.n_max, &t);
        let e = b.energy();
        let s = FockState::basis(b);
        let h = free_hamiltonian_apply(&s);
        worst_eig = worst_eig.max(h.max_diff(&s.scale(Complex64::new(e, 0.0)), t.label_tol) / e.max(1.0));
        min_e = min_e.min(e);
    }
    outcome(min_e >= 0.0 && worst_eig < 1e-12, format!("min eigenvalue {min_e:.6} over 1000 states; eigen-equation residual {worst_eig:e}"))
}

fn c7_propagator() -> Outcome {
    let q = QuadratureParams::default();
    let dir = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2, 0.0];
    let points: Vec<FourVector> = [0.0, 0.5, 1.0, 1.5, 2.0]
        .iter()
        .flat_map(|&t| [0.25, 0.75, 1.25, 1.75, 2.25].map(|r| FourVector::new(t, r, 0.0, 0.0)))
        .collect();
    let boosts: Vec<LorentzTransform> = [0.3, 0.6, 0.9].iter().map(|&v| boost(dir, v).unwrap()).collect();
    let scan = match invariance_scan(&points, &boosts, 1.0, &q) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("scan failed: {e}")),
    };

    // Oracle comparison at matched regularization.
    let mut rng = rng(7);
    let grid = OracleGrid::default();
    let damping = Damping::Smooth { order: 16 };
    let mut worst_oracle: f64 = 0.0;
    let mut n = 0;
    while n < 20 {
        let t: f64 = rng.gen_range(-2.5..2.5);
        let r: f64 = rng.gen_range(0.1..3.0);
        if (r - t.abs()).abs() < 0.5 {
            continue;
        }
        let x = Interval::new(t, r).unwrap();
        let main = feynman_propagator_damped(x, 1.0, 0.1, damping, 1e-13).unwrap();
        let orc = feynman_propagator_oracle(x, 1.0, 0.1, damping, &grid).unwrap();
        worst_oracle = worst_oracle.max((main.value - orc.value).norm() / main.value.norm());
        n += 1;
    }
    outcome(
        scan.max_deviation < 5e-4 && worst_oracle < 1e-4,
        format!(
            "max boost deviation {:.3e} (tol 5e-4; real part alone {:.3e}) over {} rows; main vs oracle {:.3e} at 20 points (tol 1e-4)",
            scan.max_deviation,
            scan.max_re_deviation,
            scan.rows.len(),
            worst_oracle
        ),
    )
}

fn c8_microcausality() -> Outcome {
    let q = QuadratureParams::default();
    let x = Interval::new(1.0, 2.0).unwrap();
    let ord = pauli_jordan(x, 1.0, Dispersion::Ordinary, &q).unwrap();
    let tach = pauli_jordan(x, 1.0, Dispersion::Tachyonic, &q).unwrap();
    let pass = ord.value.norm() < 10.0 * ord.error && tach.value.norm() > 10.0 * tach.error;
    outcome(
        pass,
        format!(
            "t=1, r=2: ordinary |D|={:.3e} vs err {:.3e}; tachyonic |D|={:.3e} vs err {:.3e}",
            ord.value.norm(),
            ord.error,
            tach.value.norm(),
            tach.error
        ),
    )
}

fn c9_amplitude() -> Outcome {
    let mut rng = rng(9);
    let mut worst: f64 = 0.0;
    let mut migrated = 0;
    let mut total = 0;
    let mut prefactor_ok = true;
    for i in 0..8 {
        let n = if i == 0 { [1.0, 0.0, 0.0] } else { unit_vector(&mut rng) };
        let p = rest_frame_emission(2.0, 1.0, 0.7, n).unwrap();
        let before = yukawa_first_order(&p).unwrap();
        let mut dirs = vec![n, [-n[0], -n[1], -n[2]]];
        dirs.extend((0..4).map(|_| unit_vector(&mut rng)));
        for d in dirs {
            for v in [0.3, 0.6, 0.9, 0.99] {
                let l = boost(d, v).unwrap();
                let (res, moved) = covariance_residual(&l, &p).unwrap();
                let after = yukawa_first_order(&twinfield_core::dynamics::boost_process(&l, &p).unwrap()).unwrap();
                prefactor_ok &= after.prefactor == before.prefactor && after.allowed();
                worst = worst.max(res);
                migrated += moved as usize;
                total += 1;
            }
        }
    }
    outcome(
        worst < 1e-9 && migrated > 0 && prefactor_ok,
        format!("max |balance' - L balance| {worst:e} (tol 1e-9) over {total} boosts, {migrated} with tachyon migration"),
    )
}

fn c10_trace_evolution() -> Outcome {
    let mut rng = rng(10);
    let t = Truncation::default();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let pool: Vec<ModeLabel> = (0..2).map(|_| random_label(&mut rng, 1.0, 4.0)).collect();
        let s = random_twin(&mut rng, &pool, 3, &t);
        let time = rng.gen_range(-5.0..5.0);
        let before = trace_functional(&s);
        let after = trace_functional(&evolve(&s, time, EvolutionSign::Minus));
        worst = worst.max((after - before).norm());
    }
    let a = k15();
    let b = ModeLabel::new([0.0, 2.0, 0.5], 1.0).unwrap();
    let alpha = FockState::one(a).scale(Complex64::new(0.6, 0.0)).axpy(Complex64::new(0.0, 0.8), &FockState::one(b), &t);
    let times = [0.0, 0.5, 1.0, 10.0, 100.0];
    let mut s_drift: f64 = 0.0;
    for beta in [FockState::one(a), FockState::one(b), FockState::vacuum()] {
        let seq = s_matrix_free_limit_check(&alpha, &beta, &times);
        s_drift = s_drift.max(seq.iter().map(|z| (z - seq[0]).norm()).fold(0.0, f64::max));
    }
    outcome(worst < 1e-12 && s_drift < 1e-12, format!("trace drift {worst:e} over 50 states; S-matrix T-drift {s_drift:e} (tol 1e-12)"))
}

fn c11_mode_phase() -> Outcome {
    let mut rng = rng(11);
    let mut worst: f64 = 0.0;
    let mut flips = 0;
    for i in 0..100 {
        let (l, k) = sample_action(&mut rng, i % 2 == 0);
        let x = SpacetimePoint::new(rng.gen_range(-10.0..10.0), [rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0)]);
        let r = mode_boost_residual(&l, &k, x).unwrap();
        flips += matches!(r.action, BoostAction::Flipped(_)) as usize;
        worst = worst.max(r.phase_residual);
    }
    outcome(worst < 1e-9 && flips > 0 && flips < 100, format!("max phase residual {worst:e} rad (tol 1e-9); {flips} flipped of 100"))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("twin vacuum invariance", Duration::from_secs(1), c1_vacuum),
        ("commutator covariance", Duration::from_secs(10), c2_commutators),
        ("single-particle boost law", Duration::from_secs(1), c3_single_particle),
        ("non-separability generation", Duration::from_secs(1), c4_nonseparable),
        ("reduction-map identity", Duration::from_secs(30), c5_reduction),
        ("free-spectrum positivity", Duration::from_secs(1), c6_positivity),
        ("propagator Lorentz invariance", Duration::from_secs(300), c7_propagator),
        ("microcausality contrast", Duration::from_secs(60), c8_microcausality),
        ("amplitude covariance", Duration::from_secs(1), c9_amplitude),
        ("trace/evolution consistency", Duration::from_secs(5), c10_trace_evolution),
        ("mode boost phase law", Duration::from_secs(5), c11_mode_phase),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= *budget;
        failures += (!pass) as usize;
        println!(
            "{} {:>2} {}: {} [{:.2} s, budget {} s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
