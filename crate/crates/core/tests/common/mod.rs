//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use twinfield_core::fock::{FockState, Ladder, LadderString, OccBasisState, Truncation};
use twinfield_core::twinspace::{TwinOperator, TwinOperatorTerm, TwinState, TwinTerm};
use twinfield_core::{boost, Complex64, LorentzTransform, ModeLabel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n: f64 = v.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn random_boost(rng: &mut ChaCha8Rng, max_speed: f64) -> LorentzTransform {
    boost(unit_vector(rng), rng.gen_range(0.0..max_speed)).unwrap()
}

/// On-shell label with `|k|` uniform in `(1.01 m, max_ratio · m)`.
pub fn random_label(rng: &mut ChaCha8Rng, m: f64, max_ratio: f64) -> ModeLabel {
    let n = unit_vector(rng);
    let a = m * rng.gen_range(1.01..max_ratio);
    ModeLabel::new([a * n[0], a * n[1], a * n[2]], m).unwrap()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Basis state over `pool` with at most `per_mode` quanta in each mode and
/// at most `trunc.n_max` in total.
pub fn random_basis(rng: &mut ChaCha8Rng, pool: &[ModeLabel], per_mode: u32, trunc: &Truncation) -> OccBasisState {
    let mut left = trunc.n_max;
    let mut occ = Vec::with_capacity(pool.len());
    for k in pool {
        let n = rng.gen_range(0..=per_mode.min(left));
        left -= n;
        occ.push((*k, n));
    }
    OccBasisState::from_occupancies(occ, trunc).unwrap()
}

pub fn random_fock(rng: &mut ChaCha8Rng, pool: &[ModeLabel], terms: usize, per_mode: u32, trunc: &Truncation) -> FockState {
    let t: Vec<(OccBasisState, Complex64)> =
        (0..terms).map(|_| (random_basis(rng, pool, per_mode, trunc), random_complex(rng))).collect();
    FockState::from_terms(t, trunc)
}

pub fn random_twin(rng: &mut ChaCha8Rng, pool: &[ModeLabel], terms: usize, trunc: &Truncation) -> TwinState {
    TwinState::from_terms(
        (0..terms)
            .map(|_| TwinTerm {
                alpha: random_complex(rng),
                ket: random_fock(rng, pool, 3, 2, trunc),
                bra: random_fock(rng, pool, 3, 2, trunc),
            })
            .collect(),
    )
}

pub fn random_word(rng: &mut ChaCha8Rng, pool: &[ModeLabel], max_len: usize) -> LadderString {
    let len = rng.gen_range(0..=max_len);
    LadderString(
        (0..len)
            .map(|_| {
                let k = pool[rng.gen_range(0..pool.len())];
                if rng.gen_bool(0.5) {
                    Ladder::create(k)
                } else {
                    Ladder::annihilate(k)
                }
            })
            .collect(),
    )
}

pub fn random_twin_operator(rng: &mut ChaCha8Rng, pool: &[ModeLabel], terms: usize, max_len: usize) -> TwinOperator {
    TwinOperator {
        terms: (0..terms)
            .map(|_| TwinOperatorTerm {
                coeff: random_complex(rng),
                ket_op: random_word(rng, pool, max_len),
                bra_op: random_word(rng, pool, max_len),
            })
            .collect(),
    }
}
