//! Truncated bosonic Fock space over exact mode labels.
//!
//! Basis states are occupation maps over [`ModeLabel`]s; states are sparse
//! complex superpositions of them. Ladder operators use the unit-norm
//! convention `[â_k, â†_l] = δ_kl`, where labels are identified within the
//! relative tolerance of the active [`Truncation`]. The covariant
//! normalization `[a_k, a†_l] = 2ω_k(2π)³δ³(k − l)` is reached through
//! [`LadderConvention`], which replaces the delta by `1/δV` for a momentum
//! cell of volume `δV`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::kinematics::{ModeLabel, DEFAULT_LABEL_TOL};
use crate::modes::{mode_value, SpacetimePoint, WavePacket};
use crate::{Error, Result};

pub const DEFAULT_N_MAX: u32 = 4;
pub const DEFAULT_PRUNE_EPS: f64 = 1e-14;

/// Particle-number cap and the tolerances used when combining states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub n_max: u32,
    pub label_tol: f64,
    pub prune_eps: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { n_max: DEFAULT_N_MAX, label_tol: DEFAULT_LABEL_TOL, prune_eps: DEFAULT_PRUNE_EPS }
    }
}

impl Truncation {
    pub fn with_n_max(n_max: u32) -> Self {
        Truncation { n_max, ..Self::default() }
    }
}

/// Symmetric occupation-number basis state: sorted `(label, count)` pairs
/// with positive counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct OccBasisState {
    modes: Vec<(ModeLabel, u32)>,
}

impl OccBasisState {
    pub fn vacuum() -> Self {
        OccBasisState { modes: Vec::new() }
    }

    pub fn single(k: ModeLabel) -> Self {
        OccBasisState { modes: alloc::vec![(k, 1)] }
    }

    /// Builds a basis state, merging labels equal within `trunc.label_tol`.
    pub fn from_occupancies<I: IntoIterator<Item = (ModeLabel, u32)>>(occ: I, trunc: &Truncation) -> Result<Self> {
        let mut b = OccBasisState::vacuum();
        for (k, n) in occ {
            for _ in 0..n {
                b = b.created(&k, trunc)?.0;
            }
        }
        Ok(b)
    }

    pub fn modes(&self) -> &[(ModeLabel, u32)] {
        &self.modes
    }

    pub fn total(&self) -> u32 {
        self.modes.iter().map(|m| m.1).sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.modes.is_empty()
    }

    fn position(&self, k: &ModeLabel, tol: f64) -> Option<usize> {
        self.modes.iter().position(|(l, _)| l == k).or_else(|| self.modes.iter().position(|(l, _)| l.same_mode(k, tol)))
    }

    pub fn occupation(&self, k: &ModeLabel, tol: f64) -> u32 {
        self.position(k, tol).map_or(0, |i| self.modes[i].1)
    }

    /// `Σ ω_k n_k` using each label's own dispersion.
    pub fn energy(&self) -> f64 {
        self.modes.iter().map(|(k, n)| k.omega() * *n as f64).sum()
    }

    /// `Π n_k!`.
    pub fn factorial_weight(&self) -> f64 {
        self.modes.iter().map(|(_, n)| (1..=*n).map(|j| j as f64).product::<f64>()).product()
    }

    /// Adds one quantum of `k`; returns the new state and the old occupation.
    fn created(&self, k: &ModeLabel, trunc: &Truncation) -> Result<(Self, u32)> {
        if self.total() + 1 > trunc.n_max {
            return Err(Error::TruncationOverflow { n_max: trunc.n_max });
        }
        let mut modes = self.modes.clone();
        let n = match self.position(k, trunc.label_tol) {
            Some(i) => {
                modes[i].1 += 1;
                modes[i].1 - 1
            }
            None => {
                let at = modes.partition_point(|(l, _)| l < k);
                modes.insert(at, (*k, 1));
                0
            }
        };
        Ok((OccBasisState { modes }, n))
    }

    /// Removes one quantum of `k`; `None` if it is unoccupied.
    fn annihilated(&self, k: &ModeLabel, tol: f64) -> Option<(Self, u32)> {
        let i = self.position(k, tol)?;
        let mut modes = self.modes.clone();
        let n = modes[i].1;
        if n == 1 {
            modes.remove(i);
        } else {
            modes[i].1 -= 1;
        }
        Some((OccBasisState { modes }, n))
    }

    /// Equal counts on labels matched within `tol`.
    pub fn approx_eq(&self, other: &OccBasisState, tol: f64) -> bool {
        self.modes.len() == other.modes.len()
            && self.modes.iter().all(|(k, n)| other.occupation(k, tol) == *n)
    }

    /// Creation-operator word `Π (â†_k)^{n_k}` that builds this state from
    /// the vacuum, with the normalization `1/sqrt(Π n_k!)` it requires.
    pub fn creation_word(&self) -> (Vec<ModeLabel>, f64) {
        let word = self.modes.iter().flat_map(|(k, n)| core::iter::repeat_n(*k, *n as usize)).collect();
        (word, 1.0 / self.factorial_weight().sqrt())
    }
}

/// Sparse superposition of occupation basis states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FockState {
    amps: BTreeMap<OccBasisState, Complex64>,
}

impl FockState {
    pub fn zero() -> Self {
        FockState { amps: BTreeMap::new() }
    }

    pub fn vacuum() -> Self {
        Self::basis(OccBasisState::vacuum())
    }

    pub fn basis(b: OccBasisState) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert(b, Complex64::new(1.0, 0.0));
        FockState { amps }
    }

    /// `|1_k⟩`.
    pub fn one(k: ModeLabel) -> Self {
        Self::basis(OccBasisState::single(k))
    }

    pub fn from_terms<I: IntoIterator<Item = (OccBasisState, Complex64)>>(terms: I, trunc: &Truncation) -> Self {
        let mut s = FockState::zero();
        for (b, c) in terms {
            s.add_term(b, c, trunc);
        }
        s.prune(trunc.prune_eps);
        s
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OccBasisState, &Complex64)> {
        self.amps.iter()
    }

    /// Amplitude of `b`, matching labels within `tol`.
    pub fn amplitude(&self, b: &OccBasisState, tol: f64) -> Complex64 {
        if let Some(c) = self.amps.get(b) {
            return *c;
        }
        self.amps.iter().find(|(k, _)| k.approx_eq(b, tol)).map_or(Complex64::new(0.0, 0.0), |(_, c)| *c)
    }

    /// Adds `c·|b⟩`, merging into an existing key equal within the label
    /// tolerance. Existing labels win over the incoming ones.
    pub fn add_term(&mut self, b: OccBasisState, c: Complex64, trunc: &Truncation) {
        if let Some(v) = self.amps.get_mut(&b) {
            *v += c;
            return;
        }
        if let Some((_, v)) = self.amps.iter_mut().find(|(k, _)| k.approx_eq(&b, trunc.label_tol)) {
            *v += c;
            return;
        }
        self.amps.insert(b, c);
    }

    pub fn prune(&mut self, eps: f64) {
        self.amps.retain(|_, c| c.norm() >= eps);
    }

    pub fn scale(&self, c: Complex64) -> FockState {
        FockState { amps: self.amps.iter().map(|(b, v)| (b.clone(), v * c)).collect() }
    }

    /// `self + c·other`, pruned.
    pub fn axpy(&self, c: Complex64, other: &FockState, trunc: &Truncation) -> FockState {
        let mut s = self.clone();
        for (b, v) in other.iter() {
            s.add_term(b.clone(), v * c, trunc);
        }
        s.prune(trunc.prune_eps);
        s
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest amplitude difference between the two states.
    pub fn max_diff(&self, other: &FockState, tol: f64) -> f64 {
        let one_way = |a: &FockState, b: &FockState| {
            a.iter().map(|(k, v)| (v - b.amplitude(k, tol)).norm()).fold(0.0, f64::max)
        };
        one_way(self, other).max(one_way(other, self))
    }
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner_product(a: &FockState, b: &FockState) -> Complex64 {
    inner_product_tol(a, b, DEFAULT_LABEL_TOL)
}

pub fn inner_product_tol(a: &FockState, b: &FockState, tol: f64) -> Complex64 {
    let (small, large, swap) = if a.len() <= b.len() { (a, b, false) } else { (b, a, true) };
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, v) in small.iter() {
        let w = large.amplitude(k, tol);
        acc += if swap { w.conj() * v } else { v.conj() * w };
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadderKind {
    Create,
    Annihilate,
}

impl LadderKind {
    pub fn adjoint(self) -> Self {
        match self {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        }
    }
}

/// `â†_k` or `â_k` in the unit-norm convention.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ladder {
    pub kind: LadderKind,
    pub label: ModeLabel,
}

impl Ladder {
    pub fn create(label: ModeLabel) -> Self {
        Ladder { kind: LadderKind::Create, label }
    }

    pub fn annihilate(label: ModeLabel) -> Self {
        Ladder { kind: LadderKind::Annihilate, label }
    }

    pub fn adjoint(self) -> Self {
        Ladder { kind: self.kind.adjoint(), label: self.label }
    }
}

/// Operator product written left to right; the rightmost factor acts first.
/// The empty string is the identity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LadderString(pub Vec<Ladder>);

impl LadderString {
    pub fn identity() -> Self {
        LadderString(Vec::new())
    }

    pub fn single(op: Ladder) -> Self {
        LadderString(alloc::vec![op])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(A B …)† = … B† A†`.
    pub fn adjoint(&self) -> Self {
        LadderString(self.0.iter().rev().map(|op| op.adjoint()).collect())
    }

    /// Product `self · other` (other acts first).
    pub fn then_after(&self, other: &LadderString) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        LadderString(v)
    }

    pub fn apply(&self, s: &FockState, trunc: &Truncation) -> Result<FockState> {
        let mut cur = s.clone();
        for op in self.0.iter().rev() {
            cur = apply_ladder(&cur, &op.label, op.kind, trunc)?;
        }
        Ok(cur)
    }
}

fn apply_basis(b: &OccBasisState, k: &ModeLabel, kind: LadderKind, trunc: &Truncation) -> Result<Option<(OccBasisState, f64)>> {
    match kind {
        LadderKind::Create => {
            let (nb, n) = b.created(k, trunc)?;
            Ok(Some((nb, ((n + 1) as f64).sqrt())))
        }
        LadderKind::Annihilate => Ok(b.annihilated(k, trunc.label_tol).map(|(nb, n)| (nb, (n as f64).sqrt()))),
    }
}

/// `â†_k|s⟩` or `â_k|s⟩`.
pub fn apply_ladder(s: &FockState, k: &ModeLabel, kind: LadderKind, trunc: &Truncation) -> Result<FockState> {
    let mut out = FockState::zero();
    for (b, c) in s.iter() {
        if let Some((nb, f)) = apply_basis(b, k, kind, trunc)? {
            out.add_term(nb, c * f, trunc);
        }
    }
    out.prune(trunc.prune_eps);
    Ok(out)
}

/// Number operator `n̂_k`.
pub fn number_apply(s: &FockState, k: &ModeLabel, tol: f64) -> FockState {
    FockState { amps: s.iter().map(|(b, c)| (b.clone(), c * b.occupation(k, tol) as f64)).filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect() }
}

/// `H₀ = Σ_k ω_k n̂_k` (normal ordered).
pub fn free_hamiltonian_apply(s: &FockState) -> FockState {
    FockState { amps: s.iter().map(|(b, c)| (b.clone(), c * b.energy())).filter(|(_, c)| *c != Complex64::new(0.0, 0.0)).collect() }
}

/// `e^{−iH₀t}|s⟩`.
pub fn free_evolve(s: &FockState, t: f64) -> FockState {
    FockState { amps: s.iter().map(|(b, c)| (b.clone(), c * Complex64::from_polar(1.0, -b.energy() * t))).collect() }
}

/// The smeared field `Σ (c u_k(x) â_k + c* u*_k(x) â†_k)` as ladder terms.
///
/// A term marked `conjugated` contributes `c u*_k(x)` in front of `â†_k` and
/// `c* u_k(x)` in front of `â_k`, so the field is hermitian exactly when the
/// packet is closed under conjugation.
pub fn smeared_field_terms(packet: &WavePacket, x: SpacetimePoint) -> Vec<(Complex64, Ladder)> {
    let mut out = Vec::with_capacity(2 * packet.terms().len());
    for t in packet.terms() {
        let u = mode_value(&t.label, x);
        let c = if t.conjugated { t.coeff.conj() } else { t.coeff };
        out.push((c * u, Ladder::annihilate(t.label)));
        out.push((c.conj() * u.conj(), Ladder::create(t.label)));
    }
    out
}

pub fn smeared_field_apply(s: &FockState, packet: &WavePacket, x: SpacetimePoint, trunc: &Truncation) -> Result<FockState> {
    let mut out = FockState::zero();
    for (c, op) in smeared_field_terms(packet, x) {
        let part = apply_ladder(s, &op.label, op.kind, trunc)?;
        for (b, v) in part.iter() {
            out.add_term(b.clone(), v * c, trunc);
        }
    }
    out.prune(trunc.prune_eps);
    Ok(out)
}

/// Conversion to covariantly normalized operators
/// `a_k = sqrt(2ω_k(2π)³/δV) â_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderConvention {
    cell_volume: f64,
}

impl LadderConvention {
    pub fn new(cell_volume: f64) -> Result<Self> {
        if !(cell_volume > 0.0) || !cell_volume.is_finite() {
            return Err(Error::InvalidParameter("mode cell volume must be positive"));
        }
        Ok(LadderConvention { cell_volume })
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    pub fn factor(&self, k: &ModeLabel) -> f64 {
        (2.0 * k.omega() * (2.0 * PI).powi(3) / self.cell_volume).sqrt()
    }

    pub fn apply(&self, s: &FockState, k: &ModeLabel, kind: LadderKind, trunc: &Truncation) -> Result<FockState> {
        Ok(apply_ladder(s, k, kind, trunc)?.scale(Complex64::new(self.factor(k), 0.0)))
    }
}

/// Max over `states` of `‖([â_k, â†_l] − δ_kl) s‖_∞`, each state being at
/// least one particle below the cap.
pub fn commutator_residual(k: &ModeLabel, l: &ModeLabel, states: &[FockState], trunc: &Truncation) -> Result<f64> {
    let delta = if k.same_mode(l, trunc.label_tol) { 1.0 } else { 0.0 };
    let ak_adl = LadderString(alloc::vec![Ladder::annihilate(*k), Ladder::create(*l)]);
    let adl_ak = LadderString(alloc::vec![Ladder::create(*l), Ladder::annihilate(*k)]);
    let mut worst: f64 = 0.0;
    for s in states {
        let lhs = ak_adl.apply(s, trunc)?.axpy(Complex64::new(-1.0, 0.0), &adl_ak.apply(s, trunc)?, trunc);
        let rhs = s.scale(Complex64::new(delta, 0.0));
        worst = worst.max(lhs.max_diff(&rhs, trunc.label_tol));
    }
    Ok(worst)
}
