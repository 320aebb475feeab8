//! The twin space `F ⊗ F*`.
//!
//! A [`TwinState`] is a finite sum `Σ_j α_j |ψ_j⟩ ⊗ ⟨ξ_j|`. The bra factor is
//! stored as the ket `|ξ_j⟩` it is the adjoint of, so a dual operator `Ô*`
//! is realized by acting on that stored vector. In particular the dual
//! creation operator `â*_k`, with `â*_k ⟨0| = ⟨1_k|`, acts on the stored
//! vector as `â†_k`, and `â*†_k` acts as `â_k`.
//!
//! Viewing a twin state as the operator `X = Σ α |ψ⟩⟨ξ|`, a term
//! `c · Ô₁ ⊗ Ô₂^{†*}` acts as `X ↦ c Ô₁ X Ô₂†`, the trace functional is
//! `Tr X`, and the twin inner product is the Hilbert–Schmidt product.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::fock::{inner_product_tol, FockState, Ladder, LadderString, OccBasisState, Truncation};
use crate::kinematics::ModeLabel;
use crate::linalg::singular_values;
use crate::modes::{SpacetimePoint, WavePacket};
use crate::Result;

pub const DEFAULT_SCHMIDT_TOL: f64 = 1e-10;

/// One separable term `α |ket⟩ ⊗ ⟨bra|`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwinTerm {
    pub alpha: Complex64,
    pub ket: FockState,
    /// The vector whose adjoint is the bra factor.
    pub bra: FockState,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwinState {
    terms: Vec<TwinTerm>,
}

/// Coefficient of `|n⟩ ⊗ ⟨m|` in the product occupation basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisPair {
    pub ket: OccBasisState,
    pub bra: OccBasisState,
    pub coeff: Complex64,
}

impl TwinState {
    pub fn zero() -> Self {
        TwinState { terms: Vec::new() }
    }

    /// `|0⟩ ⊗ ⟨0|`.
    pub fn vacuum() -> Self {
        Self::separable(Complex64::new(1.0, 0.0), FockState::vacuum(), FockState::vacuum())
    }

    pub fn separable(alpha: Complex64, ket: FockState, bra: FockState) -> Self {
        TwinState { terms: alloc::vec![TwinTerm { alpha, ket, bra }] }
    }

    pub fn from_terms(terms: Vec<TwinTerm>) -> Self {
        TwinState { terms }
    }

    /// Rebuilds a state from basis-pair coefficients.
    pub fn from_pairs<I: IntoIterator<Item = BasisPair>>(pairs: I) -> Self {
        let terms = pairs
            .into_iter()
            .map(|p| TwinTerm { alpha: p.coeff, ket: FockState::basis(p.ket), bra: FockState::basis(p.bra) })
            .collect();
        TwinState { terms }
    }

    pub fn terms(&self) -> &[TwinTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: TwinTerm) {
        self.terms.push(term);
    }

    pub fn scale(&self, c: Complex64) -> TwinState {
        TwinState { terms: self.terms.iter().map(|t| TwinTerm { alpha: t.alpha * c, ..t.clone() }).collect() }
    }

    /// `self + c·other` as a concatenated term list.
    pub fn add_scaled(&self, c: Complex64, other: &TwinState) -> TwinState {
        let mut terms = self.terms.clone();
        terms.extend(other.scale(c).terms);
        TwinState { terms }
    }

    /// Drops terms with `|α|·‖ket‖·‖bra‖ < eps`.
    pub fn trim(&mut self, eps: f64) {
        self.terms.retain(|t| t.alpha.norm() * t.ket.norm() * t.bra.norm() >= eps);
    }

    /// Expansion over the product basis, `a_nm = Σ_j α_j ψ_jn conj(ξ_jm)`,
    /// merging labels within `trunc.label_tol` and dropping coefficients
    /// below `trunc.prune_eps`.
    pub fn basis_pairs(&self, trunc: &Truncation) -> Vec<BasisPair> {
        let mut out: Vec<BasisPair> = Vec::new();
        for t in &self.terms {
            for (kb, kc) in t.ket.iter() {
                for (bb, bc) in t.bra.iter() {
                    let c = t.alpha * kc * bc.conj();
                    let slot = out.iter_mut().find(|p| {
                        (p.ket == *kb || p.ket.approx_eq(kb, trunc.label_tol))
                            && (p.bra == *bb || p.bra.approx_eq(bb, trunc.label_tol))
                    });
                    match slot {
                        Some(p) => p.coeff += c,
                        None => out.push(BasisPair { ket: kb.clone(), bra: bb.clone(), coeff: c }),
                    }
                }
            }
        }
        out.retain(|p| p.coeff.norm() >= trunc.prune_eps);
        out
    }

    /// Same state with one term per basis pair.
    pub fn canonical(&self, trunc: &Truncation) -> TwinState {
        TwinState::from_pairs(self.basis_pairs(trunc))
    }
}

/// `Σ_j α_j ⟨ξ_j|ψ_j⟩`.
pub fn trace_functional(s: &TwinState) -> Complex64 {
    trace_functional_tol(s, crate::kinematics::DEFAULT_LABEL_TOL)
}

pub fn trace_functional_tol(s: &TwinState, tol: f64) -> Complex64 {
    s.terms().iter().map(|t| t.alpha * inner_product_tol(&t.bra, &t.ket, tol)).sum()
}

/// Hilbert–Schmidt product `Σ conj(a_nm) b_nm`.
pub fn twin_inner_product(a: &TwinState, b: &TwinState, trunc: &Truncation) -> Complex64 {
    let bp = b.basis_pairs(trunc);
    let mut acc = Complex64::zero();
    for p in a.basis_pairs(trunc) {
        if let Some(q) = bp.iter().find(|q| q.ket.approx_eq(&p.ket, trunc.label_tol) && q.bra.approx_eq(&p.bra, trunc.label_tol)) {
            acc += p.coeff.conj() * q.coeff;
        }
    }
    acc
}

pub fn twin_norm(s: &TwinState, trunc: &Truncation) -> f64 {
    s.basis_pairs(trunc).iter().map(|p| p.coeff.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest basis-pair coefficient difference.
pub fn twin_distance(a: &TwinState, b: &TwinState, trunc: &Truncation) -> f64 {
    let diff = a.add_scaled(Complex64::new(-1.0, 0.0), b);
    let loose = Truncation { prune_eps: 0.0, ..*trunc };
    diff.basis_pairs(&loose).iter().map(|p| p.coeff.norm()).fold(0.0, f64::max)
}

/// Number of singular values of the pair-coefficient matrix above
/// `tol · σ_max`. The zero state has rank 0.
pub fn schmidt_rank(s: &TwinState, tol: f64, trunc: &Truncation) -> usize {
    let pairs = s.basis_pairs(trunc);
    let mut rows: Vec<&OccBasisState> = Vec::new();
    let mut cols: Vec<&OccBasisState> = Vec::new();
    for p in &pairs {
        if !rows.iter().any(|r| r.approx_eq(&p.ket, trunc.label_tol)) {
            rows.push(&p.ket);
        }
        if !cols.iter().any(|c| c.approx_eq(&p.bra, trunc.label_tol)) {
            cols.push(&p.bra);
        }
    }
    if rows.is_empty() {
        return 0;
    }
    let mut m = alloc::vec![Complex64::zero(); rows.len() * cols.len()];
    for p in &pairs {
        let i = rows.iter().position(|r| r.approx_eq(&p.ket, trunc.label_tol)).unwrap_or(0);
        let j = cols.iter().position(|c| c.approx_eq(&p.bra, trunc.label_tol)).unwrap_or(0);
        m[i * cols.len() + j] += p.coeff;
    }
    let sv = singular_values(&m, rows.len(), cols.len());
    let top = sv.first().copied().unwrap_or(0.0);
    if !(top > 0.0) {
        return 0;
    }
    sv.iter().filter(|x| **x > tol * top).count()
}

/// `coeff · Ô₁ ⊗ Ô₂^{†*}`: `ket_op = Ô₁` acts on kets, `bra_op = Ô₂` acts
/// on the stored bra vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwinOperatorTerm {
    pub coeff: Complex64,
    pub ket_op: LadderString,
    pub bra_op: LadderString,
}

impl TwinOperatorTerm {
    /// Hilbert–Schmidt adjoint of the term.
    pub fn adjoint(&self) -> TwinOperatorTerm {
        TwinOperatorTerm { coeff: self.coeff.conj(), ket_op: self.ket_op.adjoint(), bra_op: self.bra_op.adjoint() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwinOperator {
    pub terms: Vec<TwinOperatorTerm>,
}

impl TwinOperator {
    pub fn identity() -> Self {
        TwinOperator {
            terms: alloc::vec![TwinOperatorTerm {
                coeff: Complex64::new(1.0, 0.0),
                ket_op: LadderString::identity(),
                bra_op: LadderString::identity(),
            }],
        }
    }

    /// `Ô ⊗ 1` for a single ladder operator.
    pub fn ket(op: Ladder) -> Self {
        TwinOperator {
            terms: alloc::vec![TwinOperatorTerm {
                coeff: Complex64::new(1.0, 0.0),
                ket_op: LadderString::single(op),
                bra_op: LadderString::identity(),
            }],
        }
    }

    /// `1 ⊗ Ô^{†*}`, i.e. `op` acting on the stored bra vector.
    pub fn bra(op: Ladder) -> Self {
        TwinOperator {
            terms: alloc::vec![TwinOperatorTerm {
                coeff: Complex64::new(1.0, 0.0),
                ket_op: LadderString::identity(),
                bra_op: LadderString::single(op),
            }],
        }
    }

    /// Dual creation `1 ⊗ â*_k`.
    pub fn dual_create(k: ModeLabel) -> Self {
        Self::bra(Ladder::create(k))
    }

    /// Dual annihilation `1 ⊗ â*†_k`.
    pub fn dual_annihilate(k: ModeLabel) -> Self {
        Self::bra(Ladder::annihilate(k))
    }

    /// `ĉ_k = â_k ⊗ 1 + 1 ⊗ â*_k`.
    pub fn c(k: ModeLabel) -> Self {
        Self::ket(Ladder::annihilate(k)).plus(&Self::dual_create(k))
    }

    /// `ĉ†_k = â†_k ⊗ 1 + 1 ⊗ â*†_k`.
    pub fn c_dagger(k: ModeLabel) -> Self {
        Self::c(k).adjoint()
    }

    pub fn plus(&self, other: &TwinOperator) -> TwinOperator {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TwinOperator { terms }
    }

    pub fn scale(&self, c: Complex64) -> TwinOperator {
        TwinOperator { terms: self.terms.iter().map(|t| TwinOperatorTerm { coeff: t.coeff * c, ..t.clone() }).collect() }
    }

    pub fn adjoint(&self) -> TwinOperator {
        TwinOperator { terms: self.terms.iter().map(TwinOperatorTerm::adjoint).collect() }
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &TwinOperator) -> TwinOperator {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(TwinOperatorTerm {
                    coeff: a.coeff * b.coeff,
                    ket_op: a.ket_op.then_after(&b.ket_op),
                    bra_op: a.bra_op.then_after(&b.bra_op),
                });
            }
        }
        TwinOperator { terms }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &TwinOperator) -> TwinOperator {
        self.compose(other).plus(&other.compose(self).scale(Complex64::new(-1.0, 0.0)))
    }
}

pub fn apply_twin_operator(o: &TwinOperator, s: &TwinState, trunc: &Truncation) -> Result<TwinState> {
    let mut out = TwinState::zero();
    for op in &o.terms {
        for t in s.terms() {
            let ket = op.ket_op.apply(&t.ket, trunc)?;
            if ket.is_empty() {
                continue;
            }
            let bra = op.bra_op.apply(&t.bra, trunc)?;
            if bra.is_empty() {
                continue;
            }
            out.push(TwinTerm { alpha: t.alpha * op.coeff, ket, bra });
        }
    }
    out.trim(trunc.prune_eps);
    Ok(out)
}

/// `Σ_i c_i Ô₂,ᵢ† Ô₁,ᵢ` acting on `F`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReducedOperator {
    pub terms: Vec<(Complex64, LadderString)>,
}

impl ReducedOperator {
    pub fn apply(&self, s: &FockState, trunc: &Truncation) -> Result<FockState> {
        let mut out = FockState::zero();
        for (c, word) in &self.terms {
            out = out.axpy(*c, &word.apply(s, trunc)?, trunc);
        }
        Ok(out)
    }

    /// `Σ_j α_j ⟨ξ_j| R |ψ_j⟩`.
    pub fn expectation(&self, s: &TwinState, trunc: &Truncation) -> Result<Complex64> {
        let mut acc = Complex64::zero();
        for t in s.terms() {
            acc += t.alpha * inner_product_tol(&t.bra, &self.apply(&t.ket, trunc)?, trunc.label_tol);
        }
        Ok(acc)
    }
}

pub fn reduce_to_fock(o: &TwinOperator) -> ReducedOperator {
    ReducedOperator { terms: o.terms.iter().map(|t| (t.coeff, t.bra_op.adjoint().then_after(&t.ket_op))).collect() }
}

/// `Φ = ½(φ ⊗ 1 + 1 ⊗ φ*)` for the smeared field of `packet` at `x`.
///
/// The dual part acts on bras as `⟨ξ| ↦ ⟨ξ|φ`: each field component
/// `c L` contributes a term with coefficient `c` and `L†` on the stored
/// bra vector.
pub fn twin_field(packet: &WavePacket, x: SpacetimePoint) -> TwinOperator {
    let half = Complex64::new(0.5, 0.0);
    let mut terms = Vec::new();
    for (c, op) in crate::fock::smeared_field_terms(packet, x) {
        terms.push(TwinOperatorTerm { coeff: c * half, ket_op: LadderString::single(op), bra_op: LadderString::identity() });
        terms.push(TwinOperatorTerm { coeff: c * half, ket_op: LadderString::identity(), bra_op: LadderString::single(op.adjoint()) });
    }
    TwinOperator { terms }
}
