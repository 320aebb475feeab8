//! Boost representation `U(Λ)` on twin states.
//!
//! Each product basis state `|n⟩ ⊗ ⟨m|` is written as a string of
//! creation-type generators (`â†_k ⊗ 1` on the ket side, `1 ⊗ â*_k` on the
//! bra side) acting on the twin vacuum. A boost maps every generator on its
//! own: a mode whose energy sign survives keeps its side and takes the
//! boosted momentum; a mode whose energy flips moves to the other side with
//! momentum `l′ = spatial(−Λk)`. The mapped string is applied to the twin
//! vacuum, which is itself invariant. No extra phases are attached.
//!
//! The mapping sends distinct basis pairs to distinct basis pairs, so on
//! truncated sectors it is a permutation and hence unitary.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fock::{FockState, Ladder, LadderString, OccBasisState, Truncation};
use crate::kinematics::{classify_mode_boost, BoostAction, LorentzTransform, ModeLabel};
use crate::twinspace::{apply_twin_operator, twin_distance, twin_inner_product, BasisPair, TwinOperator, TwinState};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Ket,
    Bra,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Ket => Side::Bra,
            Side::Bra => Side::Ket,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Generator {
    pub side: Side,
    pub label: ModeLabel,
}

/// Creation-type generators applied to `|0⟩ ⊗ ⟨0|`, with the scalar that
/// normalizes the resulting basis pair.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorString {
    pub generators: Vec<Generator>,
    pub scale: f64,
}

impl GeneratorString {
    /// `|n⟩ ⊗ ⟨m| = (Π n! Π m!)^{−1/2} Π â† ⊗ Π â* |0⟩ ⊗ ⟨0|`.
    pub fn from_pair(ket: &OccBasisState, bra: &OccBasisState) -> Self {
        let (kw, ks) = ket.creation_word();
        let (bw, bs) = bra.creation_word();
        let generators = kw
            .into_iter()
            .map(|label| Generator { side: Side::Ket, label })
            .chain(bw.into_iter().map(|label| Generator { side: Side::Bra, label }))
            .collect();
        GeneratorString { generators, scale: ks * bs }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Maps each generator under the classified boost.
    pub fn boosted(&self, actions: &mut BoostCache<'_>) -> Result<GeneratorString> {
        let mut generators = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let mapped = match actions.classify(&g.label)? {
                BoostAction::Preserved(l) => Generator { side: g.side, label: l },
                BoostAction::Flipped(l) => Generator { side: g.side.other(), label: l },
            };
            generators.push(mapped);
        }
        Ok(GeneratorString { generators, scale: self.scale })
    }

    /// Applies the string to the twin vacuum. Overflow is checked per side.
    pub fn to_twin(&self, coeff: Complex64, trunc: &Truncation) -> Result<TwinState> {
        let word = |side: Side| {
            LadderString(self.generators.iter().filter(|g| g.side == side).map(|g| Ladder::create(g.label)).collect())
        };
        let ket = word(Side::Ket).apply(&FockState::vacuum(), trunc)?;
        let bra = word(Side::Bra).apply(&FockState::vacuum(), trunc)?;
        Ok(TwinState::separable(coeff * self.scale, ket, bra))
    }
}

/// Memoized classification of labels under one boost.
pub struct BoostCache<'a> {
    boost: &'a LorentzTransform,
    seen: BTreeMap<ModeLabel, BoostAction>,
}

impl<'a> BoostCache<'a> {
    pub fn new(boost: &'a LorentzTransform) -> Self {
        BoostCache { boost, seen: BTreeMap::new() }
    }

    pub fn classify(&mut self, k: &ModeLabel) -> Result<BoostAction> {
        if let Some(a) = self.seen.get(k) {
            return Ok(*a);
        }
        let a = classify_mode_boost(self.boost, k)?;
        self.seen.insert(*k, a);
        Ok(a)
    }
}

/// `U(Λ) s`.
pub fn represent_boost(l: &LorentzTransform, s: &TwinState, trunc: &Truncation) -> Result<TwinState> {
    let mut cache = BoostCache::new(l);
    let mut out = TwinState::zero();
    for BasisPair { ket, bra, coeff } in s.basis_pairs(trunc) {
        let mapped = GeneratorString::from_pair(&ket, &bra).boosted(&mut cache)?;
        for t in mapped.to_twin(coeff, trunc)?.terms() {
            out.push(t.clone());
        }
    }
    Ok(out.canonical(trunc))
}

/// `‖U(Λ)|0⟩⊗⟨0| − |0⟩⊗⟨0|‖`.
pub fn vacuum_invariance_check(l: &LorentzTransform, trunc: &Truncation) -> Result<f64> {
    let v = TwinState::vacuum();
    Ok(twin_distance(&represent_boost(l, &v, trunc)?, &v, trunc))
}

/// Max residual of `U(Λ) ĉ_k U(Λ)⁻¹ s` against `ĉ_l s` (sign preserved) or
/// `ĉ†_{l′} s` (sign flipped) over the given states.
pub fn c_operator_transform_check(
    l: &LorentzTransform,
    k: &ModeLabel,
    test_states: &[TwinState],
    trunc: &Truncation,
) -> Result<f64> {
    let target = match classify_mode_boost(l, k)? {
        BoostAction::Preserved(p) => TwinOperator::c(p),
        BoostAction::Flipped(p) => TwinOperator::c_dagger(p),
    };
    let c_k = TwinOperator::c(*k);
    let inv = l.inverse();
    let mut worst: f64 = 0.0;
    for s in test_states {
        let pulled = represent_boost(&inv, s, trunc)?;
        let lhs = represent_boost(l, &apply_twin_operator(&c_k, &pulled, trunc)?, trunc)?;
        let rhs = apply_twin_operator(&target, s, trunc)?;
        worst = worst.max(twin_distance(&lhs, &rhs, trunc));
    }
    Ok(worst)
}

/// Image of `â_k ⊗ 1` (or `â†_k ⊗ 1`) under the boost.
pub fn transformed_ket_ladder(l: &LorentzTransform, op: Ladder) -> Result<TwinOperator> {
    Ok(match classify_mode_boost(l, &op.label)? {
        BoostAction::Preserved(p) => TwinOperator::ket(Ladder { kind: op.kind, label: p }),
        // â_k ⊗ 1 ↦ 1 ⊗ â*†_{l′} and â†_k ⊗ 1 ↦ 1 ⊗ â*_{l′}; both act on the
        // stored bra vector with the same ladder kind.
        BoostAction::Flipped(p) => TwinOperator::bra(Ladder { kind: op.kind, label: p }),
    })
}

/// Basis pairs with up to two quanta of each listed label and at most
/// `per_side` quanta on each side.
pub fn probe_family(labels: &[ModeLabel], per_side: u32, trunc: &Truncation) -> Result<Vec<TwinState>> {
    let cap = per_side;
    let mut occs: Vec<OccBasisState> = alloc::vec![OccBasisState::vacuum()];
    for k in labels {
        let mut next = Vec::new();
        for b in &occs {
            for n in 0..=2u32 {
                if b.total() + n > cap {
                    break;
                }
                let mut occ: Vec<(ModeLabel, u32)> = b.modes().to_vec();
                occ.push((*k, n));
                next.push(OccBasisState::from_occupancies(occ, trunc)?);
            }
        }
        next.dedup();
        occs = next;
    }
    let one = Complex64::new(1.0, 0.0);
    let mut out = Vec::new();
    for kb in &occs {
        for bb in &occs {
            out.push(TwinState::separable(one, FockState::basis(kb.clone()), FockState::basis(bb.clone())));
        }
    }
    Ok(out)
}

/// Max residual of `[U â_k U⁻¹, U â†_l U⁻¹] − δ_kl` on a probe family over
/// the transformed labels.
pub fn commutation_preservation_check(l: &LorentzTransform, k: &ModeLabel, q: &ModeLabel, trunc: &Truncation) -> Result<f64> {
    let a = transformed_ket_ladder(l, Ladder::annihilate(*k))?;
    let b = transformed_ket_ladder(l, Ladder::create(*q))?;
    let labels: Vec<ModeLabel> = [&a, &b]
        .iter()
        .flat_map(|o| o.terms.iter().flat_map(|t| t.ket_op.0.iter().chain(&t.bra_op.0)))
        .map(|op| op.label)
        .collect();
    let family = probe_family(&labels, trunc.n_max.saturating_sub(1), trunc)?;
    let delta = if k.same_mode(q, trunc.label_tol) { 1.0 } else { 0.0 };
    let comm = a.commutator(&b);
    let mut worst: f64 = 0.0;
    for s in &family {
        let lhs = apply_twin_operator(&comm, s, trunc)?;
        worst = worst.max(twin_distance(&lhs, &s.scale(Complex64::new(delta, 0.0)), trunc));
    }
    Ok(worst)
}

/// Max deviation of the twin inner products `⟨⟨a|b⟩⟩` after the boost,
/// over all ordered pairs of `states`.
pub fn unitarity_residual(l: &LorentzTransform, states: &[TwinState], trunc: &Truncation) -> Result<f64> {
    let boosted: Vec<TwinState> = states.iter().map(|s| represent_boost(l, s, trunc)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let before = twin_inner_product(a, b, trunc);
            let after = twin_inner_product(&boosted[i], &boosted[j], trunc);
            worst = worst.max((before - after).norm());
        }
    }
    Ok(worst)
}

/// Outcome of boosting `(|0⟩⊗⟨ξ₁| + |0⟩⊗⟨ξ₂|)/√2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SuperpositionDemo {
    pub before: TwinState,
    pub after: TwinState,
    pub rank_before: usize,
    pub rank_after: usize,
}

/// Boosts the superposition of two one-particle bras. With `ξ₁` preserved
/// and `ξ₂` flipped the result is `(|0⟩⊗⟨ξ′₁| + |ξ′₂⟩⊗⟨0|)/√2`.
pub fn superposition_demo(
    l: &LorentzTransform,
    xi1: &ModeLabel,
    xi2: &ModeLabel,
    schmidt_tol: f64,
    trunc: &Truncation,
) -> Result<SuperpositionDemo> {
    if xi1.same_mode(xi2, trunc.label_tol) {
        return Err(Error::InvalidParameter("superposition needs two distinct modes"));
    }
    let r = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let bra = FockState::one(*xi1).axpy(Complex64::new(1.0, 0.0), &FockState::one(*xi2), trunc).scale(r);
    let before = TwinState::separable(Complex64::new(1.0, 0.0), FockState::vacuum(), bra);
    let after = represent_boost(l, &before, trunc)?;
    Ok(SuperpositionDemo {
        rank_before: crate::twinspace::schmidt_rank(&before, schmidt_tol, trunc),
        rank_after: crate::twinspace::schmidt_rank(&after, schmidt_tol, trunc),
        before,
        after,
    })
}
