//! Plane-wave mode functions `u_k(t, r) = e^{i(k·r − ω_k t)} / ((2π)³ 2ω_k)`,
//! their Wronskian, and pointwise checks of the boost law for modes.
//!
//! The normalization is kept exactly as above (prefactor outside any square
//! root). With it the Wronskian `(u_k, u_k)` in a box of side `L` is
//! `L³ / ((2π)⁶ 2ω_k)` rather than one; see [`box_norm`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::kinematics::{classify_mode_boost, dot3, BoostAction, FourVector, LorentzTransform, ModeLabel, DEFAULT_LABEL_TOL};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: [f64; 3],
}

impl SpacetimePoint {
    pub const fn new(t: f64, r: [f64; 3]) -> Self {
        SpacetimePoint { t, r }
    }

    pub fn to_four_vector(self) -> FourVector {
        FourVector::from_parts(self.t, self.r)
    }

    pub fn from_four_vector(v: FourVector) -> Self {
        SpacetimePoint { t: v.t, r: v.spatial() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketTerm {
    pub coeff: Complex64,
    pub label: ModeLabel,
    /// Use `u*_k` instead of `u_k`.
    pub conjugated: bool,
}

/// Finite superposition `Σ c_j u_{k_j}` (or `u*_{k_j}`).
#[derive(Clone, Debug, PartialEq)]
pub struct WavePacket {
    terms: Vec<PacketTerm>,
}

impl WavePacket {
    pub fn new(terms: Vec<PacketTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyPacket);
        }
        Ok(WavePacket { terms })
    }

    pub fn mode(label: ModeLabel) -> Self {
        Self::single(Complex64::new(1.0, 0.0), label, false)
    }

    pub fn single(coeff: Complex64, label: ModeLabel, conjugated: bool) -> Self {
        WavePacket { terms: alloc::vec![PacketTerm { coeff, label, conjugated }] }
    }

    pub fn terms(&self) -> &[PacketTerm] {
        &self.terms
    }

    /// Term-wise complex conjugate, `f ↦ f*`.
    pub fn conj(&self) -> WavePacket {
        let terms = self
            .terms
            .iter()
            .map(|t| PacketTerm { coeff: t.coeff.conj(), label: t.label, conjugated: !t.conjugated })
            .collect();
        WavePacket { terms }
    }

    pub fn value(&self, x: SpacetimePoint) -> Complex64 {
        self.terms.iter().map(|t| t.coeff * term_value(t, x)).sum()
    }

    pub fn time_derivative(&self, x: SpacetimePoint) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let w = t.label.omega();
                let freq = if t.conjugated { Complex64::new(0.0, w) } else { Complex64::new(0.0, -w) };
                t.coeff * freq * term_value(t, x)
            })
            .sum()
    }
}

fn term_value(t: &PacketTerm, x: SpacetimePoint) -> Complex64 {
    let u = mode_value(&t.label, x);
    if t.conjugated {
        u.conj()
    } else {
        u
    }
}

/// `1 / ((2π)³ 2ω_k)`.
pub fn mode_prefactor(k: &ModeLabel) -> f64 {
    1.0 / ((2.0 * PI).powi(3) * 2.0 * k.omega())
}

pub fn mode_value(k: &ModeLabel, x: SpacetimePoint) -> Complex64 {
    let phase = dot3(k.momentum(), x.r) - k.omega() * x.t;
    Complex64::from_polar(mode_prefactor(k), phase)
}

/// Central-difference estimate of `(∂t² − ∇² − m²) u_k` at `x`.
pub fn kg_residual(k: &ModeLabel, x: SpacetimePoint, h: f64) -> Complex64 {
    let u0 = mode_value(k, x);
    let shifted = |dt: f64, axis: Option<usize>, d: f64| {
        let mut p = x;
        p.t += dt;
        if let Some(i) = axis {
            p.r[i] += d;
        }
        mode_value(k, p)
    };
    let second = |plus: Complex64, minus: Complex64| (plus - u0 * 2.0 + minus) / (h * h);
    let d2t = second(shifted(h, None, 0.0), shifted(-h, None, 0.0));
    let lap: Complex64 = (0..3).map(|i| second(shifted(0.0, Some(i), h), shifted(0.0, Some(i), -h))).sum();
    let m = k.mass();
    d2t - lap - u0 * (m * m)
}

/// `(u_k, u_k) = L³ / ((2π)⁶ 2ω_k)` for the box of side `box_length`.
pub fn box_norm(k: &ModeLabel, box_length: f64) -> f64 {
    box_length.powi(3) / ((2.0 * PI).powi(6) * 2.0 * k.omega())
}

fn mode_index(value: f64, box_length: f64, component: usize) -> Result<i64> {
    let n = value * box_length / (2.0 * PI);
    let rounded = n.round();
    if (n - rounded).abs() > DEFAULT_LABEL_TOL * n.abs().max(1.0) {
        return Err(Error::IncommensurateMode { component, value });
    }
    Ok(rounded as i64)
}

/// Wronskian `(f, g) = i ∫ d³r (f* ∂t g − (∂t f)* g)` at `t = 0` over a
/// periodic box of side `box_length`, summed on a uniform grid.
///
/// Every wave vector must be a multiple of `2π / box_length`; the grid must
/// hold at least `2·max|n| + 1` points per axis so that all products of two
/// plane waves are summed without aliasing, which makes the sum exact.
pub fn wronskian(f: &WavePacket, g: &WavePacket, box_length: f64, grid_points: usize) -> Result<Complex64> {
    if !(box_length > 0.0) {
        return Err(Error::InvalidParameter("box length must be positive"));
    }
    let mut max_index = 0i64;
    for term in f.terms().iter().chain(g.terms()) {
        for (c, v) in term.label.momentum().iter().enumerate() {
            max_index = max_index.max(mode_index(*v, box_length, c)?.abs());
        }
    }
    if (grid_points as i64) < 2 * max_index + 1 {
        return Err(Error::InsufficientGrid { grid_points, max_index });
    }
    let h = box_length / grid_points as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..grid_points {
        for j in 0..grid_points {
            for l in 0..grid_points {
                let x = SpacetimePoint::new(0.0, [i as f64 * h, j as f64 * h, l as f64 * h]);
                acc += f.value(x).conj() * g.time_derivative(x) - f.time_derivative(x).conj() * g.value(x);
            }
        }
    }
    Ok(Complex64::new(0.0, 1.0) * acc * h.powi(3))
}

/// Comparison of `u_k(Λ⁻¹x)` against the boosted mode at `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeBoostResidual {
    pub action: BoostAction,
    /// `|u_k(Λ⁻¹x) − v(x) · ω_l/ω_k|` with `v = u_l` or `u*_{l′}`.
    pub residual: f64,
    /// Wrapped difference of the complex arguments, in radians.
    pub phase_residual: f64,
    /// `ω_l / ω_k`: the ratio of the `1/(2ω)` prefactors that the bare
    /// mode mapping does not account for.
    pub prefactor_ratio: f64,
}

pub fn mode_boost_residual(l: &LorentzTransform, k: &ModeLabel, x: SpacetimePoint) -> Result<ModeBoostResidual> {
    let action = classify_mode_boost(l, k)?;
    let source = SpacetimePoint::from_four_vector(l.inverse().apply(x.to_four_vector()));
    let lhs = mode_value(k, source);
    let rhs = match action {
        BoostAction::Preserved(ref p) => mode_value(p, x),
        BoostAction::Flipped(ref p) => mode_value(p, x).conj(),
    };
    let ratio = action.label().omega() / k.omega();
    Ok(ModeBoostResidual {
        action,
        residual: (lhs - rhs * ratio).norm(),
        phase_residual: wrap_angle(lhs.arg() - rhs.arg()).abs(),
        prefactor_ratio: ratio,
    })
}

fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let r = a - two_pi * (a / two_pi).round();
    if r > PI {
        r - two_pi
    } else {
        r
    }
}
