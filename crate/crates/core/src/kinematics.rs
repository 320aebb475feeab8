//! Minkowski geometry, pure boosts, and on-shell tachyon mode labels.
//!
//! The metric is `(+,−,−,−)` throughout. With that choice the tachyon mass
//! shell reads `k·k = −m²` and the propagator pole sits at `k² + m² = 0`.
//! Readers used to the mostly-plus convention should flip the sign of every
//! `minkowski_dot`.

use core::cmp::Ordering;
use core::ops::{Add, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Relative margin by which a user-supplied `|k|` must exceed `m`.
pub const DEFAULT_SHELL_MARGIN: f64 = 1e-6;
/// A boosted mode with `|(Λk)⁰| ≤ DEFAULT_DEGENERACY · m` is rejected.
pub const DEFAULT_DEGENERACY: f64 = 1e-9;
/// Relative tolerance under which two mode labels are the same mode.
pub const DEFAULT_LABEL_TOL: f64 = 1e-9;

const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const ZERO: FourVector = FourVector { t: 0.0, x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    pub const fn from_parts(t: f64, r: [f64; 3]) -> Self {
        FourVector { t, x: r[0], y: r[1], z: r[2] }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        FourVector::new(a[0], a[1], a[2], a[3])
    }

    pub fn spatial(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(self, other: FourVector) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn spatial_norm(self) -> f64 {
        norm3(self.spatial())
    }

    /// Largest absolute component; the natural scale for zero tests.
    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

/// `a⁰b⁰ − a·b`.
pub fn minkowski_dot(a: FourVector, b: FourVector) -> f64 {
    a.t * b.t - (a.x * b.x + a.y * b.y + a.z * b.z)
}

pub(crate) fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// A proper orthochronous Lorentz transformation acting on contravariant
/// components `(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzTransform {
    m: [[f64; 4]; 4],
}

impl LorentzTransform {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzTransform { m }
    }

    /// Wraps a matrix after checking `MᵀηM = η`, `det M = +1` and `M⁰⁰ ≥ 1`.
    pub fn from_matrix(m: [[f64; 4]; 4], tol: f64) -> Result<Self> {
        let l = LorentzTransform { m };
        if l.metric_defect() > tol || (l.determinant() - 1.0).abs() > tol.max(1e-9) || m[0][0] < 1.0 - tol {
            return Err(Error::InvalidParameter("matrix is not a proper orthochronous Lorentz transformation"));
        }
        Ok(l)
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn apply(&self, v: FourVector) -> FourVector {
        let a = v.to_array();
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(self.m.iter()) {
            *o = row[0] * a[0] + row[1] * a[1] + row[2] * a[2] + row[3] * a[3];
        }
        FourVector::from_array(out)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &LorentzTransform) -> LorentzTransform {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..4).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        LorentzTransform { m }
    }

    /// `η Mᵀ η`, exact for any matrix preserving the metric.
    pub fn inverse(&self) -> LorentzTransform {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = METRIC[i] * self.m[j][i] * METRIC[j];
            }
        }
        LorentzTransform { m }
    }

    pub fn gamma(&self) -> f64 {
        self.m[0][0]
    }

    /// Relative speed between the two frames, `sqrt(1 − 1/γ²)`.
    pub fn speed(&self) -> f64 {
        let g = self.gamma();
        (1.0 - 1.0 / (g * g)).max(0.0).sqrt()
    }

    /// Largest entry of `MᵀηM − η`.
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, eta) in METRIC.iter().enumerate() {
            for j in 0..4 {
                let g: f64 = (0..4).map(|k| self.m[k][i] * METRIC[k] * self.m[k][j]).sum();
                let target = if i == j { *eta } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        det4(&self.m)
    }
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let minor = |skip: usize| -> f64 {
        let mut rows = [[0.0; 3]; 3];
        for (r, row) in rows.iter_mut().enumerate() {
            let mut c = 0;
            for (j, v) in m[r + 1].iter().enumerate() {
                if j != skip {
                    row[c] = *v;
                    c += 1;
                }
            }
        }
        rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
    };
    (0..4).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * m[0][j] * minor(j)).sum()
}

/// Pure boost into the frame moving with velocity `speed · direction`.
///
/// `direction` must be a unit vector to within `1e-12`; `|speed| < 1`.
pub fn boost(direction: [f64; 3], speed: f64) -> Result<LorentzTransform> {
    if !speed.is_finite() || speed.abs() >= 1.0 {
        return Err(Error::UnphysicalSpeed(speed));
    }
    let norm = norm3(direction);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitDirection(norm));
    }
    let gamma = 1.0 / (1.0 - speed * speed).sqrt();
    let n = direction;
    let mut m = [[0.0; 4]; 4];
    m[0][0] = gamma;
    for i in 0..3 {
        m[0][i + 1] = -gamma * speed * n[i];
        m[i + 1][0] = -gamma * speed * n[i];
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i + 1][j + 1] = delta + (gamma - 1.0) * n[i] * n[j];
        }
    }
    Ok(LorentzTransform { m })
}

/// Boost along an arbitrary (not necessarily normalized) axis.
pub fn boost_along(axis: [f64; 3], speed: f64) -> Result<LorentzTransform> {
    let norm = norm3(axis);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::NotUnitDirection(norm));
    }
    boost([axis[0] / norm, axis[1] / norm, axis[2] / norm], speed)
}

/// Spatial wave vector of an on-shell tachyon mode, `|k| > m`.
///
/// `omega` is carried alongside `k`. For labels produced by a boost it is the
/// boosted energy itself rather than a recomputed square root, which keeps it
/// accurate near the `|k| = m` sphere.
#[derive(Clone, Copy, Debug)]
pub struct ModeLabel {
    k: [f64; 3],
    mass: f64,
    omega: f64,
}

impl ModeLabel {
    pub fn new(k: [f64; 3], mass: f64) -> Result<Self> {
        Self::with_margin(k, mass, DEFAULT_SHELL_MARGIN)
    }

    pub fn with_margin(k: [f64; 3], mass: f64, margin: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidMass(mass));
        }
        let norm = norm3(k);
        if !norm.is_finite() || norm < mass * (1.0 + margin) || norm <= mass {
            return Err(Error::BelowMassShell { norm, mass });
        }
        let omega = ((norm - mass) * (norm + mass)).sqrt();
        Ok(ModeLabel { k, mass, omega })
    }

    /// Label with a stored energy, as produced by a boost. `omega` must be
    /// positive and satisfy `ω² = |k|² − m²` to `1e−9` relative.
    pub fn with_omega(k: [f64; 3], mass: f64, omega: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidMass(mass));
        }
        let norm = norm3(k);
        let defect = (norm - mass) * (norm + mass) - omega * omega;
        if !(omega > 0.0) || !omega.is_finite() || !(defect.abs() <= 1e-9 * (norm * norm).max(1.0)) {
            return Err(Error::BelowMassShell { norm, mass });
        }
        Ok(ModeLabel { k, mass, omega })
    }

    pub(crate) fn from_on_shell(k: [f64; 3], mass: f64, omega: f64) -> Self {
        debug_assert!(omega > 0.0);
        ModeLabel { k, mass, omega }
    }

    pub fn momentum(&self) -> [f64; 3] {
        self.k
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `|k|² − m² − ω²`, zero for a consistent label.
    pub fn shell_defect(&self) -> f64 {
        dot3(self.k, self.k) - self.mass * self.mass - self.omega * self.omega
    }

    pub fn four_momentum(&self) -> FourVector {
        FourVector::from_parts(self.omega, self.k)
    }

    /// Same mass and `|k₁ − k₂| ≤ tol · max(|k₁|, |k₂|)`.
    pub fn same_mode(&self, other: &ModeLabel, tol: f64) -> bool {
        let scale = norm3(self.k).max(norm3(other.k));
        let d = [self.k[0] - other.k[0], self.k[1] - other.k[1], self.k[2] - other.k[2]];
        (self.mass - other.mass).abs() <= tol * self.mass.max(other.mass) && norm3(d) <= tol * scale
    }

    fn key(&self) -> [f64; 4] {
        [self.mass, self.k[0], self.k[1], self.k[2]]
    }
}

// Exact (bitwise) identity, used for map keys. Physical comparisons go
// through `same_mode`.
impl PartialEq for ModeLabel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ModeLabel {}

impl PartialOrd for ModeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ModeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (self.key(), other.key());
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    }
}

/// Outcome of boosting an on-shell mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoostAction {
    /// `(Λk)⁰ > 0`; carries the spatial part of `Λk`.
    Preserved(ModeLabel),
    /// `(Λk)⁰ < 0`; carries the spatial part of `−Λk`.
    Flipped(ModeLabel),
}

impl BoostAction {
    pub fn label(&self) -> &ModeLabel {
        match self {
            BoostAction::Preserved(l) | BoostAction::Flipped(l) => l,
        }
    }

    pub fn is_flipped(&self) -> bool {
        matches!(self, BoostAction::Flipped(_))
    }
}

pub fn classify_mode_boost(l: &LorentzTransform, k: &ModeLabel) -> Result<BoostAction> {
    classify_mode_boost_with(l, k, DEFAULT_DEGENERACY)
}

/// As [`classify_mode_boost`] with an explicit degeneracy guard (relative to `m`).
pub fn classify_mode_boost_with(l: &LorentzTransform, k: &ModeLabel, degeneracy: f64) -> Result<BoostAction> {
    let p = l.apply(k.four_momentum());
    if p.t.abs() <= degeneracy * k.mass {
        return Err(Error::DegenerateBoost { energy: p.t });
    }
    Ok(if p.t > 0.0 {
        BoostAction::Preserved(ModeLabel::from_on_shell(p.spatial(), k.mass, p.t))
    } else {
        let q = -p;
        BoostAction::Flipped(ModeLabel::from_on_shell(q.spatial(), k.mass, q.t))
    })
}

/// Speed above which a boost along `direction` flips the energy of `k`,
/// i.e. `ω_k / (n̂·k)`, when that lies in `(0, 1)`.
pub fn flip_threshold_speed(k: &ModeLabel, direction: [f64; 3]) -> Option<f64> {
    let n = norm3(direction);
    if !(n > 0.0) {
        return None;
    }
    let along = dot3(direction, k.k) / n;
    let v = k.omega / along;
    (along > 0.0 && v < 1.0).then_some(v)
}
