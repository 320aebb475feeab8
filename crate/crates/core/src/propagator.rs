//! The cut-off Feynman propagator and the Pauli–Jordan function.
//!
//! With the energy integral done by residues,
//!
//! ```text
//! Δ_F(t, r) = ∫_{|k|>m} d³k / ((2π)³ 2ω_k) e^{−iω_k|t| + ik·r}
//!           = 1/(4π² r) ∫_0^∞ dω sin(r k(ω)) e^{−iω|t|},   k(ω) = sqrt(ω² + m²).
//! ```
//!
//! Using `ω` as the variable removes the `1/ω` endpoint singularity at
//! `|k| = m`. The remaining integral is oscillatory and only conditionally
//! summable. It is regularized by a damping factor `w(εk)` and extrapolated
//! to `ε → 0`. Each damped integral is evaluated exactly, without a radial
//! cutoff: Gauss–Legendre panels on `[0, W]` and, beyond `W`, the
//! exponentials of the integrand are continued onto the rays `W ± is` on
//! which they decay (rates `r ∓ |t|` and `r + |t|`). The light cone
//! `r = |t|`, where the integral diverges, is rejected.
//!
//! [`feynman_propagator_oracle`] evaluates the same quantity from the
//! four-dimensional integral: the `k⁰` integral numerically as a principal
//! value plus the Plemelj delta term, then the radial integral on fixed
//! phase-aligned panels at fixed `ε`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::kinematics::{FourVector, LorentzTransform};
use crate::quadrature::{Estimate, GaussLegendre, PanelRule};
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Separation reduced to `(t, |r|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub t: f64,
    pub r: f64,
}

impl Interval {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        if !(r >= 0.0) || !t.is_finite() || !r.is_finite() {
            return Err(Error::InvalidParameter("interval needs finite t and r ≥ 0"));
        }
        Ok(Interval { t, r })
    }

    pub fn from_four_vector(x: FourVector) -> Self {
        Interval { t: x.t, r: x.spatial_norm() }
    }

    pub fn to_four_vector(self) -> FourVector {
        FourVector::new(self.t, self.r, 0.0, 0.0)
    }

    fn check_regular(self) -> Result<()> {
        let scale = self.t.abs().max(self.r);
        if scale == 0.0 || (self.r - self.t.abs()).abs() <= 1e-9 * scale {
            return Err(Error::SingularPoint { t: self.t, r: self.r });
        }
        Ok(())
    }
}

/// Regulator `w(εk)` applied to the radial integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Damping {
    None,
    /// `e^{−x}`.
    Exponential,
    /// `e^{−x} Σ_{j<order} x^j / j!`, flat to `O(x^order)` at the origin.
    Smooth { order: u32 },
}

impl Damping {
    pub fn weight(self, z: Complex64) -> Complex64 {
        match self {
            Damping::None => Complex64::new(1.0, 0.0),
            Damping::Exponential => (-z).exp(),
            Damping::Smooth { order } => {
                let mut term = Complex64::new(1.0, 0.0);
                let mut sum = term;
                for j in 1..order {
                    term = term * z / j as f64;
                    sum += term;
                }
                (-z).exp() * sum
            }
        }
    }

    /// Smallest real `x` beyond which `w(x) < 1e−17`.
    fn support(self) -> f64 {
        let mut x = 1.0;
        while self.weight(Complex64::new(x, 0.0)).re > 1e-17 {
            x *= 1.1;
            if x > 1e4 {
                break;
            }
        }
        x
    }
}

/// Regularization and accuracy settings. The `ε` values are in units of the
/// mass (`ε_j · m`), geometrically spaced from `epsilon_max` to `epsilon_min`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureParams {
    pub epsilon_max: f64,
    pub epsilon_min: f64,
    pub extrapolation_steps: usize,
    pub damping: Damping,
    /// Target relative accuracy of the extrapolated value.
    pub rel_tol: f64,
    /// Absolute tolerance of each damped integral.
    pub abs_tol: f64,
}

impl Default for QuadratureParams {
    fn default() -> Self {
        QuadratureParams {
            epsilon_max: 1e-2,
            epsilon_min: 1e-4,
            extrapolation_steps: 5,
            damping: Damping::Exponential,
            rel_tol: 1e-6,
            abs_tol: 1e-13,
        }
    }
}

impl QuadratureParams {
    pub fn epsilons(&self, m: f64) -> Vec<f64> {
        let n = self.extrapolation_steps.max(1);
        if n == 1 {
            return alloc::vec![self.epsilon_min * m];
        }
        let ratio = (self.epsilon_min / self.epsilon_max).powf(1.0 / (n - 1) as f64);
        (0..n).map(|j| self.epsilon_max * m * ratio.powi(j as i32)).collect()
    }

    fn validate(&self) -> Result<()> {
        let ok = self.epsilon_max > 0.0
            && self.epsilon_min > 0.0
            && self.epsilon_min <= self.epsilon_max
            && self.extrapolation_steps >= 1
            && self.rel_tol > 0.0
            && self.abs_tol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("quadrature parameters out of range"))
        }
    }
}

/// Extrapolated value with its error budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorValue {
    pub value: Complex64,
    /// Extrapolation disagreement plus propagated quadrature error.
    pub error: f64,
    /// `∫|integrand|` of the least-damped evaluation, times the prefactor.
    pub scale: f64,
}

fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        let z2 = z * z;
        Complex64::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// `k sinc(kr) e^{phase}`, with the exponentials combined so that growth of
/// `sin(kr)` off the real axis cannot overflow before the phase damps it.
fn k_sinc_exp(k: Complex64, r: f64, phase: Complex64) -> Complex64 {
    let z = k * r;
    if z.norm() < 1.0 {
        k * sinc(z) * phase.exp()
    } else {
        ((I * z + phase).exp() - (-I * z + phase).exp()) / (2.0 * I * r)
    }
}

fn sqrt_shift(q: Complex64, m: f64) -> Complex64 {
    (q * q + m * m).sqrt()
}

fn split_point(m: f64) -> f64 {
    m.max(1.0)
}

struct Parts {
    est: Estimate,
    abs: f64,
}

fn finite_part<F: FnMut(f64) -> Complex64>(rule: &PanelRule, f: F, w: f64, abs_tol: f64) -> Result<Parts> {
    let mut f = f;
    let mut abs = 0.0;
    let g = GaussLegendre::new(24);
    let pieces = 8;
    for j in 0..pieces {
        let a = w * j as f64 / pieces as f64;
        abs += g.integrate(&mut f, a, a + w / pieces as f64).1;
    }
    let est = rule.adaptive(f, 0.0, w, abs_tol, 4000)?;
    Ok(Parts { est, abs })
}

/// `∫_0^∞ dω sin(r k) e^{−iω|t|} w(εk) / r` (the bracket in the module docs).
fn feynman_integral(x: Interval, m: f64, eps: f64, damping: Damping, abs_tol: f64) -> Result<Parts> {
    let tau = x.t.abs();
    let r = x.r;
    let rule = PanelRule::default();
    let w = split_point(m);
    let damp = |k: Complex64| damping.weight(k * eps);
    let real = |om: f64| {
        let k = (om * om + m * m).sqrt();
        let kc = Complex64::new(k, 0.0);
        kc * sinc(kc * r) * Complex64::from_polar(1.0, -om * tau) * damp(kc)
    };
    let fin = finite_part(&rule, real, w, abs_tol)?;
    let tail = if r > tau {
        let up = rule.half_line(
            |s| {
                let om = Complex64::new(w, s);
                let k = sqrt_shift(om, m);
                (I * r * k - I * om * tau).exp() * damp(k) * (I / (2.0 * I * r))
            },
            1.0 / (r - tau),
            abs_tol,
        )?;
        let down = rule.half_line(
            |s| {
                let om = Complex64::new(w, -s);
                let k = sqrt_shift(om, m);
                -(-I * r * k - I * om * tau).exp() * damp(k) * (-I / (2.0 * I * r))
            },
            1.0 / (r + tau),
            abs_tol,
        )?;
        up + down
    } else {
        rule.half_line(
            |s| {
                let om = Complex64::new(w, -s);
                let k = sqrt_shift(om, m);
                k_sinc_exp(k, r, -I * om * tau) * damp(k) * (-I)
            },
            1.0 / (tau - r),
            abs_tol,
        )?
    };
    Ok(Parts { est: fin.est + tail, abs: fin.abs })
}

/// Polynomial extrapolation of `values(ε_j)` to `ε = 0` (Neville). Returns
/// the value, the difference to the next-lower order, and `Σ|L_j(0)|`.
fn neville_to_zero(eps: &[f64], vals: &[Complex64]) -> (Complex64, f64, f64) {
    let n = eps.len();
    if n == 1 {
        return (vals[0], 0.0, 1.0);
    }
    let mut p: Vec<Complex64> = vals.to_vec();
    let mut lower = p[n - 1];
    for level in 1..n {
        for i in 0..(n - level) {
            let (xi, xj) = (eps[i], eps[i + level]);
            p[i] = (p[i] * (-xj) - p[i + 1] * (-xi)) / (xi - xj);
        }
        if level == n - 2 {
            lower = p[1];
        }
    }
    let lebesgue: f64 = (0..n)
        .map(|j| (0..n).filter(|&i| i != j).map(|i| (eps[i] / (eps[i] - eps[j])).abs()).product::<f64>())
        .sum();
    (p[0], (p[0] - lower).norm(), lebesgue)
}

fn extrapolate<F: FnMut(f64) -> Result<Parts>>(eps: &[f64], mut eval: F) -> Result<PropagatorValue> {
    let mut vals = Vec::with_capacity(eps.len());
    let mut quad_err: f64 = 0.0;
    let mut abs = 0.0;
    for e in eps {
        let p = eval(*e)?;
        quad_err = quad_err.max(p.est.error);
        abs = p.abs;
        vals.push(p.est.value);
    }
    let (value, diff, lebesgue) = neville_to_zero(eps, &vals);
    Ok(PropagatorValue { value, error: diff + lebesgue * quad_err, scale: abs })
}

/// `Δ_F` at a single damping strength `ε` (absolute, not relative to `m`).
pub fn feynman_propagator_damped(x: Interval, m: f64, eps: f64, damping: Damping, abs_tol: f64) -> Result<Estimate> {
    check_mass(m)?;
    x.check_regular()?;
    let p = feynman_integral(x, m, eps, damping, abs_tol)?;
    Ok(p.est.scale(Complex64::new(1.0 / (4.0 * PI * PI), 0.0)))
}

/// `Δ_F(t, r)` extrapolated to `ε → 0`.
pub fn feynman_propagator(x: Interval, m: f64, q: &QuadratureParams) -> Result<PropagatorValue> {
    check_mass(m)?;
    q.validate()?;
    x.check_regular()?;
    let pre = 1.0 / (4.0 * PI * PI);
    let mut v = extrapolate(&q.epsilons(m), |e| feynman_integral(x, m, e, q.damping, q.abs_tol))?;
    v.value *= pre;
    v.error *= pre;
    v.scale *= pre;
    if v.error > q.rel_tol * v.value.norm() {
        return Err(Error::NonConvergent { estimate: v.error, tolerance: q.rel_tol * v.value.norm() });
    }
    Ok(v)
}

/// As [`feynman_propagator`] for a full separation four-vector.
pub fn feynman_propagator_at(x: FourVector, m: f64, q: &QuadratureParams) -> Result<PropagatorValue> {
    feynman_propagator(Interval::from_four_vector(x), m, q)
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidMass(m))
    }
}

/// Panel layout of the oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleGrid {
    pub nodes_per_panel: usize,
    /// Largest phase advance of the integrand across one panel, radians.
    pub max_phase_per_panel: f64,
    /// Length of the numerically integrated `k⁰` stretch beyond `2ω`, in
    /// units of `1/|t|`; the rest is summed asymptotically.
    pub pv_span: f64,
    pub asymptotic_terms: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid { nodes_per_panel: 16, max_phase_per_panel: 5.0, pv_span: 60.0, asymptotic_terms: 12 }
    }
}

/// `(k−ω)^{−p} − (k+ω)^{−p}` without cancellation for `ω ≪ k`.
fn power_difference(k: f64, om: f64, p: i32) -> f64 {
    let x = om / k;
    k.powi(-p) * (1.0 + x).powi(-p) * (2.0 * p as f64 * x.atanh()).exp_m1()
}

/// `PV ∫_0^∞ cos(k⁰t) / (k⁰² − ω²) dk⁰`, by direct quadrature.
fn pv_energy_integral(om: f64, t: f64, g: &GaussLegendre, grid: &OracleGrid) -> f64 {
    let at = t.abs();
    // Near part, symmetric around the pole: ∫_0^{2ω} (h(k) − h(ω))/(k − ω).
    let h = |k0: f64| (k0 * at).cos() / (k0 + om);
    let h_om = h(om);
    let mut panels = ((2.0 * om * at / grid.max_phase_per_panel).ceil() as usize).max(1) * 2;
    panels = panels.max(2);
    let width = 2.0 * om / panels as f64;
    let mut near = 0.0;
    for j in 0..panels {
        let a = j as f64 * width;
        near += g.integrate_real(|k0| (h(k0) - h_om) / (k0 - om), a, a + width);
    }
    // Far part on [2ω, ∞).
    let far = if at == 0.0 {
        g.integrate_real(|u| 2.0 / (om * (4.0 - u * u)), 0.0, 1.0)
    } else {
        let end = 2.0 * om + grid.pv_span / at;
        let f = |k0: f64| (k0 * at).cos() / ((k0 - om) * (k0 + om));
        // Panels grow geometrically away from the pole, capped by the phase.
        let mut acc = 0.0;
        let mut a = 2.0 * om;
        while a < end {
            let b = (a + (grid.max_phase_per_panel / at).min(a)).min(end);
            acc += g.integrate_real(f, a, b);
            a = b;
        }
        // ∫_K^∞ e^{ik⁰t} h dk⁰ = −e^{iKt} Σ (−1)^n h^{(n)}(K) / (it)^{n+1}.
        let mut series = Complex64::zero();
        let mut fact = 1.0;
        for n in 0..grid.asymptotic_terms {
            if n > 0 {
                fact *= n as f64;
            }
            let p = n as i32 + 1;
            let dn = if n % 2 == 0 { 1.0 } else { -1.0 } * fact * power_difference(end, om, p) / (2.0 * om);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            series += Complex64::new(sign * dn, 0.0) / (I * at).powi(p);
        }
        let tail = -(I * at * end).exp() * series;
        acc + tail.re
    };
    near + far
}

/// `Δ_F` by direct quadrature of the four-dimensional integral at fixed `ε`.
///
/// The angular integral is analytic; the `k⁰` integral uses
/// `1/(x + i0) = PV(1/x) − iπδ(x)`; the radial integral runs over `ω` with
/// weight `ω sin(r k) G(ω) w(εk) / (4π³ r)`.
pub fn feynman_propagator_oracle(x: Interval, m: f64, eps: f64, damping: Damping, grid: &OracleGrid) -> Result<Estimate> {
    check_mass(m)?;
    x.check_regular()?;
    if !(eps > 0.0) || damping == Damping::None {
        return Err(Error::InvalidParameter("oracle needs a positive damping"));
    }
    let g = GaussLegendre::new(grid.nodes_per_panel);
    let coarse = GaussLegendre::new(grid.nodes_per_panel / 2);
    let (t, r) = (x.t, x.r);
    let k_end = damping.support() / eps;
    let om_end = (k_end * k_end - m * m).max(0.0).sqrt();
    let rate = r + t.abs() + 1e-3;
    let width = (grid.max_phase_per_panel / rate).min(1.0);
    let panels = (om_end / width).ceil() as usize;
    let integrand = |om: f64| {
        let k = (om * om + m * m).sqrt();
        let pv = pv_energy_integral(om, t, &g, grid);
        let big_g = I * 2.0 * pv + Complex64::new(PI * (om * t).cos() / om, 0.0);
        let sin_over_r = k * sinc(Complex64::new(k * r, 0.0)).re;
        big_g * (om * sin_over_r) * damping.weight(Complex64::new(eps * k, 0.0)).re
    };
    let mut acc = Complex64::zero();
    let mut err = 0.0;
    let mut abs = 0.0;
    for j in 0..panels {
        let a = j as f64 * width;
        let b = (a + width).min(om_end);
        let (hi, pa) = g.integrate(integrand, a, b);
        let (lo, _) = coarse.integrate(integrand, a, b);
        acc += hi;
        err += (hi - lo).norm();
        abs += pa;
    }
    let pre = 1.0 / (4.0 * PI * PI * PI);
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(Error::NonConvergent { estimate: f64::INFINITY, tolerance: 0.0 });
    }
    Ok(Estimate { value: acc * pre, error: (err + 50.0 * f64::EPSILON * abs) * pre })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dispersion {
    /// `ω = sqrt(|k|² − m²)` on `|k| > m`.
    Tachyonic,
    /// `ω = sqrt(|k|² + m²)` on all `k`.
    Ordinary,
}

/// `∫ d³k / ((2π)³ 2ω) (e^{−ikx} − e^{ikx})
///   = −2i/(4π² r) ∫ dq A(q) sin(r k) sin(ω t)`.
fn pauli_jordan_integral(x: Interval, m: f64, disp: Dispersion, eps: f64, damping: Damping, abs_tol: f64) -> Result<Parts> {
    let (t, r) = (x.t, x.r);
    let tau = t.abs();
    let sgn = if t < 0.0 { -1.0 } else { 1.0 };
    let rule = PanelRule::default();
    let w = split_point(m);
    // Returns (k, ω, A·k) at complex q; the integrand is (A k) sinc(rk) sin(ωt).
    let kin = |q: Complex64| match disp {
        Dispersion::Tachyonic => {
            let k = sqrt_shift(q, m);
            (k, q, k)
        }
        Dispersion::Ordinary => {
            let om = sqrt_shift(q, m);
            (q, om, q * q / om)
        }
    };
    let damp = |k: Complex64| damping.weight(k * eps);
    let real = |q: f64| {
        let (k, om, ak) = kin(Complex64::new(q, 0.0));
        ak * sinc(k * r) * (om * t).sin() * damp(k)
    };
    let fin = finite_part(&rule, real, w, abs_tol)?;
    let tail = if r > tau {
        // sin(rk) sin(ωt) / r = [−i e^{irk} + i e^{−irk}] sin(ωt) / (2r).
        let up = rule.half_line(
            |s| {
                let q = Complex64::new(w, s);
                let (k, om, ak) = kin(q);
                ak / k * (I * r * k).exp() * (om * t).sin() * damp(k) * (-I / (2.0 * r)) * I
            },
            1.0 / (r - tau),
            abs_tol,
        )?;
        let down = rule.half_line(
            |s| {
                let q = Complex64::new(w, -s);
                let (k, om, ak) = kin(q);
                ak / k * (-I * r * k).exp() * (om * t).sin() * damp(k) * (I / (2.0 * r)) * (-I)
            },
            1.0 / (r + tau),
            abs_tol,
        )?;
        up + down
    } else {
        // sin(ωt) = sgn(t) (e^{iωτ} − e^{−iωτ}) / 2i.
        let up = rule.half_line(
            |s| {
                let q = Complex64::new(w, s);
                let (k, om, ak) = kin(q);
                ak / k * k_sinc_exp(k, r, I * om * tau) / (2.0 * I) * sgn * damp(k) * I
            },
            1.0 / (tau - r),
            abs_tol,
        )?;
        let down = rule.half_line(
            |s| {
                let q = Complex64::new(w, -s);
                let (k, om, ak) = kin(q);
                -ak / k * k_sinc_exp(k, r, -I * om * tau) / (2.0 * I) * sgn * damp(k) * (-I)
            },
            1.0 / (tau + r),
            abs_tol,
        )?;
        up + down
    };
    Ok(Parts { est: fin.est + tail, abs: fin.abs })
}

/// The commutator function `[φ(x), φ(0)]` for either dispersion.
///
/// Identically zero at `t = 0` and odd in `t`. Convergence is judged against
/// `max(|value|, scale)` so that values that vanish by cancellation do not
/// count as failures.
pub fn pauli_jordan(x: Interval, m: f64, dispersion: Dispersion, q: &QuadratureParams) -> Result<PropagatorValue> {
    check_mass(m)?;
    q.validate()?;
    x.check_regular()?;
    let pre = Complex64::new(0.0, -2.0 / (4.0 * PI * PI));
    let mut v = extrapolate(&q.epsilons(m), |e| pauli_jordan_integral(x, m, dispersion, e, q.damping, q.abs_tol))?;
    v.value *= pre;
    v.error *= pre.norm();
    v.scale *= pre.norm();
    let bar = q.rel_tol * v.value.norm().max(v.scale);
    if v.error > bar {
        return Err(Error::NonConvergent { estimate: v.error, tolerance: bar });
    }
    Ok(v)
}

/// One `(point, boost)` evaluation of an invariance scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub point: Interval,
    pub boost_speed: f64,
    pub boosted: Interval,
    pub value: Complex64,
    pub err_estimate: f64,
    /// `|Δ(Λx) − Δ(x)| / |Δ(x)|`.
    pub deviation: f64,
    /// The same for the real parts, relative to `|Δ(x)|`.
    pub re_deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceScan {
    pub rows: Vec<ScanRow>,
    pub max_deviation: f64,
    pub max_re_deviation: f64,
}

/// Evaluates `Δ_F` at `x` and `Λx` for every pair.
pub fn invariance_scan(points: &[FourVector], boosts: &[LorentzTransform], m: f64, q: &QuadratureParams) -> Result<InvarianceScan> {
    let mut rows = Vec::with_capacity(points.len() * boosts.len());
    for x in points {
        let base_pt = Interval::from_four_vector(*x);
        let base = feynman_propagator(base_pt, m, q)?;
        for l in boosts {
            let boosted = Interval::from_four_vector(l.apply(*x));
            let v = if l.metric_defect() == 0.0 && *l == LorentzTransform::identity() {
                base
            } else {
                feynman_propagator(boosted, m, q)?
            };
            let norm = base.value.norm();
            rows.push(ScanRow {
                point: base_pt,
                boost_speed: l.speed(),
                boosted,
                value: v.value,
                err_estimate: v.error,
                deviation: (v.value - base.value).norm() / norm,
                re_deviation: (v.value.re - base.value.re).abs() / norm,
            });
        }
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let max_re_deviation = rows.iter().map(|r| r.re_deviation).fold(0.0, f64::max);
    Ok(InvarianceScan { rows, max_deviation, max_re_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(t: f64, r: f64) -> Interval {
        Interval::new(t, r).unwrap()
    }

    #[test]
    fn singular_points_rejected() {
        let q = QuadratureParams::default();
        assert!(matches!(feynman_propagator(iv(0.0, 0.0), 1.0, &q), Err(Error::SingularPoint { .. })));
        assert!(matches!(feynman_propagator(iv(1.0, 1.0), 1.0, &q), Err(Error::SingularPoint { .. })));
        assert!(Interval::new(0.0, -1.0).is_err());
    }

    #[test]
    fn massless_limit() {
        let q = QuadratureParams::default();
        for (t, r) in [(0.0, 1.0), (0.4, 1.3), (1.5, 0.5)] {
            let v = feynman_propagator(iv(t, r), 1e-6, &q).unwrap();
            let exact = 1.0 / (4.0 * PI * PI * (r * r - t * t));
            assert!((v.value.re - exact).abs() < 1e-6 * exact.abs(), "{t} {r} {:?}", v);
            assert!(v.value.im.abs() < 1e-6 * exact.abs());
        }
    }

    #[test]
    fn extrapolation_matches_undamped() {
        let q = QuadratureParams::default();
        for (t, r) in [(0.3, 1.5), (1.5, 0.3), (-0.7, 2.0), (2.0, 0.0)] {
            let v = feynman_propagator(iv(t, r), 1.0, &q).unwrap();
            let d = feynman_propagator_damped(iv(t, r), 1.0, 0.0, Damping::None, 1e-13).unwrap();
            assert!((v.value - d.value).norm() < 1e-9 * d.value.norm(), "{t} {r}");
        }
    }

    #[test]
    fn matched_epsilon_oracle() {
        let grid = OracleGrid::default();
        for (t, r) in [(0.5, 2.0), (1.2, 0.4)] {
            let main = feynman_propagator_damped(iv(t, r), 1.0, 0.3, Damping::Exponential, 1e-13).unwrap();
            let orc = feynman_propagator_oracle(iv(t, r), 1.0, 0.3, Damping::Exponential, &grid).unwrap();
            assert!((main.value - orc.value).norm() < 1e-6 * main.value.norm(), "{:?} {:?}", main, orc);
        }
    }

    #[test]
    fn pv_integral_closed_form() {
        let g = GaussLegendre::new(16);
        let grid = OracleGrid::default();
        for (om, t) in [(0.7, 0.0), (0.7, 1.3), (3.0, -2.0), (1e-3, 0.5)] {
            let exact = if t == 0.0 { 0.0 } else { -PI * (om * t).abs().sin() / (2.0 * om) };
            let v = pv_energy_integral(om, t, &g, &grid);
            assert!((v - exact).abs() < 1e-10 * (1.0 + exact.abs()), "{om} {t}: {v} vs {exact}");
        }
    }

    #[test]
    fn pauli_jordan_contrast() {
        let q = QuadratureParams::default();
        let x = iv(1.0, 2.0);
        let ord = pauli_jordan(x, 1.0, Dispersion::Ordinary, &q).unwrap();
        let tach = pauli_jordan(x, 1.0, Dispersion::Tachyonic, &q).unwrap();
        assert!(ord.value.norm() < 10.0 * ord.error, "{:?}", ord);
        assert!(tach.value.norm() > 10.0 * tach.error, "{:?}", tach);
        let back = pauli_jordan(iv(-1.0, 2.0), 1.0, Dispersion::Tachyonic, &q).unwrap();
        assert!((back.value + tach.value).norm() < 1e-12);
        let zero = pauli_jordan(iv(0.0, 2.0), 1.0, Dispersion::Tachyonic, &q).unwrap();
        assert!(zero.value.norm() < 1e-15);
    }

    #[test]
    fn pauli_jordan_timelike_ordinary_matches_free_field() {
        // Inside the light cone the ordinary function is the standard one;
        // compare a damped evaluation with the ε-extrapolated value.
        let q = QuadratureParams::default();
        let x = iv(2.0, 0.5);
        let v = pauli_jordan(x, 1.0, Dispersion::Ordinary, &q).unwrap();
        let d = pauli_jordan_integral(x, 1.0, Dispersion::Ordinary, 0.0, Damping::None, 1e-13).unwrap();
        let direct = d.est.value * Complex64::new(0.0, -2.0 / (4.0 * PI * PI));
        assert!((v.value - direct).norm() < 1e-9 * direct.norm());
        assert!(v.value.re.abs() < 1e-12, "commutator function is imaginary");
    }

    #[test]
    fn damping_weights() {
        let z = Complex64::new(0.3, 0.2);
        assert_eq!(Damping::None.weight(z), Complex64::new(1.0, 0.0));
        assert!((Damping::Exponential.weight(z) - (-z).exp()).norm() < 1e-15);
        let s = Damping::Smooth { order: 8 }.weight(Complex64::new(0.01, 0.0));
        assert!((s.re - 1.0).abs() < 1e-15);
        assert!(Damping::Smooth { order: 16 }.support() > Damping::Exponential.support());
    }

    #[test]
    fn neville_recovers_polynomials() {
        let eps = [1e-2, 3e-3, 1e-3, 3e-4, 1e-4];
        let vals: Vec<Complex64> = eps.iter().map(|e| Complex64::new(2.0 + 3.0 * e - 5.0 * e * e, -1.0 + e)).collect();
        let (v, diff, leb) = neville_to_zero(&eps, &vals);
        assert!((v - Complex64::new(2.0, -1.0)).norm() < 1e-13);
        assert!(diff < 1e-12);
        assert!(leb >= 1.0);
    }
}
