//! Gauss–Legendre panel quadrature for complex-valued integrands.
//!
//! Every panel is integrated with a 12- and a 24-point rule; the 24-point
//! value is used and `|G24 − G12|` is the error estimate. A rounding floor
//! proportional to `∫|f|` is added, so cancelling oscillatory sums do not
//! report errors below what double precision can deliver.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

const ROUNDING_FACTOR: f64 = 50.0 * f64::EPSILON;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Returns `(∫f, ∫|f|)` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, mut f: F, a: f64, b: f64) -> (Complex64, f64) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            acc += v * *w;
            abs += v.norm() * *w;
        }
        (acc * half, abs * half.abs())
    }

    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum();
        s * half
    }
}

/// Legendre `P_n(x)` and its derivative by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integral value with an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: Complex64 { re: 0.0, im: 0.0 }, error: 0.0 };

    pub fn scale(self, c: Complex64) -> Estimate {
        Estimate { value: self.value * c, error: self.error * c.norm() }
    }
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, o: Estimate) -> Estimate {
        Estimate { value: self.value + o.value, error: self.error + o.error }
    }
}

impl core::ops::AddAssign for Estimate {
    fn add_assign(&mut self, o: Estimate) {
        *self = *self + o;
    }
}

/// Paired 12/24-point rules for error-estimated panel integration.
#[derive(Clone, Debug)]
pub struct PanelRule {
    coarse: GaussLegendre,
    fine: GaussLegendre,
}

impl Default for PanelRule {
    fn default() -> Self {
        PanelRule { coarse: GaussLegendre::new(12), fine: GaussLegendre::new(24) }
    }
}

#[derive(Clone, Copy, Debug)]
struct PanelResult {
    value: Complex64,
    diff: f64,
    abs: f64,
}

impl PanelRule {
    fn panel<F: FnMut(f64) -> Complex64>(&self, f: &mut F, a: f64, b: f64) -> PanelResult {
        let (lo, _) = self.coarse.integrate(&mut *f, a, b);
        let (hi, abs) = self.fine.integrate(&mut *f, a, b);
        PanelResult { value: hi, diff: (hi - lo).norm(), abs }
    }

    /// Fixed composite integration over consecutive breakpoints.
    pub fn integrate_panels<F: FnMut(f64) -> Complex64>(&self, mut f: F, breakpoints: &[f64]) -> Estimate {
        let mut value = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        let mut abs = 0.0;
        for w in breakpoints.windows(2) {
            let p = self.panel(&mut f, w[0], w[1]);
            value += p.value;
            err += p.diff;
            abs += p.abs;
        }
        Estimate { value, error: err + ROUNDING_FACTOR * abs }
    }

    /// Globally adaptive bisection until the summed panel error is below
    /// `abs_tol` or `max_panels` is reached.
    pub fn adaptive<F: FnMut(f64) -> Complex64>(
        &self,
        mut f: F,
        a: f64,
        b: f64,
        abs_tol: f64,
        max_panels: usize,
    ) -> Result<Estimate> {
        let first = self.panel(&mut f, a, b);
        let mut panels: Vec<(f64, f64, PanelResult)> = alloc::vec![(a, b, first)];
        loop {
            let err: f64 = panels.iter().map(|p| p.2.diff).sum();
            let abs: f64 = panels.iter().map(|p| p.2.abs).sum();
            let total = err + ROUNDING_FACTOR * abs;
            if err <= abs_tol || panels.len() >= max_panels {
                let value = panels.iter().map(|p| p.2.value).sum();
                if err > abs_tol && err > ROUNDING_FACTOR * abs {
                    return Err(Error::NonConvergent { estimate: total, tolerance: abs_tol });
                }
                return Ok(Estimate { value, error: total });
            }
            let (idx, _) = panels
                .iter()
                .enumerate()
                .fold((0, -1.0), |best, (i, p)| if p.2.diff > best.1 { (i, p.2.diff) } else { best });
            let (lo, hi, _) = panels.swap_remove(idx);
            let mid = 0.5 * (lo + hi);
            let left = self.panel(&mut f, lo, mid);
            let right = self.panel(&mut f, mid, hi);
            panels.push((lo, mid, left));
            panels.push((mid, hi, right));
        }
    }

    /// `∫_0^∞ f(s) ds` for an integrand that decays at least exponentially
    /// with rate of order `1/scale`. Panels double in length; integration stops
    /// once a panel's `∫|f|` falls below `abs_tol · 1e−3`.
    pub fn half_line<F: FnMut(f64) -> Complex64>(&self, mut f: F, scale: f64, abs_tol: f64) -> Result<Estimate> {
        let mut a = 0.0;
        let mut width = scale;
        let mut est = Estimate::ZERO;
        let mut abs_total = 0.0;
        for _ in 0..200 {
            let b = a + width;
            let p = self.panel(&mut f, a, b);
            if p.diff > abs_tol * 1e-2 && width > scale * 1e-6 {
                width *= 0.5;
                continue;
            }
            est.value += p.value;
            est.error += p.diff;
            abs_total += p.abs;
            a = b;
            if p.abs < abs_tol * 1e-3 {
                est.error += p.abs + ROUNDING_FACTOR * abs_total;
                return Ok(est);
            }
            width *= 2.0;
        }
        Err(Error::NonConvergent { estimate: est.error + abs_total, tolerance: abs_tol })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_weights_and_polynomials() {
        for n in [1usize, 2, 5, 12, 24, 40] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}");
            for deg in 0..(2 * n) {
                let v = g.integrate_real(|x| x.powi(deg as i32), -1.0, 1.0);
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((v - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn adaptive_oscillatory() {
        let rule = PanelRule::default();
        let e = rule
            .adaptive(|x| Complex64::new(0.0, 7.0 * x).exp(), 0.0, 10.0, 1e-13, 500)
            .unwrap();
        let exact = (Complex64::new(0.0, 70.0).exp() - 1.0) / Complex64::new(0.0, 7.0);
        assert!((e.value - exact).norm() < 1e-12);
        assert!(e.error < 1e-12);
    }

    #[test]
    fn half_line_exponential() {
        let rule = PanelRule::default();
        let e = rule.half_line(|s| Complex64::new(-2.0 * s, 3.0 * s).exp(), 0.5, 1e-14).unwrap();
        let exact = Complex64::new(1.0, 0.0) / Complex64::new(2.0, -3.0);
        assert!((e.value - exact).norm() < 1e-13, "{:?}", e);
    }

    #[test]
    fn adaptive_reports_nonconvergence() {
        let rule = PanelRule::default();
        let r = rule.adaptive(|x| Complex64::new(1.0 / x.abs().sqrt(), 0.0), -1.0, 1.0, 1e-14, 4);
        assert!(matches!(r, Err(Error::NonConvergent { .. })));
    }
}
