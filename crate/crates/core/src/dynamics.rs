//! Free evolution on the twin space and first-order Yukawa amplitudes.
//!
//! `H₋ = H ⊗ 1 − 1 ⊗ H*` evolves both factors forward, so the pair
//! `|n⟩⊗⟨m|` picks up `e^{−i(E_n − E_m)t}` and traces are unchanged.
//! `H₊ = H ⊗ 1 + 1 ⊗ H*` evolves the bra factor backwards, giving
//! `e^{−i(E_n + E_m)t}`; it is the generator used to build in/out states.
//!
//! Amplitudes keep the four-momentum delta function symbolic: an
//! [`Amplitude`] holds the coupling prefactor `−ig` (the common `(2π)⁴` is
//! implied) and the delta's argument `Σ p_in − Σ p_out`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::fock::{free_evolve, FockState};
use crate::kinematics::{FourVector, LorentzTransform, DEFAULT_DEGENERACY};
use crate::twinspace::{trace_functional, TwinState, TwinTerm};
use crate::{Error, Result};

/// Relative on-shell tolerance, applied as `1e−9 · max(1, E²)`.
pub const SHELL_TOL: f64 = 1e-9;
/// Relative tolerance of the kinematic zero test.
pub const BALANCE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvolutionSign {
    /// `H₊`: bra evolved with `−t`.
    Plus,
    /// `H₋`: both factors evolved with `t`.
    Minus,
}

/// `e^{−iH±t}` applied term by term.
pub fn evolve(s: &TwinState, t: f64, sign: EvolutionSign) -> TwinState {
    let bra_t = match sign {
        EvolutionSign::Minus => t,
        EvolutionSign::Plus => -t,
    };
    TwinState::from_terms(
        s.terms()
            .iter()
            .map(|term| TwinTerm { alpha: term.alpha, ket: free_evolve(&term.ket, t), bra: free_evolve(&term.bra, bra_t) })
            .collect(),
    )
}

/// `Tr(e^{−iH₊T} e^{iH₀₊T} |α⟩⊗⟨β|)` for each `T`; in the free theory the
/// two factors cancel and every entry equals `⟨β|α⟩`.
pub fn s_matrix_free_limit_check(alpha: &FockState, beta: &FockState, t_values: &[f64]) -> Vec<Complex64> {
    let s = TwinState::separable(Complex64::new(1.0, 0.0), alpha.clone(), beta.clone());
    t_values
        .iter()
        .map(|&t| {
            let interaction_free = evolve(&s, -t, EvolutionSign::Plus);
            trace_functional(&evolve(&interaction_free, t, EvolutionSign::Plus))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Species {
    /// Ordinary particle, `p·p = M²`.
    Subluminal { mass: f64 },
    /// Tachyon, `p·p = −m²`.
    Tachyon { mass: f64 },
}

impl Species {
    pub fn mass(self) -> f64 {
        match self {
            Species::Subluminal { mass } | Species::Tachyon { mass } => mass,
        }
    }

    /// Expected `p·p`.
    pub fn shell(self) -> f64 {
        match self {
            Species::Subluminal { mass } => mass * mass,
            Species::Tachyon { mass } => -mass * mass,
        }
    }

    pub fn is_tachyon(self) -> bool {
        matches!(self, Species::Tachyon { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Incoming,
    Outgoing,
}

impl Direction {
    pub fn toggled(self) -> Self {
        match self {
            Direction::Incoming => Direction::Outgoing,
            Direction::Outgoing => Direction::Incoming,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Leg {
    pub species: Species,
    pub momentum: FourVector,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Process {
    legs: Vec<Leg>,
    coupling: f64,
}

impl Process {
    /// Validates every leg: positive energy and on its mass shell.
    pub fn new(legs: Vec<Leg>, coupling: f64) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::InvalidParameter("coupling must be finite"));
        }
        for (index, leg) in legs.iter().enumerate() {
            let mass = leg.species.mass();
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(Error::InvalidMass(mass));
            }
            let p = leg.momentum;
            let virtuality = p.norm_sq();
            let expected = leg.species.shell();
            let tol = SHELL_TOL * (p.t * p.t).max(1.0);
            if !(p.t > 0.0) || !((virtuality - expected).abs() <= tol) {
                return Err(Error::OffShellLeg { index, virtuality, expected });
            }
        }
        Ok(Process { legs, coupling })
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// `Σ p_in − Σ p_out`.
    pub fn momentum_balance(&self) -> FourVector {
        self.legs.iter().fold(FourVector::ZERO, |acc, leg| match leg.direction {
            Direction::Incoming => acc + leg.momentum,
            Direction::Outgoing => acc - leg.momentum,
        })
    }

    /// Largest leg energy.
    pub fn energy_scale(&self) -> f64 {
        self.legs.iter().map(|l| l.momentum.t).fold(0.0, f64::max)
    }

    /// All directions reversed.
    pub fn reversed(&self) -> Process {
        let legs = self.legs.iter().map(|l| Leg { direction: l.direction.toggled(), ..*l }).collect();
        Process { legs, coupling: self.coupling }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitude {
    /// `−ig`; the factor `(2π)⁴` multiplying the delta is implied.
    pub prefactor: Complex64,
    pub momentum_balance: FourVector,
    /// Energy scale of the process, used by [`Amplitude::allowed`].
    pub scale: f64,
}

impl Amplitude {
    /// Kinematically allowed: the balance vanishes to `1e−6 · scale`.
    pub fn allowed(&self) -> bool {
        self.momentum_balance.max_abs() <= BALANCE_TOL * self.scale.max(1.0)
    }
}

/// First-order `−ig (2π)⁴ δ⁴(Σ p_in − Σ p_out)` for one tachyon coupled to
/// two subluminal legs.
pub fn yukawa_first_order(p: &Process) -> Result<Amplitude> {
    let tachyons = p.legs().iter().filter(|l| l.species.is_tachyon()).count();
    if p.legs().len() != 3 || tachyons != 1 {
        return Err(Error::InvalidProcess("Yukawa vertex needs two subluminal legs and one tachyon"));
    }
    Ok(Amplitude {
        prefactor: Complex64::new(0.0, -p.coupling()),
        momentum_balance: p.momentum_balance(),
        scale: p.energy_scale(),
    })
}

/// Re-expresses the process in the boosted frame. Tachyon legs whose energy
/// turns negative are reinterpreted: momentum `−Λp`, direction toggled.
pub fn boost_process(l: &LorentzTransform, p: &Process) -> Result<Process> {
    let mut legs = Vec::with_capacity(p.legs().len());
    for leg in p.legs() {
        let q = l.apply(leg.momentum);
        let mapped = match leg.species {
            Species::Subluminal { .. } => Leg { momentum: q, ..*leg },
            Species::Tachyon { mass } => {
                if q.t.abs() <= DEFAULT_DEGENERACY * mass {
                    return Err(Error::DegenerateBoost { energy: q.t });
                }
                if q.t > 0.0 {
                    Leg { momentum: q, ..*leg }
                } else {
                    Leg { momentum: -q, direction: leg.direction.toggled(), ..*leg }
                }
            }
        };
        legs.push(mapped);
    }
    Ok(Process { legs, coupling: p.coupling() })
}

/// Balanced emission `k → l + p` with `l` at rest: `E_p = m²/(2M)`,
/// `|p| = sqrt(E_p² + m²)` along the unit vector `direction`.
pub fn rest_frame_emission(big_m: f64, m: f64, coupling: f64, direction: [f64; 3]) -> Result<Process> {
    let n = crate::kinematics::norm3(direction);
    if !((n - 1.0).abs() <= 1e-12) {
        return Err(Error::NotUnitDirection(n));
    }
    let e_p = m * m / (2.0 * big_m);
    let p_abs = (e_p * e_p + m * m).sqrt();
    let p = FourVector::from_parts(e_p, [p_abs * direction[0], p_abs * direction[1], p_abs * direction[2]]);
    let l = FourVector::new(big_m, 0.0, 0.0, 0.0);
    let legs = alloc::vec![
        Leg { species: Species::Subluminal { mass: big_m }, momentum: l + p, direction: Direction::Incoming },
        Leg { species: Species::Subluminal { mass: big_m }, momentum: l, direction: Direction::Outgoing },
        Leg { species: Species::Tachyon { mass: m }, momentum: p, direction: Direction::Outgoing },
    ];
    Process::new(legs, coupling)
}

/// `max |balance(Λ·p) − Λ·balance(p)|`, and whether the tachyon migrated.
pub fn covariance_residual(l: &LorentzTransform, p: &Process) -> Result<(f64, bool)> {
    let before = yukawa_first_order(p)?;
    let boosted = boost_process(l, p)?;
    let after = yukawa_first_order(&boosted)?;
    let expected = l.apply(before.momentum_balance);
    let migrated = p.legs().iter().zip(boosted.legs()).any(|(a, b)| a.direction != b.direction);
    Ok(((after.momentum_balance - expected).max_abs(), migrated))
}
