//! JSON documents for twin states, processes and amplitudes.

use serde::{Deserialize, Serialize};
use twinfield_core::dynamics::{Amplitude, Direction, Leg, Process, Species};
use twinfield_core::fock::{OccBasisState, Truncation};
use twinfield_core::twinspace::{BasisPair, TwinState};
use twinfield_core::{Complex64, FourVector, ModeLabel};

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeJson {
    pub k: [f64; 3],
    pub mass: f64,
    /// Stored energy; recomputed from `k` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
}

impl ModeJson {
    pub fn from_label(l: &ModeLabel) -> Self {
        ModeJson { k: l.momentum(), mass: l.mass(), omega: Some(l.omega()) }
    }

    pub fn to_label(&self) -> Result<ModeLabel> {
        Ok(match self.omega {
            Some(w) => ModeLabel::with_omega(self.k, self.mass, w)?,
            None => ModeLabel::new(self.k, self.mass)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupancyJson {
    pub mode: ModeJson,
    pub n: u32,
}

/// One coefficient of `|n⟩ ⊗ ⟨n′|` in the product occupation basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwinTermJson {
    /// `[re, im]`.
    pub alpha: [f64; 2],
    pub ket: Vec<OccupancyJson>,
    pub bra: Vec<OccupancyJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwinStateJson {
    pub terms: Vec<TwinTermJson>,
}

fn occupancies(b: &OccBasisState) -> Vec<OccupancyJson> {
    b.modes().iter().map(|(l, n)| OccupancyJson { mode: ModeJson::from_label(l), n: *n }).collect()
}

fn basis(occ: &[OccupancyJson], trunc: &Truncation) -> Result<OccBasisState> {
    let labels = occ.iter().map(|o| Ok((o.mode.to_label()?, o.n))).collect::<Result<Vec<_>>>()?;
    Ok(OccBasisState::from_occupancies(labels, trunc)?)
}

impl TwinStateJson {
    pub fn from_state(s: &TwinState, trunc: &Truncation) -> Self {
        let terms = s
            .basis_pairs(trunc)
            .iter()
            .map(|p| TwinTermJson { alpha: [p.coeff.re, p.coeff.im], ket: occupancies(&p.ket), bra: occupancies(&p.bra) })
            .collect();
        TwinStateJson { terms }
    }

    pub fn to_state(&self, trunc: &Truncation) -> Result<TwinState> {
        let pairs = self
            .terms
            .iter()
            .map(|t| {
                Ok(BasisPair { ket: basis(&t.ket, trunc)?, bra: basis(&t.bra, trunc)?, coeff: Complex64::new(t.alpha[0], t.alpha[1]) })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwinState::from_pairs(pairs))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesJson {
    Subluminal,
    Tachyon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionJson {
    Incoming,
    Outgoing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegJson {
    pub species: SpeciesJson,
    pub mass: f64,
    /// `[E, px, py, pz]`.
    pub momentum: [f64; 4],
    pub direction: DirectionJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessJson {
    pub coupling: f64,
    pub legs: Vec<LegJson>,
}

impl ProcessJson {
    pub fn from_process(p: &Process) -> Self {
        let legs = p
            .legs()
            .iter()
            .map(|l| LegJson {
                species: match l.species {
                    Species::Subluminal { .. } => SpeciesJson::Subluminal,
                    Species::Tachyon { .. } => SpeciesJson::Tachyon,
                },
                mass: l.species.mass(),
                momentum: l.momentum.to_array(),
                direction: match l.direction {
                    Direction::Incoming => DirectionJson::Incoming,
                    Direction::Outgoing => DirectionJson::Outgoing,
                },
            })
            .collect();
        ProcessJson { coupling: p.coupling(), legs }
    }

    /// Validates every leg on the way in.
    pub fn to_process(&self) -> Result<Process> {
        let legs = self
            .legs
            .iter()
            .map(|l| Leg {
                species: match l.species {
                    SpeciesJson::Subluminal => Species::Subluminal { mass: l.mass },
                    SpeciesJson::Tachyon => Species::Tachyon { mass: l.mass },
                },
                momentum: FourVector::from_array(l.momentum),
                direction: match l.direction {
                    DirectionJson::Incoming => Direction::Incoming,
                    DirectionJson::Outgoing => Direction::Outgoing,
                },
            })
            .collect();
        Ok(Process::new(legs, self.coupling)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub prefactor_re: f64,
    pub prefactor_im: f64,
    pub balance: [f64; 4],
    pub allowed: bool,
}

impl From<&Amplitude> for AmplitudeJson {
    fn from(a: &Amplitude) -> Self {
        AmplitudeJson {
            prefactor_re: a.prefactor.re,
            prefactor_im: a.prefactor.im,
            balance: a.momentum_balance.to_array(),
            allowed: a.allowed(),
        }
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(v: &T) -> String {
    // `serde_json::Value` stores objects in a BTreeMap, so a round trip sorts keys.
    let value = serde_json::to_value(v).expect("serializable");
    serde_json::to_string_pretty(&value).expect("serializable")
}
