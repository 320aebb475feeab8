//! Covariant twin-space quantization of a real scalar tachyon field.
//!
//! Boosts that flip the sign of a spacelike mode's energy move particles
//! between the "in" factor `F` and the "out" factor `F*` of the twin space
//! `F ⊗ F*`. This crate implements that machinery on truncated, sparse Fock
//! spaces over exact (non-lattice) momentum labels, together with the
//! numerics needed to check it: mode functions and their Wronskian, the
//! boost representation on twin states, the cut-off Feynman propagator and
//! Pauli–Jordan function, and first-order Yukawa amplitudes.
//!
//! Conventions: metric signature `(+,−,−,−)`, so an on-shell tachyon has
//! `k·k = −m²` and `ω_k = sqrt(|k|² − m²)`. Boosts are passive: a
//! [`LorentzTransform`] maps coordinates (and momenta) of one frame to those
//! of a frame moving with the given velocity.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dynamics;
mod error;
pub mod fock;
pub mod kinematics;
mod linalg;
pub mod lorentz_rep;
pub mod modes;
pub mod propagator;
pub mod quadrature;
pub mod twinspace;

pub use error::{Error, Result};
pub use kinematics::{boost, classify_mode_boost, minkowski_dot, BoostAction, FourVector, LorentzTransform, ModeLabel};
pub use num_complex::Complex64;
