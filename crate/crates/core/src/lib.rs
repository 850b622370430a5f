//! Two-level quantum dynamics under PT-symmetric non-Hermitian Hamiltonians.
//!
//! The crate covers the PT-symmetric phase, the PT-broken phase and the
//! exceptional point between them, plus the exact mapping onto the
//! neutral-meson effective Hamiltonian with a global decay term.
//!
//! Natural units (ħ = 1) are used throughout: times, energies and widths are
//! plain `f64` values.
//!
//! Module map:
//! - [`algebra`]: 2×2 complex kernel and the matrix-exponential oracle.
//! - [`hamiltonian`]: parametrized PT-symmetric Hamiltonian, phase classification.
//! - [`spectral`]: normalized eigenvectors, metric and charge operators, inner products.
//! - [`dynamics`]: broken-phase time evolution, flavor amplitudes and probabilities.
//! - [`exceptional`]: open-system Hamiltonian, discriminant and EP detection.
//! - [`meson`]: neutral-meson solution and the passive-PT decomposition.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod exceptional;
pub mod hamiltonian;
pub mod meson;
pub mod spectral;

pub use algebra::{eig2, expm_oracle, Eigen2, Matrix2C, Vector2C, C64};
pub use error::{Error, Result};
pub use hamiltonian::{DerivedBrokenParams, PTParams, PhaseClass};
pub use spectral::{InnerProductKind, SpectralData};
