//! Time evolution in the PT-broken phase.
//!
//! Amplitudes follow the convention `A_xy = ⟨y | x(t)⟩`: the first index is
//! the evolved initial state, the second the (un-evolved) projection target.
//! All products here are PT pairings `ψ† P χ` unless stated otherwise.
//!
//! Probabilities are returned as computed. They are not bounded by one and
//! grow without limit in t, which is a property of the broken phase rather
//! than a numerical failure.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix2C, Vector2C, C64, I};
use crate::error::{Error, Result};
use crate::hamiltonian::{classify, DerivedBrokenParams, PTParams, PhaseClass, DEFAULT_EP_TOL};
use crate::spectral::{eigvecs_broken, ep_state, NEAR_EP_GUARD};

/// Flavor basis states and their CPT-symmetric combinations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlavorState {
    /// (1, 0)ᵀ
    A,
    /// (0, 1)ᵀ
    B,
    /// (1, 1)ᵀ/√2, CPT eigenvalue +1
    TildeA,
    /// (1, −1)ᵀ/√2, CPT eigenvalue −1
    TildeB,
}

impl FlavorState {
    pub fn vector(self) -> Vector2C {
        match self {
            FlavorState::A => Vector2C::e0(),
            FlavorState::B => Vector2C::e1(),
            FlavorState::TildeA => Vector2C::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            FlavorState::TildeB => Vector2C::real(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyBranch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeTable {
    pub aa: C64,
    pub ab: C64,
    pub ba: C64,
    pub bb: C64,
}

impl AmplitudeTable {
    pub fn probabilities(&self) -> ProbabilityTable {
        ProbabilityTable {
            aa: self.aa.norm_sqr(),
            ab: self.ab.norm_sqr(),
            ba: self.ba.norm_sqr(),
            bb: self.bb.norm_sqr(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    pub aa: f64,
    pub ab: f64,
    pub ba: f64,
    pub bb: f64,
}

impl ProbabilityTable {
    pub fn as_array(&self) -> [f64; 4] {
        [self.aa, self.ab, self.ba, self.bb]
    }
}

fn check_rapidity(params: &DerivedBrokenParams) -> Result<f64> {
    let ap = params.alpha_prime;
    if !(ap > 0.0) || !ap.is_finite() {
        return Err(Error::AlphaOutOfRange { value: ap });
    }
    let s = ap.sinh();
    if s < NEAR_EP_GUARD {
        return Err(Error::NearEP { value: s });
    }
    Ok(s)
}

/// `(A′, A′⁻¹)` with `A′ H A′⁻¹ = diag(E′₊, E′₋)`; the columns of `A′⁻¹`
/// are the normalized eigenvectors u′₊ and u′₋.
pub fn diagonalizer(alpha_prime: f64) -> Result<(Matrix2C, Matrix2C)> {
    let (up, um) = eigvecs_broken(alpha_prime)?;
    let inverse = Matrix2C::from_columns(up, um);
    // A′ = (A′⁻¹)ᵀ for this normalization
    Ok((inverse.transpose(), inverse))
}

/// u′±(t) = e^{−iE′± t} u′±(0)
pub fn evolve_energy_state(
    branch: EnergyBranch,
    params: &DerivedBrokenParams,
    t: f64,
) -> Result<Vector2C> {
    let (up, um) = eigvecs_broken(params.alpha_prime)?;
    let (state, growth) = match branch {
        EnergyBranch::Plus => (up, params.gamma),
        EnergyBranch::Minus => (um, -params.gamma),
    };
    let factor = C64::new(growth * t, -params.omega * t).exp();
    Ok(state.scale(factor))
}

/// Closed-form propagator `A′⁻¹ diag(e^{−iE′₊t}, e^{−iE′₋t}) A′`.
pub fn propagator(params: &DerivedBrokenParams, t: f64) -> Result<Matrix2C> {
    let (a, a_inv) = diagonalizer(params.alpha_prime)?;
    let (ep, em) = params.energies();
    let phases = Matrix2C::diag((-I * ep * t).exp(), (-I * em * t).exp());
    Ok(a_inv * phases * a)
}

/// Flavor state evolved with the closed-form propagator.
pub fn evolve_flavor(params: &DerivedBrokenParams, state: FlavorState, t: f64) -> Result<Vector2C> {
    Ok(propagator(params, t)? * state.vector())
}

/// PT-paired flavor transition amplitudes.
pub fn amplitudes_pt(params: &DerivedBrokenParams, t: f64) -> Result<AmplitudeTable> {
    let s = check_rapidity(params)?;
    let ap = params.alpha_prime;
    let gt = params.gamma * t;
    let phase = C64::from_polar(1.0, -params.omega * t);
    let aa = -I * phase * (gt.sinh() / s);
    Ok(AmplitudeTable {
        aa,
        ab: phase * ((ap + gt).sinh() / s),
        ba: phase * ((ap - gt).sinh() / s),
        bb: aa,
    })
}

pub fn probabilities_pt(params: &DerivedBrokenParams, t: f64) -> Result<ProbabilityTable> {
    let s = check_rapidity(params)?;
    let ap = params.alpha_prime;
    let gt = params.gamma * t;
    let s2 = s * s;
    let same = gt.sinh().powi(2) / s2;
    Ok(ProbabilityTable {
        aa: same,
        ab: (ap + gt).sinh().powi(2) / s2,
        ba: (ap - gt).sinh().powi(2) / s2,
        bb: same,
    })
}

/// P′aa − P′ab = −sinh(α′ + 2γt)/sinh α′ and P′ba − P′bb = sinh(α′ − 2γt)/sinh α′.
pub fn probability_differences(params: &DerivedBrokenParams, t: f64) -> Result<(f64, f64)> {
    let s = check_rapidity(params)?;
    let ap = params.alpha_prime;
    let gt2 = 2.0 * params.gamma * t;
    Ok((-(ap + gt2).sinh() / s, (ap - gt2).sinh() / s))
}

/// Amplitudes with the CPT flavor states as projection targets,
/// `Ã_xy = ⟨ũ_y | u_x(t)⟩_PT`.
pub fn amplitudes_cpt_flavor(params: &DerivedBrokenParams, t: f64) -> Result<AmplitudeTable> {
    let a = amplitudes_pt(params, t)?;
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    Ok(AmplitudeTable {
        aa: (a.aa + a.ab) * h,
        ab: (a.aa - a.ab) * h,
        ba: (a.ba + a.bb) * h,
        bb: (a.ba - a.bb) * h,
    })
}

pub fn probabilities_cpt_flavor(params: &DerivedBrokenParams, t: f64) -> Result<ProbabilityTable> {
    let s = check_rapidity(params)?;
    let ap = params.alpha_prime;
    let gt = params.gamma * t;
    let denom = 2.0 * s * s;
    let common = gt.sinh().powi(2);
    let a = (common + (ap + gt).sinh().powi(2)) / denom;
    let b = (common + (ap - gt).sinh().powi(2)) / denom;
    Ok(ProbabilityTable {
        aa: a,
        ab: a,
        ba: b,
        bb: b,
    })
}

/// e^{−iE₀t}|u₀⟩ at an exceptional point.
///
/// Only the degenerate eigenstate is evolved: it picks up a phase and
/// nothing else. Flavor states are not eigenstates there, so no closed form
/// is offered for them.
pub fn evolve_ep_state(p: &PTParams, t: f64) -> Result<Vector2C> {
    p.require_zero_phi()?;
    if classify(p, DEFAULT_EP_TOL)? != PhaseClass::ExceptionalPoint {
        return Err(Error::InvalidParams(
            "evolve_ep_state needs parameters on the exceptional point".into(),
        ));
    }
    Ok(ep_state().scale(C64::from_polar(1.0, -p.center() * t)))
}
