//! The four-parameter PT-symmetric Hamiltonian and its phase structure.
//!
//! ```text
//!     H = [[ ρ e^{+iφ},  σ e^{+iϕ} ],
//!          [ σ e^{-iϕ},  ρ e^{-iφ} ]]
//! ```
//!
//! with φ = `varphi` (diagonal phase) and ϕ = `phi` (off-diagonal phase).
//! The spectrum is real for ρ²sin²φ < σ² (symmetric phase), a complex
//! conjugate pair for ρ²sin²φ > σ² (broken phase) and a defective double
//! root on the boundary (exceptional point).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{Matrix2C, C64};
use crate::error::{Error, Result};

/// Default relative band (in units of σ²) around ρ²sin²φ = σ² classified as an EP.
pub const DEFAULT_EP_TOL: f64 = 1e-9;
/// Largest |ϕ| accepted by the closed forms.
pub const PHI_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PTParams {
    pub rho: f64,
    pub varphi: f64,
    pub sigma: f64,
    pub phi: f64,
}

impl PTParams {
    /// Validated constructor: ρ, σ ≥ 0 and both angles in (−π, π].
    pub fn new(rho: f64, varphi: f64, sigma: f64, phi: f64) -> Result<Self> {
        let p = Self {
            rho,
            varphi,
            sigma,
            phi,
        };
        p.validate()?;
        Ok(p)
    }

    /// Shorthand for the ϕ = 0 family used by every closed form.
    pub fn with_zero_phi(rho: f64, varphi: f64, sigma: f64) -> Result<Self> {
        Self::new(rho, varphi, sigma, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.rho, self.varphi, self.sigma, self.phi];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "non-finite entry in {self:?}"
            )));
        }
        if self.rho < 0.0 || self.sigma < 0.0 {
            return Err(Error::InvalidParams(format!(
                "rho and sigma must be non-negative, got rho = {}, sigma = {}",
                self.rho, self.sigma
            )));
        }
        for (name, angle) in [("varphi", self.varphi), ("phi", self.phi)] {
            if !(angle > -PI && angle <= PI) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {angle} is outside (-pi, pi]"
                )));
            }
        }
        Ok(())
    }

    /// ρ sinφ: the gain/loss strength on the diagonal.
    pub fn gain(&self) -> f64 {
        self.rho * self.varphi.sin()
    }

    /// ρ cosφ: the common real part of the spectrum.
    pub fn center(&self) -> f64 {
        self.rho * self.varphi.cos()
    }

    /// ρ²sin²φ − σ²; positive in the broken phase.
    pub fn splitting(&self) -> f64 {
        let g = self.gain();
        g * g - self.sigma * self.sigma
    }

    /// Errors with [`Error::NonzeroPhi`] unless ϕ = 0.
    pub fn require_zero_phi(&self) -> Result<()> {
        if self.phi.abs() > PHI_TOL {
            return Err(Error::NonzeroPhi { phi: self.phi });
        }
        Ok(())
    }
}

/// Which side of the exceptional point a parameter set lies on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum PhaseClass {
    /// Real spectrum; cos α = ρ sinφ / σ with α ∈ (0, π).
    Symmetric {
        alpha: f64,
    },
    /// Complex-conjugate spectrum; cosh α′ = |ρ sinφ| / σ.
    Broken {
        alpha_prime: f64,
    },
    ExceptionalPoint,
}

impl PhaseClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PhaseClass::Symmetric { .. } => "symmetric",
            PhaseClass::Broken { .. } => "broken",
            PhaseClass::ExceptionalPoint => "ep",
        }
    }
}

/// `[[ρe^{iφ}, σe^{iϕ}], [σe^{−iϕ}, ρe^{−iφ}]]`
pub fn build(p: &PTParams) -> Matrix2C {
    Matrix2C::new(
        C64::from_polar(p.rho, p.varphi),
        C64::from_polar(p.sigma, p.phi),
        C64::from_polar(p.sigma, -p.phi),
        C64::from_polar(p.rho, -p.varphi),
    )
}

/// PT symmetry of a general 2×2 matrix: h00 = h11* and h01 = h10*.
pub fn is_pt_symmetric(h: &Matrix2C, tol: f64) -> bool {
    (h.m00 - h.m11.conj()).norm() <= tol && (h.m01 - h.m10.conj()).norm() <= tol
}

pub fn classify(p: &PTParams, ep_tol: f64) -> Result<PhaseClass> {
    p.validate()?;
    if p.sigma == 0.0 {
        return Err(Error::NonDiagonalizablePath);
    }
    let sigma2 = p.sigma * p.sigma;
    let splitting = p.splitting();
    if splitting.abs() <= ep_tol * sigma2 {
        return Ok(PhaseClass::ExceptionalPoint);
    }
    let ratio = p.gain() / p.sigma;
    if splitting < 0.0 {
        Ok(PhaseClass::Symmetric {
            alpha: ratio.clamp(-1.0, 1.0).acos(),
        })
    } else {
        Ok(PhaseClass::Broken {
            alpha_prime: ratio.abs().acosh(),
        })
    }
}

/// Closed-form eigenvalues, ordered like [`crate::algebra::eig2`].
///
/// σ = 0 is allowed here; the spectrum is then `ρe^{±iφ}` ordered by the
/// same formulas.
pub fn eigenvalues(p: &PTParams) -> (C64, C64) {
    eigenvalues_with_tol(p, DEFAULT_EP_TOL)
}

pub fn eigenvalues_with_tol(p: &PTParams, ep_tol: f64) -> (C64, C64) {
    let center = p.center();
    let splitting = p.splitting();
    let sigma2 = p.sigma * p.sigma;
    if splitting.abs() <= ep_tol * sigma2 {
        let e0 = C64::new(center, 0.0);
        (e0, e0)
    } else if splitting < 0.0 {
        let root = (-splitting).sqrt();
        (C64::new(center + root, 0.0), C64::new(center - root, 0.0))
    } else {
        let root = splitting.sqrt();
        (C64::new(center, root), C64::new(center, -root))
    }
}

/// Broken-phase parameters {ω, γ, α′}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivedBrokenParams {
    /// ρ cosφ
    pub omega: f64,
    /// √(ρ²sin²φ − σ²)
    pub gamma: f64,
    /// arcosh(ρ sinφ / σ)
    pub alpha_prime: f64,
}

impl DerivedBrokenParams {
    /// Fails unless `p` has ϕ = 0, lies strictly inside the broken phase and
    /// has ρ sinφ > 0 (so that α′ is real).
    pub fn from_pt(p: &PTParams) -> Result<Self> {
        p.validate()?;
        p.require_zero_phi()?;
        match classify(p, DEFAULT_EP_TOL)? {
            PhaseClass::Broken { .. } => {}
            _ => return Err(Error::NotBrokenPhase),
        }
        let gain = p.gain();
        if gain <= 0.0 {
            return Err(Error::NegativeRapidity { value: gain });
        }
        Ok(Self {
            omega: p.center(),
            gamma: p.splitting().sqrt(),
            alpha_prime: (gain / p.sigma).acosh(),
        })
    }

    pub fn new(omega: f64, gamma: f64, alpha_prime: f64) -> Result<Self> {
        if !(omega.is_finite() && gamma.is_finite() && alpha_prime.is_finite()) {
            return Err(Error::InvalidParams(
                "non-finite broken-phase parameter".into(),
            ));
        }
        if gamma <= 0.0 || alpha_prime <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "gamma and alpha' must be positive, got gamma = {gamma}, alpha' = {alpha_prime}"
            )));
        }
        Ok(Self {
            omega,
            gamma,
            alpha_prime,
        })
    }

    /// σ = γ / sinh α′
    pub fn sigma(&self) -> f64 {
        self.gamma / self.alpha_prime.sinh()
    }

    /// Inverse map back to (ρ, φ, σ) with ϕ = 0.
    pub fn to_pt(&self) -> PTParams {
        let gain = self.gamma / self.alpha_prime.tanh();
        let rho = self.omega.hypot(gain);
        PTParams {
            rho,
            varphi: (self.omega / rho).clamp(-1.0, 1.0).acos(),
            sigma: self.sigma(),
            phi: 0.0,
        }
    }

    /// E′± = ω ± iγ
    pub fn energies(&self) -> (C64, C64) {
        (
            C64::new(self.omega, self.gamma),
            C64::new(self.omega, -self.gamma),
        )
    }
}
