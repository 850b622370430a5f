//! Exceptional points of the open two-level Hamiltonian
//!
//! ```text
//!   H = [[ω₁ − iγ₁, κ], [κ, ω₂ − iγ₂]]
//! ```
//!
//! with eigenvalues `½[ω₁ + ω₂ − i(γ₁ + γ₂)] ± √Q` and
//! `Q = κ² + ¼[(ω₁−ω₂)² − (γ₁−γ₂)²] − (i/2)(ω₁−ω₂)(γ₁−γ₂)`.
//! An EP needs Q = 0 together with a non-vanishing coupling; Q = 0 at κ = 0
//! is a diagonal (diabolic) degeneracy.

use serde::{Deserialize, Serialize};

use crate::algebra::{principal_sqrt, Matrix2C, C64, DEGENERACY_SNAP, ZERO};
use crate::hamiltonian::{eigenvalues, PTParams};

pub const DEFAULT_EP_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpenSystemParams {
    pub omega1: f64,
    pub omega2: f64,
    /// Loss for positive values, gain for negative ones.
    pub gamma1: f64,
    pub gamma2: f64,
    pub kappa: f64,
}

impl OpenSystemParams {
    pub fn matrix(&self) -> Matrix2C {
        Matrix2C::new(
            C64::new(self.omega1, -self.gamma1),
            C64::new(self.kappa, 0.0),
            C64::new(self.kappa, 0.0),
            C64::new(self.omega2, -self.gamma2),
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.omega1,
            self.omega2,
            self.gamma1,
            self.gamma2,
            self.kappa,
        ]
        .iter()
        .all(|x| x.is_finite())
    }

    /// Embedding of the ϕ = 0 PT Hamiltonian: ω₁ = ω₂ = ρ cosφ,
    /// γ₁ = −γ₂ = ρ sinφ, κ = σ (same spectrum, parity-mirrored matrix).
    pub fn from_pt(p: &PTParams) -> Self {
        EPCase::CaseIII {
            omega: p.center(),
            gamma: p.gain(),
        }
        .params(p.sigma)
    }
}

/// The special parameter families with a known EP condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum EPCase {
    /// ω₁ = ω₂ = ω₀, arbitrary widths.
    CaseI {
        omega0: f64,
        gamma1: f64,
        gamma2: f64,
    },
    /// Passive PT: γ₁ = γ + χ, γ₂ = −γ + χ.
    CaseII { omega: f64, gamma: f64, chi: f64 },
    /// Balanced gain and loss: γ₁ = −γ₂ = γ.
    CaseIII { omega: f64, gamma: f64 },
    /// One lossy level: γ₁ = γ′, γ₂ = 0.
    CaseIV { omega_p: f64, gamma_p: f64 },
}

impl EPCase {
    pub fn params(&self, kappa: f64) -> OpenSystemParams {
        let (omega, gamma1, gamma2) = match *self {
            EPCase::CaseI {
                omega0,
                gamma1,
                gamma2,
            } => (omega0, gamma1, gamma2),
            EPCase::CaseII { omega, gamma, chi } => (omega, gamma + chi, -gamma + chi),
            EPCase::CaseIII { omega, gamma } => (omega, gamma, -gamma),
            EPCase::CaseIV { omega_p, gamma_p } => (omega_p, gamma_p, 0.0),
        };
        OpenSystemParams {
            omega1: omega,
            omega2: omega,
            gamma1,
            gamma2,
            kappa,
        }
    }

    /// Coupling strengths |κ| at which this family sits on an EP.
    pub fn critical_kappa(&self) -> f64 {
        match *self {
            EPCase::CaseI { gamma1, gamma2, .. } => 0.5 * (gamma1 - gamma2).abs(),
            EPCase::CaseII { gamma, .. } | EPCase::CaseIII { gamma, .. } => gamma.abs(),
            EPCase::CaseIV { gamma_p, .. } => 0.5 * gamma_p.abs(),
        }
    }

    /// The doubly degenerate eigenvalue on the EP.
    pub fn ep_eigenvalue(&self) -> C64 {
        let p = self.params(self.critical_kappa());
        C64::new(0.5 * (p.omega1 + p.omega2), -0.5 * (p.gamma1 + p.gamma2))
    }
}

pub fn discriminant_q(p: &OpenSystemParams) -> C64 {
    let dw = p.omega1 - p.omega2;
    let dg = p.gamma1 - p.gamma2;
    C64::new(
        p.kappa * p.kappa + 0.25 * (dw * dw - dg * dg),
        -0.5 * dw * dg,
    )
}

/// `λ± = ½[ω₁ + ω₂ − i(γ₁ + γ₂)] ± √Q` with the principal root.
///
/// Q is set to zero when it is within [`DEGENERACY_SNAP`] of the terms that
/// cancel in it, so rounding in ω₁ − ω₂ and γ₁ − γ₂ does not turn into a
/// √ε-sized splitting at an EP.
pub fn eigenvalues_open(p: &OpenSystemParams) -> (C64, C64) {
    let mean = C64::new(0.5 * (p.omega1 + p.omega2), -0.5 * (p.gamma1 + p.gamma2));
    let q = discriminant_q(p);
    let w = p.omega1.abs() + p.omega2.abs();
    let g = p.gamma1.abs() + p.gamma2.abs();
    let scale = p.kappa * p.kappa + 0.25 * (w * w + g * g);
    let root = if q.norm() <= DEGENERACY_SNAP * scale {
        ZERO
    } else {
        principal_sqrt(q)
    };
    (mean + root, mean - root)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpStatus {
    Exceptional,
    /// Q = 0 with vanishing coupling: degenerate but diagonalizable.
    DiabolicNotExceptional,
    Regular,
}

pub fn ep_status(p: &OpenSystemParams, tol: f64) -> EpStatus {
    let k2 = p.kappa * p.kappa;
    let bound = tol * (k2 + 1.0);
    if discriminant_q(p).norm() > bound {
        EpStatus::Regular
    } else if k2 <= bound {
        EpStatus::DiabolicNotExceptional
    } else {
        EpStatus::Exceptional
    }
}

/// `|Q| ≤ tol·(κ² + 1)` with a non-negligible coupling.
pub fn is_ep(p: &OpenSystemParams, tol: f64) -> bool {
    ep_status(p, tol) == EpStatus::Exceptional
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub params: OpenSystemParams,
    pub degenerate: C64,
}

/// All grid points that are EPs, each with its degenerate eigenvalue.
pub fn ep_locus_scan(grid: &[OpenSystemParams], tol: f64) -> Vec<LocusPoint> {
    grid.iter()
        .filter(|p| p.is_finite() && is_ep(p, tol))
        .map(|p| LocusPoint {
            params: *p,
            degenerate: eigenvalues_open(p).0,
        })
        .collect()
}

/// One EP of the ϕ = 0 PT Hamiltonian in normalized units (σ = 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedEp {
    /// ξ = ρ/σ
    pub xi: f64,
    pub sin_varphi: f64,
    /// λ₀/σ = ξ √(1 − sin²φ)
    pub lambda_over_sigma: f64,
}

/// EPs of the normalized family for each ξ ≥ 1: sinφ = ±1/ξ, λ₀/σ = √(ξ² − 1).
pub fn normalized_ep_locus(xis: &[f64]) -> Vec<NormalizedEp> {
    let mut out = Vec::new();
    for &xi in xis.iter().filter(|x| x.is_finite() && **x >= 1.0) {
        let lambda = (xi * xi - 1.0).sqrt();
        for s in [-1.0 / xi, 1.0 / xi] {
            out.push(NormalizedEp {
                xi,
                sin_varphi: s,
                lambda_over_sigma: lambda,
            });
        }
    }
    out
}

/// Normalized eigenvalues λ±/σ for ρ = ξσ at a given sinφ (cosφ ≥ 0 branch).
pub fn normalized_eigenvalues(xi: f64, sin_varphi: f64) -> (C64, C64) {
    let p = PTParams {
        rho: xi,
        varphi: sin_varphi.clamp(-1.0, 1.0).asin(),
        sigma: 1.0,
        phi: 0.0,
    };
    eigenvalues(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::eig2;

    #[test]
    fn q_without_differences_is_kappa_squared() {
        let p = OpenSystemParams {
            omega1: 1.2,
            omega2: 1.2,
            gamma1: 0.3,
            gamma2: 0.3,
            kappa: 0.7,
        };
        assert!((discriminant_q(&p) - C64::new(0.49, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn q_for_special_cases() {
        for chi in [0.0, 0.4, 7.0] {
            let q = discriminant_q(
                &EPCase::CaseII {
                    omega: 1.0,
                    gamma: 0.6,
                    chi,
                }
                .params(0.9),
            );
            assert!((q - C64::new(0.81 - 0.36, 0.0)).norm() < 1e-15);
        }
        let q = discriminant_q(
            &EPCase::CaseIV {
                omega_p: 2.0,
                gamma_p: 1.2,
            }
            .params(0.5),
        );
        assert!((q - C64::new(0.25 - 0.36, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn case_two_ep_eigenvalue() {
        let case = EPCase::CaseII {
            omega: 1.5,
            gamma: 0.8,
            chi: 0.3,
        };
        let (lp, lm) = eigenvalues_open(&case.params(0.8));
        assert!((lp - C64::new(1.5, -0.3)).norm() < 1e-15);
        assert!((lm - C64::new(1.5, -0.3)).norm() < 1e-15);
        assert!((case.ep_eigenvalue() - C64::new(1.5, -0.3)).norm() < 1e-15);
    }

    #[test]
    fn case_one_ep_eigenvalue() {
        let case = EPCase::CaseI {
            omega0: 0.5,
            gamma1: 1.0,
            gamma2: 0.2,
        };
        let (lp, lm) = eigenvalues_open(&case.params(0.4));
        assert_eq!(lp, lm);
        assert!((lp - C64::new(0.5, -0.6)).norm() < 1e-15);
    }

    #[test]
    fn ep_detection() {
        let iii = EPCase::CaseIII {
            omega: 0.0,
            gamma: 1.3,
        };
        assert!(is_ep(&iii.params(1.3), DEFAULT_EP_TOL));
        assert!(is_ep(&iii.params(-1.3), DEFAULT_EP_TOL));
        for chi in [0.0, 1.0, 10.0] {
            let ii = EPCase::CaseII {
                omega: 2.0,
                gamma: 0.5,
                chi,
            };
            assert!(!is_ep(&ii.params(0.7), DEFAULT_EP_TOL));
            assert!(is_ep(&ii.params(0.5), DEFAULT_EP_TOL));
        }
    }

    #[test]
    fn pt_embedding_ep() {
        let p = PTParams::with_zero_phi(2.0, (0.5f64).asin(), 1.0).unwrap();
        assert!(is_ep(&OpenSystemParams::from_pt(&p), DEFAULT_EP_TOL));
    }

    #[test]
    fn diagonal_degeneracy_is_not_an_ep() {
        let p = OpenSystemParams {
            omega1: 1.0,
            omega2: 1.0,
            gamma1: 0.2,
            gamma2: 0.2,
            kappa: 0.0,
        };
        assert_eq!(
            ep_status(&p, DEFAULT_EP_TOL),
            EpStatus::DiabolicNotExceptional
        );
        assert!(!is_ep(&p, DEFAULT_EP_TOL));
        assert!(!eig2(&p.matrix()).defective);
    }

    #[test]
    fn scan_picks_out_the_critical_coupling() {
        let case = EPCase::CaseIV {
            omega_p: 1.0,
            gamma_p: 2.0,
        };
        let grid: Vec<_> = (0..=40).map(|k| case.params(k as f64 * 0.05)).collect();
        let hits = ep_locus_scan(&grid, DEFAULT_EP_TOL);
        assert_eq!(hits.len(), 1);
        assert!((hits[0].params.kappa - 1.0).abs() < 1e-12);
        assert!((hits[0].degenerate - C64::new(1.0, -1.0)).norm() < 1e-6);
    }

    #[test]
    fn normalized_locus_values() {
        let locus = normalized_ep_locus(&[2.0, 3.0, 4.0]);
        assert_eq!(locus.len(), 6);
        assert_eq!(locus[1].sin_varphi, 0.5);
        assert!((locus[1].lambda_over_sigma - 3f64.sqrt()).abs() < 1e-15);
        assert!((locus[3].sin_varphi - 1.0 / 3.0).abs() < 1e-16);
        for pt in &locus {
            let (lp, lm) = normalized_eigenvalues(pt.xi, pt.sin_varphi);
            assert!((lp - lm).norm() < 1e-12);
            assert!((lp.re - pt.lambda_over_sigma).abs() < 1e-12);
        }
    }
}
