//! Normalized eigenvectors, metric and charge operators, and the bilinear
//! forms built from them.
//!
//! Symmetric phase (cos α = ρ sinφ / σ):
//!
//! ```text
//!   u₊ = (e^{+iπ/4} e^{−iα/2}, e^{−iπ/4} e^{+iα/2})ᵀ / √(2 sin α)
//!   u₋ = i (e^{+iπ/4} e^{+iα/2}, e^{−iπ/4} e^{−iα/2})ᵀ / √(2 sin α)
//!   η  = [[csc α, −i cot α], [+i cot α, csc α]]
//!   C  = [[+i cot α, csc α], [csc α, −i cot α]]
//! ```
//!
//! Broken phase (cosh α′ = ρ sinφ / σ), normalized so that the PT form pairs
//! u′₊ with u′₋:
//!
//! ```text
//!   u′₊ = (e^{+α′/2}, −i e^{−α′/2})ᵀ / √(2 sinh α′)
//!   u′₋ = (+i e^{−α′/2}, e^{+α′/2})ᵀ / √(2 sinh α′)
//!   η′ = P,  C = 1
//! ```
//!
//! The antilinear PT operation on a vector is always `P · conj(v)`.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::algebra::{principal_sqrt, Matrix2C, Vector2C, C64, I};
use crate::error::{Error, Result};
use crate::hamiltonian::{classify, DerivedBrokenParams, PTParams, PhaseClass};

/// Smallest sin α or sinh α′ for which eigenvector normalization is attempted.
pub const NEAR_EP_GUARD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerProductKind {
    /// ψ†χ
    Ordinary,
    /// ψ†Pχ
    PT,
    /// ψ†ηχ
    Eta,
    /// ψ†(PC)χ
    CPT,
}

/// Everything the biorthogonal machinery needs for one parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralData {
    pub phase: PhaseClass,
    pub e_plus: C64,
    pub e_minus: C64,
    pub u_plus: Vector2C,
    pub u_minus: Vector2C,
    /// Left-eigenvector carriers, `P·u±`.
    pub v_plus: Vector2C,
    pub v_minus: Vector2C,
    pub eta: Matrix2C,
    pub c_op: Matrix2C,
}

impl SpectralData {
    /// Spectral data for a ϕ = 0 Hamiltonian away from the exceptional point.
    pub fn new(p: &PTParams, ep_tol: f64) -> Result<Self> {
        p.require_zero_phi()?;
        let phase = classify(p, ep_tol)?;
        let (e_plus, e_minus, (u_plus, u_minus)) = match phase {
            PhaseClass::Symmetric { alpha } => {
                let split = p.sigma * alpha.sin();
                (
                    C64::new(p.center() + split, 0.0),
                    C64::new(p.center() - split, 0.0),
                    eigvecs_symmetric(alpha)?,
                )
            }
            PhaseClass::Broken { .. } => {
                let d = DerivedBrokenParams::from_pt(p)?;
                let (ep, em) = d.energies();
                (ep, em, eigvecs_broken(d.alpha_prime)?)
            }
            PhaseClass::ExceptionalPoint => return Err(Error::EPHasNoMetric),
        };
        let parity = Matrix2C::parity();
        Ok(Self {
            phase,
            e_plus,
            e_minus,
            u_plus,
            u_minus,
            v_plus: parity * u_plus,
            v_minus: parity * u_minus,
            eta: metric(&phase)?,
            c_op: charge_op(&phase)?,
        })
    }

    pub fn inner(&self, kind: InnerProductKind, psi: &Vector2C, chi: &Vector2C) -> Result<C64> {
        inner(kind, &self.phase, psi, chi)
    }
}

pub fn eigvecs_symmetric(alpha: f64) -> Result<(Vector2C, Vector2C)> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::AlphaOutOfRange { value: alpha });
    }
    let s = alpha.sin();
    if s < NEAR_EP_GUARD {
        return Err(Error::NearEP { value: s });
    }
    let norm = C64::new(1.0 / (2.0 * s).sqrt(), 0.0);
    let plus = Vector2C::new(
        C64::from_polar(1.0, FRAC_PI_4 - alpha / 2.0),
        C64::from_polar(1.0, -FRAC_PI_4 + alpha / 2.0),
    );
    let minus = Vector2C::new(
        C64::from_polar(1.0, FRAC_PI_4 + alpha / 2.0),
        C64::from_polar(1.0, -FRAC_PI_4 - alpha / 2.0),
    );
    Ok((plus.scale(norm), minus.scale(I * norm)))
}

pub fn eigvecs_broken(alpha_prime: f64) -> Result<(Vector2C, Vector2C)> {
    if !(alpha_prime > 0.0) || !alpha_prime.is_finite() {
        return Err(Error::AlphaOutOfRange { value: alpha_prime });
    }
    let s = alpha_prime.sinh();
    if s < NEAR_EP_GUARD {
        return Err(Error::NearEP { value: s });
    }
    eigvecs_broken_complex(C64::new(alpha_prime, 0.0))
}

/// Broken-phase eigenvector formulas continued to complex α′.
///
/// At α′ = −iα with α ∈ (0, π) this reproduces [`eigvecs_symmetric`];
/// the normalization uses the principal root of 2 sinh α′.
pub fn eigvecs_broken_complex(alpha_prime: C64) -> Result<(Vector2C, Vector2C)> {
    let s = alpha_prime.sinh();
    if s.norm() < NEAR_EP_GUARD {
        return Err(Error::NearEP { value: s.norm() });
    }
    let norm = principal_sqrt(s * 2.0).inv();
    let grow = (alpha_prime * 0.5).exp();
    let shrink = (-alpha_prime * 0.5).exp();
    let plus = Vector2C::new(grow, -I * shrink);
    let minus = Vector2C::new(I * shrink, grow);
    Ok((plus.scale(norm), minus.scale(norm)))
}

/// E′± = ω ± iσ sinh α′, valid for complex α′.
pub fn energies_broken_complex(center: f64, sigma: f64, alpha_prime: C64) -> (C64, C64) {
    let split = I * alpha_prime.sinh() * sigma;
    (center + split, center - split)
}

/// Normalized eigenvector at the exceptional point, (e^{iπ/4}, e^{−iπ/4})ᵀ/√2.
pub fn ep_state() -> Vector2C {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Vector2C::new(
        C64::from_polar(h, FRAC_PI_4),
        C64::from_polar(h, -FRAC_PI_4),
    )
}

pub fn metric(phase: &PhaseClass) -> Result<Matrix2C> {
    match *phase {
        PhaseClass::Symmetric { alpha } => {
            let (csc, cot) = csc_cot(alpha)?;
            Ok(Matrix2C::new(
                C64::new(csc, 0.0),
                C64::new(0.0, -cot),
                C64::new(0.0, cot),
                C64::new(csc, 0.0),
            ))
        }
        PhaseClass::Broken { .. } => Ok(Matrix2C::parity()),
        PhaseClass::ExceptionalPoint => Err(Error::EPHasNoMetric),
    }
}

pub fn charge_op(phase: &PhaseClass) -> Result<Matrix2C> {
    match *phase {
        PhaseClass::Symmetric { alpha } => {
            let (csc, cot) = csc_cot(alpha)?;
            Ok(Matrix2C::new(
                C64::new(0.0, cot),
                C64::new(csc, 0.0),
                C64::new(csc, 0.0),
                C64::new(0.0, -cot),
            ))
        }
        PhaseClass::Broken { .. } => Ok(Matrix2C::identity()),
        PhaseClass::ExceptionalPoint => Err(Error::EPHasNoMetric),
    }
}

fn csc_cot(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::AlphaOutOfRange { value: alpha });
    }
    let s = alpha.sin();
    Ok((1.0 / s, alpha.cos() / s))
}

/// The matrix sandwiched between ψ† and χ for each kind of product.
pub fn pairing_matrix(kind: InnerProductKind, phase: &PhaseClass) -> Result<Matrix2C> {
    match kind {
        InnerProductKind::Ordinary => Ok(Matrix2C::identity()),
        InnerProductKind::PT => Ok(Matrix2C::parity()),
        InnerProductKind::Eta => metric(phase),
        InnerProductKind::CPT => Ok(Matrix2C::parity() * charge_op(phase)?),
    }
}

pub fn inner(
    kind: InnerProductKind,
    phase: &PhaseClass,
    psi: &Vector2C,
    chi: &Vector2C,
) -> Result<C64> {
    let m = pairing_matrix(kind, phase)?;
    Ok(psi.dagger_dot(&(m * *chi)))
}

/// PT acting on a vector: `P · conj(v)`.
pub fn pt_apply(v: &Vector2C) -> Vector2C {
    Matrix2C::parity() * v.conj()
}

/// CPT acting on a vector: `C · P · conj(v)`.
pub fn cpt_apply(phase: &PhaseClass, v: &Vector2C) -> Result<Vector2C> {
    Ok(charge_op(phase)? * pt_apply(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ONE;
    use crate::hamiltonian::{build, DEFAULT_EP_TOL};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn broken_phase(alpha_prime: f64) -> PhaseClass {
        PhaseClass::Broken { alpha_prime }
    }

    #[test]
    fn symmetric_vectors_at_hermitian_point() {
        let (up, um) = eigvecs_symmetric(FRAC_PI_2).unwrap();
        for c in [up.c0, up.c1, um.c0, um.c1] {
            assert!((c.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn symmetric_vectors_are_pt_eigenstates() {
        let (up, um) = eigvecs_symmetric(FRAC_PI_3).unwrap();
        assert!(pt_apply(&up).max_abs_diff(&up) < 1e-15);
        assert!(pt_apply(&um).max_abs_diff(&(-um)) < 1e-15);
    }

    #[test]
    fn symmetric_guards() {
        assert!(matches!(
            eigvecs_symmetric(0.0),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            eigvecs_symmetric(PI),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(matches!(eigvecs_symmetric(1e-9), Err(Error::NearEP { .. })));
    }

    #[test]
    fn broken_pt_normalization() {
        let ap = 2f64.acosh();
        let (up, um) = eigvecs_broken(ap).unwrap();
        let phase = broken_phase(ap);
        let pp = inner(InnerProductKind::PT, &phase, &up, &up).unwrap();
        let pm = inner(InnerProductKind::PT, &phase, &up, &um).unwrap();
        let mp = inner(InnerProductKind::PT, &phase, &um, &up).unwrap();
        assert!(pp.norm() < 1e-15);
        assert!((pm - ONE).norm() < 1e-14);
        assert!((mp - ONE).norm() < 1e-14);
    }

    #[test]
    fn broken_vectors_swap_under_pt() {
        let (up, um) = eigvecs_broken(1.0).unwrap();
        assert!(pt_apply(&up).max_abs_diff(&um) < 1e-15);
        assert!(pt_apply(&um).max_abs_diff(&up) < 1e-15);
    }

    #[test]
    fn broken_guards() {
        assert!(matches!(
            eigvecs_broken(0.0),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            eigvecs_broken(-1.0),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(matches!(eigvecs_broken(1e-9), Err(Error::NearEP { .. })));
    }

    #[test]
    fn continuation_reproduces_symmetric_vectors() {
        let alpha = 0.9;
        let (sp, sm) = eigvecs_symmetric(alpha).unwrap();
        let (bp, bm) = eigvecs_broken_complex(C64::new(0.0, -alpha)).unwrap();
        assert!(sp.max_abs_diff(&bp) < 1e-15);
        assert!(sm.max_abs_diff(&bm) < 1e-15);
    }

    #[test]
    fn ep_state_properties() {
        let u0 = ep_state();
        assert!((u0.dagger_dot(&u0) - ONE).norm() < 1e-15);
        assert!(pt_apply(&u0).max_abs_diff(&u0) < 1e-16);
        let p = PTParams::with_zero_phi(2.0, (0.5f64).asin(), 1.0).unwrap();
        let h = build(&p);
        let residual = h * u0 - u0.scale(C64::new(p.center(), 0.0));
        assert!(residual.norm() < 1e-15);
    }

    #[test]
    fn metric_and_charge_constants() {
        for ap in [0.01, 1.0, 4.0] {
            assert_eq!(metric(&broken_phase(ap)).unwrap(), Matrix2C::parity());
            assert_eq!(charge_op(&broken_phase(ap)).unwrap(), Matrix2C::identity());
        }
        let eta = metric(&PhaseClass::Symmetric { alpha: FRAC_PI_2 }).unwrap();
        assert!(eta.max_abs_diff(&Matrix2C::identity()) < 1e-16);
        assert_eq!(
            metric(&PhaseClass::ExceptionalPoint),
            Err(Error::EPHasNoMetric)
        );
        assert_eq!(
            charge_op(&PhaseClass::ExceptionalPoint),
            Err(Error::EPHasNoMetric)
        );
    }

    #[test]
    fn symmetric_operator_identities() {
        let p = PTParams::with_zero_phi(2.0, (0.25f64).asin(), 1.0).unwrap();
        let data = SpectralData::new(&p, DEFAULT_EP_TOL).unwrap();
        let h = build(&p);
        let eta_inv = data.eta.inverse().unwrap();
        assert!((data.eta * h * eta_inv).max_abs_diff(&h.dagger()) < 1e-12);
        assert!(data.c_op.commutator(&h).max_abs() < 1e-12);
        assert!((data.c_op * data.c_op).max_abs_diff(&Matrix2C::identity()) < 1e-14);
    }

    #[test]
    fn spectral_data_residuals() {
        for p in [
            PTParams::with_zero_phi(2.0, FRAC_PI_2, 1.0).unwrap(),
            PTParams::with_zero_phi(1.0, -0.4, 0.9).unwrap(),
            PTParams::with_zero_phi(3.0, 2.5, 1.2).unwrap(),
        ] {
            let d = SpectralData::new(&p, DEFAULT_EP_TOL).unwrap();
            let h = build(&p);
            assert!((h * d.u_plus - d.u_plus.scale(d.e_plus)).norm() < 1e-12);
            assert!((h * d.u_minus - d.u_minus.scale(d.e_minus)).norm() < 1e-12);
            let hd = h.dagger();
            assert!((hd * d.v_plus - d.v_plus.scale(d.e_plus)).norm() < 1e-12);
            assert!((hd * d.v_minus - d.v_minus.scale(d.e_minus)).norm() < 1e-12);
        }
    }

    #[test]
    fn spectral_data_at_ep_fails() {
        let p = PTParams::with_zero_phi(2.0, (0.5f64).asin(), 1.0).unwrap();
        assert_eq!(
            SpectralData::new(&p, DEFAULT_EP_TOL),
            Err(Error::EPHasNoMetric)
        );
    }

    #[test]
    fn broken_phase_products_coincide() {
        let phase = broken_phase(0.7);
        let psi = Vector2C::new(C64::new(0.3, -1.0), C64::new(2.0, 0.5));
        let chi = Vector2C::new(C64::new(-0.2, 0.1), C64::new(1.5, -0.7));
        let pt = inner(InnerProductKind::PT, &phase, &psi, &chi).unwrap();
        let eta = inner(InnerProductKind::Eta, &phase, &psi, &chi).unwrap();
        let cpt = inner(InnerProductKind::CPT, &phase, &psi, &chi).unwrap();
        assert_eq!(pt, eta);
        assert_eq!(pt, cpt);
    }
}
