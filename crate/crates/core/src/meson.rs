//! Neutral-meson mixing and its passive-PT reading.
//!
//! The effective Hamiltonian is `H = M − (i/2)Γ` with Hermitian M and Γ in
//! the flavor basis `P⁰ = (1, 0)ᵀ`, `P̄⁰ = (0, 1)ᵀ`. With
//! `p² = M₁₂ − (i/2)Γ₁₂`, `q² = M₁₂* − (i/2)Γ₁₂*` and
//! `κ = [H₂₂ − H₁₁]/(2pq)` the eigenvalues are
//!
//! ```text
//!   E₁ = H₁₁ + pq[κ + √(1 + κ²)],   E₂ = H₂₂ − pq[κ + √(1 + κ²)]
//! ```
//!
//! and `z = κ/√(1 + κ²)`. A Hamiltonian with `M₁₁ = M₂₂`, real `M₁₂` and
//! `Γ₁₂ = 0` splits as a ϕ = 0 PT Hamiltonian minus `iχ·1`.

use serde::{Deserialize, Serialize};

use crate::algebra::{principal_sqrt, Matrix2C, Vector2C, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    build, classify, DerivedBrokenParams, PTParams, PhaseClass, DEFAULT_EP_TOL,
};

/// Entries of the Hermitian mass and width matrices.
///
/// Serialized as a flat object with keys `m11, m22, m12_re, m12_im, g11,
/// g22, g12_re, g12_im`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "FlatMesonParams", into = "FlatMesonParams")]
pub struct MesonParams {
    pub m11: f64,
    pub m22: f64,
    pub m12: C64,
    pub g11: f64,
    pub g22: f64,
    pub g12: C64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatMesonParams {
    m11: f64,
    m22: f64,
    m12_re: f64,
    m12_im: f64,
    g11: f64,
    g22: f64,
    g12_re: f64,
    g12_im: f64,
}

impl From<FlatMesonParams> for MesonParams {
    fn from(f: FlatMesonParams) -> Self {
        MesonParams {
            m11: f.m11,
            m22: f.m22,
            m12: C64::new(f.m12_re, f.m12_im),
            g11: f.g11,
            g22: f.g22,
            g12: C64::new(f.g12_re, f.g12_im),
        }
    }
}

impl From<MesonParams> for FlatMesonParams {
    fn from(p: MesonParams) -> Self {
        FlatMesonParams {
            m11: p.m11,
            m22: p.m22,
            m12_re: p.m12.re,
            m12_im: p.m12.im,
            g11: p.g11,
            g22: p.g22,
            g12_re: p.g12.re,
            g12_im: p.g12.im,
        }
    }
}

impl MesonParams {
    pub fn mass_matrix(&self) -> Matrix2C {
        Matrix2C::new(
            C64::new(self.m11, 0.0),
            self.m12,
            self.m12.conj(),
            C64::new(self.m22, 0.0),
        )
    }

    pub fn width_matrix(&self) -> Matrix2C {
        Matrix2C::new(
            C64::new(self.g11, 0.0),
            self.g12,
            self.g12.conj(),
            C64::new(self.g22, 0.0),
        )
    }

    /// `M − (i/2)Γ`
    pub fn hamiltonian(&self) -> Matrix2C {
        self.mass_matrix() - self.width_matrix().scale(C64::new(0.0, 0.5))
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.m11, self.m22, self.g11, self.g22]
            .iter()
            .all(|x| x.is_finite())
            && self.m12.is_finite()
            && self.g12.is_finite();
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidParams("non-finite meson parameter".into()))
        }
    }

    /// Forward passive-PT construction: `H_PT(ρ, φ, σ) − iχ·1`.
    pub fn from_passive(pt: &PTParams, chi: f64) -> Result<Self> {
        pt.validate()?;
        pt.require_zero_phi()?;
        if !chi.is_finite() {
            return Err(Error::InvalidParams("chi must be finite".into()));
        }
        let gain = pt.gain();
        Ok(MesonParams {
            m11: pt.center(),
            m22: pt.center(),
            m12: C64::new(pt.sigma, 0.0),
            g11: -2.0 * (gain - chi),
            g22: 2.0 * (gain + chi),
            g12: ZERO,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MesonSolution {
    pub m1: f64,
    pub m2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub p: C64,
    pub q: C64,
    pub kappa: C64,
    pub z: C64,
    /// 1/√(1 + κ²), the branch of √(1 − z²) consistent with the propagator.
    pub sqrt_one_minus_z2: C64,
    /// δm = M₁₁ − M₂₂
    pub small_dm: f64,
    /// Δm = M₂ − M₁
    pub big_dm: f64,
    /// δΓ = Γ₁₁ − Γ₂₂
    pub small_dg: f64,
    /// ΔΓ = Γ₂ − Γ₁
    pub big_dg: f64,
    /// Γ̄ = (Γ₁ + Γ₂)/2
    pub gamma_bar: f64,
}

impl MesonSolution {
    pub fn e1(&self) -> C64 {
        C64::new(self.m1, -0.5 * self.gamma1)
    }

    pub fn e2(&self) -> C64 {
        C64::new(self.m2, -0.5 * self.gamma2)
    }

    pub fn q_over_p(&self) -> C64 {
        self.q / self.p
    }

    /// z from mass and width differences, `(δm − iδΓ/2)/(Δm − iΔΓ/2)`.
    pub fn z_from_differences(&self) -> C64 {
        C64::new(self.small_dm, -0.5 * self.small_dg) / C64::new(self.big_dm, -0.5 * self.big_dg)
    }
}

/// √(1 + κ²) on the sheet where a negative real radicand gives `+i√|·|`.
fn mixing_root(w: C64) -> C64 {
    if w.im.abs() <= 1e-15 * w.norm() && w.re < 0.0 {
        C64::new(0.0, (-w.re).sqrt())
    } else {
        principal_sqrt(w)
    }
}

pub fn solve(params: &MesonParams) -> Result<MesonSolution> {
    params.validate()?;
    let h = params.hamiltonian();
    let p = principal_sqrt(h.m01);
    let q = principal_sqrt(h.m10);
    let pq = p * q;
    if pq == ZERO {
        return Err(Error::DegenerateMixing);
    }
    let kappa = (h.m11 - h.m00) / (pq * 2.0);
    let root = mixing_root(ONE + kappa * kappa);
    let shift = pq * (kappa + root);
    let e1 = h.m00 + shift;
    let e2 = h.m11 - shift;

    let (m1, gamma1) = (e1.re, -2.0 * e1.im);
    let (m2, gamma2) = (e2.re, -2.0 * e2.im);
    let z = kappa / root;
    Ok(MesonSolution {
        m1,
        m2,
        gamma1,
        gamma2,
        p,
        q,
        kappa,
        z,
        sqrt_one_minus_z2: if z == ZERO { ONE } else { root.inv() },
        small_dm: params.m11 - params.m22,
        big_dm: m2 - m1,
        small_dg: params.g11 - params.g22,
        big_dg: gamma2 - gamma1,
        gamma_bar: 0.5 * (gamma1 + gamma2),
    })
}

/// `g± = ½[e^{−iM₂t − Γ₂t/2} ± e^{−iM₁t − Γ₁t/2}]`
pub fn g_functions(sol: &MesonSolution, t: f64) -> (C64, C64) {
    let second = (-I * sol.e2() * t).exp();
    let first = (-I * sol.e1() * t).exp();
    ((second + first) * 0.5, (second - first) * 0.5)
}

/// `(⟨P⁰|P⁰(t)⟩, ⟨P̄⁰|P⁰(t)⟩)`
pub fn amplitudes(sol: &MesonSolution, t: f64) -> (C64, C64) {
    let (gp, gm) = g_functions(sol, t);
    (
        gp + sol.z * gm,
        -sol.q_over_p() * sol.sqrt_one_minus_z2 * gm,
    )
}

/// `|P⁰(t)⟩` as a flavor-basis vector.
pub fn evolved_p0(sol: &MesonSolution, t: f64) -> Vector2C {
    let (stay, flip) = amplitudes(sol, t);
    Vector2C::new(stay, flip)
}

/// `(P(P⁰→P⁰), P(P⁰→P̄⁰))` from the expanded real-valued formulas.
pub fn transition_probabilities(sol: &MesonSolution, t: f64) -> (f64, f64) {
    let d1 = (-sol.gamma1 * t).exp();
    let d2 = (-sol.gamma2 * t).exp();
    let avg = (-sol.gamma_bar * t).exp();
    let (sin, cos) = (sol.big_dm * t).sin_cos();
    let z = sol.z;
    let z2 = z.norm_sqr();

    let survive = 0.25 * (d1 + d2 + 2.0 * avg * cos)
        + 0.25 * (d1 + d2 - 2.0 * avg * cos) * z2
        + 0.5 * (d2 - d1) * z.re
        + avg * sin * z.im;

    let zz = z * z;
    let mix_factor = (1.0 - 2.0 * zz.re + z2 * z2).max(0.0).sqrt();
    let ratio = sol.q.norm_sqr() / sol.p.norm_sqr();
    let oscillate = 0.25 * ratio * (d1 + d2 - 2.0 * avg * cos) * mix_factor;
    (survive, oscillate)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PassiveDecomposition {
    pub pt: PTParams,
    /// Global decay rate.
    pub chi: f64,
    /// χ > γ, i.e. both eigen-widths are positive.
    pub widths_positive: bool,
}

impl PassiveDecomposition {
    pub fn broken(&self) -> Result<DerivedBrokenParams> {
        DerivedBrokenParams::from_pt(&self.pt)
    }

    /// `H_PT − iχ·1`
    pub fn hamiltonian(&self) -> Matrix2C {
        build(&self.pt) - Matrix2C::identity().scale(C64::new(0.0, self.chi))
    }
}

pub fn decompose_passive(params: &MesonParams, tol: f64) -> Result<PassiveDecomposition> {
    params.validate()?;
    if (params.m11 - params.m22).abs() > tol {
        return Err(Error::NotDecomposable(format!(
            "M11 = {} differs from M22 = {}",
            params.m11, params.m22
        )));
    }
    if params.g12.norm() > tol {
        return Err(Error::NotDecomposable(format!(
            "Gamma12 = {} is not zero",
            params.g12
        )));
    }
    if params.m12.im.abs() > tol {
        return Err(Error::NotDecomposable(format!(
            "M12 = {} is not real",
            params.m12
        )));
    }
    let sigma = params.m12.re;
    if sigma <= 0.0 {
        return Err(Error::NotDecomposable(format!(
            "M12 = {sigma} must be positive to match a phi = 0 coupling"
        )));
    }
    let center = 0.5 * (params.m11 + params.m22);
    let gain = 0.25 * (params.g22 - params.g11);
    let chi = 0.25 * (params.g11 + params.g22);
    let pt = PTParams::with_zero_phi(center.hypot(gain), gain.atan2(center), sigma)?;
    match classify(&pt, DEFAULT_EP_TOL)? {
        PhaseClass::Broken { .. } => {}
        _ => return Err(Error::NotBrokenPhase),
    }
    let gamma = pt.splitting().sqrt();
    Ok(PassiveDecomposition {
        pt,
        chi,
        widths_positive: chi > gamma,
    })
}

/// Ordinary-product probabilities of the passive system:
/// `P_aa = sinh²(α′+γt)/sinh²α′·e^{−2χt}`, `P_ab = sinh²(γt)/sinh²α′·e^{−2χt}`.
pub fn decayed_probabilities(pt: &PTParams, chi: f64, t: f64) -> Result<(f64, f64)> {
    let d = DerivedBrokenParams::from_pt(pt)?;
    if !(chi > d.gamma) {
        return Err(Error::WidthNotPositive {
            chi,
            gamma: d.gamma,
        });
    }
    let s2 = d.alpha_prime.sinh().powi(2);
    let decay = (-2.0 * chi * t).exp();
    let gt = d.gamma * t;
    Ok((
        (d.alpha_prime + gt).sinh().powi(2) / s2 * decay,
        gt.sinh().powi(2) / s2 * decay,
    ))
}

/// e^{+χt}: multiplying physical states by this removes the global decay.
pub fn gauge_transform_factor(chi: f64, t: f64) -> f64 {
    (chi * t).exp()
}

/// Meson C, P and CP in the flavor basis.
pub fn meson_discrete_ops() -> (Matrix2C, Matrix2C, Matrix2C) {
    (
        Matrix2C::real(0.0, -1.0, -1.0, 0.0),
        Matrix2C::real(-1.0, 0.0, 0.0, -1.0),
        Matrix2C::real(0.0, 1.0, 1.0, 0.0),
    )
}
