//! Shared sampling and oracle helpers for the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use pt2::meson::MesonParams;
use pt2::{expm_oracle, DerivedBrokenParams, Matrix2C, PTParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The Hamiltonian written out entry by entry, independent of `hamiltonian::build`.
pub fn hamiltonian_by_hand(rho: f64, varphi: f64, sigma: f64, phi: f64) -> Matrix2C {
    Matrix2C::new(
        C64::new(rho * varphi.cos(), rho * varphi.sin()),
        C64::new(sigma * phi.cos(), sigma * phi.sin()),
        C64::new(sigma * phi.cos(), -sigma * phi.sin()),
        C64::new(rho * varphi.cos(), -rho * varphi.sin()),
    )
}

/// A broken-phase point with ϕ = 0, sinφ > 0 and σ/(ρ sinφ) ∈ [0.05, 0.95],
/// which keeps α′ ∈ [0.32, 3.7] away from the exceptional point.
pub fn random_broken(rng: &mut impl Rng) -> PTParams {
    let rho = rng.gen_range(0.5..3.0);
    let varphi = rng.gen_range(0.1..(PI - 0.1));
    let ratio = rng.gen_range(0.05..0.95);
    let sigma = ratio * rho * varphi.sin();
    PTParams::with_zero_phi(rho, varphi, sigma).expect("sampled parameters are valid")
}

pub fn random_broken_derived(rng: &mut impl Rng) -> (PTParams, DerivedBrokenParams) {
    let p = random_broken(rng);
    let d = DerivedBrokenParams::from_pt(&p).expect("sampled point is in the broken phase");
    (p, d)
}

/// `[Paa, Pab, Pba, Pbb]` with `A_xy = e_yᵀ · P · U(t) · e_x`, U from the series oracle.
pub fn oracle_pt_probabilities(p: &PTParams, t: f64) -> [f64; 4] {
    let u = expm_oracle(&hamiltonian_by_hand(p.rho, p.varphi, p.sigma, p.phi), t)
        .expect("oracle converges");
    let pu = Matrix2C::parity() * u;
    // (PU)_{yx}: row = projection target y, column = initial state x
    [
        pu.m00.norm_sqr(),
        pu.m10.norm_sqr(),
        pu.m01.norm_sqr(),
        pu.m11.norm_sqr(),
    ]
}

/// |a − b| ≤ max(rel·|b|, floor)
pub fn close_rel(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= (rel * b.abs()).max(floor)
}

/// Relative deviation with an absolute floor, for reporting.
pub fn rel_dev(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

/// Meson parameters with positive-definite Γ and a generic complex mixing.
pub fn random_meson(rng: &mut impl Rng) -> MesonParams {
    let g11: f64 = rng.gen_range(0.5..2.0);
    let g22 = rng.gen_range(0.5..2.0);
    let bound = 0.9 * (g11 * g22).sqrt();
    let g12 = C64::from_polar(rng.gen_range(0.0..bound), rng.gen_range(-PI..PI));
    MesonParams {
        m11: rng.gen_range(-1.0..1.0),
        m22: rng.gen_range(-1.0..1.0),
        m12: C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        g11,
        g22,
        g12,
    }
}

/// A grid of `n` evenly spaced times on `[0, t_max]`.
pub fn time_grid(t_max: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| t_max * k as f64 / (n - 1) as f64)
}
