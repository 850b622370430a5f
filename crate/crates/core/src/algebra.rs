//! 2×2 complex linear algebra and the brute-force time-evolution oracle.
//!
//! Everything downstream is expressed in terms of [`Matrix2C`] and
//! [`Vector2C`]. The oracle [`expm_oracle`] never diagonalizes: it sums the
//! exponential series on a scaled generator and squares back up, so it stays
//! independent of the closed-form results it is used to check.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Principal square root with a negative-zero imaginary part treated as `+0`.
///
/// `num_complex` honours signed zeros, so `sqrt(-4 - 0i)` is `-2i`. Every
/// closed form in this crate takes the root approached from the upper half
/// plane, so the sign of a zero imaginary part is discarded first.
pub fn principal_sqrt(z: C64) -> C64 {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    C64::new(z.re, im).sqrt()
}

/// Two-component complex state vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector2C {
    pub c0: C64,
    pub c1: C64,
}

impl Vector2C {
    pub const fn new(c0: C64, c1: C64) -> Self {
        Self { c0, c1 }
    }

    pub const fn real(c0: f64, c1: f64) -> Self {
        Self::new(C64::new(c0, 0.0), C64::new(c1, 0.0))
    }

    /// `(1, 0)ᵀ`
    pub const fn e0() -> Self {
        Self::real(1.0, 0.0)
    }

    /// `(0, 1)ᵀ`
    pub const fn e1() -> Self {
        Self::real(0.0, 1.0)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.c0.conj(), self.c1.conj())
    }

    /// Ordinary sesquilinear product `self† · other`.
    pub fn dagger_dot(&self, other: &Vector2C) -> C64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }

    pub fn norm(&self) -> f64 {
        (self.c0.norm_sqr() + self.c1.norm_sqr()).sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.c0 * s, self.c1 * s)
    }

    pub fn max_abs_diff(&self, other: &Vector2C) -> f64 {
        (self.c0 - other.c0).norm().max((self.c1 - other.c1).norm())
    }

    pub fn is_finite(&self) -> bool {
        self.c0.is_finite() && self.c1.is_finite()
    }

    pub fn as_array(&self) -> [C64; 2] {
        [self.c0, self.c1]
    }
}

impl Add for Vector2C {
    type Output = Vector2C;
    fn add(self, rhs: Vector2C) -> Vector2C {
        Vector2C::new(self.c0 + rhs.c0, self.c1 + rhs.c1)
    }
}

impl Sub for Vector2C {
    type Output = Vector2C;
    fn sub(self, rhs: Vector2C) -> Vector2C {
        Vector2C::new(self.c0 - rhs.c0, self.c1 - rhs.c1)
    }
}

impl Neg for Vector2C {
    type Output = Vector2C;
    fn neg(self) -> Vector2C {
        Vector2C::new(-self.c0, -self.c1)
    }
}

impl Mul<Vector2C> for C64 {
    type Output = Vector2C;
    fn mul(self, rhs: Vector2C) -> Vector2C {
        rhs.scale(self)
    }
}

impl fmt::Display for Vector2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c0, self.c1)
    }
}

/// 2×2 complex matrix, row-major entries `mRC`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix2C {
    pub m00: C64,
    pub m01: C64,
    pub m10: C64,
    pub m11: C64,
}

impl Matrix2C {
    pub const fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self { m00, m01, m10, m11 }
    }

    pub const fn real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Self::new(
            C64::new(m00, 0.0),
            C64::new(m01, 0.0),
            C64::new(m10, 0.0),
            C64::new(m11, 0.0),
        )
    }

    pub const fn identity() -> Self {
        Self::real(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn zero() -> Self {
        Self::real(0.0, 0.0, 0.0, 0.0)
    }

    /// The parity (basis swap) matrix `[[0, 1], [1, 0]]`.
    pub const fn parity() -> Self {
        Self::real(0.0, 1.0, 1.0, 0.0)
    }

    pub const fn diag(d0: C64, d1: C64) -> Self {
        Self::new(d0, ZERO, ZERO, d1)
    }

    /// Matrix whose columns are `a` and `b`.
    pub fn from_columns(a: Vector2C, b: Vector2C) -> Self {
        Self::new(a.c0, b.c0, a.c1, b.c1)
    }

    pub fn column(&self, j: usize) -> Vector2C {
        match j {
            0 => Vector2C::new(self.m00, self.m10),
            1 => Vector2C::new(self.m01, self.m11),
            _ => panic!("column index {j} out of range for a 2x2 matrix"),
        }
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.m00, self.m01, self.m10, self.m11]
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self::new(f(self.m00), f(self.m01), f(self.m10), f(self.m11))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m00, self.m10, self.m01, self.m11)
    }

    pub fn dagger(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> C64 {
        self.m00 + self.m11
    }

    pub fn det(&self) -> C64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    /// Inverse via the adjugate; `None` for an exactly singular matrix.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == ZERO {
            return None;
        }
        let inv = det.inv();
        Some(Self::new(
            self.m11 * inv,
            -self.m01 * inv,
            -self.m10 * inv,
            self.m00 * inv,
        ))
    }

    pub fn apply(&self, v: &Vector2C) -> Vector2C {
        Vector2C::new(
            self.m00 * v.c0 + self.m01 * v.c1,
            self.m10 * v.c0 + self.m11 * v.c1,
        )
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Matrix2C) -> Matrix2C {
        *self * *other - *other * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &Matrix2C) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }
}

impl Add for Matrix2C {
    type Output = Matrix2C;
    fn add(self, rhs: Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.m00 + rhs.m00,
            self.m01 + rhs.m01,
            self.m10 + rhs.m10,
            self.m11 + rhs.m11,
        )
    }
}

impl Sub for Matrix2C {
    type Output = Matrix2C;
    fn sub(self, rhs: Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.m00 - rhs.m00,
            self.m01 - rhs.m01,
            self.m10 - rhs.m10,
            self.m11 - rhs.m11,
        )
    }
}

impl Neg for Matrix2C {
    type Output = Matrix2C;
    fn neg(self) -> Matrix2C {
        self.map(|z| -z)
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;
    fn mul(self, rhs: Matrix2C) -> Matrix2C {
        mat_mul(&self, &rhs)
    }
}

impl Mul<Vector2C> for Matrix2C {
    type Output = Vector2C;
    fn mul(self, rhs: Vector2C) -> Vector2C {
        self.apply(&rhs)
    }
}

impl Mul<Matrix2C> for C64 {
    type Output = Matrix2C;
    fn mul(self, rhs: Matrix2C) -> Matrix2C {
        rhs.scale(self)
    }
}

impl fmt::Display for Matrix2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m00, self.m01, self.m10, self.m11
        )
    }
}

pub fn mat_mul(a: &Matrix2C, b: &Matrix2C) -> Matrix2C {
    Matrix2C::new(
        a.m00 * b.m00 + a.m01 * b.m10,
        a.m00 * b.m01 + a.m01 * b.m11,
        a.m10 * b.m00 + a.m11 * b.m10,
        a.m10 * b.m01 + a.m11 * b.m11,
    )
}

/// Agreement required between two successive refinements of the oracle.
pub const ORACLE_REL_TOL: f64 = 1e-13;
const ORACLE_MAX_HALVINGS: u32 = 24;
// the scaled generator is brought below this norm before the series is summed
const ORACLE_SCALED_NORM: f64 = 0.5;
const SERIES_MAX_TERMS: usize = 64;

/// `exp(-i·h·t)` by truncated series plus scaling-and-squaring.
///
/// The step count is increased one halving at a time until two successive
/// results agree entrywise within [`ORACLE_REL_TOL`] (relative to the larger
/// of the entry and the largest entry of the matrix).
pub fn expm_oracle(h: &Matrix2C, t: f64) -> Result<Matrix2C> {
    if !t.is_finite() || !h.is_finite() {
        return Err(Error::InvalidParams(
            "expm_oracle needs a finite generator and time".into(),
        ));
    }
    let generator = h.scale(C64::new(0.0, -t));
    let norm = one_norm(&generator);
    if norm == 0.0 {
        return Ok(Matrix2C::identity());
    }

    let mut squarings = 0u32;
    while norm / f64::powi(2.0, squarings as i32) > ORACLE_SCALED_NORM {
        squarings += 1;
    }

    let mut previous = scaled_series(&generator, squarings);
    for _ in 0..ORACLE_MAX_HALVINGS {
        squarings += 1;
        let current = scaled_series(&generator, squarings);
        if refinements_agree(&previous, &current) {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NonConvergence {
        halvings: ORACLE_MAX_HALVINGS,
    })
}

fn one_norm(m: &Matrix2C) -> f64 {
    (m.m00.norm() + m.m10.norm()).max(m.m01.norm() + m.m11.norm())
}

/// Series for `exp(A/2^s) − 1`, squared back up as `R ← 2R + R²`.
///
/// Carrying `R = e^A − 1` instead of `e^A` keeps the low-order bits that
/// would otherwise be lost next to the identity and then amplified by
/// every squaring.
fn scaled_series(generator: &Matrix2C, squarings: u32) -> Matrix2C {
    let scaled = generator.scale(C64::new(f64::powi(0.5, squarings as i32), 0.0));
    let mut sum = Matrix2C::zero();
    let mut term = Matrix2C::identity();
    for k in 1..SERIES_MAX_TERMS {
        term = (term * scaled).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum + term;
        if term.max_abs() <= f64::EPSILON * 1e-3 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.scale(C64::new(2.0, 0.0)) + sum * sum;
    }
    Matrix2C::identity() + sum
}

fn refinements_agree(a: &Matrix2C, b: &Matrix2C) -> bool {
    let floor = b.max_abs();
    a.entries()
        .iter()
        .zip(b.entries().iter())
        .all(|(x, y)| (x - y).norm() <= ORACLE_REL_TOL * y.norm().max(floor))
}

/// Eigen-decomposition of a 2×2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigen2 {
    /// Ordered by descending real part, ties by descending imaginary part.
    pub values: [C64; 2],
    /// Unnormalized right eigenvectors matching `values`.
    pub vectors: [Vector2C; 2],
    /// Set when the eigenvectors are linearly dependent (the matrix is defective).
    pub defective: bool,
}

/// Normalized determinant below which two eigenvectors count as parallel.
pub const DEFECT_TOL: f64 = 1e-10;
/// Discriminant (relative to the squared Frobenius norm) treated as an exact double root.
pub const DEGENERACY_SNAP: f64 = 1e-13;

/// Eigenvalues from the characteristic polynomial and right eigenvectors.
pub fn eig2(h: &Matrix2C) -> Eigen2 {
    let half_trace = h.trace() * 0.5;
    let half_split = (h.m00 - h.m11) * 0.5;
    let disc = half_split * half_split + h.m01 * h.m10;

    let scale = h.frobenius_sqr();
    let root = if disc.norm() <= DEGENERACY_SNAP * scale {
        ZERO
    } else {
        principal_sqrt(disc)
    };

    let mut values = [half_trace + root, half_trace - root];
    if descending(values[1], values[0]) {
        values.swap(0, 1);
    }

    let vectors = [
        eigenvector(h, values[0], Vector2C::e0()),
        eigenvector(h, values[1], Vector2C::e1()),
    ];
    let overlap = (vectors[0].c0 * vectors[1].c1 - vectors[0].c1 * vectors[1].c0).norm();
    let defective = overlap <= DEFECT_TOL * vectors[0].norm() * vectors[1].norm();

    Eigen2 {
        values,
        vectors,
        defective,
    }
}

/// True when `a` sorts before `b` in the eigenvalue order.
fn descending(a: C64, b: C64) -> bool {
    a.re > b.re || (a.re == b.re && a.im > b.im)
}

fn eigenvector(h: &Matrix2C, lambda: C64, fallback: Vector2C) -> Vector2C {
    let from_row0 = Vector2C::new(h.m01, lambda - h.m00);
    let from_row1 = Vector2C::new(lambda - h.m11, h.m10);
    let best = if from_row0.norm() >= from_row1.norm() {
        from_row0
    } else {
        from_row1
    };
    // h - λ·1 vanishes: every vector is an eigenvector
    if best.norm() <= f64::EPSILON * h.max_abs().max(f64::MIN_POSITIVE) {
        fallback
    } else {
        best
    }
}
