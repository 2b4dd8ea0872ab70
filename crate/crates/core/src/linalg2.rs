//! Complex scalars and 2×2 complex matrices.
//!
//! Only matrix-matrix products go through [`mat_mul`], which is the single
//! place a [`MulCounter`] is incremented. Scaling, addition, transposition and
//! traces are not counted.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`hermitian_eigenvalues`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex { re: 0.0, im: 0.0 };
    pub const ONE: Complex = Complex { re: 1.0, im: 0.0 };
    pub const I: Complex = Complex { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    /// `e^{iφ}`
    pub fn from_phase(phi: f64) -> Self {
        Self::new(phi.cos(), phi.sin())
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for Complex {
    fn add_assign(&mut self, rhs: Complex) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        Complex::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Mul<f64> for Complex {
    type Output = Complex;
    fn mul(self, rhs: f64) -> Complex {
        self.scale(rhs)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

/// 2×2 complex matrix, entries in row-major order `[m00, m01, m10, m11]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub entries: [Complex; 4],
}

impl Mat2 {
    pub const fn new(m00: Complex, m01: Complex, m10: Complex, m11: Complex) -> Self {
        Self {
            entries: [m00, m01, m10, m11],
        }
    }

    pub const fn from_real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Self::new(
            Complex::real(m00),
            Complex::real(m01),
            Complex::real(m10),
            Complex::real(m11),
        )
    }

    pub const fn zero() -> Self {
        Self::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub const fn identity() -> Self {
        Self::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub const fn pauli_x() -> Self {
        Self::from_real(0.0, 1.0, 1.0, 0.0)
    }

    pub const fn pauli_y() -> Self {
        Self::new(
            Complex::ZERO,
            Complex::new(0.0, -1.0),
            Complex::new(0.0, 1.0),
            Complex::ZERO,
        )
    }

    pub const fn pauli_z() -> Self {
        Self::from_real(1.0, 0.0, 0.0, -1.0)
    }

    pub const fn diag(a: f64, d: f64) -> Self {
        Self::from_real(a, 0.0, 0.0, d)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[2 * row + col]
    }

    pub fn scale(&self, k: f64) -> Self {
        self.map(|z| z.scale(k))
    }

    pub fn scale_complex(&self, k: Complex) -> Self {
        self.map(|z| k * z)
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let [a, b, c, d] = self.entries;
        Self::new(f(a), f(b), f(c), f(d))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.is_finite())
    }

    /// `max |m_ij − conj(m_ji)|` over all entries, diagonal included.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).abs());
            }
        }
        dev
    }

    /// `(A + A†)/2`
    pub fn hermitian_part(&self) -> Self {
        (*self + adjoint(self)).scale(0.5)
    }

    /// Largest entry-wise modulus of the imaginary parts.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = rhs.entries;
        Mat2::new(a + e, b + f, c + g, d + h)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = rhs.entries;
        Mat2::new(a - e, b - f, c - g, d - h)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|z| -z)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// Tally of 2×2 matrix-matrix products.
///
/// Owned by a single caller; parallel workers keep their own counters and the
/// caller merges them with [`MulCounter::merge`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MulCounter {
    count: u64,
}

impl MulCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn reset(&mut self) {
        self.count = 0;
    }

    pub fn merge(&mut self, other: &MulCounter) {
        self.count += other.count;
    }

    fn tick(&mut self) {
        self.count += 1;
    }
}

/// Exact 2×2 complex product `a·b`.
pub fn mat_mul(a: &Mat2, b: &Mat2, counter: Option<&mut MulCounter>) -> Mat2 {
    if let Some(c) = counter {
        c.tick();
    }
    let [a00, a01, a10, a11] = a.entries;
    let [b00, b01, b10, b11] = b.entries;
    Mat2::new(
        a00 * b00 + a01 * b10,
        a00 * b01 + a01 * b11,
        a10 * b00 + a11 * b10,
        a10 * b01 + a11 * b11,
    )
}

/// Conjugate transpose.
pub fn adjoint(a: &Mat2) -> Mat2 {
    let [a00, a01, a10, a11] = a.entries;
    Mat2::new(a00.conj(), a10.conj(), a01.conj(), a11.conj())
}

/// Plain transpose, no conjugation.
pub fn transpose(a: &Mat2) -> Mat2 {
    let [a00, a01, a10, a11] = a.entries;
    Mat2::new(a00, a10, a01, a11)
}

pub fn trace(a: &Mat2) -> Complex {
    a.entries[0] + a.entries[3]
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses the closed form `mean(diag) ± sqrt(((m00 − m11)/2)² + |m01|²)`; the
/// off-diagonal magnitude is averaged over both triangles.
pub fn hermitian_eigenvalues(a: &Mat2) -> Result<(f64, f64)> {
    let deviation = a.hermitian_deviation();
    if deviation.is_nan() || deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(eigenvalues_of_hermitian_part(a))
}

/// Closed-form eigenvalues of `(A + A†)/2`; no Hermiticity check.
pub(crate) fn eigenvalues_of_hermitian_part(a: &Mat2) -> (f64, f64) {
    let h = a.hermitian_part();
    let m00 = h.get(0, 0).re;
    let m11 = h.get(1, 1).re;
    let off = h.get(0, 1).abs();
    let mean = 0.5 * (m00 + m11);
    let half_gap = 0.5 * (m00 - m11);
    let radius = half_gap.hypot(off);
    (mean - radius, mean + radius)
}

/// Frobenius norm of `a − b`.
pub fn frobenius_dist(a: &Mat2, b: &Mat2) -> f64 {
    a.entries
        .iter()
        .zip(b.entries.iter())
        .map(|(x, y)| (*x - *y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

pub fn frobenius_norm(a: &Mat2) -> f64 {
    frobenius_dist(a, &Mat2::zero())
}

/// Seeded random density matrix `AA†/Tr(AA†)`, entries of `A` uniform in
/// `[−1, 1]` (imaginary parts zero when `real_only`).
pub fn random_density_matrix(seed: u64, real_only: bool) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut draw = || {
            let re = rng.gen_range(-1.0..=1.0);
            let im = if real_only {
                0.0
            } else {
                rng.gen_range(-1.0..=1.0)
            };
            Complex::new(re, im)
        };
        let a = Mat2::new(draw(), draw(), draw(), draw());
        let aa = mat_mul(&a, &adjoint(&a), None);
        let tr = trace(&aa).re;
        // A = 0 has probability zero but would divide by zero.
        if tr > 1e-6 {
            let rho = aa.hermitian_part().scale(1.0 / tr);
            return DensityMatrix::assume_valid(rho);
        }
    }
}
