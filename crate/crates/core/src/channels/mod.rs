//! Depolarizing channels on a single qubit.
//!
//! Two direct evaluations are provided:
//!
//! * the standard channel `(1−p)ρ + (p/3)(XρX + YρY + ZρZ)`, six products;
//! * the modified channel `(1−2p/3)ρ + (2p/3)·Z((ρX)ᵀX)Z`, four products.
//!
//! For any unit-trace `ρ` both equal `(1−4p/3)ρ + (2p/3)𝕀`, so they agree
//! entry for entry. The modified *Kraus* pair `{√(1−2p/3)𝕀, i√(2p/3)ZX}` is a
//! different map: `ZX = iY`, so it applies `YρY` rather than `Yρᵀ Y`. The two
//! coincide exactly when `ρ = ρᵀ`, i.e. for real-entried states, and always
//! share their diagonal.
//!
//! The evaluation order inside each routine is fixed; multiplication counts
//! reported through [`MulCounter`] depend on it.

mod sweep;

use std::fmt;
use std::str::FromStr;

pub use sweep::{
    alternating_circuit, expectation_sweep, SweepCell, SweepGrid, SweepPlacement, SWEEP_CSV_HEADER,
};

use crate::error::{Error, Result};
use crate::gates::conjugate;
use crate::linalg2::{
    adjoint, eigenvalues_of_hermitian_part, frobenius_dist, mat_mul, trace, transpose, Complex,
    Mat2, MulCounter,
};

/// Tolerance for the density-matrix invariants.
pub const DENSITY_TOL: f64 = 1e-10;
/// Tolerance for Kraus completeness accepted by [`kraus_apply`].
pub const COMPLETENESS_TOL: f64 = 1e-12;
/// Largest imaginary part tolerated in a trace that should be real.
pub const EXPVAL_IMAG_TOL: f64 = 1e-10;

/// Hermitian, positive semi-definite, unit-trace 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: Mat2,
}

impl DensityMatrix {
    /// Validates `mat` at [`DENSITY_TOL`].
    pub fn new(mat: Mat2) -> Result<Self> {
        let report = validate_density(&mat, DENSITY_TOL);
        if report.pass {
            Ok(Self { mat })
        } else {
            Err(Error::InvalidDensity(report))
        }
    }

    /// Wraps a matrix produced by a validity-preserving map.
    pub(crate) fn assume_valid(mat: Mat2) -> Self {
        debug_assert!(mat.is_finite());
        Self { mat }
    }

    /// `|0⟩⟨0|`
    pub fn ket0() -> Self {
        Self::assume_valid(Mat2::diag(1.0, 0.0))
    }

    /// `|1⟩⟨1|`
    pub fn ket1() -> Self {
        Self::assume_valid(Mat2::diag(0.0, 1.0))
    }

    /// `𝕀/2`
    pub fn maximally_mixed() -> Self {
        Self::assume_valid(Mat2::diag(0.5, 0.5))
    }

    /// `|ψ⟩⟨ψ|` for `|ψ⟩ = a|0⟩ + b|1⟩`, normalized here.
    pub fn from_pure(a: Complex, b: Complex) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::Input(
                "state vector must be nonzero and finite".into(),
            ));
        }
        let k = 1.0 / norm_sqr;
        let off = (a * b.conj()).scale(k);
        Ok(Self::assume_valid(Mat2::new(
            Complex::real(a.norm_sqr() * k),
            off,
            off.conj(),
            Complex::real(b.norm_sqr() * k),
        )))
    }

    pub fn mat(&self) -> &Mat2 {
        &self.mat
    }

    pub fn into_mat(self) -> Mat2 {
        self.mat
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Standard,
    Modified,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Standard => "standard",
            ChannelKind::Modified => "modified",
        })
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" => Ok(ChannelKind::Standard),
            "modified" => Ok(ChannelKind::Modified),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Depolarization rate `p ∈ [0, 1]` and repetition count `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolarizationParams {
    p: f64,
    m: usize,
}

impl DepolarizationParams {
    pub fn new(p: f64, m: usize) -> Result<Self> {
        check_rate(p)?;
        Ok(Self { p, m })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

pub fn check_rate(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidRate(p))
    }
}

/// Kraus operators of a channel, optionally tagged with the channel they
/// implement.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<Mat2>,
    kind: Option<ChannelKind>,
}

impl KrausSet {
    /// An untagged operator list. Completeness is checked on use.
    pub fn new(operators: Vec<Mat2>) -> Self {
        Self {
            operators,
            kind: None,
        }
    }

    pub fn operators(&self) -> &[Mat2] {
        &self.operators
    }

    pub fn kind(&self) -> Option<ChannelKind> {
        self.kind
    }

    /// `‖Σᵢ Kᵢ†Kᵢ − 𝕀‖_F`
    pub fn completeness_deviation(&self) -> f64 {
        let sum = self
            .operators
            .iter()
            .fold(Mat2::zero(), |acc, k| acc + mat_mul(&adjoint(k), k, None));
        frobenius_dist(&sum, &Mat2::identity())
    }
}

/// Hermitian observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    mat: Mat2,
}

impl Observable {
    pub fn new(mat: Mat2) -> Result<Self> {
        let deviation = mat.hermitian_deviation();
        if deviation <= DENSITY_TOL {
            Ok(Self { mat })
        } else {
            Err(Error::NotHermitian { deviation })
        }
    }

    pub fn pauli_x() -> Self {
        Self {
            mat: Mat2::pauli_x(),
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            mat: Mat2::pauli_y(),
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            mat: Mat2::pauli_z(),
        }
    }

    pub fn mat(&self) -> &Mat2 {
        &self.mat
    }
}

/// Outcome of checking the three density-matrix conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport {
    pub hermitian_dev: f64,
    pub min_eigenvalue: f64,
    pub trace_dev: f64,
    pub pass: bool,
}

/// Checks Hermiticity, positive semi-definiteness and unit trace at `tol`.
///
/// The minimum eigenvalue is taken from the Hermitian part of the candidate,
/// so it is reported even when the Hermiticity check fails.
pub fn validate_density(candidate: &Mat2, tol: f64) -> ValidityReport {
    if !candidate.is_finite() {
        return ValidityReport {
            hermitian_dev: f64::NAN,
            min_eigenvalue: f64::NAN,
            trace_dev: f64::NAN,
            pass: false,
        };
    }
    let hermitian_dev = candidate.hermitian_deviation();
    let (min_eigenvalue, _) = eigenvalues_of_hermitian_part(candidate);
    let trace_dev = (trace(candidate) - Complex::ONE).abs();
    let pass = hermitian_dev <= tol && min_eigenvalue >= -tol && trace_dev <= tol;
    ValidityReport {
        hermitian_dev,
        min_eigenvalue,
        trace_dev,
        pass,
    }
}

/// `(1−w)ρ + (w/3)(XρX + YρY + ZρZ)`, evaluated as XρX, YρY, ZρZ.
fn standard_affine(rho: &Mat2, weight: f64, mut counter: Option<&mut MulCounter>) -> Mat2 {
    let xrx = conjugate(&Mat2::pauli_x(), rho, counter.as_deref_mut());
    let yry = conjugate(&Mat2::pauli_y(), rho, counter.as_deref_mut());
    let zrz = conjugate(&Mat2::pauli_z(), rho, counter);
    rho.scale(1.0 - weight) + (xrx + yry + zrz).scale(weight / 3.0)
}

/// `Z((ρX)ᵀX)Z` as `t₁ = ρX`, `t₂ = t₁ᵀX`, `t₃ = Z t₂`, `t₄ = t₃ Z`.
fn modified_term(rho: &Mat2, mut counter: Option<&mut MulCounter>) -> Mat2 {
    let x = Mat2::pauli_x();
    let z = Mat2::pauli_z();
    let t1 = mat_mul(rho, &x, counter.as_deref_mut());
    let t2 = mat_mul(&transpose(&t1), &x, counter.as_deref_mut());
    let t3 = mat_mul(&z, &t2, counter.as_deref_mut());
    mat_mul(&t3, &z, counter)
}

/// `(1−2w/3)ρ + (2w/3)Z((ρX)ᵀX)Z`
fn modified_affine(rho: &Mat2, weight: f64, counter: Option<&mut MulCounter>) -> Mat2 {
    let flipped = modified_term(rho, counter);
    let mix = 2.0 * weight / 3.0;
    rho.scale(1.0 - mix) + flipped.scale(mix)
}

/// Standard depolarizing channel; six counted products.
pub fn depolarize_standard(
    rho: &DensityMatrix,
    p: f64,
    counter: Option<&mut MulCounter>,
) -> Result<DensityMatrix> {
    check_rate(p)?;
    Ok(DensityMatrix::assume_valid(standard_affine(
        rho.mat(),
        p,
        counter,
    )))
}

/// Modified depolarizing channel; four counted products.
pub fn depolarize_modified(
    rho: &DensityMatrix,
    p: f64,
    counter: Option<&mut MulCounter>,
) -> Result<DensityMatrix> {
    check_rate(p)?;
    Ok(DensityMatrix::assume_valid(modified_affine(
        rho.mat(),
        p,
        counter,
    )))
}

/// One application of the direct formula for `kind`.
pub fn depolarize(
    kind: ChannelKind,
    rho: &DensityMatrix,
    p: f64,
    counter: Option<&mut MulCounter>,
) -> Result<DensityMatrix> {
    match kind {
        ChannelKind::Standard => depolarize_standard(rho, p, counter),
        ChannelKind::Modified => depolarize_modified(rho, p, counter),
    }
}

/// Kraus operators of either channel at rate `p`.
pub fn make_kraus(kind: ChannelKind, p: f64) -> Result<KrausSet> {
    check_rate(p)?;
    let operators = match kind {
        ChannelKind::Standard => {
            let w = (p / 3.0).sqrt();
            vec![
                Mat2::identity().scale((1.0 - p).sqrt()),
                Mat2::pauli_x().scale(w),
                Mat2::pauli_y().scale(w),
                Mat2::pauli_z().scale(w),
            ]
        }
        ChannelKind::Modified => {
            let mix = 2.0 * p / 3.0;
            let zx = mat_mul(&Mat2::pauli_z(), &Mat2::pauli_x(), None);
            vec![
                Mat2::identity().scale((1.0 - mix).sqrt()),
                zx.scale_complex(Complex::new(0.0, mix.sqrt())),
            ]
        }
    };
    Ok(KrausSet {
        operators,
        kind: Some(kind),
    })
}

/// `Σᵢ KᵢρKᵢ†`; two counted products per operator.
pub fn kraus_apply(
    rho: &DensityMatrix,
    ks: &KrausSet,
    mut counter: Option<&mut MulCounter>,
) -> Result<DensityMatrix> {
    let deviation = ks.completeness_deviation();
    if deviation.is_nan() || deviation > COMPLETENESS_TOL {
        return Err(Error::IncompleteKraus { deviation });
    }
    let out = ks.operators().iter().fold(Mat2::zero(), |acc, k| {
        acc + conjugate(k, rho.mat(), counter.as_deref_mut())
    });
    Ok(DensityMatrix::assume_valid(out))
}

/// One direct application on a raw matrix; `p` is assumed already checked.
pub(crate) fn depolarize_raw(kind: ChannelKind, rho: &Mat2, p: f64) -> Mat2 {
    match kind {
        ChannelKind::Standard => standard_affine(rho, p, None),
        ChannelKind::Modified => modified_affine(rho, p, None),
    }
}

/// Applies the direct channel `m` times in sequence.
pub fn iterate_channel(
    rho: &DensityMatrix,
    p: f64,
    m: usize,
    kind: ChannelKind,
) -> Result<DensityMatrix> {
    check_rate(p)?;
    let mut state = *rho;
    for _ in 0..m {
        state = depolarize(kind, &state, p, None)?;
    }
    Ok(state)
}

/// First-order `m`-fold modified channel,
/// `(1−2mp/3)ρ + (2mp/3)Z((ρX)ᵀX)Z`.
///
/// Returned as a raw matrix: for large `mp` the truncation is not PSD.
pub fn first_order_modified_m(rho: &DensityMatrix, p: f64, m: usize) -> Result<Mat2> {
    check_rate(p)?;
    Ok(first_order_modified_raw(rho.mat(), p, m, None))
}

/// First-order `m`-fold standard channel,
/// `(1−mp)ρ + (mp/3)(XρX + YρY + ZρZ)`.
pub fn first_order_standard_m(rho: &DensityMatrix, p: f64, m: usize) -> Result<Mat2> {
    check_rate(p)?;
    Ok(standard_affine(rho.mat(), m as f64 * p, None))
}

pub(crate) fn first_order_modified_raw(
    rho: &Mat2,
    p: f64,
    m: usize,
    counter: Option<&mut MulCounter>,
) -> Mat2 {
    modified_affine(rho, m as f64 * p, counter)
}

/// `Re Tr(Oρ)`; one counted product.
pub fn expval(obs: &Observable, rho: &Mat2, counter: Option<&mut MulCounter>) -> Result<f64> {
    real_trace(&mat_mul(obs.mat(), rho, counter))
}

fn real_trace(a: &Mat2) -> Result<f64> {
    let tr = trace(a);
    if tr.im.abs() > EXPVAL_IMAG_TOL || !tr.is_finite() {
        return Err(Error::NonRealExpectation { imag: tr.im });
    }
    Ok(tr.re)
}

/// `Tr{Oρ} − (2mp/3)Tr{Oρ} + (2mp/3)Tr{O·Z((ρX)ᵀX)Z}`.
///
/// Four products build the flipped state and two more form the traces.
pub fn expval_modified_m(
    obs: &Observable,
    rho: &DensityMatrix,
    p: f64,
    m: usize,
    counter: &mut MulCounter,
) -> Result<f64> {
    check_rate(p)?;
    let flipped = modified_term(rho.mat(), Some(counter));
    let base = real_trace(&mat_mul(obs.mat(), rho.mat(), Some(counter)))?;
    let noisy = real_trace(&mat_mul(obs.mat(), &flipped, Some(counter)))?;
    let mix = 2.0 * m as f64 * p / 3.0;
    Ok(base - mix * base + mix * noisy)
}

/// `Tr{Oρ} − mp·Tr{Oρ} + (mp/3)[Tr(OXρX) + Tr(OYρY) + Tr(OZρZ)]`.
///
/// Six products for the three conjugations and four for the traces.
pub fn expval_standard_m(
    obs: &Observable,
    rho: &DensityMatrix,
    p: f64,
    m: usize,
    counter: &mut MulCounter,
) -> Result<f64> {
    check_rate(p)?;
    let r = rho.mat();
    let xrx = conjugate(&Mat2::pauli_x(), r, Some(counter));
    let yry = conjugate(&Mat2::pauli_y(), r, Some(counter));
    let zrz = conjugate(&Mat2::pauli_z(), r, Some(counter));
    let o = obs.mat();
    let base = real_trace(&mat_mul(o, r, Some(counter)))?;
    let tx = real_trace(&mat_mul(o, &xrx, Some(counter)))?;
    let ty = real_trace(&mat_mul(o, &yry, Some(counter)))?;
    let tz = real_trace(&mat_mul(o, &zrz, Some(counter)))?;
    let mp = m as f64 * p;
    Ok(base - mp * base + mp / 3.0 * (tx + ty + tz))
}

/// Entry-wise comparison of the two single-application channel outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDifference {
    pub frobenius: f64,
    pub max_diag_diff: f64,
    pub max_offdiag_diff: f64,
}

pub fn channel_difference(rho: &DensityMatrix, p: f64) -> Result<ChannelDifference> {
    let standard = depolarize_standard(rho, p, None)?.into_mat();
    let modified = depolarize_modified(rho, p, None)?.into_mat();
    let diff = standard - modified;
    Ok(ChannelDifference {
        frobenius: frobenius_dist(&standard, &modified),
        max_diag_diff: diff.get(0, 0).abs().max(diff.get(1, 1).abs()),
        max_offdiag_diff: diff.get(0, 1).abs().max(diff.get(1, 0).abs()),
    })
}

#[cfg(test)]
mod tests;
