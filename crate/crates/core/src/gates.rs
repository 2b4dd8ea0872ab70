//! Pauli, identity and rotation gates, and unitary conjugation of states.
//!
//! Matrices are stored exactly as written (no global-phase normalization);
//! conjugation `UρU†` is insensitive to the phase anyway.

use std::fmt;
use std::str::FromStr;

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg2::{adjoint, mat_mul, Complex, Mat2, MulCounter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    Rx,
    Ry,
    Rz,
}

impl GateKind {
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::Rx | GateKind::Ry | GateKind::Rz)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::I => "I",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
        };
        f.write_str(s)
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(GateKind::I),
            "X" => Ok(GateKind::X),
            "Y" => Ok(GateKind::Y),
            "Z" => Ok(GateKind::Z),
            "RX" => Ok(GateKind::Rx),
            "RY" => Ok(GateKind::Ry),
            "RZ" => Ok(GateKind::Rz),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// A single-qubit unitary with its family label and, for rotations, angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    matrix: Mat2,
    kind: GateKind,
    angle: Option<f64>,
}

impl Gate {
    /// Pauli gate by label (`"X"`, `"Y"` or `"Z"`).
    pub fn pauli(label: &str) -> Result<Gate> {
        let kind = match label.trim().to_ascii_uppercase().as_str() {
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            _ => return Err(Error::UnknownLabel(label.to_string())),
        };
        Ok(Self::fixed(kind))
    }

    pub fn identity() -> Gate {
        Self::fixed(GateKind::I)
    }

    fn fixed(kind: GateKind) -> Gate {
        let matrix = match kind {
            GateKind::I => Mat2::identity(),
            GateKind::X => Mat2::pauli_x(),
            GateKind::Y => Mat2::pauli_y(),
            GateKind::Z => Mat2::pauli_z(),
            _ => unreachable!("rotation gates carry an angle"),
        };
        Gate {
            matrix,
            kind,
            angle: None,
        }
    }

    pub fn rx(theta: f64) -> Gate {
        let (s, c) = (0.5 * theta).sin_cos();
        let off = Complex::new(0.0, -s);
        Gate {
            matrix: Mat2::new(Complex::real(c), off, off, Complex::real(c)),
            kind: GateKind::Rx,
            angle: Some(theta),
        }
    }

    pub fn ry(theta: f64) -> Gate {
        let (s, c) = (0.5 * theta).sin_cos();
        Gate {
            matrix: Mat2::from_real(c, -s, s, c),
            kind: GateKind::Ry,
            angle: Some(theta),
        }
    }

    pub fn rz(theta: f64) -> Gate {
        Gate {
            matrix: Mat2::new(
                Complex::from_phase(-0.5 * theta),
                Complex::ZERO,
                Complex::ZERO,
                Complex::from_phase(0.5 * theta),
            ),
            kind: GateKind::Rz,
            angle: Some(theta),
        }
    }

    /// Rotation of the given family; fixed gates ignore the angle.
    pub fn rotation(kind: GateKind, theta: f64) -> Gate {
        match kind {
            GateKind::Rx => Self::rx(theta),
            GateKind::Ry => Self::ry(theta),
            GateKind::Rz => Self::rz(theta),
            other => Self::fixed(other),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn angle(&self) -> Option<f64> {
        self.angle
    }
}

/// `U·A·U†` on a raw matrix; two counted products.
pub fn conjugate(u: &Mat2, a: &Mat2, mut counter: Option<&mut MulCounter>) -> Mat2 {
    let ua = mat_mul(u, a, counter.as_deref_mut());
    mat_mul(&ua, &adjoint(u), counter)
}

/// Evolve a state by `UρU†`.
pub fn apply_unitary(
    gate: &Gate,
    rho: &DensityMatrix,
    counter: Option<&mut MulCounter>,
) -> DensityMatrix {
    DensityMatrix::assume_valid(conjugate(gate.matrix(), rho.mat(), counter))
}
