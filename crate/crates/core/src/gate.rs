use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One gate of the native set. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    /// Phase gate `diag(1, e^{i phi})`.
    P { target: usize, phi: f64 },
    /// Y rotation `[[cos(phi/2), -sin(phi/2)], [sin(phi/2), cos(phi/2)]]`.
    Ry { target: usize, phi: f64 },
    X { target: usize },
    H { target: usize },
    /// Controlled phase `diag(1, 1, 1, e^{i phi})`; symmetric in its two qubits.
    CP { control: usize, target: usize, phi: f64 },
}

/// Gate kind without operands, used for census counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    P,
    Ry,
    X,
    H,
    CP,
}

impl GateOp {
    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::P { .. } => GateKind::P,
            GateOp::Ry { .. } => GateKind::Ry,
            GateOp::X { .. } => GateKind::X,
            GateOp::H { .. } => GateKind::H,
            GateOp::CP { .. } => GateKind::CP,
        }
    }

    pub fn target(&self) -> usize {
        match *self {
            GateOp::P { target, .. }
            | GateOp::Ry { target, .. }
            | GateOp::X { target }
            | GateOp::H { target }
            | GateOp::CP { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            GateOp::CP { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::P { phi, .. } | GateOp::Ry { phi, .. } | GateOp::CP { phi, .. } => Some(phi),
            GateOp::X { .. } | GateOp::H { .. } => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateOp::CP { .. })
    }

    pub fn inverse(&self) -> GateOp {
        match *self {
            GateOp::P { target, phi } => GateOp::P { target, phi: -phi },
            GateOp::Ry { target, phi } => GateOp::Ry { target, phi: -phi },
            GateOp::CP {
                control,
                target,
                phi,
            } => GateOp::CP {
                control,
                target,
                phi: -phi,
            },
            g @ (GateOp::X { .. } | GateOp::H { .. }) => g,
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let target = self.target();
        if target >= n_qubits {
            return Err(Error::QubitIndex {
                index: target,
                n_qubits,
            });
        }
        if let Some(control) = self.control() {
            if control >= n_qubits {
                return Err(Error::QubitIndex {
                    index: control,
                    n_qubits,
                });
            }
            if control == target {
                return Err(Error::InvalidArgument(format!(
                    "controlled gate with control == target == {target}"
                )));
            }
        }
        Ok(())
    }

    /// 2x2 matrix acting on the target (for `CP`, the block applied when the control is set).
    pub fn target_matrix(&self) -> [[Complex64; 2]; 2] {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match *self {
            GateOp::P { phi, .. } | GateOp::CP { phi, .. } => {
                [[one, zero], [zero, Complex64::from_polar(1.0, phi)]]
            }
            GateOp::Ry { phi, .. } => {
                let (s, c) = (phi / 2.0).sin_cos();
                [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ]
            }
            GateOp::X { .. } => [[zero, one], [one, zero]],
            GateOp::H { .. } => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateOp::P { target, phi } => write!(f, "p({phi}) q[{target}]"),
            GateOp::Ry { target, phi } => write!(f, "ry({phi}) q[{target}]"),
            GateOp::X { target } => write!(f, "x q[{target}]"),
            GateOp::H { target } => write!(f, "h q[{target}]"),
            GateOp::CP {
                control,
                target,
                phi,
            } => write!(f, "cp({phi}) q[{control}],q[{target}]"),
        }
    }
}
