//! Kernel functions.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::dot;

/// Polynomial `(x . y)^degree` (no additive constant) or RBF
/// `exp(-gamma ||x - y||^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Polynomial { degree: u32 },
    Rbf { gamma: f64 },
}

impl Kernel {
    pub fn validate(&self) -> Result<()> {
        match self {
            Kernel::Polynomial { degree } if *degree < 1 => {
                Err(Error::Parameter("polynomial degree must be >= 1".into()))
            }
            Kernel::Rbf { gamma } if *gamma <= 0.0 || gamma.is_nan() => Err(Error::Parameter(
                format!("rbf gamma must be positive, got {gamma}"),
            )),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Kernel::Polynomial { degree } => dot(x, y).powi(*degree as i32),
            Kernel::Rbf { gamma } => {
                let dist2: f64 = x
                    .iter()
                    .zip(y)
                    .map(|(a, b)| {
                        let d = a - b;
                        d * d
                    })
                    .sum();
                (-gamma * dist2).exp()
            }
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kernel::Polynomial { degree } => write!(f, "poly degree={degree}"),
            Kernel::Rbf { gamma } => write!(f, "rbf gamma={gamma}"),
        }
    }
}
