//! Truncated-matrix checker for the parity-deformed ladder algebra
//!
//!   [â, â†] = 1 + 2νR̂,   {R̂, â} = {R̂, â†} = 0,
//!
//! represented on the generalized Fock states
//!
//!   â‖2n⟩ = √(2n)‖2n−1⟩,        â‖2n+1⟩ = √(2n+2ν+1)‖2n⟩,
//!   â†‖2n⟩ = √(2n+2ν+1)‖2n+1⟩,  â†‖2n+1⟩ = √(2n+2)‖2n+2⟩,
//!   R̂‖n⟩ = (−1)ⁿ‖n⟩.
//!
//! The commutator relation is checked on interior levels 0..M−3 only; the
//! top rows of a truncated â†â/ââ† differ by construction.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Matrix representations of the deformed operators on ‖0⟩..‖M−1⟩.
#[derive(Debug, Clone)]
pub struct DeformedFockSpace {
    pub truncation: usize,
    pub nu: f64,
    pub lowering: DMatrix<f64>,
    pub raising: DMatrix<f64>,
    pub parity: DMatrix<f64>,
    pub number: DMatrix<f64>,
}

impl DeformedFockSpace {
    pub fn new(nu: f64, truncation: usize) -> Result<Self> {
        if truncation < 4 {
            return Err(Error::TruncationTooSmall {
                min: 4,
                got: truncation,
            });
        }
        if !nu.is_finite() || nu <= -0.5 {
            return Err(Error::InvalidParams(format!(
                "deformation parameter nu must be > -0.5, got {nu}"
            )));
        }
        let m = truncation;
        let mut lowering = DMatrix::zeros(m, m);
        for level in 1..m {
            // amplitude of a||level> -> ||level-1>
            let amp = if level % 2 == 0 {
                (level as f64).sqrt()
            } else {
                (level as f64 - 1.0 + 2.0 * nu + 1.0).sqrt()
            };
            lowering[(level - 1, level)] = amp;
        }
        let raising = lowering.transpose();
        let parity = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                if i % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                0.0
            }
        });
        let number = DMatrix::from_fn(m, m, |i, j| if i == j { i as f64 } else { 0.0 });
        Ok(Self {
            truncation: m,
            nu,
            lowering,
            raising,
            parity,
            number,
        })
    }

    /// Diagonal of â†â; equals n + ν(1−(−1)ⁿ), the deformed intensity
    /// function times n.
    pub fn number_spectrum(&self) -> Vec<f64> {
        let prod = &self.raising * &self.lowering;
        (0..self.truncation).map(|i| prod[(i, i)]).collect()
    }
}

/// Maximum absolute violations of each algebra relation on the truncated
/// space. All entries are at machine-precision level for a faithful
/// representation.
#[derive(Debug, Clone, Copy)]
pub struct WignerReport {
    /// [â, â†] − (1 + 2νR̂) on interior levels 0..M−3.
    pub commutator: f64,
    /// {R̂, â} over the full matrix.
    pub parity_lowering: f64,
    /// {R̂, â†} over the full matrix.
    pub parity_raising: f64,
    /// diag(â†â) − (n + ν(1−(−1)ⁿ)) over all levels.
    pub intensity_diagonal: f64,
    /// â† − âᵀ (adjoint consistency of the real representation).
    pub adjoint: f64,
}

impl WignerReport {
    pub fn max_violation(&self) -> f64 {
        self.commutator
            .max(self.parity_lowering)
            .max(self.parity_raising)
            .max(self.intensity_diagonal)
            .max(self.adjoint)
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Build the truncated representation and measure how well it satisfies the
/// deformed algebra.
pub fn check_wigner_algebra(nu: f64, truncation: usize) -> Result<WignerReport> {
    let space = DeformedFockSpace::new(nu, truncation)?;
    let m = truncation;

    let commutator = &space.lowering * &space.raising - &space.raising * &space.lowering;
    let expected = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            1.0 + 2.0 * nu * if i % 2 == 0 { 1.0 } else { -1.0 }
        } else {
            0.0
        }
    });
    let diff = commutator - expected;
    // interior block only: levels 0..M-3 inclusive
    let interior = m - 2;
    let mut comm_violation = 0.0f64;
    for i in 0..interior {
        for j in 0..interior {
            comm_violation = comm_violation.max(diff[(i, j)].abs());
        }
    }

    let anti_lower = &space.parity * &space.lowering + &space.lowering * &space.parity;
    let anti_raise = &space.parity * &space.raising + &space.raising * &space.parity;

    let spectrum = space.number_spectrum();
    let mut intensity_violation = 0.0f64;
    for (n, &got) in spectrum.iter().enumerate() {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let expected = n as f64 + nu * (1.0 - sign);
        intensity_violation = intensity_violation.max((got - expected).abs());
    }

    let adjoint = max_abs(&(space.raising.clone() - space.lowering.transpose()));

    Ok(WignerReport {
        commutator: comm_violation,
        parity_lowering: max_abs(&anti_lower),
        parity_raising: max_abs(&anti_raise),
        intensity_diagonal: intensity_violation,
        adjoint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bosonic_limit_is_exact() {
        // nu = 0 reduces to the ordinary ladder algebra
        let report = check_wigner_algebra(0.0, 16).unwrap();
        assert!(report.max_violation() <= 1e-12, "{report:?}");
    }

    #[test]
    fn deformed_representations_satisfy_the_algebra() {
        for nu in [-0.4, -0.1, 0.5, 2.0, 7.5] {
            let report = check_wigner_algebra(nu, 12).unwrap();
            assert!(
                report.max_violation() <= 1e-12,
                "nu = {nu}: {report:?}"
            );
        }
    }

    #[test]
    fn intensity_spectrum_half_integer_example() {
        // nu = 0.5: diag(a†a) = (0, 2, 2, 4, 4, 6, 6, 8, 8, 10)
        let space = DeformedFockSpace::new(0.5, 10).unwrap();
        let spec = space.number_spectrum();
        let expected = [0.0, 2.0, 2.0, 4.0, 4.0, 6.0, 6.0, 8.0, 8.0, 10.0];
        for (got, want) in spec.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-12, "{spec:?}");
        }
    }

    #[test]
    fn parity_anticommutes_exactly() {
        for nu in [-0.3, 0.0, 1.0] {
            let report = check_wigner_algebra(nu, 8).unwrap();
            assert_eq!(report.parity_lowering, 0.0);
            assert_eq!(report.parity_raising, 0.0);
        }
    }

    #[test]
    fn rejects_tiny_truncation_and_bad_nu() {
        assert!(matches!(
            check_wigner_algebra(0.0, 3),
            Err(Error::TruncationTooSmall { .. })
        ));
        assert!(check_wigner_algebra(-0.6, 8).is_err());
    }
}
