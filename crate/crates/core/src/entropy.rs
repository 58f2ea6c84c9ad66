//! Entropies in bits.

use crate::eig::{hermitian_eig, hermitian_eigenvalues};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::{DensityOperator, ProbabilityVector, Tolerances};

/// `-Σ p log2 p` with `0 log 0 = 0`. Tiny negative entries (roundoff) count
/// as zero.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let s: f64 = values
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    s.max(0.0)
}

pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_of_spectrum(p.as_slice())
}

/// `S(ρ) = -Tr ρ log2 ρ`, in `[0, log2 dim]`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    entropy_of_spectrum(rho.spectrum()).min((rho.dim() as f64).log2())
}

/// Entropy of a Hermitian, (approximately) positive unit-trace matrix without
/// building a [`DensityOperator`]. Used for channel outputs that are states by
/// construction.
pub fn matrix_entropy(m: &CMatrix, tol: &Tolerances) -> Result<f64> {
    let values = hermitian_eigenvalues(m, tol.herm)?;
    if let Some(&lo) = values.first() {
        if lo < -tol.psd.max(tol.eig * m.dim() as f64) {
            return Err(Error::NotPositive { min_eigenvalue: lo });
        }
    }
    Ok(entropy_of_spectrum(&values))
}

/// Quantum relative entropy; `Infinite` when the support condition fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RelativeEntropy {
    Finite(f64),
    Infinite,
}

impl RelativeEntropy {
    pub fn finite(self) -> Option<f64> {
        match self {
            RelativeEntropy::Finite(x) => Some(x),
            RelativeEntropy::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RelativeEntropy::Infinite)
    }
}

/// `D(ρ‖σ) = Tr ρ log2 ρ − Tr ρ log2 σ`, evaluated in σ's eigenbasis.
///
/// An eigenvalue of σ below `tol.psd` whose eigenvector carries ρ-weight above
/// `tol.test` makes the result `Infinite`.
pub fn relative_entropy(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    tol: &Tolerances,
) -> Result<RelativeEntropy> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let eig = hermitian_eig(sigma.matrix(), tol.herm)?;
    let r = rho.matrix();
    let n = rho.dim();
    let mut cross = 0.0;
    for (k, &mu) in eig.values.iter().enumerate() {
        let v = eig.vector(k);
        // <v|ρ|v>
        let mut weight = 0.0;
        for i in 0..n {
            let mut row = num_complex::Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += r[(i, j)] * v[j];
            }
            weight += (v[i].conj() * row).re;
        }
        if mu < tol.psd {
            if weight > tol.test {
                return Ok(RelativeEntropy::Infinite);
            }
            continue;
        }
        cross += weight * mu.log2();
    }
    let value = -von_neumann_entropy(rho) - cross;
    Ok(RelativeEntropy::Finite(value))
}

/// The piecewise function entering the continuity bound
/// `|S(ρ) − S(σ)| ≤ η(‖ρ−σ‖₁) log2 d`:
/// `η(x) = x − x log2 x` for `x ≤ 1/e`, and `x + 1/e` above.
///
/// The first branch uses base-2 logarithms like every other entropy here, so
/// the two branches do not meet at `1/e`; the right branch is lower by
/// `(log2 e − 1)/e`.
pub fn fannes_eta(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::NegativeInput(x));
    }
    let inv_e = (-1.0f64).exp();
    Ok(if x == 0.0 {
        0.0
    } else if x <= inv_e {
        x - x * x.log2()
    } else {
        x + inv_e
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use num_complex::Complex64;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn dm(m: CMatrix) -> DensityOperator {
        DensityOperator::new(m, &tol()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&dm(CMatrix::from_real_diag(&[1.0, 0.0]))), 0.0);
        assert!((von_neumann_entropy(&DensityOperator::maximally_mixed(2)) - 1.0).abs() < 1e-15);
        // -Σ p log2 p for (0.5, 0.3, 0.2)
        let expected = -(0.5f64 * 0.5f64.log2() + 0.3 * 0.3f64.log2() + 0.2 * 0.2f64.log2());
        let s = von_neumann_entropy(&dm(CMatrix::from_real_diag(&[0.5, 0.3, 0.2])));
        assert!((s - expected).abs() < 1e-12);
        assert!((s - 1.48548).abs() < 1e-5);
    }

    #[test]
    fn relative_entropy_examples() {
        let zero = dm(CMatrix::from_real_diag(&[1.0, 0.0]));
        let one = dm(CMatrix::from_real_diag(&[0.0, 1.0]));
        let mixed = DensityOperator::maximally_mixed(2);
        let d = relative_entropy(&zero, &mixed, &tol()).unwrap().finite().unwrap();
        assert!((d - 1.0).abs() < 1e-12);
        assert!(relative_entropy(&zero, &one, &tol()).unwrap().is_infinite());
        let rho = dm(CMatrix::from_fn(2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 0.7 } else { 0.3 }, 0.0)
            } else if i == 0 {
                Complex64::new(0.1, 0.2)
            } else {
                Complex64::new(0.1, -0.2)
            }
        }));
        let self_d = relative_entropy(&rho, &rho, &tol()).unwrap().finite().unwrap();
        assert!(self_d.abs() < 1e-10);
        assert!(matches!(
            relative_entropy(&rho, &DensityOperator::maximally_mixed(3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eta_values() {
        assert_eq!(fannes_eta(0.0).unwrap(), 0.0);
        let inv_e = (-1.0f64).exp();
        assert!((fannes_eta(1.0).unwrap() - (1.0 + inv_e)).abs() < 1e-15);
        assert!((fannes_eta(1.0).unwrap() - 1.36788).abs() < 1e-5);
        assert!(matches!(fannes_eta(-0.1), Err(Error::NegativeInput(_))));
    }

    #[test]
    fn eta_breakpoint_as_implemented() {
        // Left branch evaluated at the breakpoint vs. the right branch formula.
        let inv_e = (-1.0f64).exp();
        let left = inv_e - inv_e * inv_e.log2();
        let right = inv_e + inv_e;
        let jump = left - right;
        let expected_jump = (std::f64::consts::LOG2_E - 1.0) * inv_e;
        assert!((jump - expected_jump).abs() < 1e-12);
        assert!((fannes_eta(inv_e).unwrap() - left).abs() < 1e-12);
        assert!((fannes_eta(inv_e + 1e-12).unwrap() - right).abs() < 1e-9);
        // In natural-log units the branches meet.
        let left_nat = inv_e - inv_e * inv_e.ln();
        assert!((left_nat - right).abs() < 1e-12);
    }
}
