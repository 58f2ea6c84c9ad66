//! Validated states and the numeric tolerances used to validate them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eig::{hermitian_eig, hermitian_eigenvalues};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Default cap on total Hilbert-space dimension `d^n`.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Numeric tolerances.
///
/// * `herm`: Hermiticity defect accepted on input.
/// * `psd`: eigenvalues down to `-psd` are clamped to zero.
/// * `trace`: accepted deviation of the trace from one.
/// * `eig`: eigensolver / operator-inequality slack.
/// * `test`: equality slack for derived identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
    pub eig: f64,
    pub test: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-10,
            trace: 1e-9,
            eig: 1e-10,
            test: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [self.herm, self.psd, self.trace, self.eig, self.test];
        if all.iter().all(|&t| t > 0.0 && t.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "all tolerances must be finite and strictly positive".into(),
            ))
        }
    }
}

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    spectrum: Vec<f64>,
}

impl DensityOperator {
    /// Validates `matrix`. Slightly negative eigenvalues (down to `-tol.psd`)
    /// are clamped to zero and the trace renormalized; anything worse is an
    /// error.
    pub fn new(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > tol.herm {
            return Err(Error::NonHermitianInput {
                defect,
                tol: tol.herm,
            });
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::Normalization {
                trace,
                tol: tol.trace,
            });
        }
        let values = hermitian_eigenvalues(&matrix, tol.herm)?;
        let min = values.first().copied().unwrap_or(0.0);
        if min < -tol.psd {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        if min < 0.0 {
            let eig = hermitian_eig(&matrix, tol.herm)?;
            let clamped: Vec<f64> = eig.values.iter().map(|&x| x.max(0.0)).collect();
            let total: f64 = clamped.iter().sum();
            let rebuilt = eig.reconstruct_with(|x| x.max(0.0) / total);
            let spectrum = clamped.iter().map(|x| x / total).collect();
            return Ok(Self {
                matrix: rebuilt.hermitian_part(),
                spectrum,
            });
        }
        if trace != 1.0 {
            return Ok(Self {
                matrix: matrix.scale(1.0 / trace),
                spectrum: values.iter().map(|x| x / trace).collect(),
            });
        }
        Ok(Self {
            matrix,
            spectrum: values,
        })
    }

    /// `|psi><psi|` from amplitudes whose squared norm is within `tol.trace`
    /// of one.
    pub fn from_pure(amplitudes: &[Complex64], tol: &Tolerances) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm2 - 1.0).abs() > tol.trace {
            return Err(Error::Normalization {
                trace: norm2,
                tol: tol.trace,
            });
        }
        let scale = 1.0 / norm2.sqrt();
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z * scale).collect();
        Self::new(CMatrix::outer(&psi), tol)
    }

    pub fn from_real_amplitudes(amplitudes: &[f64], tol: &Tolerances) -> Result<Self> {
        let psi: Vec<Complex64> = amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_pure(&psi, tol)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim).scale(1.0 / dim as f64),
            spectrum: vec![1.0 / dim as f64; dim],
        }
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// `ρ^{⊗n}`
    pub fn tensor_power(&self, n: usize) -> DensityOperator {
        let matrix = self.matrix.kron_power(n);
        let mut spectrum = vec![1.0];
        for _ in 0..n {
            spectrum = spectrum
                .iter()
                .flat_map(|a| self.spectrum.iter().map(move |b| a * b))
                .collect();
        }
        spectrum.sort_by(f64::total_cmp);
        DensityOperator { matrix, spectrum }
    }
}

/// A probability distribution over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    probs: Vec<f64>,
}

impl ProbabilityVector {
    /// Accepts entries in `[-tol, 1 + tol]` summing to one within `tol`;
    /// tiny negatives are clamped and the vector renormalized.
    pub fn new(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty alphabet".into()));
        }
        if let Some(bad) = probs
            .iter()
            .find(|&&p| !p.is_finite() || p < -tol || p > 1.0 + tol)
        {
            return Err(Error::InvalidProbabilities(format!(
                "entry {bad} outside [0, 1]"
            )));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidProbabilities(format!(
                "entries sum to {sum}"
            )));
        }
        let clamped: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
        let total: f64 = clamped.iter().sum();
        Ok(Self {
            probs: clamped.iter().map(|p| p / total).collect(),
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}
