//! Trace-norm distances and the gentle-measurement family of bounds.

use crate::eig::{hermitian_eig, hermitian_eigenvalues};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::state::Tolerances;

/// `‖A‖₁ = Σ |λᵢ|` for Hermitian `A`.
pub fn trace_norm(a: &CMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(hermitian_eigenvalues(a, tol.herm)?.iter().map(|x| x.abs()).sum())
}

/// `‖ρ − σ‖₁` for Hermitian (possibly subnormalized) operators.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix, tol: &Tolerances) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    trace_norm(&(rho - sigma), tol)
}

/// Outcome of evaluating one side of an inequality against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Square root of a positive semidefinite operator (negative roundoff
/// eigenvalues clamped).
pub fn psd_sqrt(x: &CMatrix, tol: &Tolerances) -> Result<CMatrix> {
    let eig = hermitian_eig(x, tol.herm)?;
    Ok(eig.reconstruct_with(|v| v.max(0.0).sqrt()))
}

/// `‖ρ − √X ρ √X‖₁ ≤ 2√(2ε)` for `0 ≤ X ≤ I` with `Tr[ρX] ≥ 1 − ε`.
pub fn gentle_measurement_check(
    rho: &CMatrix,
    x: &CMatrix,
    eps: f64,
    tol: &Tolerances,
) -> Result<BoundCheck> {
    if rho.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: x.dim(),
        });
    }
    if eps < 0.0 {
        return Err(Error::NegativeInput(eps));
    }
    let spec = hermitian_eigenvalues(x, tol.herm)?;
    let (lo, hi) = (spec[0], spec[spec.len() - 1]);
    if lo < -tol.eig || hi > 1.0 + tol.eig {
        return Err(Error::PreconditionViolated(format!(
            "measurement operator spectrum [{lo:.3e}, {hi:.3e}] outside [0, 1]"
        )));
    }
    let weight = rho.matmul(x).trace().re;
    if weight < 1.0 - eps - tol.test {
        return Err(Error::PreconditionViolated(format!(
            "Tr[ρX] = {weight:.6} < 1 − ε = {:.6}",
            1.0 - eps
        )));
    }
    let root = psd_sqrt(x, tol)?;
    let disturbed = rho.conjugate_by(&root).hermitian_part();
    let lhs = trace_distance(rho, &disturbed, tol)?;
    let bound = 2.0 * (2.0 * eps).sqrt();
    Ok(BoundCheck {
        lhs,
        bound,
        holds: lhs <= bound + tol.test,
    })
}

/// For a projector Π with `Tr[ΠρΠ] ≥ 1 − ε₁` and `‖ΠρΠ − ΠσΠ‖₁ ≤ ε₂`,
/// `‖ρ − σ‖₁ ≤ 6√(2(ε₁ + ε₂))`.
pub fn corollary_distance_check(
    rho: &CMatrix,
    sigma: &CMatrix,
    projector: &CMatrix,
    eps1: f64,
    eps2: f64,
    tol: &Tolerances,
) -> Result<BoundCheck> {
    let d = rho.dim();
    if sigma.dim() != d || projector.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if sigma.dim() != d {
                sigma.dim()
            } else {
                projector.dim()
            },
        });
    }
    for (name, e) in [("ε₁", eps1), ("ε₂", eps2)] {
        if !(0.0..=1.0).contains(&e) {
            return Err(Error::PreconditionViolated(format!("{name} = {e} outside [0, 1]")));
        }
    }
    let idempotence = projector.matmul(projector).max_abs_diff(projector);
    if idempotence > tol.eig * d as f64 || !projector.is_hermitian(tol.herm) {
        return Err(Error::PreconditionViolated(
            "Π is not an orthogonal projector".into(),
        ));
    }
    let p_rho = rho.conjugate_by(projector).hermitian_part();
    let p_sigma = sigma.conjugate_by(projector).hermitian_part();
    let mass = p_rho.trace().re;
    if mass < 1.0 - eps1 - tol.test {
        return Err(Error::PreconditionViolated(format!(
            "Tr[ΠρΠ] = {mass:.6} < 1 − ε₁"
        )));
    }
    let inner = trace_distance(&p_rho, &p_sigma, tol)?;
    if inner > eps2 + tol.test {
        return Err(Error::PreconditionViolated(format!(
            "‖ΠρΠ − ΠσΠ‖₁ = {inner:.6} > ε₂"
        )));
    }
    let lhs = trace_distance(rho, sigma, tol)?;
    let bound = 6.0 * (2.0 * (eps1 + eps2)).sqrt();
    Ok(BoundCheck {
        lhs,
        bound,
        holds: lhs <= bound + tol.test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_projector, random_pure_state};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn ket(v: &[f64]) -> CMatrix {
        let psi: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        CMatrix::outer(&psi)
    }

    #[test]
    fn trace_distance_examples() {
        let zero = ket(&[1.0, 0.0]);
        let one = ket(&[0.0, 1.0]);
        let mixed = CMatrix::identity(2).scale(0.5);
        assert!(trace_distance(&zero, &zero, &tol()).unwrap().abs() < 1e-15);
        assert!((trace_distance(&zero, &one, &tol()).unwrap() - 2.0).abs() < 1e-14);
        assert!((trace_distance(&zero, &mixed, &tol()).unwrap() - 1.0).abs() < 1e-14);
        assert!(trace_distance(&zero, &CMatrix::identity(3), &tol()).is_err());
    }

    #[test]
    fn gentle_measurement_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_density_matrix(&mut rng, 2, 2);
        let id = gentle_measurement_check(&rho, &CMatrix::identity(2), 0.0, &tol()).unwrap();
        assert!(id.lhs < 1e-12 && id.bound == 0.0 && id.holds);

        let psi = random_pure_state(&mut rng, 2);
        let pure = CMatrix::outer(&psi);
        let own = gentle_measurement_check(&pure, &pure, 0.0, &tol()).unwrap();
        assert!(own.lhs < 1e-10 && own.holds);

        // Projector onto a state with overlap 0.95 with a pure ρ.
        let a = 0.95f64.sqrt();
        let b = 0.05f64.sqrt();
        let rho = ket(&[1.0, 0.0]);
        let x = ket(&[a, b]);
        let check = gentle_measurement_check(&rho, &x, 0.05, &tol()).unwrap();
        assert!(check.holds);
        assert!(matches!(
            gentle_measurement_check(&rho, &x, 0.01, &tol()),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(gentle_measurement_check(&rho, &CMatrix::identity(2).scale(2.0), 0.5, &tol()).is_err());
    }

    #[test]
    fn corollary_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density_matrix(&mut rng, 4, 4);
        let trivial =
            corollary_distance_check(&rho, &rho, &CMatrix::identity(4), 0.0, 0.0, &tol()).unwrap();
        assert!(trivial.lhs < 1e-12 && trivial.bound == 0.0 && trivial.holds);

        let diag = CMatrix::from_real_diag(&[0.9, 0.06, 0.04]);
        let pi = CMatrix::from_real_diag(&[1.0, 0.0, 0.0]);
        let check = corollary_distance_check(&diag, &diag, &pi, 0.1, 0.0, &tol()).unwrap();
        assert!(check.lhs < 1e-12);
        assert!((check.bound - 6.0 * 0.2f64.sqrt()).abs() < 1e-12);

        for _ in 0..20 {
            let rho = random_density_matrix(&mut rng, 4, 2);
            let sigma = random_density_matrix(&mut rng, 4, 3);
            let pi = random_projector(&mut rng, 4, 3);
            let eps1 = (1.0 - rho.conjugate_by(&pi).trace().re).clamp(0.0, 1.0);
            let inner = trace_distance(
                &rho.conjugate_by(&pi).hermitian_part(),
                &sigma.conjugate_by(&pi).hermitian_part(),
                &tol(),
            )
            .unwrap();
            let eps2 = inner.min(1.0);
            if inner > 1.0 {
                continue;
            }
            let check = corollary_distance_check(&rho, &sigma, &pi, eps1, eps2, &tol()).unwrap();
            assert!(check.holds);
        }
    }
}
