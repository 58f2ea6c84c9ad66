//! Relative entropy of frameness (REF).
//!
//! [`ref_closed_form`] evaluates `S(T(ρ)) − S(ρ)`. [`ref_variational`]
//! minimizes `D(ρ‖σ)` over symmetric σ directly and never uses the twirl of
//! ρ, so the two serve as independent checks on each other.

use crate::distance::trace_distance;
use crate::eig::hermitian_eig;
use crate::entropy::{matrix_entropy, relative_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::group::{
    collective_twirl, is_symmetry_preserving, symmetric_basis, twirl, GroupRep, SymmetricBasis,
    TwirlChannel,
};
use crate::linalg::CMatrix;
use crate::state::{DensityOperator, Tolerances};

/// `D_G(ρ) = S(T_G(ρ)) − S(ρ)` in bits.
pub fn ref_closed_form(rep: &GroupRep, rho: &DensityOperator, tol: &Tolerances) -> Result<f64> {
    check_dim(rep, rho)?;
    let twirled = DensityOperator::new(twirl(rep, rho.matrix())?, tol)?;
    Ok(von_neumann_entropy(&twirled) - von_neumann_entropy(rho))
}

fn check_dim(rep: &GroupRep, rho: &DensityOperator) -> Result<()> {
    if rho.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RefResult {
    pub closed_form: f64,
    pub variational: f64,
    pub minimizer: DensityOperator,
    /// `variational − closed_form`
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `‖minimizer − T(ρ)‖₁`
    pub minimizer_twirl_distance: f64,
}

/// Stopping rule and iteration budget for [`ref_variational`].
#[derive(Debug, Clone, Copy)]
pub struct VariationalOptions {
    pub max_iter: usize,
    /// Stop once the Euclidean norm of the gradient (in the orthonormal
    /// symmetric basis, natural-log units) drops below this.
    pub tol: f64,
}

impl Default for VariationalOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            tol: 1e-6,
        }
    }
}

/// `σ(H) = exp(H) / Tr exp(H)` together with `ln Tr exp(H)`.
fn gibbs_state(h: &CMatrix, tol: &Tolerances) -> Result<(CMatrix, f64)> {
    let eig = hermitian_eig(h, tol.herm)?;
    let top = eig.values.last().copied().unwrap_or(0.0);
    let z: f64 = eig.values.iter().map(|&x| (x - top).exp()).sum();
    let sigma = eig.reconstruct_with(|x| (x - top).exp() / z);
    Ok((sigma.hermitian_part(), top + z.ln()))
}

struct Objective<'a> {
    basis: &'a SymmetricBasis,
    rho_coords: Vec<f64>,
    rho_entropy: f64,
    tol: &'a Tolerances,
}

impl Objective<'_> {
    /// `D(ρ‖σ(c))` in bits, using `ln σ = H − ln Z`.
    fn eval(&self, coords: &[f64]) -> Result<(f64, CMatrix)> {
        let h = self.basis.combine(coords);
        let (sigma, log_z) = gibbs_state(&h, self.tol)?;
        let rho_h: f64 = coords.iter().zip(&self.rho_coords).map(|(c, r)| c * r).sum();
        let value = -self.rho_entropy - (rho_h - log_z) / std::f64::consts::LN_2;
        Ok((value, sigma))
    }
}

/// `min_{σ symmetric} D(ρ‖σ)` by gradient descent on `σ = exp(H)/Tr exp(H)`,
/// `H` ranging over the symmetric Hermitian operators.
///
/// Each step backtracks from step size 1 (halving) until the Armijo
/// condition holds. Starts at the maximally mixed state. Returns the best
/// iterate with `converged = false` when the budget runs out.
pub fn ref_variational(
    rep: &GroupRep,
    rho: &DensityOperator,
    opts: VariationalOptions,
    tol: &Tolerances,
) -> Result<RefResult> {
    check_dim(rep, rho)?;
    let basis = symmetric_basis(rep, tol)?;
    let objective = Objective {
        basis: &basis,
        rho_coords: basis.coordinates(rho.matrix()),
        rho_entropy: von_neumann_entropy(rho),
        tol,
    };

    let mut coords = vec![0.0; basis.len()];
    let (mut value, mut sigma) = objective.eval(&coords)?;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        let grad: Vec<f64> = basis
            .coordinates(&sigma)
            .iter()
            .zip(&objective.rho_coords)
            .map(|(s, r)| s - r)
            .collect();
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2.sqrt() <= opts.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = coords.iter().zip(&grad).map(|(c, g)| c - step * g).collect();
            let (v, s) = objective.eval(&trial)?;
            if v <= value - 0.5 * step * gnorm2 / std::f64::consts::LN_2 {
                coords = trial;
                value = v;
                sigma = s;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // stalled at machine precision before reaching the gradient target
            break;
        }
    }

    let closed_form = ref_closed_form(rep, rho, tol)?;
    let minimizer = DensityOperator::new(twirl(rep, &sigma)?, tol)?;
    let variational = relative_entropy(rho, &minimizer, tol)?
        .finite()
        .unwrap_or(value);
    let twirled = twirl(rep, rho.matrix())?;
    let minimizer_twirl_distance = trace_distance(minimizer.matrix(), &twirled, tol)?;
    Ok(RefResult {
        closed_form,
        variational,
        minimizer,
        gap: variational - closed_form,
        iterations,
        converged,
        minimizer_twirl_distance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyInvariance {
    /// `S(T(VρV†))`
    pub lhs: f64,
    /// `S(T(ρ))`
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `S(T(VρV†)) = S(T(ρ))` for a symmetry-preserving `V`, on `n` copies
/// when `channel` is a tensor-power twirl.
pub fn lemma_entropy_invariance_check(
    channel: &TwirlChannel,
    rho: &CMatrix,
    v: &CMatrix,
    tol: &Tolerances,
) -> Result<EntropyInvariance> {
    let basis = SymmetricBasis::new(channel, tol)?;
    let witness = is_symmetry_preserving(channel, &basis, v, tol.test, tol)?;
    if !witness.preserving {
        return Err(Error::NotSymmetryPreserving {
            deviation: witness.worst_deviation,
        });
    }
    let rotated = rho.conjugate_by(v).hermitian_part();
    let lhs = matrix_entropy(&channel.apply(&rotated)?, tol)?;
    let rhs = matrix_entropy(&channel.apply(rho)?, tol)?;
    Ok(EntropyInvariance {
        lhs,
        rhs,
        holds: (lhs - rhs).abs() <= tol.test,
    })
}

/// Per-copy REF for the collective (diagonal `U_g^{⊗n}`) notion of symmetry,
/// next to the product-group value.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveRefSeries {
    pub n_values: Vec<usize>,
    /// `(1/n)[S(T_coll(ρ^{⊗n})) − S(ρ^{⊗n})]`
    pub per_copy_values: Vec<f64>,
    /// `(1/n)[S(T^{⊗n}(ρ^{⊗n})) − S(ρ^{⊗n})]`, equal to `D_G(ρ)` for every n.
    pub product_per_copy: Vec<f64>,
}

pub fn collective_ref_series(
    rep: &GroupRep,
    rho: &DensityOperator,
    n_max: usize,
    cap: usize,
    tol: &Tolerances,
) -> Result<CollectiveRefSeries> {
    check_dim(rep, rho)?;
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let top_dim = rep
        .dim()
        .checked_pow(n_max as u32)
        .filter(|&d| d <= cap)
        .ok_or(Error::DimensionCapExceeded {
            dim: rep.dim().saturating_pow(n_max as u32),
            cap,
        })?;
    debug_assert!(top_dim <= cap);
    let mut series = CollectiveRefSeries {
        n_values: Vec::with_capacity(n_max),
        per_copy_values: Vec::with_capacity(n_max),
        product_per_copy: Vec::with_capacity(n_max),
    };
    for n in 1..=n_max {
        let power = rho.matrix().kron_power(n);
        let s_in = matrix_entropy(&power, tol)?;
        let s_coll = matrix_entropy(&collective_twirl(rep, n, &power)?, tol)?;
        let s_prod = matrix_entropy(&TwirlChannel::new(rep, n)?.apply(&power)?, tol)?;
        series.n_values.push(n);
        series.per_copy_values.push((s_coll - s_in) / n as f64);
        series.product_per_copy.push((s_prod - s_in) / n as f64);
    }
    Ok(series)
}
