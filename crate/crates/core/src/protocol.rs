//! Randomized symmetrization of `ρ^{⊗n}` with ensembles of group-element
//! tuples `U_{g⃗} = U_{g1} ⊗ ... ⊗ U_{gn}`.
//!
//! Each ensemble member is symmetry preserving, and a uniform mixture of `K`
//! of them is the channel `V(τ) = (1/K) Σ_k U_{g⃗_k} τ U_{g⃗_k}†`. The distance
//! of an output from its own product twirl is the residual asymmetry.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distance::trace_norm;
use crate::eig::hermitian_eig;
use crate::entropy::{fannes_eta, matrix_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::group::{twirl, GroupRep, TwirlChannel};
use crate::linalg::{op_leq, CMatrix, ZERO};
use crate::measures::ref_closed_form;
use crate::state::{DensityOperator, Tolerances};
use crate::typicality::TypicalProjector;

/// Largest ensemble size accepted.
pub const MAX_ENSEMBLE_SIZE: usize = 1 << 24;

/// `K = ⌈2^{nR}⌉`.
pub fn ensemble_size(n: usize, rate: f64) -> Result<usize> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::InvalidParameter(format!("rate {rate} must be finite and non-negative")));
    }
    let k = (n as f64 * rate).exp2().ceil();
    if k > MAX_ENSEMBLE_SIZE as f64 {
        return Err(Error::InvalidParameter(format!(
            "ensemble size 2^{:.3} exceeds {MAX_ENSEMBLE_SIZE}",
            n as f64 * rate
        )));
    }
    Ok(k as usize)
}

fn check_cap(d: usize, n: usize, cap: usize) -> Result<usize> {
    d.checked_pow(n as u32)
        .filter(|&dim| dim <= cap)
        .ok_or(Error::DimensionCapExceeded {
            dim: d.saturating_pow(n as u32),
            cap,
        })
}

/// Generator for stream `stream` of a seeded run.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform mixture of `K` tuple unitaries; duplicates allowed.
#[derive(Debug, Clone)]
pub struct UnitaryEnsemble {
    rep: GroupRep,
    n: usize,
    members: Vec<Vec<usize>>,
}

impl UnitaryEnsemble {
    /// Validates the tuples against the representation.
    pub fn new(rep: &GroupRep, n: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if members.is_empty() {
            return Err(Error::InvalidParameter("an ensemble needs at least one member".into()));
        }
        for m in &members {
            if m.len() != n {
                return Err(Error::Shape(format!("tuple of length {} for n = {n}", m.len())));
            }
            if let Some(&g) = m.iter().find(|&&g| g >= rep.order()) {
                return Err(Error::InvalidParameter(format!(
                    "group element {g} out of range for order {}",
                    rep.order()
                )));
            }
        }
        Ok(Self {
            rep: rep.clone(),
            n,
            members,
        })
    }

    /// `K` i.i.d. uniform tuples drawn from `rng`.
    pub fn sample<R: Rng + ?Sized>(rep: &GroupRep, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        let order = rep.order();
        let members = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(0..order)).collect())
            .collect();
        Self::new(rep, n, members)
    }

    /// Every tuple in `G^n` exactly once; realizes `T^{⊗n}`.
    pub fn full_group(rep: &GroupRep, n: usize, cap: usize) -> Result<Self> {
        check_cap(rep.dim(), n, cap)?;
        let order = rep.order();
        let total = order
            .checked_pow(n as u32)
            .filter(|&k| k <= MAX_ENSEMBLE_SIZE)
            .ok_or_else(|| Error::InvalidParameter(format!("|G|^n = {order}^{n} is too large")))?;
        let members = (0..total)
            .map(|mut idx| {
                let mut t = vec![0; n];
                for pos in (0..n).rev() {
                    t[pos] = idx % order;
                    idx /= order;
                }
                t
            })
            .collect();
        Self::new(rep, n, members)
    }

    pub fn rep(&self) -> &GroupRep {
        &self.rep
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    /// Distinct members with multiplicities, in lexicographic order.
    pub fn distinct(&self) -> Vec<(&[usize], usize)> {
        let mut counts: BTreeMap<&[usize], usize> = BTreeMap::new();
        for m in &self.members {
            *counts.entry(m.as_slice()).or_default() += 1;
        }
        counts.into_iter().collect()
    }

    /// Dimension `d^n` of the operators the ensemble acts on.
    pub fn dim(&self) -> usize {
        self.rep.dim().pow(self.n as u32)
    }
}

/// `K = ⌈2^{nR}⌉` uniform tuples from a generator seeded with `seed`.
pub fn sample_ensemble(rep: &GroupRep, n: usize, rate: f64, seed: u64, cap: usize) -> Result<UnitaryEnsemble> {
    check_cap(rep.dim(), n, cap)?;
    let k = ensemble_size(n, rate)?;
    UnitaryEnsemble::sample(rep, n, k, &mut stream_rng(seed, 0))
}

/// `(1/K) Σ_k U_{g⃗_k} τ U_{g⃗_k}†`.
pub fn apply_ensemble(e: &UnitaryEnsemble, tau: &CMatrix) -> Result<CMatrix> {
    if tau.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            found: tau.dim(),
        });
    }
    if e.rep.is_diagonal() {
        return Ok(tau.hadamard(&diagonal_mask(e)));
    }
    let mut acc = CMatrix::zeros(tau.dim());
    for (tuple, count) in e.distinct() {
        acc.add_scaled(&e.rep.conjugate_tuple(tau, tuple), count as f64);
    }
    Ok(acc.scale(1.0 / e.k() as f64).hermitian_part())
}

/// For a diagonal representation, `V(τ) = τ ⊙ M` with
/// `M_ij = (1/K) Σ_k φ_k(i) conj(φ_k(j))`. On one site the factor
/// `u_g(a) conj(u_g(b))` depends on `(a, b)` only through a small number of
/// classes, so `M` is a lookup into a table over class strings.
fn diagonal_mask(e: &UnitaryEnsemble) -> CMatrix {
    let diags = e.rep.diagonals().expect("diagonal representation");
    let (d, n, order) = (e.rep.dim(), e.n, e.rep.order());

    let mut class_values: Vec<Vec<Complex64>> = Vec::new();
    let mut class_of = vec![0usize; d * d];
    for a in 0..d {
        for b in 0..d {
            let v: Vec<Complex64> = (0..order).map(|g| diags[g][a] * diags[g][b].conj()).collect();
            let found = class_values
                .iter()
                .position(|c| c.iter().zip(&v).all(|(x, y)| (x - y).norm() < 1e-12));
            class_of[a * d + b] = found.unwrap_or_else(|| {
                class_values.push(v);
                class_values.len() - 1
            });
        }
    }
    let c = class_values.len();

    // χ over class strings, most significant site first.
    let w = 1.0 / e.k() as f64;
    let mut chi = vec![ZERO; c.pow(n as u32)];
    let mut term = Vec::with_capacity(chi.len());
    let mut next = Vec::with_capacity(chi.len());
    for (tuple, count) in e.distinct() {
        term.clear();
        term.push(Complex64::new(w * count as f64, 0.0));
        for &g in tuple {
            next.clear();
            for t in &term {
                for cv in &class_values {
                    next.push(t * cv[g]);
                }
            }
            std::mem::swap(&mut term, &mut next);
        }
        for (x, t) in chi.iter_mut().zip(&term) {
            *x += t;
        }
    }

    let dim = d.pow(n as u32);
    let digits: Vec<Vec<usize>> = (0..dim)
        .map(|mut i| {
            let mut ds = vec![0; n];
            for pos in (0..n).rev() {
                ds[pos] = i % d;
                i /= d;
            }
            ds
        })
        .collect();
    let mut mask = CMatrix::zeros(dim);
    let data = mask.as_mut_slice();
    for i in 0..dim {
        let di = &digits[i];
        for j in 0..dim {
            let dj = &digits[j];
            let mut idx = 0;
            for s in 0..n {
                idx = idx * c + class_of[di[s] * d + dj[s]];
            }
            data[i * dim + j] = chi[idx];
        }
    }
    mask
}

/// `‖τ − T^{⊗n}(τ)‖₁`.
pub fn residual_asymmetry(rep: &GroupRep, n: usize, tau: &CMatrix, tol: &Tolerances) -> Result<f64> {
    let channel = TwirlChannel::new(rep, n)?;
    let twirled = channel.apply(tau)?;
    trace_norm(&(tau - &twirled), tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub n: usize,
    pub rate: f64,
    pub k: usize,
    pub trials: usize,
    /// Per-trial residual asymmetry, in trial order.
    pub residuals: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub seed: u64,
    /// The sweep used the exhaustive `G^n` ensemble instead of sampling.
    pub full_group: bool,
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

impl ProtocolReport {
    fn new(n: usize, rate: f64, k: usize, residuals: Vec<f64>, seed: u64, full_group: bool) -> Self {
        let trials = residuals.len();
        let (mean, max) = if trials == 0 {
            (f64::NAN, f64::NAN)
        } else {
            (
                residuals.iter().sum::<f64>() / trials as f64,
                residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            )
        };
        Self {
            n,
            rate,
            k,
            trials,
            median: median(&residuals),
            residuals,
            mean,
            max,
            seed,
            full_group,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    pub trials: usize,
    pub seed: u64,
    pub cap: usize,
    /// Use the exhaustive ensemble (one deterministic trial per rate).
    pub full_group: bool,
}

/// Generator stream of trial `trial` at grid position `r_index`.
pub fn sweep_stream(r_index: usize, trial: usize) -> u64 {
    ((r_index as u64) << 32) | trial as u64
}

/// Residual asymmetry of `V(ρ^{⊗n})` for `trials` independent ensembles per
/// rate. Reports come back sorted by rate; trials run in parallel on the
/// current rayon pool without affecting the results.
pub fn rate_sweep(
    rep: &GroupRep,
    rho: &DensityOperator,
    n: usize,
    rates: &[f64],
    opts: &SweepOptions,
    tol: &Tolerances,
) -> Result<Vec<ProtocolReport>> {
    if rho.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: rho.dim(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    check_cap(rep.dim(), n, opts.cap)?;
    let power = rho.matrix().kron_power(n);
    let mut grid: Vec<(usize, f64)> = rates.iter().copied().enumerate().collect();
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut reports = Vec::with_capacity(grid.len());
    for (r_index, rate) in grid {
        if opts.full_group {
            let e = UnitaryEnsemble::full_group(rep, n, opts.cap)?;
            let residual = residual_asymmetry(rep, n, &apply_ensemble(&e, &power)?, tol)?;
            let residuals = if opts.trials == 0 { vec![] } else { vec![residual] };
            reports.push(ProtocolReport::new(n, rate, e.k(), residuals, opts.seed, true));
            continue;
        }
        let k = ensemble_size(n, rate)?;
        let residuals = (0..opts.trials)
            .into_par_iter()
            .map(|trial| {
                let mut rng = stream_rng(opts.seed, sweep_stream(r_index, trial));
                let e = UnitaryEnsemble::sample(rep, n, k, &mut rng)?;
                residual_asymmetry(rep, n, &apply_ensemble(&e, &power)?, tol)
            })
            .collect::<Result<Vec<f64>>>()?;
        reports.push(ProtocolReport::new(n, rate, k, residuals, opts.seed, false));
    }
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConverseAudit {
    pub n: usize,
    pub k: usize,
    /// `S(V(ρ^{⊗n}))`
    pub s_out: f64,
    /// `S(T^{⊗n}(V(ρ^{⊗n})))`
    pub s_twirl_out: f64,
    /// `n S(ρ)`
    pub s_in: f64,
    /// `‖V(ρ^{⊗n}) − T^{⊗n}(V(ρ^{⊗n}))‖₁`
    pub eps_achieved: f64,
    /// `(S_twirl_out − S_in)/n − η(2ε) log2 d`
    pub rate_lower_bound: f64,
    /// `log2(K) / n`
    pub rate: f64,
    /// `(1/K) Σ_k S(T^{⊗n}(V_k ρ^{⊗n} V_k†))`
    pub concavity_rhs: f64,
    /// `n S(T(ρ))`
    pub n_twirled_entropy: f64,
    pub concavity_holds: bool,
    /// `log2 K ≥ S_out − S_in`
    pub entropy_gain_holds: bool,
}

/// Entropy chain of the converse argument, evaluated on a concrete ensemble.
pub fn converse_audit(
    rho: &DensityOperator,
    e: &UnitaryEnsemble,
    tol: &Tolerances,
) -> Result<ConverseAudit> {
    let rep = e.rep();
    if rho.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: rho.dim(),
        });
    }
    let n = e.n();
    let d = rep.dim();
    let channel = TwirlChannel::new(rep, n)?;
    let power = rho.matrix().kron_power(n);
    let out = apply_ensemble(e, &power)?;
    let twirl_out = channel.apply(&out)?;
    let s_out = matrix_entropy(&out, tol)?;
    let s_twirl_out = matrix_entropy(&twirl_out, tol)?;
    let s_in = n as f64 * von_neumann_entropy(rho);
    let eps_achieved = trace_norm(&(&out - &twirl_out), tol)?;
    let rate_lower_bound =
        (s_twirl_out - s_in) / n as f64 - fannes_eta(2.0 * eps_achieved)? * (d as f64).log2();

    let mut concavity_rhs = 0.0;
    for (tuple, count) in e.distinct() {
        let rotated = rep.conjugate_tuple(&power, tuple);
        concavity_rhs += count as f64 * matrix_entropy(&channel.apply(&rotated)?, tol)?;
    }
    concavity_rhs /= e.k() as f64;
    let n_twirled_entropy = n as f64 * matrix_entropy(&twirl(rep, rho.matrix())?, tol)?;
    let log2k = (e.k() as f64).log2();
    Ok(ConverseAudit {
        n,
        k: e.k(),
        s_out,
        s_twirl_out,
        s_in,
        eps_achieved,
        rate_lower_bound,
        rate: log2k / n as f64,
        concavity_rhs,
        n_twirled_entropy,
        concavity_holds: s_twirl_out >= concavity_rhs - tol.test,
        entropy_gain_holds: log2k >= s_out - s_in - tol.test,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffTrialReport {
    pub n: usize,
    pub delta: f64,
    pub eps: f64,
    pub k: usize,
    pub num_batches: usize,
    pub failures: usize,
    pub empirical_failure_rate: f64,
    /// `2 d^n exp(−K ε² λ / 2)`
    pub bound: f64,
    /// Smallest non-zero eigenvalue of `2^{n(S(ρ)−δ)} Y`.
    pub lambda_min: f64,
    /// `ε 2^{−n(D_G(ρ)+2δ)}`
    pub lambda_lower_bound: f64,
    pub ref_value: f64,
    /// `Tr[Π ρ^{⊗n}]`
    pub typical_mass_rho: f64,
    /// `Tr[Π̂ T(ρ)^{⊗n}]`
    pub typical_mass_twirl: f64,
    /// Rank of the twirled typical projector.
    pub twirl_typical_rank: f64,
    pub trace_x: f64,
    pub trace_y: f64,
    /// Rank of `Y`.
    pub support_rank: usize,
    pub seed: u64,
}

impl ChernoffTrialReport {
    pub fn lambda_holds(&self) -> bool {
        self.lambda_min >= self.lambda_lower_bound
    }

    pub fn trace_x_holds(&self) -> bool {
        self.trace_x >= 1.0 - 2.0 * self.eps
    }

    pub fn trace_y_holds(&self) -> bool {
        self.trace_y >= 1.0 - 3.0 * self.eps
    }

    /// One standard deviation of the empirical rate if the true failure
    /// probability were `bound`.
    pub fn binomial_sigma(&self) -> f64 {
        let p = self.bound.clamp(0.0, 1.0);
        (p * (1.0 - p) / self.num_batches.max(1) as f64).sqrt()
    }

    /// Empirical rate within three standard deviations of the bound (always
    /// true when the bound exceeds one).
    pub fn envelope_holds(&self) -> bool {
        self.bound >= 1.0 || self.empirical_failure_rate <= self.bound + 3.0 * self.binomial_sigma()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ChernoffOptions {
    pub n: usize,
    pub delta: f64,
    pub eps: f64,
    pub k: usize,
    pub num_batches: usize,
    pub seed: u64,
    pub cap: usize,
}

/// The sampling step of the achievability construction.
///
/// With `A = Π ρ^{⊗n} Π`, `X = Π̂ T^{⊗n}(A) Π̂` and `Y = Π̃ X Π̃` (Π̃ the
/// eigenvectors of X with eigenvalue at least `ε/rank Π̂`), each batch
/// averages `Π̃ U A U† Π̃` over `K` random tuples and fails when the average
/// leaves `[(1−ε)Y, (1+ε)Y]` on the support of Y.
pub fn chernoff_bound_trial(
    rep: &GroupRep,
    rho: &DensityOperator,
    opts: &ChernoffOptions,
    tol: &Tolerances,
) -> Result<ChernoffTrialReport> {
    let ChernoffOptions {
        n,
        delta,
        eps,
        k,
        num_batches,
        seed,
        cap,
    } = *opts;
    if rho.dim() != rep.dim() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim(),
            found: rho.dim(),
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1)")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let dim = check_cap(rep.dim(), n, cap)?;

    let twirled = DensityOperator::new(twirl(rep, rho.matrix())?, tol)?;
    let mut pi = TypicalProjector::new(rho, n, delta, tol)?;
    let mut pi_hat = TypicalProjector::new(&twirled, n, delta, tol)?;
    let pi_m = pi.materialize(cap)?.clone();
    let pi_hat_m = pi_hat.materialize(cap)?.clone();
    let rank_hat = 2f64.powf(pi_hat.index_set.log2_cardinality);

    let channel = TwirlChannel::new(rep, n)?;
    let a = rho.matrix().kron_power(n).conjugate_by(&pi_m).hermitian_part();
    let x = channel.apply(&a)?.conjugate_by(&pi_hat_m).hermitian_part();
    let x_eig = hermitian_eig(&x, tol.herm)?;
    let keep: Vec<usize> = (0..dim).filter(|&j| x_eig.values[j] >= eps / rank_hat).collect();
    let support: Vec<Vec<Complex64>> = keep.iter().map(|&j| x_eig.vector(j)).collect();
    let y_diag: Vec<f64> = keep.iter().map(|&j| x_eig.values[j]).collect();
    let trace_y: f64 = y_diag.iter().sum();

    let s_rho = von_neumann_entropy(rho);
    let scale = (n as f64 * (s_rho - delta)).exp2();
    let lambda_min = y_diag.iter().copied().fold(f64::INFINITY, f64::min) * scale;
    let ref_value = ref_closed_form(rep, rho, tol)?;
    let lambda_lower_bound = eps * (-(n as f64) * (ref_value + 2.0 * delta)).exp2();
    let bound = 2.0 * dim as f64 * (-(k as f64) * eps * eps * lambda_min / 2.0).exp();

    let r = support.len();
    let lower = CMatrix::from_real_diag(&y_diag.iter().map(|y| (1.0 - eps) * y).collect::<Vec<_>>());
    let upper = CMatrix::from_real_diag(&y_diag.iter().map(|y| (1.0 + eps) * y).collect::<Vec<_>>());
    let order_tol = tol.eig * dim as f64;
    let failed = (0..num_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = stream_rng(seed, batch as u64);
            let e = UnitaryEnsemble::sample(rep, n, k, &mut rng)?;
            let avg = apply_ensemble(&e, &a)?;
            // Compress to the support of Y: W† avg W.
            let av: Vec<Vec<Complex64>> = support
                .iter()
                .map(|w| (0..dim).map(|i| (0..dim).map(|j| avg[(i, j)] * w[j]).sum()).collect())
                .collect();
            let compressed = CMatrix::from_fn(r, |p, q| {
                support[p].iter().zip(&av[q]).map(|(wp, x)| wp.conj() * x).sum()
            })
            .hermitian_part();
            Ok(!(op_leq(&lower, &compressed, order_tol)? && op_leq(&compressed, &upper, order_tol)?))
        })
        .collect::<Result<Vec<bool>>>()?;
    let failures = failed.iter().filter(|&&f| f).count();

    Ok(ChernoffTrialReport {
        n,
        delta,
        eps,
        k,
        num_batches,
        failures,
        empirical_failure_rate: if num_batches == 0 {
            0.0
        } else {
            failures as f64 / num_batches as f64
        },
        bound,
        lambda_min,
        lambda_lower_bound,
        ref_value,
        typical_mass_rho: pi.index_set.total_mass,
        typical_mass_twirl: pi_hat.index_set.total_mass,
        twirl_typical_rank: rank_hat,
        trace_x: x.trace().re,
        trace_y,
        support_rank: r,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_cyclic_rep;
    use crate::random::random_density_matrix;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn plus() -> DensityOperator {
        let s = 0.5f64.sqrt();
        DensityOperator::from_real_amplitudes(&[s, s], &tol()).unwrap()
    }

    #[test]
    fn ensemble_sizes() {
        assert_eq!(ensemble_size(3, 0.0).unwrap(), 1);
        assert_eq!(ensemble_size(3, 1.0).unwrap(), 8);
        assert_eq!(ensemble_size(10, 0.2).unwrap(), 4);
        assert_eq!(ensemble_size(6, 0.1).unwrap(), 2);
        assert!(ensemble_size(3, -1.0).is_err());
        assert!(ensemble_size(100, 1.0).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let a = sample_ensemble(&z2, 3, 1.0, 7, 4096).unwrap();
        let b = sample_ensemble(&z2, 3, 1.0, 7, 4096).unwrap();
        assert_eq!(a.members(), b.members());
        assert_eq!(a.k(), 8);
        assert!(a.members().iter().flatten().all(|&g| g < 2));
        assert!(matches!(
            sample_ensemble(&z2, 13, 0.0, 7, 4096),
            Err(Error::DimensionCapExceeded { .. })
        ));
    }

    #[test]
    fn fast_path_matches_direct_conjugation() {
        let mut rng = stream_rng(11, 0);
        for (d, charges, n) in [(2, vec![0, 1], 3), (3, vec![0, 1, 2], 2), (4, vec![0, 1, 3], 2)] {
            let rep = make_cyclic_rep(d, &charges).unwrap();
            let dim = charges.len().pow(n as u32);
            let tau = random_density_matrix(&mut rng, dim, dim);
            let e = UnitaryEnsemble::sample(&rep, n, 5, &mut rng).unwrap();
            let mut direct = CMatrix::zeros(dim);
            for m in e.members() {
                direct.add_scaled(&tau.conjugate_by(&rep.tuple_unitary(m)), 1.0 / 5.0);
            }
            assert!(apply_ensemble(&e, &tau).unwrap().max_abs_diff(&direct) < 1e-13);
        }
    }

    #[test]
    fn full_group_equals_twirl() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let e = UnitaryEnsemble::full_group(&z2, 1, 4096).unwrap();
        assert_eq!(e.k(), 2);
        let tau = plus().matrix().clone();
        let out = apply_ensemble(&e, &tau).unwrap();
        assert!(out.max_abs_diff(&twirl(&z2, &tau).unwrap()) < 1e-15);
    }

    #[test]
    fn residual_examples() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let r = residual_asymmetry(&z2, 1, plus().matrix(), &tol()).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let sym = CMatrix::from_real_diag(&[0.3, 0.7]);
        assert!(residual_asymmetry(&z2, 1, &sym, &tol()).unwrap() < 1e-15);
    }

    #[test]
    fn exhaustive_sweep_symmetrizes() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let opts = SweepOptions {
            trials: 1,
            seed: 0,
            cap: 4096,
            full_group: true,
        };
        let reports = rate_sweep(&z2, &plus(), 8, &[1.0], &opts, &tol()).unwrap();
        assert_eq!(reports[0].k, 256);
        assert!(reports[0].max <= 1e-10);
    }

    #[test]
    fn audit_exhaustive_plus() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let e = UnitaryEnsemble::full_group(&z2, 4, 4096).unwrap();
        let audit = converse_audit(&plus(), &e, &tol()).unwrap();
        assert!(audit.eps_achieved < 1e-9);
        assert!((audit.s_out - 4.0).abs() < 1e-9);
        assert!(audit.s_in.abs() < 1e-12);
        assert!((audit.rate_lower_bound - 1.0).abs() < 1e-9);
        assert!((audit.rate - 1.0).abs() < 1e-15);
        assert!(audit.concavity_holds && audit.entropy_gain_holds);
    }

    #[test]
    fn single_unitary_keeps_entropy() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let e = UnitaryEnsemble::new(&z2, 2, vec![vec![1, 0]]).unwrap();
        let audit = converse_audit(&plus(), &e, &tol()).unwrap();
        assert!(audit.s_out.abs() < 1e-9);
        assert_eq!(audit.rate, 0.0);
    }

    #[test]
    fn chernoff_small_run() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let rho = DensityOperator::from_real_amplitudes(&[0.9f64.sqrt(), 0.1f64.sqrt()], &tol()).unwrap();
        let opts = ChernoffOptions {
            n: 4,
            delta: 0.25,
            eps: 0.1,
            k: 64,
            num_batches: 10,
            seed: 1,
            cap: 4096,
        };
        let a = chernoff_bound_trial(&z2, &rho, &opts, &tol()).unwrap();
        let b = chernoff_bound_trial(&z2, &rho, &opts, &tol()).unwrap();
        assert_eq!(a, b);
        assert!(a.lambda_holds());
        assert!((0.0..=1.0).contains(&a.empirical_failure_rate));
        assert!(a.trace_y <= a.trace_x + 1e-12);
    }
}
