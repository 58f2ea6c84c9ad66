//! One function per subcommand; each returns a report table.

use symcost_core::measures::{collective_ref_series, ref_closed_form, ref_variational, VariationalOptions};
use symcost_core::protocol::{
    chernoff_bound_trial, converse_audit, ensemble_size, rate_sweep, stream_rng, ChernoffOptions,
    SweepOptions, UnitaryEnsemble,
};
use symcost_core::typicality::typical_set;
use symcost_core::ProbabilityVector;

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::table::{Cell, Kind, Table};

use Kind::{Bool, Int, Real, Text};

fn positive(value: f64, field: &str) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::field(field, format!("{value} must be positive")))
    }
}

pub const REF_COLUMNS: &[(&str, Kind)] = &[
    ("closed_form", Real),
    ("variational", Real),
    ("gap", Real),
    ("minimizer_twirl_distance", Real),
    ("iterations", Int),
    ("converged", Bool),
];

pub fn cmd_ref(cfg: &ExperimentConfig) -> Result<Table> {
    let rep = cfg.rep()?;
    let rho = cfg.state()?;
    let mut opts = VariationalOptions::default();
    if let Some(m) = cfg.max_iter {
        opts.max_iter = m;
    }
    if let Some(t) = cfg.tol {
        opts.tol = positive(t, "tol")?;
    }
    let r = ref_variational(&rep, &rho, opts, &cfg.tolerances).map_err(|e| CliError::core("ref", e))?;
    let mut t = Table::new(REF_COLUMNS);
    t.push(vec![
        r.closed_form.into(),
        r.variational.into(),
        r.gap.into(),
        r.minimizer_twirl_distance.into(),
        r.iterations.into(),
        r.converged.into(),
    ]);
    Ok(t)
}

pub const SWEEP_COLUMNS: &[(&str, Kind)] = &[
    ("kind", Text),
    ("n", Int),
    ("rate", Real),
    ("k", Int),
    ("trial", Int),
    ("residual", Real),
    ("mean", Real),
    ("median", Real),
    ("max", Real),
    ("ref_value", Real),
    ("seed", Int),
];

/// Rows: one `trial` row per (rate, trial), a `summary` row per rate and a
/// final `reference` row carrying `D_G(ρ)`.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<Table> {
    let n = ExperimentConfig::require(cfg.n, "n")?;
    let grid = cfg
        .r_grid
        .as_ref()
        .ok_or_else(|| CliError::field("r_grid", "required for this command"))?;
    if grid.is_empty() {
        return Err(CliError::field("r_grid", "must contain at least one rate"));
    }
    if let Some(r) = grid.iter().find(|r| !r.is_finite() || **r < 0.0) {
        return Err(CliError::field("r_grid", format!("rate {r} must be finite and non-negative")));
    }
    let trials = cfg.trials.unwrap_or(30);
    let rep = cfg.rep()?;
    let rho = cfg.state()?;
    let mut t = Table::new(SWEEP_COLUMNS);
    if trials == 0 {
        eprintln!("warning: trials = 0, emitting an empty table");
        return Ok(t);
    }
    let opts = SweepOptions {
        trials,
        seed: cfg.seed(),
        cap: cfg.cap(),
        full_group: cfg.full_group,
    };
    let reports = rate_sweep(&rep, &rho, n, grid, &opts, &cfg.tolerances)
        .map_err(|e| CliError::core(format!("sweep at n = {n}"), e))?;
    for r in &reports {
        for (trial, &res) in r.residuals.iter().enumerate() {
            t.push(vec![
                "trial".into(),
                n.into(),
                r.rate.into(),
                r.k.into(),
                trial.into(),
                res.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                r.seed.into(),
            ]);
        }
    }
    for r in &reports {
        t.push(vec![
            "summary".into(),
            n.into(),
            r.rate.into(),
            r.k.into(),
            Cell::Empty,
            Cell::Empty,
            r.mean.into(),
            r.median.into(),
            r.max.into(),
            Cell::Empty,
            r.seed.into(),
        ]);
    }
    let d_g = ref_closed_form(&rep, &rho, &cfg.tolerances).map_err(|e| CliError::core("ref", e))?;
    let mut reference = vec![Cell::Empty; SWEEP_COLUMNS.len()];
    reference[0] = "reference".into();
    reference[1] = n.into();
    reference[9] = d_g.into();
    t.push(reference);
    Ok(t)
}

pub const AUDIT_COLUMNS: &[(&str, Kind)] = &[
    ("trial", Int),
    ("n", Int),
    ("k", Int),
    ("rate", Real),
    ("s_out", Real),
    ("s_twirl_out", Real),
    ("s_in", Real),
    ("eps_achieved", Real),
    ("rate_lower_bound", Real),
    ("concavity_rhs", Real),
    ("n_twirled_entropy", Real),
    ("concavity_holds", Bool),
    ("entropy_gain_holds", Bool),
    ("seed", Int),
];

/// With `full_group` the exhaustive ensemble is audited once; otherwise
/// `trials` ensembles of size `⌈2^{n·rate}⌉` are sampled.
pub fn cmd_audit(cfg: &ExperimentConfig) -> Result<Table> {
    let n = ExperimentConfig::require(cfg.n, "n")?;
    let rep = cfg.rep()?;
    let rho = cfg.state()?;
    let cap = cfg.cap();
    let ensembles: Vec<UnitaryEnsemble> = if cfg.full_group {
        vec![UnitaryEnsemble::full_group(&rep, n, cap).map_err(|e| CliError::core("ensemble", e))?]
    } else {
        let rate = ExperimentConfig::require(cfg.rate, "rate")?;
        let k = ensemble_size(n, rate).map_err(|e| CliError::field("rate", e))?;
        if rep.dim().checked_pow(n as u32).is_none_or(|d| d > cap) {
            return Err(CliError::core(
                format!("audit at n = {n}"),
                symcost_core::Error::DimensionCapExceeded {
                    dim: rep.dim().saturating_pow(n as u32),
                    cap,
                },
            ));
        }
        (0..cfg.trials.unwrap_or(1))
            .map(|trial| {
                UnitaryEnsemble::sample(&rep, n, k, &mut stream_rng(cfg.seed(), trial as u64))
                    .map_err(|e| CliError::core("ensemble", e))
            })
            .collect::<Result<_>>()?
    };
    let mut t = Table::new(AUDIT_COLUMNS);
    for (trial, e) in ensembles.iter().enumerate() {
        let a = converse_audit(&rho, e, &cfg.tolerances).map_err(|e| CliError::core("audit", e))?;
        t.push(vec![
            trial.into(),
            a.n.into(),
            a.k.into(),
            a.rate.into(),
            a.s_out.into(),
            a.s_twirl_out.into(),
            a.s_in.into(),
            a.eps_achieved.into(),
            a.rate_lower_bound.into(),
            a.concavity_rhs.into(),
            a.n_twirled_entropy.into(),
            a.concavity_holds.into(),
            a.entropy_gain_holds.into(),
            cfg.seed().into(),
        ]);
    }
    Ok(t)
}

pub const CHERNOFF_COLUMNS: &[(&str, Kind)] = &[
    ("n", Int),
    ("delta", Real),
    ("eps", Real),
    ("k", Int),
    ("num_batches", Int),
    ("failures", Int),
    ("empirical_failure_rate", Real),
    ("bound", Real),
    ("binomial_sigma", Real),
    ("envelope_holds", Bool),
    ("lambda_min", Real),
    ("lambda_lower_bound", Real),
    ("lambda_holds", Bool),
    ("ref_value", Real),
    ("typical_mass_rho", Real),
    ("typical_mass_twirl", Real),
    ("trace_x", Real),
    ("trace_x_holds", Bool),
    ("trace_y", Real),
    ("trace_y_holds", Bool),
    ("support_rank", Int),
    ("seed", Int),
];

/// `k` defaults to `⌈2^{n(D_G + 3δ)}⌉`.
pub fn cmd_chernoff(cfg: &ExperimentConfig) -> Result<Table> {
    let n = ExperimentConfig::require(cfg.n, "n")?;
    let delta = positive(ExperimentConfig::require(cfg.delta, "delta")?, "delta")?;
    let eps = ExperimentConfig::require(cfg.eps, "eps")?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::field("eps", format!("{eps} must lie in (0, 1)")));
    }
    let rep = cfg.rep()?;
    let rho = cfg.state()?;
    let k = match cfg.k {
        Some(k) => k,
        None => {
            let d_g = ref_closed_form(&rep, &rho, &cfg.tolerances).map_err(|e| CliError::core("ref", e))?;
            ensemble_size(n, d_g + 3.0 * delta).map_err(|e| CliError::field("k", e))?
        }
    };
    let opts = ChernoffOptions {
        n,
        delta,
        eps,
        k,
        num_batches: cfg.num_batches.unwrap_or(200),
        seed: cfg.seed(),
        cap: cfg.cap(),
    };
    let r = chernoff_bound_trial(&rep, &rho, &opts, &cfg.tolerances)
        .map_err(|e| CliError::core(format!("chernoff at n = {n}"), e))?;
    let mut t = Table::new(CHERNOFF_COLUMNS);
    t.push(vec![
        r.n.into(),
        r.delta.into(),
        r.eps.into(),
        r.k.into(),
        r.num_batches.into(),
        r.failures.into(),
        r.empirical_failure_rate.into(),
        r.bound.into(),
        r.binomial_sigma().into(),
        r.envelope_holds().into(),
        r.lambda_min.into(),
        r.lambda_lower_bound.into(),
        r.lambda_holds().into(),
        r.ref_value.into(),
        r.typical_mass_rho.into(),
        r.typical_mass_twirl.into(),
        r.trace_x.into(),
        r.trace_x_holds().into(),
        r.trace_y.into(),
        r.trace_y_holds().into(),
        r.support_rank.into(),
        r.seed.into(),
    ]);
    Ok(t)
}

pub const TYPICAL_COLUMNS: &[(&str, Kind)] = &[
    ("n", Int),
    ("delta", Real),
    ("entropy", Real),
    ("total_mass", Real),
    ("cardinality", Int),
    ("log2_cardinality", Real),
    ("log2_cardinality_bound", Real),
    ("bound_holds", Bool),
];

/// Uses `probs` when given, otherwise the spectrum of `state`. With `n_max`
/// one row per `n = 1..=n_max`, else a single row for `n`.
pub fn cmd_typical(cfg: &ExperimentConfig) -> Result<Table> {
    let delta = positive(ExperimentConfig::require(cfg.delta, "delta")?, "delta")?;
    let p = match cfg.probs()? {
        Some(p) => p,
        None => {
            let rho = cfg.state()?;
            ProbabilityVector::new(rho.spectrum().to_vec(), cfg.tolerances.trace)
                .map_err(|e| CliError::field("state", e))?
        }
    };
    let ns: Vec<usize> = match (cfg.n_max, cfg.n) {
        (Some(m), _) => (1..=m).collect(),
        (None, Some(n)) => vec![n],
        (None, None) => return Err(CliError::field("n", "required for this command (or n_max)")),
    };
    let mut t = Table::new(TYPICAL_COLUMNS);
    for n in ns {
        let s = typical_set(&p, n, delta, cfg.tolerances.eig).map_err(|e| CliError::core("typical", e))?;
        t.push(vec![
            n.into(),
            delta.into(),
            s.entropy.into(),
            s.total_mass.into(),
            s.cardinality.into(),
            s.log2_cardinality.into(),
            s.log2_cardinality_bound().into(),
            s.cardinality_bound_holds().into(),
        ]);
    }
    Ok(t)
}

pub const COLLECTIVE_COLUMNS: &[(&str, Kind)] =
    &[("n", Int), ("per_copy", Real), ("product_per_copy", Real)];

pub fn cmd_collective(cfg: &ExperimentConfig) -> Result<Table> {
    let n_max = ExperimentConfig::require(cfg.n_max, "n_max")?;
    let rep = cfg.rep()?;
    let rho = cfg.state()?;
    let s = collective_ref_series(&rep, &rho, n_max, cfg.cap(), &cfg.tolerances)
        .map_err(|e| CliError::core(format!("collective series up to n = {n_max}"), e))?;
    let mut t = Table::new(COLLECTIVE_COLUMNS);
    for i in 0..s.n_values.len() {
        t.push(vec![
            s.n_values[i].into(),
            s.per_copy_values[i].into(),
            s.product_per_copy[i].into(),
        ]);
    }
    Ok(t)
}
