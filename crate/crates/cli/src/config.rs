//! Experiment configuration documents (JSON).
//!
//! Complex numbers are `[re, im]` pairs and matrices are flat row-major
//! lists of them.

use num_complex::Complex64;
use serde::Deserialize;
use symcost_core::group::{make_cyclic_rep, make_explicit_rep, GroupRep};
use symcost_core::{CMatrix, DensityOperator, ProbabilityVector, Tolerances, DEFAULT_DIM_CAP};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic {
        d: usize,
        charges: Vec<i64>,
    },
    Explicit {
        mult_table: Vec<Vec<usize>>,
        unitaries: Vec<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Amplitudes(Vec<[f64; 2]>),
    Density(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub group: Option<GroupSpec>,
    pub state: Option<StateSpec>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub delta: Option<f64>,
    pub r_grid: Option<Vec<f64>>,
    pub rate: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub cap: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub eps: Option<f64>,
    pub num_batches: Option<usize>,
    pub k: Option<usize>,
    #[serde(default)]
    pub full_group: bool,
    pub probs: Option<Vec<f64>>,
}

fn complex(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn matrix(field: &str, pairs: &[[f64; 2]]) -> Result<CMatrix> {
    CMatrix::from_row_major(complex(pairs)).map_err(|e| CliError::field(field, e))
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.tolerances
            .validate()
            .map_err(|e| CliError::field("tolerances", e))?;
        Ok(cfg)
    }

    pub fn cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_DIM_CAP)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn require<T: Copy>(value: Option<T>, field: &str) -> Result<T> {
        value.ok_or_else(|| CliError::field(field, "required for this command"))
    }

    pub fn rep(&self) -> Result<GroupRep> {
        match self.group.as_ref().ok_or_else(|| CliError::field("group", "required"))? {
            GroupSpec::Cyclic { d, charges } => {
                make_cyclic_rep(*d, charges).map_err(|e| CliError::field("group", e))
            }
            GroupSpec::Explicit {
                mult_table,
                unitaries,
            } => {
                let mats = unitaries
                    .iter()
                    .enumerate()
                    .map(|(i, u)| matrix(&format!("group.unitaries[{i}]"), u))
                    .collect::<Result<Vec<_>>>()?;
                make_explicit_rep(mult_table.clone(), mats, &self.tolerances)
                    .map_err(|e| CliError::field("group", e))
            }
        }
    }

    pub fn state(&self) -> Result<DensityOperator> {
        let tol = &self.tolerances;
        match self.state.as_ref().ok_or_else(|| CliError::field("state", "required"))? {
            StateSpec::Amplitudes(a) => DensityOperator::from_pure(&complex(a), tol)
                .map_err(|e| CliError::field("state.amplitudes", e)),
            StateSpec::Density(m) => DensityOperator::new(matrix("state.density", m)?, tol)
                .map_err(|e| CliError::field("state.density", e)),
        }
    }

    pub fn probs(&self) -> Result<Option<ProbabilityVector>> {
        self.probs
            .as_ref()
            .map(|p| {
                ProbabilityVector::new(p.clone(), self.tolerances.trace)
                    .map_err(|e| CliError::field("probs", e))
            })
            .transpose()
    }
}
