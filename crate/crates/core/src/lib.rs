//! Numerical tools for quantifying and removing asymmetry of quantum states
//! with respect to finite symmetry groups.
//!
//! * [`linalg`], [`eig`], [`state`], [`entropy`], [`distance`]: dense complex
//!   linear algebra, validated density operators, entropies and trace-norm
//!   bounds.
//! * [`group`]: finite groups, unitary representations, exact twirls.
//! * [`measures`]: relative entropy of frameness, two independent ways.
//! * [`typicality`]: weakly typical sets and subspaces.
//! * [`protocol`]: randomized symmetrization with group-element ensembles,
//!   the converse entropy audit and the operator Chernoff experiment.
//!
//! All entropies are in bits.

pub mod distance;
pub mod eig;
pub mod entropy;
pub mod error;
pub mod group;
pub mod linalg;
pub mod measures;
pub mod protocol;
pub mod random;
pub mod state;
pub mod typicality;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use state::{DensityOperator, ProbabilityVector, Tolerances, DEFAULT_DIM_CAP};
