//! Numerical lab for greedy-type approximation with respect to Schauder bases
//! of quasi-Banach sequence spaces.
//!
//! Vectors are finitely supported sequences indexed from 1. The bundled
//! spaces are `ℓ_p`, the summing basis of `c_0`, the difference basis of
//! `ℓ_1`, a Schreier-type space and a mixed `ℓ_2`/Lorentz space. On top of
//! the norms the crate computes greedy sets, the four greedy-type errors,
//! democracy functions, weight diagnostics and approximation class norms.

pub mod chebyshev;
pub mod classes;
pub mod combin;
pub mod democracy;
pub mod error;
pub mod greedy;
pub mod sampling;
pub mod spaces;
pub mod vector;
pub mod verify;
pub mod weights;

pub use chebyshev::{chebyshev_project, sigma, theta, ChebyshevSolution, SolveMethod};
pub use classes::{class_norm, ClassKind, ClassNorm, ClassParams, ExperimentRow, Exponent};
pub use democracy::{DemocracyReport, Side, DEFAULT_BUDGET};
pub use error::{LabError, Result};
pub use greedy::{beta, gamma, greedy_sets, truncate, Estimate, GreedySetFamily};
pub use spaces::{SequenceSpace, SpaceKind};
pub use vector::{SignedSet, SparseVector};
pub use weights::{Weight, WeightFormula};
