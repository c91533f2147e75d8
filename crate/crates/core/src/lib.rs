//! Unilateral pseudo-shift operators on `ℓ^p(ℕ)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod corrector;
pub mod criteria;
pub mod error;
pub mod gallery;
pub mod log_scalar;
pub mod map;
pub mod operator;
pub mod orbit;
pub mod pairs;
pub mod sample;
pub mod scalar;
pub mod sparse;
pub mod weights;

pub use error::{Error, Result};
pub use log_scalar::LogScalar;
pub use map::{Index, ShiftMap, ShiftRule};
pub use operator::{power_as_pseudoshift, PseudoShift};
pub use scalar::{Real, Scalar};
pub use sparse::SparseVector;
pub use weights::WeightRule;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use config::{ScalarField, TupleSpec};
pub use corrector::{build_corrector, verify_bounds, BoundCertificate, BoundReport};
pub use criteria::{ConditionId, CriterionCertificate, ScalarFamily, SearchParams, Verdict};
pub use orbit::{blowup_collapse_assemble, density_report, orbit, AssemblyParams, VisitLog};

pub type RealPseudoShift = PseudoShift<f64>;
pub type ComplexPseudoShift = PseudoShift<num_complex::Complex64>;
pub type RealSparseVector = SparseVector<f64>;
pub type ComplexSparseVector = SparseVector<num_complex::Complex64>;
pub type RealWeightRule = WeightRule<f64>;
pub type ComplexWeightRule = WeightRule<num_complex::Complex64>;
