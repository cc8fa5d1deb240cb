//! Discrete design-of-experiments optimisation.
//!
//! Designs live on integer grids; criteria score them, the annealer improves
//! them, and the sensitivity tools measure how well a design recovers the
//! input/output rank correlations of a model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annealer;
pub mod correlation;
pub mod criteria;
pub mod design;
pub mod linalg;
pub mod models;
pub mod sampling;
pub mod scalar;
pub mod sensitivity;
pub mod sequential;

pub use annealer::{anneal, anneal_rows, anneal_seeded, metropolis_accept, AnnealError, OptResult, SaConfig, StageLog};
pub use criteria::{CnScaling, CriterionError, CriterionId, DoptConfig, Evaluator, LandscapeScan};
pub use design::{Design, DesignError, DistanceScale, DomainSpec, RealMatrix};
pub use sampling::{RngSeed, SamplingError, SeededRng};
pub use models::{analytical_suite, ten_bar, twenty_five_bar, AnalyticalModel, Model, ModelError, TrussModel, TrussResponse};
pub use scalar::Scalar;
pub use sensitivity::{correlation_error, SensitivityError, SensitivityReport};
pub use sequential::{ExtendedDesign, ExtensionPlan, ExtensionStrategy, SequentialError};

pub type OptResult64 = OptResult<f64>;
pub type OptResult32 = OptResult<f32>;
pub type SaConfig64 = SaConfig<f64>;
pub type SaConfig32 = SaConfig<f32>;
pub type DoptConfig64 = DoptConfig<f64>;
pub type Evaluator64 = Evaluator<f64>;
pub type Evaluator32 = Evaluator<f32>;
pub type TrussModel64 = TrussModel<f64>;
pub type TrussModel32 = TrussModel<f32>;
pub type SensitivityReport64 = SensitivityReport<f64>;
pub type SensitivityReport32 = SensitivityReport<f32>;
pub type ExtendedDesign64 = ExtendedDesign<f64>;
