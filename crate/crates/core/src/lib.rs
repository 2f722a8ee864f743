//! Steering rack force estimation from steering angle and road profile.
//!
//! Three estimators share one two degree-of-freedom bicycle model and differ
//! only in the tire model producing the front aligning moment: a linear tire
//! (`lt`), a brush tire (`bt`) and a rigid ring tire with road enveloping
//! (`rr`). The rack force is the front axle aligning moment times the
//! steering transmission ratio. Rack force can be split into a steering
//! component, a road component and a residual, and every estimator can be
//! scored against a higher-fidelity reference model ([`oracle`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod estimator;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod road;
pub mod scenario;
pub mod signal;
pub mod tire;

pub use dynamics::{normal_forces, AxleForces, NormalLoads, VehicleState, MIN_SPEED};
pub use error::{Error, Result};
pub use estimator::{decompose, run_estimator, Decomposition, EstimationResult, EstimatorKind};
pub use metrics::{nmae, MetricReport, ModelSummary};
pub use oracle::{decompose_oracle, run_oracle, OracleParams, SlipKinematics};
pub use params::{
    validate_params, Config, TireParams, TireParamsBT, TireParamsLT, TireParamsRR,
    ValidationReport, VehicleParams,
};
pub use road::{Cleat, RoadProfile};
pub use scenario::{
    gen_experiment1, gen_experiment2, gen_experiment3, Exp1Config, Exp2Config, Exp3Config, Scenario,
};
pub use signal::{resample, SignalTrace};
