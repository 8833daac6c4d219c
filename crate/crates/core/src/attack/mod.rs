//! Parity checks, distinguishing, complexity estimates and state recovery.

mod bits;
mod catalog;
mod distinguisher;
mod estimate;
mod experiment;
mod plan;
mod recover;
mod sigma;
mod xcorr;

pub use bits::PackedBits;
pub use catalog::{
    builtin_periods, builtin_plan, BuiltinPlan, ClaimCheck, PublishedClaim, Quantity, Relation, BUILTIN_PLANS,
};
pub use distinguisher::{
    amplified_bias, amplified_log2, distinguish, empirical_bias, normal_cdf, normal_quantile, sample_size,
    Decision, DistinguisherParams, Verdict,
};
pub use estimate::{estimate, AttackEstimate, CostModel, FoldedEstimate};
pub use experiment::{run_experiment, run_trial, ExperimentConfig, ExperimentReport, Input, Method, TrialRecord};
pub use plan::{make_plan, make_plan_over, BasisOffset, ParityCheckPlan, PlanRegister, PlanRequest};
pub use recover::{
    eq2_complement, eq2_total, exhaustive_recover, fold_counts, folded_recover, recovery_params, AttackResult,
    RecoveryParams, RotationSearch,
};
pub use sigma::{keystream_parity, register_parity, sigma_bits, KeystreamSource, SigmaStream};
pub use xcorr::{crosscorrelate, crosscorrelate_direct, Correlation, Correlator};
