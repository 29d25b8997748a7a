//! Config-driven experiment pipelines and their reports.

mod config;
mod instance;
mod pipelines;
mod run;

pub use config::{
    BuiltinGraph, ExperimentConfig, ExperimentParams, InstanceSpec, Limits, OutputSpec, PairSpec,
    ParabolicChoice, SampleSpec, CONFIG_VERSION,
};
pub use instance::{instance_hash, interior_pairs, Instance, InstanceSummary};
pub use pipelines::{
    convexify_checks, convexify_experiment, level_gap_scan, milnor_svarc_experiment, Check,
    ConvexifyRow, LevelGap, MilnorSvarcResult, MilnorSvarcRow, ParabolicWitness,
};
pub use run::{run, Artifact, Environment, Report, RunStatus, Timing, REPORT_FORMAT};
