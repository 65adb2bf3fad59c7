//! Seeded experiment driver: SR-vs-SNR curves, per-realization SR samples,
//! iteration counts and FLOP curves, written as CSV plus plotting scripts.
//!
//! Every table is a pure function of the configuration. Trials draw from
//! RNG streams keyed by `(seed, purpose, trial, snr)`, run in parallel and are
//! merged in trial order.

mod config;
mod output;
mod run;

pub use config::{ExperimentConfig, FlopsConfig, Init, Method};
pub use output::{format_g9, plot_script, Table};
pub use run::{
    run_cdf, run_complexity_curve, run_iteration_pmf, run_sr_vs_snr, run_trial, trial_rng,
    CdfRow, FlopRow, IterRow, Purpose, SrRow, TrialOutcome,
};
