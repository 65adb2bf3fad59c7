//! Mutual information and secrecy rate: Monte-Carlo estimates of the exact
//! finite-alphabet quantities, and the closed-form approximation built on the
//! pairwise quadratic forms `p1 v^H B v`, `p1 v^H E v`.

mod bound;
mod cache;
mod monte_carlo;
mod whiten;

pub use bound::{asr, mi_lower_bound};
pub use cache::{build_cache, QuadFormCache, Side};
pub use monte_carlo::{
    mi_monte_carlo, mi_monte_carlo_with, secrecy_rate_mc, secrecy_rate_with, FixedNoiseSr,
    MiEstimate, NoiseSamples, SecrecyRate,
};
pub use whiten::{whiten, whitened_channel};
