//! Secure spatial-modulation precoding.
//!
//! Finite-alphabet SM-MIMO with artificial noise: exact (Monte-Carlo) and
//! approximated secrecy-rate evaluation, three precoder optimizers and a seeded
//! experiment harness.
//!
//! Index convention: antenna index `n` and symbol index `m` are zero-based; the
//! SM symbol `(n, m)` has linear index `n * M + m`.

pub mod error;
pub mod flops;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod opt;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use metrics::{
    asr, build_cache, mi_lower_bound, mi_monte_carlo, secrecy_rate_mc, whiten, MiEstimate,
    QuadFormCache, SecrecyRate, Side,
};
pub use model::{
    an_projector, make_codebook, ml_detect, noise_covariance, sample_channel, sm_signal, transmit,
    AnProjector, ChannelPair, PowerConfig, Scheme, SmCodebook,
};
pub use opt::{
    asr_gradient, extract_precoder, max_asr_gd, max_asr_sca, max_sr_gd, project_spectrahedron,
    solve_sca_subproblem, GdParams, OptTrace, ScaParams,
};
