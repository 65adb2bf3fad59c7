//! Precoder optimizers: gradient ascent on the closed-form ASR (Max-ASR-GD),
//! the same loop on the fixed-noise Monte-Carlo SR (Max-SR-GD baseline), and
//! successive convex approximation of the semidefinite relaxation (Max-ASR-SCA).

mod gd;
mod gradient;
mod sca;
mod spectrahedron;

use crate::linalg::{power, CVector, C64};

pub use gd::{max_asr_gd, max_sr_gd, max_sr_gd_cached, GdParams};
pub use gradient::asr_gradient;
pub use sca::{
    extract_precoder, f1, f2, grad_f1, leading_precoder, max_asr_sca, relaxed_asr,
    solve_sca_subproblem, subproblem_objective, ScaParams,
};
pub use spectrahedron::project_spectrahedron;

/// Result of an optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptTrace {
    /// Objective after initialization and after every accepted update (bits).
    pub objective_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub final_vector: CVector,
}

/// All-ones precoder, the unprecoded baseline with `tr(v v^H) = N_t`.
pub fn uniform_precoder(n_tx: usize) -> CVector {
    CVector::from_element(n_tx, C64::new(1.0, 0.0))
}

pub(crate) fn is_zero(v: &CVector) -> bool {
    power(v) == 0.0
}
