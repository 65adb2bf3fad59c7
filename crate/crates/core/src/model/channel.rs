use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// Draws an i.i.d. `CN(0, 1)` matrix: real and imaginary parts `N(0, 1/2)`.
///
/// Entries are filled column by column so a given stream always yields the
/// same matrix.
pub fn sample_channel<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMatrix::zeros(rows, cols);
    for c in 0..cols {
        for r in 0..rows {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(r, c)] = C64::new(re * s, im * s);
        }
    }
    m
}

/// Legitimate channel `H` (`N_b x N_t`) and eavesdropper channel `G` (`N_e x N_t`).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    pub h: CMatrix,
    pub g: CMatrix,
}

impl ChannelPair {
    pub fn new(h: CMatrix, g: CMatrix) -> Result<Self> {
        if h.ncols() != g.ncols() || h.ncols() == 0 || h.nrows() == 0 || g.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "H is {}x{}, G is {}x{}",
                h.nrows(),
                h.ncols(),
                g.nrows(),
                g.ncols()
            )));
        }
        Ok(ChannelPair { h, g })
    }

    /// Draws `H` then `G` from `rng`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, n_b: usize, n_e: usize, n_tx: usize) -> Self {
        let h = sample_channel(rng, n_b, n_tx);
        let g = sample_channel(rng, n_e, n_tx);
        ChannelPair { h, g }
    }

    pub fn n_tx(&self) -> usize {
        self.h.ncols()
    }
}
