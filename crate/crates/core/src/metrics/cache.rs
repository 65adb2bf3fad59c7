use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, quad_form, CMatrix, CVector, C64};
use crate::metrics::whiten::whitened_channel;
use crate::model::{noise_covariance, AnProjector, ChannelPair, PowerConfig, SmCodebook};

/// Which receiver a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Bob,
    Eve,
}

/// Pairwise quadratic-form matrices for one channel realization.
///
/// For SM symbols `i = (n, m)` and `j = (n', m')` with `d = s_i - s_j`,
/// `B_ij = (H^H Q_b^{-1} H) ⊙ conj(d d^H)` and likewise `E_ij` with `G`, `Q_e`,
/// so that `p1 v^H B_ij v = ||sqrt(p1) Q_b^{-1/2} H diag(v) d||^2` exactly.
/// `d` has at most two nonzero entries, hence each matrix at most four.
#[derive(Debug, Clone)]
pub struct QuadFormCache {
    n_tx: usize,
    order: usize,
    p1: f64,
    symbols: Vec<C64>,
    gram_b: CMatrix,
    gram_e: CMatrix,
    whitened_b: CMatrix,
    whitened_e: CMatrix,
    b_mats: Vec<CMatrix>,
    e_mats: Vec<CMatrix>,
}

impl QuadFormCache {
    /// Builds the cache from already whitened channels `Q_b^{-1/2} H`, `Q_e^{-1/2} G`.
    pub fn from_whitened(
        whitened_b: CMatrix,
        whitened_e: CMatrix,
        codebook: &SmCodebook,
        p1: f64,
    ) -> Result<Self> {
        let n_tx = codebook.n_tx();
        if whitened_b.ncols() != n_tx || whitened_e.ncols() != n_tx {
            return Err(Error::DimensionMismatch(format!(
                "channels have {} / {} columns, codebook has {n_tx} antennas",
                whitened_b.ncols(),
                whitened_e.ncols()
            )));
        }
        let gram_b = hermitian_part(&(whitened_b.adjoint() * &whitened_b));
        let gram_e = hermitian_part(&(whitened_e.adjoint() * &whitened_e));
        let symbols = codebook.symbols().to_vec();
        let order = symbols.len();
        let k = order * n_tx;
        let mut b_mats = Vec::with_capacity(k * k);
        let mut e_mats = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let support = difference_support(&symbols, i, j);
                b_mats.push(masked(&gram_b, &support, n_tx));
                e_mats.push(masked(&gram_e, &support, n_tx));
            }
        }
        Ok(QuadFormCache {
            n_tx,
            order,
            p1,
            symbols,
            gram_b,
            gram_e,
            whitened_b,
            whitened_e,
            b_mats,
            e_mats,
        })
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `M * N_t`.
    pub fn size(&self) -> usize {
        self.order * self.n_tx
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn symbols(&self) -> &[C64] {
        &self.symbols
    }

    /// Same matrices, different signal power.
    pub fn with_p1(&self, p1: f64) -> Self {
        QuadFormCache { p1, ..self.clone() }
    }

    pub fn gram(&self, side: Side) -> &CMatrix {
        match side {
            Side::Bob => &self.gram_b,
            Side::Eve => &self.gram_e,
        }
    }

    /// `Q^{-1/2} C` for the given receiver.
    pub fn whitened(&self, side: Side) -> &CMatrix {
        match side {
            Side::Bob => &self.whitened_b,
            Side::Eve => &self.whitened_e,
        }
    }

    /// All `K^2` pair matrices, row-major in `(i, j)`.
    pub fn mats(&self, side: Side) -> &[CMatrix] {
        match side {
            Side::Bob => &self.b_mats,
            Side::Eve => &self.e_mats,
        }
    }

    /// `B_ij` or `E_ij` for linear symbol indices `i`, `j`.
    pub fn mat(&self, side: Side, i: usize, j: usize) -> &CMatrix {
        &self.mats(side)[i * self.size() + j]
    }

    /// Fills `out[i * K + j] = -p1 v^H A_ij v / 2`.
    pub(crate) fn exponents(&self, side: Side, v: &CVector, out: &mut [f64]) {
        let half = -0.5 * self.p1;
        for (o, a) in out.iter_mut().zip(self.mats(side)) {
            *o = half * quad_form(a, v);
        }
    }
}

/// Nonzero entries of `s_i - s_j` as `(antenna, value)`.
fn difference_support(symbols: &[C64], i: usize, j: usize) -> Vec<(usize, C64)> {
    let order = symbols.len();
    let (ni, mi) = (i / order, i % order);
    let (nj, mj) = (j / order, j % order);
    if i == j {
        return Vec::new();
    }
    if ni == nj {
        vec![(ni, symbols[mi] - symbols[mj])]
    } else {
        vec![(ni, symbols[mi]), (nj, -symbols[mj])]
    }
}

/// `gram ⊙ conj(d d^H)` touching only the support of `d`.
fn masked(gram: &CMatrix, support: &[(usize, C64)], n: usize) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    for &(r, dr) in support {
        for &(c, dc) in support {
            out[(r, c)] = gram[(r, c)] * dr.conj() * dc;
        }
    }
    out
}

/// Whitens both links (`Q_b` reduces to `sigma_b^2 I` when `H T = 0`) and
/// builds every pair matrix.
pub fn build_cache(
    channels: &ChannelPair,
    proj: &AnProjector,
    powers: &PowerConfig,
    codebook: &SmCodebook,
) -> Result<QuadFormCache> {
    if proj.n_tx() != channels.n_tx() {
        return Err(Error::DimensionMismatch(
            "projector and channels disagree on N_t".into(),
        ));
    }
    let q_b = noise_covariance(&channels.h, proj, powers.p2, powers.sigma2_b);
    let q_e = noise_covariance(&channels.g, proj, powers.p2, powers.sigma2_e);
    QuadFormCache::from_whitened(
        whitened_channel(&channels.h, &q_b)?,
        whitened_channel(&channels.g, &q_e)?,
        codebook,
        powers.p1,
    )
}
