use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{softmax_in_place, CMatrix, CVector, C64};
use crate::metrics::whiten::whitened_channel;
use crate::metrics::{QuadFormCache, Side};
use crate::model::{noise_covariance, AnProjector, ChannelPair, PowerConfig, SmCodebook};

/// Monte-Carlo mutual-information estimate in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    pub value: f64,
    /// Standard deviation of the per-sample estimator over `sqrt(n_samples)`.
    pub std_error: f64,
    pub n_samples: usize,
}

/// Whitened `CN(0, I)` noise realizations, shared between receivers and
/// across transmitted symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSamples {
    dim: usize,
    data: Vec<C64>,
}

impl NoiseSamples {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, n_samp: usize, dim: usize) -> Self {
        let data = (0..n_samp * dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
            })
            .collect();
        NoiseSamples { dim, data }
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// First `rows` components of realization `k`.
    fn get(&self, k: usize, rows: usize) -> &[C64] {
        &self.data[k * self.dim..k * self.dim + rows]
    }
}

/// Received constellation points `sqrt(p1) v_n s_m c_n` of one whitened link,
/// one column per SM symbol.
struct Constellation {
    rows: usize,
    points: Vec<C64>,
}

impl Constellation {
    fn new(whitened: &CMatrix, symbols: &[C64], v: &CVector, p1: f64) -> Self {
        let rows = whitened.nrows();
        let amp = p1.sqrt();
        let mut points = Vec::with_capacity(rows * symbols.len() * v.len());
        for n in 0..v.len() {
            for s in symbols {
                let g = v[n] * s * amp;
                points.extend(whitened.column(n).iter().map(|c| c * g));
            }
        }
        Constellation { rows, points }
    }

    fn size(&self) -> usize {
        self.points.len() / self.rows.max(1)
    }

    fn point(&self, i: usize) -> &[C64] {
        &self.points[i * self.rows..(i + 1) * self.rows]
    }

    /// `(1/K) sum_i log2 sum_j exp(||z||^2 - ||a_i - a_j + z||^2)` for one noise draw.
    /// When `weights` is given, row `i` of it receives the softmax over `j`.
    fn per_sample(&self, z: &[C64], scratch: &mut [f64], mut weights: Option<&mut [f64]>) -> f64 {
        let k = self.size();
        let z2: f64 = z.iter().map(|x| x.norm_sqr()).sum();
        let mut acc = 0.0;
        for i in 0..k {
            let ai = self.point(i);
            for (j, slot) in scratch[..k].iter_mut().enumerate() {
                let aj = self.point(j);
                let mut r2 = 0.0;
                for t in 0..self.rows {
                    r2 += (ai[t] - aj[t] + z[t]).norm_sqr();
                }
                *slot = z2 - r2;
            }
            acc += softmax_in_place(&mut scratch[..k]);
            if let Some(w) = weights.as_deref_mut() {
                w[i * k..(i + 1) * k].copy_from_slice(&scratch[..k]);
            }
        }
        acc / k as f64
    }
}

/// Monte-Carlo estimate of `I(s; y)` on a whitened link, drawing `n_samp`
/// noise realizations from `rng`.
pub fn mi_monte_carlo<R: Rng + ?Sized>(
    whitened: &CMatrix,
    codebook: &SmCodebook,
    v: &CVector,
    p1: f64,
    n_samp: usize,
    rng: &mut R,
) -> MiEstimate {
    let samples = NoiseSamples::draw(rng, n_samp.max(1), whitened.nrows());
    mi_monte_carlo_with(whitened, codebook, v, p1, &samples)
}

/// As [`mi_monte_carlo`] with caller-supplied noise (common random numbers).
pub fn mi_monte_carlo_with(
    whitened: &CMatrix,
    codebook: &SmCodebook,
    v: &CVector,
    p1: f64,
    samples: &NoiseSamples,
) -> MiEstimate {
    let (mean, sd, n) = per_sample_stats(whitened, codebook.symbols(), v, p1, samples);
    MiEstimate {
        value: mean.max(0.0),
        std_error: sd / (n as f64).sqrt(),
        n_samples: n,
    }
}

/// Mean and standard deviation of the per-sample MI estimator.
fn per_sample_stats(
    whitened: &CMatrix,
    symbols: &[C64],
    v: &CVector,
    p1: f64,
    samples: &NoiseSamples,
) -> (f64, f64, usize) {
    assert!(samples.dim() >= whitened.nrows(), "noise samples too short for the link");
    let pts = Constellation::new(whitened, symbols, v, p1);
    let k = pts.size();
    let log_k = (k as f64).log2();
    let mut scratch = vec![0.0; k];
    let n = samples.len();
    let xs: Vec<f64> = (0..n)
        .map(|s| log_k - pts.per_sample(samples.get(s, pts.rows), &mut scratch, None))
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    (mean, sd, n)
}

/// Monte-Carlo secrecy rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyRate {
    /// `[I_b - I_e]^+`.
    pub value: f64,
    /// `I_b - I_e` before clamping.
    pub raw: f64,
    pub bob: MiEstimate,
    pub eve: MiEstimate,
}

impl SecrecyRate {
    /// Combined standard error of the two estimates.
    pub fn std_error(&self) -> f64 {
        self.bob.std_error.hypot(self.eve.std_error)
    }
}

/// `[I(s; y_b) - I(s; y_e)]^+` with one set of `n_samp` noise draws shared by
/// both receivers.
pub fn secrecy_rate_mc<R: Rng + ?Sized>(
    channels: &ChannelPair,
    proj: &AnProjector,
    powers: &PowerConfig,
    codebook: &SmCodebook,
    v: &CVector,
    n_samp: usize,
    rng: &mut R,
) -> Result<SecrecyRate> {
    if v.len() != channels.n_tx() || codebook.n_tx() != channels.n_tx() {
        return Err(Error::DimensionMismatch(
            "precoder, codebook and channels disagree on N_t".into(),
        ));
    }
    let q_b = noise_covariance(&channels.h, proj, powers.p2, powers.sigma2_b);
    let q_e = noise_covariance(&channels.g, proj, powers.p2, powers.sigma2_e);
    let wb = whitened_channel(&channels.h, &q_b)?;
    let we = whitened_channel(&channels.g, &q_e)?;
    let dim = wb.nrows().max(we.nrows());
    let samples = NoiseSamples::draw(rng, n_samp.max(1), dim);
    Ok(rate_from(&wb, &we, codebook, v, powers.p1, &samples))
}

/// Secrecy rate on the links stored in `cache`, with supplied noise.
pub fn secrecy_rate_with(
    cache: &QuadFormCache,
    codebook: &SmCodebook,
    v: &CVector,
    samples: &NoiseSamples,
) -> SecrecyRate {
    rate_from(
        cache.whitened(Side::Bob),
        cache.whitened(Side::Eve),
        codebook,
        v,
        cache.p1(),
        samples,
    )
}

fn rate_from(
    wb: &CMatrix,
    we: &CMatrix,
    codebook: &SmCodebook,
    v: &CVector,
    p1: f64,
    samples: &NoiseSamples,
) -> SecrecyRate {
    let bob = mi_monte_carlo_with(wb, codebook, v, p1, samples);
    let eve = mi_monte_carlo_with(we, codebook, v, p1, samples);
    let raw = bob.value - eve.value;
    SecrecyRate {
        value: raw.max(0.0),
        raw,
        bob,
        eve,
    }
}

/// Monte-Carlo secrecy rate with the noise frozen, as a smooth deterministic
/// function of the precoder. Objective and gradient of the Max-SR-GD baseline.
#[derive(Debug, Clone)]
pub struct FixedNoiseSr<'a> {
    cache: &'a QuadFormCache,
    samples: NoiseSamples,
}

impl<'a> FixedNoiseSr<'a> {
    pub fn new(cache: &'a QuadFormCache, samples: NoiseSamples) -> Self {
        let rows = cache.whitened(Side::Bob).nrows().max(cache.whitened(Side::Eve).nrows());
        assert!(samples.dim() >= rows, "noise samples too short for the links");
        FixedNoiseSr { cache, samples }
    }

    /// `I_b - I_e` (unclamped sample means).
    pub fn objective(&self, v: &CVector) -> f64 {
        let side = |s: Side| {
            per_sample_stats(self.cache.whitened(s), self.cache.symbols(), v, self.cache.p1(), &self.samples).0
        };
        side(Side::Bob) - side(Side::Eve)
    }

    /// Conjugate (Wirtinger) gradient of [`FixedNoiseSr::objective`]: a
    /// perturbation `d` changes the objective by `2 Re(g^H d)` to first order.
    pub fn gradient(&self, v: &CVector) -> CVector {
        self.side_gradient(Side::Bob, v) - self.side_gradient(Side::Eve, v)
    }

    fn side_gradient(&self, side: Side, v: &CVector) -> CVector {
        let whitened = self.cache.whitened(side);
        let symbols = self.cache.symbols();
        let order = symbols.len();
        let pts = Constellation::new(whitened, symbols, v, self.cache.p1());
        let (rows, k) = (pts.rows, pts.size());
        let mut scratch = vec![0.0; k];
        let mut weights = vec![0.0; k * k];
        let mut grad = CVector::zeros(v.len());
        // Column n of the whitened channel scaled by conj(s_m), per symbol i.
        let lever: Vec<Vec<C64>> = (0..k)
            .map(|i| {
                let s = symbols[i % order].conj();
                whitened.column(i / order).iter().map(|c| c.conj() * s).collect()
            })
            .collect();
        for s in 0..self.samples.len() {
            let z = self.samples.get(s, rows);
            pts.per_sample(z, &mut scratch, Some(&mut weights));
            for i in 0..k {
                let ai = pts.point(i);
                for j in 0..k {
                    let w = weights[i * k + j];
                    if i == j || w == 0.0 {
                        continue;
                    }
                    let aj = pts.point(j);
                    let (mut gi, mut gj) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
                    for t in 0..rows {
                        let r = ai[t] - aj[t] + z[t];
                        gi += lever[i][t] * r;
                        gj += lever[j][t] * r;
                    }
                    grad[i / order] += gi * w;
                    grad[j / order] -= gj * w;
                }
            }
        }
        let scale = self.cache.p1().sqrt() / (k as f64 * self.samples.len() as f64 * LN_2);
        grad.scale(scale)
    }
}
