use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, CMatrix, CVector};
use crate::model::{AnProjector, SmCodebook};

/// Transmit and noise powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub p_total: f64,
    /// Confidential-signal power.
    pub p1: f64,
    /// Artificial-noise power.
    pub p2: f64,
    pub sigma2_b: f64,
    pub sigma2_e: f64,
}

impl PowerConfig {
    pub fn new(p_total: f64, p1: f64, p2: f64, sigma2_b: f64, sigma2_e: f64) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(p_total >= 0.0 && p1 >= 0.0 && p2 >= 0.0) {
            return bad("powers must be nonnegative");
        }
        if !(sigma2_b > 0.0 && sigma2_e > 0.0) || !sigma2_b.is_finite() || !sigma2_e.is_finite() {
            return bad("noise variances must be positive and finite");
        }
        if p1 + p2 > p_total * (1.0 + 1e-12) {
            return bad("p1 + p2 exceeds the total power");
        }
        Ok(PowerConfig {
            p_total,
            p1,
            p2,
            sigma2_b,
            sigma2_e,
        })
    }

    /// Unit total power split as `p1 = split`, `p2 = 1 - split`, with
    /// `sigma_b^2 = sigma_e^2 = 10^(-snr_db / 10)`.
    pub fn from_snr_db(snr_db: f64, split: f64) -> Result<Self> {
        if !(split > 0.0 && split <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "power split {split} outside (0, 1]"
            )));
        }
        let sigma2 = 10f64.powf(-snr_db / 10.0);
        PowerConfig::new(1.0, split, 1.0 - split, sigma2, sigma2)
    }
}

/// `Q = p2 C T T^H C^H + sigma2 I`.
pub fn noise_covariance(c: &CMatrix, proj: &AnProjector, p2: f64, sigma2: f64) -> CMatrix {
    let ct = c * &proj.t_an;
    let n = c.nrows();
    hermitian_part(&((&ct * ct.adjoint()).scale(p2) + CMatrix::identity(n, n).scale(sigma2)))
}

/// `x = sqrt(p1) diag(v) s_{n,m} + sqrt(p2) T n_an`.
pub fn transmit(
    codebook: &SmCodebook,
    v: &CVector,
    proj: &AnProjector,
    powers: &PowerConfig,
    n: usize,
    m: usize,
    an_sample: &CVector,
) -> Result<CVector> {
    let nt = codebook.n_tx();
    if v.len() != nt || an_sample.len() != nt || proj.n_tx() != nt {
        return Err(Error::DimensionMismatch(format!(
            "transmit expects length-{nt} precoder, AN sample and projector"
        )));
    }
    let s = codebook.signal(n, m)?;
    let signal = s.component_mul(v).scale(powers.p1.sqrt());
    Ok(signal + (&proj.t_an * an_sample).scale(powers.p2.sqrt()))
}

/// Maximum-likelihood SM detection. Ties go to the smallest linear index.
pub fn ml_detect(
    y: &CVector,
    c: &CMatrix,
    v: &CVector,
    codebook: &SmCodebook,
    p1: f64,
) -> Result<(usize, usize)> {
    if y.len() != c.nrows() || v.len() != c.ncols() || c.ncols() != codebook.n_tx() {
        return Err(Error::DimensionMismatch(
            "ml_detect: y, channel and precoder disagree".into(),
        ));
    }
    let amp = p1.sqrt();
    let mut best = (0, 0);
    let mut best_metric = f64::INFINITY;
    for n in 0..codebook.n_tx() {
        let col = c.column(n);
        for (m, s) in codebook.symbols().iter().enumerate() {
            let gain = v[n] * s * amp;
            let metric: f64 = y
                .iter()
                .zip(col.iter())
                .map(|(yi, ci)| (yi - ci * gain).norm_sqr())
                .sum();
            if metric < best_metric {
                best_metric = metric;
                best = (n, m);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigen, C64};
    use crate::model::{an_projector, make_codebook, sample_channel, Scheme};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(seed: u64) -> (ChaCha8Rng, CMatrix, CMatrix, AnProjector) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = sample_channel(&mut rng, 2, 4);
        let g = sample_channel(&mut rng, 2, 4);
        let p = an_projector(&h).unwrap();
        (rng, h, g, p)
    }

    #[test]
    fn covariance_on_bob_reduces_to_white_noise() {
        let (_, h, g, p) = setup(1);
        let q = noise_covariance(&h, &p, 0.7, 0.3);
        assert!((q - CMatrix::identity(2, 2).scale(0.3)).norm() < 1e-12);
        let q0 = noise_covariance(&g, &p, 0.0, 0.3);
        assert_eq!(q0, CMatrix::identity(2, 2).scale(0.3));
    }

    #[test]
    fn covariance_matches_elementwise_recomputation() {
        let (_, _, g, p) = setup(2);
        let q = noise_covariance(&g, &p, 1.0, 1.0);
        let (ne, nt) = g.shape();
        for i in 0..ne {
            for j in 0..ne {
                let mut acc = C64::new(if i == j { 1.0 } else { 0.0 }, 0.0);
                for k in 0..nt {
                    for l in 0..nt {
                        for r in 0..nt {
                            acc += g[(i, k)] * p.t_an[(k, r)] * p.t_an[(l, r)].conj() * g[(j, l)].conj();
                        }
                    }
                }
                assert!((q[(i, j)] - acc).norm() < 1e-12);
            }
        }
        assert!((&q - q.adjoint()).norm() <= 1e-12 * q.norm());
        let (eigs, _) = hermitian_eigen(&q);
        assert!(eigs[0] >= 1.0 * (1.0 - 1e-9));
    }

    #[test]
    fn transmit_branches() {
        let (mut rng, _, _, p) = setup(3);
        let cb = make_codebook(4, Scheme::Psk, 4).unwrap();
        let ones = CVector::from_element(4, C64::new(1.0, 0.0));
        let an = sample_channel(&mut rng, 4, 1).column(0).into_owned();
        let only_signal = PowerConfig::new(1.0, 0.5, 0.0, 1.0, 1.0).unwrap();
        let x = transmit(&cb, &ones, &p, &only_signal, 2, 1, &an).unwrap();
        assert!((x - cb.signal(2, 1).unwrap().scale(0.5f64.sqrt())).norm() < 1e-15);

        let only_an = PowerConfig::new(1.0, 0.0, 0.4, 1.0, 1.0).unwrap();
        let x = transmit(&cb, &ones, &p, &only_an, 2, 1, &an).unwrap();
        assert!((x - (&p.t_an * &an).scale(0.4f64.sqrt())).norm() < 1e-15);

        let v = sample_channel(&mut rng, 4, 1).column(0).into_owned();
        let both = PowerConfig::new(1.0, 0.6, 0.4, 1.0, 1.0).unwrap();
        let x = transmit(&cb, &v, &p, &both, 0, 3, &an).unwrap();
        let a = transmit(&cb, &v, &p, &PowerConfig { p2: 0.0, ..both }, 0, 3, &an).unwrap();
        let b = transmit(&cb, &v, &p, &PowerConfig { p1: 0.0, ..both }, 0, 3, &an).unwrap();
        assert!((x - a - b).norm() < 1e-14);
        assert!(transmit(&cb, &v, &p, &both, 0, 3, &CVector::zeros(3)).is_err());
    }

    #[test]
    fn detection_noiseless_and_ties() {
        let (mut rng, h, _, _) = setup(4);
        let cb = make_codebook(2, Scheme::Psk, 4).unwrap();
        let v = sample_channel(&mut rng, 4, 1).column(0).into_owned();
        let y = (&h * cb.signal(1, 0).unwrap().component_mul(&v)).scale(2f64.sqrt());
        assert_eq!(ml_detect(&y, &h, &v, &cb, 2.0).unwrap(), (1, 0));
        let zero = CMatrix::zeros(2, 4);
        assert_eq!(ml_detect(&y, &zero, &v, &cb, 2.0).unwrap(), (0, 0));
    }

    #[test]
    fn detection_matches_brute_force() {
        let (mut rng, h, _, _) = setup(5);
        let cb = make_codebook(4, Scheme::Psk, 4).unwrap();
        let v = sample_channel(&mut rng, 4, 1).column(0).into_owned();
        for _ in 0..100 {
            let y = sample_channel(&mut rng, 2, 1).column(0).into_owned().scale(2.0);
            // Independent exhaustive search over the full grid.
            let mut metrics = Vec::new();
            for n in 0..4 {
                for m in 0..4 {
                    let x = cb.signal(n, m).unwrap().component_mul(&v);
                    metrics.push(((&y - &h * x).norm_squared(), (n, m)));
                }
            }
            let best = metrics
                .iter()
                .fold(metrics[0], |acc, &x| if x.0 < acc.0 { x } else { acc });
            assert_eq!(ml_detect(&y, &h, &v, &cb, 1.0).unwrap(), best.1);
        }
    }
}
