use crate::linalg::{log2_sum_exp, CVector};
use crate::metrics::{QuadFormCache, Side};

/// Closed-form approximation of the finite-alphabet mutual information:
///
/// `log2 K - (1/K) sum_i log2 sum_j exp(-p1 v^H A_ij v / 2)`, `K = M N_t`.
///
/// Every inner sum contains the `j = i` term `exp(0) = 1`, so the value lies in
/// `[0, log2 K]`.
pub fn mi_lower_bound(cache: &QuadFormCache, side: Side, v: &CVector) -> f64 {
    let k = cache.size();
    let mut exps = vec![0.0; k * k];
    cache.exponents(side, v, &mut exps);
    let inner: f64 = exps.chunks_exact(k).map(log2_sum_exp).sum();
    (k as f64).log2() - inner / k as f64
}

/// Approximated secrecy rate, the difference of the two closed-form bounds.
/// `clamp` applies `[.]^+`.
pub fn asr(cache: &QuadFormCache, v: &CVector, clamp: bool) -> f64 {
    let r = mi_lower_bound(cache, Side::Bob, v) - mi_lower_bound(cache, Side::Eve, v);
    if clamp {
        r.max(0.0)
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMatrix, C64};
    use crate::metrics::build_cache;
    use crate::model::{an_projector, make_codebook, sample_channel, ChannelPair, PowerConfig, Scheme};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_cache(seed: u64, n_tx: usize, order: usize, snr_db: f64) -> QuadFormCache {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = ChannelPair::sample(&mut rng, 2, 2, n_tx);
        let proj = an_projector(&ch.h).unwrap();
        let pw = PowerConfig::from_snr_db(snr_db, 0.5).unwrap();
        let cb = make_codebook(order, Scheme::Psk, n_tx).unwrap();
        build_cache(&ch, &proj, &pw, &cb).unwrap()
    }

    fn random_v(seed: u64, n: usize) -> CVector {
        sample_channel(&mut ChaCha8Rng::seed_from_u64(seed), n, 1).column(0).into_owned()
    }

    #[test]
    fn zero_precoder_gives_zero() {
        let cache = random_cache(1, 4, 2, 10.0);
        let v = CVector::zeros(4);
        assert_eq!(mi_lower_bound(&cache, Side::Bob, &v), 0.0);
        assert_eq!(mi_lower_bound(&cache, Side::Eve, &v), 0.0);
        assert_eq!(asr(&cache, &v, false), 0.0);
    }

    #[test]
    fn saturates_at_spectral_efficiency() {
        let cache = random_cache(2, 4, 2, 0.0).with_p1(1e6);
        let v = CVector::from_element(4, C64::new(1.0, 0.0));
        for side in [Side::Bob, Side::Eve] {
            let lb = mi_lower_bound(&cache, side, &v);
            assert!((lb - 3.0).abs() < 0.01, "{side:?}: {lb}");
        }
    }

    #[test]
    fn matches_hand_coded_double_sum() {
        // N_t = 2, BPSK, H = [[1, 0.5j], [0.2, 1]], no AN, sigma^2 = 1, p1 = 1.
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.2, 0.0), C64::new(1.0, 0.0)],
        );
        let cb = make_codebook(2, Scheme::Psk, 2).unwrap();
        let cache = QuadFormCache::from_whitened(h.clone(), h.clone(), &cb, 1.0).unwrap();
        let v = CVector::from_element(2, C64::new(1.0, 0.0));
        // The four received points are +-h_1, +-h_2.
        let cols = [
            h.column(0).into_owned(),
            -h.column(0).into_owned(),
            h.column(1).into_owned(),
            -h.column(1).into_owned(),
        ];
        let mut acc = 0.0;
        for a in &cols {
            let s: f64 = cols.iter().map(|b| (-(a - b).norm_squared() / 2.0).exp()).sum();
            acc += s.log2();
        }
        let want = 2.0 - acc / 4.0;
        assert!((mi_lower_bound(&cache, Side::Bob, &v) - want).abs() < 1e-10);
    }

    #[test]
    fn symmetric_links_have_zero_asr() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = sample_channel(&mut rng, 2, 4);
        let cb = make_codebook(4, Scheme::Psk, 4).unwrap();
        let cache = QuadFormCache::from_whitened(h.clone(), h, &cb, 0.5).unwrap();
        for s in 0..5 {
            assert_eq!(asr(&cache, &random_v(s, 4), false), 0.0);
        }
    }

    #[test]
    fn equals_direct_sum_over_pair_matrices() {
        let cache = random_cache(5, 4, 4, 5.0);
        let v = random_v(50, 4);
        let k = cache.size();
        let p1 = cache.p1();
        let lse = |side: Side, i: usize| {
            (0..k)
                .map(|j| {
                    let q = (v.adjoint() * cache.mat(side, i, j) * &v)[(0, 0)].re;
                    (-p1 * q / 2.0).exp()
                })
                .sum::<f64>()
                .log2()
        };
        let direct: f64 = (0..k).map(|i| lse(Side::Eve, i) - lse(Side::Bob, i)).sum::<f64>() / k as f64;
        assert!((asr(&cache, &v, false) - direct).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn bounded_and_scale_consistent(seed in 0u64..1000, snr in -10.0f64..20.0) {
            let cache = random_cache(seed, 4, 2, snr);
            let v = random_v(seed + 7, 4);
            for side in [Side::Bob, Side::Eve] {
                let lb = mi_lower_bound(&cache, side, &v);
                prop_assert!((0.0..=3.0 + 1e-12).contains(&lb));
            }
            let quarter = cache.with_p1(cache.p1() / 4.0);
            prop_assert_eq!(asr(&cache, &v, false), asr(&quarter, &v.scale(2.0), false));
        }

        #[test]
        fn phase_invariant(seed in 0u64..1000, theta in 0.0f64..std::f64::consts::TAU) {
            let cache = random_cache(seed, 4, 2, 5.0);
            let v = random_v(seed + 3, 4);
            let rotated = &v * C64::from_polar(1.0, theta);
            prop_assert!((asr(&cache, &v, false) - asr(&cache, &rotated, false)).abs() < 1e-12);
        }
    }
}
