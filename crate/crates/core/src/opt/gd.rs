use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rescale_power, CVector};
use crate::metrics::{asr, build_cache, FixedNoiseSr, NoiseSamples, QuadFormCache, Side};
use crate::model::{AnProjector, ChannelPair, PowerConfig, SmCodebook};
use crate::opt::{asr_gradient, is_zero, OptTrace};

/// Step-halving gradient ascent settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GdParams {
    pub step_init: f64,
    /// The run stops once the step has been halved below this.
    pub step_min: f64,
    /// The run also stops after an accepted update that gains at most this
    /// much (bits).
    pub tol: f64,
    /// Cap on accepted updates.
    pub max_iters: usize,
}

impl Default for GdParams {
    fn default() -> Self {
        GdParams {
            step_init: 0.5,
            step_min: 0.01,
            tol: 1e-3,
            max_iters: 500,
        }
    }
}

impl GdParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.step_min > 0.0 && self.step_min < self.step_init && self.tol >= 0.0;
        if !ok || self.max_iters == 0 {
            return Err(Error::InvalidParameter(format!(
                "need 0 < step_min < step_init, tol >= 0 and max_iters > 0, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Projected gradient ascent with power renormalization and step halving.
///
/// Each trial update `v + step * grad` is rescaled to `tr(v v^H) = N_t` and
/// kept if it does not decrease the objective; otherwise the step is halved.
/// Stops when the step drops below `step_min` or an accepted update gains at
/// most `tol`. `iterations` counts accepted updates; rejections only halve the
/// step, so at most `log2(step_init / step_min) + 1` of them occur per run.
fn ascend(
    v0: &CVector,
    params: &GdParams,
    objective: impl Fn(&CVector) -> f64,
    gradient: impl Fn(&CVector) -> CVector,
) -> Result<OptTrace> {
    params.validate()?;
    if is_zero(v0) {
        return Err(Error::ZeroPrecoder);
    }
    let budget = v0.len() as f64;
    let mut v = rescale_power(v0, budget);
    let mut value = objective(&v);
    let mut history = vec![value];
    let mut grad = gradient(&v);
    let mut step = params.step_init;
    let mut iterations = 0;
    let mut converged = false;
    loop {
        if step < params.step_min {
            converged = true;
            break;
        }
        if iterations == params.max_iters {
            break;
        }
        let candidate = rescale_power(&(&v + grad.scale(step)), budget);
        let cand_value = objective(&candidate);
        if cand_value >= value {
            iterations += 1;
            let gain = cand_value - value;
            v = candidate;
            value = cand_value;
            history.push(value);
            if gain <= params.tol {
                converged = true;
                break;
            }
            grad = gradient(&v);
        } else {
            step /= 2.0;
        }
    }
    Ok(OptTrace {
        objective_history: history,
        iterations,
        converged,
        final_vector: v,
    })
}

/// Max-ASR-GD: gradient ascent on the unclamped closed-form ASR.
pub fn max_asr_gd(cache: &QuadFormCache, v0: &CVector, params: &GdParams) -> Result<OptTrace> {
    check_len(cache, v0)?;
    ascend(v0, params, |v| asr(cache, v, false), |v| asr_gradient(cache, v))
}

/// Max-SR-GD baseline: the same loop on the Monte-Carlo secrecy rate.
///
/// `n_samp` noise realizations are drawn once from `rng` and shared by both
/// receivers, making the objective deterministic within the run; the gradient
/// is the exact gradient of that fixed-sample objective.
#[allow(clippy::too_many_arguments)]
pub fn max_sr_gd<R: Rng + ?Sized>(
    channels: &ChannelPair,
    proj: &AnProjector,
    powers: &PowerConfig,
    codebook: &SmCodebook,
    v0: &CVector,
    params: &GdParams,
    n_samp: usize,
    rng: &mut R,
) -> Result<OptTrace> {
    let cache = build_cache(channels, proj, powers, codebook)?;
    max_sr_gd_cached(&cache, v0, params, n_samp, rng)
}

/// [`max_sr_gd`] on a prebuilt cache (only its whitened channels are used).
pub fn max_sr_gd_cached<R: Rng + ?Sized>(
    cache: &QuadFormCache,
    v0: &CVector,
    params: &GdParams,
    n_samp: usize,
    rng: &mut R,
) -> Result<OptTrace> {
    check_len(cache, v0)?;
    if n_samp == 0 {
        return Err(Error::InvalidParameter("n_samp must be positive".into()));
    }
    let dim = cache.whitened(Side::Bob).nrows().max(cache.whitened(Side::Eve).nrows());
    let sr = FixedNoiseSr::new(cache, NoiseSamples::draw(rng, n_samp, dim));
    ascend(v0, params, |v| sr.objective(v), |v| sr.gradient(v))
}

fn check_len(cache: &QuadFormCache, v: &CVector) -> Result<()> {
    if v.len() != cache.n_tx() {
        return Err(Error::DimensionMismatch(format!(
            "precoder has length {}, expected {}",
            v.len(),
            cache.n_tx()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::power;
    use crate::model::{an_projector, make_codebook, sample_channel, Scheme};
    use crate::opt::uniform_precoder;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Inst {
        ch: ChannelPair,
        proj: AnProjector,
        pw: PowerConfig,
        cb: SmCodebook,
        cache: QuadFormCache,
    }

    fn inst(seed: u64, snr: f64) -> Inst {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = ChannelPair::sample(&mut rng, 2, 2, 4);
        let proj = an_projector(&ch.h).unwrap();
        let pw = PowerConfig::from_snr_db(snr, 0.5).unwrap();
        let cb = make_codebook(2, Scheme::Psk, 4).unwrap();
        let cache = build_cache(&ch, &proj, &pw, &cb).unwrap();
        Inst { ch, proj, pw, cb, cache }
    }

    fn symmetric(seed: u64) -> Inst {
        let mut i = inst(seed, 5.0);
        i.ch = ChannelPair::new(i.ch.h.clone(), i.ch.h.clone()).unwrap();
        i.pw = PowerConfig::new(1.0, 1.0, 0.0, 0.3, 0.3).unwrap();
        i.cache = build_cache(&i.ch, &i.proj, &i.pw, &i.cb).unwrap();
        i
    }

    fn non_decreasing(h: &[f64]) -> bool {
        h.windows(2).all(|w| w[1] >= w[0] - 1e-9)
    }

    #[test]
    fn rejects_zero_start_and_bad_params() {
        let i = inst(1, 5.0);
        let p = GdParams::default();
        assert_eq!(max_asr_gd(&i.cache, &CVector::zeros(4), &p), Err(Error::ZeroPrecoder));
        let bad = GdParams { step_min: 1.0, ..p };
        assert!(max_asr_gd(&i.cache, &uniform_precoder(4), &bad).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            max_sr_gd(&i.ch, &i.proj, &i.pw, &i.cb, &CVector::zeros(4), &p, 10, &mut rng),
            Err(Error::ZeroPrecoder)
        );
    }

    #[test]
    fn symmetric_instance_stays_at_renormalized_start() {
        let i = symmetric(2);
        let v0 = sample_channel(&mut ChaCha8Rng::seed_from_u64(3), 4, 1).column(0).into_owned();
        let want = rescale_power(&v0, 4.0);
        let t = max_asr_gd(&i.cache, &v0, &GdParams::default()).unwrap();
        assert!(t.converged);
        assert!(t.objective_history.iter().all(|&x| x == 0.0));
        assert!((t.final_vector - &want).norm() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = max_sr_gd(&i.ch, &i.proj, &i.pw, &i.cb, &v0, &GdParams::default(), 50, &mut rng).unwrap();
        assert!(t.objective_history.iter().all(|&x| x == 0.0));
        assert!((t.final_vector - want).norm() < 1e-12);
    }

    #[test]
    fn asr_gd_improves_and_stays_feasible() {
        for seed in 0..10 {
            let i = inst(10 + seed, 5.0);
            let v0 = uniform_precoder(4);
            let t = max_asr_gd(&i.cache, &v0, &GdParams::default()).unwrap();
            assert!(non_decreasing(&t.objective_history));
            assert_eq!(t.iterations, t.objective_history.len() - 1);
            assert!(asr(&i.cache, &t.final_vector, false) >= asr(&i.cache, &v0, false) - 1e-12);
            assert!(power(&t.final_vector) <= 4.0 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn negligible_gain_stops_the_run() {
        let i = inst(40, 5.0);
        let lazy = GdParams { tol: 10.0, ..GdParams::default() };
        let t = max_asr_gd(&i.cache, &uniform_precoder(4), &lazy).unwrap();
        assert!(t.converged);
        assert_eq!(t.objective_history.len(), 2);
        let strict = GdParams { tol: 0.0, ..GdParams::default() };
        let full = max_asr_gd(&i.cache, &uniform_precoder(4), &strict).unwrap();
        assert!(full.iterations > t.iterations);
        assert!(full.objective_history.last() >= t.objective_history.last());
    }

    #[test]
    fn asr_gd_is_competitive_with_random_search() {
        for seed in 0..5 {
            let i = inst(20 + seed, 10.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let oracle = (0..200)
                .map(|_| {
                    let v = sample_channel(&mut rng, 4, 1).column(0).into_owned();
                    asr(&i.cache, &rescale_power(&v, 4.0), false)
                })
                .fold(f64::NEG_INFINITY, f64::max);
            let t = max_asr_gd(&i.cache, &uniform_precoder(4), &GdParams::default()).unwrap();
            let got = asr(&i.cache, &t.final_vector, false);
            assert!(got >= oracle - 0.2, "gd {got} vs random search {oracle}");
        }
    }

    #[test]
    fn sr_gd_history_is_monotone() {
        for seed in 0..3 {
            let i = inst(30 + seed, 5.0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = max_sr_gd(&i.ch, &i.proj, &i.pw, &i.cb, &uniform_precoder(4), &GdParams::default(), 100, &mut rng)
                .unwrap();
            assert!(non_decreasing(&t.objective_history));
            assert!(power(&t.final_vector) <= 4.0 * (1.0 + 1e-9));
        }
    }
}
