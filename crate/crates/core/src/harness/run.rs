use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flops::{flops, ComplexityInputs, FlopMethod};
use crate::harness::config::{ExperimentConfig, Init, Method};
use crate::harness::output::{format_g9, Table};
use crate::linalg::{rescale_power, CVector};
use crate::metrics::{asr, build_cache, secrecy_rate_with, NoiseSamples, SecrecyRate};
use crate::model::{make_codebook, sample_channel, AnProjector, ChannelPair, PowerConfig, SmCodebook};
use crate::opt::{extract_precoder, max_asr_gd, max_asr_sca, max_sr_gd_cached, uniform_precoder};

/// Role of a random stream. Streams with different purposes never overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Channel = 1,
    /// Noise of the Monte-Carlo SR evaluation, shared by all methods.
    EvalNoise = 2,
    /// Frozen noise inside the Max-SR-GD objective.
    OptNoise = 3,
    /// Gaussian randomization of the SCA solution.
    Randomization = 4,
    /// Random starting precoder.
    Init = 5,
}

/// Independent stream for `(seed, purpose, trial, salt)`.
pub fn trial_rng(seed: u64, purpose: Purpose, trial: u64, salt: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(purpose as u64).to_le_bytes());
    key[16..24].copy_from_slice(&trial.to_le_bytes());
    key[24..].copy_from_slice(&salt.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// One method on one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub method: Method,
    pub precoder: CVector,
    pub iterations: usize,
    pub converged: bool,
    /// Unclamped closed-form ASR of `precoder`.
    pub asr: f64,
    /// Monte-Carlo secrecy rate, when evaluated.
    pub sr: Option<SecrecyRate>,
}

/// Channel pair of trial `trial`; identical for every SNR and method.
fn trial_channels(cfg: &ExperimentConfig, trial: u64) -> ChannelPair {
    let mut rng = trial_rng(cfg.seed, Purpose::Channel, trial, 0);
    let mut pair = ChannelPair::sample(&mut rng, cfg.n_b, cfg.n_e, cfg.n_tx);
    if cfg.eve_equals_bob {
        pair.g = pair.h.clone();
    }
    pair
}

/// Runs every configured method on trial `trial` at `snr_db`, optionally
/// evaluating the Monte-Carlo SR of each result on common noise.
pub fn run_trial(
    cfg: &ExperimentConfig,
    codebook: &SmCodebook,
    trial: u64,
    snr_db: f64,
    evaluate: bool,
) -> Result<Vec<TrialOutcome>> {
    let channels = trial_channels(cfg, trial);
    let proj = AnProjector::new(&channels.h)?;
    let powers = PowerConfig::from_snr_db(snr_db, cfg.power_split)?;
    let cache = build_cache(&channels, &proj, &powers, codebook)?;
    let salt = snr_db.to_bits();
    let samples = evaluate.then(|| {
        let mut rng = trial_rng(cfg.seed, Purpose::EvalNoise, trial, salt);
        NoiseSamples::draw(&mut rng, cfg.n_samp, cfg.n_b.max(cfg.n_e))
    });
    let v0 = match cfg.init {
        Init::Ones => uniform_precoder(cfg.n_tx),
        Init::Random => {
            let mut rng = trial_rng(cfg.seed, Purpose::Init, trial, 0);
            rescale_power(&sample_channel(&mut rng, cfg.n_tx, 1).column(0).into_owned(), cfg.n_tx as f64)
        }
    };
    cfg.methods
        .iter()
        .map(|&method| {
            let (precoder, iterations, converged) = match method {
                Method::None => (v0.clone(), 0, true),
                Method::MaxAsrGd => {
                    let t = max_asr_gd(&cache, &v0, &cfg.gd)?;
                    (t.final_vector, t.iterations, t.converged)
                }
                Method::MaxSrGd => {
                    let mut rng = trial_rng(cfg.seed, Purpose::OptNoise, trial, salt);
                    let t = max_sr_gd_cached(&cache, &v0, &cfg.gd, cfg.n_samp, &mut rng)?;
                    (t.final_vector, t.iterations, t.converged)
                }
                Method::MaxAsrSca => {
                    let (w, t) = max_asr_sca(&cache, &v0, &cfg.sca)?;
                    let mut rng = trial_rng(cfg.seed, Purpose::Randomization, trial, salt);
                    (extract_precoder(&cache, &w, &cfg.sca, &mut rng), t.iterations, t.converged)
                }
            };
            let asr_value = asr(&cache, &precoder, false);
            let sr = samples.as_ref().map(|s| secrecy_rate_with(&cache, codebook, &precoder, s));
            let finite = asr_value.is_finite() && sr.is_none_or(|s| s.raw.is_finite());
            if !finite {
                return Err(Error::NonFinite(format!("{method} on trial {trial} at {snr_db} dB")));
            }
            Ok(TrialOutcome {
                method,
                precoder,
                iterations,
                converged,
                asr: asr_value,
                sr,
            })
        })
        .collect()
}

fn codebook(cfg: &ExperimentConfig) -> Result<SmCodebook> {
    cfg.validate()?;
    make_codebook(cfg.order, cfg.scheme, cfg.n_tx)
}

/// All trials at one SNR, in trial order.
fn sweep(cfg: &ExperimentConfig, cb: &SmCodebook, snr_db: f64, evaluate: bool) -> Result<Vec<Vec<TrialOutcome>>> {
    (0..cfg.n_channels as u64)
        .into_par_iter()
        .map(|t| run_trial(cfg, cb, t, snr_db, evaluate))
        .collect()
}

/// Averaged secrecy rates of one method at one SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SrRow {
    pub snr_db: f64,
    pub method: Method,
    pub mean_sr_mc: f64,
    /// Mean of the clamped ASR.
    pub mean_asr: f64,
    /// Standard error of `mean_sr_mc` over channel realizations.
    pub std_err: f64,
}

/// Average Monte-Carlo SR and ASR per `(snr_db, method)` over
/// `n_channels` realizations.
pub fn run_sr_vs_snr(cfg: &ExperimentConfig) -> Result<Vec<SrRow>> {
    let cb = codebook(cfg)?;
    let mut rows = Vec::new();
    for &snr_db in &cfg.snr_db_grid {
        let trials = sweep(cfg, &cb, snr_db, true)?;
        for (k, &method) in cfg.methods.iter().enumerate() {
            let sr: Vec<f64> = trials.iter().map(|t| t[k].sr.expect("evaluated").value).collect();
            let mean_asr = trials.iter().map(|t| t[k].asr.max(0.0)).sum::<f64>() / trials.len() as f64;
            let (mean_sr_mc, std_err) = mean_and_std_err(&sr);
            rows.push(SrRow {
                snr_db,
                method,
                mean_sr_mc,
                mean_asr,
                std_err,
            });
        }
    }
    Ok(rows)
}

fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One realization's secrecy rate.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfRow {
    pub snr_db: f64,
    pub method: Method,
    pub trial: usize,
    /// Clamped Monte-Carlo SR.
    pub sr: f64,
}

/// Per-realization Monte-Carlo SR at each of `snr_db_points`.
pub fn run_cdf(cfg: &ExperimentConfig, snr_db_points: &[f64]) -> Result<Vec<CdfRow>> {
    let cb = codebook(cfg)?;
    if snr_db_points.is_empty() || snr_db_points.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config("SNR points must be nonempty and finite".into()));
    }
    let mut rows = Vec::new();
    for &snr_db in snr_db_points {
        let trials = sweep(cfg, &cb, snr_db, true)?;
        for (k, &method) in cfg.methods.iter().enumerate() {
            for (trial, t) in trials.iter().enumerate() {
                rows.push(CdfRow {
                    snr_db,
                    method,
                    trial,
                    sr: t[k].sr.expect("evaluated").value,
                });
            }
        }
    }
    Ok(rows)
}

/// Iteration count of one optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterRow {
    pub method: Method,
    pub trial: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Iteration counts per trial and method at `cfg.iters_snr_db`.
pub fn run_iteration_pmf(cfg: &ExperimentConfig) -> Result<Vec<IterRow>> {
    let cb = codebook(cfg)?;
    let trials = sweep(cfg, &cb, cfg.iters_snr_db, false)?;
    let mut rows = Vec::new();
    for (k, &method) in cfg.methods.iter().enumerate() {
        for (trial, t) in trials.iter().enumerate() {
            rows.push(IterRow {
                method,
                trial,
                iterations: t[k].iterations,
                converged: t[k].converged,
            });
        }
    }
    Ok(rows)
}

/// FLOP count of one optimizer at one antenna count.
#[derive(Debug, Clone, PartialEq)]
pub struct FlopRow {
    pub n_tx: usize,
    pub method: FlopMethod,
    pub flops: f64,
}

/// Optimizer FLOP counts over `n_tx_grid`; all other inputs from `inputs`.
pub fn run_complexity_curve(n_tx_grid: &[usize], inputs: &ComplexityInputs) -> Result<Vec<FlopRow>> {
    if n_tx_grid.is_empty() {
        return Err(Error::InvalidParameter("empty antenna grid".into()));
    }
    let mut rows = Vec::new();
    for &n_tx in n_tx_grid {
        let at = ComplexityInputs { n_tx, ..*inputs };
        for method in [FlopMethod::MaxAsrGd, FlopMethod::MaxAsrSca, FlopMethod::MaxSrGd] {
            rows.push(FlopRow {
                n_tx,
                method,
                flops: flops(method, &at)?,
            });
        }
    }
    Ok(rows)
}

impl SrRow {
    pub fn table(rows: &[SrRow]) -> Table {
        let mut t = Table::new(vec!["snr_db", "method", "mean_sr_mc", "mean_asr", "std_err"]);
        for r in rows {
            t.push(vec![
                format_g9(r.snr_db),
                r.method.to_string(),
                format_g9(r.mean_sr_mc),
                format_g9(r.mean_asr),
                format_g9(r.std_err),
            ]);
        }
        t
    }
}

impl CdfRow {
    pub fn table(rows: &[CdfRow]) -> Table {
        let mut t = Table::new(vec!["snr_db", "method", "trial", "sr"]);
        for r in rows {
            t.push(vec![format_g9(r.snr_db), r.method.to_string(), r.trial.to_string(), format_g9(r.sr)]);
        }
        t
    }
}

impl IterRow {
    pub fn table(rows: &[IterRow]) -> Table {
        let mut t = Table::new(vec!["method", "trial", "iterations"]);
        for r in rows {
            t.push(vec![r.method.to_string(), r.trial.to_string(), r.iterations.to_string()]);
        }
        t
    }
}

impl FlopRow {
    pub fn table(rows: &[FlopRow]) -> Table {
        let mut t = Table::new(vec!["n_tx", "method", "flops"]);
        for r in rows {
            t.push(vec![r.n_tx.to_string(), r.method.to_string(), format_g9(r.flops)]);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            snr_db_grid: vec![0.0, 10.0],
            cdf_snr_db: vec![0.0],
            n_channels: 4,
            n_samp: 64,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn streams_differ_by_every_key() {
        use rand::RngCore;
        let base = trial_rng(1, Purpose::Channel, 2, 3).next_u64();
        assert_eq!(base, trial_rng(1, Purpose::Channel, 2, 3).next_u64());
        for other in [
            trial_rng(0, Purpose::Channel, 2, 3),
            trial_rng(1, Purpose::EvalNoise, 2, 3),
            trial_rng(1, Purpose::Channel, 1, 3),
            trial_rng(1, Purpose::Channel, 2, 4),
        ] {
            assert_ne!(base, other.clone().next_u64());
        }
    }

    #[test]
    fn sr_vs_snr_is_deterministic_and_complete() {
        let cfg = small();
        let a = SrRow::table(&run_sr_vs_snr(&cfg).unwrap()).to_csv();
        let b = SrRow::table(&run_sr_vs_snr(&cfg).unwrap()).to_csv();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 2 * 4);
        assert!(a.starts_with("snr_db,method,mean_sr_mc,mean_asr,std_err\n"));
    }

    #[test]
    fn symmetric_links_without_noise_injection_give_zero() {
        let cfg = ExperimentConfig {
            methods: vec![Method::None],
            eve_equals_bob: true,
            power_split: 1.0,
            ..small()
        };
        for r in run_sr_vs_snr(&cfg).unwrap() {
            assert!(r.mean_sr_mc.abs() <= 3.0 * r.std_err, "{r:?}");
            assert_eq!(r.mean_sr_mc, 0.0);
        }
    }

    #[test]
    fn optimizers_beat_the_unprecoded_baseline_on_average() {
        let rows = run_sr_vs_snr(&ExperimentConfig { snr_db_grid: vec![10.0], ..small() }).unwrap();
        let asr_of = |m| rows.iter().find(|r| r.method == m).unwrap().mean_asr;
        assert!(asr_of(Method::MaxAsrGd) >= asr_of(Method::None));
        assert!(asr_of(Method::MaxAsrSca) >= asr_of(Method::None));
    }

    #[test]
    fn random_start_is_seeded_per_trial() {
        let cfg = ExperimentConfig { init: Init::Random, methods: vec![Method::MaxAsrGd], ..small() };
        let cb = make_codebook(cfg.order, cfg.scheme, cfg.n_tx).unwrap();
        let a = run_trial(&cfg, &cb, 0, 5.0, false).unwrap();
        assert_eq!(a, run_trial(&cfg, &cb, 0, 5.0, false).unwrap());
        let ones = ExperimentConfig { init: Init::Ones, ..cfg.clone() };
        assert_ne!(a[0].precoder, run_trial(&ones, &cb, 0, 5.0, false).unwrap()[0].precoder);
    }

    #[test]
    fn cdf_rows_cover_every_trial() {
        let cfg = small();
        let rows = run_cdf(&cfg, &cfg.cdf_snr_db).unwrap();
        assert_eq!(rows.len(), 4 * 4);
        assert!(rows.iter().all(|r| r.sr >= 0.0 && r.sr.is_finite()));
        assert!(run_cdf(&cfg, &[]).is_err());
    }

    #[test]
    fn iteration_counts_respect_caps() {
        let cfg = small();
        let rows = run_iteration_pmf(&cfg).unwrap();
        assert_eq!(rows.len(), 4 * 4);
        for r in &rows {
            match r.method {
                Method::None => assert_eq!(r.iterations, 0),
                Method::MaxAsrSca => assert!(r.iterations <= cfg.sca.max_outer),
                _ => assert!(r.iterations <= cfg.gd.max_iters),
            }
        }
        assert_eq!(rows, run_iteration_pmf(&cfg).unwrap());
    }

    #[test]
    fn complexity_rows() {
        let rows = run_complexity_curve(&[4, 8], &ComplexityInputs::default()).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(run_complexity_curve(&[], &ComplexityInputs::default()).is_err());
        let csv = FlopRow::table(&rows).to_csv();
        assert!(csv.starts_with("n_tx,method,flops\n4,max-asr-gd,"));
    }
}
