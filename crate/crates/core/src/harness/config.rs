use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flops::ComplexityInputs;
use crate::model::{make_codebook, Scheme};
use crate::opt::{GdParams, ScaParams};

/// Precoding strategy under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    /// All-ones precoder.
    None,
    MaxAsrGd,
    MaxSrGd,
    MaxAsrSca,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::None, Method::MaxAsrGd, Method::MaxSrGd, Method::MaxAsrSca];

    pub fn name(self) -> &'static str {
        match self {
            Method::None => "none",
            Method::MaxAsrGd => "max-asr-gd",
            Method::MaxSrGd => "max-sr-gd",
            Method::MaxAsrSca => "max-asr-sca",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        let key = key.to_ascii_lowercase();
        Method::ALL
            .into_iter()
            .find(|m| m.name().replace('-', "") == key)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.name().to_string()
    }
}

/// Starting precoder of every optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    /// All-ones vector.
    #[default]
    Ones,
    /// `CN(0, I)` draw per trial, scaled to `tr(v v^H) = N_t`.
    Random,
}

/// Settings of the FLOP curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlopsConfig {
    pub n_tx_grid: Vec<usize>,
    pub d1: usize,
    pub d2: usize,
    pub d3: usize,
    pub solver_accuracy: f64,
}

impl Default for FlopsConfig {
    fn default() -> Self {
        let d = ComplexityInputs::default();
        FlopsConfig {
            n_tx_grid: vec![4, 8, 16, 32, 64],
            d1: d.d1,
            d2: d.d2,
            d3: d.d3,
            solver_accuracy: d.solver_accuracy,
        }
    }
}

/// Experiment description, read from TOML.
///
/// ```toml
/// n_tx = 4
/// M = 2
/// scheme = "psk"
/// snr_db_grid = [0, 5, 10, 15]
/// methods = ["none", "max-asr-gd", "max-sr-gd", "max-asr-sca"]
///
/// [sca]
/// tol = 1e-3
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_tx: usize,
    pub n_b: usize,
    pub n_e: usize,
    #[serde(alias = "M")]
    pub order: usize,
    pub scheme: Scheme,
    pub snr_db_grid: Vec<f64>,
    /// SNR points of the per-realization study.
    pub cdf_snr_db: Vec<f64>,
    /// SNR of the iteration-count study.
    pub iters_snr_db: f64,
    /// Channel realizations per SNR point.
    pub n_channels: usize,
    /// Noise realizations per Monte-Carlo SR evaluation.
    pub n_samp: usize,
    /// Fraction of the total power given to the confidential signal.
    pub power_split: f64,
    pub methods: Vec<Method>,
    pub init: Init,
    pub seed: u64,
    /// Use `G = H`; requires `n_e = n_b`.
    pub eve_equals_bob: bool,
    pub gd: GdParams,
    pub sca: ScaParams,
    pub flops: FlopsConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_tx: 4,
            n_b: 2,
            n_e: 2,
            order: 2,
            scheme: Scheme::Psk,
            snr_db_grid: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            cdf_snr_db: vec![5.0, 15.0],
            iters_snr_db: 5.0,
            n_channels: 50,
            n_samp: 500,
            power_split: 0.5,
            methods: Method::ALL.to_vec(),
            init: Init::Ones,
            seed: 0,
            eve_equals_bob: false,
            gd: GdParams::default(),
            sca: ScaParams::default(),
            flops: FlopsConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Rejects inconsistent settings; every failure is a [`Error::Config`].
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.n_b == 0 || self.n_e == 0 {
            return fail("receiver antenna counts must be positive".into());
        }
        if self.n_tx <= self.n_b {
            return fail(format!(
                "artificial noise needs n_tx > n_b, got n_tx = {} and n_b = {}",
                self.n_tx, self.n_b
            ));
        }
        if self.eve_equals_bob && self.n_e != self.n_b {
            return fail("eve_equals_bob requires n_e = n_b".into());
        }
        make_codebook(self.order, self.scheme, self.n_tx).map_err(|e| Error::Config(e.to_string()))?;
        let finite = |xs: &[f64]| !xs.is_empty() && xs.iter().all(|x| x.is_finite());
        if !finite(&self.snr_db_grid) || !finite(&self.cdf_snr_db) || !self.iters_snr_db.is_finite() {
            return fail("SNR lists must be nonempty and finite".into());
        }
        if self.n_channels == 0 || self.n_samp == 0 {
            return fail("n_channels and n_samp must be positive".into());
        }
        if !(self.power_split > 0.0 && self.power_split <= 1.0) {
            return fail(format!("power_split {} outside (0, 1]", self.power_split));
        }
        if self.methods.is_empty() {
            return fail("no methods selected".into());
        }
        self.gd.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.sca.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.flops.n_tx_grid.is_empty() {
            return fail("flops.n_tx_grid is empty".into());
        }
        for &n_tx in &self.flops.n_tx_grid {
            self.complexity_inputs(n_tx).validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn complexity_inputs(&self, n_tx: usize) -> ComplexityInputs {
        ComplexityInputs {
            n_tx,
            n_b: self.n_b,
            n_e: self.n_e,
            order: self.order,
            d1: self.flops.d1,
            d2: self.flops.d2,
            d3: self.flops.d3,
            n_samp: self.n_samp,
            solver_accuracy: self.flops.solver_accuracy,
        }
    }
}
