//! Closed-form floating-point operation counts of the three precoders.
//!
//! A complex `m x n` matrix-vector product is charged `2mn` FLOPs and an
//! `m x n` by `n x p` product `2mnp`; exponentials and logarithms are free.
//! The interior-point term `O(N_t^4.5 log(1/accuracy))` of the SDP subproblem
//! is evaluated with unit constant and the natural logarithm.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FlopMethod {
    /// One closed-form ASR evaluation.
    AsrEval,
    /// One ASR gradient.
    AsrGrad,
    MaxAsrGd,
    /// One Monte-Carlo SR evaluation.
    SrEval,
    /// One Monte-Carlo SR gradient.
    SrGrad,
    MaxSrGd,
    /// One SCA subproblem including construction of its objective.
    SdpSub,
    MaxAsrSca,
}

impl FlopMethod {
    pub const ALL: [FlopMethod; 8] = [
        FlopMethod::AsrEval,
        FlopMethod::AsrGrad,
        FlopMethod::MaxAsrGd,
        FlopMethod::SrEval,
        FlopMethod::SrGrad,
        FlopMethod::MaxSrGd,
        FlopMethod::SdpSub,
        FlopMethod::MaxAsrSca,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlopMethod::AsrEval => "asr-eval",
            FlopMethod::AsrGrad => "asr-grad",
            FlopMethod::MaxAsrGd => "max-asr-gd",
            FlopMethod::SrEval => "sr-eval",
            FlopMethod::SrGrad => "sr-grad",
            FlopMethod::MaxSrGd => "max-sr-gd",
            FlopMethod::SdpSub => "sdp-sub",
            FlopMethod::MaxAsrSca => "max-asr-sca",
        }
    }
}

impl fmt::Display for FlopMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FlopMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        FlopMethod::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

/// Dimensions and iteration counts entering the FLOP formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityInputs {
    pub n_tx: usize,
    pub n_b: usize,
    pub n_e: usize,
    pub order: usize,
    /// Max-ASR-GD iterations.
    pub d1: usize,
    /// Max-SR-GD iterations.
    pub d2: usize,
    /// Max-ASR-SCA outer iterations.
    pub d3: usize,
    pub n_samp: usize,
    /// Interior-point solution accuracy.
    pub solver_accuracy: f64,
}

impl Default for ComplexityInputs {
    fn default() -> Self {
        ComplexityInputs {
            n_tx: 4,
            n_b: 2,
            n_e: 2,
            order: 4,
            d1: 25,
            d2: 30,
            d3: 8,
            n_samp: 500,
            solver_accuracy: 1e-8,
        }
    }
}

impl ComplexityInputs {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            self.n_tx, self.n_b, self.n_e, self.order, self.d1, self.d2, self.d3, self.n_samp,
        ];
        if counts.contains(&0) {
            return Err(Error::InvalidParameter("complexity inputs must be positive".into()));
        }
        if !(self.solver_accuracy > 0.0 && self.solver_accuracy < 1.0) {
            return Err(Error::InvalidParameter("solver accuracy must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// FLOP count of `method` for `inputs`.
pub fn flops(method: FlopMethod, inputs: &ComplexityInputs) -> Result<f64> {
    inputs.validate()?;
    let nt = inputs.n_tx as f64;
    let nb = inputs.n_b as f64;
    let ne = inputs.n_e as f64;
    let m = inputs.order as f64;
    let samp = inputs.n_samp as f64;
    let (d1, d2, d3) = (inputs.d1 as f64, inputs.d2 as f64, inputs.d3 as f64);
    let pairs = 2.0 * m * m * nt * nt;
    let grad_body = 3.0 * nt * nt + 2.0 * nt * nt + 2.0 * nt + 2.0 * nt * nt;
    let sdp = nt.powf(4.5) * (1.0 / inputs.solver_accuracy).ln()
        + pairs * (3.0 * nt.powi(3) + 4.0 * nt * nt);
    let relaxed_eval = pairs * (2.0 * nt.powi(3) + 3.0 * nt * nt);
    Ok(match method {
        FlopMethod::AsrEval => pairs * (4.0 * nt * nt + nb + ne),
        FlopMethod::AsrGrad => pairs * grad_body,
        FlopMethod::MaxAsrGd => d1 * pairs * (11.0 * nt * nt + 2.0 * nt + nb + ne),
        FlopMethod::SrEval => 2.0 * pairs * samp * (2.0 * nt * nt + nb + ne),
        FlopMethod::SrGrad => pairs * samp * grad_body,
        // Receiver terms enter twice here, once in Max-ASR-GD.
        FlopMethod::MaxSrGd => d2 * pairs * samp * (11.0 * nt * nt + 2.0 * nt + 2.0 * nb + 2.0 * ne),
        FlopMethod::SdpSub => sdp,
        FlopMethod::MaxAsrSca => d3 * sdp + d3 * relaxed_eval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ComplexityInputs {
        ComplexityInputs {
            n_tx: 4,
            n_b: 2,
            n_e: 2,
            order: 2,
            ..ComplexityInputs::default()
        }
    }

    #[test]
    fn hand_substituted_values() {
        assert_eq!(flops(FlopMethod::AsrEval, &small()).unwrap(), 8704.0);
        assert_eq!(flops(FlopMethod::MaxAsrGd, &small()).unwrap(), 601_600.0);
        assert_eq!(flops(FlopMethod::MaxSrGd, &small()).unwrap(), 368_640_000.0);
    }

    #[test]
    fn gd_totals_decompose_into_eval_plus_gradient() {
        let i = small();
        let per_iter = flops(FlopMethod::AsrEval, &i).unwrap() + flops(FlopMethod::AsrGrad, &i).unwrap();
        assert_eq!(per_iter * i.d1 as f64, flops(FlopMethod::MaxAsrGd, &i).unwrap());
    }

    #[test]
    fn growth_exponents() {
        let at = |n: usize, method| {
            flops(method, &ComplexityInputs { n_tx: n, ..ComplexityInputs::default() }).unwrap()
        };
        let gd = (at(128, FlopMethod::MaxAsrGd) / at(64, FlopMethod::MaxAsrGd)).log2();
        let sca = (at(128, FlopMethod::MaxAsrSca) / at(64, FlopMethod::MaxAsrSca)).log2();
        assert!((gd - 4.0).abs() <= 0.4, "{gd}");
        assert!((sca - 5.0).abs() <= 0.5, "{sca}");
    }

    #[test]
    fn parses_names_and_rejects_unknown() {
        assert_eq!("max_asr_sca".parse::<FlopMethod>().unwrap(), FlopMethod::MaxAsrSca);
        assert_eq!("SR-Eval".parse::<FlopMethod>().unwrap(), FlopMethod::SrEval);
        assert!(matches!("newton".parse::<FlopMethod>(), Err(Error::UnknownMethod(_))));
        let bad = ComplexityInputs { solver_accuracy: 2.0, ..small() };
        assert!(flops(FlopMethod::SdpSub, &bad).is_err());
    }
}
