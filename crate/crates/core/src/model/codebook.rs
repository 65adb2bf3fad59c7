use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Psk,
    Qam,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Psk => f.write_str("PSK"),
            Scheme::Qam => f.write_str("QAM"),
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "psk" => Ok(Scheme::Psk),
            "qam" => Ok(Scheme::Qam),
            other => Err(Error::Config(format!("unknown modulation scheme `{other}`"))),
        }
    }
}

/// M-ary unit-energy constellation together with the transmit antenna count.
///
/// The SM signal set has `M * N_t` members `s_{n,m} = e_n s_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmCodebook {
    scheme: Scheme,
    symbols: Vec<C64>,
    n_tx: usize,
}

impl SmCodebook {
    pub fn new(order: usize, scheme: Scheme, n_tx: usize) -> Result<Self> {
        let unsupported = || Error::UnsupportedConstellation {
            order,
            scheme: scheme.to_string(),
        };
        if n_tx == 0 {
            return Err(Error::InvalidParameter("n_tx must be positive".into()));
        }
        if order == 0 || !order.is_power_of_two() {
            return Err(unsupported());
        }
        let symbols = match scheme {
            Scheme::Psk => (0..order)
                .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64))
                .map(snap)
                .collect(),
            Scheme::Qam => {
                let side = match order {
                    4 => 2,
                    16 => 4,
                    64 => 8,
                    _ => return Err(unsupported()),
                };
                // Levels +-1, +-3, ...; mean energy 2 (L^2 - 1) / 3.
                let scale = (2.0 * ((side * side - 1) as f64) / 3.0).sqrt().recip();
                let level = |k: usize| (2 * k) as f64 - (side - 1) as f64;
                let mut out = Vec::with_capacity(order);
                for i in 0..side {
                    for q in 0..side {
                        out.push(C64::new(level(i), level(q)) * scale);
                    }
                }
                out
            }
        };
        Ok(SmCodebook {
            scheme,
            symbols,
            n_tx,
        })
    }

    pub fn order(&self) -> usize {
        self.symbols.len()
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn symbols(&self) -> &[C64] {
        &self.symbols
    }

    /// Number of SM symbols, `M * N_t`.
    pub fn size(&self) -> usize {
        self.symbols.len() * self.n_tx
    }

    /// Bits per channel use, `log2(M * N_t)`.
    pub fn spectral_efficiency(&self) -> f64 {
        (self.size() as f64).log2()
    }

    pub fn linear_index(&self, n: usize, m: usize) -> usize {
        n * self.order() + m
    }

    /// Inverse of [`SmCodebook::linear_index`].
    pub fn split_index(&self, i: usize) -> (usize, usize) {
        (i / self.order(), i % self.order())
    }

    /// `s_{n,m}`: the only nonzero entry is `s_m` at antenna `n`.
    pub fn signal(&self, n: usize, m: usize) -> Result<CVector> {
        self.check(n, m)?;
        let mut s = CVector::zeros(self.n_tx);
        s[n] = self.symbols[m];
        Ok(s)
    }

    pub(crate) fn check(&self, n: usize, m: usize) -> Result<()> {
        if n >= self.n_tx {
            return Err(Error::IndexOutOfRange {
                what: "antenna",
                index: n,
                limit: self.n_tx,
            });
        }
        if m >= self.order() {
            return Err(Error::IndexOutOfRange {
                what: "symbol",
                index: m,
                limit: self.order(),
            });
        }
        Ok(())
    }
}

/// Rounds away the `1e-16` residue `from_polar` leaves on the axes.
fn snap(z: C64) -> C64 {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    C64::new(clean(z.re), clean(z.im))
}

pub fn make_codebook(order: usize, scheme: Scheme, n_tx: usize) -> Result<SmCodebook> {
    SmCodebook::new(order, scheme, n_tx)
}

pub fn sm_signal(codebook: &SmCodebook, n: usize, m: usize) -> Result<CVector> {
    codebook.signal(n, m)
}
