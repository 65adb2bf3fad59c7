use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// `printf("%.9g")` rendering: 9 significant digits, trailing zeros removed,
/// exponent form outside `1e-4 <= |x| < 1e9`. Zero prints as `0`.
pub fn format_g9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column `name` of every row.
    pub fn column(&self, name: &str) -> Vec<&str> {
        let k = self.header.iter().position(|h| *h == name).expect("known column");
        self.rows.iter().map(|r| r[k].as_str()).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    /// Writes `<dir>/<stem>.csv` and, when one exists, `<dir>/plot_<stem>.py`.
    pub fn emit(&self, dir: &Path, stem: &str) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        self.write(&dir.join(format!("{stem}.csv")))?;
        if let Some(script) = plot_script(stem) {
            let path = dir.join(format!("plot_{stem}.py"));
            fs::write(&path, script).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}

/// Matplotlib script that renders `<stem>.csv` from the same directory into
/// `<stem>.png`.
pub fn plot_script(stem: &str) -> Option<String> {
    let body = match stem {
        "sr_vs_snr" => SR_VS_SNR,
        "cdf" => CDF,
        "iters" => ITERS,
        "flops" => FLOPS,
        _ => return None,
    };
    Some(format!("{PRELUDE}\nSTEM = \"{stem}\"\nrows = load(STEM)\n{body}"))
}

const PRELUDE: &str = r#"#!/usr/bin/env python3
import csv
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def load(stem):
    with open(os.path.join(HERE, stem + ".csv"), newline="") as f:
        return list(csv.DictReader(f))


def save(fig, stem):
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, stem + ".png"), dpi=150)
"#;

const SR_VS_SNR: &str = r#"
curves = defaultdict(lambda: ([], [], [], []))
for r in rows:
    x, sr, a, e = curves[r["method"]]
    x.append(float(r["snr_db"]))
    sr.append(float(r["mean_sr_mc"]))
    a.append(float(r["mean_asr"]))
    e.append(float(r["std_err"]))
fig, ax = plt.subplots()
for method, (x, sr, a, e) in curves.items():
    line = ax.errorbar(x, sr, yerr=e, marker="o", capsize=3, label=method + " (MC SR)")
    ax.plot(x, a, linestyle="--", color=line[0].get_color(), label=method + " (ASR)")
ax.set_xlabel("SNR (dB)")
ax.set_ylabel("secrecy rate (bit/s/Hz)")
ax.grid(True)
ax.legend()
save(fig, STEM)
"#;

const CDF: &str = r#"
samples = defaultdict(list)
for r in rows:
    samples[(r["method"], float(r["snr_db"]))].append(float(r["sr"]))
fig, ax = plt.subplots()
for (method, snr), xs in sorted(samples.items()):
    xs.sort()
    ys = [(k + 1) / len(xs) for k in range(len(xs))]
    ax.step(xs, ys, where="post", label="%s, %g dB" % (method, snr))
ax.set_xlabel("secrecy rate (bit/s/Hz)")
ax.set_ylabel("CDF")
ax.grid(True)
ax.legend()
save(fig, STEM)
"#;

const ITERS: &str = r#"
counts = defaultdict(list)
for r in rows:
    counts[r["method"]].append(int(r["iterations"]))
fig, ax = plt.subplots()
for method, xs in counts.items():
    top = max(xs)
    pmf = [xs.count(k) / len(xs) for k in range(top + 1)]
    ax.plot(range(top + 1), pmf, marker="o", label=method)
ax.set_xlabel("iterations")
ax.set_ylabel("PMF")
ax.grid(True)
ax.legend()
save(fig, STEM)
"#;

const FLOPS: &str = r#"
curves = defaultdict(lambda: ([], []))
for r in rows:
    x, y = curves[r["method"]]
    x.append(int(r["n_tx"]))
    y.append(float(r["flops"]))
fig, ax = plt.subplots()
for method, (x, y) in curves.items():
    ax.plot(x, y, marker="o", label=method)
ax.set_xscale("log", base=2)
ax.set_yscale("log")
ax.set_xlabel("transmit antennas")
ax.set_ylabel("FLOPs")
ax.grid(True, which="both")
ax.legend()
save(fig, STEM)
"#;
