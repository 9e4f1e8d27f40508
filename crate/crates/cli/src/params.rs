//! Run parameters shared by the command-line flags and the JSON config file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use ltfb_core::sim::DeadlineBasis;
use ltfb_core::RsdParams;
use serde::{Deserialize, Serialize};

use crate::Failure;

/// Every tunable parameter. Each field is optional so that a config file
/// and the flags can be layered; commands fill in their own defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Block length.
    #[arg(long)]
    pub k: Option<usize>,
    /// Robust Soliton constant c.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Robust Soliton failure bound δ.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Payload width in bytes.
    #[arg(long)]
    pub width: Option<usize>,
    /// Base layer fraction of a two-layer block.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Base layer selection weight relative to the refinement layer.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Layer sizes, base first (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Layer selection weights (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Undecoded input counts (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub undecoded: Option<Vec<usize>>,
    /// Whether the layered schemes include the base-layer acknowledgment.
    #[arg(long, value_enum)]
    pub ack: Option<Ack>,
    /// Switch to the Robust Soliton over the remaining inputs after a layer
    /// acknowledgment.
    #[arg(long)]
    pub reparameterize: Option<bool>,
    /// Erasure rates: `start:step:end` or a comma separated list.
    #[arg(long)]
    pub ser: Option<SerGrid>,
    /// Trials per scheme.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Trials (one second of video each) per erasure rate.
    #[arg(long)]
    pub seconds: Option<usize>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Deadline as a multiple of k.
    #[arg(long, allow_hyphen_values = true)]
    pub deadline_factor: Option<f64>,
    /// What the deadline counts.
    #[arg(long, value_enum)]
    pub deadline_basis: Option<Basis>,
}

impl Params {
    /// Fields set in `overrides` replace those in `self`.
    pub fn merged(self, overrides: Params) -> Params {
        macro_rules! pick {
            ($($f:ident),*) => { Params { $($f: overrides.$f.or(self.$f)),* } };
        }
        pick!(
            k,
            c,
            delta,
            width,
            alpha,
            beta,
            sizes,
            weights,
            undecoded,
            ack,
            reparameterize,
            ser,
            runs,
            seconds,
            seed,
            deadline_factor,
            deadline_basis
        )
    }

    pub fn load(path: &Path) -> Result<Params, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("config {}: {e}", path.display())))
    }

    pub fn k(&self) -> usize {
        self.k.unwrap_or(100)
    }

    pub fn rsd(&self) -> Result<RsdParams, Failure> {
        Ok(RsdParams::new(self.k(), self.c.unwrap_or(0.1), self.delta.unwrap_or(1.0))?)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(0.5)
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(9.0)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn runs(&self) -> Result<usize, Failure> {
        positive("runs", self.runs.unwrap_or(1000))
    }

    pub fn seconds(&self) -> Result<usize, Failure> {
        positive("seconds", self.seconds.unwrap_or(1000))
    }

    pub fn width(&self) -> Result<usize, Failure> {
        positive("width", self.width.unwrap_or(ltfb_core::codec::DEFAULT_WIDTH))
    }
}

fn positive(name: &str, v: usize) -> Result<usize, Failure> {
    if v == 0 {
        return Err(Failure::Invalid(format!("{name} must be at least 1")));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ack {
    None,
    Layer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Sent,
    Received,
}

impl From<Basis> for DeadlineBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Sent => DeadlineBasis::Sent,
            Basis::Received => DeadlineBasis::Received,
        }
    }
}

/// Grid of erasure rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SerSpec", into = "Vec<f64>")]
pub struct SerGrid(pub Vec<f64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum SerSpec {
    Text(String),
    List(Vec<f64>),
}

impl TryFrom<SerSpec> for SerGrid {
    type Error = String;

    fn try_from(spec: SerSpec) -> Result<Self, String> {
        match spec {
            SerSpec::Text(s) => s.parse(),
            SerSpec::List(v) => SerGrid::checked(v),
        }
    }
}

impl From<SerGrid> for Vec<f64> {
    fn from(g: SerGrid) -> Self {
        g.0
    }
}

impl SerGrid {
    fn checked(v: Vec<f64>) -> Result<Self, String> {
        if v.is_empty() {
            return Err("empty erasure-rate grid".into());
        }
        if let Some(x) = v.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(format!("erasure rate {x} outside [0, 1]"));
        }
        Ok(SerGrid(v))
    }
}

impl FromStr for SerGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [start, step, end] => {
                let (start, step, end) = (num(start)?, num(step)?, num(end)?);
                if !(step > 0.0) || end < start {
                    return Err(format!("range {s:?} needs a positive step and start <= end"));
                }
                // Points are start + i·step rounded to nine decimals,
                // so that 0:0.05:1 prints as 0.05, 0.1, ...
                let n = ((end - start) / step + 1e-9).floor() as usize;
                let v = (0..=n).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect();
                SerGrid::checked(v)
            }
            [_] => SerGrid::checked(s.split(',').map(num).collect::<Result<_, _>>()?),
            _ => Err(format!("erasure rates {s:?}: expected start:step:end or a list")),
        }
    }
}

impl fmt::Display for SerGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(f64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Where the result files of one command go.
pub fn output_path(explicit: Option<PathBuf>, out_dir: Option<PathBuf>, stem: &str) -> PathBuf {
    if let Some(p) = explicit {
        return p;
    }
    let dir = out_dir
        .or_else(|| std::env::var_os("LTFB_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("{stem}.csv"))
}
