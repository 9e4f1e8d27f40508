use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    ChannelParams, Deadline, DeadlineBasis, RateDistortionModel, TransmissionTrace, TrialConfig, TrialRunner,
};
use crate::codec::DEFAULT_WIDTH;
use crate::degree::{LayerConfig, RsdParams};
use crate::error::{domain, Result};
use crate::feedback::{DistributionMode, DistributionTables, FeedbackPolicy};

/// Aggregate of all trials of one scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeResult {
    pub label: String,
    pub trials: usize,
    /// `[layer][r]`: mean fraction of the layer still undecoded after `r`
    /// receptions.
    pub mean_layer_undecoded: Vec<Vec<f64>>,
    /// `[r]`: mean fraction of the block still undecoded.
    pub mean_undecoded: Vec<f64>,
    /// Completion overhead of every completed trial, in trial order.
    pub overheads: Vec<f64>,
    pub incomplete: usize,
    /// Trials where the base layer finished strictly before the last layer.
    pub base_first: usize,
    pub received: u64,
    pub redundant: u64,
    pub payload_mismatches: usize,
}

impl SchemeResult {
    pub fn from_traces(label: impl Into<String>, traces: &[TransmissionTrace]) -> Self {
        let label = label.into();
        let n_layers = traces.first().map_or(1, TransmissionTrace::n_layers);
        let len = traces.iter().map(|t| t.records.len()).max().unwrap_or(0) + 1;
        let mut layer_sum = vec![vec![0.0; len]; n_layers];
        let mut total_sum = vec![0.0; len];
        for t in traces {
            let k = t.k as f64;
            for r in 0..len {
                let undecoded = t.undecoded_after(r);
                for (j, &l) in undecoded.iter().enumerate() {
                    layer_sum[j][r] += l as f64 / t.layer_sizes[j] as f64;
                }
                total_sum[r] += undecoded.iter().sum::<usize>() as f64 / k;
            }
        }
        let n = traces.len().max(1) as f64;
        let scale = |v: Vec<f64>| v.into_iter().map(|x| x / n).collect::<Vec<_>>();
        Self {
            label,
            trials: traces.len(),
            mean_layer_undecoded: layer_sum.into_iter().map(scale).collect(),
            mean_undecoded: scale(total_sum),
            overheads: traces.iter().filter_map(TransmissionTrace::overhead).collect(),
            incomplete: traces.iter().filter(|t| !t.is_complete()).count(),
            base_first: traces
                .iter()
                .filter(|t| match (t.layer_completion.first(), t.layer_completion.last()) {
                    (Some(Some(b)), Some(Some(r))) => t.n_layers() > 1 && b < r,
                    _ => false,
                })
                .count(),
            received: traces.iter().map(TransmissionTrace::received).sum(),
            redundant: traces.iter().map(|t| t.redundant() as u64).sum(),
            payload_mismatches: traces.iter().map(|t| t.payload_mismatches).sum(),
        }
    }

    pub fn mean_overhead(&self) -> f64 {
        mean_and_std_err(&self.overheads).0
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Welch's t statistic for `mean(a) − mean(b)` and its degrees of freedom.
pub fn welch_t(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (ma, sa) = mean_and_std_err(a);
    let (mb, sb) = mean_and_std_err(b);
    let (va, vb) = (sa * sa, sb * sb);
    let t = (ma - mb) / (va + vb).sqrt();
    let dof = (va + vb).powi(2) / (va * va / (a.len() as f64 - 1.0) + vb * vb / (b.len() as f64 - 1.0));
    (t, dof)
}

fn run_all(runner: &TrialRunner, runs: usize, seed: u64) -> Result<Vec<TransmissionTrace>> {
    (0..runs as u64)
        .into_par_iter()
        .map(|trial| runner.run(seed, trial))
        .collect()
}

fn run_schemes(
    schemes: Vec<(&str, TrialConfig)>,
    tables: &Arc<DistributionTables>,
    runs: usize,
    seed: u64,
) -> Result<Vec<SchemeResult>> {
    schemes
        .into_iter()
        .map(|(label, cfg)| {
            let runner = TrialRunner::with_tables(cfg, tables.clone())?;
            Ok(SchemeResult::from_traces(label, &run_all(&runner, runs, seed)?))
        })
        .collect()
}

/// Single-layer code without feedback, with per-symbol acknowledgments and
/// the Robust Soliton over the remaining inputs, and with per-symbol
/// acknowledgments and the adaptive distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleLayerExperiment {
    pub rsd: RsdParams,
    pub runs: usize,
    pub seed: u64,
    pub width: usize,
}

impl SingleLayerExperiment {
    pub fn new(rsd: RsdParams, runs: usize, seed: u64) -> Self {
        Self {
            rsd,
            runs,
            seed,
            width: DEFAULT_WIDTH,
        }
    }

    pub fn schemes(&self) -> Vec<(&'static str, TrialConfig)> {
        let base = TrialConfig {
            width: self.width,
            ..TrialConfig::new(self.rsd)
        };
        let with = |policy| TrialConfig { policy, ..base.clone() };
        vec![
            ("no_feedback", base.clone()),
            ("ack_original", with(FeedbackPolicy::PerSymbolAck { mode: DistributionMode::Original })),
            ("ack_adaptive", with(FeedbackPolicy::PerSymbolAck { mode: DistributionMode::Adaptive })),
        ]
    }

    pub fn run(&self) -> Result<Vec<SchemeResult>> {
        let tables = Arc::new(DistributionTables::new(self.rsd)?);
        run_schemes(self.schemes(), &tables, self.runs, self.seed)
    }
}

/// Single-layer baseline, and a two-layer code with and without the base
/// layer acknowledgment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLayerExperiment {
    pub rsd: RsdParams,
    pub alpha: f64,
    pub beta: f64,
    pub runs: usize,
    pub seed: u64,
    pub width: usize,
    pub reparameterize: bool,
}

impl TwoLayerExperiment {
    pub fn new(rsd: RsdParams, alpha: f64, beta: f64, runs: usize, seed: u64) -> Self {
        Self {
            rsd,
            alpha,
            beta,
            runs,
            seed,
            width: DEFAULT_WIDTH,
            reparameterize: true,
        }
    }

    pub fn layers(&self) -> Result<LayerConfig> {
        LayerConfig::two_layer(self.rsd.k, self.alpha, self.beta)
    }

    pub fn schemes(&self) -> Result<Vec<(&'static str, TrialConfig)>> {
        let single = TrialConfig {
            width: self.width,
            ..TrialConfig::new(self.rsd)
        };
        let layered = TrialConfig {
            layers: Some(self.layers()?),
            ..single.clone()
        };
        let acked = TrialConfig {
            policy: FeedbackPolicy::LayerAck { reparameterize: self.reparameterize },
            ..layered.clone()
        };
        Ok(vec![("single_layer", single), ("two_layer", layered), ("two_layer_ack", acked)])
    }

    pub fn run(&self) -> Result<Vec<SchemeResult>> {
        let tables = Arc::new(DistributionTables::new(self.rsd)?);
        run_schemes(self.schemes()?, &tables, self.runs, self.seed)
    }
}

/// Mean distortion of the three schemes of [`TwoLayerExperiment`] under a
/// deadline, over a grid of erasure rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionExperiment {
    pub rsd: RsdParams,
    pub alpha: f64,
    pub beta: f64,
    pub ser_grid: Vec<f64>,
    /// Trials per erasure rate; one trial is one second of video.
    pub seconds: usize,
    pub seed: u64,
    pub width: usize,
    /// Deadline as a multiple of `k`.
    pub deadline_factor: f64,
    pub deadline_basis: DeadlineBasis,
    pub reparameterize: bool,
    pub model: RateDistortionModel,
}

/// Mean distortion per scheme and erasure rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionResult {
    pub ser: Vec<f64>,
    pub labels: Vec<String>,
    /// `[scheme][ser]`.
    pub mean: Vec<Vec<f64>>,
    pub std_err: Vec<Vec<f64>>,
    pub payload_mismatches: usize,
}

impl DistortionResult {
    pub fn scheme(&self, label: &str) -> Option<&[f64]> {
        self.labels.iter().position(|l| l == label).map(|i| self.mean[i].as_slice())
    }
}

impl DistortionExperiment {
    pub fn new(rsd: RsdParams, alpha: f64, beta: f64, ser_grid: Vec<f64>, seconds: usize, seed: u64) -> Result<Self> {
        Ok(Self {
            rsd,
            alpha,
            beta,
            ser_grid,
            seconds,
            seed,
            width: DEFAULT_WIDTH,
            deadline_factor: 2.0,
            deadline_basis: DeadlineBasis::Sent,
            reparameterize: true,
            model: RateDistortionModel::reference_video(vec![alpha, 1.0 - alpha])?,
        })
    }

    pub fn run(&self) -> Result<DistortionResult> {
        if !(self.deadline_factor > 0.0) {
            return domain(format!("deadline factor {} must be positive", self.deadline_factor));
        }
        for &ser in &self.ser_grid {
            ChannelParams::new(ser)?;
        }
        let layered_model = RateDistortionModel {
            layer_fractions: vec![self.alpha, 1.0 - self.alpha],
            ..self.model.clone()
        };
        let single_model = RateDistortionModel {
            layer_fractions: vec![1.0],
            ..self.model.clone()
        };
        let deadline = Deadline {
            symbols: (self.deadline_factor * self.rsd.k as f64).round() as u64,
            basis: self.deadline_basis,
        };
        let schemes = TwoLayerExperiment {
            rsd: self.rsd,
            alpha: self.alpha,
            beta: self.beta,
            runs: self.seconds,
            seed: self.seed,
            width: self.width,
            reparameterize: self.reparameterize,
        }
        .schemes()?;
        let tables = Arc::new(DistributionTables::new(self.rsd)?);

        let mut result = DistortionResult {
            ser: self.ser_grid.clone(),
            labels: schemes.iter().map(|(l, _)| l.to_string()).collect(),
            mean: Vec::new(),
            std_err: Vec::new(),
            payload_mismatches: 0,
        };
        for (_, cfg) in schemes {
            let model = if cfg.layers.is_some() { &layered_model } else { &single_model };
            let mut means = Vec::with_capacity(self.ser_grid.len());
            let mut errs = Vec::with_capacity(self.ser_grid.len());
            for &ser in &self.ser_grid {
                let cfg = TrialConfig {
                    channel: ChannelParams::new(ser)?,
                    deadline: Some(deadline),
                    ..cfg.clone()
                };
                let runner = TrialRunner::with_tables(cfg, tables.clone())?;
                let per_trial: Vec<(f64, usize)> = (0..self.seconds as u64)
                    .into_par_iter()
                    .map(|trial| {
                        let t = runner.run(self.seed, trial)?;
                        Ok((model.distortion_of_trace(&t)?, t.payload_mismatches))
                    })
                    .collect::<Result<_>>()?;
                let d: Vec<f64> = per_trial.iter().map(|p| p.0).collect();
                result.payload_mismatches += per_trial.iter().map(|p| p.1).sum::<usize>();
                let (m, se) = mean_and_std_err(&d);
                means.push(m);
                errs.push(se);
            }
            result.mean.push(means);
            result.std_err.push(errs);
        }
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rsd(k: usize) -> RsdParams {
        RsdParams::new(k, 0.1, 1.0).unwrap()
    }

    #[test]
    fn welch_against_hand_computation() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [2.0, 4.0, 6.0];
        let (t, dof) = welch_t(&a, &b);
        // Means 2.5 and 4, variances 5/3 and 4.
        let se2: f64 = 5.0 / 3.0 / 4.0 + 4.0 / 3.0;
        assert!((t - (-1.5 / se2.sqrt())).abs() < 1e-12);
        let expect = se2 * se2 / ((5.0f64 / 12.0).powi(2) / 3.0 + (4.0f64 / 3.0).powi(2) / 2.0);
        assert!((dof - expect).abs() < 1e-12);
    }

    #[test]
    fn single_layer_experiment_is_reproducible() {
        let e = SingleLayerExperiment::new(rsd(50), 4, 9);
        let a = e.run().unwrap();
        assert_eq!(a, e.run().unwrap());
        assert_eq!(a.len(), 3);
        for s in &a {
            assert_eq!(s.trials, 4);
            assert_eq!(s.incomplete, 0);
            assert_eq!(s.mean_undecoded[0], 1.0);
            assert_eq!(*s.mean_undecoded.last().unwrap(), 0.0);
            assert_eq!(s.payload_mismatches, 0);
        }
        let adaptive = &a[2];
        assert_eq!(adaptive.redundant, 0);
    }

    #[test]
    fn two_layer_curves_per_layer() {
        let e = TwoLayerExperiment::new(rsd(100), 0.5, 9.0, 6, 1);
        let res = e.run().unwrap();
        assert_eq!(res[0].mean_layer_undecoded.len(), 1);
        assert_eq!(res[1].mean_layer_undecoded.len(), 2);
        assert!(TwoLayerExperiment::new(rsd(100), 0.333, 9.0, 1, 1).run().is_err());
    }

    #[test]
    fn distortion_endpoints() {
        let e = DistortionExperiment::new(rsd(50), 0.5, 9.0, vec![0.0, 1.0], 5, 2).unwrap();
        let r = e.run().unwrap();
        for m in &r.mean {
            assert_eq!(m[1], 1.0);
        }
        // Lossless, 2k slots: each scheme decodes everything.
        assert!((r.scheme("single_layer").unwrap()[0] - e.model.distortion(2)).abs() < 1e-12);
    }
}
