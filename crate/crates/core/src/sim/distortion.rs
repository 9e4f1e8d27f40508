use serde::{Deserialize, Serialize};

use super::TransmissionTrace;
use crate::error::{domain, Result};

/// Layered source whose quality follows `d(r) = 2^(-2r)`, where `r` is the
/// rate in bits per pixel carried by the decoded layers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateDistortionModel {
    /// Share of the bitrate carried by each layer, base first.
    pub layer_fractions: Vec<f64>,
    pub bitrate: f64,
    pub width: u32,
    pub height: u32,
    pub fps: f64,
}

impl RateDistortionModel {
    pub fn new(layer_fractions: Vec<f64>, bitrate: f64, width: u32, height: u32, fps: f64) -> Result<Self> {
        if layer_fractions.is_empty() || layer_fractions.iter().any(|a| !(*a > 0.0)) {
            return domain(format!("layer fractions {layer_fractions:?} must be positive"));
        }
        if (layer_fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return domain(format!("layer fractions {layer_fractions:?} do not sum to one"));
        }
        if !(bitrate > 0.0 && fps > 0.0 && width > 0 && height > 0) {
            return domain("bitrate, frame size and frame rate must be positive");
        }
        Ok(Self {
            layer_fractions,
            bitrate,
            width,
            height,
            fps,
        })
    }

    /// 1 Mbit/s of 480×320 video at 30 frames per second.
    pub fn reference_video(layer_fractions: Vec<f64>) -> Result<Self> {
        Self::new(layer_fractions, 1e6, 480, 320, 30.0)
    }

    pub fn n_layers(&self) -> usize {
        self.layer_fractions.len()
    }

    /// Bits per pixel of the full stream.
    pub fn full_rate(&self) -> f64 {
        self.bitrate / (f64::from(self.width) * f64::from(self.height) * self.fps)
    }

    /// `r_z`: rate with the first `z` layers decoded.
    pub fn rate(&self, z: usize) -> f64 {
        self.layer_fractions.iter().take(z).sum::<f64>() * self.full_rate()
    }

    pub fn distortion(&self, z: usize) -> f64 {
        (-2.0 * self.rate(z)).exp2()
    }

    /// Distortion at the end of `trace`. A layer only counts when every
    /// layer before it was decoded too.
    pub fn distortion_of_trace(&self, trace: &TransmissionTrace) -> Result<f64> {
        if trace.n_layers() != self.n_layers() {
            return domain(format!(
                "trace has {} layers, model {}",
                trace.n_layers(),
                self.n_layers()
            ));
        }
        Ok(self.distortion(trace.decoded_layer_prefix()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rates() {
        let m = RateDistortionModel::reference_video(vec![0.5, 0.5]).unwrap();
        assert_eq!(m.distortion(0), 1.0);
        assert!((m.rate(2) - 0.217014).abs() < 1e-6);
        assert!((m.rate(1) - 0.108507).abs() < 1e-6);
        // Evaluated independently in a script.
        assert!((m.distortion(2) - 0.740192397133012).abs() < 1e-12);
        assert!((m.distortion(1) - 0.8603443479985279).abs() < 1e-12);
        let single = RateDistortionModel::reference_video(vec![1.0]).unwrap();
        assert_eq!(single.distortion(1), m.distortion(2));
    }

    #[test]
    fn rejects_bad_models() {
        assert!(RateDistortionModel::reference_video(vec![]).is_err());
        assert!(RateDistortionModel::reference_video(vec![0.5, 0.6]).is_err());
        assert!(RateDistortionModel::new(vec![1.0], 0.0, 1, 1, 1.0).is_err());
    }
}
