//! LT fountain codes with acknowledgment feedback.
//!
//! The crate is split along the lines of the analysis it supports:
//!
//! * [`combinatorics`]: log-space binomials, central and Wallenius'
//!   noncentral hypergeometric probabilities, weighted sampling without
//!   replacement.
//! * [`degree`]: degree distributions (Robust Soliton and the reduced /
//!   adaptive forms derived from it), single- and multi-layer.
//! * [`codec`]: the LT encoder and the belief-propagation peeling decoder.
//! * [`feedback`]: acknowledgment policies that steer the encoder.
//! * [`sim`]: erasure channel, transmission traces, distortion model and
//!   the experiment drivers.

pub mod codec;
pub mod combinatorics;
pub mod degree;
mod error;
pub mod feedback;
pub mod sim;

pub use codec::{Decoder, Encoder, InputBlock, OutputSymbol, Reception};
pub use degree::{DegreeDistribution, LayerConfig, RsdParams};
pub use error::{Error, Result};
pub use feedback::{DistributionMode, DistributionTables, Feedback, FeedbackPolicy};
pub use sim::{ChannelParams, RateDistortionModel, TransmissionTrace};
