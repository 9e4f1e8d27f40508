//! LT encoder and peeling decoder.

mod decoder;
mod encoder;

use rand::RngCore;

use crate::degree::LayerConfig;
use crate::error::{domain, Result};

pub use decoder::{AckSnapshot, Decoder, Reception};
pub use encoder::Encoder;

/// Payload width used when none is given.
pub const DEFAULT_WIDTH: usize = 8;

/// `k` fixed-width source symbols, optionally split into layers.
#[derive(Debug, Clone, PartialEq)]
pub struct InputBlock {
    width: usize,
    data: Vec<u8>,
    layers: Option<LayerConfig>,
}

impl InputBlock {
    /// Block from a flat buffer of `k · width` bytes.
    pub fn from_flat(width: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 {
            return domain("payload width must be at least one byte");
        }
        if data.is_empty() || !data.len().is_multiple_of(width) {
            return domain(format!("{} bytes is not a positive multiple of width {width}", data.len()));
        }
        Ok(Self {
            width,
            data,
            layers: None,
        })
    }

    /// Block from individual payloads, which must share one width.
    pub fn from_symbols<S: AsRef<[u8]>>(symbols: &[S]) -> Result<Self> {
        let Some(first) = symbols.first() else {
            return domain("block needs at least one symbol");
        };
        let width = first.as_ref().len();
        if let Some(s) = symbols.iter().find(|s| s.as_ref().len() != width) {
            return domain(format!("mixed payload widths {width} and {}", s.as_ref().len()));
        }
        Self::from_flat(width, symbols.iter().flat_map(|s| s.as_ref().iter().copied()).collect())
    }

    /// `k` uniformly random payloads.
    pub fn random<R: RngCore + ?Sized>(k: usize, width: usize, rng: &mut R) -> Result<Self> {
        let mut data = vec![0u8; k * width];
        rng.fill_bytes(&mut data);
        Self::from_flat(width, data)
    }

    /// Attaches a layer partition; its sizes must add up to `k`.
    pub fn with_layers(mut self, layers: LayerConfig) -> Result<Self> {
        if layers.k() != self.k() {
            return domain(format!("layers cover {} symbols, block has {}", layers.k(), self.k()));
        }
        self.layers = Some(layers);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn layers(&self) -> Option<&LayerConfig> {
        self.layers.as_ref()
    }

    pub fn symbol(&self, index: usize) -> &[u8] {
        &self.data[index * self.width..(index + 1) * self.width]
    }

    /// XOR of the payloads at `indices`.
    pub fn xor_of(&self, indices: &[usize]) -> Vec<u8> {
        let mut out = vec![0u8; self.width];
        for &i in indices {
            xor_into(&mut out, self.symbol(i));
        }
        out
    }

    /// Per-symbol layer index (all zero without layers).
    pub fn layer_map(&self) -> Vec<usize> {
        match &self.layers {
            Some(l) => (0..l.len()).flat_map(|j| std::iter::repeat_n(j, l.sizes()[j])).collect(),
            None => vec![0; self.k()],
        }
    }

    /// Layer sizes, or `[k]` without layers.
    pub fn layer_sizes(&self) -> Vec<usize> {
        match &self.layers {
            Some(l) => l.sizes().to_vec(),
            None => vec![self.k()],
        }
    }
}

/// One encoded symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSymbol {
    /// Distinct input indices, ascending.
    pub neighbors: Vec<usize>,
    pub payload: Vec<u8>,
    pub sequence_number: u64,
}

impl OutputSymbol {
    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }
}

pub(crate) fn xor_into(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}
