use std::collections::VecDeque;

use super::{xor_into, InputBlock, OutputSymbol};
use crate::degree::LayerConfig;
use crate::error::{domain, Result};

/// Outcome of feeding one symbol to the decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reception {
    /// Neighbors still undecoded when the symbol arrived.
    pub reduced_degree: usize,
    /// Inputs recovered as a consequence of this symbol.
    pub newly_decoded: usize,
}

impl Reception {
    pub fn is_redundant(&self) -> bool {
        self.reduced_degree == 0
    }
}

/// What the receiver would acknowledge: decoded inputs in recovery order
/// and the undecoded count of every layer.
#[derive(Debug, Clone, Copy)]
pub struct AckSnapshot<'a> {
    pub decoded: &'a [usize],
    pub undecoded: &'a [usize],
}

impl AckSnapshot<'_> {
    pub fn layer_complete(&self, layer: usize) -> bool {
        self.undecoded[layer] == 0
    }

    pub fn is_complete(&self) -> bool {
        self.undecoded.iter().all(|&l| l == 0)
    }
}

#[derive(Debug, Clone)]
struct Pending {
    remaining: usize,
    index_xor: usize,
    payload: Vec<u8>,
}

/// Belief-propagation (peeling) decoder.
///
/// Arriving symbols are stripped of decoded neighbors. Degree-one symbols
/// enter a FIFO ripple; every input released from the ripple is XORed out
/// of the buffered symbols that reference it, which may release more.
#[derive(Debug, Clone)]
pub struct Decoder {
    width: usize,
    layer_of: Vec<usize>,
    undecoded: Vec<usize>,
    values: Vec<u8>,
    decoded: Vec<bool>,
    decoded_log: Vec<usize>,
    buffer: Vec<Pending>,
    buffered: usize,
    adjacency: Vec<Vec<u32>>,
    ripple: VecDeque<(usize, Vec<u8>)>,
    received: u64,
    redundant: u64,
}

impl Decoder {
    pub fn new(k: usize, width: usize) -> Result<Self> {
        Self::build(k, width, None)
    }

    /// Decoder tracking per-layer progress.
    pub fn with_layers(width: usize, layers: &LayerConfig) -> Result<Self> {
        Self::build(layers.k(), width, Some(layers))
    }

    /// Decoder matching the shape (not the content) of `block`.
    pub fn for_block(block: &InputBlock) -> Result<Self> {
        Self::build(block.k(), block.width(), block.layers())
    }

    fn build(k: usize, width: usize, layers: Option<&LayerConfig>) -> Result<Self> {
        if k == 0 || width == 0 {
            return domain(format!("decoder needs k >= 1 and width >= 1, got k = {k}, width = {width}"));
        }
        let (layer_of, undecoded) = match layers {
            Some(l) => (
                (0..l.len()).flat_map(|j| std::iter::repeat_n(j, l.sizes()[j])).collect(),
                l.sizes().to_vec(),
            ),
            None => (vec![0; k], vec![k]),
        };
        Ok(Self {
            width,
            layer_of,
            undecoded,
            values: vec![0; k * width],
            decoded: vec![false; k],
            decoded_log: Vec::with_capacity(k),
            buffer: Vec::new(),
            buffered: 0,
            adjacency: vec![Vec::new(); k],
            ripple: VecDeque::new(),
            received: 0,
            redundant: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.decoded.len()
    }

    /// Processes one received symbol and runs peeling to exhaustion.
    pub fn receive(&mut self, symbol: OutputSymbol) -> Result<Reception> {
        let k = self.k();
        if symbol.payload.len() != self.width {
            return domain(format!("payload of {} bytes, expected {}", symbol.payload.len(), self.width));
        }
        if let Some(i) = symbol.neighbors.iter().find(|&&i| i >= k) {
            return domain(format!("neighbor {i} outside block of {k}"));
        }
        self.received += 1;

        let mut payload = symbol.payload;
        let mut left = Vec::with_capacity(symbol.neighbors.len());
        for &i in &symbol.neighbors {
            if self.decoded[i] {
                xor_into(&mut payload, &self.values[i * self.width..(i + 1) * self.width]);
            } else {
                left.push(i);
            }
        }
        let reduced_degree = left.len();
        let before = self.decoded_log.len();
        match reduced_degree {
            0 => self.redundant += 1,
            1 => {
                self.ripple.push_back((left[0], payload));
                self.peel();
            }
            _ => {
                let slot = self.buffer.len() as u32;
                let mut index_xor = 0;
                for &i in &left {
                    index_xor ^= i;
                    self.adjacency[i].push(slot);
                }
                self.buffer.push(Pending {
                    remaining: reduced_degree,
                    index_xor,
                    payload,
                });
                self.buffered += 1;
            }
        }
        Ok(Reception {
            reduced_degree,
            newly_decoded: self.decoded_log.len() - before,
        })
    }

    fn peel(&mut self) {
        while let Some((i, payload)) = self.ripple.pop_front() {
            if self.decoded[i] {
                continue;
            }
            self.decoded[i] = true;
            self.decoded_log.push(i);
            self.undecoded[self.layer_of[i]] -= 1;
            self.values[i * self.width..(i + 1) * self.width].copy_from_slice(&payload);
            for slot in std::mem::take(&mut self.adjacency[i]) {
                let pending = &mut self.buffer[slot as usize];
                if pending.remaining == 0 {
                    continue;
                }
                xor_into(&mut pending.payload, &payload);
                pending.index_xor ^= i;
                pending.remaining -= 1;
                if pending.remaining == 1 {
                    pending.remaining = 0;
                    self.buffered -= 1;
                    self.ripple.push_back((pending.index_xor, std::mem::take(&mut pending.payload)));
                }
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        self.decoded_log.len() == self.k()
    }

    pub fn layer_complete(&self, layer: usize) -> bool {
        self.undecoded[layer] == 0
    }

    /// Completion flag of every layer.
    pub fn layers_complete(&self) -> Vec<bool> {
        self.undecoded.iter().map(|&l| l == 0).collect()
    }

    /// Total undecoded inputs, `L`.
    pub fn undecoded(&self) -> usize {
        self.k() - self.decoded_log.len()
    }

    pub fn undecoded_per_layer(&self) -> &[usize] {
        &self.undecoded
    }

    /// Decoded inputs in recovery order.
    pub fn decoded_indices(&self) -> &[usize] {
        &self.decoded_log
    }

    pub fn is_decoded(&self, index: usize) -> bool {
        self.decoded[index]
    }

    pub fn value(&self, index: usize) -> Option<&[u8]> {
        self.decoded[index].then(|| &self.values[index * self.width..(index + 1) * self.width])
    }

    /// Symbols waiting in the buffer with reduced degree two or more.
    pub fn buffered(&self) -> usize {
        self.buffered
    }

    pub fn received(&self) -> u64 {
        self.received
    }

    /// Received symbols whose neighbors were all decoded on arrival.
    pub fn redundant(&self) -> u64 {
        self.redundant
    }

    pub fn snapshot(&self) -> AckSnapshot<'_> {
        AckSnapshot {
            decoded: &self.decoded_log,
            undecoded: &self.undecoded,
        }
    }
}
