use serde::{Deserialize, Serialize};

/// One received symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    /// Symbols sent so far, this one included.
    pub sent: u64,
    /// Symbols received so far, this one included.
    pub received: u64,
    pub reduced_degree: usize,
    pub newly_decoded: usize,
}

impl TraceRecord {
    pub fn is_redundant(&self) -> bool {
        self.reduced_degree == 0
    }
}

/// Everything observed by the receiver during one transmission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionTrace {
    pub k: usize,
    pub layer_sizes: Vec<usize>,
    pub records: Vec<TraceRecord>,
    /// Per-layer undecoded counts after each record, flattened with stride
    /// `layer_sizes.len()`.
    undecoded: Vec<usize>,
    /// Received count at which each layer became fully decoded.
    pub layer_completion: Vec<Option<u64>>,
    /// Symbols sent in total, erased ones included.
    pub sent: u64,
    /// Decoded payloads that differed from the source block.
    pub payload_mismatches: usize,
    pub feedback_messages: usize,
}

impl TransmissionTrace {
    pub(crate) fn new(layer_sizes: Vec<usize>) -> Self {
        let n = layer_sizes.len();
        Self {
            k: layer_sizes.iter().sum(),
            layer_sizes,
            records: Vec::new(),
            undecoded: Vec::new(),
            layer_completion: vec![None; n],
            sent: 0,
            payload_mismatches: 0,
            feedback_messages: 0,
        }
    }

    pub(crate) fn push(&mut self, record: TraceRecord, undecoded: &[usize]) {
        for (j, &l) in undecoded.iter().enumerate() {
            if l == 0 && self.layer_completion[j].is_none() {
                self.layer_completion[j] = Some(record.received);
            }
        }
        self.records.push(record);
        self.undecoded.extend_from_slice(undecoded);
    }

    pub fn n_layers(&self) -> usize {
        self.layer_sizes.len()
    }

    pub fn received(&self) -> u64 {
        self.records.len() as u64
    }

    /// Per-layer undecoded counts after `received` receptions; the final
    /// state once the trace has ended.
    pub fn undecoded_after(&self, received: usize) -> &[usize] {
        let n = self.n_layers();
        match received.min(self.records.len()) {
            0 => &self.layer_sizes,
            r => &self.undecoded[(r - 1) * n..r * n],
        }
    }

    pub fn total_undecoded_after(&self, received: usize) -> usize {
        self.undecoded_after(received).iter().sum()
    }

    pub fn is_complete(&self) -> bool {
        self.layer_completion.iter().all(Option::is_some)
    }

    /// Received count at full recovery.
    pub fn completion(&self) -> Option<u64> {
        if !self.is_complete() {
            return None;
        }
        self.layer_completion.iter().copied().max().flatten()
    }

    /// `ε = received / k − 1` at full recovery.
    pub fn overhead(&self) -> Option<f64> {
        self.completion().map(|r| r as f64 / self.k as f64 - 1.0)
    }

    /// Number of leading layers (base first) that were fully decoded.
    pub fn decoded_layer_prefix(&self) -> usize {
        self.layer_completion.iter().take_while(|c| c.is_some()).count()
    }

    pub fn redundant(&self) -> usize {
        self.records.iter().filter(|r| r.is_redundant()).count()
    }
}
