//! Weighted sampling without replacement.

use rand::Rng;

use crate::error::{domain, Result};

/// Fenwick tree over item weights supporting weighted selection by prefix sum.
struct WeightTree {
    tree: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightTree {
    fn new(weights: &[f64]) -> Self {
        let n = weights.len();
        let mut tree = vec![0.0; n + 1];
        for i in 1..=n {
            tree[i] += weights[i - 1];
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i];
            }
        }
        Self {
            tree,
            weights: weights.to_vec(),
        }
    }

    fn total(&self) -> f64 {
        let mut j = self.tree.len() - 1;
        let mut sum = 0.0;
        while j > 0 {
            sum += self.tree[j];
            j &= j - 1;
        }
        sum
    }

    fn remove(&mut self, i: usize) {
        let w = std::mem::take(&mut self.weights[i]);
        let mut j = i + 1;
        while j < self.tree.len() {
            self.tree[j] -= w;
            j += j & j.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    fn find(&self, mut target: f64) -> usize {
        let n = self.tree.len() - 1;
        let mut pos = 0;
        let mut step = n.next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }
}

/// Draws `n` distinct indices one at a time, each draw picking a remaining
/// item with probability proportional to its weight. Indices are returned in
/// draw order.
pub fn weighted_sample_without_replacement<R: Rng + ?Sized>(
    item_weights: &[f64],
    n: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n > item_weights.len() {
        return domain(format!(
            "cannot draw {n} items from {} without replacement",
            item_weights.len()
        ));
    }
    if let Some(w) = item_weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return domain(format!("item weight {w} is not strictly positive and finite"));
    }
    let mut tree = WeightTree::new(item_weights);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let target = rng.random::<f64>() * tree.total();
        let i = tree.find(target);
        // Rounding residue in the tree can point at a removed item; redraw.
        if tree.weights[i] == 0.0 {
            continue;
        }
        tree.remove(i);
        out.push(i);
    }
    Ok(out)
}
