//! Contejean–Devie completion.
//!
//! Breadth-first over vector totals. Starting from the unit vectors, a
//! non-solution `x` with defect `d = A x` is extended to `x + e_i` only when
//! `<d, A e_i> < 0`, and only if the extension does not dominate a solution
//! already found. Each level is deduplicated by sorting, so the result does
//! not depend on how a level is split across threads.

use rayon::prelude::*;

use super::support::{le, mask_subset, support_mask, words_for};
use super::{Meter, Projected};
use crate::error::{Error, Result};

struct Node {
    x: Vec<u32>,
    defect: Vec<i64>,
}

/// Growing set of found solutions with support masks.
struct Solutions {
    words: usize,
    masks: Vec<u64>,
    vectors: Vec<Vec<u32>>,
}

impl Solutions {
    fn new(dim: usize) -> Self {
        Self {
            words: words_for(dim),
            masks: Vec::new(),
            vectors: Vec::new(),
        }
    }

    fn push(&mut self, v: Vec<u32>) {
        let start = self.masks.len();
        self.masks.resize(start + self.words, 0);
        support_mask(&v, &mut self.masks[start..]);
        self.vectors.push(v);
    }

    fn dominated_by(&self, z: &[u32], zmask: &[u64]) -> bool {
        self.vectors.iter().enumerate().any(|(i, s)| {
            mask_subset(&self.masks[i * self.words..(i + 1) * self.words], zmask) && le(s, z)
        })
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn expand(node: &Node, sys: &Projected, sols: &Solutions) -> Result<Vec<Node>> {
    let mut out = Vec::new();
    let mut mask = vec![0u64; sols.words];
    support_mask(&node.x, &mut mask);
    for (i, col) in sys.columns.iter().enumerate() {
        if dot(&node.defect, col) >= 0 {
            continue;
        }
        let mut x = node.x.clone();
        x[i] = x[i]
            .checked_add(1)
            .ok_or(Error::Overflow("frontier entry"))?;
        let saved = mask[i / 64];
        mask[i / 64] |= 1 << (i % 64);
        let dominated = sols.dominated_by(&x, &mask);
        mask[i / 64] = saved;
        if dominated {
            continue;
        }
        let defect = node
            .defect
            .iter()
            .zip(col)
            .map(|(d, c)| d.checked_add(*c).ok_or(Error::Overflow("defect")))
            .collect::<Result<Vec<_>>>()?;
        out.push(Node { x, defect });
    }
    Ok(out)
}

pub(super) fn solve(sys: &Projected, meter: &mut Meter<'_>) -> Result<Vec<Vec<u32>>> {
    let dim = sys.dim();
    let mut solutions = Solutions::new(dim);
    let mut frontier: Vec<Node> = (0..dim)
        .map(|i| {
            let mut x = vec![0; dim];
            x[i] = 1;
            Node {
                x,
                defect: sys.columns[i].clone(),
            }
        })
        .collect();
    meter.charge(frontier.len(), frontier.len(), 0)?;
    let mut level = 1;
    while !frontier.is_empty() {
        let (done, open): (Vec<Node>, Vec<Node>) = frontier
            .into_iter()
            .partition(|n| n.defect.iter().all(|&d| d == 0));
        for n in done {
            solutions.push(n.x);
        }
        let mut next: Vec<Node> = open
            .par_iter()
            .map(|n| expand(n, sys, &solutions))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        next.par_sort_unstable_by(|a, b| a.x.cmp(&b.x));
        next.dedup_by(|a, b| a.x == b.x);
        level += 1;
        log::debug!(
            "completion level {level}: frontier {}, solutions {}",
            next.len(),
            solutions.vectors.len()
        );
        meter.charge(next.len(), next.len(), solutions.vectors.len())?;
        frontier = next;
    }
    Ok(solutions.vectors)
}
