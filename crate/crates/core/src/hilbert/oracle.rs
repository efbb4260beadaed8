//! Exhaustive enumeration of small solutions, used as an independent check
//! on the basis solvers.

use super::support::{le, SupportIndex};
use super::ConeSystem;
use crate::error::{Error, Result};
use crate::fraction::ReplicateVector;

pub const DEFAULT_ORACLE_NODE_CAP: u64 = 2_000_000_000;

struct Search<'a> {
    rows: &'a [Vec<i8>],
    free: Vec<usize>,
    width: usize,
    found_before: Vec<Vec<u32>>,
    found_now: Vec<Vec<u32>>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn reachable(defect: &[i64], remaining: u32) -> bool {
        let r = remaining as i64;
        defect.iter().all(|&d| d.abs() <= r && (d + r) % 2 == 0)
    }

    fn dominates_known(&self, x: &[u32]) -> bool {
        self.found_before.iter().any(|s| le(s, x))
    }

    /// Assigns free coordinate number `slot` onwards so that the total uses
    /// exactly `remaining` more units.
    fn visit(
        &mut self,
        slot: usize,
        remaining: u32,
        defect: &mut Vec<i64>,
        x: &mut Vec<u32>,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::OracleInfeasible { cap: self.cap });
        }
        if !Self::reachable(defect, remaining) || self.dominates_known(x) {
            return Ok(());
        }
        if remaining == 0 {
            if defect.iter().all(|&d| d == 0) {
                self.found_now.push(x.clone());
            }
            return Ok(());
        }
        if slot == self.free.len() {
            return Ok(());
        }
        let j = self.free[slot];
        let last = slot + 1 == self.free.len();
        let lo = if last { remaining } else { 0 };
        for v in lo..=remaining {
            let step = v - x[j];
            for (d, row) in defect.iter_mut().zip(self.rows) {
                *d += row[j] as i64 * step as i64;
            }
            x[j] = v;
            self.visit(slot + 1, remaining - v, defect, x)?;
        }
        for (d, row) in defect.iter_mut().zip(self.rows) {
            *d -= row[j] as i64 * x[j] as i64;
        }
        x[j] = 0;
        Ok(())
    }
}

/// Every `R >= 0` with `A R = 0` and total at most `max_total` that is
/// minimal (dominates no other nonzero solution), sorted.
///
/// Totals are enumerated in increasing order and partial vectors already
/// dominating a known solution are cut, so the result is exactly the
/// minimal solutions of small total.
pub fn brute_force_minimal_solutions(
    system: &ConeSystem,
    max_total: u32,
    node_cap: u64,
) -> Result<Vec<ReplicateVector>> {
    let width = system.width();
    let mut search = Search {
        rows: system.rows(),
        free: (0..width)
            .filter(|i| !system.forced_zero().contains(i))
            .collect(),
        width,
        found_before: Vec::new(),
        found_now: Vec::new(),
        nodes: 0,
        cap: node_cap,
    };
    for total in 1..=max_total {
        let mut defect = vec![0i64; system.constraints()];
        let mut x = vec![0u32; search.width];
        search.visit(0, total, &mut defect, &mut x)?;
        let fresh = std::mem::take(&mut search.found_now);
        search.found_before.extend(fresh);
    }
    let mut out = search.found_before;
    debug_assert!({
        let idx = SupportIndex::new(out.iter().map(|v| v.as_slice()));
        (0..out.len()).all(|i| idx.find_dominated(&out[i], Some(i)).is_none())
    });
    out.sort();
    out.into_iter().map(ReplicateVector::new).collect()
}
