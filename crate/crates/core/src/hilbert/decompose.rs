//! Writing a member of the monoid as a nonnegative integer combination of
//! basis elements.

use std::collections::HashSet;

use super::{is_member, HilbertBasis};
use crate::error::{Error, Result};
use crate::fraction::ReplicateVector;

/// Basis indices with multiplicities, in increasing index order.
pub type Decomposition = Vec<(usize, u32)>;

/// Finds multipliers `n_i >= 0` with `sum n_i r_i = v`.
///
/// Depth-first over basis elements below the running remainder, trying
/// larger totals first. With a complete basis the first choice always
/// succeeds, since `v - r_i` is again a member; failed remainders are
/// memoized so an incomplete basis is detected without blowing up.
pub fn decompose(basis: &HilbertBasis, v: &ReplicateVector) -> Result<Decomposition> {
    if !is_member(basis.system(), v)? {
        return Err(Error::NotMember);
    }
    let mut order: Vec<usize> = (0..basis.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(basis.elements()[i].total()), i));
    let mut failed = HashSet::new();
    let mut picks = Vec::new();
    if !search(basis, &order, v.counts().to_vec(), &mut picks, &mut failed) {
        return Err(Error::Infeasible);
    }
    picks.sort_unstable();
    let mut out: Decomposition = Vec::new();
    for i in picks {
        match out.last_mut() {
            Some((j, k)) if *j == i => *k += 1,
            _ => out.push((i, 1)),
        }
    }
    Ok(out)
}

fn search(
    basis: &HilbertBasis,
    order: &[usize],
    rest: Vec<u32>,
    picks: &mut Vec<usize>,
    failed: &mut HashSet<Vec<u32>>,
) -> bool {
    if rest.iter().all(|&x| x == 0) {
        return true;
    }
    if failed.contains(&rest) {
        return false;
    }
    for &i in order {
        let e = basis.elements()[i].counts();
        if e.iter().zip(&rest).all(|(a, b)| a <= b) {
            let next: Vec<u32> = rest.iter().zip(e).map(|(a, b)| a - b).collect();
            picks.push(i);
            if search(basis, order, next, picks, failed) {
                return true;
            }
            picks.pop();
        }
    }
    failed.insert(rest);
    false
}
