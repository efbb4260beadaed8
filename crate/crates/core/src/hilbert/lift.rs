//! Project-and-lift Hilbert basis computation.
//!
//! The solution lattice `L = ker(A)` has rank `r`. An echelon basis of `L`
//! picks `r` pivot coordinates that determine every lattice vector, so the
//! cone `{x in L : x_i >= 0 for pivots i}` is simplicial and its Hilbert
//! basis is known up front. The remaining coordinates are then lifted one
//! at a time: imposing `x_j >= 0` intersects the current cone with a
//! half-space, and the new Hilbert basis is completed from sums `x + y` of a
//! generator with `x_j > 0` and one with `x_j < 0` that are not reduced by a
//! lower-degree generator of the same half-cone (Pottier's procedure).
//! Candidates are handled by increasing degree, so acceptance is final.
//!
//! Every intermediate cone has dimension `r`, which keeps the intermediate
//! bases far smaller than imposing the constraints of `A` one by one.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::lattice::{kernel_basis, Echelon};
use super::support::{mask_subset, words_for};
use super::{Meter, Projected};
use crate::error::{Error, Result};

type Vector = Vec<i32>;
type Buckets = BTreeMap<i64, Vec<usize>>;

fn narrow(v: &[i128]) -> Result<Vector> {
    v.iter()
        .map(|&x| i32::try_from(x).map_err(|_| Error::Overflow("lattice vector entry")))
        .collect()
}

/// Positive entries among the first `prefix` coordinates.
fn prefix_mask(v: &[i32], prefix: usize, out: &mut [u64]) {
    out.iter_mut().for_each(|w| *w = 0);
    for (i, &x) in v[..prefix].iter().enumerate() {
        if x > 0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
}

/// Generators of one lifting step, stored flat.
struct Pool {
    dim: usize,
    words: usize,
    data: Vec<i32>,
    masks: Vec<u64>,
}

impl Pool {
    fn vector(&self, i: usize) -> &[i32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn mask(&self, i: usize) -> &[u64] {
        &self.masks[i * self.words..(i + 1) * self.words]
    }

    fn push(&mut self, v: &[i32], prefix: usize) -> usize {
        self.data.extend_from_slice(v);
        let start = self.masks.len();
        self.masks.resize(start + self.words, 0);
        prefix_mask(v, prefix, &mut self.masks[start..]);
        self.data.len() / self.dim - 1
    }
}

/// Hilbert basis of the simplicial start cone, in lattice coordinates.
fn start_basis(ech: &Echelon, meter: &mut Meter<'_>) -> Result<Vec<Vector>> {
    if ech.is_unimodular() {
        return ech.rows.iter().map(|r| narrow(r)).collect();
    }
    let r = ech.rows.len();
    let unit = |i: usize, c: i128| {
        let mut y = vec![0i128; r];
        y[i] = c;
        y
    };
    // Smallest multiple of each unit vector that lies in the projected
    // lattice; it divides the index, which bounds the search.
    let index: i128 = (0..r).map(|i| ech.pivot_value(i)).product();
    let mut ray_len = Vec::with_capacity(r);
    for i in 0..r {
        let c = (1..=index)
            .find(|&c| ech.lift(&unit(i, c)).ok().flatten().is_some())
            .expect("index multiple always lifts");
        ray_len.push(c);
    }
    let box_size = ray_len
        .iter()
        .try_fold(1u64, |acc, &c| acc.checked_mul(c as u64))
        .ok_or(Error::Overflow("parallelepiped size"))?;
    meter.charge(box_size as usize, box_size as usize, 0)?;

    let mut points: Vec<Vec<i128>> = (0..r).map(|i| unit(i, ray_len[i])).collect();
    let mut y = vec![0i128; r];
    'outer: loop {
        let mut i = 0;
        loop {
            if i == r {
                break 'outer;
            }
            y[i] += 1;
            if y[i] < ray_len[i] {
                break;
            }
            y[i] = 0;
            i += 1;
        }
        if ech.lift(&y)?.is_some() {
            points.push(y.clone());
        }
    }
    points.sort_by_key(|p| p.iter().sum::<i128>());
    let mut kept: Vec<Vec<i128>> = Vec::new();
    for p in points {
        if !kept.iter().any(|w| w.iter().zip(&p).all(|(a, b)| a <= b)) {
            kept.push(p);
        }
    }
    kept.iter()
        .map(|y| narrow(&ech.lift(y)?.expect("lattice point")))
        .collect()
}

struct Step<'p> {
    pool: &'p Pool,
    prefix: usize,
    pos: &'p Buckets,
    neg: &'p Buckets,
    zero: &'p Buckets,
}

impl Step<'_> {
    fn reduced_in(
        &self,
        buckets: &Buckets,
        d: i64,
        z: &[i32],
        zmask: &[u64],
        lam: impl Fn(i32) -> bool,
    ) -> bool {
        let p = self.prefix;
        buckets.range(..d).any(|(_, idx)| {
            idx.iter().any(|&w| {
                let wv = self.pool.vector(w);
                mask_subset(self.pool.mask(w), zmask)
                    && lam(wv[p])
                    && wv[..p].iter().zip(&z[..p]).all(|(a, b)| a <= b)
            })
        })
    }

    /// Whether a lower-degree generator `w` of the half-cone containing
    /// `z` has `z - w` in that half-cone.
    fn reducible(&self, d: i64, z: &[i32]) -> bool {
        let mut zmask = vec![0u64; self.pool.words];
        prefix_mask(z, self.prefix, &mut zmask);
        let v = z[self.prefix];
        if self.reduced_in(self.zero, d, z, &zmask, |_| true) {
            return true;
        }
        match v.signum() {
            1 => self.reduced_in(self.pos, d, z, &zmask, |w| w <= v),
            -1 => self.reduced_in(self.neg, d, z, &zmask, |w| w >= v),
            _ => false,
        }
    }
}

fn sign_counts(basis: &[Vector], j: usize) -> u128 {
    let (mut p, mut n) = (0u128, 0u128);
    for v in basis {
        match v[j].signum() {
            1 => p += 1,
            -1 => n += 1,
            _ => {}
        }
    }
    p * n
}

/// Imposes `x_prefix >= 0` on the cone where coordinates `..prefix` are
/// already nonnegative.
fn lift_coordinate(
    basis: Vec<Vector>,
    prefix: usize,
    degree: &dyn Fn(&[i32]) -> i64,
    meter: &mut Meter<'_>,
) -> Result<Vec<Vector>> {
    let dim = basis.first().map_or(0, Vec::len);
    let words = words_for(prefix);
    let mut pool = Pool {
        dim,
        words,
        data: Vec::new(),
        masks: Vec::new(),
    };
    let (mut pos, mut neg, mut zero) = (Buckets::new(), Buckets::new(), Buckets::new());
    for v in &basis {
        let i = pool.push(v, prefix);
        let bucket = match v[prefix].signum() {
            1 => &mut pos,
            -1 => &mut neg,
            _ => &mut zero,
        };
        bucket.entry(degree(v)).or_default().push(i);
    }
    drop(basis);

    let max_deg = |b: &Buckets| b.keys().next_back().copied().unwrap_or(0);
    let min_deg = |b: &Buckets| b.keys().next().copied().unwrap_or(0);
    let mut d = if pos.is_empty() || neg.is_empty() {
        i64::MAX
    } else {
        min_deg(&pos) + min_deg(&neg)
    };
    while !neg.is_empty() && d <= max_deg(&pos) + max_deg(&neg) {
        let mut pairs: Vec<(usize, &[usize])> = Vec::new();
        for (&dp, xs) in pos.range(..d) {
            if let Some(ys) = neg.get(&(d - dp)) {
                pairs.extend(xs.iter().map(|&x| (x, ys.as_slice())));
            }
        }
        let count: usize = pairs.iter().map(|(_, ys)| ys.len()).sum();
        if count > 0 {
            meter.charge(count, pool.data.len() / dim, 0)?;
            let step = Step {
                pool: &pool,
                prefix,
                pos: &pos,
                neg: &neg,
                zero: &zero,
            };
            // Sums are checked in place; only irreducible ones are kept.
            let found: Vec<Result<Vec<Vector>>> = pairs
                .par_iter()
                .map_init(
                    || vec![0i32; dim],
                    |z, &(x, ys)| {
                        let xv = pool.vector(x);
                        let mut keep = Vec::new();
                        for &y in ys {
                            for ((t, a), b) in z.iter_mut().zip(xv).zip(pool.vector(y)) {
                                *t = a.checked_add(*b).ok_or(Error::Overflow("generator sum"))?;
                            }
                            if !step.reducible(d, z) {
                                keep.push(z.clone());
                            }
                        }
                        Ok(keep)
                    },
                )
                .collect();
            let mut fresh = Vec::new();
            for f in found {
                fresh.extend(f?);
            }
            fresh.sort_unstable();
            fresh.dedup();
            for z in fresh {
                let i = pool.push(&z, prefix);
                let bucket = match z[prefix].signum() {
                    1 => &mut pos,
                    -1 => &mut neg,
                    _ => &mut zero,
                };
                bucket.entry(d).or_default().push(i);
            }
        }
        d += 1;
    }
    Ok(pos
        .values()
        .chain(zero.values())
        .flatten()
        .map(|&i| pool.vector(i).to_vec())
        .collect())
}

pub(super) fn solve(sys: &Projected, meter: &mut Meter<'_>) -> Result<Vec<Vec<u32>>> {
    solve_positive(&sys.columns, sys.constraints, meter)
}

/// Solves a system that has a strictly positive solution.
fn solve_positive(
    columns: &[Vec<i64>],
    constraints: usize,
    meter: &mut Meter<'_>,
) -> Result<Vec<Vec<u32>>> {
    let dim = columns.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let kernel = kernel_basis(columns, constraints)?;
    if kernel.is_empty() {
        return Ok(Vec::new());
    }
    let ech = Echelon::new(kernel)?;
    let mut basis = start_basis(&ech, meter)?;

    // Physical coordinate order: position p holds original coordinate
    // order[p]; positions `..prefix` are constrained to be nonnegative.
    let mut order: Vec<usize> = ech.pivots.clone();
    order.extend((0..dim).filter(|c| !ech.pivots.contains(c)));
    for v in basis.iter_mut() {
        *v = order.iter().map(|&c| v[c]).collect();
    }
    let pivots = ech.pivots.len();
    let degree = move |v: &[i32]| v[..pivots].iter().map(|&x| x as i64).sum::<i64>();
    log::info!(
        "lattice rank {pivots}, {} start generators, {} coordinates to lift",
        basis.len(),
        dim - pivots
    );

    for prefix in pivots..dim {
        let j = (prefix..dim)
            .min_by_key(|&j| (sign_counts(&basis, j), j))
            .expect("coordinate left to lift");
        if j != prefix {
            order.swap(j, prefix);
            for v in basis.iter_mut() {
                v.swap(j, prefix);
            }
        }
        basis = lift_coordinate(basis, prefix, &degree, meter)?;
        log::info!(
            "lifted coordinate {}: {} generators, {} left",
            order[prefix],
            basis.len(),
            dim - prefix - 1
        );
    }

    let mut out = Vec::with_capacity(basis.len());
    for v in basis {
        let mut x = vec![0u32; dim];
        for (p, &c) in order.iter().enumerate() {
            x[c] = u32::try_from(v[p]).map_err(|_| Error::Overflow("negative basis entry"))?;
        }
        out.push(x);
    }
    Ok(out)
}
