//! Direct enumeration of orthogonal arrays without replication, i.e. 0/1
//! solutions of the balance constraints, by depth-first search over the
//! design points in canonical order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fraction::ReplicateVector;
use crate::hilbert::{decompose, HilbertBasis};
use crate::model::build_model_matrix;

/// Largest number of factors the exhaustive search accepts.
pub const MAX_ENUMERATION_FACTORS: usize = 5;

#[derive(Clone, Debug, Default)]
pub struct EnumerationOptions {
    /// Keep only one fraction of each complementary pair `{R, 1 - R}`: the
    /// one with smaller total, ties going to the lexicographically smaller.
    pub quotient_complement: bool,
    /// Skip fractions with more points than this.
    pub max_support: Option<usize>,
}

struct Search<'a> {
    /// `signs[p][j]` is the entry of constraint `j` at point `p`.
    signs: &'a [Vec<i8>],
    /// `room_plus[p][j]` / `room_minus[p][j]`: how far constraint `j` can
    /// still move up / down using points `p..`.
    room_plus: &'a [Vec<i32>],
    room_minus: &'a [Vec<i32>],
    max_support: usize,
}

impl Search<'_> {
    fn run(
        &self,
        p: usize,
        chosen: usize,
        sums: &mut [i32],
        x: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let n_points = self.signs.len();
        if p == n_points {
            if chosen > 0 && sums.iter().all(|&s| s == 0) {
                out.push(x.clone());
            }
            return;
        }
        let feasible = |sums: &[i32], next: usize| {
            sums.iter()
                .enumerate()
                .all(|(j, &s)| -s <= self.room_plus[next][j] && s <= self.room_minus[next][j])
        };
        // Leave point p out.
        if feasible(sums, p + 1) {
            self.run(p + 1, chosen, sums, x, out);
        }
        // Take point p.
        if chosen < self.max_support {
            for (s, &a) in sums.iter_mut().zip(&self.signs[p]) {
                *s += a as i32;
            }
            if feasible(sums, p + 1) {
                x[p] = 1;
                self.run(p + 1, chosen + 1, sums, x, out);
                x[p] = 0;
            }
            for (s, &a) in sums.iter_mut().zip(&self.signs[p]) {
                *s -= a as i32;
            }
        }
    }
}

/// Every nonzero 0/1 replicate vector whose interactions of order `1..=m`
/// all vanish, sorted lexicographically.
pub fn enumerate_indicators(
    n: usize,
    m: usize,
    options: &EnumerationOptions,
) -> Result<Vec<ReplicateVector>> {
    if n > MAX_ENUMERATION_FACTORS {
        return Err(Error::SizeLimit(format!(
            "indicator enumeration supports at most {MAX_ENUMERATION_FACTORS} factors, got {n}"
        )));
    }
    let matrix = build_model_matrix(n, m)?;
    let n_points = matrix.rows();
    let k = matrix.cols();
    let signs: Vec<Vec<i8>> = (0..n_points).map(|p| matrix.row(p).to_vec()).collect();
    let mut room_plus = vec![vec![0i32; k]; n_points + 1];
    let mut room_minus = vec![vec![0i32; k]; n_points + 1];
    for p in (0..n_points).rev() {
        for j in 0..k {
            let (up, down) = if signs[p][j] > 0 { (1, 0) } else { (0, 1) };
            room_plus[p][j] = room_plus[p + 1][j] + up;
            room_minus[p][j] = room_minus[p + 1][j] + down;
        }
    }
    let search = Search {
        signs: &signs,
        room_plus: &room_plus,
        room_minus: &room_minus,
        max_support: options.max_support.unwrap_or(n_points),
    };

    // Fan out over the assignments of the first few points; each subtree
    // is searched independently and the results are merged in order.
    let split = n_points.min(6);
    let prefixes: Vec<u32> = (0..1u32 << split).collect();
    let mut found: Vec<Vec<u32>> = prefixes
        .par_iter()
        .flat_map_iter(|&prefix| {
            let mut x = vec![0u32; n_points];
            let mut sums = vec![0i32; k];
            let mut chosen = 0;
            for p in 0..split {
                if prefix >> (split - 1 - p) & 1 == 1 {
                    x[p] = 1;
                    chosen += 1;
                    for (s, &a) in sums.iter_mut().zip(&signs[p]) {
                        *s += a as i32;
                    }
                }
            }
            let mut out = Vec::new();
            let ok = chosen <= search.max_support
                && sums
                    .iter()
                    .enumerate()
                    .all(|(j, &s)| -s <= room_plus[split][j] && s <= room_minus[split][j]);
            if ok {
                search.run(split, chosen, &mut sums, &mut x, &mut out);
            }
            out
        })
        .collect();
    found.sort();

    if options.quotient_complement {
        found.retain(|x| {
            let c: Vec<u32> = x.iter().map(|&v| 1 - v).collect();
            let (tx, tc) = (x.iter().sum::<u32>(), c.iter().sum::<u32>());
            tx < tc || (tx == tc && *x < c)
        });
    }
    found.into_iter().map(ReplicateVector::new).collect()
}

/// How an indicator fraction relates to a Hilbert basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndicatorRole {
    /// It is the basis element with this index.
    BasisElement(usize),
    /// Disjoint union of these basis elements (each used once).
    DisjointUnion(Vec<usize>),
    /// No decomposition found: the basis is incomplete.
    Undecomposed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub roles: Vec<IndicatorRole>,
    /// Support size of the smallest indicator basis elements.
    pub smallest_support: Option<usize>,
    /// Pairs of such elements with disjoint supports.
    pub disjoint_pairs: usize,
}

impl CrossCheck {
    pub fn basis_elements(&self) -> usize {
        self.roles
            .iter()
            .filter(|r| matches!(r, IndicatorRole::BasisElement(_)))
            .count()
    }

    pub fn disjoint_unions(&self) -> usize {
        self.roles
            .iter()
            .filter(|r| matches!(r, IndicatorRole::DisjointUnion(_)))
            .count()
    }

    pub fn undecomposed(&self) -> usize {
        self.roles
            .iter()
            .filter(|r| matches!(r, IndicatorRole::Undecomposed))
            .count()
    }
}

fn disjoint(a: &ReplicateVector, b: &ReplicateVector) -> bool {
    a.counts()
        .iter()
        .zip(b.counts())
        .all(|(x, y)| *x == 0 || *y == 0)
}

pub fn cross_check_basis(
    indicators: &[ReplicateVector],
    basis: &HilbertBasis,
) -> Result<CrossCheck> {
    let width = basis.system().width();
    if let Some(bad) = indicators.iter().find(|r| r.len() != width) {
        return Err(Error::Parameter(format!(
            "indicator of length {} against a basis of width {width}",
            bad.len()
        )));
    }
    let roles = indicators
        .par_iter()
        .map(|r| {
            if let Ok(i) = basis.elements().binary_search(r) {
                return Ok(IndicatorRole::BasisElement(i));
            }
            match decompose(basis, r) {
                Ok(parts) => Ok(IndicatorRole::DisjointUnion(
                    parts.into_iter().map(|(i, _)| i).collect(),
                )),
                Err(Error::Infeasible) | Err(Error::NotMember) => Ok(IndicatorRole::Undecomposed),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let smallest_support = basis
        .elements()
        .iter()
        .filter(|e| e.max_replication() == 1)
        .map(|e| e.support())
        .min();
    let disjoint_pairs = smallest_support.map_or(0, |s| disjoint_pairs(basis, s));
    Ok(CrossCheck {
        roles,
        smallest_support,
        disjoint_pairs,
    })
}

/// Unordered pairs of indicator basis elements with `support` points each
/// and disjoint supports.
pub fn disjoint_pairs(basis: &HilbertBasis, support: usize) -> usize {
    let small: Vec<&ReplicateVector> = basis
        .elements()
        .iter()
        .filter(|e| e.max_replication() == 1 && e.support() == support)
        .collect();
    (0..small.len())
        .map(|i| {
            small[i + 1..]
                .iter()
                .filter(|b| disjoint(small[i], b))
                .count()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{hilbert_basis, Algorithm, Budget, ConeSystem};

    fn fr(v: &[u32]) -> ReplicateVector {
        ReplicateVector::new(v.to_vec()).unwrap()
    }

    /// Every nonzero subset of the points, checked against the model
    /// matrix directly.
    fn subsets(n: usize, m: usize) -> Vec<ReplicateVector> {
        let matrix = build_model_matrix(n, m).unwrap();
        let width = 1usize << n;
        let mut out = Vec::new();
        for set in 1u64..1 << width {
            let x: Vec<u32> = (0..width)
                .map(|p| (set >> (width - 1 - p) & 1) as u32)
                .collect();
            let balanced = (0..matrix.cols()).all(|j| {
                (0..width)
                    .map(|p| x[p] as i64 * matrix.get(p, j) as i64)
                    .sum::<i64>()
                    == 0
            });
            if balanced {
                out.push(ReplicateVector::new(x).unwrap());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn two_factors() {
        let all = enumerate_indicators(2, 1, &EnumerationOptions::default()).unwrap();
        assert_eq!(
            all,
            vec![fr(&[0, 1, 1, 0]), fr(&[1, 0, 0, 1]), fr(&[1, 1, 1, 1])]
        );
        let q = EnumerationOptions {
            quotient_complement: true,
            ..Default::default()
        };
        assert_eq!(
            enumerate_indicators(2, 1, &q).unwrap(),
            vec![fr(&[0, 1, 1, 0])]
        );
    }

    #[test]
    fn matches_subset_scan() {
        for (n, m) in [(1, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
            let all = enumerate_indicators(n, m, &EnumerationOptions::default()).unwrap();
            assert_eq!(all, subsets(n, m), "OA({n},{m})");
        }
    }

    #[test]
    fn max_support_filters() {
        let all = enumerate_indicators(4, 2, &EnumerationOptions::default()).unwrap();
        let capped = EnumerationOptions {
            max_support: Some(8),
            ..Default::default()
        };
        let small = enumerate_indicators(4, 2, &capped).unwrap();
        let expected: Vec<_> = all.into_iter().filter(|r| r.support() <= 8).collect();
        assert_eq!(small, expected);
        assert!(!small.is_empty());
    }

    #[test]
    fn quotient_keeps_one_of_each_pair() {
        let all = enumerate_indicators(4, 1, &EnumerationOptions::default()).unwrap();
        let q = enumerate_indicators(
            4,
            1,
            &EnumerationOptions {
                quotient_complement: true,
                ..Default::default()
            },
        )
        .unwrap();
        // The full design pairs with the empty fraction and drops out.
        assert_eq!(q.len(), (all.len() - 1) / 2);
        for r in &q {
            let c = crate::analysis::complement(r).unwrap();
            assert!(all.contains(&c) && !q.contains(&c));
        }
    }

    #[test]
    fn too_many_factors() {
        assert!(matches!(
            enumerate_indicators(6, 2, &EnumerationOptions::default()),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn cross_check_small() {
        let sys = ConeSystem::orthogonal_array(3, 1).unwrap();
        let basis = hilbert_basis(&sys, Algorithm::ProjectAndLift, &Budget::default()).unwrap();
        let all = enumerate_indicators(3, 1, &EnumerationOptions::default()).unwrap();
        let x = cross_check_basis(&all, &basis).unwrap();
        assert_eq!(x.undecomposed(), 0);
        assert_eq!(x.basis_elements() + x.disjoint_unions(), all.len());
        // Four antipodal pairs; two disjoint pairs of them make each of the
        // six 4-point fractions that are not basis elements.
        assert_eq!(x.smallest_support, Some(2));
        assert_eq!(x.disjoint_pairs, 6);
        for (r, role) in all.iter().zip(&x.roles) {
            if let IndicatorRole::DisjointUnion(parts) = role {
                let mut sum = vec![0u32; 8];
                for &i in parts {
                    for (s, c) in sum.iter_mut().zip(basis.elements()[i].counts()) {
                        *s += c;
                    }
                }
                assert_eq!(sum, r.counts());
            }
        }
        let wrong = cross_check_basis(&[fr(&[1, 1])], &basis);
        assert!(wrong.is_err());
    }
}
