//! Counting-polynomial analysis of fractions: the exact Walsh–Hadamard
//! transform between replicate vectors and coefficients, the two
//! orthogonal-array tests, classification and the symmetry group action.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::design::validate_factors;
use crate::error::{Error, Result};
use crate::fraction::{CountingCoefficients, Dyadic, ReplicateVector};
use crate::hilbert::HilbertBasis;

/// In-place unnormalized transform `v[alpha] <- sum_a (-1)^|alpha & a| v[a]`.
fn hadamard(v: &mut [i64]) {
    let mut h = 1;
    while h < v.len() {
        for block in v.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h *= 2;
    }
}

/// `-1` exactly when `alpha` has odd weight. `X^alpha(a)` differs from the
/// `(-1)^|alpha & a|` character by this sign, since level `-1` is bit 0.
fn weight_sign(alpha: usize) -> i64 {
    if alpha.count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// `b_alpha = 2^-n sum_a R(a) X^alpha(a)` for every `alpha`.
pub fn wht_forward(r: &ReplicateVector) -> CountingCoefficients {
    let mut v: Vec<i64> = r.counts().iter().map(|&c| c as i64).collect();
    hadamard(&mut v);
    for (alpha, x) in v.iter_mut().enumerate() {
        *x *= weight_sign(alpha);
    }
    CountingCoefficients::from_numerators(v).expect("length is a power of two")
}

/// Evaluates `sum_alpha b_alpha X^alpha` on every design point. Fails unless
/// all values are nonnegative integers.
pub fn wht_inverse(b: &CountingCoefficients) -> Result<ReplicateVector> {
    let n = b.factors();
    let mut v: Vec<i64> = b
        .numerators()
        .iter()
        .enumerate()
        .map(|(alpha, &x)| x * weight_sign(alpha))
        .collect();
    hadamard(&mut v);
    let counts = v
        .iter()
        .enumerate()
        .map(|(a, &x)| {
            let value = Dyadic::new(x, n as u32);
            if value.denominator() != 1 {
                return Err(Error::NotCountingFunction(format!(
                    "value {value} at point {a} is not an integer"
                )));
            }
            u32::try_from(value.numerator()).map_err(|_| {
                Error::NotCountingFunction(format!(
                    "value {value} at point {a} is negative or too large"
                ))
            })
        })
        .collect::<Result<Vec<u32>>>()?;
    ReplicateVector::new(counts)
}

/// `true` iff `b_alpha = 0` for every interaction of order `1..=m`.
pub fn is_oa_coeffs(b: &CountingCoefficients, m: usize) -> bool {
    b.numerators()
        .iter()
        .enumerate()
        .all(|(alpha, &x)| x == 0 || alpha == 0 || alpha.count_ones() as usize > m)
}

/// Subsets of `0..n` of size `k`, as bitmasks over factor positions.
fn subsets(n: usize, k: usize) -> impl Iterator<Item = usize> {
    (0usize..1 << n).filter(move |s| s.count_ones() as usize == k)
}

/// `true` iff every projection on `m` factors is a replicated full
/// factorial: the counts of all `2^m` cells agree.
pub fn is_oa_projection(r: &ReplicateVector, m: usize) -> bool {
    let n = r.factors();
    let m = m.min(n);
    subsets(n, m).all(|j| {
        let mut cells: BTreeMap<usize, u64> = BTreeMap::new();
        for (point, &c) in r.counts().iter().enumerate() {
            *cells.entry(point & j).or_insert(0) += c as u64;
        }
        let mut values = cells.values();
        let first = values.next().copied().unwrap_or(0);
        values.all(|&v| v == first)
    })
}

/// Smallest order of a nonvanishing interaction, or [`Resolution::Full`]
/// when only the constant term survives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Resolution {
    Order(usize),
    Full,
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Order(k) => write!(f, "{k}"),
            Resolution::Full => f.write_str("full"),
        }
    }
}

pub fn resolution(b: &CountingCoefficients) -> Resolution {
    b.numerators()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &x)| x != 0)
        .map(|(alpha, _)| alpha.count_ones() as usize)
        .min()
        .map_or(Resolution::Full, Resolution::Order)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub support: usize,
    pub total: u64,
    pub maxrep: u32,
    pub is_indicator: bool,
    pub b0: Dyadic,
    pub resolution: Resolution,
    /// `None` for fractions with replications, where regularity is not
    /// defined.
    pub is_regular: Option<bool>,
}

pub fn classify(r: &ReplicateVector) -> Classification {
    let b = wht_forward(r);
    let maxrep = r.max_replication();
    Classification {
        support: r.support(),
        total: r.total(),
        maxrep,
        is_indicator: maxrep <= 1,
        b0: b.b0(),
        resolution: resolution(&b),
        is_regular: (maxrep <= 1).then(|| regular_unchecked(&b)),
    }
}

fn regular_unchecked(b: &CountingCoefficients) -> bool {
    let b0 = b.numerators()[0];
    if b0 == 0 {
        return false;
    }
    let support: Vec<usize> = b.terms().map(|(alpha, _)| alpha).collect();
    let magnitudes_match = b.numerators().iter().all(|&x| x == 0 || x.abs() == b0);
    magnitudes_match
        && support
            .iter()
            .all(|&x| support.iter().all(|&y| b.numerators()[x ^ y] != 0))
}

/// Regularity of an indicator fraction: every nonzero coefficient has
/// magnitude `b_0` and the set of interactions with nonzero coefficient is
/// closed under xor. The empty fraction is not regular.
pub fn is_regular(b: &CountingCoefficients) -> Result<bool> {
    let r = wht_inverse(b)?;
    if r.max_replication() > 1 {
        return Err(Error::NotIndicator {
            maxrep: r.max_replication(),
        });
    }
    Ok(regular_unchecked(b))
}

/// The fraction `1 - R` of an indicator fraction.
pub fn complement(r: &ReplicateVector) -> Result<ReplicateVector> {
    if r.max_replication() > 1 {
        return Err(Error::NotIndicator {
            maxrep: r.max_replication(),
        });
    }
    ReplicateVector::new(r.counts().iter().map(|&c| 1 - c).collect())
}

/// A factor permutation composed with a sign switch.
///
/// The image of a fraction `F` is `{ g(b) : b in F }` with
/// `g(b)_{perm[i]} = signs[i] * b_i`; equivalently `R'(a) = R(b)` with
/// `b_i = signs[i] * a_{perm[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl Symmetry {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = perm.len();
        validate_factors(n)?;
        if signs.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parameter(format!("{perm:?} is not a permutation")));
            }
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parameter(format!("signs {signs:?} must be +-1")));
        }
        Ok(Self { perm, signs })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect(), vec![1; n])
    }

    pub fn factors(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Mask of the point `b` with `b_i = signs[i] * a_{perm[i]}`.
    pub(crate) fn preimage(&self, a: usize) -> usize {
        let n = self.factors();
        let bit = |mask: usize, i: usize| mask >> (n - 1 - i) & 1;
        (0..n).fold(0, |acc, i| {
            let mut v = bit(a, self.perm[i]);
            if self.signs[i] < 0 {
                v ^= 1;
            }
            acc | v << (n - 1 - i)
        })
    }
}

pub fn apply_symmetry(r: &ReplicateVector, g: &Symmetry) -> Result<ReplicateVector> {
    if g.factors() != r.factors() {
        return Err(Error::Dimension {
            expected: r.factors(),
            found: g.factors(),
        });
    }
    let counts = (0..r.len()).map(|a| r.counts()[g.preimage(a)]).collect();
    ReplicateVector::new(counts)
}

/// Cross-tabulation of basis elements by support, total and maximum
/// replication.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub elements: usize,
    pub support_total: BTreeMap<(usize, u64), usize>,
    pub support_maxrep: BTreeMap<(usize, u32), usize>,
    pub maxrep_total: BTreeMap<(u32, u64), usize>,
}

impl Summary {
    pub fn from_fractions(fractions: &[ReplicateVector]) -> Self {
        let keys: Vec<(usize, u64, u32)> = fractions
            .par_iter()
            .map(|r| (r.support(), r.total(), r.max_replication()))
            .collect();
        let mut s = Summary {
            elements: keys.len(),
            ..Default::default()
        };
        for (supp, total, maxrep) in keys {
            *s.support_total.entry((supp, total)).or_default() += 1;
            *s.support_maxrep.entry((supp, maxrep)).or_default() += 1;
            *s.maxrep_total.entry((maxrep, total)).or_default() += 1;
        }
        s
    }

    pub fn supports(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.support_total.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }

    pub fn totals(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.support_total.keys().map(|k| k.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn maxreps(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.maxrep_total.keys().map(|k| k.0).collect();
        v.dedup();
        v
    }

    pub fn count_support_total(&self, support: usize, total: u64) -> usize {
        self.support_total
            .get(&(support, total))
            .copied()
            .unwrap_or(0)
    }

    pub fn count_support_maxrep(&self, support: usize, maxrep: u32) -> usize {
        self.support_maxrep
            .get(&(support, maxrep))
            .copied()
            .unwrap_or(0)
    }

    pub fn count_maxrep_total(&self, maxrep: u32, total: u64) -> usize {
        self.maxrep_total
            .get(&(maxrep, total))
            .copied()
            .unwrap_or(0)
    }
}

pub fn summarize(basis: &HilbertBasis) -> Summary {
    Summary::from_fractions(basis.elements())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::ExponentVector;

    fn term(s: &str, num: i64, shift: u32) -> (ExponentVector, Dyadic) {
        (ExponentVector::parse(s).unwrap(), Dyadic::new(num, shift))
    }

    #[test]
    fn full_design_transform() {
        let b = wht_forward(&ReplicateVector::full(4).unwrap());
        assert_eq!(b.b0(), Dyadic::new(1, 0));
        assert!(b.terms().all(|(a, _)| a == 0));
    }

    #[test]
    fn single_all_plus_point() {
        let r = ReplicateVector::unit(5, 31).unwrap();
        let b = wht_forward(&r);
        for alpha in 0..32 {
            assert_eq!(b.get(alpha), Dyadic::new(1, 5));
        }
        assert!(!is_oa_coeffs(&b, 1));
        assert!(!is_oa_projection(&r, 1));
    }

    #[test]
    fn inverse_examples() {
        let b = CountingCoefficients::from_terms(5, &[term("00000", 1, 1), term("11111", 1, 1)])
            .unwrap();
        let r = wht_inverse(&b).unwrap();
        assert_eq!(r.total(), 16);
        assert_eq!(r.max_replication(), 1);
        // Points with an even number of -1 coordinates.
        for (a, &c) in r.counts().iter().enumerate() {
            assert_eq!(c, ((5 - a.count_ones()) % 2 == 0) as u32);
        }
        let zero = CountingCoefficients::from_numerators(vec![0; 8]).unwrap();
        assert!(wht_inverse(&zero).unwrap().is_zero());
    }

    #[test]
    fn inverse_rejects_non_counting() {
        let half = CountingCoefficients::from_terms(3, &[term("000", 1, 1)]).unwrap();
        assert!(matches!(
            wht_inverse(&half),
            Err(Error::NotCountingFunction(_))
        ));
        let neg = CountingCoefficients::from_terms(2, &[term("01", 1, 0)]).unwrap();
        assert!(matches!(
            wht_inverse(&neg),
            Err(Error::NotCountingFunction(_))
        ));
    }

    #[test]
    fn regularity_examples() {
        let a = CountingCoefficients::from_terms(5, &[term("00000", 1, 1), term("11111", 1, 1)])
            .unwrap();
        assert!(is_regular(&a).unwrap());
        // i j h k l = factors 1..5: C_ijh, C_hkl, C_ijkl
        let b = CountingCoefficients::from_terms(
            5,
            &[
                term("00000", 1, 2),
                term("11100", 1, 2),
                term("00111", 1, 2),
                term("11011", 1, 2),
            ],
        )
        .unwrap();
        assert!(is_regular(&b).unwrap());
        let r = wht_inverse(&b).unwrap();
        assert_eq!(r.total(), 8);
        let c = CountingCoefficients::from_terms(
            5,
            &[
                term("00000", 1, 1),
                term("11100", 1, 2),
                term("11110", 1, 2),
                term("11101", 1, 2),
                term("11111", -1, 2),
            ],
        )
        .unwrap();
        assert_eq!(wht_inverse(&c).unwrap().max_replication(), 1);
        assert!(!is_regular(&c).unwrap());
    }

    #[test]
    fn regularity_requires_indicator() {
        let r = ReplicateVector::full(3).unwrap().scaled(2).unwrap();
        assert!(matches!(
            is_regular(&wht_forward(&r)),
            Err(Error::NotIndicator { maxrep: 2 })
        ));
    }

    #[test]
    fn complement_examples() {
        let full = ReplicateVector::full(3).unwrap();
        assert!(complement(&full).unwrap().is_zero());
        let r = ReplicateVector::new(vec![1, 0, 0, 1]).unwrap();
        assert_eq!(complement(&complement(&r).unwrap()).unwrap(), r);
        let rep = ReplicateVector::new(vec![2, 0, 0, 2]).unwrap();
        assert!(matches!(complement(&rep), Err(Error::NotIndicator { .. })));
    }

    #[test]
    fn zero_vector_classification() {
        let c = classify(&ReplicateVector::zeros(4).unwrap());
        assert_eq!((c.support, c.total, c.maxrep), (0, 0, 0));
        assert_eq!(c.resolution, Resolution::Full);
        assert_eq!(c.is_regular, Some(false));
    }

    #[test]
    fn symmetry_validation() {
        assert!(Symmetry::new(vec![0, 0, 1], vec![1, 1, 1]).is_err());
        assert!(Symmetry::new(vec![0, 2, 1], vec![1, 0, 1]).is_err());
        assert!(Symmetry::new(vec![0, 1], vec![1, 1, 1]).is_err());
        let g = Symmetry::identity(4).unwrap();
        let r = ReplicateVector::new((0..16).collect()).unwrap();
        assert_eq!(apply_symmetry(&r, &g).unwrap(), r);
        let full = ReplicateVector::full(4).unwrap();
        let g = Symmetry::new(vec![2, 0, 3, 1], vec![-1, 1, -1, -1]).unwrap();
        assert_eq!(apply_symmetry(&full, &g).unwrap(), full);
    }

    #[test]
    fn sign_switch_of_single_point() {
        // Flipping every sign sends the all-minus point to the all-plus one.
        let r = ReplicateVector::unit(3, 0).unwrap();
        let g = Symmetry::new(vec![0, 1, 2], vec![-1, -1, -1]).unwrap();
        assert_eq!(
            apply_symmetry(&r, &g).unwrap(),
            ReplicateVector::unit(3, 7).unwrap()
        );
        // Swapping two factors moves "-+-" (index 2) to "+--" (index 4).
        let r = ReplicateVector::unit(3, 2).unwrap();
        let g = Symmetry::new(vec![1, 0, 2], vec![1, 1, 1]).unwrap();
        assert_eq!(
            apply_symmetry(&r, &g).unwrap(),
            ReplicateVector::unit(3, 4).unwrap()
        );
    }

    #[test]
    fn empty_summary() {
        let s = Summary::from_fractions(&[]);
        assert_eq!(s.elements, 0);
        assert!(s.support_total.is_empty());
        assert_eq!(s.count_support_total(8, 8), 0);
    }
}
