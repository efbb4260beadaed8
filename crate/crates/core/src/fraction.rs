//! Replicate vectors (fractions with replication) and their exact counting
//! polynomial coefficients.

use std::fmt;

use crate::design::{validate_factors, ExponentVector, MAX_FACTORS};
use crate::error::{Error, Result};

/// Number of replications of each design point, in canonical point order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ReplicateVector {
    n: usize,
    counts: Vec<u32>,
}

impl ReplicateVector {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        let n = factors_for_len(counts.len())?;
        Ok(Self { n, counts })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        validate_factors(n)?;
        Ok(Self {
            n,
            counts: vec![0; 1 << n],
        })
    }

    /// The full factorial design, every point once.
    pub fn full(n: usize) -> Result<Self> {
        validate_factors(n)?;
        Ok(Self {
            n,
            counts: vec![1; 1 << n],
        })
    }

    pub fn unit(n: usize, index: usize) -> Result<Self> {
        let mut r = Self::zeros(n)?;
        if index >= r.counts.len() {
            return Err(Error::Parameter(format!(
                "point index {index} out of range"
            )));
        }
        r.counts[index] = 1;
        Ok(r)
    }

    pub fn factors(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<u32> {
        self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn support(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn max_replication(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`.
    pub fn is_dominated_by(&self, other: &Self) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found: other.len(),
            });
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("replicate sum")))
            .collect::<Result<_>>()?;
        Ok(Self { n: self.n, counts })
    }

    pub fn scaled(&self, k: u32) -> Result<Self> {
        let counts = self
            .counts
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("replicate scaling")))
            .collect::<Result<_>>()?;
        Ok(Self { n: self.n, counts })
    }
}

impl fmt::Display for ReplicateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn factors_for_len(len: usize) -> Result<usize> {
    if !len.is_power_of_two() || len < 2 {
        return Err(Error::Parameter(format!(
            "vector length {len} is not 2^n for n >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_FACTORS {
        return Err(Error::SizeLimit(format!("vector length {len} too large")));
    }
    Ok(n)
}

/// An exact rational of the form `num / 2^shift`, kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic {
    num: i64,
    shift: u32,
}

impl Dyadic {
    pub fn new(num: i64, shift: u32) -> Self {
        let mut d = Self { num, shift };
        d.reduce();
        d
    }

    pub const ZERO: Dyadic = Dyadic { num: 0, shift: 0 };

    fn reduce(&mut self) {
        if self.num == 0 {
            self.shift = 0;
            return;
        }
        let tz = self.num.trailing_zeros().min(self.shift);
        self.num >>= tz;
        self.shift -= tz;
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        1i64 << self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn abs(&self) -> Self {
        Self {
            num: self.num.abs(),
            shift: self.shift,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.denominator())
        }
    }
}

/// Coefficients `b_alpha` of the counting polynomial, indexed by exponent
/// mask over all of `{0,1}^n`. Stored as numerators over the common
/// denominator `2^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CountingCoefficients {
    n: usize,
    numerators: Vec<i64>,
}

impl CountingCoefficients {
    /// Builds coefficients from numerators over `2^n`.
    pub fn from_numerators(numerators: Vec<i64>) -> Result<Self> {
        let n = factors_for_len(numerators.len())?;
        Ok(Self { n, numerators })
    }

    /// Builds coefficients from `(exponent, value)` pairs; unspecified
    /// coefficients are zero. Each value must be a multiple of `2^-n`.
    pub fn from_terms(n: usize, terms: &[(ExponentVector, Dyadic)]) -> Result<Self> {
        validate_factors(n)?;
        let mut numerators = vec![0i64; 1 << n];
        for (alpha, b) in terms {
            if alpha.factors() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: alpha.factors(),
                });
            }
            if b.shift as usize > n {
                return Err(Error::NotCountingFunction(format!(
                    "coefficient {b} has denominator larger than 2^{n}"
                )));
            }
            let scaled = b
                .num
                .checked_shl(n as u32 - b.shift)
                .ok_or(Error::Overflow("coefficient scaling"))?;
            numerators[alpha.mask()] = scaled;
        }
        Ok(Self { n, numerators })
    }

    pub fn factors(&self) -> usize {
        self.n
    }

    /// Numerators over `2^n`, by exponent mask.
    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn get(&self, alpha_mask: usize) -> Dyadic {
        Dyadic::new(self.numerators[alpha_mask], self.n as u32)
    }

    pub fn coefficient(&self, alpha: &ExponentVector) -> Result<Dyadic> {
        if alpha.factors() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: alpha.factors(),
            });
        }
        Ok(self.get(alpha.mask()))
    }

    pub fn b0(&self) -> Dyadic {
        self.get(0)
    }

    /// Nonzero terms in canonical exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Dyadic)> + '_ {
        self.numerators
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(a, _)| (a, self.get(a)))
    }
}
