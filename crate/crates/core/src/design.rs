//! The full factorial design `{-1,+1}^n`, exponent vectors and monomials.
//!
//! Points and exponents are both stored as `n`-bit masks read left to right:
//! bit `i` from the left of a point is set when coordinate `i` is `+1`, and
//! bit `i` of an exponent is set when factor `i` takes part in the
//! interaction. Ascending mask order gives the canonical orders for both.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported number of factors.
pub const MAX_FACTORS: usize = 16;

fn check_factors(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FACTORS {
        return Err(Error::SizeLimit(format!(
            "number of factors must be in 1..={MAX_FACTORS}, got {n}"
        )));
    }
    Ok(())
}

fn check_strength(n: usize, m: usize) -> Result<()> {
    check_factors(n)?;
    if m == 0 || m > n {
        return Err(Error::Parameter(format!(
            "strength must be in 1..={n}, got {m}"
        )));
    }
    Ok(())
}

/// A point of the full factorial design.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DesignPoint {
    n: u8,
    mask: u32,
}

impl DesignPoint {
    /// The point with canonical index `index` in a design with `n` factors.
    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        check_factors(n)?;
        if index >= 1 << n {
            return Err(Error::Parameter(format!(
                "point index {index} out of range for {n} factors"
            )));
        }
        Ok(Self {
            n: n as u8,
            mask: index as u32,
        })
    }

    pub fn from_coords(coords: &[i8]) -> Result<Self> {
        check_factors(coords.len())?;
        let mut mask = 0u32;
        for (i, &c) in coords.iter().enumerate() {
            mask <<= 1;
            match c {
                1 => mask |= 1,
                -1 => {}
                _ => {
                    return Err(Error::Parameter(format!(
                        "coordinate {i} is {c}, expected -1 or +1"
                    )))
                }
            }
        }
        Ok(Self {
            n: coords.len() as u8,
            mask,
        })
    }

    pub fn factors(&self) -> usize {
        self.n as usize
    }

    /// Position in the canonical point order.
    pub fn index(&self) -> usize {
        self.mask as usize
    }

    /// Coordinate `i` (0-based, from the left).
    pub fn coord(&self, i: usize) -> i8 {
        if self.mask >> (self.n as usize - 1 - i) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn coords(&self) -> Vec<i8> {
        (0..self.factors()).map(|i| self.coord(i)).collect()
    }
}

impl fmt::Display for DesignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.factors() {
            f.write_str(if self.coord(i) == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for DesignPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DesignPoint({self})")
    }
}

/// An exponent `alpha` in `{0,1}^n`, i.e. an interaction between factors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector {
    n: u8,
    weight: u8,
    mask: u32,
}

impl ExponentVector {
    pub fn from_mask(n: usize, mask: usize) -> Result<Self> {
        check_factors(n)?;
        if mask >= 1 << n {
            return Err(Error::Parameter(format!(
                "exponent mask {mask:#b} out of range for {n} factors"
            )));
        }
        Ok(Self {
            n: n as u8,
            weight: mask.count_ones() as u8,
            mask: mask as u32,
        })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_factors(bits.len())?;
        let mut mask = 0usize;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Error::Parameter(format!("exponent bit {i} is {b}")));
            }
            mask = mask << 1 | b as usize;
        }
        Self::from_mask(bits.len(), mask)
    }

    /// Parses a bit string such as `"00011"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parameter(format!("bad exponent string {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_bits(&bits)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    pub fn factors(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> usize {
        self.mask as usize
    }

    pub fn weight(&self) -> usize {
        self.weight as usize
    }

    pub fn bit(&self, i: usize) -> u8 {
        (self.mask >> (self.n as usize - 1 - i) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.factors()).map(|i| self.bit(i)).collect()
    }

    /// Componentwise sum mod 2; `X^a * X^b = X^(a xor b)` on the design.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.factors(),
                found: other.factors(),
            });
        }
        Self::from_mask(self.factors(), (self.mask ^ other.mask) as usize)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.factors() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExponentVector({self})")
    }
}

/// Sign of the monomial with exponent mask `alpha` at the point with mask
/// `point`: `-1` raised to the number of factors in `alpha` at level `-1`.
#[inline]
pub(crate) fn monomial_sign(alpha: usize, point: usize) -> i8 {
    if (alpha & !point).count_ones() & 1 == 0 {
        1
    } else {
        -1
    }
}

/// All `2^n` points in canonical order: all `-1` first, rightmost coordinate
/// varying fastest.
pub fn enumerate_points(n: usize) -> Result<Vec<DesignPoint>> {
    check_factors(n)?;
    Ok((0..1u32 << n)
        .map(|mask| DesignPoint { n: n as u8, mask })
        .collect())
}

/// All exponents of weight `1..=m`, in ascending binary order.
pub fn enumerate_exponents(n: usize, m: usize) -> Result<Vec<ExponentVector>> {
    check_strength(n, m)?;
    Ok(exponent_masks(n, m)
        .map(|mask| ExponentVector {
            n: n as u8,
            weight: mask.count_ones() as u8,
            mask: mask as u32,
        })
        .collect())
}

pub(crate) fn exponent_masks(n: usize, m: usize) -> impl Iterator<Item = usize> {
    (1usize..1 << n).filter(move |a| a.count_ones() as usize <= m)
}

/// `X^alpha(a)`, the product of the coordinates of `a` selected by `alpha`.
pub fn eval_monomial(alpha: &ExponentVector, a: &DesignPoint) -> Result<i8> {
    if alpha.n != a.n {
        return Err(Error::Dimension {
            expected: alpha.factors(),
            found: a.factors(),
        });
    }
    Ok(monomial_sign(alpha.mask(), a.index()))
}

pub(crate) fn validate_strength(n: usize, m: usize) -> Result<()> {
    check_strength(n, m)
}

pub(crate) fn validate_factors(n: usize) -> Result<()> {
    check_factors(n)
}
