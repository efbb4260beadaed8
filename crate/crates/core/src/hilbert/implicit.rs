//! Detection of coordinates that vanish on every solution.
//!
//! Such coordinates make the cone lower dimensional than the solution
//! lattice, which inflates every intermediate basis of the lifting
//! procedure. Each undecided coordinate `i` gets one exact phase-one simplex
//! run on `{A x = 0, x >= 0, x_i = 1}`; a feasible point also settles every
//! coordinate in its support.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Result;

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = BigRational::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (x, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Minimizes the sum of the artificial columns `real..cols` with
    /// Bland's rule; returns the optimal value.
    fn phase_one(&mut self, real: usize) -> BigRational {
        loop {
            // Reduced cost of column j: -(sum of entries over rows whose
            // basic variable is artificial) plus 1 if j itself is artificial.
            let mut entering = None;
            for j in 0..self.cols {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut cost = if j >= real {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                for (i, &b) in self.basis.iter().enumerate() {
                    if b >= real {
                        cost -= &self.rows[i][j];
                    }
                }
                if cost.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                break;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c].is_positive() {
                    let ratio = &self.rhs[i] / &self.rows[i][c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (r, _) = leave.expect("phase one is bounded below");
            self.pivot(r, c);
        }
        self.basis
            .iter()
            .zip(&self.rhs)
            .filter(|(&b, _)| b >= real)
            .fold(BigRational::zero(), |acc, (_, v)| acc + v)
    }
}

/// A solution of `A x = 0, x >= 0` with `x_target = 1`, if one exists.
fn feasible_point(
    columns: &[Vec<i64>],
    constraints: usize,
    target: usize,
) -> Option<Vec<BigRational>> {
    let n = columns.len();
    let m = constraints + 1;
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![BigRational::zero(); cols];
        for (j, col) in columns.iter().enumerate() {
            let a = if r < constraints {
                col[r]
            } else {
                (j == target) as i64
            };
            row[j] = BigRational::from_integer(a.into());
        }
        row[n + r] = BigRational::one();
        rows.push(row);
        rhs.push(if r < constraints {
            BigRational::zero()
        } else {
            BigRational::one()
        });
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..cols).collect(),
        cols,
    };
    if !t.phase_one(n).is_zero() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (&b, v) in t.basis.iter().zip(&t.rhs) {
        if b < n {
            x[b] = v.clone();
        }
    }
    Some(x)
}

/// Positions (into `columns`) of coordinates that are zero in every
/// nonnegative solution of `A x = 0`.
pub(crate) fn implicit_zeros(columns: &[Vec<i64>], constraints: usize) -> Result<Vec<usize>> {
    let n = columns.len();
    let mut can_be_positive = vec![false; n];
    let mut zeros = Vec::new();
    for i in 0..n {
        if can_be_positive[i] {
            continue;
        }
        match feasible_point(columns, constraints, i) {
            Some(x) => {
                for (flag, v) in can_be_positive.iter_mut().zip(&x) {
                    if v.is_positive() {
                        *flag = true;
                    }
                }
            }
            None => zeros.push(i),
        }
    }
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detects_forced_zero() {
        // x0 - x1 = 0 and x0 + x1 + ... : with x2 - x0 - x1 = 0 all free.
        // Here: x0 + x1 = 0 forces both to zero; x2 - x3 = 0 allows both.
        let columns = vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, -1]];
        assert_eq!(implicit_zeros(&columns, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn balanced_system_has_none() {
        let columns = vec![vec![-1, -1], vec![1, -1], vec![-1, 1], vec![1, 1]];
        assert!(implicit_zeros(&columns, 2).unwrap().is_empty());
    }
}
