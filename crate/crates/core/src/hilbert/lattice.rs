//! Exact integer lattice arithmetic: kernel lattices and echelon forms.

use crate::error::{Error, Result};

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn lin(a: i128, x: i128, b: i128, y: i128) -> Result<i128> {
    a.checked_mul(x)
        .and_then(|p| b.checked_mul(y).and_then(|q| p.checked_add(q)))
        .ok_or(Error::Overflow("lattice reduction"))
}

/// Replaces rows `p` and `q` by unimodular combinations so that column
/// `c` of row `q` becomes zero and row `p` holds the gcd.
fn gcd_rows(m: &mut [Vec<i128>], p: usize, q: usize, c: usize) -> Result<()> {
    let (a, b) = (m[p][c], m[q][c]);
    if b == 0 {
        return Ok(());
    }
    let (g, s, t) = ext_gcd(a, b);
    let (u, v) = (-b / g, a / g);
    for j in 0..m[p].len() {
        let (x, y) = (m[p][j], m[q][j]);
        m[p][j] = lin(s, x, t, y)?;
        m[q][j] = lin(u, x, v, y)?;
    }
    Ok(())
}

fn sub_multiple(m: &mut [Vec<i128>], target: usize, src: usize, f: i128) -> Result<()> {
    if f == 0 {
        return Ok(());
    }
    for j in 0..m[target].len() {
        m[target][j] = lin(1, m[target][j], -f, m[src][j])?;
    }
    Ok(())
}

/// A basis of the integer kernel `{x in Z^N : A x = 0}`, where `columns[j]`
/// is column `j` of `A`. The basis spans the full (saturated) kernel
/// lattice.
pub(crate) fn kernel_basis(columns: &[Vec<i64>], constraints: usize) -> Result<Vec<Vec<i128>>> {
    let n = columns.len();
    // Rows of [A^t | I]; unimodular row operations keep the right block a
    // basis change, so rows whose left block vanishes span the kernel.
    let mut m: Vec<Vec<i128>> = columns
        .iter()
        .enumerate()
        .map(|(i, col)| {
            let mut row: Vec<i128> = col.iter().map(|&x| x as i128).collect();
            row.extend((0..n).map(|j| (i == j) as i128));
            row
        })
        .collect();
    let mut rank = 0;
    for c in 0..constraints {
        let Some(p) = (rank..n).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for q in rank + 1..n {
            gcd_rows(&mut m, rank, q, c)?;
        }
        rank += 1;
    }
    Ok(m[rank..]
        .iter()
        .map(|row| row[constraints..].to_vec())
        .collect())
}

/// Row echelon form of a lattice basis. Pivot columns are chosen greedily
/// in increasing order, preferring columns where the gcd of the remaining
/// rows is 1, so the pivot block is unimodular whenever this ordering finds
/// one.
pub(crate) struct Echelon {
    pub rows: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(mut rows: Vec<Vec<i128>>) -> Result<Self> {
        let r = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        let mut pivots = Vec::with_capacity(r);
        let mut deferred = Vec::new();
        let mut row = 0;
        for pass in 0..2 {
            let candidates: Vec<usize> = if pass == 0 {
                (0..width).collect()
            } else {
                std::mem::take(&mut deferred)
            };
            for c in candidates {
                if row == r {
                    break;
                }
                if rows[row..].iter().all(|v| v[c] == 0) {
                    continue;
                }
                let mut g = 0i128;
                for v in &rows[row..] {
                    g = ext_gcd(g, v[c]).0;
                }
                if pass == 0 && g != 1 {
                    deferred.push(c);
                    continue;
                }
                let p = (row..r).find(|&i| rows[i][c] != 0).expect("nonzero entry");
                rows.swap(row, p);
                for q in row + 1..r {
                    gcd_rows(&mut rows, row, q, c)?;
                }
                if rows[row][c] < 0 {
                    rows[row].iter_mut().for_each(|x| *x = -*x);
                }
                pivots.push(c);
                row += 1;
            }
        }
        if row != r {
            return Err(Error::Parameter("lattice basis is rank deficient".into()));
        }
        // Reduce entries above each pivot into [0, pivot).
        for i in (0..r).rev() {
            let c = pivots[i];
            let d = rows[i][c];
            for t in 0..i {
                let f = rows[t][c].div_euclid(d);
                sub_multiple(&mut rows, t, i, f)?;
            }
        }
        Ok(Self { rows, pivots })
    }

    pub fn pivot_value(&self, i: usize) -> i128 {
        self.rows[i][self.pivots[i]]
    }

    pub fn is_unimodular(&self) -> bool {
        (0..self.rows.len()).all(|i| self.pivot_value(i) == 1)
    }

    /// The lattice vector whose pivot coordinates equal `y`, if any.
    pub fn lift(&self, y: &[i128]) -> Result<Option<Vec<i128>>> {
        let r = self.rows.len();
        let mut z = vec![0i128; r];
        for j in 0..r {
            let c = self.pivots[j];
            let mut rest = y[j];
            for (zi, row) in z[..j].iter().zip(&self.rows) {
                rest = lin(1, rest, -zi, row[c])?;
            }
            let d = self.pivot_value(j);
            if rest % d != 0 {
                return Ok(None);
            }
            z[j] = rest / d;
        }
        let width = self.rows[0].len();
        let mut x = vec![0i128; width];
        for (i, &zi) in z.iter().enumerate() {
            for (xj, &rj) in x.iter_mut().zip(&self.rows[i]) {
                *xj = lin(1, *xj, zi, rj)?;
            }
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(columns: &[Vec<i64>], x: &[i128]) -> Vec<i128> {
        let k = columns[0].len();
        (0..k)
            .map(|r| columns.iter().zip(x).map(|(c, &v)| c[r] as i128 * v).sum())
            .collect()
    }

    #[test]
    fn kernel_of_small_system() {
        // x0 - x1 + x2 - x3 = 0, x0 + x1 - x2 - x3 = 0
        let columns = vec![vec![1, 1], vec![-1, 1], vec![1, -1], vec![-1, -1]];
        let k = kernel_basis(&columns, 2).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&columns, v).iter().all(|&x| x == 0));
        }
        let e = Echelon::new(k).unwrap();
        assert!(e.is_unimodular());
        assert_eq!(e.lift(&[1, 0]).unwrap().unwrap(), vec![1, 0, 0, 1]);
    }

    #[test]
    fn non_unimodular_lift() {
        let e = Echelon::new(vec![vec![2, 3]]).unwrap();
        assert_eq!(e.pivots, vec![0]);
        assert!(!e.is_unimodular());
        assert_eq!(e.lift(&[1]).unwrap(), None);
        assert_eq!(e.lift(&[4]).unwrap(), Some(vec![4, 6]));
    }

    #[test]
    fn ext_gcd_signs() {
        for (a, b) in [(4, 6), (-4, 6), (0, -3), (7, 0), (-5, -15)] {
            let (g, s, t) = ext_gcd(a, b);
            assert!(g >= 0);
            assert_eq!(s * a + t * b, g);
        }
    }
}
