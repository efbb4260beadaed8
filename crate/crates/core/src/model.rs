//! The model matrix of monomial evaluations restricted to the interactions
//! of order `1..=m`.

use crate::design::{exponent_masks, monomial_sign, validate_strength, ExponentVector};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Dense `2^n x k` matrix with entry `(a, alpha) = X^alpha(a)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelMatrix {
    n: usize,
    m: usize,
    exponents: Vec<usize>,
    entries: Vec<i8>,
}

pub fn build_model_matrix(n: usize, m: usize) -> Result<ModelMatrix> {
    validate_strength(n, m)?;
    let exponents: Vec<usize> = exponent_masks(n, m).collect();
    let k = exponents.len();
    let mut entries = Vec::with_capacity(k << n);
    for point in 0..1usize << n {
        entries.extend(exponents.iter().map(|&alpha| monomial_sign(alpha, point)));
    }
    Ok(ModelMatrix {
        n,
        m,
        exponents,
        entries,
    })
}

impl ModelMatrix {
    /// Wraps explicit entries (row-major, canonical orders). Entries must be
    /// `-1` or `+1`; no other property is checked here.
    pub fn from_entries(n: usize, m: usize, entries: Vec<i8>) -> Result<Self> {
        validate_strength(n, m)?;
        let exponents: Vec<usize> = exponent_masks(n, m).collect();
        let want = exponents.len() << n;
        if entries.len() != want {
            return Err(Error::Dimension {
                expected: want,
                found: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::Parameter(format!("model matrix entry {bad}")));
        }
        Ok(Self {
            n,
            m,
            exponents,
            entries,
        })
    }

    pub fn factors(&self) -> usize {
        self.n
    }

    pub fn strength(&self) -> usize {
        self.m
    }

    pub fn rows(&self) -> usize {
        1 << self.n
    }

    pub fn cols(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> Vec<ExponentVector> {
        self.exponents
            .iter()
            .map(|&a| ExponentVector::from_mask(self.n, a).expect("valid mask"))
            .collect()
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        let k = self.cols();
        &self.entries[row * k..(row + 1) * k]
    }

    pub fn column(&self, col: usize) -> Vec<i8> {
        (0..self.rows()).map(|r| self.get(r, col)).collect()
    }

    /// The `k x 2^n` constraint matrix `M^t` handed to the cone solver.
    pub fn transposed(&self) -> Vec<Vec<i8>> {
        (0..self.cols()).map(|c| self.column(c)).collect()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::new(
            self.rows(),
            self.cols(),
            self.entries.iter().map(|&e| e as i64).collect(),
        )
        .expect("consistent dimensions")
    }
}

/// Outcome of [`verify_matrix`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixReport {
    pub zero_column_sums: bool,
    pub orthogonal_columns: bool,
    pub rank: usize,
    pub full_rank: bool,
    pub failures: Vec<String>,
}

impl MatrixReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_matrix(matrix: &ModelMatrix) -> MatrixReport {
    let k = matrix.cols();
    let cols: Vec<Vec<i8>> = (0..k).map(|c| matrix.column(c)).collect();
    let mut failures = Vec::new();

    let mut zero_column_sums = true;
    for (c, col) in cols.iter().enumerate() {
        let s: i64 = col.iter().map(|&e| e as i64).sum();
        if s != 0 {
            zero_column_sums = false;
            failures.push(format!("column {c} sums to {s}"));
        }
    }

    let mut orthogonal_columns = true;
    for i in 0..k {
        for j in i + 1..k {
            let dot: i64 = cols[i]
                .iter()
                .zip(&cols[j])
                .map(|(&a, &b)| (a * b) as i64)
                .sum();
            if dot != 0 {
                orthogonal_columns = false;
                failures.push(format!("columns {i} and {j} have inner product {dot}"));
            }
        }
    }

    let rank = rank_lower_bound(matrix);
    let full_rank = rank == k;
    if !full_rank {
        failures.push(format!("rank {rank} below column count {k}"));
    }

    MatrixReport {
        zero_column_sums,
        orthogonal_columns,
        rank,
        full_rank,
        failures,
    }
}

const RANK_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % RANK_PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Rank modulo a large prime. It never exceeds the rational rank, so it is
/// exact whenever it reaches the column count.
fn rank_lower_bound(matrix: &ModelMatrix) -> usize {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            matrix
                .row(r)
                .iter()
                .map(|&e| if e < 0 { RANK_PRIME - 1 } else { e as u64 })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = pow_mod(a[rank][c], RANK_PRIME - 2);
        for r in rank + 1..rows {
            if a[r][c] == 0 {
                continue;
            }
            let f = mul_mod(a[r][c], inv);
            let (top, bottom) = a.split_at_mut(r);
            for (x, &p) in bottom[0][c..cols].iter_mut().zip(&top[rank][c..cols]) {
                *x = (*x + RANK_PRIME - mul_mod(f, p)) % RANK_PRIME;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1_FIRST_ROW: [i8; 25] = [
        -1, -1, 1, -1, 1, 1, -1, -1, 1, 1, -1, 1, -1, -1, -1, 1, 1, -1, 1, -1, -1, 1, -1, -1, -1,
    ];

    #[test]
    fn five_three_first_row() {
        let m = build_model_matrix(5, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (32, 25));
        assert_eq!(m.row(0), &TABLE1_FIRST_ROW);
    }

    #[test]
    fn five_two_last_row_all_ones() {
        let m = build_model_matrix(5, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (32, 15));
        assert!(m.row(31).iter().all(|&e| e == 1));
    }

    #[test]
    fn two_one_columns() {
        let m = build_model_matrix(2, 1).unwrap();
        assert_eq!(m.column(0), vec![-1, 1, -1, 1]);
        assert_eq!(m.column(1), vec![-1, -1, 1, 1]);
    }

    #[test]
    fn verify_passes() {
        let r = verify_matrix(&build_model_matrix(5, 2).unwrap());
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.rank, 15);
        let r = verify_matrix(&build_model_matrix(5, 3).unwrap());
        assert!(r.passed());
        assert_eq!(r.rank, 25);
        let r = verify_matrix(&build_model_matrix(6, 6).unwrap());
        assert_eq!(r.rank, 63);
    }

    #[test]
    fn flipped_entry_detected() {
        let good = build_model_matrix(5, 2).unwrap();
        let mut entries: Vec<i8> = (0..32).flat_map(|r| good.row(r).to_vec()).collect();
        entries[7] = -entries[7];
        let bad = ModelMatrix::from_entries(5, 2, entries).unwrap();
        let r = verify_matrix(&bad);
        assert!(!r.orthogonal_columns);
        assert!(!r.zero_column_sums);
        assert!(!r.passed());
    }

    #[test]
    fn full_design_is_feasible() {
        for (n, m) in [(3, 2), (5, 2), (5, 3), (6, 2)] {
            let mat = build_model_matrix(n, m).unwrap();
            for c in 0..mat.cols() {
                assert_eq!(mat.column(c).iter().map(|&e| e as i32).sum::<i32>(), 0);
            }
        }
    }

    #[test]
    fn binary_order_does_not_group_by_weight() {
        // Under ascending binary order the strength-1 matrix is not a prefix
        // of the strength-2 matrix.
        let m1 = build_model_matrix(5, 1).unwrap();
        let m2 = build_model_matrix(5, 2).unwrap();
        let prefix: Vec<Vec<i8>> = (0..m1.cols()).map(|c| m2.column(c)).collect();
        let want: Vec<Vec<i8>> = (0..m1.cols()).map(|c| m1.column(c)).collect();
        assert_ne!(prefix, want);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(build_model_matrix(5, 0), Err(Error::Parameter(_))));
        assert!(matches!(build_model_matrix(3, 4), Err(Error::Parameter(_))));
        assert!(matches!(
            build_model_matrix(17, 1),
            Err(Error::SizeLimit(_))
        ));
    }
}
