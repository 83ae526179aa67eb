//! Small dense integer matrices: products and fraction-free determinants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: Vec<Vec<i64>>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let width = rows.first().map(Vec::len).unwrap_or(0);
        assert!(rows.iter().all(|r| r.len() == width), "ragged matrix");
        IntMatrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        IntMatrix { rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map(Vec::len).unwrap_or(0)
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols(), other.nrows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                (0..other.ncols())
                    .map(|j| row.iter().enumerate().map(|(k, a)| a * other.rows[k][j]).sum())
                    .collect()
            })
            .collect();
        IntMatrix { rows }
    }

    /// Exact determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.nrows();
        assert_eq!(n, self.ncols(), "determinant of a non-square matrix");
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Leibniz expansion over all permutations, independent of elimination.
    fn leibniz(m: &IntMatrix) -> i64 {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.nrows();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                let s = if inversions % 2 == 0 { 1 } else { -1 };
                s * (0..n).map(|i| m.get(i, p[i])).product::<i64>()
            })
            .sum()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(IntMatrix::identity(4).determinant(), BigInt::one());
        let swap = IntMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(swap.determinant(), BigInt::from(-1));
        let singular = IntMatrix::from_rows(vec![vec![1, 2], vec![2, 4]]);
        assert!(singular.determinant().is_zero());
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(n in 1usize..5, entries in prop::collection::vec(-4i64..5, 16)) {
            let rows = (0..n).map(|i| entries[i * n..i * n + n].to_vec()).collect();
            let m = IntMatrix::from_rows(rows);
            prop_assert_eq!(m.determinant(), BigInt::from(leibniz(&m)));
        }
    }
}
