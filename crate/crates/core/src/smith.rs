//! Smith normal form over the integers (diagonal only).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Nonzero diagonal entries `d_1 | d_2 | ...` of the Smith normal form,
/// all positive. Their count is the rank of the matrix.
pub fn smith_diagonal(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let Some((pr, pc)) = min_entry(&m, t) else {
            break;
        };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if m[r][t].is_zero() {
                    continue;
                }
                let q = m[r][t].div_floor(&m[t][t]);
                for c in t..cols {
                    let v = &m[t][c] * &q;
                    m[r][c] -= v;
                }
                if !m[r][t].is_zero() {
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if m[t][c].is_zero() {
                    continue;
                }
                let q = m[t][c].div_floor(&m[t][t]);
                for r in t..rows {
                    let v = &m[r][t] * &q;
                    m[r][c] -= v;
                }
                if !m[t][c].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder survived; move the smallest entry of row/column
                // t onto the diagonal and sweep again.
                let (mut br, mut bc) = (t, t);
                for r in t..rows {
                    if !m[r][t].is_zero() && m[r][t].abs() < m[br][bc].abs() {
                        (br, bc) = (r, t);
                    }
                }
                for c in t..cols {
                    if !m[t][c].is_zero() && m[t][c].abs() < m[br][bc].abs() {
                        (br, bc) = (t, c);
                    }
                }
                m.swap(t, br);
                for row in m.iter_mut() {
                    row.swap(t, bc);
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let offender = (t + 1..rows).find(|&r| {
                (t + 1..cols).any(|c| !(&m[r][c] % &m[t][t]).is_zero())
            });
            match offender {
                Some(r) => {
                    for c in t..cols {
                        let v = m[r][c].clone();
                        m[t][c] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

fn min_entry(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in m.iter().enumerate().skip(t) {
        for (c, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.map_or(true, |(br, bc)| v.abs() < m[br][bc].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn ints(d: &[BigInt]) -> Vec<i64> {
        d.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(ints(&smith_diagonal(big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]))), vec![2, 6, 12]);
        assert_eq!(ints(&smith_diagonal(big(&[&[2, 0], &[0, 3]]))), vec![1, 6]);
        assert!(smith_diagonal(big(&[&[0, 0], &[0, 0]])).is_empty());
        assert!(smith_diagonal(Vec::new()).is_empty());
        assert_eq!(ints(&smith_diagonal(big(&[&[1, 1, 1]]))), vec![1]);
    }

    // Determinantal divisors of a 2x2 matrix: d1 = gcd of entries,
    // d1*d2 = |det|.
    proptest! {
        #[test]
        fn two_by_two_divisors(a in -9i64..10, b in -9i64..10, c in -9i64..10, d in -9i64..10) {
            let diag = smith_diagonal(big(&[&[a, b], &[c, d]]));
            let g = a.gcd(&b).gcd(&c).gcd(&d);
            let det = (a * d - b * c).abs();
            match diag.len() {
                0 => prop_assert_eq!(g, 0),
                1 => { prop_assert_eq!(ints(&diag)[0], g); prop_assert_eq!(det, 0); }
                _ => {
                    let v = ints(&diag);
                    prop_assert_eq!(v[0], g);
                    prop_assert_eq!(v[0] * v[1], det);
                    prop_assert_eq!(v[1] % v[0], 0);
                }
            }
        }
    }
}
