//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use crate::expr::Q;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Q>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{c : A c = 0}`, one vector per free column, with a 1 in that
/// column.
pub fn null_space(mut rows: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    let pivots = rref(&mut rows, cols);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::q_int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q_int(x)).collect()).collect()
    }

    #[test]
    fn null_space_of_rank_one() {
        let ns = null_space(m(&[&[1, 2, 3], &[2, 4, 6]]), 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot: Q = v.iter().zip([1, 2, 3]).map(|(a, b)| a * q_int(b)).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn full_rank_has_trivial_null_space() {
        assert!(null_space(m(&[&[1, 1], &[1, -1]]), 2).is_empty());
        assert_eq!(null_space(Vec::new(), 2).len(), 2);
    }
}
