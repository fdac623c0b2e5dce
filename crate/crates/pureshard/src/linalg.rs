//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::rational::{zero, Rational};

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : row . x = 0 for every row}`.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![zero(); ncols];
            v[f] = crate::rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the row space of `rows`.
pub fn in_span(rows: &[Vec<Rational>], v: &[Rational], ncols: usize) -> bool {
    let base = rank(rows, ncols);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(&ext, ncols) == base
}

/// Whether the row space of `small` is contained in the row space of `big`.
pub fn span_contains(big: &[Vec<Rational>], small: &[Vec<Rational>], ncols: usize) -> bool {
    let base = rank(big, ncols);
    let mut ext = big.to_vec();
    ext.extend(small.iter().cloned());
    rank(&ext, ncols) == base
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{dot, vec_from_ints};

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![vec_from_ints(&[1, -1, 0, 0]), vec_from_ints(&[0, 1, -1, 0]), vec_from_ints(&[1, 0, -1, 0])];
        assert_eq!(rank(&rows, 4), 2);
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert!(dot(r, v).is_zero());
            }
        }
    }

    #[test]
    fn spans() {
        let rows = vec![vec_from_ints(&[1, 0, 0]), vec_from_ints(&[0, 1, 0])];
        assert!(in_span(&rows, &vec_from_ints(&[3, -2, 0]), 3));
        assert!(!in_span(&rows, &vec_from_ints(&[0, 0, 1]), 3));
        assert!(span_contains(&rows, &[vec_from_ints(&[1, 1, 0])], 3));
    }
}
