//! Exact Gaussian elimination over the rationals: rank, kernel bases, and
//! inverses for the small dense systems the harmonic and oracle paths solve.

use num_traits::{One, Zero};

use crate::combinatorics::Rat;

/// Row echelon reduction in place. Returns the pivot column of each pivot row.
fn reduce(rows: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for v in rows[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != row && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..rows[r].len() {
                    let sub = &f * &rows[row][c];
                    rows[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    pivots
}

pub(crate) fn rank(mut rows: Vec<Vec<Rat>>, ncols: usize) -> usize {
    reduce(&mut rows, ncols).len()
}

/// Basis of the null space of the linear map the rows represent.
pub(crate) fn kernel_basis(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let pivots = reduce(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rat::zero(); ncols];
        v[f] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Inverse of a square matrix, or `None` when singular.
pub(crate) fn invert(rows: Vec<Vec<Rat>>) -> Option<Vec<Vec<Rat>>> {
    let n = rows.len();
    let mut aug: Vec<Vec<Rat>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            debug_assert_eq!(r.len(), n);
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = reduce(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::rat;

    #[test]
    fn rank_and_kernel_of_rectangular_map() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let rows = vec![vec![rat(1, 1), rat(1, 1), rat(1, 1)]];
        assert_eq!(rank(rows.clone(), 3), 1);
        let kernel = kernel_basis(rows.clone(), 3);
        assert_eq!(kernel.len(), 2);
        for v in &kernel {
            let s = &v[0] + &v[1] + &v[2];
            assert!(s.is_zero());
        }
    }

    #[test]
    fn invert_round_trip() {
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let inv = invert(m.clone()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Rat::zero();
                for k in 0..2 {
                    s += &m[i][k] * &inv[k][j];
                }
                assert_eq!(s, if i == j { Rat::one() } else { Rat::zero() });
            }
        }
        let singular = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]];
        assert!(invert(singular).is_none());
    }
}
