//! Gauss-Jordan elimination over rational functions.
//!
//! Columns are processed left to right; within a column the pivot is the
//! candidate entry with the fewest monomials. The reduced row echelon form is
//! unique, so the pivot choice only affects the cost.

use crate::error::Result;
use crate::ratfunc::RatFunc;

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form with
/// unit pivots. Zero rows are dropped. Returns the pivot columns, one per
/// remaining row.
pub fn rref(rows: &mut Vec<Vec<RatFunc>>, ncols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let best = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| rows[r][col].complexity());
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv()?;
        if !inv.is_one() {
            for v in rows[rank][col..ncols].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c] = &row[c] - &(&factor * &pivot_row[c]);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    Ok(pivots)
}

/// Basis of `{v : A v = 0}`, one vector per free column (in column order),
/// with the free column set to one and the other free columns zero.
pub fn nullspace(mut rows: Vec<Vec<RatFunc>>, ncols: usize) -> Result<Vec<Vec<RatFunc>>> {
    let pivots = rref(&mut rows, ncols)?;
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![RatFunc::zero(); ncols];
        v[free] = RatFunc::one();
        for (row, &p) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[p] = -&row[free];
            }
        }
        basis.push(v);
    }
    Ok(basis)
}

/// One solution of `A v = b` (free unknowns set to zero), or `None` if the
/// system is inconsistent.
pub fn solve(rows: &[Vec<RatFunc>], rhs: &[RatFunc], ncols: usize) -> Result<Option<Vec<RatFunc>>> {
    let mut aug: Vec<Vec<RatFunc>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1)?;
    if pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let mut v = vec![RatFunc::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        v[p] = row[ncols].clone();
    }
    Ok(Some(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> RatFunc {
        RatFunc::from_int(n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let x = RatFunc::var(0);
        // [1, x, x^2] has a two-dimensional kernel
        let rows = vec![vec![q(1), x.clone(), &x * &x]];
        let ns = nullspace(rows.clone(), 3).unwrap();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = rows[0]
                .iter()
                .zip(v)
                .fold(RatFunc::zero(), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let x = RatFunc::var(0);
        let rows = vec![vec![x.clone(), q(1)], vec![q(0), q(1)]];
        let sol = solve(&rows, &[q(1), q(0)], 2).unwrap().unwrap();
        assert_eq!(sol[0], x.inv().unwrap());
        assert!(sol[1].is_zero());
        let rows = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&rows, &[q(1), q(3)], 2).unwrap().is_none());
    }

    #[test]
    fn rref_is_unique_and_monic() {
        let x = RatFunc::var(0);
        let mut rows = vec![
            vec![x.clone(), q(2), q(0)],
            vec![q(1), q(0), x.clone()],
        ];
        let piv = rref(&mut rows, 3).unwrap();
        assert_eq!(piv, vec![0, 1]);
        assert!(rows[0][0].is_one() && rows[1][1].is_one());
        assert!(rows[0][1].is_zero() && rows[1][0].is_zero());
    }
}
