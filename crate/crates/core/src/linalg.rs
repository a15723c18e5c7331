//! Exact linear solving over the rationals by fraction-free Gaussian
//! elimination (Bareiss) on the cleared integer matrix.

use crate::rational::Rat;
use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Zero};

/// Outcome of solving an overdetermined system A x = b exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Unique(Vec<Rat>),
    Inconsistent,
    /// Solutions form an affine space of the given positive dimension.
    Ambiguous {
        dim: usize,
    },
}

/// Solves A x = b over the rationals. `rows` holds the rows of [A | b].
/// Every row must have `ncols + 1` entries.
pub fn solve(rows: &[Vec<Rat>], ncols: usize) -> Solution {
    for r in rows {
        assert_eq!(r.len(), ncols + 1, "augmented row length mismatch");
    }
    // clear denominators row by row
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let mut l = BigInt::one();
            for x in r {
                l = l.lcm(x.denom());
            }
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect();
    let nrows = m.len();
    let mut prev = BigInt::one();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        // find a pivot at or below `rank`
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..=ncols {
                let v = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss divisibility");
                m[r][c] = q;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    // rows below the rank must have zero right-hand side
    for row in m.iter().take(nrows).skip(rank) {
        if !row[ncols].is_zero() {
            return Solution::Inconsistent;
        }
    }
    if rank < ncols {
        return Solution::Ambiguous { dim: ncols - rank };
    }
    // back substitution on the triangular top block
    let mut x = vec![Rat::zero(); ncols];
    for i in (0..rank).rev() {
        let col = pivot_cols[i];
        let mut s = Rat::new(m[i][ncols].clone(), BigInt::one());
        for j in col + 1..ncols {
            s -= Rat::new(m[i][j].clone(), BigInt::one()) * &x[j];
        }
        x[col] = s / Rat::new(m[i][col].clone(), BigInt::one());
    }
    Solution::Unique(x)
}
