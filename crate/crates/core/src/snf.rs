//! Smith normal form over the integers.
//!
//! `U * M * V = S` with `U`, `V` unimodular and `S` diagonal, each
//! diagonal entry nonnegative and dividing the next, zeros trailing.
//! The diagonal of `S` reads off the cokernel of `M`, which is how the
//! critical group of a graph is extracted from its Laplacian.
//!
//! Pivoting always picks the minimum-absolute-value nonzero entry of
//! the working submatrix (ties broken by row index, then column
//! index), which keeps entry growth tame at the matrix sizes this
//! crate deals with and makes the output deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::IntegerMatrix;

#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub s: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    /// All diagonal entries of `S`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Nonzero diagonal entries (the invariant factors of the image
    /// lattice, unit factors included).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Minimum-absolute-value nonzero entry of `m[k.., k..]`, scanning
/// rows first so ties resolve by row then column.
fn find_pivot(m: &IntegerMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..m.rows() {
        for j in k..m.cols() {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best {
                Some((_, _, cur)) if *cur <= a => {}
                _ => best = Some((i, j, a)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut s = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    let steps = rows.min(cols);
    'diag: for k in 0..steps {
        loop {
            let Some((pi, pj)) = find_pivot(&s, k) else {
                break 'diag; // remaining submatrix is zero
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            // Clear column k below the pivot.
            let mut residue = false;
            for i in k + 1..rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = -(&s[(i, k)] / &s[(k, k)]);
                s.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                if !s[(i, k)].is_zero() {
                    residue = true;
                }
            }
            if residue {
                continue; // leftover remainders shrink the next pivot
            }

            // Clear row k to the right of the pivot.
            for j in k + 1..cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = -(&s[(k, j)] / &s[(k, k)]);
                s.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                if !s[(k, j)].is_zero() {
                    residue = true;
                }
            }
            if residue {
                continue;
            }

            // Pull any non-divisible remainder into the pivot row so
            // the divisibility chain comes out right.
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !s[(i, j)].mod_floor(&s[(k, k)]).is_zero() {
                        let one = BigInt::from(1);
                        s.add_row_multiple(k, i, &one);
                        u.add_row_multiple(k, i, &one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if s[(k, k)].is_negative() {
            s.negate_row(k);
            u.negate_row(k);
        }
    }

    SmithDecomposition { u, s, v }
}
