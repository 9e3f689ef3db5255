//! Exact linear solvers: integral systems via the Smith form, rational
//! systems via fraction-free elimination with exact back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::snf::{smith_normal_form, SmithDecomposition};

pub type RationalVector = Vec<BigRational>;

/// Solution set of `M x = b` over the rationals: one particular
/// solution plus a basis of the kernel of `M`.
#[derive(Clone, Debug)]
pub struct RationalAffineSolution {
    pub particular: RationalVector,
    pub kernel_basis: Vec<RationalVector>,
}

/// Caches the Smith decomposition of `M` so many right-hand sides can
/// be tested for integral solvability without re-reducing.
pub struct IntegralSolver {
    snf: SmithDecomposition,
    rows: usize,
    cols: usize,
}

impl IntegralSolver {
    pub fn new(m: &IntegerMatrix) -> Self {
        IntegralSolver {
            snf: smith_normal_form(m),
            rows: m.rows(),
            cols: m.cols(),
        }
    }

    /// Some integer solution of `M x = b`, or `None` when none exists.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs length {} for {}x{} matrix",
                b.len(),
                self.rows,
                self.cols
            )));
        }
        // M x = b  <=>  S y = U b with x = V y.
        let ub = self.snf.u.mul_vec(b)?;
        let mut y = vec![BigInt::zero(); self.cols];
        let steps = self.rows.min(self.cols);
        for (i, ub_i) in ub.iter().enumerate() {
            let s_i = if i < steps {
                self.snf.s[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if s_i.is_zero() {
                if !ub_i.is_zero() {
                    return Ok(None);
                }
            } else {
                let (q, r) = ub_i.div_rem(&s_i);
                if !r.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            }
        }
        Ok(Some(self.snf.v.mul_vec(&y)?))
    }
}

/// One-shot form of [`IntegralSolver::solve`].
pub fn solve_integral(m: &IntegerMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    IntegralSolver::new(m).solve(b)
}

/// Solves `M x = b` over the rationals.
///
/// Forward elimination is fraction-free (Bareiss two-step updates with
/// exact division by the previous pivot), which keeps intermediate
/// entries at minor-of-the-input size; back-substitution then runs
/// over exact rationals. Kernel basis vectors are scaled to primitive
/// integer vectors with positive leading entry, so a connected-graph
/// Laplacian reports its kernel as the all-ones vector.
pub fn solve_rational_affine(
    m: &IntegerMatrix,
    b: &[BigInt],
) -> Result<Option<RationalAffineSolution>> {
    let rows = m.rows();
    let cols = m.cols();
    if b.len() != rows {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} for {}x{} matrix",
            b.len(),
            rows,
            cols
        )));
    }

    // Augmented working matrix [M | b].
    let width = cols + 1;
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * width);
    for i in 0..rows {
        for j in 0..cols {
            a.push(m[(i, j)].clone());
        }
        a.push(b[i].clone());
    }

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i * width + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in 0..width {
                a.swap(rank * width + j, p * width + j);
            }
        }
        for i in rank + 1..rows {
            for j in c + 1..width {
                let num =
                    &a[rank * width + c] * &a[i * width + j] - &a[i * width + c] * &a[rank * width + j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "fraction-free step must divide exactly");
                let _ = r;
                a[i * width + j] = q;
            }
            a[i * width + c] = BigInt::zero();
        }
        prev = a[rank * width + c].clone();
        pivot_cols.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    // Inconsistent iff a zero row of M carries a nonzero rhs.
    for i in rank..rows {
        if !a[i * width + cols].is_zero() {
            return Ok(None);
        }
    }

    let back_substitute = |free_values: &dyn Fn(usize) -> BigRational,
                           rhs_col: bool|
     -> RationalVector {
        let mut x: Vec<BigRational> = (0..cols).map(free_values).collect();
        for r in (0..rank).rev() {
            let pc = pivot_cols[r];
            let mut acc = if rhs_col {
                BigRational::from(a[r * width + cols].clone())
            } else {
                BigRational::zero()
            };
            for j in pc + 1..cols {
                if !a[r * width + j].is_zero() {
                    acc -= BigRational::from(a[r * width + j].clone()) * &x[j];
                }
            }
            x[pc] = acc / BigRational::from(a[r * width + pc].clone());
        }
        x
    };

    let zero_free = |_: usize| BigRational::zero();
    let particular = back_substitute(&zero_free, true);

    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut kernel_basis = Vec::with_capacity(free_cols.len());
    for &f in &free_cols {
        let unit_free = move |j: usize| {
            if j == f {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        };
        let vec = back_substitute(&unit_free, false);
        kernel_basis.push(primitive_integer_direction(&vec));
    }

    Ok(Some(RationalAffineSolution {
        particular,
        kernel_basis,
    }))
}

/// Scales a rational vector to the primitive integer vector spanning
/// the same line, with positive leading nonzero entry.
fn primitive_integer_direction(v: &[BigRational]) -> RationalVector {
    let mut denom_lcm = BigInt::one();
    for x in v {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&denom_lcm / x.denom()))
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    if let Some(lead) = ints.iter().find(|x| !x.is_zero()) {
        if lead.is_negative() {
            g = -g;
        }
    }
    ints.into_iter()
        .map(|x| BigRational::from(x / &g))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn triangle_laplacian() -> IntegerMatrix {
        IntegerMatrix::from_rows(&[vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]])
    }

    #[test]
    fn integral_diagonal_solvable() {
        let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        let x = solve_integral(&m, &big(&[4, 6])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), big(&[4, 6]));
        assert_eq!(x, big(&[2, 3]));
    }

    #[test]
    fn integral_parity_obstruction() {
        let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert!(solve_integral(&m, &big(&[1, 0])).unwrap().is_none());
    }

    #[test]
    fn integral_triangle_torsion() {
        let l = triangle_laplacian();
        assert!(solve_integral(&l, &big(&[1, -1, 0])).unwrap().is_none());
        let x = solve_integral(&l, &big(&[3, -3, 0])).unwrap().unwrap();
        assert_eq!(l.mul_vec(&x).unwrap(), big(&[3, -3, 0]));
    }

    #[test]
    fn integral_dimension_mismatch() {
        let m = IntegerMatrix::identity(2);
        assert!(solve_integral(&m, &big(&[1, 2, 3])).is_err());
    }

    #[test]
    fn rational_kernel_is_all_ones() {
        let l = triangle_laplacian();
        let sol = solve_rational_affine(&l, &big(&[0, 0, 0])).unwrap().unwrap();
        assert!(sol.particular.iter().all(|x| x.is_zero()));
        assert_eq!(sol.kernel_basis.len(), 1);
        assert_eq!(sol.kernel_basis[0], vec![rat(1, 1), rat(1, 1), rat(1, 1)]);
    }

    #[test]
    fn rational_single_firing() {
        let l = triangle_laplacian();
        let sol = solve_rational_affine(&l, &big(&[2, -1, -1])).unwrap().unwrap();
        assert_eq!(sol.particular, vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn rational_denominator_reflects_torsion() {
        let l = triangle_laplacian();
        let sol = solve_rational_affine(&l, &big(&[1, -1, 0])).unwrap().unwrap();
        let max_denom = sol
            .particular
            .iter()
            .map(|x| x.denom().clone())
            .max()
            .unwrap();
        assert_eq!(max_denom, BigInt::from(3));
        // Verify M * particular = b exactly.
        for (i, want) in [1i64, -1, 0].iter().enumerate() {
            let mut acc = BigRational::zero();
            for j in 0..3 {
                acc += BigRational::from(l[(i, j)].clone()) * &sol.particular[j];
            }
            assert_eq!(acc, rat(*want, 1));
        }
    }

    #[test]
    fn rational_inconsistent_detected() {
        // x + y = 1 and x + y = 2 cannot both hold.
        let m = IntegerMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(solve_rational_affine(&m, &big(&[1, 2])).unwrap().is_none());
    }
}
