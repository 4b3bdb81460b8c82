//! Exact rational linear algebra.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Matrix;
use crate::error::{bail, Result};

/// Arbitrary-size rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Exact determinant: rows are scaled to integers, then fraction-free
/// (Bareiss) elimination is applied.
pub fn det_exact(m: &Matrix<Rational>) -> Result<Rational> {
    if !m.is_square() {
        bail!(
            Dimension,
            "determinant of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        );
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        a.push(
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect(),
        );
        scale *= l;
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = Rational::new(a[n - 1][n - 1].clone(), scale);
    Ok(if sign { -d } else { d })
}

/// Basis of the right null space `{v : m·v = 0}` via exact reduced row
/// echelon form. Each basis vector has a 1 in its free coordinate.
pub fn nullspace_exact(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<Vec<Rational>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = alloc::vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn hilbert_exact() {
        let m = Matrix::from_fn(3, 3, |i, j| q(1, (i + j + 1) as i64));
        assert_eq!(det_exact(&m).unwrap(), q(1, 2160));
    }

    #[test]
    fn needs_pivoting() {
        let m = Matrix::from_rows(vec![vec![q(0, 1), q(1, 2)], vec![q(3, 1), q(5, 7)]]).unwrap();
        assert_eq!(det_exact(&m).unwrap(), q(-3, 2));
        let z = Matrix::from_rows(vec![vec![q(0, 1), q(1, 2)], vec![q(0, 1), q(5, 7)]]).unwrap();
        assert_eq!(det_exact(&z).unwrap(), q(0, 1));
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = Matrix::from_rows(vec![
            vec![q(1, 1), q(2, 1), q(3, 1)],
            vec![q(2, 1), q(4, 1), q(6, 1)],
        ])
        .unwrap();
        let basis = nullspace_exact(&m);
        assert_eq!(basis.len(), 2);
        for v in basis {
            for i in 0..2 {
                let s: Rational = (0..3).map(|j| m.get(i, j) * &v[j]).sum();
                assert!(s.is_zero());
            }
        }
    }

    proptest! {
        #[test]
        fn rational_sum_is_exact(p in -1000i64..1000, qd in 1i64..1000, r in -1000i64..1000, s in 1i64..1000) {
            let a = q(p, qd);
            let b = q(r, s);
            let sum = &a + &b;
            let expected = q(p * s + r * qd, qd * s);
            prop_assert!((&sum - &expected).is_zero());
            prop_assert!(sum.denom().is_positive());
            prop_assert!(sum.numer().gcd(sum.denom()).is_one());
        }

        #[test]
        fn exact_det_of_integer_product(a in proptest::collection::vec(-9i64..9, 9), b in proptest::collection::vec(-9i64..9, 9)) {
            let ma = Matrix::from_fn(3, 3, |i, j| q(a[3 * i + j], 1));
            let mb = Matrix::from_fn(3, 3, |i, j| q(b[3 * i + j], (j + 1) as i64));
            let prod = Matrix::from_fn(3, 3, |i, j| (0..3).map(|k| ma.get(i, k) * mb.get(k, j)).sum::<Rational>());
            prop_assert_eq!(det_exact(&prod).unwrap(), det_exact(&ma).unwrap() * det_exact(&mb).unwrap());
        }
    }
}
