use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{Complex, PrecisionCtx, Real};
use crate::error::{bail, Error, Result};

/// Field operations needed by the generic linear algebra, finite
/// differences and jets. Implemented for [`Real`] and [`Complex`].
pub trait Scalar: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &Real) -> Self;
    /// Magnitude used for pivoting and error estimates.
    fn magnitude(&self) -> Real;
    fn is_zero(&self) -> bool;
    fn is_finite(&self) -> bool;
    /// The value viewed as a complex number (for reporting).
    fn to_complex(&self) -> Complex;
}

impl Scalar for Real {
    fn zero_like(&self) -> Self {
        Real::zero_like(self)
    }
    fn one_like(&self) -> Self {
        Real::one_like(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Real) -> Self {
        self * r
    }
    fn magnitude(&self) -> Real {
        self.abs()
    }
    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }
    fn is_finite(&self) -> bool {
        Real::is_finite(self)
    }
    fn to_complex(&self) -> Complex {
        Complex::from_real(self.clone())
    }
}

impl Scalar for Complex {
    fn zero_like(&self) -> Self {
        Complex::zero_like(self)
    }
    fn one_like(&self) -> Self {
        Complex::one_like(self)
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Real) -> Self {
        Complex::scale(self, r)
    }
    fn magnitude(&self) -> Real {
        self.abs()
    }
    fn is_zero(&self) -> bool {
        Complex::is_zero(self)
    }
    fn is_finite(&self) -> bool {
        Complex::is_finite(self)
    }
    fn to_complex(&self) -> Complex {
        self.clone()
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            bail!(Dimension, "ragged rows in matrix literal");
        }
        let data = rows.into_iter().flatten().collect();
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Leading principal `k×k` block.
    pub fn principal(&self, k: usize) -> Self {
        Matrix::from_fn(k, k, |i, j| self.get(i, j).clone())
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Matrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            bail!(
                Dimension,
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                o.rows,
                o.cols
            );
        }
        let mut out = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = self.get(i, 0).mul_ref(o.get(0, j));
                for k in 1..self.cols {
                    acc = acc.add_ref(&self.get(i, k).mul_ref(o.get(k, j)));
                }
                out.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: o.cols,
            data: out,
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if self.cols != v.len() {
            bail!(
                Dimension,
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            );
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).mul_ref(&v[0]);
                for k in 1..self.cols {
                    acc = acc.add_ref(&self.get(i, k).mul_ref(&v[k]));
                }
                acc
            })
            .collect())
    }

    /// Largest entry magnitude.
    pub fn max_magnitude(&self) -> Option<Real> {
        self.data.iter().map(Scalar::magnitude).reduce(Real::max)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.rows {
            l.entry(&&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        l.finish()
    }
}

/// LU factorization with complete pivoting, `P·A·Q = L·U`.
#[derive(Clone, Debug)]
pub struct LuFactors<T> {
    lu: Matrix<T>,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    odd: bool,
    rank: usize,
    cond_estimate: f64,
}

impl<T: Scalar> LuFactors<T> {
    pub fn new(m: &Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            bail!(
                Dimension,
                "expected a square matrix, got {}x{}",
                m.rows,
                m.cols
            );
        }
        let n = m.rows;
        if m.data.iter().any(|v| !v.is_finite()) {
            bail!(Evaluation, "matrix has non-finite entries");
        }
        let mut lu = m.clone();
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        let mut rank = n;
        let a_max = m.max_magnitude();
        let mut u_max: Option<Real> = None;
        for k in 0..n {
            let mut best: Option<(usize, usize, Real)> = None;
            for i in k..n {
                for j in k..n {
                    let mag = lu.get(i, j).magnitude();
                    if best.as_ref().is_none_or(|b| mag > b.2) {
                        best = Some((i, j, mag));
                    }
                }
            }
            let (pi, pj, pmag) = best.expect("non-empty trailing block");
            if pmag.is_zero() {
                rank = k;
                break;
            }
            if pi != k {
                lu.swap_rows(pi, k);
                row_perm.swap(pi, k);
                odd = !odd;
            }
            if pj != k {
                lu.swap_cols(pj, k);
                col_perm.swap(pj, k);
                odd = !odd;
            }
            let pivot = lu.get(k, k).clone();
            for i in k + 1..n {
                let l = lu.get(i, k).div_ref(&pivot);
                if !l.is_zero() {
                    for j in k + 1..n {
                        let v = lu.get(i, j).sub_ref(&l.mul_ref(lu.get(k, j)));
                        lu.set(i, j, v);
                    }
                }
                lu.set(i, k, l);
            }
            for j in k..n {
                let mag = lu.get(k, j).magnitude();
                if u_max.as_ref().is_none_or(|u| mag > *u) {
                    u_max = Some(mag);
                }
            }
        }
        let cond_estimate = if rank < n {
            f64::INFINITY
        } else if n == 0 {
            1.0
        } else {
            let diag: Vec<Real> = (0..n).map(|k| lu.get(k, k).magnitude()).collect();
            let dmax = diag.iter().cloned().reduce(Real::max).expect("n > 0");
            let dmin = diag.iter().cloned().reduce(Real::min).expect("n > 0");
            let growth = u_max.expect("n > 0") / a_max.expect("n > 0");
            (growth * (dmax / dmin)).to_f64()
        };
        Ok(LuFactors {
            lu,
            row_perm,
            col_perm,
            odd,
            rank,
            cond_estimate,
        })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows
    }

    /// Numerical rank revealed by the pivots (exact zero pivots only).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Pivot-growth times pivot-spread condition estimate; infinite when a
    /// zero pivot was met.
    pub fn cond_estimate(&self) -> f64 {
        self.cond_estimate
    }

    pub fn det(&self, one: &T) -> T {
        let n = self.dim();
        if self.rank < n {
            return one.zero_like();
        }
        let mut d = one.clone();
        for k in 0..n {
            d = d.mul_ref(self.lu.get(k, k));
        }
        if self.odd {
            d.neg_ref()
        } else {
            d
        }
    }

    /// Solves `A·y = rhs`; requires full rank.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.dim();
        if rhs.len() != n {
            bail!(
                Dimension,
                "right-hand side has length {}, expected {n}",
                rhs.len()
            );
        }
        if self.rank < n {
            return Err(Error::Conditioning {
                estimate: f64::INFINITY,
                context: format!("singular {n}x{n} system (rank {})", self.rank),
            });
        }
        let mut z: Vec<T> = self.row_perm.iter().map(|&i| rhs[i].clone()).collect();
        for i in 0..n {
            for k in 0..i {
                z[i] = z[i].sub_ref(&self.lu.get(i, k).mul_ref(&z[k]));
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                z[i] = z[i].sub_ref(&self.lu.get(i, k).mul_ref(&z[k]));
            }
            z[i] = z[i].div_ref(self.lu.get(i, i));
        }
        let mut y: Vec<Option<T>> = (0..n).map(|_| None).collect();
        for (k, zk) in z.into_iter().enumerate() {
            y[self.col_perm[k]] = Some(zk);
        }
        Ok(y.into_iter()
            .map(|v| v.expect("permutation covers all columns"))
            .collect())
    }
}

/// Determinant by complete-pivoting elimination at working precision.
pub fn det<T: Scalar>(m: &Matrix<T>, _ctx: &PrecisionCtx) -> Result<T> {
    if !m.is_square() {
        bail!(
            Dimension,
            "determinant of a non-square {}x{} matrix",
            m.rows,
            m.cols
        );
    }
    if m.rows == 0 {
        bail!(Dimension, "determinant of an empty matrix");
    }
    let one = m.get(0, 0).one_like();
    Ok(LuFactors::new(m)?.det(&one))
}

/// Solution of a linear system together with its condition estimate.
#[derive(Clone, Debug)]
pub struct Solved<T> {
    pub x: Vec<T>,
    pub cond_estimate: f64,
}

/// Solves `m·y = rhs`. Fails with a conditioning error when the pivot-based
/// condition estimate exceeds `10^digits`.
pub fn solve<T: Scalar>(m: &Matrix<T>, rhs: &[T], ctx: &PrecisionCtx) -> Result<Solved<T>> {
    let lu = LuFactors::new(m)?;
    let cond = lu.cond_estimate();
    let budget = libm::pow(10.0, f64::from(ctx.digits()));
    if !(cond <= budget) {
        return Err(Error::Conditioning {
            estimate: cond,
            context: format!(
                "{}x{} solve beyond the {}-digit budget",
                m.rows,
                m.cols,
                ctx.digits()
            ),
        });
    }
    Ok(Solved {
        x: lu.solve(rhs)?,
        cond_estimate: cond,
    })
}
