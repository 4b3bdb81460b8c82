//! Closed-form derivative tables and Wronskians of `ch(κx)`, `sh(κx)`,
//! `cos(wx)` and `sin(wx)`.

use alloc::vec::Vec;

use crate::error::Result;
use crate::numerics::{det, Complex, Jet, Matrix, PrecisionCtx, Real, Scalar};

/// A function of `x` with closed-form derivatives of every order.
#[derive(Clone, Debug)]
pub enum SeedFn {
    Cosh(Real),
    Sinh(Real),
    Cos(Complex),
    Sin(Complex),
}

impl SeedFn {
    /// `f(x), f'(x), …, f^(count-1)(x)`.
    pub fn derivatives(&self, x: &Real, count: usize, ctx: &PrecisionCtx) -> Vec<Complex> {
        match self {
            SeedFn::Cosh(k) | SeedFn::Sinh(k) => {
                let u = k * x;
                let (ch, sh) = (u.cosh(ctx), u.sinh(ctx));
                let (even, odd) = if matches!(self, SeedFn::Cosh(_)) {
                    (ch, sh)
                } else {
                    (sh, ch)
                };
                let mut p = ctx.one();
                (0..count)
                    .map(|m| {
                        let v = if m % 2 == 0 { &even * &p } else { &odd * &p };
                        p = &p * k;
                        Complex::from_real(v)
                    })
                    .collect()
            }
            SeedFn::Cos(w) | SeedFn::Sin(w) => {
                let u = w.scale(x);
                let (c, s) = (u.cos(ctx), u.sin(ctx));
                // cos: c, -s, -c, s; sin: s, c, -s, -c.
                let cycle = if matches!(self, SeedFn::Cos(_)) {
                    [c.clone(), -&s, -&c, s]
                } else {
                    [s.clone(), c.clone(), -&s, -&c]
                };
                let mut p = Complex::one(ctx);
                (0..count)
                    .map(|m| {
                        let v = &cycle[m % 4] * &p;
                        p = &p * w;
                        v
                    })
                    .collect()
            }
        }
    }
}

fn tables(fns: &[SeedFn], x: &Real, count: usize, ctx: &PrecisionCtx) -> Vec<Vec<Complex>> {
    fns.iter().map(|f| f.derivatives(x, count, ctx)).collect()
}

/// `W(f_1, …, f_n)(x)`; the empty Wronskian is 1.
pub fn wronskian(fns: &[SeedFn], x: &Real, ctx: &PrecisionCtx) -> Result<Complex> {
    let n = fns.len();
    if n == 0 {
        return Ok(Complex::one(ctx));
    }
    let t = tables(fns, x, n, ctx);
    det(&Matrix::from_fn(n, n, |i, j| t[j][i].clone()), ctx)
}

/// `(W, W')` where `W'` is the Wronskian with its last row replaced by the
/// `n`-th derivatives.
pub fn wronskian_with_derivative(
    fns: &[SeedFn],
    x: &Real,
    ctx: &PrecisionCtx,
) -> Result<(Complex, Complex)> {
    let n = fns.len();
    if n == 0 {
        return Ok((Complex::one(ctx), Complex::zero(ctx)));
    }
    let t = tables(fns, x, n + 1, ctx);
    let w = det(&Matrix::from_fn(n, n, |i, j| t[j][i].clone()), ctx)?;
    let dw = det(
        &Matrix::from_fn(n, n, |i, j| t[j][if i == n - 1 { n } else { i }].clone()),
        ctx,
    )?;
    Ok((w, dw))
}

/// Taylor jet of the Wronskian at `x` carrying derivatives up to `order`,
/// obtained as the determinant of the matrix of entry jets.
pub fn wronskian_jet(
    fns: &[SeedFn],
    x: &Real,
    order: usize,
    ctx: &PrecisionCtx,
) -> Result<Jet<Complex>> {
    let n = fns.len();
    let len = order + 1;
    if n == 0 {
        let mut d = alloc::vec![Complex::zero(ctx); len];
        d[0] = Complex::one(ctx);
        return Ok(Jet::from_derivatives(d));
    }
    let t = tables(fns, x, n + order, ctx);
    let m = Matrix::from_fn(n, n, |i, j| {
        Jet::from_derivatives(t[j][i..i + len].to_vec())
    });
    det(&m, ctx)
}

/// Builds the jet of a seed function directly from its derivative table.
pub fn seed_jet(f: &SeedFn, x: &Real, len: usize, ctx: &PrecisionCtx) -> Jet<Complex> {
    Jet::from_derivatives(f.derivatives(x, len, ctx))
}

impl<T: Scalar> Scalar for Jet<T> {
    fn zero_like(&self) -> Self {
        self.scale(&self.value().magnitude().zero_like())
    }
    fn one_like(&self) -> Self {
        let one = self.value().one_like();
        let zero = one.zero_like();
        let mut d = alloc::vec![zero; self.len()];
        d[0] = one;
        Jet::from_derivatives(d)
    }
    fn add_ref(&self, o: &Self) -> Self {
        Jet::add(self, o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Jet::sub(self, o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Jet::mul(self, o)
    }
    fn div_ref(&self, o: &Self) -> Self {
        Jet::div(self, o).expect("pivot jets are nonzero at the expansion point")
    }
    fn neg_ref(&self) -> Self {
        Jet::neg(self)
    }
    fn scale(&self, r: &Real) -> Self {
        Jet::scale(self, r)
    }
    fn magnitude(&self) -> Real {
        self.value().magnitude()
    }
    fn is_zero(&self) -> bool {
        self.value().is_zero()
    }
    fn is_finite(&self) -> bool {
        (0..self.len()).all(|k| {
            self.nth_derivative(k)
                .map(|v| v.is_finite())
                .unwrap_or(false)
        })
    }
    fn to_complex(&self) -> Complex {
        self.value().to_complex()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_function_wronskian_is_the_function() {
        let c = PrecisionCtx::new(40).unwrap();
        let x = c.real(0.6);
        let k = c.real(1.5);
        let w = wronskian(&[SeedFn::Cosh(k.clone())], &x, &c).unwrap();
        assert!((w.re - (&k * &x).cosh(&c)).abs() < c.pow10(-50));
    }

    #[test]
    fn cosh_sinh_pair() {
        // W(ch(ax), sh(bx)) = b ch(ax)ch(bx) - a sh(ax)sh(bx).
        let c = PrecisionCtx::new(40).unwrap();
        let (a, b, x) = (c.real(0.5), c.real(2.0), c.real(0.9));
        let w = wronskian(&[SeedFn::Cosh(a.clone()), SeedFn::Sinh(b.clone())], &x, &c).unwrap();
        let (ax, bx) = (&a * &x, &b * &x);
        let want = &b * ax.cosh(&c) * bx.cosh(&c) - &a * ax.sinh(&c) * bx.sinh(&c);
        assert!((w.re - want).abs() < c.pow10(-50));
    }

    #[test]
    fn cos_sin_wronskian_is_w() {
        let c = PrecisionCtx::new(40).unwrap();
        let w = Complex::from_f64(0.7, 0.2, &c);
        let x = c.real(1.3);
        let v = wronskian(&[SeedFn::Cos(w.clone()), SeedFn::Sin(w.clone())], &x, &c).unwrap();
        assert!((&v - &w).abs() < c.pow10(-50));
    }

    #[test]
    fn derivative_and_jet_agree() {
        let c = PrecisionCtx::new(40).unwrap();
        let x = c.real(0.4);
        let fns = [
            SeedFn::Cosh(c.real(0.5)),
            SeedFn::Cosh(c.real(1.5)),
            SeedFn::Cosh(c.real(2.5)),
        ];
        let (w, dw) = wronskian_with_derivative(&fns, &x, &c).unwrap();
        let jet = wronskian_jet(&fns, &x, 2, &c).unwrap();
        assert!((jet.value() - &w).abs() < c.pow10(-45) * w.abs());
        assert!((&jet.nth_derivative(1).unwrap() - &dw).abs() < c.pow10(-45) * dw.abs());
    }
}
