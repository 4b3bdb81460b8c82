use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::{PrecisionCtx, Real};

/// Complex number with [`Real`] parts.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let im = re.zero_like();
        Complex { re, im }
    }

    /// Purely imaginary `i·im`.
    pub fn from_imag(im: Real) -> Self {
        let re = im.zero_like();
        Complex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, ctx: &PrecisionCtx) -> Self {
        Complex::new(ctx.real(re), ctx.real(im))
    }

    pub fn zero(ctx: &PrecisionCtx) -> Self {
        Complex::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: &PrecisionCtx) -> Self {
        Complex::new(ctx.one(), ctx.zero())
    }

    pub fn i(ctx: &PrecisionCtx) -> Self {
        Complex::new(ctx.zero(), ctx.one())
    }

    pub fn zero_like(&self) -> Self {
        Complex::new(self.re.zero_like(), self.re.zero_like())
    }

    pub fn one_like(&self) -> Self {
        Complex::new(self.re.one_like(), self.re.zero_like())
    }

    pub fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -&self.im)
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Complex::new(-&self.im, self.re.clone())
    }

    /// Multiplication by `-i`.
    pub fn mul_neg_i(&self) -> Self {
        Complex::new(self.im.clone(), -&self.re)
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// Cheap magnitude bound `max(|re|, |im|)`, within a factor √2 of the modulus.
    pub fn max_abs(&self) -> Real {
        self.re.abs().max(self.im.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn scale(&self, r: &Real) -> Self {
        Complex::new(&self.re * r, &self.im * r)
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn exp(&self, ctx: &PrecisionCtx) -> Self {
        let m = self.re.exp(ctx);
        Complex::new(&m * self.im.cos(ctx), &m * self.im.sin(ctx))
    }

    pub fn sin(&self, ctx: &PrecisionCtx) -> Self {
        Complex::new(
            self.re.sin(ctx) * self.im.cosh(ctx),
            self.re.cos(ctx) * self.im.sinh(ctx),
        )
    }

    pub fn cos(&self, ctx: &PrecisionCtx) -> Self {
        Complex::new(
            self.re.cos(ctx) * self.im.cosh(ctx),
            -(self.re.sin(ctx) * self.im.sinh(ctx)),
        )
    }

    pub fn sinh(&self, ctx: &PrecisionCtx) -> Self {
        Complex::new(
            self.re.sinh(ctx) * self.im.cos(ctx),
            self.re.cosh(ctx) * self.im.sin(ctx),
        )
    }

    pub fn cosh(&self, ctx: &PrecisionCtx) -> Self {
        Complex::new(
            self.re.cosh(ctx) * self.im.cos(ctx),
            self.re.sinh(ctx) * self.im.sin(ctx),
        )
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        // Smith's algorithm keeps intermediate magnitudes bounded.
        if o.re.abs() >= o.im.abs() {
            let r = &o.im / &o.re;
            let d = &o.re + &o.im * &r;
            Complex::new(
                (&self.re + &self.im * &r) / &d,
                (&self.im - &self.re * &r) / &d,
            )
        } else {
            let r = &o.re / &o.im;
            let d = &o.re * &r + &o.im;
            Complex::new(
                (&self.re * &r + &self.im) / &d,
                (&self.im * &r - &self.re) / &d,
            )
        }
    }
}

macro_rules! complex_owned_variants {
    ($tr:ident, $method:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $method(self, o: Complex) -> Complex {
                (&self).$method(&o)
            }
        }
        impl $tr<&Complex> for Complex {
            type Output = Complex;
            fn $method(self, o: &Complex) -> Complex {
                (&self).$method(o)
            }
        }
        impl $tr<Complex> for &Complex {
            type Output = Complex;
            fn $method(self, o: Complex) -> Complex {
                self.$method(&o)
            }
        }
    };
}

complex_owned_variants!(Add, add);
complex_owned_variants!(Sub, sub);
complex_owned_variants!(Mul, mul);
complex_owned_variants!(Div, div);

impl Add<&Real> for &Complex {
    type Output = Complex;
    fn add(self, o: &Real) -> Complex {
        Complex::new(&self.re + o, self.im.clone())
    }
}

impl Sub<&Real> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Real) -> Complex {
        Complex::new(&self.re - o, self.im.clone())
    }
}

impl Mul<&Real> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Real) -> Complex {
        self.scale(o)
    }
}

impl Div<&Real> for &Complex {
    type Output = Complex;
    fn div(self, o: &Real) -> Complex {
        Complex::new(&self.re / o, &self.im / o)
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, o: &Complex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl AddAssign<Complex> for Complex {
    fn add_assign(&mut self, o: Complex) {
        *self += &o;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, o: &Complex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, o: &Complex) {
        *self = &*self * o;
    }
}
