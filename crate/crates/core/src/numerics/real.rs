use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Radix, Sign};

use super::ctx::RM;
use super::PrecisionCtx;
use crate::error::{Error, Result};

/// Real number in software-extended binary floating point.
///
/// Arithmetic between two values rounds to the larger of the two operand
/// precisions, so values built from one [`PrecisionCtx`] stay at its
/// precision.
#[derive(Clone)]
pub struct Real(pub(crate) BigFloat);

impl Real {
    pub fn from_f64(v: f64, ctx: &PrecisionCtx) -> Self {
        Real(BigFloat::from_f64(v, ctx.bits()))
    }

    pub fn from_i64(v: i64, ctx: &PrecisionCtx) -> Self {
        Real(BigFloat::from_i64(v, ctx.bits()))
    }

    pub fn parse(s: &str, ctx: &PrecisionCtx) -> Result<Self> {
        let v = ctx.with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, ctx.bits(), RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Domain(format!("not a finite decimal number: {s:?}")));
        }
        Ok(Real(v))
    }

    fn prec(&self) -> usize {
        self.0.mantissa_max_bit_len().unwrap_or(64).max(64)
    }

    fn prec2(&self, o: &Self) -> usize {
        self.prec().max(o.prec())
    }

    fn like(&self, v: i64) -> Self {
        Real(BigFloat::from_i64(v, self.prec()))
    }

    pub fn zero_like(&self) -> Self {
        self.like(0)
    }

    pub fn one_like(&self) -> Self {
        self.like(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        !self.0.is_zero() && self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_zero() && self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Real(self.0.reciprocal(self.prec(), RM))
    }

    pub fn sqr(&self) -> Self {
        self * self
    }

    pub fn powi(&self, n: usize) -> Self {
        Real(self.0.powi(n, self.prec(), RM))
    }

    /// Integer power with a signed exponent.
    pub fn powi_signed(&self, n: i64) -> Self {
        let p = self.powi(n.unsigned_abs() as usize);
        if n < 0 {
            p.recip()
        } else {
            p
        }
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(self.prec(), RM))
    }

    pub fn exp(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.exp(self.prec(), RM, cc)))
    }

    pub fn ln(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.ln(self.prec(), RM, cc)))
    }

    pub fn sin(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.sin(self.prec(), RM, cc)))
    }

    pub fn cos(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.cos(self.prec(), RM, cc)))
    }

    pub fn sinh(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.sinh(self.prec(), RM, cc)))
    }

    pub fn cosh(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.cosh(self.prec(), RM, cc)))
    }

    pub fn tanh(&self, ctx: &PrecisionCtx) -> Self {
        ctx.with_consts(|cc| Real(self.0.tanh(self.prec(), RM, cc)))
    }

    /// `self^e` for `self > 0`.
    ///
    /// Integer exponents use binary powering; other exponents go through
    /// `exp(e·ln self)` with 64 guard bits. The backend's general `pow`
    /// does not terminate on some exactly representable results
    /// (e.g. `0.8^3`), so it is never called.
    pub fn powr(&self, e: &Real, ctx: &PrecisionCtx) -> Self {
        let p = self.prec2(e);
        if e.0.is_int() && e.abs() <= Real(BigFloat::from_u64(1 << 32, 64)) {
            let n = e.to_f64() as i64;
            let mut base = self.0.clone();
            let _ = base.set_precision(p, RM);
            return Real(base).powi_signed(n);
        }
        let g = p + 64;
        ctx.with_consts(|cc| {
            let l = self.0.ln(g, RM, cc);
            let v = e.0.mul(&l, g, RM).exp(g, RM, cc);
            let mut v = v;
            let _ = v.set_precision(p, RM);
            Real(v)
        })
    }

    pub fn max(self, o: Self) -> Self {
        if o > self {
            o
        } else {
            self
        }
    }

    pub fn min(self, o: Self) -> Self {
        if o < self {
            o
        } else {
            self
        }
    }

    /// Nearest `f64`. Values outside the `f64` range saturate to infinity
    /// or zero.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exponent, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        let top = words.len() - 1;
        let hi = words[top] as f64;
        let lo = if top > 0 { words[top - 1] as f64 } else { 0.0 };
        let m = hi + lo * libm::ldexp(1.0, -64);
        let v = libm::ldexp(m, exponent - 64);
        if sign == Sign::Neg {
            -v
        } else {
            v
        }
    }

    /// Decimal representation rounded to `sig` significant digits, in the
    /// form `d.ddd…e±x`.
    pub fn to_sci_string(&self, sig: usize, ctx: &PrecisionCtx) -> String {
        if !self.is_finite() {
            return format!("{}", self.to_f64());
        }
        if self.is_zero() {
            return format!("{:.*}e0", sig.saturating_sub(1), 0.0);
        }
        let s = ctx.with_consts(|cc| self.0.format(Radix::Dec, RM, cc));
        let Ok(s) = s else {
            return format!("{:e}", self.to_f64());
        };
        round_sci(&s, sig)
    }
}

/// Rounds a decimal scientific string such as `-1.23456e-7` to `sig`
/// significant digits, half away from zero.
fn round_sci(s: &str, sig: usize) -> String {
    let sig = sig.max(1);
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (int_part, frac_part) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    let mut digits: alloc::vec::Vec<u8> = int_part
        .bytes()
        .chain(frac_part.bytes())
        .map(|b| b - b'0')
        .collect();
    // Decimal exponent of the first digit of `digits`.
    let mut lead_exp = exp + int_part.len() as i64 - 1;
    let first = digits.iter().position(|&d| d != 0).unwrap_or(0);
    digits.drain(..first);
    lead_exp -= first as i64;
    if digits.is_empty() {
        return format!("{:.*}e0", sig - 1, 0.0);
    }
    if digits.len() > sig {
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    lead_exp += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    digits.resize(sig, 0);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push((b'0' + digits[0]) as char);
    if sig > 1 {
        out.push('.');
        for d in &digits[1..] {
            out.push((b'0' + d) as char);
        }
    }
    out.push_str(&format!("e{lead_exp}"));
    out
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialEq for Real {
    fn eq(&self, o: &Self) -> bool {
        self.0.cmp(&o.0) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.0.cmp(&o.0).map(|c| c.cmp(&0))
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident, $inner:ident, $atr:ident, $amethod:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $method(self, o: &Real) -> Real {
                Real(self.0.$inner(&o.0, self.prec2(o), RM))
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $method(self, o: Real) -> Real {
                self.$method(&o)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $method(self, o: &Real) -> Real {
                (&self).$method(o)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $method(self, o: Real) -> Real {
                (&self).$method(&o)
            }
        }
        impl $tr<i64> for &Real {
            type Output = Real;
            fn $method(self, o: i64) -> Real {
                self.$method(&self.like(o))
            }
        }
        impl $tr<i64> for Real {
            type Output = Real;
            fn $method(self, o: i64) -> Real {
                (&self).$method(o)
            }
        }
        impl $atr<&Real> for Real {
            fn $amethod(&mut self, o: &Real) {
                *self = (&*self).$method(o);
            }
        }
        impl $atr<Real> for Real {
            fn $amethod(&mut self, o: Real) {
                *self = (&*self).$method(&o);
            }
        }
    };
}

real_binop!(Add, add, add, AddAssign, add_assign);
real_binop!(Sub, sub, sub, SubAssign, sub_assign);
real_binop!(Mul, mul, mul, MulAssign, mul_assign);
real_binop!(Div, div, div, DivAssign, div_assign);

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50).unwrap()
    }

    #[test]
    fn powers_with_exact_results() {
        let c = ctx();
        let a = c.parse("0.8").unwrap();
        let cube = a.powr(&c.int(3), &c);
        assert!((cube - c.ratio(64, 125)).abs() < c.pow10(-60));
        let inv = a.powr(&c.int(-2), &c);
        assert!((inv - c.ratio(25, 16)).abs() < c.pow10(-60));
        let root = c.ratio(16, 25).powr(&c.ratio(1, 2), &c);
        assert!((root - c.ratio(4, 5)).abs() < c.pow10(-60));
        let two = c.int(2);
        let s = two.powr(&c.ratio(1, 2), &c);
        assert!((s.sqr() - two).abs() < c.pow10(-60));
    }

    #[test]
    fn arithmetic_and_conversion() {
        let c = ctx();
        let x = c.ratio(1, 3);
        assert!((x.to_f64() - 1.0 / 3.0).abs() < 1e-17);
        let y = &x * 3 - c.one();
        assert!(y.abs() < c.pow10(-60));
        assert_eq!((-c.real(3.25)).to_f64(), -3.25);
        assert_eq!(c.int(1 << 40).to_f64(), (1u64 << 40) as f64);
        assert_eq!(c.zero().to_f64(), 0.0);
    }

    #[test]
    fn parse_is_exact_decimal() {
        let c = ctx();
        let a = c.parse("0.35").unwrap();
        let b = c.ratio(35, 100);
        assert!((a - b).abs() < c.pow10(-65));
        assert!(c.parse("abc").is_err());
    }

    #[test]
    fn transcendental_identities() {
        let c = ctx();
        let x = c.real(0.7);
        let ch = x.cosh(&c);
        let sh = x.sinh(&c);
        assert!((ch.sqr() - sh.sqr() - c.one()).abs() < c.pow10(-60));
        let e = x.exp(&c).ln(&c);
        assert!((e - &x).abs() < c.pow10(-60));
        let s = x.sin(&c);
        let co = x.cos(&c);
        assert!((s.sqr() + co.sqr() - c.one()).abs() < c.pow10(-60));
    }

    #[test]
    fn sci_formatting() {
        let c = ctx();
        assert_eq!(c.ratio(1, 3).to_sci_string(5, &c), "3.3333e-1");
        assert_eq!(c.ratio(2, 3).to_sci_string(3, &c), "6.67e-1");
        assert_eq!(c.int(-1234).to_sci_string(2, &c), "-1.2e3");
        assert_eq!(c.ratio(999_999, 1000).to_sci_string(3, &c), "1.00e3");
        assert_eq!(c.zero().to_sci_string(3, &c), "0.00e0");
    }
}
