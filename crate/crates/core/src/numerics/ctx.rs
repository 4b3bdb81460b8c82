use alloc::format;
use core::cell::RefCell;
use core::fmt;

use astro_float::{Consts, RoundingMode};

use super::Real;
use crate::error::{bail, Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Extra decimal digits carried beyond the target so that cancellation in
/// large determinants does not eat into the requested accuracy.
const GUARD_DIGITS: u32 = 20;
const LOG2_10: f64 = core::f64::consts::LOG2_10;
const WORD_BITS: usize = 64;

/// Working precision and finite-difference policy.
///
/// `digits` is the target number of significant decimal digits. Arithmetic is
/// carried out with `digits + 20` decimal digits, rounded up to whole 64-bit
/// words. The context owns a cache of transcendental constants; it is cheap to
/// clone (each clone gets its own cache) but is not `Sync`, so parallel
/// callers create one context per worker.
pub struct PrecisionCtx {
    digits: u32,
    fd_step: f64,
    richardson_levels: u32,
    bits: usize,
    consts: RefCell<Consts>,
}

impl PrecisionCtx {
    /// Context with the default finite-difference step `10^(-digits/4)` and
    /// three Richardson levels.
    pub fn new(digits: u32) -> Result<Self> {
        if digits < 15 {
            bail!(Precondition, "digits must be at least 15, got {digits}");
        }
        let raw_bits = libm::ceil(f64::from(digits + GUARD_DIGITS) * LOG2_10) as usize;
        let bits = raw_bits.div_ceil(WORD_BITS) * WORD_BITS;
        let consts =
            Consts::new().map_err(|e| Error::Evaluation(format!("constant cache: {e:?}")))?;
        Ok(Self {
            digits,
            fd_step: libm::pow(10.0, -f64::from(digits) / 4.0),
            richardson_levels: 3,
            bits,
            consts: RefCell::new(consts),
        })
    }

    pub fn with_fd_step(mut self, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            bail!(Precondition, "fd_step must be positive, got {step}");
        }
        self.fd_step = step;
        Ok(self)
    }

    pub fn with_richardson_levels(mut self, levels: u32) -> Result<Self> {
        if levels == 0 {
            bail!(Precondition, "richardson_levels must be at least 1");
        }
        self.richardson_levels = levels;
        Ok(self)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn richardson_levels(&self) -> u32 {
        self.richardson_levels
    }

    /// Mantissa length in bits used for new values.
    pub fn bits(&self) -> usize {
        self.bits
    }

    pub(crate) fn with_consts<R>(&self, f: impl FnOnce(&mut Consts) -> R) -> R {
        f(&mut self.consts.borrow_mut())
    }

    pub fn real(&self, v: f64) -> Real {
        Real::from_f64(v, self)
    }

    pub fn int(&self, v: i64) -> Real {
        Real::from_i64(v, self)
    }

    pub fn ratio(&self, p: i64, q: i64) -> Real {
        self.int(p) / self.int(q)
    }

    pub fn zero(&self) -> Real {
        self.int(0)
    }

    pub fn one(&self) -> Real {
        self.int(1)
    }

    /// Parses a decimal literal such as `0.35` or `-1.5e-3` exactly to
    /// working precision (no detour through `f64`).
    pub fn parse(&self, s: &str) -> Result<Real> {
        Real::parse(s, self)
    }

    pub fn pi(&self) -> Real {
        Real(self.with_consts(|cc| cc.pi(self.bits, RM)))
    }

    /// `10^e` at working precision.
    pub fn pow10(&self, e: i32) -> Real {
        let ten = self.int(10);
        let p = ten.powi(e.unsigned_abs() as usize);
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// `10^(-digits)`, the target relative accuracy.
    pub fn eps(&self) -> Real {
        self.pow10(-(self.digits as i32))
    }
}

impl Clone for PrecisionCtx {
    fn clone(&self) -> Self {
        let mut fresh = Self::new(self.digits).expect("constant cache was constructible before");
        fresh.fd_step = self.fd_step;
        fresh.richardson_levels = self.richardson_levels;
        fresh
    }
}

impl fmt::Debug for PrecisionCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrecisionCtx")
            .field("digits", &self.digits)
            .field("fd_step", &self.fd_step)
            .field("richardson_levels", &self.richardson_levels)
            .field("bits", &self.bits)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_low_digits() {
        assert!(PrecisionCtx::new(14).is_err());
        assert!(PrecisionCtx::new(15).is_ok());
    }

    #[test]
    fn default_policy() {
        let ctx = PrecisionCtx::new(50).unwrap();
        assert_eq!(ctx.richardson_levels(), 3);
        assert!((ctx.fd_step() / 10f64.powf(-12.5) - 1.0).abs() < 1e-12);
        assert!(ctx.bits() >= 70 * 3 && ctx.bits() % 64 == 0);
    }

    #[test]
    fn rejects_bad_policy() {
        let ctx = PrecisionCtx::new(30).unwrap();
        assert!(ctx.clone().with_fd_step(0.0).is_err());
        assert!(ctx.with_richardson_levels(0).is_err());
    }
}
