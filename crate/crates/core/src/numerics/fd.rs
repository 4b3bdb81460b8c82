use alloc::vec::Vec;

use super::{PrecisionCtx, Real, Scalar};
use crate::error::{bail, Error, Result};

/// Order of a finite-difference derivative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivOrder {
    First,
    Second,
}

impl TryFrom<u8> for DerivOrder {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(DerivOrder::First),
            2 => Ok(DerivOrder::Second),
            _ => bail!(
                Precondition,
                "finite differences support orders 1 and 2, got {v}"
            ),
        }
    }
}

/// Derivative estimate with an error estimate taken from the last two
/// Richardson columns.
#[derive(Clone, Debug)]
pub struct Derivative<T> {
    pub value: T,
    pub error: Real,
}

/// Central-difference derivative of `f` at `x0` with Richardson
/// extrapolation over step halvings.
///
/// The base step is `fd_step·max(1, |x0|)`; `richardson_levels` central
/// differences are combined. Errors raised by `f` inside the stencil are
/// propagated.
pub fn fd_derivative<T, F>(
    mut f: F,
    x0: &Real,
    order: DerivOrder,
    ctx: &PrecisionCtx,
) -> Result<Derivative<T>>
where
    T: Scalar,
    F: FnMut(&Real) -> Result<T>,
{
    let one = ctx.one();
    let h0 = ctx.real(ctx.fd_step()) * x0.abs().max(one.clone());
    let levels = ctx.richardson_levels() as usize;
    let center = match order {
        DerivOrder::Second => Some(f(x0)?),
        DerivOrder::First => None,
    };
    let mut stencil = |h: &Real| -> Result<T> {
        let fp = f(&(x0 + h))?;
        let fm = f(&(x0 - h))?;
        Ok(match &center {
            None => fp.sub_ref(&fm).scale(&(h * 2).recip()),
            Some(c) => fp
                .add_ref(&fm)
                .sub_ref(&c.scale(&ctx.int(2)))
                .scale(&h.sqr().recip()),
        })
    };
    let count = levels.max(2);
    let mut h = h0;
    let mut table: Vec<Vec<T>> = Vec::with_capacity(count);
    for i in 0..count {
        let mut row = Vec::with_capacity(i + 1);
        row.push(stencil(&h)?);
        let mut factor = one.clone();
        for j in 1..=i {
            factor = factor * 4;
            let prev = &table[i - 1][j - 1];
            let cur = &row[j - 1];
            let next = cur.add_ref(&cur.sub_ref(prev).scale(&(&factor - &one).recip()));
            row.push(next);
        }
        table.push(row);
        h = h / 2;
    }
    let (value, error) = if levels >= 2 {
        let last = &table[levels - 1];
        (
            last[levels - 1].clone(),
            last[levels - 1].sub_ref(&last[levels - 2]).magnitude(),
        )
    } else {
        (
            table[0][0].clone(),
            table[0][0].sub_ref(&table[1][0]).magnitude(),
        )
    };
    if !value.is_finite() {
        bail!(Evaluation, "finite-difference derivative is not finite");
    }
    Ok(Derivative { value, error })
}
