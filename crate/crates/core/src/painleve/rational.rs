use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Error, Result};
use crate::numerics::exact::{det_exact, nullspace_exact, Rational};
use crate::numerics::{Matrix, PrecisionCtx};
use crate::report::{ResidualReport, ToleranceMode};

/// Largest numerator/denominator degree tried by [`reconstruct_q`].
pub const MAX_DEGREE: usize = 40;
/// Held-out points used to validate a fit.
const HELD_OUT: usize = 3;

/// `q(b) = P(b)/Q(b)` with coefficients in increasing powers and `Q`
/// normalised so its lowest nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFit {
    pub numerator: Vec<Rational>,
    pub denominator: Vec<Rational>,
    /// Degree bound at which the fit was found.
    pub degree: usize,
}

impl RationalFit {
    pub fn eval(&self, b: &Rational) -> Option<Rational> {
        let d = horner(&self.denominator, b);
        if d.is_zero() {
            None
        } else {
            Some(horner(&self.numerator, b) / d)
        }
    }
}

fn horner(c: &[Rational], b: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, k| acc * b + k)
}

fn fmt_poly(c: &[Rational]) -> String {
    let mut terms = Vec::new();
    for (k, v) in c.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let mag = v.abs();
        let coef = if mag.is_one() && k > 0 {
            String::new()
        } else {
            format!("{mag}")
        };
        let var = match k {
            0 => String::new(),
            1 => String::from("b"),
            _ => format!("b^{k}"),
        };
        let body = match (coef.is_empty(), var.is_empty()) {
            (true, _) => var,
            (false, true) => coef,
            (false, false) => format!("{coef}*{var}"),
        };
        let sign = if v.is_negative() { "-" } else { "+" };
        terms.push((sign, body));
    }
    if terms.is_empty() {
        return String::from("0");
    }
    let mut s = String::new();
    for (i, (sign, body)) in terms.iter().enumerate() {
        if i == 0 {
            if *sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(if *sign == "-" { " - " } else { " + " });
        }
        s.push_str(body);
    }
    s
}

impl fmt::Display for RationalFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})/({})",
            fmt_poly(&self.numerator),
            fmt_poly(&self.denominator)
        )
    }
}

fn rpow(a: &Rational, k: i64) -> Rational {
    let mut r = Rational::one();
    for _ in 0..k.unsigned_abs() {
        r *= a;
    }
    if k < 0 {
        r.recip()
    } else {
        r
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `∫_a^{1/a} t^p dt` for integer `p ≥ 0`.
fn moment(p: i64, a: &Rational) -> Rational {
    (rpow(a, -(p + 1)) - rpow(a, p + 1)) / int(p + 1)
}

fn weighted_moment(p: i64, a: &Rational) -> Rational {
    let s = a + a.recip();
    -moment(p + 2, a) + s * moment(p + 1, a) - moment(p, a)
}

/// `μ_{ν,n}(a)` exactly for integer `ν ≥ 0` and rational `a`.
fn mu_exact(nu: i64, n: usize, a: &Rational) -> Result<Rational> {
    let idx = |i: usize, j: usize| nu + (i + j) as i64;
    let den = det_exact(&Matrix::from_fn(n, n, |i, j| moment(idx(i, j), a)))?;
    let num = if n == 1 {
        Rational::one()
    } else {
        det_exact(&Matrix::from_fn(n - 1, n - 1, |i, j| {
            weighted_moment(idx(i, j), a)
        }))?
    };
    if den.is_zero() {
        bail!(Degenerate, "exact moment determinant vanishes");
    }
    Ok(int(2) * num / den)
}

/// `q = a μ_{ν+1,n}/μ_{ν,n}` exactly.
pub fn q_exact(nu: i64, n: usize, a: &Rational) -> Result<Rational> {
    let m0 = mu_exact(nu, n, a)?;
    if m0.is_zero() {
        bail!(Pole, "mu_nu vanishes");
    }
    Ok(a * mu_exact(nu + 1, n, a)? / m0)
}

fn sample_a(i: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(i as i64 + 2))
}

fn held_out_a(j: usize) -> Rational {
    Rational::new(BigInt::from(2), BigInt::from(2 * j as i64 + 5))
}

fn fit_degree(samples: &[(Rational, Rational)], d: usize) -> Option<RationalFit> {
    let m = 2 * d + 1;
    if samples.len() < m {
        return None;
    }
    let mat = Matrix::from_fn(m, 2 * d + 2, |i, j| {
        let (b, q) = &samples[i];
        if j <= d {
            rpow(b, j as i64)
        } else {
            -(q * rpow(b, (j - d - 1) as i64))
        }
    });
    let basis = nullspace_exact(&mat);
    let v = basis.into_iter().next()?;
    let (num, den) = v.split_at(d + 1);
    let lead = den.iter().find(|c| !c.is_zero())?.clone();
    Some(RationalFit {
        numerator: num.iter().map(|c| c / &lead).collect(),
        denominator: den.iter().map(|c| c / &lead).collect(),
        degree: d,
    })
}

/// Reconstructs `q(b)` for integer `ν ≥ 0` from exact values, trying degree
/// bounds `0, 1, …, MAX_DEGREE` and accepting the first fit that reproduces
/// `q` exactly at held-out points.
pub fn reconstruct_q(nu: i64, n: usize) -> Result<RationalFit> {
    if nu < 0 || n == 0 {
        bail!(
            Precondition,
            "exact reconstruction needs integer nu >= 0 and n >= 1"
        );
    }
    let point = |a: Rational| -> Result<(Rational, Rational)> {
        let q = q_exact(nu, n, &a)?;
        Ok((&a * &a, q))
    };
    let held: Vec<(Rational, Rational)> = (0..HELD_OUT)
        .map(|j| point(held_out_a(j)))
        .collect::<Result<_>>()?;
    let mut samples: Vec<(Rational, Rational)> = Vec::new();
    for d in 0..=MAX_DEGREE {
        while samples.len() < 2 * d + 1 {
            samples.push(point(sample_a(samples.len()))?);
        }
        if let Some(fit) = fit_degree(&samples, d) {
            if held.iter().all(|(b, q)| fit.eval(b).as_ref() == Some(q)) {
                return Ok(fit);
            }
        }
    }
    Err(Error::Consistency(format!(
        "no rational function of degree <= {MAX_DEGREE} fits q for nu={nu} n={n}"
    )))
}

/// Exact reconstruction of `q(b)` with held-out validation; the note
/// carries the recovered function.
pub fn rationality_check(nu: i64, n: usize, ctx: &PrecisionCtx) -> Result<ResidualReport> {
    let inputs = format!("nu={nu} n={n}");
    if nu < 0 || n == 0 {
        bail!(
            Precondition,
            "rationality check needs integer nu >= 0 and n >= 1"
        );
    }
    match reconstruct_q(nu, n) {
        Ok(fit) => {
            let z = crate::numerics::Complex::zero(ctx);
            let mut r = ResidualReport::compare(
                "rationality",
                inputs,
                &z,
                &z,
                0.0,
                ToleranceMode::Absolute,
            );
            r.note = Some(format!("q(b) = {fit}"));
            Ok(r)
        }
        Err(Error::Consistency(reason)) => Ok(ResidualReport::failed(
            "rationality",
            inputs,
            0.0,
            ToleranceMode::Absolute,
            reason,
        )),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Real;
    use alloc::string::ToString;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn nu0_n1_closed_form() {
        let fit = reconstruct_q(0, 1).unwrap();
        assert_eq!(fit.numerator, [r(0, 1), r(2, 1)]);
        assert_eq!(fit.denominator, [r(1, 1), r(1, 1)]);
        assert_eq!(alloc::string::ToString::to_string(&fit), "(2*b)/(1 + b)");
    }

    #[test]
    fn nu1_n1_and_nu0_n2_validate() {
        for (nu, n) in [(1, 1), (0, 2)] {
            let fit = reconstruct_q(nu, n).unwrap();
            for a in [r(3, 11), r(5, 8)] {
                let b = &a * &a;
                assert_eq!(fit.eval(&b).unwrap(), q_exact(nu, n, &a).unwrap());
            }
        }
    }

    #[test]
    fn exact_matches_floating_point() {
        let c = PrecisionCtx::new(50).unwrap();
        let q = q_exact(1, 2, &r(2, 5)).unwrap();
        let qf = crate::painleve::q_value(&c.one(), 2, &c.ratio(2, 5), &c).unwrap();
        let num = Real::parse(&q.numer().to_string(), &c).unwrap();
        let den = Real::parse(&q.denom().to_string(), &c).unwrap();
        assert!(((num / den) - qf).abs() < c.pow10(-40));
    }

    #[test]
    fn report_carries_formula() {
        let c = PrecisionCtx::new(30).unwrap();
        let rep = rationality_check(0, 1, &c).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.note.as_deref(), Some("q(b) = (2*b)/(1 + b)"));
        assert!(rationality_check(-1, 1, &c).is_err());
    }

    #[test]
    fn polynomial_formatting() {
        assert_eq!(fmt_poly(&[r(-1, 2), r(0, 1), r(-3, 1)]), "-1/2 - 3*b^2");
        assert_eq!(fmt_poly(&[]), "0");
    }
}
