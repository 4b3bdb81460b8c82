use alloc::vec::Vec;

use super::{Real, Scalar};
use crate::error::{bail, Result};

/// Truncated Taylor expansion `Σ c_k (x - x0)^k`, `k < len`.
///
/// Arithmetic truncates to the shorter operand, so derivatives computed from
/// a jet are exact up to rounding rather than finite-difference
/// approximations.
#[derive(Clone, Debug)]
pub struct Jet<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Jet<T> {
    /// Builds the jet from derivatives `f(x0), f'(x0), f''(x0), …`.
    pub fn from_derivatives(derivs: Vec<T>) -> Self {
        let mut fact = match derivs.first() {
            Some(d) => d.magnitude().one_like(),
            None => return Jet { coeffs: derivs },
        };
        let coeffs = derivs
            .into_iter()
            .enumerate()
            .map(|(k, d)| {
                if k > 1 {
                    fact = fact.clone() * k as i64;
                }
                d.scale(&fact.recip())
            })
            .collect();
        Jet { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn value(&self) -> &T {
        &self.coeffs[0]
    }

    /// `m`-th derivative at the expansion point.
    pub fn nth_derivative(&self, m: usize) -> Result<T> {
        let Some(c) = self.coeffs.get(m) else {
            bail!(
                Precondition,
                "jet of length {} has no derivative of order {m}",
                self.len()
            );
        };
        let mut fact = c.magnitude().one_like();
        for k in 2..=m {
            fact = fact * k as i64;
        }
        Ok(c.scale(&fact))
    }

    /// Derivative jet, one coefficient shorter.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&(c.magnitude().one_like() * k as i64)))
            .collect();
        Jet { coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        let coeffs = (0..n)
            .map(|k| {
                let mut acc = self.coeffs[0].mul_ref(&o.coeffs[k]);
                for i in 1..=k {
                    acc = acc.add_ref(&self.coeffs[i].mul_ref(&o.coeffs[k - i]));
                }
                acc
            })
            .collect();
        Jet { coeffs }
    }

    /// Quotient; fails when the divisor vanishes at the expansion point.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let n = self.len().min(o.len());
        if n > 0 && o.coeffs[0].is_zero() {
            bail!(
                Domain,
                "jet division by a function vanishing at the expansion point"
            );
        }
        let mut q: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                acc = acc.sub_ref(&o.coeffs[i].mul_ref(&q[k - i]));
            }
            q.push(acc.div_ref(&o.coeffs[0]));
        }
        Ok(Jet { coeffs: q })
    }

    pub fn scale(&self, r: &Real) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(Scalar::neg_ref).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PrecisionCtx;

    #[test]
    fn exp_times_exp_inverse_is_one() {
        let c = PrecisionCtx::new(40).unwrap();
        let x = c.real(0.3);
        let e = x.exp(&c);
        let ei = e.recip();
        let f = Jet::from_derivatives(alloc::vec![e.clone(); 6]);
        let g = Jet::from_derivatives(
            (0..6)
                .map(|k| if k % 2 == 0 { ei.clone() } else { -&ei })
                .collect(),
        );
        let p = f.mul(&g);
        assert!((p.value().clone() - c.one()).abs() < c.pow10(-50));
        for m in 1..6 {
            assert!(p.nth_derivative(m).unwrap().abs() < c.pow10(-48));
        }
    }

    #[test]
    fn quotient_rule_and_derivative() {
        let c = PrecisionCtx::new(40).unwrap();
        let x = c.real(0.8);
        // tanh = sinh/cosh, tanh' = 1 - tanh².
        let sh = x.sinh(&c);
        let ch = x.cosh(&c);
        let s = Jet::from_derivatives(alloc::vec![sh.clone(), ch.clone(), sh.clone(), ch.clone()]);
        let k = Jet::from_derivatives(alloc::vec![ch.clone(), sh.clone(), ch.clone(), sh.clone()]);
        let t = s.div(&k).unwrap();
        let th = x.tanh(&c);
        assert!((t.derivative().value().clone() - (c.one() - th.sqr())).abs() < c.pow10(-50));
        let second = t.nth_derivative(2).unwrap();
        let want = -(th.clone() * 2) * (c.one() - th.sqr());
        assert!((second - want).abs() < c.pow10(-50));
        assert!(t.nth_derivative(4).is_err());
    }
}
