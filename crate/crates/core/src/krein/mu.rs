use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{bail, Error, Result};
use crate::numerics::{det, quad_product, Matrix, PrecisionCtx, Real};
use crate::pwspace::{gram_matrix, Space, ZeroConfig};
use crate::report::{ResidualReport, ToleranceMode};
use crate::wronskian::{wronskian_with_derivative, SeedFn};

/// The independent routes to `μ_σ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MuRepresentation {
    Coefficients,
    BorderedGram,
    WronskianRatio,
    HankelQuotient,
    MultipleIntegral,
    FromXY,
}

impl MuRepresentation {
    pub const ALL: [MuRepresentation; 6] = [
        MuRepresentation::Coefficients,
        MuRepresentation::BorderedGram,
        MuRepresentation::WronskianRatio,
        MuRepresentation::HankelQuotient,
        MuRepresentation::MultipleIntegral,
        MuRepresentation::FromXY,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MuRepresentation::Coefficients => "coefficients",
            MuRepresentation::BorderedGram => "bordered-gram",
            MuRepresentation::WronskianRatio => "wronskian",
            MuRepresentation::HankelQuotient => "hankel",
            MuRepresentation::MultipleIntegral => "multint",
            MuRepresentation::FromXY => "xy",
        }
    }

    /// Checks the representation's preconditions against a configuration.
    pub fn check_applicable(self, cfg: &ZeroConfig) -> Result<()> {
        let mismatch = |reason: &str| Error::RepresentationMismatch {
            rep: self.name().into(),
            reason: reason.into(),
        };
        let prog = cfg.progression_data();
        match self {
            MuRepresentation::Coefficients | MuRepresentation::BorderedGram => Ok(()),
            MuRepresentation::WronskianRatio if !cfg.sums_nonzero() => {
                Err(mismatch("needs kappa_i + kappa_j != 0"))
            }
            MuRepresentation::WronskianRatio => Ok(()),
            MuRepresentation::HankelQuotient if prog.is_none() => {
                Err(mismatch("needs an arithmetic progression"))
            }
            MuRepresentation::HankelQuotient => Ok(()),
            MuRepresentation::MultipleIntegral => match prog {
                None => Err(mismatch("needs an arithmetic progression")),
                Some(p) if p.n > 3 => Err(mismatch("quadrature route is limited to n <= 3")),
                Some(p) if !(&p.nu + 1i64).is_positive() => Err(mismatch("needs nu > -1")),
                Some(_) => Ok(()),
            },
            MuRepresentation::FromXY => match prog {
                None => Err(mismatch("needs an arithmetic progression")),
                Some(p) if p.n == 0 => Err(mismatch("needs n >= 1")),
                Some(_) => Ok(()),
            },
        }
    }

    pub fn is_applicable(self, cfg: &ZeroConfig) -> bool {
        self.check_applicable(cfg).is_ok()
    }
}

impl fmt::Display for MuRepresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MuRepresentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Ok(match key.as_str() {
            "coefficients" | "coeff" | "coef" => MuRepresentation::Coefficients,
            "borderedgram" | "bordered" | "gram" => MuRepresentation::BorderedGram,
            "wronskian" | "wronskianratio" => MuRepresentation::WronskianRatio,
            "hankel" | "hankelquotient" => MuRepresentation::HankelQuotient,
            "multint" | "multipleintegral" => MuRepresentation::MultipleIntegral,
            "xy" | "fromxy" => MuRepresentation::FromXY,
            _ => bail!(Precondition, "unknown mu representation '{s}'"),
        })
    }
}

/// Relative tolerance of the quadrature route's order escalation.
const QUAD_TOL: f64 = 1e-12;

/// `μ_σ(x)` by the selected representation.
pub fn mu(cfg: &ZeroConfig, rep: MuRepresentation, ctx: &PrecisionCtx) -> Result<Real> {
    rep.check_applicable(cfg)?;
    if cfg.n() == 0 {
        return Ok(ctx.zero());
    }
    match rep {
        MuRepresentation::Coefficients => mu_coefficients(&Space::new(cfg.clone(), ctx)?, ctx),
        MuRepresentation::BorderedGram => mu_bordered_gram(cfg, ctx),
        MuRepresentation::WronskianRatio => mu_wronskian(cfg, ctx),
        MuRepresentation::HankelQuotient => {
            let p = cfg.progression_data().expect("checked");
            mu_hankel(&p.nu, p.n, &cfg.a(ctx), ctx)
        }
        MuRepresentation::MultipleIntegral => {
            let p = cfg.progression_data().expect("checked");
            mu_multiple_integral(&p.nu, p.n, &cfg.a(ctx), ctx)
        }
        MuRepresentation::FromXY => {
            let p = cfg.progression_data().expect("checked");
            let st = crate::painleve::xy_state(&p.nu, p.n, &cfg.a(ctx), ctx)?;
            Ok(crate::painleve::mu_from_xy(&st, ctx).0)
        }
    }
}

/// Both coefficient forms, which must agree within the solve's accuracy.
pub(crate) fn mu_coefficients(space: &Space, ctx: &PrecisionCtx) -> Result<Real> {
    let (m1, m2) = space.mu_pair(ctx);
    let cond = space.coeffs().cond_estimate;
    let tol = ctx
        .pow10(-(ctx.digits() as i32) / 2)
        .max(ctx.real(cond) * ctx.pow10(-(ctx.digits() as i32)));
    let diff = (&m1 - &m2).abs();
    if diff > &tol * m1.abs().max(m2.abs()) {
        bail!(
            Consistency,
            "coefficient forms of mu disagree: {} vs {}",
            m1.to_f64(),
            m2.to_f64()
        );
    }
    Ok(m1)
}

fn mu_bordered_gram(cfg: &ZeroConfig, ctx: &PrecisionCtx) -> Result<Real> {
    let n = cfg.n();
    let g = gram_matrix(cfg, ctx)?;
    let x = cfg.x();
    let ks = cfg.kappas();
    let m = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => g.get(i, j).clone(),
        (true, false) => (-(&ks[i] * x)).exp(ctx),
        (false, true) => (&ks[j] * x).exp(ctx),
        (false, false) => ctx.zero(),
    });
    let gn = det(&g, ctx)?;
    let v = det(&m, ctx)? * 2 / gn;
    Ok(if n % 2 == 1 { -v } else { v })
}

fn mu_wronskian(cfg: &ZeroConfig, ctx: &PrecisionCtx) -> Result<Real> {
    let ch: Vec<SeedFn> = cfg.kappas().iter().cloned().map(SeedFn::Cosh).collect();
    let sh: Vec<SeedFn> = cfg.kappas().iter().cloned().map(SeedFn::Sinh).collect();
    let (wc, dwc) = wronskian_with_derivative(&ch, cfg.x(), ctx)?;
    let (ws, dws) = wronskian_with_derivative(&sh, cfg.x(), ctx)?;
    if wc.is_zero() || ws.is_zero() {
        return Err(Error::Conditioning {
            estimate: f64::INFINITY,
            context: "seed Wronskian vanishes".into(),
        });
    }
    Ok(-((&dwc / &wc).re - (&dws / &ws).re))
}

/// `∫_a^{1/a} t^p dt`, equal to `-2 log a` for `p = -1`.
fn moment(p: &Real, a: &Real, ctx: &PrecisionCtx) -> Real {
    let p1 = p + 1i64;
    if p1.is_zero() {
        return -(a.ln(ctx) * 2);
    }
    (a.recip().powr(&p1, ctx) - a.powr(&p1, ctx)) / p1
}

/// `∫_a^{1/a} t^p (1/a - t)(t - a) dt`.
fn weighted_moment(p: &Real, a: &Real, ctx: &PrecisionCtx) -> Real {
    let s = a + a.recip();
    -moment(&(p + 2i64), a, ctx) + s * moment(&(p + 1i64), a, ctx) - moment(p, a, ctx)
}

/// `2·det_{n-1}(weighted moments)/det_n(moments)`, Hankel index `ν+i+j`.
pub fn mu_hankel(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<Real> {
    crate::pwspace::check_a(a, ctx)?;
    if n == 0 {
        return Ok(ctx.zero());
    }
    let idx = |i: usize, j: usize| nu + ctx.int((i + j) as i64);
    let den = det(
        &Matrix::from_fn(n, n, |i, j| moment(&idx(i, j), a, ctx)),
        ctx,
    )?;
    let num = if n == 1 {
        ctx.one()
    } else {
        det(
            &Matrix::from_fn(n - 1, n - 1, |i, j| weighted_moment(&idx(i, j), a, ctx)),
            ctx,
        )?
    };
    if den.is_zero() {
        return Err(Error::Conditioning {
            estimate: f64::INFINITY,
            context: "Hankel moment determinant vanishes".into(),
        });
    }
    Ok(num * 2 / den)
}

fn vandermonde_sq(u: &[Real]) -> Real {
    let mut v = u.first().map_or_else(|| unreachable!(), Real::one_like);
    for j in 0..u.len() {
        for i in 0..j {
            v *= (&u[j] - &u[i]).sqr();
        }
    }
    v
}

/// Quotient of the two `[0,1]`-cube integrals obtained from the multiple
/// integral by `t = a + (1/a - a)u`.
pub fn mu_multiple_integral(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<Real> {
    crate::pwspace::check_a(a, ctx)?;
    if n == 0 {
        return Ok(ctx.zero());
    }
    if n > 3 {
        return Err(Error::RepresentationMismatch {
            rep: "multint".into(),
            reason: "n <= 3 only".into(),
        });
    }
    let alpha = a.sqr().recip() - 1i64;
    let base = |u: &Real| (&alpha * u + 1i64).powr(nu, ctx);
    let coupling = |u: &[Real]| Ok(vandermonde_sq(u));
    let start = 8;
    let den = quad_product(|u| Ok(base(u)), coupling, n, start, QUAD_TOL, ctx)?.value;
    let num = if n == 1 {
        ctx.one()
    } else {
        quad_product(
            |u| Ok(base(u) * u * (ctx.one() - u)),
            coupling,
            n - 1,
            start,
            QUAD_TOL,
            ctx,
        )?
        .value
    };
    let l = a.recip() - a;
    Ok(num / den * (2 * n as i64) / l / a.powr(nu, ctx))
}

/// Tolerance for comparisons against the quadrature route at `n = 3`.
pub const QUADRATURE_AGREEMENT: f64 = 1e-6;

/// Every applicable representation, compared pairwise. Pairs involving the
/// quadrature route at `n = 3` use [`QUADRATURE_AGREEMENT`] when it is
/// looser than `tolerance`.
pub fn mu_agreement(
    cfg: &ZeroConfig,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<Vec<ResidualReport>> {
    let mut vals = Vec::new();
    for rep in MuRepresentation::ALL {
        if rep.is_applicable(cfg) {
            vals.push((rep, mu(cfg, rep, ctx)?));
        }
    }
    let inputs = cfg.describe();
    let mut out = Vec::new();
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            let (ri, vi) = &vals[i];
            let (rj, vj) = &vals[j];
            let quad = cfg.n() == 3
                && (*ri == MuRepresentation::MultipleIntegral
                    || *rj == MuRepresentation::MultipleIntegral);
            let tol = if quad {
                tolerance.max(QUADRATURE_AGREEMENT)
            } else {
                tolerance
            };
            let id = alloc::format!("mu_{ri}_vs_{rj}");
            out.push(ResidualReport::compare_real(
                &id,
                inputs.clone(),
                vi,
                vj,
                tol,
                ToleranceMode::Relative,
            ));
        }
    }
    Ok(out)
}

/// `μ_{ν,1} = (ν+1)/sh((ν+1)x)` against the bordered-Gram route.
pub fn mu_closed_form_check(
    nu: &Real,
    a: &Real,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    let cfg = ZeroConfig::progression_at(nu, 1, a, ctx)?;
    let k = nu + 1i64;
    let closed = &k / (&k * cfg.x()).sinh(ctx);
    let got = mu(&cfg, MuRepresentation::BorderedGram, ctx)?;
    Ok(ResidualReport::compare_real(
        "mu_closed_form",
        cfg.describe(),
        &got,
        &closed,
        tolerance,
        ToleranceMode::Relative,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50).unwrap()
    }

    fn rel(a: &Real, b: &Real) -> f64 {
        ((a - b).abs() / a.abs().max(b.abs())).to_f64()
    }

    #[test]
    fn n1_closed_form_every_route() {
        let c = ctx();
        let (k, x) = (c.real(0.85), c.real(1.3));
        let cfg = ZeroConfig::new(vec![k.clone()], x.clone()).unwrap();
        let want = &k * 2 / (&k * &x * 2).sinh(&c);
        for rep in [
            MuRepresentation::Coefficients,
            MuRepresentation::BorderedGram,
            MuRepresentation::WronskianRatio,
        ] {
            assert!(rel(&mu(&cfg, rep, &c).unwrap(), &want) < 1e-45, "{rep}");
        }
    }

    #[test]
    fn progression_n1_closed_form() {
        let c = ctx();
        for nu in [0.0, 0.5, 2.0] {
            let nu = c.real(nu);
            let a = c.real(0.35);
            let cfg = ZeroConfig::progression_at(&nu, 1, &a, &c).unwrap();
            let x = cfg.x().clone();
            let want = (&nu + 1i64) / ((&nu + 1i64) * &x).sinh(&c);
            for rep in MuRepresentation::ALL {
                let tol = if rep == MuRepresentation::MultipleIntegral {
                    1e-10
                } else {
                    1e-40
                };
                assert!(rel(&mu(&cfg, rep, &c).unwrap(), &want) < tol, "{rep}");
            }
        }
    }

    #[test]
    fn n0_is_zero() {
        let c = ctx();
        let cfg = ZeroConfig::new(vec![], c.real(1.0)).unwrap();
        assert!(mu(&cfg, MuRepresentation::Coefficients, &c)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn all_routes_agree_nu0_n2() {
        let c = ctx();
        let cfg = ZeroConfig::progression_at(&c.zero(), 2, &c.real(0.5), &c).unwrap();
        let vals: Vec<Real> = MuRepresentation::ALL
            .iter()
            .map(|r| mu(&cfg, *r, &c).unwrap())
            .collect();
        for v in &vals {
            assert!(rel(v, &vals[0]) < 1e-8);
        }
    }

    #[test]
    fn routes_agree_n3_half_integer() {
        let c = ctx();
        let cfg = ZeroConfig::progression_at(&c.real(0.5), 3, &c.real(0.65), &c).unwrap();
        let base = mu(&cfg, MuRepresentation::BorderedGram, &c).unwrap();
        for rep in MuRepresentation::ALL {
            let tol = if rep == MuRepresentation::MultipleIntegral {
                1e-6
            } else {
                1e-30
            };
            assert!(rel(&mu(&cfg, rep, &c).unwrap(), &base) < tol, "{rep}");
        }
    }

    #[test]
    fn applicability() {
        let c = ctx();
        let plain = ZeroConfig::new(vec![c.real(0.5), c.real(-0.5)], c.real(1.0)).unwrap();
        assert!(matches!(
            mu(&plain, MuRepresentation::WronskianRatio, &c),
            Err(Error::RepresentationMismatch { .. })
        ));
        assert!(matches!(
            mu(&plain, MuRepresentation::HankelQuotient, &c),
            Err(Error::RepresentationMismatch { .. })
        ));
        let big = ZeroConfig::progression_at(&c.zero(), 4, &c.real(0.5), &c).unwrap();
        assert!(!MuRepresentation::MultipleIntegral.is_applicable(&big));
        assert!(MuRepresentation::HankelQuotient.is_applicable(&big));
    }

    #[test]
    fn log_moment() {
        let c = ctx();
        let a = c.real(0.4);
        assert!((moment(&c.int(-1), &a, &c) + a.ln(&c) * 2).abs() < c.pow10(-60));
        let m0 = moment(&c.zero(), &a, &c);
        assert!((m0 - (a.recip() - &a)).abs() < c.pow10(-60));
    }

    #[test]
    fn parse_names() {
        for rep in MuRepresentation::ALL {
            assert_eq!(rep.name().parse::<MuRepresentation>().unwrap(), rep);
        }
        assert_eq!(
            "BorderedGram".parse::<MuRepresentation>().unwrap(),
            MuRepresentation::BorderedGram
        );
        assert!("bogus".parse::<MuRepresentation>().is_err());
    }

    #[test]
    fn agreement_reports() {
        let c = ctx();
        let cfg = ZeroConfig::progression_at(&c.ratio(1, 2), 2, &c.ratio(7, 20), &c).unwrap();
        let reps = mu_agreement(&cfg, 1e-8, &c).unwrap();
        assert_eq!(reps.len(), 15);
        assert!(reps.iter().all(|r| r.pass), "{reps:?}");
        let r = mu_closed_form_check(&c.int(2), &c.ratio(13, 20), 1e-10, &c).unwrap();
        assert!(r.pass && r.rel_residual < 1e-40, "{r:?}");
    }
}
