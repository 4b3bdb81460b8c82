//! The μ-function of a space with prescribed zeros, its τ-function and the
//! Darboux/Crum transformations that produce it from the Paley-Wiener
//! system.

mod darboux;
mod mu;

pub use darboux::{
    crum_equivalence, crum_tau_residual, crum_transform, darboux_iterate, darboux_step,
    first_order_residual, potential_shift_residual, schrodinger_residual, CrumValue, DarbouxChain,
    DarbouxState,
};
pub(crate) use mu::mu_coefficients;
pub use mu::{
    mu, mu_agreement, mu_closed_form_check, mu_hankel, mu_multiple_integral, MuRepresentation,
    QUADRATURE_AGREEMENT,
};

use alloc::format;

use crate::error::Result;
use crate::numerics::{det, fd_derivative, Complex, DerivOrder, PrecisionCtx, Real};
use crate::pwspace::{gram_matrix, Space, ZeroConfig};
use crate::report::{ResidualReport, ToleranceMode};

/// Default tolerance of the finite-difference residual checks.
pub const FD_TOLERANCE: f64 = 1e-6;

/// `μ² + (d/dx)² log g_n`, where `g_n` is the Gram determinant; with
/// `a d/da = -d/dx` this is `μ² + (a d/da)² log g_n`.
pub fn tau_consistency(cfg: &ZeroConfig, ctx: &PrecisionCtx) -> Result<ResidualReport> {
    let inputs = cfg.describe();
    if cfg.n() == 0 {
        let z = Complex::zero(ctx);
        return Ok(ResidualReport::compare(
            "tau",
            inputs,
            &z,
            &z,
            FD_TOLERANCE,
            ToleranceMode::Absolute,
        ));
    }
    let m = mu_coefficients(&Space::new(cfg.clone(), ctx)?, ctx)?;
    let log_g = |y: &Real| -> Result<Real> {
        Ok(det(&gram_matrix(&cfg.with_x(y.clone())?, ctx)?, ctx)?.ln(ctx))
    };
    let d2 = fd_derivative(log_g, cfg.x(), DerivOrder::Second, ctx)?.value;
    Ok(ResidualReport::compare_real(
        "tau",
        inputs,
        &m.sqr(),
        &-d2,
        FD_TOLERANCE,
        ToleranceMode::Absolute,
    ))
}

/// Residuals of `dE/dx - tE - μF` and `dF/dx + tF - μE` at `E_σ(it)`,
/// `F_σ(it)`; the `x`-derivative re-solves the coefficients at every
/// stencil node. The larger residual is reported relative to the largest
/// term of its equation.
pub fn krein_residual(cfg: &ZeroConfig, t: &Real, ctx: &PrecisionCtx) -> Result<ResidualReport> {
    let space = Space::new(cfg.clone(), ctx)?;
    let m = if cfg.n() == 0 {
        ctx.zero()
    } else {
        mu_coefficients(&space, ctx)?
    };
    let (e, f) = space.ef_real(t, ctx);
    let pack = |y: &Real| -> Result<Complex> {
        let (e, f) = Space::new(cfg.with_x(y.clone())?, ctx)?.ef_real(t, ctx);
        Ok(Complex::new(e, f))
    };
    let d = fd_derivative(pack, cfg.x(), DerivOrder::First, ctx)?.value;
    let (te, tf, me, mf) = (t * &e, t * &f, &m * &e, &m * &f);
    let re = &d.re - &te - &mf;
    let rf = &d.im + &tf - &me;
    let scale_e = d.re.abs().max(te.abs()).max(mf.abs());
    let scale_f = d.im.abs().max(tf.abs()).max(me.abs());
    let inputs = format!("{} t={}", cfg.describe(), t.to_f64());
    Ok(worst_of(
        "krein",
        inputs,
        [(re, scale_e), (rf, scale_f)],
        ctx,
    ))
}

/// Residuals of `dc_j/dx - κ_j c_j - μ d_j` and `dd_j/dx + κ_j d_j - μ c_j`
/// for every `j`, worst one reported relative to the largest term.
pub fn coefficient_ode_residual(cfg: &ZeroConfig, ctx: &PrecisionCtx) -> Result<ResidualReport> {
    let inputs = cfg.describe();
    let space = Space::new(cfg.clone(), ctx)?;
    if cfg.n() == 0 {
        let z = Complex::zero(ctx);
        return Ok(ResidualReport::compare(
            "coefficient_ode",
            inputs,
            &z,
            &z,
            FD_TOLERANCE,
            ToleranceMode::Relative,
        ));
    }
    let m = mu_coefficients(&space, ctx)?;
    let co = space.coeffs();
    let mut terms = alloc::vec::Vec::new();
    for (j, k) in cfg.kappas().iter().enumerate() {
        let pack = |y: &Real| -> Result<Complex> {
            let s = Space::new(cfg.with_x(y.clone())?, ctx)?;
            Ok(Complex::new(
                s.coeffs().c[j].clone(),
                s.coeffs().d[j].clone(),
            ))
        };
        let d = fd_derivative(pack, cfg.x(), DerivOrder::First, ctx)?.value;
        let (kc, md) = (k * &co.c[j], &m * &co.d[j]);
        let (kd, mc) = (k * &co.d[j], &m * &co.c[j]);
        terms.push((&d.re - &kc - &md, d.re.abs().max(kc.abs()).max(md.abs())));
        terms.push((&d.im + &kd - &mc, d.im.abs().max(kd.abs()).max(mc.abs())));
    }
    Ok(worst_of("coefficient_ode", inputs, terms, ctx))
}

fn worst_of(
    id: &str,
    inputs: alloc::string::String,
    terms: impl IntoIterator<Item = (Real, Real)>,
    ctx: &PrecisionCtx,
) -> ResidualReport {
    let terms: alloc::vec::Vec<(Real, Real)> = terms.into_iter().collect();
    let all = terms
        .iter()
        .map(|t| t.1.clone())
        .fold(ctx.zero(), Real::max)
        * ctx.pow10(-20);
    let mut best: Option<(Real, Real, Real)> = None;
    for (r, s) in terms {
        let s = s.max(all.clone());
        let rel = if s.is_zero() { r.abs() } else { r.abs() / &s };
        if best.as_ref().map_or(true, |b| rel > b.2) {
            best = Some((r, s, rel));
        }
    }
    let (r, s, _) = best.unwrap_or_else(|| (ctx.zero(), ctx.one(), ctx.zero()));
    let z = Complex::zero(ctx);
    ResidualReport::with_scale(
        id,
        inputs,
        &Complex::from_real(r),
        &z,
        &s,
        FD_TOLERANCE,
        ToleranceMode::Relative,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50).unwrap()
    }

    #[test]
    fn tau_examples() {
        let c = ctx();
        let cfg = ZeroConfig::new(vec![c.real(0.8)], c.real(1.1)).unwrap();
        assert!(tau_consistency(&cfg, &c).unwrap().pass);
        let empty = ZeroConfig::new(vec![], c.real(1.1)).unwrap();
        assert!(tau_consistency(&empty, &c).unwrap().pass);
        for a in [0.3, 0.5, 0.7] {
            let cfg = ZeroConfig::progression_at(&c.one(), 2, &c.real(a), &c).unwrap();
            let r = tau_consistency(&cfg, &c).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn krein_examples() {
        let c = ctx();
        let empty = ZeroConfig::new(vec![], c.one()).unwrap();
        assert!(krein_residual(&empty, &c.real(0.7), &c).unwrap().pass);
        let one = ZeroConfig::new(vec![c.one()], c.one()).unwrap();
        let r = krein_residual(&one, &c.real(0.7), &c).unwrap();
        assert!(r.pass, "{r:?}");
        let three = ZeroConfig::progression_at(&c.zero(), 3, &c.real(0.4), &c).unwrap();
        let r = krein_residual(&three, &c.int(-2), &c).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn coefficient_odes() {
        let c = ctx();
        for (ks, x) in [
            (vec![0.5], 0.9),
            (vec![0.5, 1.5, 2.5], 0.6),
            (vec![0.3, 1.1, 1.8, 2.9], 1.7),
        ] {
            let cfg =
                ZeroConfig::new(ks.into_iter().map(|k| c.real(k)).collect(), c.real(x)).unwrap();
            let r = coefficient_ode_residual(&cfg, &c).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
