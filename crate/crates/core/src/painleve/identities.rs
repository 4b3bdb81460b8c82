use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{corner_from_spaces, spaces, CornerValues};
use crate::error::Result;
use crate::krein::{mu, MuRepresentation};
use crate::numerics::{Complex, PrecisionCtx, Real};
use crate::pwspace::{ab_sigma, kernel_complete_gram, Space, ZeroConfig};
use crate::report::{ResidualReport, ToleranceMode};

/// Tolerance of every identity in the suite.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

fn check(id: &str, inputs: &str, lhs: &Complex, rhs: &Complex) -> ResidualReport {
    ResidualReport::compare(
        id,
        String::from(inputs),
        lhs,
        rhs,
        IDENTITY_TOLERANCE,
        ToleranceMode::Relative,
    )
}

fn check_real(id: &str, inputs: &str, lhs: &Real, rhs: &Real) -> ResidualReport {
    ResidualReport::compare_real(
        id,
        String::from(inputs),
        lhs,
        rhs,
        IDENTITY_TOLERANCE,
        ToleranceMode::Relative,
    )
}

/// Every shift recurrence, corner-coefficient relation, compatibility
/// relation, μ recurrence and `n → n+1` kernel relation at `(ν, n, a)`.
///
/// Pointwise identities are evaluated once per sample in `w_samples`.
pub fn identity_suite(
    nu: &Real,
    n: usize,
    a: &Real,
    w_samples: &[Complex],
    ctx: &PrecisionCtx,
) -> Result<Vec<ResidualReport>> {
    let (s0, s1) = spaces(nu, n, a, ctx)?;
    let cv = corner_from_spaces(nu, n, &s0, &s1, ctx)?;
    let base = format!("nu={} n={n} a={}", nu.to_f64(), a.to_f64());
    let mut out = Vec::new();
    corner_relations(&cv, n, a, &base, &mut out, ctx);
    mu_recurrences(nu, n, a, &cv, &base, &mut out, ctx)?;
    for w in w_samples {
        let inputs = format!("{base} w={:?}", w.to_f64());
        shift_recurrences(nu, n, a, &s0, &s1, &cv, w, &inputs, &mut out, ctx);
        kernel_step(nu, n, a, w, &inputs, &mut out, ctx)?;
    }
    Ok(out)
}

fn corner_relations(
    cv: &CornerValues,
    n: usize,
    a: &Real,
    inputs: &str,
    out: &mut Vec<ResidualReport>,
    ctx: &PrecisionCtx,
) {
    let sa = a.sqrt();
    let nn = ctx.int(n as i64);
    let (c1, d1, cn, dn) = (cv.c1_nu(), cv.d1_nu(), cv.cn_nu1(), cv.dn_nu1());
    let (e, f, g, h) = (&cv.e_nu, &cv.f_nu, &cv.g_nu1, &cv.h_nu1);
    let hg = h * dn - g * cn;
    let fe = f * d1 - e * c1;
    out.push(check_real("rr1", inputs, &(&nn * cn), &(&sa * c1 * &hg)));
    out.push(check_real("rr2", inputs, &(&nn * dn), &(d1 / &sa * &hg)));
    out.push(check_real("rr3", inputs, &-(&nn * c1), &(cn / &sa * &fe)));
    out.push(check_real("rr4", inputs, &-(&nn * d1), &(&sa * dn * &fe)));
    out.push(check_real("comp1", inputs, &(c1 * h), &-(cn * f)));
    out.push(check_real("comp2", inputs, &(d1 * g), &-(dn * e)));
    out.push(check_real("comp3", inputs, &(a * c1 * g), &-(cn * e)));
    out.push(check_real("comp4", inputs, &(d1 * h), &-(a * dn * f)));
}

fn mu_recurrences(
    nu: &Real,
    n: usize,
    a: &Real,
    cv: &CornerValues,
    inputs: &str,
    out: &mut Vec<ResidualReport>,
    ctx: &PrecisionCtx,
) -> Result<()> {
    let m0 = mu(
        &ZeroConfig::progression_at(nu, n, a, ctx)?,
        MuRepresentation::BorderedGram,
        ctx,
    )?;
    let m1 = mu(
        &ZeroConfig::progression_at(&(nu + 1i64), n, a, ctx)?,
        MuRepresentation::BorderedGram,
        ctx,
    )?;
    let s2 = a.sqrt() * 2;
    let l1 = a * &m0 - &m1;
    let l2 = a * &m1 - &m0;
    out.push(check_real(
        "murec1",
        inputs,
        &l1,
        &(&s2 * cv.c1_nu() * &cv.h_nu1),
    ));
    out.push(check_real(
        "murec1b",
        inputs,
        &l1,
        &-(&s2 * cv.cn_nu1() * &cv.f_nu),
    ));
    out.push(check_real(
        "murec2",
        inputs,
        &l2,
        &-(&s2 * cv.d1_nu() * &cv.g_nu1),
    ));
    out.push(check_real(
        "murec2b",
        inputs,
        &l2,
        &(&s2 * cv.dn_nu1() * &cv.e_nu),
    ));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn shift_recurrences(
    nu: &Real,
    n: usize,
    a: &Real,
    s0: &Space,
    s1: &Space,
    cv: &CornerValues,
    w: &Complex,
    inputs: &str,
    out: &mut Vec<ResidualReport>,
    ctx: &PrecisionCtx,
) {
    let sa = a.sqrt();
    let half_i = Complex::from_imag(ctx.ratio(1, 2));
    let (e0, f0) = s0.ef(w, ctx);
    let (e1, f1) = s1.ef(w, ctx);
    let (e0u, f0u) = s0.ef(&(w + &half_i), ctx);
    let (e1d, f1d) = s1.ef(&(w - &half_i), ctx);
    let z1 = Complex::from_imag(-(nu / 2));
    let z0 = Complex::from_imag(-((nu + 1i64) / 2 + ctx.int(n as i64)));
    let k1 = s1.kernel_incomplete(&z1, w, ctx);
    let k0 = s0.kernel_incomplete(&z0, w, ctx);
    let r = |v: &Real| Complex::from_real(v.clone());
    out.push(check(
        "rec1",
        inputs,
        &e0u.scale(&sa),
        &(&e1 + &(&k1 * &r(&(&sa * cv.c1_nu())))),
    ));
    out.push(check(
        "rec2",
        inputs,
        &unscale(&f0u, &sa),
        &(&f1 + &(&k1 * &r(&(cv.d1_nu() / &sa)))),
    ));
    out.push(check(
        "rec3",
        inputs,
        &unscale(&e1d, &sa),
        &(&e0 + &(&k0 * &r(&(cv.cn_nu1() / &sa)))),
    ));
    out.push(check(
        "rec4",
        inputs,
        &f1d.scale(&sa),
        &(&f0 + &(&k0 * &r(&(&sa * cv.dn_nu1())))),
    ));
}

fn unscale(v: &Complex, s: &Real) -> Complex {
    v.scale(&s.recip())
}

/// `(w - z_{n+1}) 𝓐_{n+1}(w) = 𝓑_n(w) - z_{n+1}/(2𝓐_n(z_{n+1})) 𝓚_n(z_{n+1}, w)`
/// and `(w - z_{n+1}) 𝓑_{n+1}(w) = -𝓐_n(w) + z_{n+1}/(2𝓑_n(z_{n+1})) 𝓚_n(z_{n+1}, w)`.
fn kernel_step(
    nu: &Real,
    n: usize,
    a: &Real,
    w: &Complex,
    inputs: &str,
    out: &mut Vec<ResidualReport>,
    ctx: &PrecisionCtx,
) -> Result<()> {
    let big = ZeroConfig::progression_at(nu, n + 1, a, ctx)?;
    let small = ZeroConfig::progression_at(nu, n, a, ctx)?;
    let zn1 = big.zeros()[n].clone();
    let (an1, bn1) = ab_sigma(&big, w, ctx)?;
    let (an, bn) = ab_sigma(&small, w, ctx)?;
    let (az, bz) = ab_sigma(&small, &zn1, ctx)?;
    let k = kernel_complete_gram(&small, &zn1, w, ctx)?.value;
    let shift = w - &zn1;
    let two = Complex::from_real(ctx.int(2));
    let ka = &(&zn1 / &(&two * &az)) * &k;
    let kb = &(&zn1 / &(&two * &bz)) * &k;
    out.push(check("ntonplus1a", inputs, &(&shift * &an1), &(&bn - &ka)));
    out.push(check("ntonplus1b", inputs, &(&shift * &bn1), &(&kb - &an)));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn suite_passes_on_sample_points() {
        let c = PrecisionCtx::new(50).unwrap();
        let ws = vec![
            Complex::from_f64(0.3, 0.0, &c),
            Complex::from_f64(-0.7, 0.45, &c),
        ];
        for (nu, n, a) in [(0.0, 1, 0.5), (0.0, 2, 0.4), (0.5, 3, 0.35), (2.0, 2, 0.65)] {
            let reps = identity_suite(&c.real(nu), n, &c.real(a), &ws, &c).unwrap();
            assert_eq!(reps.len(), 12 + 6 * ws.len());
            for r in reps {
                assert!(r.pass, "{r:?}");
                assert!(r.rel_residual < 1e-30, "{r:?}");
            }
        }
    }

    #[test]
    fn murec1_example() {
        let c = PrecisionCtx::new(50).unwrap();
        let reps = identity_suite(&c.zero(), 1, &c.real(0.5), &[], &c).unwrap();
        let r = reps.iter().find(|r| r.id == "murec1").unwrap();
        assert!(r.pass);
        assert!(reps.iter().any(|r| r.id == "rr4"));
    }
}
