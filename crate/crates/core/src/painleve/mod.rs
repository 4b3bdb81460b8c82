//! Arithmetic-progression zeros `κ_j = (ν+1)/2 + j - 1`: the corner values
//! of `E`, `F`, the `(X, Y)` state, its nonlinear system, the Painlevé VI
//! equation satisfied by `q`, Bäcklund-type maps, and an exact check that
//! `q` is rational in `b = a²` for integer `ν`.

mod identities;
mod rational;

pub use identities::identity_suite;
pub use rational::{rationality_check, reconstruct_q, RationalFit};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::krein::{mu, MuRepresentation};
use crate::numerics::{fd_derivative, Complex, DerivOrder, PrecisionCtx, Real};
use crate::pwspace::{check_a, CoeffVector, Space, ZeroConfig};
use crate::report::{ResidualReport, ToleranceMode};

/// Agreement demanded between the two defining expressions of X, Y and q.
pub const DEFINITION_TOLERANCE: f64 = 1e-8;
/// Default tolerance of the finite-difference based residuals.
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// `E`, `F` at the corner points together with both coefficient vectors.
#[derive(Clone, Debug)]
pub struct CornerValues {
    /// `E_ν(-i((ν+1)/2 + n))`.
    pub e_nu: Real,
    /// `F_ν(-i((ν+1)/2 + n))`.
    pub f_nu: Real,
    /// `E_{ν+1}(-iν/2)`.
    pub g_nu1: Real,
    /// `F_{ν+1}(-iν/2)`.
    pub h_nu1: Real,
    pub coeffs_nu: CoeffVector,
    pub coeffs_nu1: CoeffVector,
}

impl CornerValues {
    pub fn c1_nu(&self) -> &Real {
        &self.coeffs_nu.c[0]
    }
    pub fn d1_nu(&self) -> &Real {
        &self.coeffs_nu.d[0]
    }
    pub fn cn_nu1(&self) -> &Real {
        self.coeffs_nu1.c.last().expect("n >= 1")
    }
    pub fn dn_nu1(&self) -> &Real {
        self.coeffs_nu1.d.last().expect("n >= 1")
    }
}

fn check_envelope(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<()> {
    check_a(a, ctx)?;
    if n == 0 {
        bail!(Precondition, "n must be at least 1");
    }
    if !(nu + 1i64).is_positive() {
        bail!(Domain, "nu must exceed -1, got {}", nu.to_f64());
    }
    Ok(())
}

pub(crate) fn spaces(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<(Space, Space)> {
    check_envelope(nu, n, a, ctx)?;
    let s0 = Space::new(ZeroConfig::progression_at(nu, n, a, ctx)?, ctx)?;
    let s1 = Space::new(ZeroConfig::progression_at(&(nu + 1i64), n, a, ctx)?, ctx)?;
    Ok((s0, s1))
}

fn sign_n(n: usize, v: &Real) -> Real {
    if n % 2 == 0 {
        v.clone()
    } else {
        -v
    }
}

pub(crate) fn corner_from_spaces(
    nu: &Real,
    n: usize,
    s0: &Space,
    s1: &Space,
    ctx: &PrecisionCtx,
) -> Result<CornerValues> {
    let t0 = -((nu + 1i64) / 2 + ctx.int(n as i64));
    let t1 = -(nu / 2);
    let (e, f) = s0.ef_real(&t0, ctx);
    let (g, h) = s1.ef_real(&t1, ctx);
    let cv = CornerValues {
        e_nu: e,
        f_nu: f,
        g_nu1: g,
        h_nu1: h,
        coeffs_nu: s0.coeffs().clone(),
        coeffs_nu1: s1.coeffs().clone(),
    };
    let checks: [(&str, Real); 8] = [
        ("-c_1^nu", -cv.c1_nu()),
        ("d_1^nu", cv.d1_nu().clone()),
        ("(-1)^n c_n^{nu+1}", sign_n(n, cv.cn_nu1())),
        ("-(-1)^n d_n^{nu+1}", -sign_n(n, cv.dn_nu1())),
        ("(-1)^n e_nu", sign_n(n, &cv.e_nu)),
        ("(-1)^n f_nu", sign_n(n, &cv.f_nu)),
        ("g_{nu+1}", cv.g_nu1.clone()),
        ("h_{nu+1}", cv.h_nu1.clone()),
    ];
    for (name, v) in checks {
        if !v.is_positive() {
            bail!(
                Consistency,
                "sign invariant violated: {name} = {} is not positive",
                v.to_f64()
            );
        }
    }
    Ok(cv)
}

/// Corner values with their sign invariants checked.
pub fn corner_values(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<CornerValues> {
    let (s0, s1) = spaces(nu, n, a, ctx)?;
    corner_from_spaces(nu, n, &s0, &s1, ctx)
}

/// `X = g/h`, `Y = -c₁^ν/d₁^ν`, `T = 1/(1 + aXY)`.
#[derive(Clone, Debug)]
pub struct XYState {
    pub x: Real,
    pub y: Real,
    pub t: Real,
    pub nu: Real,
    pub n: usize,
    pub a: Real,
}

fn rel_diff(p: &Real, q: &Real) -> f64 {
    let s = p.abs().max(q.abs());
    if s.is_zero() {
        0.0
    } else {
        ((p - q).abs() / s).to_f64()
    }
}

pub(crate) fn xy_from_corner(
    nu: &Real,
    n: usize,
    a: &Real,
    cv: &CornerValues,
    ctx: &PrecisionCtx,
) -> Result<XYState> {
    let x1 = &cv.g_nu1 / &cv.h_nu1;
    let x2 = &cv.e_nu / (a * &cv.f_nu);
    let y1 = -(cv.c1_nu() / cv.d1_nu());
    let y2 = -(cv.cn_nu1() / (a * cv.dn_nu1()));
    let (dx, dy) = (rel_diff(&x1, &x2), rel_diff(&y1, &y2));
    if !(dx <= DEFINITION_TOLERANCE && dy <= DEFINITION_TOLERANCE) {
        bail!(
            Consistency,
            "defining expressions disagree: X by {dx:e}, Y by {dy:e}"
        );
    }
    let denom = a * &x1 * &y1 + 1i64;
    if denom.is_zero() {
        bail!(Pole, "1 + aXY vanishes");
    }
    let _ = ctx;
    Ok(XYState {
        t: denom.recip(),
        x: x1,
        y: y1,
        nu: nu.clone(),
        n,
        a: a.clone(),
    })
}

/// `(X, Y, T)`, each of X and Y computed by both defining expressions.
pub fn xy_state(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<XYState> {
    let cv = corner_values(nu, n, a, ctx)?;
    xy_from_corner(nu, n, a, &cv, ctx)
}

/// `μ_ν = p(X + aY)/(1 + aXY)`, `μ_{ν+1} = p(aX + Y)/(1 + aXY)`,
/// `p = 2na/(1 - a²)`.
pub fn mu_from_xy(state: &XYState, _ctx: &PrecisionCtx) -> (Real, Real) {
    pair_mu(&state.x, &state.y, state.n, &state.a)
}

fn pair_mu(u: &Real, v: &Real, n: usize, a: &Real) -> (Real, Real) {
    let p = a * (2 * n as i64) / (-a.sqr() + 1i64);
    let t = (a * u * v + 1i64).recip();
    let m0 = &p * (u + a * v) * &t;
    let m1 = p * (a * u + v) * t;
    (m0, m1)
}

/// [`mu_from_xy`] checked against the bordered-Gram μ of both progressions.
pub fn mu_from_xy_checked(state: &XYState, ctx: &PrecisionCtx) -> Result<(Real, Real)> {
    let (m0, m1) = mu_from_xy(state, ctx);
    for (nu, m) in [(state.nu.clone(), &m0), (&state.nu + 1i64, &m1)] {
        let cfg = ZeroConfig::progression_at(&nu, state.n, &state.a, ctx)?;
        let want = mu(&cfg, MuRepresentation::BorderedGram, ctx)?;
        let d = rel_diff(m, &want);
        if !(d <= DEFINITION_TOLERANCE) {
            bail!(
                Consistency,
                "mu from (X, Y) differs from the Gram route by {d:e} at nu={}",
                nu.to_f64()
            );
        }
    }
    Ok((m0, m1))
}

/// Residuals of `a U' - ν U + (1 - U²) μ_{ν+1}` and
/// `a V' + (ν+1) V - (1 - V²) μ_ν` for a pair `(U, V)` under `VI_{ν,n}`,
/// with μ given by the pair itself; worst residual relative to its largest
/// term.
fn vi_pair_residual<F>(
    id: &str,
    nu: &Real,
    n: usize,
    a: &Real,
    mut pair: F,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport>
where
    F: FnMut(&Real) -> Result<(Real, Real)>,
{
    let (u, v) = pair(a)?;
    let d = fd_derivative(
        |s| pair(s).map(|(u, v)| Complex::new(u, v)),
        a,
        DerivOrder::First,
        ctx,
    )?
    .value;
    let (m0, m1) = pair_mu(&u, &v, n, a);
    let t1 = [a * &d.re, -(nu * &u), (-u.sqr() + 1i64) * &m1];
    let t2 = [a * &d.im, (nu + 1i64) * &v, -((-v.sqr() + 1i64) * &m0)];
    let r1 = &t1[0] + &t1[1] + &t1[2];
    let r2 = &t2[0] + &t2[1] + &t2[2];
    let floor = |s: Real, all: &Real| s.max(all * ctx.pow10(-20));
    let s1 = t1.iter().map(Real::abs).fold(ctx.zero(), Real::max);
    let s2 = t2.iter().map(Real::abs).fold(ctx.zero(), Real::max);
    let all = s1.clone().max(s2.clone());
    let (s1, s2) = (floor(s1, &all), floor(s2, &all));
    let (r, s) = if &r1.abs() / &s1 >= &r2.abs() / &s2 {
        (r1, s1)
    } else {
        (r2, s2)
    };
    let inputs = format!("nu={} n={n} a={}", nu.to_f64(), a.to_f64());
    let z = Complex::zero(ctx);
    Ok(ResidualReport::with_scale(
        id,
        inputs,
        &Complex::from_real(r),
        &z,
        &s,
        RESIDUAL_TOLERANCE,
        ToleranceMode::Relative,
    ))
}

/// The nonlinear system for `(X, Y)` with `a`-derivatives by finite
/// differences re-solving at every stencil node.
pub fn nonlinear_residual(
    nu: &Real,
    n: usize,
    a: &Real,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    check_envelope(nu, n, a, ctx)?;
    vi_pair_residual(
        "vi",
        nu,
        n,
        a,
        |s| xy_state(nu, n, s, ctx).map(|st| (st.x, st.y)),
        ctx,
    )
}

/// `q = a(aX + Y)/(X + aY)`, checked against `a μ_{ν+1}/μ_ν`.
pub fn q_value(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<Real> {
    let st = xy_state(nu, n, a, ctx)?;
    let q = q_from_state(&st)?;
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
    if m0.is_zero() {
        bail!(Pole, "mu_nu vanishes");
    }
    let q2 = a * m1 / m0;
    let d = rel_diff(&q, &q2);
    if !(d <= DEFINITION_TOLERANCE) {
        bail!(Consistency, "the two expressions of q differ by {d:e}");
    }
    Ok(q)
}

fn q_from_state(st: &XYState) -> Result<Real> {
    let den = &st.x + &st.a * &st.y;
    if den.is_zero() {
        bail!(Pole, "X + aY vanishes");
    }
    Ok(&st.a * (&st.a * &st.x + &st.y) / den)
}

fn q_and_t_at_b(nu: &Real, n: usize, b: &Real, ctx: &PrecisionCtx) -> Result<(Real, Real)> {
    if !b.is_positive() {
        bail!(Domain, "b must be positive");
    }
    let st = xy_state(nu, n, &b.sqrt(), ctx)?;
    Ok((q_from_state(&st)?, st.t))
}

/// `q`, `T` and their closed-form `b`-derivatives.
#[derive(Clone, Debug)]
pub struct QDerivatives {
    pub b: Real,
    pub q: Real,
    pub t: Real,
    pub dq_db: Real,
    pub d2q_db2: Real,
    pub dt_db: Real,
}

fn singular_check(q: &Real, b: &Real, ctx: &PrecisionCtx) -> Result<()> {
    let eps = ctx.pow10(-(ctx.digits() as i32) / 2);
    for (name, v) in [("q = 0", q.clone()), ("q = 1", q - 1i64), ("q = b", q - b)] {
        if v.abs() < eps {
            bail!(Pole, "singular configuration: {name}");
        }
    }
    Ok(())
}

/// Closed-form `dq/db`, `dT/db` and the total derivative `d²q/db²`.
pub fn q_derivatives_closed(
    nu: &Real,
    n: usize,
    q: &Real,
    t: &Real,
    b: &Real,
    ctx: &PrecisionCtx,
) -> Result<QDerivatives> {
    singular_check(q, b, ctx)?;
    let nn = ctx.int(n as i64);
    let nu1 = nu + 1i64;
    let big_d = b * (b - 1i64);
    let dd = b * 2 - 1i64;
    // N = (2n + ν + (ν+1)b) q - (ν+n) q² - (ν+n+1) b.
    let lin = &nn * 2 + nu + &nu1 * b;
    let nvn = nu + &nn;
    let nvn1 = &nvn + 1i64;
    let num = &lin * q - &nvn * q.sqr() - &nvn1 * b;
    let dq = &num / &big_d + &nn * 2 * q * t / b;
    let dt = t * (t - 1i64) * &nn * (q.sqr() - b) / (b * (q - b) * (q - 1i64));
    let n_b = &nu1 * q - &nvn1;
    let n_q = lin - nvn * 2 * q;
    let d2q = (n_b + n_q * &dq) / &big_d - &num * dd / big_d.sqr()
        + &nn * 2 * (&dq * t + q * &dt) / b
        - &nn * 2 * q * t / b.sqr();
    Ok(QDerivatives {
        b: b.clone(),
        q: q.clone(),
        t: t.clone(),
        dq_db: dq,
        d2q_db2: d2q,
        dt_db: dt,
    })
}

/// Closed-form `q` derivatives cross-checked against finite differences of
/// `q(b)`.
pub fn q_derivatives(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<QDerivatives> {
    let b = a.sqr();
    let (q, t) = q_and_t_at_b(nu, n, &b, ctx)?;
    let qd = q_derivatives_closed(nu, n, &q, &t, &b, ctx)?;
    let f = |s: &Real| q_and_t_at_b(nu, n, s, ctx).map(|p| p.0);
    let d1 = fd_derivative(f, &b, DerivOrder::First, ctx)?.value;
    let d2 = fd_derivative(f, &b, DerivOrder::Second, ctx)?.value;
    for (name, closed, fd) in [("dq/db", &qd.dq_db, &d1), ("d2q/db2", &qd.d2q_db2, &d2)] {
        let err = (closed - fd).abs() / closed.abs().max(ctx.one());
        if !(err.to_f64() <= RESIDUAL_TOLERANCE) {
            bail!(
                Consistency,
                "{name}: closed form and finite difference differ by {:e}",
                err.to_f64()
            );
        }
    }
    Ok(qd)
}

/// `dT/db - T(T-1) n (q² - b)/(b(q-b)(q-1))` with `dT/db` by finite
/// differences.
pub fn t_equation_residual(
    nu: &Real,
    n: usize,
    a: &Real,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    let b = a.sqr();
    let (q, t) = q_and_t_at_b(nu, n, &b, ctx)?;
    let qd = q_derivatives_closed(nu, n, &q, &t, &b, ctx)?;
    let fd = fd_derivative(
        |s| q_and_t_at_b(nu, n, s, ctx).map(|p| p.1),
        &b,
        DerivOrder::First,
        ctx,
    )?
    .value;
    let inputs = format!("nu={} n={n} a={}", nu.to_f64(), a.to_f64());
    Ok(ResidualReport::compare_real(
        "t_equation",
        inputs,
        &fd,
        &qd.dt_db,
        RESIDUAL_TOLERANCE,
        ToleranceMode::Relative,
    ))
}

/// `(α, β, γ, δ)` of the Painlevé VI equation.
#[derive(Clone, Debug, PartialEq)]
pub struct PVIParams {
    pub alpha: Real,
    pub beta: Real,
    pub gamma: Real,
    pub delta: Real,
}

impl PVIParams {
    /// `((ν+n)²/2, -(ν+n+1)²/2, n²/2, (1-n²)/2)`.
    pub fn for_progression(nu: &Real, n: usize, ctx: &PrecisionCtx) -> Self {
        let nn = ctx.int(n as i64);
        let s = nu + &nn;
        PVIParams {
            alpha: s.sqr() / 2,
            beta: -((&s + 1i64).sqr() / 2),
            gamma: nn.sqr() / 2,
            delta: (-nn.sqr() + 1i64) / 2,
        }
    }
}

/// One evaluated row of the Painlevé VI check.
#[derive(Clone, Debug)]
pub struct PviEvaluation {
    pub a: Real,
    pub derivatives: QDerivatives,
    pub params: PVIParams,
    /// `q'' - RHS`.
    pub residual: Real,
    /// Largest magnitude among `q''` and the three right-hand-side groups.
    pub scale: Real,
}

impl PviEvaluation {
    pub fn relative(&self) -> Real {
        if self.scale.is_zero() {
            self.residual.abs()
        } else {
            self.residual.abs() / &self.scale
        }
    }
}

/// `q'' - RHS(q, q', b)` of Painlevé VI with the given parameters.
pub fn pvi_equation(
    q: &Real,
    dq: &Real,
    d2q: &Real,
    b: &Real,
    p: &PVIParams,
    ctx: &PrecisionCtx,
) -> Result<(Real, Real)> {
    singular_check(q, b, ctx)?;
    if b.is_zero() || (b - 1i64).is_zero() {
        bail!(Pole, "b must avoid 0 and 1");
    }
    let (q1, qb, b1) = (q - 1i64, q - b, b - 1i64);
    let g1 = (q.recip() + q1.recip() + qb.recip()) * dq.sqr() / 2;
    let g2 = -((b.recip() + b1.recip() + qb.recip()) * dq);
    let poly = q * &q1 * &qb / (b.sqr() * b1.sqr());
    let g3 = poly
        * (&p.alpha
            + &p.beta * b / q.sqr()
            + &p.gamma * &b1 / q1.sqr()
            + &p.delta * b * &b1 / qb.sqr());
    let residual = d2q - (&g1 + &g2 + &g3);
    let scale = d2q.abs().max(g1.abs()).max(g2.abs()).max(g3.abs());
    let _ = ctx;
    Ok((residual, scale))
}

/// Closed-form derivatives of `q` plugged into Painlevé VI.
pub fn pvi_evaluate(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<PviEvaluation> {
    let b = a.sqr();
    let (q, t) = q_and_t_at_b(nu, n, &b, ctx)?;
    let qd = q_derivatives_closed(nu, n, &q, &t, &b, ctx)?;
    let params = PVIParams::for_progression(nu, n, ctx);
    let (residual, scale) = pvi_equation(&qd.q, &qd.dq_db, &qd.d2q_db2, &b, &params, ctx)?;
    Ok(PviEvaluation {
        a: a.clone(),
        derivatives: qd,
        params,
        residual,
        scale,
    })
}

/// Painlevé VI residual relative to the largest term.
pub fn pvi_residual(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<ResidualReport> {
    let ev = pvi_evaluate(nu, n, a, ctx)?;
    let inputs = format!("nu={} n={n} a={}", nu.to_f64(), a.to_f64());
    let z = Complex::zero(ctx);
    Ok(ResidualReport::with_scale(
        "pvi",
        inputs,
        &Complex::from_real(ev.residual),
        &z,
        &ev.scale,
        RESIDUAL_TOLERANCE,
        ToleranceMode::Relative,
    ))
}

/// `Z` with `(aY + Z)/(1 + aYZ) = R` (absent for `n = 1`) and `W` with
/// `(aX + W)/(1 + aXW) = S`.
pub fn backlund_maps(state: &XYState, ctx: &PrecisionCtx) -> Result<(Option<Real>, Real)> {
    let (x, y, a, nu, n) = (&state.x, &state.y, &state.a, &state.nu, state.n);
    let nn = ctx.int(n as i64);
    let l = a.recip() - a;
    let t = (a * x * y + 1i64).recip();
    let solve = |r: Real, u: &Real| -> Result<Real> {
        let den = -(a * u * &r) + 1i64;
        if den.is_zero() {
            bail!(Degenerate, "Möbius relation has vanishing coefficient");
        }
        Ok((r - a * u) / den)
    };
    let z = if n == 1 {
        None
    } else {
        let one_m_y2 = -y.sqr() + 1i64;
        if one_m_y2.is_zero() {
            bail!(Degenerate, "1 - Y^2 vanishes");
        }
        let n1 = &nn - 1i64;
        let r = &l * (nu + 1i64) / &n1 * y / one_m_y2 - &nn / &n1 * (a * y + x) * &t;
        Some(solve(r, y)?)
    };
    let np1 = &nn + 1i64;
    // At ν = 0, X ≡ 1 and the ν-term is dropped with its factor ν.
    let nu_term = if nu.is_zero() {
        ctx.zero()
    } else {
        let one_m_x2 = -x.sqr() + 1i64;
        if one_m_x2.is_zero() {
            bail!(Degenerate, "1 - X^2 vanishes");
        }
        &l * nu / &np1 * x / one_m_x2
    };
    let s = nu_term - &nn / &np1 * (a * x + y) * &t;
    Ok((z, solve(s, x)?))
}

/// `(Y, Z)` under `VI_{ν+1,n-1}` (for `n ≥ 2`) and `(W, X)` under
/// `VI_{ν-1,n+1}`.
pub fn backlund_residuals(
    nu: &Real,
    n: usize,
    a: &Real,
    ctx: &PrecisionCtx,
) -> Result<Vec<ResidualReport>> {
    check_envelope(nu, n, a, ctx)?;
    let mut out = Vec::new();
    if n >= 2 {
        let pair = |s: &Real| -> Result<(Real, Real)> {
            let st = xy_state(nu, n, s, ctx)?;
            let z = backlund_maps(&st, ctx)?.0.expect("n >= 2");
            Ok((st.y, z))
        };
        out.push(vi_pair_residual(
            "backlund_yz",
            &(nu + 1i64),
            n - 1,
            a,
            pair,
            ctx,
        )?);
    }
    let pair = |s: &Real| -> Result<(Real, Real)> {
        let st = xy_state(nu, n, s, ctx)?;
        let w = backlund_maps(&st, ctx)?.1;
        Ok((w, st.x))
    };
    out.push(vi_pair_residual(
        "backlund_wx",
        &(nu - 1i64),
        n + 1,
        a,
        pair,
        ctx,
    )?);
    Ok(out)
}

/// Minimum of `1 + aXY` over a grid, or the first evaluation failure.
pub fn scan_one_plus_axy(nu: &Real, n: usize, grid: &[Real], ctx: &PrecisionCtx) -> Result<Real> {
    let mut lo: Option<Real> = None;
    for a in grid {
        let st = xy_state(nu, n, a, ctx)?;
        let v = &st.a * &st.x * &st.y + 1i64;
        lo = Some(lo.map_or(v.clone(), |m| m.min(v)));
    }
    lo.ok_or_else(|| Error::Precondition(String::from("empty grid")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50).unwrap()
    }

    #[test]
    fn corner_signs_and_n1_values() {
        let c = ctx();
        let a = c.real(0.5);
        let cv = corner_values(&c.zero(), 1, &a, &c).unwrap();
        // n=1, ν=0: κ = 1/2, t = -3/2; E = e^{xt} + c₁ S(t-κ).
        let x = -a.ln(&c);
        let k = c.real(0.5);
        let sh = (&k * &x * 2).sinh(&c);
        let c1 = -(&k * (-(&k * &x)).exp(&c)) / &sh;
        let t = c.real(-1.5);
        let s = ((&t - &k) * &x).sinh(&c) * 2 / (&t - &k);
        let e = (&t * &x).exp(&c) + &c1 * &s;
        assert!((&cv.e_nu - e).abs() < c.pow10(-40));
        assert!(corner_values(&c.real(0.5), 3, &c.real(0.1), &c).is_ok());
    }

    #[test]
    fn y_equals_a_for_nu0_n1() {
        let c = ctx();
        let a = c.real(0.37);
        let st = xy_state(&c.zero(), 1, &a, &c).unwrap();
        assert!((&st.y - &a).abs() < c.pow10(-40));
        assert!(xy_state(&c.zero(), 2, &c.real(0.4), &c).is_ok());
    }

    #[test]
    fn mu_from_xy_examples() {
        let c = ctx();
        let a = c.real(0.5);
        let st = xy_state(&c.zero(), 1, &a, &c).unwrap();
        let (m0, m1) = mu_from_xy(&st, &c);
        let x = -a.ln(&c);
        assert!((m0 - x.sinh(&c).recip()).abs() < c.pow10(-40));
        assert!((m1 - (&x * 2).sinh(&c).recip() * 2).abs() < c.pow10(-40));
        let st = xy_state(&c.one(), 2, &c.real(0.6), &c).unwrap();
        assert!(mu_from_xy_checked(&st, &c).is_ok());
        let zero = XYState { n: 0, ..st };
        let (z0, z1) = mu_from_xy(&zero, &c);
        assert!(z0.is_zero() && z1.is_zero());
    }

    #[test]
    fn nonlinear_examples() {
        let c = ctx();
        for (nu, n, a) in [(0.0, 1, 0.5), (1.0, 2, 0.3), (0.5, 3, 0.7)] {
            let r = nonlinear_residual(&c.real(nu), n, &c.real(a), &c).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn q_examples() {
        let c = ctx();
        let a = c.real(0.45);
        let b = a.sqr();
        let q = q_value(&c.zero(), 1, &a, &c).unwrap();
        assert!((&q - &b * 2 / (&b + 1i64)).abs() < c.pow10(-40));
        assert!(q_value(&c.real(0.5), 2, &a, &c).is_ok());
    }

    #[test]
    fn q_derivatives_examples() {
        let c = ctx();
        let a = c.real(0.6);
        let b = a.sqr();
        let qd = q_derivatives(&c.zero(), 1, &a, &c).unwrap();
        let want = (&b + 1i64).sqr().recip() * 2;
        assert!((&qd.dq_db - want).abs() < c.pow10(-40));
        let want2 = -((&b + 1i64).powi(3).recip() * 4);
        assert!((&qd.d2q_db2 - want2).abs() < c.pow10(-40));
        assert!(q_derivatives(&c.zero(), 2, &c.real(0.5), &c).is_ok());
        assert!(
            t_equation_residual(&c.zero(), 2, &c.real(0.5), &c)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn pvi_params_and_closed_form() {
        let c = ctx();
        let p = PVIParams::for_progression(&c.zero(), 1, &c);
        assert_eq!(
            p,
            PVIParams {
                alpha: c.real(0.5),
                beta: c.int(-2),
                gamma: c.real(0.5),
                delta: c.zero()
            }
        );
        for b in [0.1, 0.3, 0.77] {
            let b = c.real(b);
            let q = &b * 2 / (&b + 1i64);
            let dq = (&b + 1i64).sqr().recip() * 2;
            let d2q = -((&b + 1i64).powi(3).recip() * 4);
            let (r, s) = pvi_equation(&q, &dq, &d2q, &b, &p, &c).unwrap();
            assert!(r.abs() < c.pow10(-40) * s);
        }
    }

    #[test]
    fn pvi_sweep_sample() {
        let c = ctx();
        for (nu, n, a) in [(0.0, 1, 0.25), (0.5, 2, 0.5), (2.0, 3, 0.75), (1.0, 3, 0.4)] {
            let r = pvi_residual(&c.real(nu), n, &c.real(a), &c).unwrap();
            assert!(r.rel_residual < 1e-30, "{r:?}");
        }
    }

    #[test]
    fn singular_q_reported() {
        let c = ctx();
        let b = c.real(0.3);
        let r = q_derivatives_closed(&c.zero(), 1, &b, &c.one(), &b, &c);
        assert!(matches!(r, Err(Error::Pole(_))));
    }

    #[test]
    fn backlund_examples() {
        let c = ctx();
        for (nu, n) in [(0.0, 2), (1.0, 2), (1.0, 3), (1.0, 1)] {
            let rs = backlund_residuals(&c.real(nu), n, &c.real(0.5), &c).unwrap();
            assert_eq!(rs.len(), if n == 1 { 1 } else { 2 });
            for r in rs {
                assert!(r.pass, "{r:?}");
            }
        }
        let st = xy_state(&c.one(), 1, &c.real(0.5), &c).unwrap();
        assert!(backlund_maps(&st, &c).unwrap().0.is_none());
    }

    #[test]
    fn one_plus_axy_positive() {
        let c = ctx();
        let grid: Vec<Real> = (1..=9).map(|k| c.ratio(k, 10)).collect();
        let lo = scan_one_plus_axy(&c.real(0.5), 2, &grid, &c).unwrap();
        assert!(lo > c.one());
    }
}
