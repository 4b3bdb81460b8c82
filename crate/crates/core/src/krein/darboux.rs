use alloc::format;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::numerics::{fd_derivative, Complex, DerivOrder, Jet, PrecisionCtx, Real};
use crate::report::{ResidualReport, ToleranceMode};
use crate::wronskian::{seed_jet, wronskian, wronskian_with_derivative, SeedFn};

/// Seeds of `n` simultaneous Darboux transformations starting from the
/// Paley-Wiener system (`μ₀ = 0`, `τ₀ = 1`).
#[derive(Clone, Debug)]
pub struct DarbouxChain {
    pub kappas: Vec<Real>,
    pub alpha_family: Vec<SeedFn>,
    pub beta_family: Vec<SeedFn>,
}

impl DarbouxChain {
    /// Seeds `α_j = ch(κ_j x)`, `β_j = sh(κ_j x)`.
    pub fn paley_wiener(kappas: Vec<Real>) -> Result<Self> {
        for (i, k) in kappas.iter().enumerate() {
            if k.is_zero() {
                bail!(Domain, "kappa_{} = 0 gives the seed sh(0) = 0", i + 1);
            }
        }
        Ok(DarbouxChain {
            alpha_family: kappas.iter().cloned().map(SeedFn::Cosh).collect(),
            beta_family: kappas.iter().cloned().map(SeedFn::Sinh).collect(),
            kappas,
        })
    }

    pub fn n(&self) -> usize {
        self.kappas.len()
    }

    /// Chain using only the first `m` seeds.
    pub fn prefix(&self, m: usize) -> Self {
        DarbouxChain {
            kappas: self.kappas[..m].to_vec(),
            alpha_family: self.alpha_family[..m].to_vec(),
            beta_family: self.beta_family[..m].to_vec(),
        }
    }

    /// Checks that every prefix Wronskian is nonzero at `x`.
    pub fn validate_at(&self, x: &Real, ctx: &PrecisionCtx) -> Result<()> {
        for m in 1..=self.n() {
            let p = self.prefix(m);
            let wa = wronskian(&p.alpha_family, x, ctx)?;
            let wb = wronskian(&p.beta_family, x, ctx)?;
            if wa.is_zero() || wb.is_zero() {
                return Err(Error::Conditioning {
                    estimate: f64::INFINITY,
                    context: format!("seed Wronskian of order {m} vanishes at x = {}", x.to_f64()),
                });
            }
        }
        Ok(())
    }
}

/// Transformed test pair, μ and τ after `n` Darboux steps.
#[derive(Clone, Debug)]
pub struct CrumValue {
    pub a: Complex,
    pub b: Complex,
    pub mu: Real,
    pub tau: Real,
}

/// `a_n = W(α, cos(xw))/W(α)`, `b_n = W(β, sin(xw))/W(β)`,
/// `μ_n = -d/dx log(W_α/W_β)`, `τ_n = W_α·W_β`.
pub fn crum_transform(
    chain: &DarbouxChain,
    w: &Complex,
    x: &Real,
    ctx: &PrecisionCtx,
) -> Result<CrumValue> {
    let (wa, dwa) = wronskian_with_derivative(&chain.alpha_family, x, ctx)?;
    let (wb, dwb) = wronskian_with_derivative(&chain.beta_family, x, ctx)?;
    if wa.is_zero() || wb.is_zero() {
        return Err(Error::Conditioning {
            estimate: f64::INFINITY,
            context: "seed Wronskian vanishes".into(),
        });
    }
    let mut fa = chain.alpha_family.clone();
    fa.push(SeedFn::Cos(w.clone()));
    let mut fb = chain.beta_family.clone();
    fb.push(SeedFn::Sin(w.clone()));
    let a = &wronskian(&fa, x, ctx)? / &wa;
    let b = &wronskian(&fb, x, ctx)? / &wb;
    let mu = -((&dwa / &wa).re - (&dwb / &wb).re);
    let tau = (&wa * &wb).re;
    Ok(CrumValue { a, b, mu, tau })
}

/// Jets in `x` of everything a Darboux step acts on.
#[derive(Clone, Debug)]
pub struct DarbouxState {
    pub mu: Jet<Complex>,
    pub tau: Jet<Complex>,
    /// Remaining (already transformed) seeds, consumed front to back.
    pub alphas: Vec<Jet<Complex>>,
    pub betas: Vec<Jet<Complex>>,
    pub a: Jet<Complex>,
    pub b: Jet<Complex>,
    pub k: Complex,
}

impl DarbouxState {
    /// Paley-Wiener start at `x` with jets of length `len`.
    pub fn initial(
        chain: &DarbouxChain,
        w: &Complex,
        x: &Real,
        len: usize,
        ctx: &PrecisionCtx,
    ) -> Self {
        let mut zero = alloc::vec![Complex::zero(ctx); len];
        let mu = Jet::from_derivatives(zero.clone());
        zero[0] = Complex::one(ctx);
        DarbouxState {
            mu,
            tau: Jet::from_derivatives(zero),
            alphas: chain
                .alpha_family
                .iter()
                .map(|f| seed_jet(f, x, len, ctx))
                .collect(),
            betas: chain
                .beta_family
                .iter()
                .map(|f| seed_jet(f, x, len, ctx))
                .collect(),
            a: seed_jet(&SeedFn::Cos(w.clone()), x, len, ctx),
            b: seed_jet(&SeedFn::Sin(w.clone()), x, len, ctx),
            k: w.clone(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.alphas.len()
    }
}

fn transform(f: &Jet<Complex>, log_der: &Jet<Complex>) -> Jet<Complex> {
    f.derivative().sub(&log_der.mul(f))
}

/// One simultaneous Darboux transformation using the front seed pair:
/// `a₁ = a' - (α'/α)a`, `b₁ = b' - (β'/β)b`, `μ₁ = μ - (log α/β)'`,
/// `τ₁ = τ·α·β`. Later seeds are transformed the same way. Each step
/// shortens the jets by one.
pub fn darboux_step(state: &DarbouxState) -> Result<DarbouxState> {
    let (Some(alpha), Some(beta)) = (state.alphas.first(), state.betas.first()) else {
        bail!(Precondition, "no seed left for a Darboux step");
    };
    if state.a.len() < 2 {
        bail!(Precondition, "jets too short for another Darboux step");
    }
    if alpha.value().is_zero() || beta.value().is_zero() {
        bail!(Domain, "seed vanishes at the expansion point");
    }
    let la = alpha.derivative().div(alpha)?;
    let lb = beta.derivative().div(beta)?;
    Ok(DarbouxState {
        mu: state.mu.sub(&la.sub(&lb)),
        tau: state.tau.mul(alpha).mul(beta),
        alphas: state.alphas[1..]
            .iter()
            .map(|s| transform(s, &la))
            .collect(),
        betas: state.betas[1..].iter().map(|s| transform(s, &lb)).collect(),
        a: transform(&state.a, &la),
        b: transform(&state.b, &lb),
        k: state.k.clone(),
    })
}

/// Runs every step of the chain; the returned jets keep `extra` orders.
pub fn darboux_iterate(
    chain: &DarbouxChain,
    w: &Complex,
    x: &Real,
    extra: usize,
    ctx: &PrecisionCtx,
) -> Result<DarbouxState> {
    let mut st = DarbouxState::initial(chain, w, x, chain.n() + 1 + extra, ctx);
    for _ in 0..chain.n() {
        st = darboux_step(&st)?;
    }
    Ok(st)
}

/// The direct Wronskian form against `n` iterated Darboux steps: `a_n`,
/// `b_n`, `μ_n` and `τ_n`, each compared relatively.
pub fn crum_equivalence(
    chain: &DarbouxChain,
    w: &Complex,
    x: &Real,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<Vec<ResidualReport>> {
    let crum = crum_transform(chain, w, x, ctx)?;
    let it = darboux_iterate(chain, w, x, 0, ctx)?;
    let inputs = format!("n={} w={:?} x={}", chain.n(), w.to_f64(), x.to_f64());
    let cmp = |id: &str, l: &Complex, r: &Complex| {
        ResidualReport::compare(id, inputs.clone(), l, r, tolerance, ToleranceMode::Relative)
    };
    Ok(alloc::vec![
        cmp("crum_a", &crum.a, it.a.value()),
        cmp("crum_b", &crum.b, it.b.value()),
        cmp("crum_mu", &Complex::from_real(crum.mu), it.mu.value()),
        cmp(
            "crum_tau_value",
            &Complex::from_real(crum.tau),
            it.tau.value()
        ),
    ])
}

/// Residuals of `-a_n'' + V⁺ a_n - w² a_n` and `-b_n'' + V⁻ b_n - w² b_n`
/// with `V^± = μ_n² ± μ_n'`, derivatives by finite differences in `x`.
///
/// The report carries the larger of the two residuals, judged absolutely.
pub fn schrodinger_residual(
    chain: &DarbouxChain,
    w: &Complex,
    x: &Real,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    let at = crum_transform(chain, w, x, ctx)?;
    let d2a = fd_derivative(
        |y| Ok(crum_transform(chain, w, y, ctx)?.a),
        x,
        DerivOrder::Second,
        ctx,
    )?
    .value;
    let d2b = fd_derivative(
        |y| Ok(crum_transform(chain, w, y, ctx)?.b),
        x,
        DerivOrder::Second,
        ctx,
    )?
    .value;
    let dmu = fd_derivative(
        |y| Ok(crum_transform(chain, w, y, ctx)?.mu),
        x,
        DerivOrder::First,
        ctx,
    )?
    .value;
    let w2 = w * w;
    let mu2 = at.mu.sqr();
    let vp = Complex::from_real(&mu2 + &dmu);
    let vm = Complex::from_real(&mu2 - &dmu);
    let ra = &(&vp * &at.a) - &(&d2a + &(&w2 * &at.a));
    let rb = &(&vm * &at.b) - &(&d2b + &(&w2 * &at.b));
    let worst = if ra.abs() >= rb.abs() { ra } else { rb };
    let scale = at.a.abs().max(at.b.abs()).max(ctx.one());
    let inputs = format!("n={} w={:?} x={}", chain.n(), w.to_f64(), x.to_f64());
    Ok(ResidualReport::with_scale(
        "schrodinger",
        inputs,
        &worst,
        &Complex::zero(ctx),
        &scale,
        tolerance,
        ToleranceMode::Absolute,
    ))
}

/// Residuals of the first-order system `a_n' - μ_n a_n = -w b_n`,
/// `b_n' + μ_n b_n = w a_n`, derivatives by finite differences in `x`.
pub fn first_order_residual(
    chain: &DarbouxChain,
    w: &Complex,
    x: &Real,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    let at = crum_transform(chain, w, x, ctx)?;
    let da = fd_derivative(
        |y| Ok(crum_transform(chain, w, y, ctx)?.a),
        x,
        DerivOrder::First,
        ctx,
    )?
    .value;
    let db = fd_derivative(
        |y| Ok(crum_transform(chain, w, y, ctx)?.b),
        x,
        DerivOrder::First,
        ctx,
    )?
    .value;
    let ra = &(&da - &at.a.scale(&at.mu)) + &(w * &at.b);
    let rb = &(&db + &at.b.scale(&at.mu)) - &(w * &at.a);
    let worst = if ra.abs() >= rb.abs() { ra } else { rb };
    let scale = at.a.abs().max(at.b.abs()).max(ctx.one());
    let inputs = format!("n={} w={:?} x={}", chain.n(), w.to_f64(), x.to_f64());
    Ok(ResidualReport::with_scale(
        "first_order",
        inputs,
        &worst,
        &Complex::zero(ctx),
        &scale,
        tolerance,
        ToleranceMode::Absolute,
    ))
}

/// `V_n⁺ - V⁺ + 2(log W_α)'' = 0` with `V⁺ = 0` at the Paley-Wiener start.
pub fn potential_shift_residual(
    chain: &DarbouxChain,
    x: &Real,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    let w = Complex::zero(ctx);
    let at = crum_transform(chain, &w, x, ctx)?;
    let dmu = fd_derivative(
        |y| Ok(crum_transform(chain, &w, y, ctx)?.mu),
        x,
        DerivOrder::First,
        ctx,
    )?
    .value;
    let log_w = |y: &Real| -> Result<Real> {
        let (wa, dwa) = wronskian_with_derivative(&chain.alpha_family, y, ctx)?;
        Ok((&dwa / &wa).re)
    };
    let d2 = fd_derivative(log_w, x, DerivOrder::First, ctx)?.value;
    let lhs = at.mu.sqr() + dmu;
    let rhs = -(d2 * 2);
    let inputs = format!("n={} x={}", chain.n(), x.to_f64());
    Ok(ResidualReport::compare_real(
        "potential_shift",
        inputs,
        &lhs,
        &rhs,
        tolerance,
        ToleranceMode::Absolute,
    ))
}

/// `-(log τ_n)'' = μ_n²` for the Crum τ-function.
pub fn crum_tau_residual(
    chain: &DarbouxChain,
    x: &Real,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    let w = Complex::zero(ctx);
    let mu = crum_transform(chain, &w, x, ctx)?.mu;
    let log_tau =
        |y: &Real| -> Result<Real> { Ok(crum_transform(chain, &w, y, ctx)?.tau.abs().ln(ctx)) };
    let d2 = fd_derivative(log_tau, x, DerivOrder::Second, ctx)?.value;
    let inputs = format!("n={} x={}", chain.n(), x.to_f64());
    Ok(ResidualReport::compare_real(
        "crum_tau",
        inputs,
        &-d2,
        &mu.sqr(),
        tolerance,
        ToleranceMode::Absolute,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krein::{mu, MuRepresentation};
    use crate::pwspace::{ab_sigma, gamma, ZeroConfig};
    use alloc::vec;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50).unwrap()
    }

    fn close(a: &Complex, b: &Complex, rel: f64) -> bool {
        (a - b).abs().to_f64() <= rel * a.abs().max(b.abs()).to_f64()
    }

    fn chain(c: &PrecisionCtx, ks: &[f64]) -> DarbouxChain {
        DarbouxChain::paley_wiener(ks.iter().map(|&k| c.real(k)).collect()).unwrap()
    }

    #[test]
    fn single_step_matches_closed_form() {
        let c = ctx();
        let (k, x) = (c.real(0.9), c.real(0.7));
        let ch = chain(&c, &[0.9]);
        let st = darboux_iterate(&ch, &Complex::from_real(c.real(1.3)), &x, 2, &c).unwrap();
        let want = &k * 2 / (&k * &x * 2).sinh(&c);
        assert!((&st.mu.value().re - &want).abs() < c.pow10(-45));
        let tau = (&k * &x * 2).sinh(&c) / 2;
        assert!((&st.tau.value().re - &tau).abs() < c.pow10(-45));
        // -(log τ₁)'' = μ₁².
        let lt = st.tau.derivative().div(&st.tau).unwrap().derivative();
        assert!((-&lt.value().re - want.sqr()).abs() < c.pow10(-40));
    }

    #[test]
    fn n0_is_identity() {
        let c = ctx();
        let w = Complex::from_f64(0.4, 0.2, &c);
        let x = c.real(1.1);
        let v = crum_transform(&chain(&c, &[]), &w, &x, &c).unwrap();
        assert!(close(&v.a, &w.scale(&x).cos(&c), 1e-60));
        assert!(close(&v.b, &w.scale(&x).sin(&c), 1e-60));
        assert!(v.mu.is_zero());
        assert_eq!(v.tau, c.one());
    }

    #[test]
    fn crum_equals_iterated_darboux() {
        let c = ctx();
        let ch = chain(&c, &[0.5, 1.5, 2.5, 3.5]);
        let w = Complex::from_f64(0.8, -0.3, &c);
        let x = c.real(0.9);
        let crum = crum_transform(&ch, &w, &x, &c).unwrap();
        let it = darboux_iterate(&ch, &w, &x, 0, &c).unwrap();
        assert!(close(&crum.a, it.a.value(), 1e-40));
        assert!(close(&crum.b, it.b.value(), 1e-40));
        assert!(close(
            &Complex::from_real(crum.mu.clone()),
            it.mu.value(),
            1e-40
        ));
        assert!(close(
            &Complex::from_real(crum.tau.clone()),
            it.tau.value(),
            1e-40
        ));
        let cfg = ZeroConfig::new(ch.kappas.clone(), x.clone()).unwrap();
        let m = mu(&cfg, MuRepresentation::BorderedGram, &c).unwrap();
        assert!(((&crum.mu - &m) / &m).abs() < c.pow10(-40));
        let reps = crum_equivalence(&ch, &w, &x, 1e-8, &c).unwrap();
        assert!(
            reps.iter().all(|r| r.pass && r.rel_residual < 1e-40),
            "{reps:?}"
        );
    }

    #[test]
    fn crum_matches_ab_sigma() {
        let c = ctx();
        let ks = [0.5, 1.25, 2.0];
        let ch = chain(&c, &ks);
        let x = c.real(0.8);
        let cfg = ZeroConfig::new(ch.kappas.clone(), x.clone()).unwrap();
        let w = Complex::from_f64(0.6, 0.35, &c);
        let v = crum_transform(&ch, &w, &x, &c).unwrap();
        let gg = &gamma(&cfg, &w, &c) * &gamma(&cfg, &-&w, &c);
        let (a, b) = ab_sigma(&cfg, &w, &c).unwrap();
        assert!(
            close(&(&gg * &v.a), &a, 1e-40),
            "{:?} {:?}",
            (&gg * &v.a).to_f64(),
            a.to_f64()
        );
        assert!(
            close(&(&gg * &v.b), &b, 1e-40),
            "{:?} {:?}",
            (&gg * &v.b).to_f64(),
            b.to_f64()
        );
    }

    #[test]
    fn schrodinger_examples() {
        let c = ctx();
        let w = Complex::from_real(c.int(2));
        let r = schrodinger_residual(&chain(&c, &[1.0]), &w, &c.one(), 1e-6, &c).unwrap();
        assert!(r.pass, "{r:?}");
        let r0 = schrodinger_residual(&chain(&c, &[]), &w, &c.one(), 1e-6, &c).unwrap();
        assert!(r0.pass);
        let r3 = schrodinger_residual(
            &chain(&c, &[0.5, 1.5, 2.5]),
            &Complex::from_f64(0.7, 0.2, &c),
            &c.real(0.6),
            1e-6,
            &c,
        )
        .unwrap();
        assert!(r3.pass, "{r3:?}");
    }

    #[test]
    fn potential_shift_and_tau() {
        let c = ctx();
        let ch = chain(&c, &[0.5, 1.5]);
        let x = c.real(0.9);
        assert!(potential_shift_residual(&ch, &x, 1e-6, &c).unwrap().pass);
        assert!(crum_tau_residual(&ch, &x, 1e-6, &c).unwrap().pass);
    }

    #[test]
    fn transformed_pair_solves_first_order_system() {
        let c = ctx();
        let w = Complex::from_f64(1.1, 0.0, &c);
        for ks in [&[0.7][..], &[0.5, 1.5, 2.5][..]] {
            let r = first_order_residual(&chain(&c, ks), &w, &c.real(0.5), 1e-6, &c).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn jet_derivatives_satisfy_schrodinger() {
        let c = ctx();
        let ch = chain(&c, &[0.7]);
        let w = Complex::from_f64(1.1, 0.0, &c);
        let st = darboux_iterate(&ch, &w, &c.real(0.5), 2, &c).unwrap();
        let mu = st.mu.value().clone();
        let dmu = st.mu.nth_derivative(1).unwrap();
        let v = &(&mu * &mu) + &dmu;
        let a2 = st.a.nth_derivative(2).unwrap();
        let res = &(&v * st.a.value()) - &(&a2 + &(&(&w * &w) * st.a.value()));
        assert!(res.abs() < c.pow10(-35));
    }

    #[test]
    fn zero_seed_rejected() {
        let c = ctx();
        assert!(DarbouxChain::paley_wiener(vec![c.zero()]).is_err());
        let ch = chain(&c, &[0.5]);
        assert!(ch.validate_at(&c.real(0.3), &c).is_ok());
    }
}
