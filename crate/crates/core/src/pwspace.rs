//! Paley-Wiener kernels, Gram matrices and the reproducing kernels of the
//! spaces with prescribed imaginary zeros `z_j = -iκ_j`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::numerics::{det, solve, Complex, GaussLegendre, Matrix, PrecisionCtx, Real, Scalar};
use crate::report::{ResidualReport, ToleranceMode};

/// Arithmetic-progression marker: `κ_j = (ν+1)/2 + (j-1)`, `j = 1..n`.
#[derive(Clone, Debug)]
pub struct Progression {
    pub nu: Real,
    pub n: usize,
}

/// Trivial zeros `z_j = -iκ_j` together with the exponential type `x`.
#[derive(Clone, Debug)]
pub struct ZeroConfig {
    kappas: Vec<Real>,
    x: Real,
    progression: Option<Progression>,
}

impl ZeroConfig {
    /// Distinct real `κ_j` and `x > 0`.
    pub fn new(kappas: Vec<Real>, x: Real) -> Result<Self> {
        if !(x.is_positive() && x.is_finite()) {
            bail!(
                Precondition,
                "exponential type x must be positive and finite"
            );
        }
        for i in 0..kappas.len() {
            if !kappas[i].is_finite() {
                bail!(Precondition, "kappa_{} is not finite", i + 1);
            }
            for j in 0..i {
                if kappas[i] == kappas[j] {
                    bail!(Precondition, "kappa_{} equals kappa_{}", i + 1, j + 1);
                }
            }
        }
        Ok(ZeroConfig {
            kappas,
            x,
            progression: None,
        })
    }

    /// `κ_j = (ν+1)/2 + (j-1)` for `j = 1..n`.
    pub fn progression(nu: &Real, n: usize, x: Real, ctx: &PrecisionCtx) -> Result<Self> {
        let base = (nu + ctx.one()) / 2;
        let kappas = (0..n).map(|j| &base + ctx.int(j as i64)).collect();
        let mut cfg = Self::new(kappas, x)?;
        cfg.progression = Some(Progression { nu: nu.clone(), n });
        Ok(cfg)
    }

    /// Progression configuration at `x = -log a`, `0 < a < 1`.
    pub fn progression_at(nu: &Real, n: usize, a: &Real, ctx: &PrecisionCtx) -> Result<Self> {
        check_a(a, ctx)?;
        Self::progression(nu, n, -a.ln(ctx), ctx)
    }

    /// Same zeros at another exponential type.
    pub fn with_x(&self, x: Real) -> Result<Self> {
        let mut cfg = Self::new(self.kappas.clone(), x)?;
        cfg.progression = self.progression.clone();
        Ok(cfg)
    }

    pub fn n(&self) -> usize {
        self.kappas.len()
    }

    pub fn kappas(&self) -> &[Real] {
        &self.kappas
    }

    pub fn x(&self) -> &Real {
        &self.x
    }

    pub fn progression_data(&self) -> Option<&Progression> {
        self.progression.as_ref()
    }

    /// `a = e^{-x}`.
    pub fn a(&self, ctx: &PrecisionCtx) -> Real {
        (-&self.x).exp(ctx)
    }

    /// The zeros `z_j = -iκ_j`.
    pub fn zeros(&self) -> Vec<Complex> {
        self.kappas.iter().map(|k| Complex::from_imag(-k)).collect()
    }

    /// `true` when `κ_i + κ_j ≠ 0` for all `i, j` (including `i = j`).
    pub fn sums_nonzero(&self) -> bool {
        self.kappas
            .iter()
            .all(|a| self.kappas.iter().all(|b| !(a + b).is_zero()))
    }

    pub(crate) fn describe(&self) -> alloc::string::String {
        match &self.progression {
            Some(p) => format!("nu={} n={} x={}", p.nu.to_f64(), p.n, self.x.to_f64()),
            None => {
                let ks: Vec<f64> = self.kappas.iter().map(Real::to_f64).collect();
                format!("kappas={ks:?} x={}", self.x.to_f64())
            }
        }
    }
}

pub(crate) fn check_a(a: &Real, ctx: &PrecisionCtx) -> Result<()> {
    if !(a.is_positive() && *a < ctx.one()) {
        bail!(Domain, "a must lie in (0, 1), got {}", a.to_f64());
    }
    Ok(())
}

/// Coefficients `c_j`, `d_j` of the incomplete `E_σ`, `F_σ`.
#[derive(Clone, Debug)]
pub struct CoeffVector {
    pub c: Vec<Real>,
    pub d: Vec<Real>,
    /// Condition estimate of the Gram solve.
    pub cond_estimate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    Base,
    Complete,
    Incomplete,
}

/// A kernel value with the points it was evaluated at.
#[derive(Clone, Debug)]
pub struct KernelValue {
    pub value: Complex,
    pub z: Complex,
    pub w: Complex,
    pub kind: KernelKind,
}

const SERIES_RADIUS: f64 = 0.5;

fn series_tol(ctx: &PrecisionCtx) -> Real {
    ctx.pow10(-(ctx.digits() as i32) - 25)
}

/// `2·sh(ux)/u` and its `u`-derivative by the Taylor series in `(ux)²`;
/// only used for `|ux| < 1/2`.
fn shc_series<T: Scalar>(u: &T, x: &Real, ctx: &PrecisionCtx) -> (T, T) {
    let ux = u.scale(x);
    let y = ux.mul_ref(&ux);
    let tol = series_tol(ctx);
    // S = 2x Σ y^k/(2k+1)!, dS/du = 2x² Σ_{k≥1} 2k (ux)^{2k-1}/(2k+1)!.
    let mut term = u.one_like();
    let mut sum = term.clone();
    let mut dsum = u.zero_like();
    let mut k: i64 = 0;
    loop {
        k += 1;
        term = term
            .mul_ref(&y)
            .scale(&(ctx.int((2 * k) * (2 * k + 1))).recip());
        sum = sum.add_ref(&term);
        dsum = dsum.add_ref(&term.scale(&ctx.int(2 * k)));
        if term.magnitude() < tol || k > 400 {
            break;
        }
    }
    let two_x = x * 2;
    let s = sum.scale(&two_x);
    // dsum currently holds Σ 2k y^k/(2k+1)!; divide by u and multiply by 2x.
    let ds = if u.is_zero() {
        u.zero_like()
    } else {
        dsum.div_ref(u).scale(&two_x)
    };
    (s, ds)
}

/// `2·sin(vx)/v` by the series in `(vx)²`, only used for `|vx| < 1/2`.
fn sinc_series(v: &Complex, x: &Real, ctx: &PrecisionCtx) -> Complex {
    let vx = v.scale(x);
    let y = -(&vx * &vx);
    let tol = series_tol(ctx);
    let mut term = v.one_like();
    let mut sum = term.clone();
    let mut k: i64 = 0;
    loop {
        k += 1;
        term = (&term * &y).scale(&ctx.int((2 * k) * (2 * k + 1)).recip());
        sum += &term;
        if term.max_abs() < tol || k > 400 {
            break;
        }
    }
    sum.scale(&(x * 2))
}

/// Base Paley-Wiener evaluator `Z_z(w) = 2 sin((z̄-w)x)/(z̄-w)`, equal to
/// `2x` at `z̄ = w`.
pub fn pw_kernel(z: &Complex, w: &Complex, x: &Real, ctx: &PrecisionCtx) -> Complex {
    let v = &z.conj() - w;
    if v.abs() * x < ctx.real(SERIES_RADIUS) {
        sinc_series(&v, x, ctx)
    } else {
        (v.scale(x).sin(ctx) * Complex::from_real(ctx.int(2))) / v
    }
}

fn gram_entry(s: &Real, x: &Real, ctx: &PrecisionCtx) -> Real {
    if s.is_zero() {
        x * 2
    } else if (s * x).abs() < ctx.real(SERIES_RADIUS) {
        shc_series(s, x, ctx).0
    } else {
        (s * x).sinh(ctx) * 2 / s
    }
}

/// Gram matrix `(Z_i, Z_j) = 2 sh((κ_i+κ_j)x)/(κ_i+κ_j)` (limit `2x`).
///
/// Positive definiteness is checked by a Cholesky pass; failure is a
/// conditioning error.
pub fn gram_matrix(cfg: &ZeroConfig, ctx: &PrecisionCtx) -> Result<Matrix<Real>> {
    let n = cfg.n();
    let mut g = Matrix::from_fn(n, n, |_, _| ctx.zero());
    for i in 0..n {
        for j in 0..=i {
            let v = gram_entry(&(&cfg.kappas[i] + &cfg.kappas[j]), &cfg.x, ctx);
            g.set(j, i, v.clone());
            g.set(i, j, v);
        }
    }
    cholesky_check(&g, ctx)?;
    Ok(g)
}

fn cholesky_check(g: &Matrix<Real>, ctx: &PrecisionCtx) -> Result<()> {
    let n = g.rows();
    let mut l = Matrix::from_fn(n, n, |_, _| ctx.zero());
    let mut dmax = ctx.zero();
    let mut dmin: Option<Real> = None;
    for j in 0..n {
        let mut s = g.get(j, j).clone();
        for k in 0..j {
            s -= l.get(j, k).sqr();
        }
        if !s.is_positive() {
            return Err(Error::Conditioning {
                estimate: f64::INFINITY,
                context: format!(
                    "Gram matrix not positive definite at working precision (pivot {j})"
                ),
            });
        }
        let d = s.sqrt();
        dmax = dmax.max(d.clone());
        dmin = Some(dmin.map_or(d.clone(), |m: Real| m.min(d.clone())));
        for i in j + 1..n {
            let mut t = g.get(i, j).clone();
            for k in 0..j {
                t -= l.get(i, k) * l.get(j, k);
            }
            l.set(i, j, t / &d);
        }
        l.set(j, j, d);
    }
    if let Some(dmin) = dmin {
        let cond = (dmax / dmin).sqr().to_f64();
        if !(cond <= libm::pow(10.0, f64::from(ctx.digits()))) {
            return Err(Error::Conditioning {
                estimate: cond,
                context: format!(
                    "{n}x{n} Gram matrix exceeds the {}-digit budget",
                    ctx.digits()
                ),
            });
        }
    }
    Ok(())
}

/// Solves `G c = -e^{-xκ}` and `G d = (-1)^{n+1} e^{xκ}`.
pub fn solve_coefficients(cfg: &ZeroConfig, ctx: &PrecisionCtx) -> Result<CoeffVector> {
    Space::new(cfg.clone(), ctx).map(|s| s.coeffs)
}

/// `(E_σ(it), F_σ(it))` for real `t`.
pub fn eval_ef(
    cfg: &ZeroConfig,
    t: &Real,
    coeffs: &CoeffVector,
    ctx: &PrecisionCtx,
) -> Result<(Real, Real)> {
    if coeffs.c.len() != cfg.n() || coeffs.d.len() != cfg.n() {
        bail!(
            Dimension,
            "coefficient vector does not match the configuration"
        );
    }
    let space = Space::from_parts(cfg.clone(), None, coeffs.clone(), ctx);
    Ok(space.ef_real(t, ctx))
}

/// Evaluation data of `E_σ`, `F_σ` at one point, with the σ-limit applied
/// when the point is a trivial zero.
struct PointData {
    e: Complex,
    f: Complex,
    gamma: Complex,
}

/// A configuration with its Gram matrix and coefficients solved once.
#[derive(Clone, Debug)]
pub struct Space {
    cfg: ZeroConfig,
    gram: Option<Matrix<Real>>,
    coeffs: CoeffVector,
    exp_kx: Vec<Real>,
    exp_mkx: Vec<Real>,
}

impl Space {
    pub fn new(cfg: ZeroConfig, ctx: &PrecisionCtx) -> Result<Self> {
        let n = cfg.n();
        if n == 0 {
            let coeffs = CoeffVector {
                c: Vec::new(),
                d: Vec::new(),
                cond_estimate: 1.0,
            };
            return Ok(Self::from_parts(
                cfg,
                Some(Matrix::from_fn(0, 0, |_, _| ctx.zero())),
                coeffs,
                ctx,
            ));
        }
        let g = gram_matrix(&cfg, ctx)?;
        let sign = if n % 2 == 0 { -1 } else { 1 };
        let rc: Vec<Real> = cfg
            .kappas
            .iter()
            .map(|k| -((-(k * &cfg.x)).exp(ctx)))
            .collect();
        let rd: Vec<Real> = cfg
            .kappas
            .iter()
            .map(|k| (k * &cfg.x).exp(ctx) * sign)
            .collect();
        let sc = solve(&g, &rc, ctx)?;
        let sd = solve(&g, &rd, ctx)?;
        let coeffs = CoeffVector {
            c: sc.x,
            d: sd.x,
            cond_estimate: sc.cond_estimate.max(sd.cond_estimate),
        };
        Ok(Self::from_parts(cfg, Some(g), coeffs, ctx))
    }

    fn from_parts(
        cfg: ZeroConfig,
        gram: Option<Matrix<Real>>,
        coeffs: CoeffVector,
        ctx: &PrecisionCtx,
    ) -> Self {
        let exp_kx: Vec<Real> = cfg.kappas.iter().map(|k| (k * &cfg.x).exp(ctx)).collect();
        let exp_mkx = exp_kx.iter().map(Real::recip).collect();
        Space {
            cfg,
            gram,
            coeffs,
            exp_kx,
            exp_mkx,
        }
    }

    pub fn cfg(&self) -> &ZeroConfig {
        &self.cfg
    }

    pub fn coeffs(&self) -> &CoeffVector {
        &self.coeffs
    }

    pub fn gram(&self, ctx: &PrecisionCtx) -> Result<Matrix<Real>> {
        match &self.gram {
            Some(g) => Ok(g.clone()),
            None => gram_matrix(&self.cfg, ctx),
        }
    }

    /// `[E, F, dE/dt, dF/dt]` at parameter `t` (so the function argument is
    /// `w = it`), given `e^{tx}` and `e^{-tx}`.
    fn ef_generic<T: Scalar>(
        &self,
        t: &T,
        etx: &T,
        emtx: &T,
        deriv: bool,
        ctx: &PrecisionCtx,
    ) -> [T; 4] {
        let x = &self.cfg.x;
        let n = self.cfg.n();
        let radius = ctx.real(SERIES_RADIUS);
        let sign = if n % 2 == 0 { ctx.one() } else { -ctx.one() };
        let mut e = etx.clone();
        let mut f = emtx.scale(&sign);
        let mut de = etx.scale(x);
        let mut df = emtx.scale(&(-(x * &sign)));
        let one = t.one_like();
        for j in 0..n {
            let kappa = &self.cfg.kappas[j];
            let u = t.sub_ref(&one.scale(kappa));
            let (s, ds) = if u.magnitude() * x < radius {
                shc_series(&u, x, ctx)
            } else {
                let ep = etx.scale(&self.exp_mkx[j]);
                let em = emtx.scale(&self.exp_kx[j]);
                let s = ep.sub_ref(&em).div_ref(&u);
                let ds = if deriv {
                    ep.add_ref(&em).scale(x).sub_ref(&s).div_ref(&u)
                } else {
                    s.zero_like()
                };
                (s, ds)
            };
            e = e.add_ref(&s.scale(&self.coeffs.c[j]));
            f = f.add_ref(&s.scale(&self.coeffs.d[j]));
            if deriv {
                de = de.add_ref(&ds.scale(&self.coeffs.c[j]));
                df = df.add_ref(&ds.scale(&self.coeffs.d[j]));
            }
        }
        [e, f, de, df]
    }

    /// `(E_σ(it), F_σ(it))` for real `t`.
    pub fn ef_real(&self, t: &Real, ctx: &PrecisionCtx) -> (Real, Real) {
        let etx = (t * &self.cfg.x).exp(ctx);
        let emtx = etx.recip();
        let [e, f, _, _] = self.ef_generic(t, &etx, &emtx, false, ctx);
        (e, f)
    }

    /// `(E, F, dE/dt, dF/dt)` at real `t`.
    pub fn ef_real_with_derivative(&self, t: &Real, ctx: &PrecisionCtx) -> [Real; 4] {
        let etx = (t * &self.cfg.x).exp(ctx);
        let emtx = etx.recip();
        self.ef_generic(t, &etx, &emtx, true, ctx)
    }

    fn ef_complex(&self, w: &Complex, deriv: bool, ctx: &PrecisionCtx) -> [Complex; 4] {
        let t = w.mul_neg_i();
        let etx = t.scale(&self.cfg.x).exp(ctx);
        let emtx = etx.recip();
        let [e, f, de, df] = self.ef_generic(&t, &etx, &emtx, deriv, ctx);
        // d/dw = -i d/dt.
        [e, f, de.mul_neg_i(), df.mul_neg_i()]
    }

    /// `(E_σ(w), F_σ(w))` at complex `w` (parameter `t = -iw`).
    pub fn ef(&self, w: &Complex, ctx: &PrecisionCtx) -> (Complex, Complex) {
        let [e, f, _, _] = self.ef_complex(w, false, ctx);
        (e, f)
    }

    /// `(E, F, dE/dw, dF/dw)` at complex `w`.
    pub fn ef_with_derivative(&self, w: &Complex, ctx: &PrecisionCtx) -> [Complex; 4] {
        self.ef_complex(w, true, ctx)
    }

    fn coincidence_radius(ctx: &PrecisionCtx) -> Real {
        ctx.pow10(-(ctx.digits() as i32) / 2)
    }

    /// Incomplete kernel `K^σ(z,w) = (conj E(z) E(w) - conj F(z) F(w)) / (i(z̄-w))`.
    pub fn kernel_incomplete(&self, z: &Complex, w: &Complex, ctx: &PrecisionCtx) -> Complex {
        let (ez, fz) = self.ef(z, ctx);
        let zb = z.conj();
        let delta = &zb - w;
        if delta.abs() < Self::coincidence_radius(ctx) {
            let m = (&zb + w).scale(&ctx.ratio(1, 2));
            let [_, _, de, df] = self.ef_with_derivative(&m, ctx);
            return (&ez.conj() * &de - &fz.conj() * &df).mul_i();
        }
        let (ew, fw) = self.ef(w, ctx);
        (&ez.conj() * &ew - &fz.conj() * &fw) / delta.mul_i()
    }

    /// Index of the zero coinciding with `p`, if any.
    fn zero_index(&self, p: &Complex, ctx: &PrecisionCtx) -> Option<usize> {
        let r = Self::coincidence_radius(ctx);
        self.cfg.zeros().iter().position(|zj| (p - zj).abs() < r)
    }

    /// `γ(w) = ∏ 1/(w - z_j)`.
    pub fn gamma(&self, w: &Complex, ctx: &PrecisionCtx) -> Complex {
        gamma(&self.cfg, w, ctx)
    }

    fn point_data(&self, p: &Complex, ctx: &PrecisionCtx) -> PointData {
        match self.zero_index(p, ctx) {
            Some(j) => {
                let zs = self.cfg.zeros();
                let [_, _, de, df] = self.ef_with_derivative(&zs[j], ctx);
                let mut g = Complex::one(ctx);
                for (m, zm) in zs.iter().enumerate() {
                    if m != j {
                        g = &g / &(&zs[j] - zm);
                    }
                }
                PointData {
                    e: de,
                    f: df,
                    gamma: g,
                }
            }
            None => {
                let (e, f) = self.ef(p, ctx);
                PointData {
                    e,
                    f,
                    gamma: self.gamma(p, ctx),
                }
            }
        }
    }

    /// Complete kernel `𝓚_z(w) = γ(w)·conj(γ(z))·K^σ(z,w)` from the E/F
    /// representation, finite at points of σ.
    pub fn kernel_complete_ef(
        &self,
        z: &Complex,
        w: &Complex,
        ctx: &PrecisionCtx,
    ) -> Result<Complex> {
        let zin = self.zero_index(z, ctx).is_some();
        let win = self.zero_index(w, ctx).is_some();
        if !zin && !win {
            let k = self.kernel_incomplete(z, w, ctx);
            return Ok(&(&self.gamma(w, ctx) * &self.gamma(z, ctx).conj()) * &k);
        }
        let delta = &z.conj() - w;
        if delta.abs() < Self::coincidence_radius(ctx) {
            bail!(Pole, "z̄ = w with a point in σ is not supported");
        }
        let pz = self.point_data(z, ctx);
        let pw = self.point_data(w, ctx);
        let num = &pz.e.conj() * &pw.e - &pz.f.conj() * &pw.f;
        Ok(&(&(&pw.gamma * &pz.gamma.conj()) * &num) / &delta.mul_i())
    }

    /// `(α_σ, δ_σ)` with `α = -2Σ c_j e^{-κ_j x}`, `δ = -(-1)^n 2Σ d_j e^{κ_j x}`.
    pub fn alpha_delta(&self, ctx: &PrecisionCtx) -> (Real, Real) {
        let n = self.cfg.n();
        let mut a = ctx.zero();
        let mut d = ctx.zero();
        for j in 0..n {
            a -= &self.coeffs.c[j] * &self.exp_mkx[j] * 2;
            d -= &self.coeffs.d[j] * &self.exp_kx[j] * 2;
        }
        if n % 2 == 1 {
            d = -d;
        }
        (a, d)
    }

    /// The two coefficient forms of `μ`: `(-1)^n 2Σ c_j e^{κ_j x}` and
    /// `2Σ d_j e^{-κ_j x}`.
    pub fn mu_pair(&self, ctx: &PrecisionCtx) -> (Real, Real) {
        let n = self.cfg.n();
        let mut m1 = ctx.zero();
        let mut m2 = ctx.zero();
        for j in 0..n {
            m1 += &self.coeffs.c[j] * &self.exp_kx[j] * 2;
            m2 += &self.coeffs.d[j] * &self.exp_mkx[j] * 2;
        }
        if n % 2 == 1 {
            m1 = -m1;
        }
        (m1, m2)
    }
}

/// `γ(w) = ∏ 1/(w - z_j) = ∏ 1/(w + iκ_j)`.
pub fn gamma(cfg: &ZeroConfig, w: &Complex, ctx: &PrecisionCtx) -> Complex {
    let mut g = Complex::one(ctx);
    for k in &cfg.kappas {
        g = &g / &Complex::new(w.re.clone(), &w.im + k);
    }
    g
}

/// Incomplete kernel through the E/F representation.
pub fn kernel_incomplete_ef(
    cfg: &ZeroConfig,
    z: &Complex,
    w: &Complex,
    ctx: &PrecisionCtx,
) -> Result<KernelValue> {
    let space = Space::new(cfg.clone(), ctx)?;
    Ok(KernelValue {
        value: space.kernel_incomplete(z, w, ctx),
        z: z.clone(),
        w: w.clone(),
        kind: KernelKind::Incomplete,
    })
}

/// Complete kernel `𝓚_z(w)` through the bordered Gram determinant
/// `det[[G, Z(z, z_i)], [Z(z_j, w), Z(z, w)]] / det G` times
/// `γ(w)·conj(γ(z))`. At points of σ the value is the finite limit computed
/// from the E/F representation.
pub fn kernel_complete_gram(
    cfg: &ZeroConfig,
    z: &Complex,
    w: &Complex,
    ctx: &PrecisionCtx,
) -> Result<KernelValue> {
    let n = cfg.n();
    let x = &cfg.x;
    let kv = |value| KernelValue {
        value,
        z: z.clone(),
        w: w.clone(),
        kind: KernelKind::Complete,
    };
    if n == 0 {
        return Ok(kv(pw_kernel(z, w, x, ctx)));
    }
    let zs = cfg.zeros();
    let r = ctx.pow10(-(ctx.digits() as i32) / 2);
    if zs.iter().any(|zj| (z - zj).abs() < r || (w - zj).abs() < r) {
        let space = Space::new(cfg.clone(), ctx)?;
        return space.kernel_complete_ef(z, w, ctx).map(kv);
    }
    let g = gram_matrix(cfg, ctx)?;
    let gn = det(&g, ctx)?;
    if !gn.is_positive() {
        return Err(Error::Conditioning {
            estimate: f64::INFINITY,
            context: "Gram determinant is not positive".into(),
        });
    }
    let m = Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => Complex::from_real(g.get(i, j).clone()),
        (true, false) => pw_kernel(z, &zs[i], x, ctx),
        (false, true) => pw_kernel(&zs[j], w, x, ctx),
        (false, false) => pw_kernel(z, w, x, ctx),
    });
    let k = det(&m, ctx)? / Complex::from_real(gn);
    Ok(kv(&(&gamma(cfg, w, ctx) * &gamma(cfg, z, ctx).conj()) * &k))
}

/// `(𝓐_σ(w), 𝓑_σ(w))` from the interleaved determinants with base
/// `A(w) = cos(xw)`, `B(w) = sin(xw)`.
pub fn ab_sigma(cfg: &ZeroConfig, w: &Complex, ctx: &PrecisionCtx) -> Result<(Complex, Complex)> {
    let n = cfg.n();
    let x = &cfg.x;
    if !cfg.sums_nonzero() {
        bail!(
            Precondition,
            "the determinantal A/B formulas need kappa_i + kappa_j != 0 for all i, j"
        );
    }
    let wx = w.scale(x);
    if n == 0 {
        return Ok((wx.cos(ctx), wx.sin(ctx)));
    }
    let mut pts = cfg.zeros();
    pts.push(w.clone());
    let a_vals: Vec<Complex> = pts.iter().map(|p| p.scale(x).cos(ctx)).collect();
    let b_vals: Vec<Complex> = pts.iter().map(|p| p.scale(x).sin(ctx)).collect();
    let mut gg = Complex::one(ctx);
    let w2 = w * w;
    for k in &cfg.kappas {
        let f = &w2 + &k.sqr();
        if f.abs() < ctx.pow10(-(ctx.digits() as i32) / 2) {
            bail!(
                Pole,
                "w coincides with ±z_j; the determinant quotient is 0/0 there"
            );
        }
        gg = &gg / &f;
    }
    let u_full = crate::detid::interleaved_matrix(&a_vals, &b_vals, &pts)?;
    let v_full = crate::detid::interleaved_matrix(&b_vals, &a_vals, &pts)?;
    let du = det(&u_full.principal(n), ctx)?;
    let dv = det(&v_full.principal(n), ctx)?;
    if du.is_zero() || dv.is_zero() {
        return Err(Error::Conditioning {
            estimate: f64::INFINITY,
            context: "principal minor vanishes".into(),
        });
    }
    let sa = if (n * (n - 1) / 2) % 2 == 0 {
        ctx.one()
    } else {
        -ctx.one()
    };
    let sb = if (n * (n + 1) / 2) % 2 == 0 {
        ctx.one()
    } else {
        -ctx.one()
    };
    let a = (&gg * &det(&u_full, ctx)?).scale(&sa) / du;
    let b = (&gg * &det(&v_full, ctx)?).scale(&sb) / dv;
    Ok((a, b))
}

/// Complete kernel from `𝓐`, `𝓑`:
/// `2(conj 𝓑(z)·𝓐(w) - conj 𝓐(z)·𝓑(w)) / (z̄ - w)`.
pub fn kernel_ab(
    cfg: &ZeroConfig,
    z: &Complex,
    w: &Complex,
    ctx: &PrecisionCtx,
) -> Result<KernelValue> {
    let delta = &z.conj() - w;
    if delta.abs() < ctx.pow10(-(ctx.digits() as i32) / 2) {
        bail!(Pole, "z̄ = w is not supported by the A/B kernel route");
    }
    let (az, bz) = ab_sigma(cfg, z, ctx)?;
    let (aw, bw) = ab_sigma(cfg, w, ctx)?;
    let num = &bz.conj() * &aw - &az.conj() * &bw;
    let value = num.scale(&ctx.int(2)) / delta;
    Ok(KernelValue {
        value,
        z: z.clone(),
        w: w.clone(),
        kind: KernelKind::Complete,
    })
}

/// `(α_σ, δ_σ)` for the given coefficients.
pub fn alpha_delta(
    cfg: &ZeroConfig,
    coeffs: &CoeffVector,
    ctx: &PrecisionCtx,
) -> Result<(Real, Real)> {
    if coeffs.c.len() != cfg.n() || coeffs.d.len() != cfg.n() {
        bail!(
            Dimension,
            "coefficient vector does not match the configuration"
        );
    }
    Ok(Space::from_parts(cfg.clone(), None, coeffs.clone(), ctx).alpha_delta(ctx))
}

/// Rational factors `[P_E, Q_E, P_F, Q_F]` with
/// `E(w) = e^{-ixw} P_E(w) + e^{ixw} Q_E(w)` and likewise for `F`.
fn ef_split(space: &Space, w: &Complex, ctx: &PrecisionCtx) -> [Complex; 4] {
    let t = w.mul_neg_i();
    let n = space.cfg.n();
    let one = Complex::one(ctx);
    let sign = if n % 2 == 0 { ctx.one() } else { -ctx.one() };
    let (mut pe, mut qe) = (one.clone(), Complex::zero(ctx));
    let (mut pf, mut qf) = (Complex::zero(ctx), one.scale(&sign));
    for j in 0..n {
        let r = (&t - &one.scale(&space.cfg.kappas[j])).recip();
        let lo = r.scale(&space.exp_mkx[j]);
        let hi = r.scale(&space.exp_kx[j]);
        pe += &lo.scale(&space.coeffs.c[j]);
        qe -= &hi.scale(&space.coeffs.c[j]);
        pf += &lo.scale(&space.coeffs.d[j]);
        qf -= &hi.scale(&space.coeffs.d[j]);
    }
    [pe, qe, pf, qf]
}

fn panel_sum(
    f: impl Fn(&Real) -> Complex,
    lo: &Real,
    hi: &Real,
    panels: usize,
    rule: &GaussLegendre,
    ctx: &PrecisionCtx,
) -> Complex {
    let width = (hi - lo) / panels as i64;
    let mut total = Complex::zero(ctx);
    for p in 0..panels {
        let start = lo + &width * p as i64;
        for (u, wt) in rule.nodes.iter().zip(&rule.weights) {
            total += f(&(&start + &width * u)).scale(wt);
        }
    }
    total.scale(&width)
}

/// Reproducing property by quadrature on `[-T, T]`.
///
/// Computes `(1/2π)∫ conj(𝓚_z(t))·𝓚_w(t)/|γ(t)|² dt`, the inner product
/// of the space with prescribed zeros, and compares it with `𝓚_w(z)` from
/// the bordered Gram route. The integral over `[-T, T]` uses `panels`
/// Gauss–Legendre panels of `order` nodes. The two tails beyond `±T` are
/// added in closed quadrature form: on the real line the integrand splits
/// into a rational part and rational multiples of `e^{±2ixt}`; the rational
/// part is integrated after `t = ±T/s`, the oscillating parts along vertical
/// rays from `±T`, where they decay like `e^{-2x|Im t|}`.
pub fn reproducing_check(
    cfg: &ZeroConfig,
    z: &Complex,
    w: &Complex,
    t_max: &Real,
    panels: usize,
    order: usize,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    if panels == 0 || !t_max.is_positive() {
        bail!(
            Precondition,
            "need a positive truncation and at least one panel"
        );
    }
    let space = Space::new(cfg.clone(), ctx)?;
    let rule = GaussLegendre::new(order, ctx)?;
    let gz = space.gamma(z, ctx).conj();
    let gw = space.gamma(w, ctx).conj();
    let body = panel_sum(
        |t| {
            let t = Complex::from_real(t.clone());
            let kz = &gz * &space.kernel_incomplete(z, &t, ctx);
            let kw = &gw * &space.kernel_incomplete(w, &t, ctx);
            &kz.conj() * &kw
        },
        &-t_max,
        t_max,
        panels,
        &rule,
        ctx,
    );

    // K^σ(p, t) = e^{-ixt} α_p(t) + e^{ixt} β_p(t).
    let (ez, fz) = space.ef(z, ctx);
    let (ew, fw) = space.ef(w, ctx);
    let alpha_beta = |e: &Complex, f: &Complex, p: &Complex, t: &Complex| {
        let [pe, qe, pf, qf] = ef_split(&space, t, ctx);
        let d = (&p.conj() - t).mul_i();
        let (ec, fc) = (e.conj(), f.conj());
        (
            &(&(&ec * &pe) - &(&fc * &pf)) / &d,
            &(&(&ec * &qe) - &(&fc * &qf)) / &d,
        )
    };
    // Integrand = r0(t) + e^{2ixt} rp(t) + e^{-2ixt} rm(t).
    let parts = |t: &Complex| {
        let (az, bz) = alpha_beta(&ez, &fz, z, &t.conj());
        let (az, bz) = (az.conj(), bz.conj());
        let (aw, bw) = alpha_beta(&ew, &fw, w, t);
        (&(&az * &aw) + &(&bz * &bw), &az * &bw, &bz * &aw)
    };
    let x = cfg.x();
    let zero = ctx.zero();
    let one = ctx.one();
    let rational = panel_sum(
        |s| {
            let u = t_max / s;
            let jac = &u / s;
            let plus = parts(&Complex::from_real(u.clone())).0;
            let minus = parts(&Complex::from_real(-u)).0;
            (&plus + &minus).scale(&jac)
        },
        &zero,
        &one,
        16,
        &rule,
        ctx,
    );
    let ray_len = ctx.int(ctx.digits() as i64 + 10) * ctx.real(core::f64::consts::LN_10) / (x * 2);
    let damp = |y: &Real| (-(x * y * 2)).exp(ctx);
    let ray = |sign_re: i64, sign_im: i64, y: &Real| Complex::new(t_max * sign_re, y * sign_im);
    let rays = panel_sum(
        |y| {
            let up_r = parts(&ray(1, 1, y)).1;
            let up_l = parts(&ray(-1, 1, y)).1;
            let dn_r = parts(&ray(1, -1, y)).2;
            let dn_l = parts(&ray(-1, -1, y)).2;
            let phase = Complex::new(zero.clone(), t_max * x * 2).exp(ctx);
            let fwd = &(&up_r + &dn_l) * &phase;
            let back = &(&up_l + &dn_r) * &phase.conj();
            (&fwd - &back).mul_i().scale(&damp(y))
        },
        &zero,
        &ray_len,
        64,
        &rule,
        ctx,
    );
    let tails = &(&gz.conj() * &gw) * &(&rational + &rays);
    let two_pi = ctx.pi() * 2;
    let lhs = (&body + &tails).scale(&two_pi.recip());
    let rhs = kernel_complete_gram(cfg, w, z, ctx)?.value;
    let inputs = format!(
        "{} z={:?} w={:?} T={}",
        cfg.describe(),
        z.to_f64(),
        w.to_f64(),
        t_max.to_f64()
    );
    Ok(ResidualReport::compare(
        "reproducing",
        inputs,
        &lhs,
        &rhs,
        tolerance,
        ToleranceMode::Relative,
    ))
}

/// Pairwise agreement of the bordered-Gram, E/F and 𝓐/𝓑 routes to the
/// complete kernel at `(z, w)`.
pub fn kernel_agreement(
    cfg: &ZeroConfig,
    z: &Complex,
    w: &Complex,
    tolerance: f64,
    ctx: &PrecisionCtx,
) -> Result<Vec<ResidualReport>> {
    let gram = kernel_complete_gram(cfg, z, w, ctx)?.value;
    let ef = Space::new(cfg.clone(), ctx)?.kernel_complete_ef(z, w, ctx)?;
    let ab = kernel_ab(cfg, z, w, ctx)?.value;
    let inputs = format!("{} z={:?} w={:?}", cfg.describe(), z.to_f64(), w.to_f64());
    Ok([
        ("kernel_gram_ef", &gram, &ef),
        ("kernel_gram_ab", &gram, &ab),
        ("kernel_ef_ab", &ef, &ab),
    ]
    .into_iter()
    .map(|(id, l, r)| {
        ResidualReport::compare(id, inputs.clone(), l, r, tolerance, ToleranceMode::Relative)
    })
    .collect())
}
