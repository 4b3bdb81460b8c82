//! Verification suites behind `verify`.
//!
//! A suite is a list of [`Check`]s planned up front: every random draw
//! happens while planning, from a ChaCha stream seeded by `--seed`, so the
//! report depends only on the flags. Checks run in parallel and their
//! reports are emitted in plan order. A check whose computation fails
//! becomes a failed record carrying the error as its note.
//!
//! Report columns: `suite, id, inputs, lhs_re, lhs_im, rhs_re, rhs_im,
//! abs_residual, rel_residual, tolerance, mode, pass, note`.

use pwkrein_core::detid::{
    okada_identity, random_complex_instance, random_real_instance, shch_gram_identity,
};
use pwkrein_core::krein::{
    coefficient_ode_residual, crum_equivalence, crum_tau_residual, first_order_residual,
    krein_residual, mu_agreement, mu_closed_form_check, potential_shift_residual,
    schrodinger_residual, tau_consistency, DarbouxChain, FD_TOLERANCE,
};
use pwkrein_core::painleve::{
    backlund_residuals, identity_suite, nonlinear_residual, pvi_residual, q_value,
    rationality_check, scan_one_plus_axy, t_equation_residual, RESIDUAL_TOLERANCE,
};
use pwkrein_core::pwspace::{kernel_agreement, reproducing_check, ZeroConfig};
use pwkrein_core::{Complex, PrecisionCtx, Real, ResidualReport, ToleranceMode, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use crate::args::{SuiteName, VerifyArgs};
use crate::grid::Grid;
use crate::output::{number, Cell, Format, Table};
use crate::sweep::{context, grid_from, parse_real};
use crate::{par_map, Outcome, UsageError};

/// Randomized instances of the interleaved-determinant identity.
pub const OKADA_INSTANCES: usize = 200;
/// Random `(κ, x)` draws for the sh/ch Gramian identity.
pub const GRAMIAN_INSTANCES: usize = 25;
/// Random `(z, w)` pairs compared across the three kernel routes.
pub const KERNEL_PAIRS: usize = 50;
/// Tolerance of the kernel-route and μ-route comparisons.
pub const ROUTE_TOLERANCE: f64 = 1e-8;
/// Tolerance of the `μ_{ν,1}` closed form.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-10;
/// Tolerance of the truncated reproducing-property integral.
pub const REPRODUCING_TOLERANCE: f64 = 1e-4;
/// Tolerance of the identity suite and of the Crum equivalence.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;
/// Tolerance of `q = 2b/(1+b)` at `(ν, n) = (0, 1)`.
pub const Q_CLOSED_FORM_TOLERANCE: f64 = 1e-8;

const DEFAULT_NUS: [&str; 4] = ["0", "0.5", "1", "2"];
const DEFAULT_NS: [usize; 3] = [1, 2, 3];
const KREIN_AS: [&str; 5] = ["0.2", "0.35", "0.5", "0.65", "0.8"];
const IDENTITY_NUS: [&str; 3] = ["0", "0.5", "1"];
const IDENTITY_NS: [usize; 2] = [1, 2];
const IDENTITY_AS: [&str; 3] = ["0.3", "0.5", "0.7"];
const W_SAMPLES: usize = 5;
const BACKLUND_PAIRS: [(&str, usize); 4] = [("0", 2), ("1", 2), ("1", 3), ("1", 1)];
const RATIONAL_PAIRS: [(i64, usize); 3] = [(0, 1), (1, 1), (0, 2)];

type Job = Box<dyn Fn(&PrecisionCtx) -> pwkrein_core::Result<Vec<ResidualReport>> + Send + Sync>;

/// One planned unit of work producing one or more reports.
pub struct Check {
    pub suite: &'static str,
    pub id: String,
    pub inputs: String,
    pub tolerance: f64,
    pub mode: ToleranceMode,
    job: Job,
}

impl Check {
    fn new<F>(
        suite: &'static str,
        id: &str,
        inputs: String,
        tolerance: f64,
        mode: ToleranceMode,
        job: F,
    ) -> Self
    where
        F: Fn(&PrecisionCtx) -> pwkrein_core::Result<Vec<ResidualReport>> + Send + Sync + 'static,
    {
        Check {
            suite,
            id: id.into(),
            inputs,
            tolerance,
            mode,
            job: Box::new(job),
        }
    }

    fn run(&self, ctx: &PrecisionCtx) -> Vec<ResidualReport> {
        match (self.job)(ctx) {
            Ok(r) => r,
            Err(e) => vec![ResidualReport::failed(
                &self.id,
                self.inputs.clone(),
                self.tolerance,
                self.mode,
                e.to_string(),
            )],
        }
    }
}

/// Restrictions of the default envelope given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Envelope {
    pub nu: Option<String>,
    pub n: Option<usize>,
    pub grid: Option<Grid>,
    pub seed: u64,
}

impl Envelope {
    fn nus(&self, default: &[&str]) -> Vec<String> {
        match &self.nu {
            Some(nu) => vec![nu.clone()],
            None => default.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn ns(&self, default: &[usize]) -> Vec<usize> {
        self.n.map_or_else(|| default.to_vec(), |n| vec![n])
    }

    fn grid_or(&self, default: Grid) -> Grid {
        self.grid.clone().unwrap_or(default)
    }
}

fn list(items: &[&str]) -> Grid {
    Grid::List(items.iter().map(|s| s.to_string()).collect())
}

fn default_painleve_grid() -> Grid {
    Grid::Range {
        start: "0.25".into(),
        stop: "0.75".into(),
        count: 11,
    }
}

fn parse(ctx: &PrecisionCtx, s: &str) -> Real {
    ctx.parse(s).expect("envelope values were validated")
}

/// `k/1000` for distinct integers `k` in `lo..=hi`.
fn distinct_thousandths(rng: &mut ChaCha8Rng, count: usize, lo: i64, hi: i64) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.gen_range(lo..=hi);
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

fn kappas(ctx: &PrecisionCtx, ks: &[i64]) -> Vec<Real> {
    ks.iter().map(|&k| ctx.ratio(k, 1000)).collect()
}

/// `x = -log a` from the envelope grid (cycled), else the drawn value.
fn x_for(grid: &Option<Grid>, i: usize, drawn: i64, ctx: &PrecisionCtx) -> Real {
    match grid {
        Some(g) => -g.point(i % g.len(), ctx).ln(ctx),
        None => ctx.ratio(drawn, 1000),
    }
}

fn detid_plan(env: &Envelope, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let rel = ToleranceMode::Relative;
    for i in 0..OKADA_INSTANCES {
        let n = env.n.unwrap_or(1 + i % 5);
        let complex = (i / 5) % 2 == 1;
        let seed: u64 = rng.gen();
        let inputs = format!(
            "n={n} {} seed={seed}",
            if complex { "complex" } else { "real" }
        );
        out.push(Check::new(
            "detid",
            "okada",
            inputs,
            1e-40,
            rel,
            move |ctx| {
                let mut r = ChaCha8Rng::seed_from_u64(seed);
                let rep = if complex {
                    okada_identity(&random_complex_instance(n, &mut r, ctx)?, ctx)?
                } else {
                    okada_identity(&random_real_instance(n, &mut r, ctx)?, ctx)?
                };
                Ok(vec![rep])
            },
        ));
    }
    for i in 0..GRAMIAN_INSTANCES {
        let n = env.n.unwrap_or(1 + i % 5).max(1);
        let ks = distinct_thousandths(rng, n, 100, 3000);
        let x: i64 = rng.gen_range(200..=3000);
        let grid = env.grid.clone();
        let inputs = format!("kappas={ks:?}/1000 x={x}/1000");
        out.push(Check::new(
            "detid",
            "shch_gram",
            inputs,
            1e-40,
            rel,
            move |ctx| {
                Ok(vec![shch_gram_identity(
                    &kappas(ctx, &ks),
                    &x_for(&grid, i, x, ctx),
                    ctx,
                )?])
            },
        ));
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> (i64, i64) {
    (rng.gen_range(-2000..=2000), rng.gen_range(-2000..=2000))
}

fn point(ctx: &PrecisionCtx, p: (i64, i64)) -> Complex {
    Complex::new(ctx.ratio(p.0, 1000), ctx.ratio(p.1, 1000))
}

fn pwspace_plan(env: &Envelope, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let rel = ToleranceMode::Relative;
    for i in 0..KERNEL_PAIRS {
        let n = env.n.unwrap_or(i % 6);
        let ks = distinct_thousandths(rng, n, 100, 3000);
        let x: i64 = rng.gen_range(200..=3000);
        let (z, w) = (random_point(rng), random_point(rng));
        let grid = env.grid.clone();
        let inputs = format!("kappas={ks:?}/1000 x={x}/1000 z={z:?}/1000 w={w:?}/1000");
        out.push(Check::new(
            "pwspace",
            "kernel_routes",
            inputs,
            ROUTE_TOLERANCE,
            rel,
            move |ctx| {
                let cfg = ZeroConfig::new(kappas(ctx, &ks), x_for(&grid, i, x, ctx))?;
                kernel_agreement(&cfg, &point(ctx, z), &point(ctx, w), ROUTE_TOLERANCE, ctx)
            },
        ));
    }
    let ns: Vec<usize> = env.n.map_or_else(|| vec![0, 1, 2], |n| vec![n]);
    for (i, n) in ns.into_iter().enumerate() {
        let ks = distinct_thousandths(rng, n, 300, 2500);
        let x: i64 = rng.gen_range(500..=2000);
        let (z, w) = (random_point(rng), random_point(rng));
        let grid = env.grid.clone();
        let inputs = format!("kappas={ks:?}/1000 x={x}/1000 z={z:?}/1000 w={w:?}/1000");
        out.push(Check::new(
            "pwspace",
            "reproducing",
            inputs,
            REPRODUCING_TOLERANCE,
            rel,
            move |ctx| {
                let cfg = ZeroConfig::new(kappas(ctx, &ks), x_for(&grid, i, x, ctx))?;
                let t_max = ctx.int(200) / cfg.x();
                Ok(vec![reproducing_check(
                    &cfg,
                    &point(ctx, z),
                    &point(ctx, w),
                    &t_max,
                    400,
                    12,
                    REPRODUCING_TOLERANCE,
                    ctx,
                )?])
            },
        ));
    }
}

fn krein_plan(env: &Envelope, out: &mut Vec<Check>) {
    let rel = ToleranceMode::Relative;
    let abs = ToleranceMode::Absolute;
    let grid = env.grid_or(list(&KREIN_AS));
    let w = (800, -300);
    for nu in env.nus(&DEFAULT_NUS) {
        for n in env.ns(&DEFAULT_NS) {
            for i in 0..grid.len() {
                let inputs = format!("nu={nu} n={n} a[{i}]");
                let cfg = {
                    let (nu, grid) = (nu.clone(), grid.clone());
                    move |ctx: &PrecisionCtx| {
                        ZeroConfig::progression_at(&parse(ctx, &nu), n, &grid.point(i, ctx), ctx)
                    }
                };
                let c = cfg.clone();
                out.push(Check::new(
                    "krein",
                    "mu_routes",
                    inputs.clone(),
                    ROUTE_TOLERANCE,
                    rel,
                    move |ctx| mu_agreement(&c(ctx)?, ROUTE_TOLERANCE, ctx),
                ));
                if n == 1 {
                    let (nu, grid) = (nu.clone(), grid.clone());
                    out.push(Check::new(
                        "krein",
                        "mu_closed_form",
                        inputs.clone(),
                        CLOSED_FORM_TOLERANCE,
                        rel,
                        move |ctx| {
                            Ok(vec![mu_closed_form_check(
                                &parse(ctx, &nu),
                                &grid.point(i, ctx),
                                CLOSED_FORM_TOLERANCE,
                                ctx,
                            )?])
                        },
                    ));
                }
                let c = cfg.clone();
                out.push(Check::new(
                    "krein",
                    "krein",
                    inputs.clone(),
                    FD_TOLERANCE,
                    rel,
                    move |ctx| Ok(vec![krein_residual(&c(ctx)?, &ctx.ratio(7, 10), ctx)?]),
                ));
                let c = cfg.clone();
                out.push(Check::new(
                    "krein",
                    "coefficient_ode",
                    inputs.clone(),
                    FD_TOLERANCE,
                    rel,
                    move |ctx| Ok(vec![coefficient_ode_residual(&c(ctx)?, ctx)?]),
                ));
                let c = cfg.clone();
                out.push(Check::new(
                    "krein",
                    "tau",
                    inputs.clone(),
                    FD_TOLERANCE,
                    abs,
                    move |ctx| Ok(vec![tau_consistency(&c(ctx)?, ctx)?]),
                ));
                let c = cfg;
                out.push(Check::new(
                    "krein",
                    "darboux",
                    inputs,
                    FD_TOLERANCE,
                    abs,
                    move |ctx| {
                        let cfg = c(ctx)?;
                        let chain = DarbouxChain::paley_wiener(cfg.kappas().to_vec())?;
                        let (x, wp) = (cfg.x(), point(ctx, w));
                        let mut r = crum_equivalence(&chain, &wp, x, IDENTITY_TOLERANCE, ctx)?;
                        r.push(schrodinger_residual(&chain, &wp, x, FD_TOLERANCE, ctx)?);
                        r.push(first_order_residual(&chain, &wp, x, FD_TOLERANCE, ctx)?);
                        r.push(potential_shift_residual(&chain, x, FD_TOLERANCE, ctx)?);
                        r.push(crum_tau_residual(&chain, x, FD_TOLERANCE, ctx)?);
                        Ok(r)
                    },
                ));
            }
        }
    }
}

/// Records `min(1 + aXY, 0)` against zero; the note carries the minimum.
fn one_plus_axy_report(
    nu: &str,
    n: usize,
    grid: &Grid,
    ctx: &PrecisionCtx,
) -> pwkrein_core::Result<ResidualReport> {
    let lo = scan_one_plus_axy(&parse(ctx, nu), n, &grid.points(ctx), ctx)?;
    let violation = lo.clone().min(ctx.zero());
    let inputs = format!("nu={nu} n={n} points={}", grid.len());
    let mut r = ResidualReport::compare_real(
        "one_plus_axy",
        inputs,
        &violation,
        &ctx.zero(),
        0.0,
        ToleranceMode::Absolute,
    );
    r.pass = lo.is_positive();
    r.note = Some(format!("min 1 + aXY = {:e}", lo.to_f64()));
    Ok(r)
}

fn q_closed_form(
    grid: &Grid,
    i: usize,
    ctx: &PrecisionCtx,
) -> pwkrein_core::Result<ResidualReport> {
    let a = grid.point(i, ctx);
    let b = a.sqr();
    let q = q_value(&ctx.zero(), 1, &a, ctx)?;
    let want = &b * 2 / (&b + 1i64);
    let inputs = format!("nu=0 n=1 a={}", a.to_f64());
    Ok(ResidualReport::compare_real(
        "q_closed_form",
        inputs,
        &q,
        &want,
        Q_CLOSED_FORM_TOLERANCE,
        ToleranceMode::Relative,
    ))
}

fn painleve_plan(env: &Envelope, rng: &mut ChaCha8Rng, out: &mut Vec<Check>) {
    let rel = ToleranceMode::Relative;
    let grid = env.grid_or(default_painleve_grid());
    let nus = env.nus(&DEFAULT_NUS);
    let ns = env.ns(&DEFAULT_NS);
    for nu in &nus {
        for &n in &ns {
            for i in 0..grid.len() {
                let inputs = format!("nu={nu} n={n} a[{i}]");
                let (nu_s, g) = (nu.clone(), grid.clone());
                out.push(Check::new(
                    "painleve",
                    "painleve",
                    inputs,
                    RESIDUAL_TOLERANCE,
                    rel,
                    move |ctx| {
                        let (nu, a) = (parse(ctx, &nu_s), g.point(i, ctx));
                        let mut r = vec![nonlinear_residual(&nu, n, &a, ctx)?];
                        r.push(pvi_residual(&nu, n, &a, ctx)?);
                        r.push(t_equation_residual(&nu, n, &a, ctx)?);
                        Ok(r)
                    },
                ));
                if nu.as_str() == "0" && n == 1 {
                    let g = grid.clone();
                    let inputs = format!("nu=0 n=1 a[{i}]");
                    out.push(Check::new(
                        "painleve",
                        "q_closed_form",
                        inputs,
                        Q_CLOSED_FORM_TOLERANCE,
                        rel,
                        move |ctx| Ok(vec![q_closed_form(&g, i, ctx)?]),
                    ));
                }
            }
            let (nu, g) = (nu.clone(), grid.clone());
            out.push(Check::new(
                "painleve",
                "one_plus_axy",
                format!("nu={nu} n={n}"),
                0.0,
                ToleranceMode::Absolute,
                move |ctx| Ok(vec![one_plus_axy_report(&nu, n, &g, ctx)?]),
            ));
        }
    }
    let ws: Vec<(i64, i64)> = (0..W_SAMPLES)
        .map(|_| (rng.gen_range(-1500..=1500), rng.gen_range(-1000..=1000)))
        .collect();
    let id_grid = env.grid_or(list(&IDENTITY_AS));
    for nu in env.nus(&IDENTITY_NUS) {
        for n in env.ns(&IDENTITY_NS) {
            for i in 0..id_grid.len() {
                let (nu, g, ws) = (nu.clone(), id_grid.clone(), ws.clone());
                let inputs = format!("nu={nu} n={n} a[{i}] w={ws:?}/1000");
                out.push(Check::new(
                    "painleve",
                    "identities",
                    inputs,
                    IDENTITY_TOLERANCE,
                    rel,
                    move |ctx| {
                        let w: Vec<Complex> = ws.iter().map(|&p| point(ctx, p)).collect();
                        identity_suite(&parse(ctx, &nu), n, &g.point(i, ctx), &w, ctx)
                    },
                ));
            }
        }
    }
    let pairs: Vec<(String, usize)> = if env.nu.is_some() || env.n.is_some() {
        let mut v = Vec::new();
        for nu in env.nus(&["0", "1"]) {
            for n in env.ns(&[1, 2, 3]) {
                v.push((nu.clone(), n));
            }
        }
        v
    } else {
        BACKLUND_PAIRS
            .iter()
            .map(|(nu, n)| (nu.to_string(), *n))
            .collect()
    };
    for (nu, n) in pairs {
        for i in 0..id_grid.len() {
            let g = id_grid.clone();
            let nu = nu.clone();
            out.push(Check::new(
                "painleve",
                "backlund",
                format!("nu={nu} n={n} a[{i}]"),
                RESIDUAL_TOLERANCE,
                rel,
                move |ctx| backlund_residuals(&parse(ctx, &nu), n, &g.point(i, ctx), ctx),
            ));
        }
    }
    let rational: Vec<(i64, usize)> = match (&env.nu, env.n) {
        (None, None) => RATIONAL_PAIRS.to_vec(),
        _ => {
            let nu_int = |s: &String| s.parse::<i64>().ok().filter(|v| *v >= 0);
            let nus: Vec<i64> = match &env.nu {
                Some(s) => nu_int(s).into_iter().collect(),
                None => vec![0, 1],
            };
            let ns: Vec<usize> = env.n.map_or_else(|| vec![1, 2], |n| vec![n]);
            nus.iter()
                .flat_map(|&nu| ns.iter().map(move |&n| (nu, n)))
                .filter(|&(nu, n)| n >= 1 && nu as usize + n <= 3)
                .collect()
        }
    };
    for (nu, n) in rational {
        out.push(Check::new(
            "painleve",
            "rationality",
            format!("nu={nu} n={n}"),
            0.0,
            ToleranceMode::Absolute,
            move |ctx| Ok(vec![rationality_check(nu, n, ctx)?]),
        ));
    }
}

/// All checks of `suite` in report order.
pub fn plan(suite: SuiteName, env: &Envelope) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(env.seed);
    let mut out = Vec::new();
    let all = suite == SuiteName::All;
    if all || suite == SuiteName::Detid {
        detid_plan(env, &mut rng, &mut out);
    }
    if all || suite == SuiteName::Pwspace {
        pwspace_plan(env, &mut rng, &mut out);
    }
    if all || suite == SuiteName::Krein {
        krein_plan(env, &mut out);
    }
    if all || suite == SuiteName::Painleve {
        painleve_plan(env, &mut rng, &mut out);
    }
    out
}

/// A report tagged with the suite that produced it.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub suite: &'static str,
    pub report: ResidualReport,
}

/// Outcome of a `verify` run.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: SuiteName,
    pub records: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
    /// Largest judged residual among the finite ones.
    pub worst_residual: Option<f64>,
}

pub fn execute(
    suite: SuiteName,
    checks: &[Check],
    digits: u32,
    jobs: Option<usize>,
) -> VerifyReport {
    let nested = par_map(jobs, checks.len(), |i| {
        let ctx = PrecisionCtx::new(digits).expect("validated digits");
        checks[i].run(&ctx)
    });
    let records: Vec<CheckRecord> = checks
        .iter()
        .zip(nested)
        .flat_map(|(c, reps)| {
            reps.into_iter().map(move |report| CheckRecord {
                suite: c.suite,
                report,
            })
        })
        .collect();
    let passed = records.iter().filter(|r| r.report.pass).count();
    let worst_residual = records
        .iter()
        .map(|r| r.report.residual())
        .filter(|v| v.is_finite())
        .reduce(f64::max);
    VerifyReport {
        suite,
        failed: records.len() - passed,
        passed,
        records,
        worst_residual,
    }
}

fn c64_cells(v: C64) -> [Cell; 2] {
    [Cell::Num(v.re), Cell::Num(v.im)]
}

impl VerifyReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "suite",
            "id",
            "inputs",
            "lhs_re",
            "lhs_im",
            "rhs_re",
            "rhs_im",
            "abs_residual",
            "rel_residual",
            "tolerance",
            "mode",
            "pass",
            "note",
        ]);
        for rec in &self.records {
            let r = &rec.report;
            let mut row = vec![
                Cell::Text(rec.suite.into()),
                Cell::Text(r.id.clone()),
                Cell::Text(r.inputs.clone()),
            ];
            row.extend(c64_cells(r.lhs));
            row.extend(c64_cells(r.rhs));
            row.extend([
                Cell::Num(r.abs_residual),
                Cell::Num(r.rel_residual),
                Cell::Num(r.tolerance),
                Cell::Text(r.mode.as_str().into()),
                Cell::Bool(r.pass),
                r.note.clone().map_or(Cell::Empty, Cell::Text),
            ]);
            t.push(row);
        }
        t
    }

    pub fn meta(&self, digits: u32, seed: u64, sig: usize) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), "verify".into());
        m.insert("suite".into(), self.suite.as_str().into());
        m.insert("digits".into(), digits.into());
        m.insert("seed".into(), seed.into());
        m.insert("sig_digits".into(), sig.into());
        m.insert("total".into(), self.records.len().into());
        m.insert("passed".into(), self.passed.into());
        m.insert("failed".into(), self.failed.into());
        m.insert(
            "worst_residual".into(),
            self.worst_residual.map_or(Value::Null, |v| number(v, sig)),
        );
        m
    }
}

pub fn envelope_from(a: &VerifyArgs) -> Result<Envelope, UsageError> {
    let ctx = context(a.common.digits)?;
    if let Some(nu) = &a.nu {
        let v = parse_real(nu, "--nu", &ctx)?;
        if !(&v + 1i64).is_positive() {
            return Err(UsageError(format!("--nu {nu} must exceed -1")));
        }
    }
    if a.n == Some(0) && matches!(a.suite, SuiteName::Painleve | SuiteName::Detid) {
        return Err(UsageError("--n must be at least 1 for this suite".into()));
    }
    if a.n.is_some_and(|n| n > 10) {
        return Err(UsageError(
            "--n above 10 is outside every suite's envelope".into(),
        ));
    }
    Ok(Envelope {
        nu: a.nu.as_ref().map(|s| s.trim().to_string()),
        n: a.n,
        grid: grid_from(&a.grid)?,
        seed: a.seed,
    })
}

pub fn run_verify(
    suite: SuiteName,
    env: &Envelope,
    digits: u32,
    jobs: Option<usize>,
    format: Format,
    sig: usize,
) -> (VerifyReport, Outcome) {
    let checks = plan(suite, env);
    let report = execute(suite, &checks, digits, jobs);
    let mut diagnostics: Vec<String> = report
        .records
        .iter()
        .filter(|r| !r.report.pass)
        .map(|r| {
            let rep = &r.report;
            let why = rep
                .note
                .clone()
                .unwrap_or_else(|| format!("residual {:e} > {:e}", rep.residual(), rep.tolerance));
            format!("FAIL {}/{} [{}]: {why}", r.suite, rep.id, rep.inputs)
        })
        .collect();
    diagnostics.push(format!(
        "suite {}: {} checks, {} passed, {} failed, worst residual {}",
        suite.as_str(),
        report.records.len(),
        report.passed,
        report.failed,
        report
            .worst_residual
            .map_or_else(|| "n/a".into(), |v| format!("{v:e}")),
    ));
    let body = report
        .table()
        .render(format, report.meta(digits, env.seed, sig), "checks", sig);
    let outcome = Outcome {
        body,
        failed: report.failed > 0,
        diagnostics,
    };
    (report, outcome)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome, UsageError> {
    let env = envelope_from(a)?;
    Ok(run_verify(
        a.suite,
        &env,
        a.common.digits,
        a.common.jobs,
        a.format,
        a.common.sig_digits.into(),
    )
    .1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_deterministic() {
        let env = Envelope {
            seed: 7,
            ..Envelope::default()
        };
        let a: Vec<String> = plan(SuiteName::All, &env)
            .iter()
            .map(|c| format!("{} {}", c.id, c.inputs))
            .collect();
        let b: Vec<String> = plan(SuiteName::All, &env)
            .iter()
            .map(|c| format!("{} {}", c.id, c.inputs))
            .collect();
        assert_eq!(a, b);
        let other = Envelope {
            seed: 8,
            ..Envelope::default()
        };
        let c: Vec<String> = plan(SuiteName::All, &other)
            .iter()
            .map(|c| format!("{} {}", c.id, c.inputs))
            .collect();
        assert_ne!(a, c);
    }

    #[test]
    fn plan_sizes() {
        let env = Envelope::default();
        assert_eq!(
            plan(SuiteName::Detid, &env).len(),
            OKADA_INSTANCES + GRAMIAN_INSTANCES
        );
        assert_eq!(plan(SuiteName::Pwspace, &env).len(), KERNEL_PAIRS + 3);
        let restricted = Envelope {
            nu: Some("0".into()),
            n: Some(1),
            ..Envelope::default()
        };
        let p = plan(SuiteName::Painleve, &restricted);
        assert!(p.iter().any(|c| c.id == "q_closed_form"));
        assert_eq!(p.iter().filter(|c| c.id == "rationality").count(), 1);
    }

    #[test]
    fn failing_job_becomes_failed_record() {
        let c = Check::new(
            "x",
            "boom",
            "in".into(),
            1e-6,
            ToleranceMode::Relative,
            |_| Err(pwkrein_core::Error::Pole("here".into())),
        );
        let r = execute(SuiteName::All, &[c], 20, Some(1));
        assert_eq!(r.failed, 1);
        assert!(r.records[0]
            .report
            .note
            .as_deref()
            .unwrap()
            .contains("here"));
        assert_eq!(r.worst_residual, None);
    }
}
