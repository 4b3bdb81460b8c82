//! The `mu` and `pvi` sweeps over an a-grid.
//!
//! `mu` columns: `a, b, <one per representation>, max_rel_disagreement`.
//! `pvi` columns: `a, b, q, dq_db, d2q_db2, pvi_residual, alpha, beta,
//! gamma, delta, status`, where `status` is `ok`, `fail` (residual above
//! tolerance), `pole: …` or `error: …`.

use pwkrein_core::krein::{mu, MuRepresentation};
use pwkrein_core::painleve::{pvi_evaluate, PVIParams, RESIDUAL_TOLERANCE};
use pwkrein_core::pwspace::ZeroConfig;
use pwkrein_core::{Error, PrecisionCtx, Real};
use serde_json::{Map, Value};

use crate::args::{GridArgs, MuArgs, PviArgs};
use crate::grid::Grid;
use crate::output::{number, Cell, Format, Table};
use crate::{par_map, Outcome, UsageError};

pub(crate) fn context(digits: u32) -> Result<PrecisionCtx, UsageError> {
    PrecisionCtx::new(digits).map_err(|e| UsageError(format!("--digits {digits}: {e}")))
}

pub(crate) fn parse_real(s: &str, flag: &str, ctx: &PrecisionCtx) -> Result<Real, UsageError> {
    ctx.parse(s.trim())
        .map_err(|_| UsageError(format!("{flag}: '{s}' is not a number")))
}

pub(crate) fn grid_from(g: &GridArgs) -> Result<Option<Grid>, UsageError> {
    Grid::from_parts(
        g.a.as_deref(),
        g.a_start.as_deref(),
        g.a_stop.as_deref(),
        g.a_count,
    )
}

fn required_grid(g: &GridArgs) -> Result<Grid, UsageError> {
    grid_from(g)?.ok_or_else(|| {
        UsageError("an a-grid is required (--a or --a-start/--a-stop/--a-count)".into())
    })
}

fn rel_diff(p: &Real, q: &Real) -> f64 {
    let s = p.abs().max(q.abs());
    if s.is_zero() {
        0.0
    } else {
        ((p - q).abs() / s).to_f64()
    }
}

/// Validated input of the `mu` command.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub nu: String,
    pub n: usize,
    pub grid: Grid,
    pub reps: Vec<MuRepresentation>,
    pub digits: u32,
    pub format: Format,
    pub sig_digits: usize,
    pub jobs: Option<usize>,
}

impl SweepSpec {
    pub fn from_args(a: &MuArgs) -> Result<Self, UsageError> {
        let ctx = context(a.common.digits)?;
        let nu = parse_real(&a.nu, "--nu", &ctx)?;
        let grid = required_grid(&a.grid)?;
        let cfg = ZeroConfig::progression_at(&nu, a.n, &grid.point(0, &ctx), &ctx)
            .map_err(|e| UsageError(format!("invalid (nu, n): {e}")))?;
        let reps = match &a.rep {
            None => MuRepresentation::ALL
                .into_iter()
                .filter(|r| r.is_applicable(&cfg))
                .collect(),
            Some(names) => {
                let mut reps: Vec<MuRepresentation> = Vec::new();
                for name in names {
                    let r: MuRepresentation =
                        name.parse().map_err(|e: Error| UsageError(e.to_string()))?;
                    r.check_applicable(&cfg)
                        .map_err(|e| UsageError(e.to_string()))?;
                    if reps.contains(&r) {
                        return Err(UsageError(format!("representation {r} is listed twice")));
                    }
                    reps.push(r);
                }
                reps
            }
        };
        if reps.is_empty() {
            return Err(UsageError("no representation selected".into()));
        }
        Ok(SweepSpec {
            nu: a.nu.trim().into(),
            n: a.n,
            grid,
            reps,
            digits: a.common.digits,
            format: a.format,
            sig_digits: a.common.sig_digits.into(),
            jobs: a.common.jobs,
        })
    }
}

/// One evaluated grid point of the μ sweep.
#[derive(Clone, Debug)]
pub struct MuRow {
    pub a: f64,
    pub b: f64,
    pub values: Vec<Result<f64, String>>,
    pub max_rel_disagreement: Option<f64>,
}

pub fn mu_rows(spec: &SweepSpec) -> Vec<MuRow> {
    par_map(spec.jobs, spec.grid.len(), |i| {
        let ctx = PrecisionCtx::new(spec.digits).expect("validated digits");
        let nu = ctx.parse(&spec.nu).expect("validated nu");
        let a = spec.grid.point(i, &ctx);
        let vals: Vec<Result<Real, String>> =
            match ZeroConfig::progression_at(&nu, spec.n, &a, &ctx) {
                Ok(cfg) => spec
                    .reps
                    .iter()
                    .map(|&r| mu(&cfg, r, &ctx).map_err(|e| e.to_string()))
                    .collect(),
                Err(e) => spec.reps.iter().map(|_| Err(e.to_string())).collect(),
            };
        let ok: Option<Vec<&Real>> = vals.iter().map(|v| v.as_ref().ok()).collect();
        let max_rel_disagreement = ok.map(|ok| {
            let mut worst = 0.0f64;
            for i in 0..ok.len() {
                for j in i + 1..ok.len() {
                    worst = worst.max(rel_diff(ok[i], ok[j]));
                }
            }
            worst
        });
        MuRow {
            a: a.to_f64(),
            b: a.sqr().to_f64(),
            values: vals.into_iter().map(|v| v.map(|r| r.to_f64())).collect(),
            max_rel_disagreement,
        }
    })
}

pub fn run_mu(spec: &SweepSpec) -> Outcome {
    let rows = mu_rows(spec);
    let mut cols = vec![String::from("a"), String::from("b")];
    cols.extend(spec.reps.iter().map(|r| r.name().to_string()));
    cols.push("max_rel_disagreement".into());
    let mut table = Table::new(cols);
    let mut diagnostics = Vec::new();
    for row in &rows {
        let mut cells = vec![Cell::Num(row.a), Cell::Num(row.b)];
        for (rep, v) in spec.reps.iter().zip(&row.values) {
            match v {
                Ok(v) => cells.push(Cell::Num(*v)),
                Err(e) => {
                    diagnostics.push(format!("error: a={}: {rep}: {e}", row.a));
                    cells.push(Cell::Empty);
                }
            }
        }
        cells.push(row.max_rel_disagreement.map_or(Cell::Empty, Cell::Num));
        table.push(cells);
    }
    let mut meta = Map::new();
    meta.insert("command".into(), "mu".into());
    meta.insert("nu".into(), Value::from(spec.nu.as_str()));
    meta.insert("n".into(), spec.n.into());
    meta.insert("digits".into(), spec.digits.into());
    meta.insert("sig_digits".into(), spec.sig_digits.into());
    meta.insert(
        "representations".into(),
        spec.reps.iter().map(|r| Value::from(r.name())).collect(),
    );
    meta.insert("points".into(), rows.len().into());
    Outcome {
        body: table.render(spec.format, meta, "rows", spec.sig_digits),
        failed: !diagnostics.is_empty(),
        diagnostics,
    }
}

pub fn cmd_mu(a: &MuArgs) -> Result<Outcome, UsageError> {
    Ok(run_mu(&SweepSpec::from_args(a)?))
}

/// Validated input of the `pvi` command.
#[derive(Clone, Debug)]
pub struct PviSpec {
    pub nu: String,
    pub n: usize,
    pub grid: Grid,
    pub digits: u32,
    pub format: Format,
    pub sig_digits: usize,
    pub jobs: Option<usize>,
}

impl PviSpec {
    pub fn from_args(a: &PviArgs) -> Result<Self, UsageError> {
        let ctx = context(a.common.digits)?;
        let nu = parse_real(&a.nu, "--nu", &ctx)?;
        if !(&nu + 1i64).is_positive() {
            return Err(UsageError(format!("--nu {} must exceed -1", a.nu)));
        }
        if a.n == 0 {
            return Err(UsageError("--n must be at least 1".into()));
        }
        Ok(PviSpec {
            nu: a.nu.trim().into(),
            n: a.n,
            grid: required_grid(&a.grid)?,
            digits: a.common.digits,
            format: a.format,
            sig_digits: a.common.sig_digits.into(),
            jobs: a.common.jobs,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PviStatus {
    Ok,
    Fail,
    Pole(String),
    Error(String),
}

impl PviStatus {
    fn text(&self) -> String {
        match self {
            PviStatus::Ok => "ok".into(),
            PviStatus::Fail => "fail".into(),
            PviStatus::Pole(m) => format!("pole: {m}"),
            PviStatus::Error(m) => format!("error: {m}"),
        }
    }
}

/// One evaluated grid point of the Painlevé VI table.
#[derive(Clone, Debug)]
pub struct PviRow {
    pub a: f64,
    pub b: f64,
    /// `q`, `dq/db`, `d²q/db²` and the relative residual.
    pub values: Option<[f64; 4]>,
    pub status: PviStatus,
}

pub fn pvi_rows(spec: &PviSpec) -> Vec<PviRow> {
    par_map(spec.jobs, spec.grid.len(), |i| {
        let ctx = PrecisionCtx::new(spec.digits).expect("validated digits");
        let nu = ctx.parse(&spec.nu).expect("validated nu");
        let a = spec.grid.point(i, &ctx);
        let (af, bf) = (a.to_f64(), a.sqr().to_f64());
        match pvi_evaluate(&nu, spec.n, &a, &ctx) {
            Ok(ev) => {
                let rel = ev.relative().to_f64();
                let d = &ev.derivatives;
                let status = if rel <= RESIDUAL_TOLERANCE {
                    PviStatus::Ok
                } else {
                    PviStatus::Fail
                };
                PviRow {
                    a: af,
                    b: bf,
                    values: Some([d.q.to_f64(), d.dq_db.to_f64(), d.d2q_db2.to_f64(), rel]),
                    status,
                }
            }
            Err(Error::Pole(m)) => PviRow {
                a: af,
                b: bf,
                values: None,
                status: PviStatus::Pole(m),
            },
            Err(e) => PviRow {
                a: af,
                b: bf,
                values: None,
                status: PviStatus::Error(e.to_string()),
            },
        }
    })
}

pub fn run_pvi(spec: &PviSpec) -> Outcome {
    let rows = pvi_rows(spec);
    let ctx = PrecisionCtx::new(spec.digits).expect("validated digits");
    let p = PVIParams::for_progression(&ctx.parse(&spec.nu).expect("validated nu"), spec.n, &ctx);
    let params = [
        p.alpha.to_f64(),
        p.beta.to_f64(),
        p.gamma.to_f64(),
        p.delta.to_f64(),
    ];
    let mut table = Table::new([
        "a",
        "b",
        "q",
        "dq_db",
        "d2q_db2",
        "pvi_residual",
        "alpha",
        "beta",
        "gamma",
        "delta",
        "status",
    ]);
    let mut diagnostics = Vec::new();
    let mut failed = false;
    for row in &rows {
        let mut cells = vec![Cell::Num(row.a), Cell::Num(row.b)];
        match row.values {
            Some(v) => cells.extend(v.map(Cell::Num)),
            None => cells.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
        }
        cells.extend(params.map(Cell::Num));
        cells.push(Cell::Text(row.status.text()));
        match &row.status {
            PviStatus::Ok => {}
            PviStatus::Pole(m) => diagnostics.push(format!("warning: a={}: pole: {m}", row.a)),
            PviStatus::Fail => {
                failed = true;
                diagnostics.push(format!(
                    "error: a={}: residual above {RESIDUAL_TOLERANCE:e}",
                    row.a
                ));
            }
            PviStatus::Error(m) => {
                failed = true;
                diagnostics.push(format!("error: a={}: {m}", row.a));
            }
        }
        table.push(cells);
    }
    let mut meta = Map::new();
    meta.insert("command".into(), "pvi".into());
    meta.insert("nu".into(), Value::from(spec.nu.as_str()));
    meta.insert("n".into(), spec.n.into());
    meta.insert("digits".into(), spec.digits.into());
    meta.insert("sig_digits".into(), spec.sig_digits.into());
    meta.insert(
        "tolerance".into(),
        number(RESIDUAL_TOLERANCE, spec.sig_digits),
    );
    meta.insert("points".into(), rows.len().into());
    Outcome {
        body: table.render(spec.format, meta, "rows", spec.sig_digits),
        failed,
        diagnostics,
    }
}

pub fn cmd_pvi(a: &PviArgs) -> Result<Outcome, UsageError> {
    Ok(run_pvi(&PviSpec::from_args(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{Cli, Command};
    use clap::Parser;

    fn mu_args(v: &[&str]) -> MuArgs {
        let mut full = vec!["pwkrein", "mu"];
        full.extend_from_slice(v);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Mu(m) => m,
            _ => unreachable!(),
        }
    }

    fn pvi_args(v: &[&str]) -> PviArgs {
        let mut full = vec!["pwkrein", "pvi"];
        full.extend_from_slice(v);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Pvi(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn mu_closed_form_n1() {
        let spec = SweepSpec::from_args(&mu_args(&[
            "--nu",
            "0",
            "--n",
            "1",
            "--a",
            "0.5",
            "--rep",
            "bordered,wronskian",
            "--digits",
            "30",
        ]))
        .unwrap();
        let rows = mu_rows(&spec);
        // 1/sh(log 2) = 4/3.
        for v in &rows[0].values {
            assert!((v.as_ref().unwrap() - 4.0 / 3.0).abs() < 1e-15);
        }
        assert!(rows[0].max_rel_disagreement.unwrap() < 1e-25);
        let out = run_mu(&spec);
        assert!(!out.failed);
        assert!(out.body.starts_with("a,b,bordered-gram,wronskian,max_rel_disagreement\n5.0000000000000000e-1,2.5000000000000000e-1,1.3333333333333333e+0,"));
    }

    #[test]
    fn mu_n0_is_zero_and_default_reps() {
        let spec = SweepSpec::from_args(&mu_args(&[
            "--nu", "0", "--n", "0", "--a", "0.3,0.6", "--digits", "30",
        ]))
        .unwrap();
        assert!(!spec.reps.contains(&MuRepresentation::FromXY));
        for row in mu_rows(&spec) {
            assert!(row.values.iter().all(|v| *v.as_ref().unwrap() == 0.0));
            assert_eq!(row.max_rel_disagreement, Some(0.0));
        }
    }

    #[test]
    fn mu_usage_errors() {
        for bad in [
            &["--nu", "0", "--n", "1"][..],
            &["--nu", "0", "--n", "4", "--a", "0.5", "--rep", "multint"],
            &["--nu", "0", "--n", "1", "--a", "1.2"],
            &["--nu", "zero", "--n", "1", "--a", "0.5"],
            &["--nu", "0", "--n", "1", "--a", "0.5", "--rep", "gram,gram"],
            &[
                "--nu",
                "0",
                "--n",
                "1",
                "--a-start",
                "0.2",
                "--a-stop",
                "0.4",
                "--a-count",
                "0",
            ],
        ] {
            assert!(SweepSpec::from_args(&mu_args(bad)).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn pvi_closed_form_and_params() {
        let spec = PviSpec::from_args(&pvi_args(&[
            "--nu",
            "0",
            "--n",
            "1",
            "--a-start",
            "0.3",
            "--a-stop",
            "0.7",
            "--a-count",
            "3",
            "--digits",
            "40",
        ]))
        .unwrap();
        let out = run_pvi(&spec);
        assert!(!out.failed, "{:?}", out.diagnostics);
        for row in pvi_rows(&spec) {
            let q = row.values.unwrap()[0];
            assert!((q - 2.0 * row.b / (1.0 + row.b)).abs() < 1e-10);
            assert_eq!(row.status, PviStatus::Ok);
        }
        let first = out.body.lines().nth(1).unwrap();
        assert!(first.ends_with(",5.0000000000000000e-1,-2.0000000000000000e+0,5.0000000000000000e-1,0.0000000000000000e+0,ok"), "{first}");
    }

    #[test]
    fn pvi_usage_errors() {
        for bad in [
            &["--nu", "0", "--n", "0", "--a", "0.5"][..],
            &["--nu", "-1", "--n", "1", "--a", "0.5"],
            &["--nu", "0", "--n", "1", "--a", ","],
        ] {
            assert!(PviSpec::from_args(&pvi_args(bad)).is_err(), "{bad:?}");
        }
    }
}
