use alloc::vec;
use alloc::vec::Vec;

use super::{PrecisionCtx, Real};
use crate::error::{bail, Error, Result};

/// Gauss–Legendre rule mapped to `[0, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

impl GaussLegendre {
    /// `order`-point rule; nodes are Newton-refined roots of `P_order` at
    /// working precision.
    pub fn new(order: usize, ctx: &PrecisionCtx) -> Result<Self> {
        if order == 0 {
            bail!(Precondition, "quadrature order must be positive");
        }
        let n = order;
        let one = ctx.one();
        let tol = ctx.pow10(-(ctx.digits() as i32) - 15);
        let mut nodes = vec![ctx.zero(); n];
        let mut weights = vec![ctx.zero(); n];
        // Legendre P_n and its derivative at t by the three-term recurrence.
        let legendre = |t: &Real| -> (Real, Real) {
            let mut p0 = one.clone();
            let mut p1 = t.clone();
            for k in 2..=n {
                let k = k as i64;
                let p2 = (t * &p1 * (2 * k - 1) - &p0 * (k - 1)) / k;
                p0 = p1;
                p1 = p2;
            }
            let dp = (&p0 - t * &p1) * n as i64 / (&one - t.sqr());
            (p1, dp)
        };
        for i in 0..n.div_ceil(2) {
            let guess = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
            let mut t = ctx.real(guess);
            let mut dp = one.clone();
            let mut converged = false;
            for _ in 0..100 {
                let (p, d) = legendre(&t);
                let step = &p / &d;
                t -= &step;
                dp = d;
                if step.abs() < tol {
                    converged = true;
                    break;
                }
            }
            if !converged {
                bail!(
                    Evaluation,
                    "Legendre root {i} of order {n} did not converge"
                );
            }
            let (_, d) = legendre(&t);
            if !d.is_zero() {
                dp = d;
            }
            let w = (&one - t.sqr()).recip() / dp.sqr();
            // Map t ∈ [-1, 1] to u ∈ [0, 1]; weight 2/((1-t²)P'²) halves.
            let u_hi = (&one + &t) / 2;
            let u_lo = (&one - &t) / 2;
            nodes[i] = u_hi;
            weights[i] = w.clone();
            nodes[n - 1 - i] = u_lo;
            weights[n - 1 - i] = w;
        }
        Ok(GaussLegendre { nodes, weights })
    }
}

/// Converged tensor-product quadrature value.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: Real,
    /// Nodes per axis of the accepted rule.
    pub order: usize,
    /// Change between the accepted rule and the one with half the nodes.
    pub change: Real,
}

fn max_order(d: usize) -> usize {
    match d {
        1 => 1024,
        2 => 256,
        _ => 128,
    }
}

/// Tensor-product Gauss–Legendre integral over `[0,1]^d`, `d ≤ 3`.
///
/// Starts at `order` nodes per axis and doubles until two successive values
/// differ by at most `tol` relative to the value (absolute below
/// `10^(-digits/2)`).
pub fn quad_nd<F>(
    mut f: F,
    d: usize,
    order: usize,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<Quadrature>
where
    F: FnMut(&[Real]) -> Result<Real>,
{
    quad_product(|_| Ok(ctx.one()), |u| f(u), d, order, tol, ctx)
}

/// Tensor-product integral of `coupling(u)·∏ weight(u_i)` over `[0,1]^d`.
///
/// `weight` is evaluated once per node and axis, which makes integrands of
/// product-times-coupling form much cheaper than [`quad_nd`].
pub fn quad_product<W, F>(
    mut weight: W,
    mut coupling: F,
    d: usize,
    order: usize,
    tol: f64,
    ctx: &PrecisionCtx,
) -> Result<Quadrature>
where
    W: FnMut(&Real) -> Result<Real>,
    F: FnMut(&[Real]) -> Result<Real>,
{
    if !(1..=3).contains(&d) {
        bail!(
            Precondition,
            "quadrature dimension must be 1, 2 or 3, got {d}"
        );
    }
    let floor = ctx.pow10(-(ctx.digits() as i32) / 2);
    let tol_r = ctx.real(tol);
    let mut n = order.max(1);
    let mut prev = tensor_sum(&mut weight, &mut coupling, d, n, ctx)?;
    let mut last_change = None;
    while 2 * n <= max_order(d) {
        n *= 2;
        let cur = tensor_sum(&mut weight, &mut coupling, d, n, ctx)?;
        let change = (&cur - &prev).abs();
        if change <= &tol_r * cur.abs().max(floor.clone()) {
            return Ok(Quadrature {
                value: cur,
                order: n,
                change,
            });
        }
        last_change = Some(change.to_f64());
        prev = cur;
    }
    Err(Error::Quadrature {
        tolerance: tol,
        change: last_change.unwrap_or(f64::INFINITY),
    })
}

fn tensor_sum<W, F>(
    weight: &mut W,
    coupling: &mut F,
    d: usize,
    n: usize,
    ctx: &PrecisionCtx,
) -> Result<Real>
where
    W: FnMut(&Real) -> Result<Real>,
    F: FnMut(&[Real]) -> Result<Real>,
{
    let rule = GaussLegendre::new(n, ctx)?;
    let w: Vec<Real> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(u, wt)| Ok(weight(u)? * wt))
        .collect::<Result<_>>()?;
    let mut total = ctx.zero();
    let mut idx = vec![0usize; d];
    let mut point: Vec<Real> = vec![rule.nodes[0].clone(); d];
    loop {
        let mut wt = w[idx[0]].clone();
        for &k in &idx[1..] {
            wt *= &w[k];
        }
        for (p, &k) in point.iter_mut().zip(&idx) {
            *p = rule.nodes[k].clone();
        }
        total += coupling(&point)? * wt;
        let mut axis = 0;
        loop {
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
            axis += 1;
            if axis == d {
                return Ok(total);
            }
        }
    }
}
