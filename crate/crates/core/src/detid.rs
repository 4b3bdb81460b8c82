//! Determinantal identities: the interleaved-row (Cauchy-like) identity and
//! the sh-Gramian / Wronskian product identity.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Error, Result};
use crate::numerics::{det, Complex, Matrix, PrecisionCtx, Real, Scalar};
use crate::report::{ResidualReport, ToleranceMode};
use crate::wronskian::{wronskian, SeedFn};

/// Two families `(u, v, k)` and `(x, y, l)` of equal length `n ≥ 1`.
#[derive(Clone, Debug)]
pub struct InterleavedSpec<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub k: Vec<T>,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub l: Vec<T>,
}

impl<T: Scalar> InterleavedSpec<T> {
    pub fn new(u: Vec<T>, v: Vec<T>, k: Vec<T>, x: Vec<T>, y: Vec<T>, l: Vec<T>) -> Result<Self> {
        let spec = InterleavedSpec { u, v, k, x, y, l };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.u.len();
        if n == 0 {
            bail!(Precondition, "interleaved instance needs n >= 1");
        }
        for (name, len) in [
            ("v", self.v.len()),
            ("k", self.k.len()),
            ("x", self.x.len()),
            ("y", self.y.len()),
            ("l", self.l.len()),
        ] {
            if len != n {
                bail!(Dimension, "list {name} has length {len}, expected {n}");
            }
        }
        for (j, lj) in self.l.iter().enumerate() {
            for (i, ki) in self.k.iter().enumerate() {
                if lj.sub_ref(ki).is_zero() {
                    bail!(Precondition, "l_{} equals k_{}", j + 1, i + 1);
                }
            }
        }
        Ok(())
    }
}

/// `n×n` matrix whose row `r` (0-based) is `k_j^r·vals_j` for even `r` and
/// `k_j^r·alt_vals_j` for odd `r`.
pub fn interleaved_matrix<T: Scalar>(vals: &[T], alt_vals: &[T], k: &[T]) -> Result<Matrix<T>> {
    let n = vals.len();
    if alt_vals.len() != n || k.len() != n {
        bail!(
            Dimension,
            "interleaved_matrix lengths {}, {}, {} differ",
            n,
            alt_vals.len(),
            k.len()
        );
    }
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut powers: Vec<T> = k.iter().map(Scalar::one_like).collect();
    for r in 0..n {
        let src = if r % 2 == 0 { vals } else { alt_vals };
        rows.push(src.iter().zip(&powers).map(|(s, p)| s.mul_ref(p)).collect());
        for (p, kj) in powers.iter_mut().zip(k) {
            *p = p.mul_ref(kj);
        }
    }
    Matrix::from_rows(rows)
}

/// Determinant after dividing every row by its largest entry when entries
/// exceed `10^(digits/2)`; the scale factors are multiplied back in.
fn scaled_det<T: Scalar>(m: &Matrix<T>, ctx: &PrecisionCtx) -> Result<T> {
    let threshold = ctx.pow10(ctx.digits() as i32 / 2);
    let big = m.max_magnitude().is_some_and(|v| v > threshold);
    if !big {
        return det(m, ctx);
    }
    let mut factor = ctx.one();
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let s = m
            .row(i)
            .iter()
            .map(Scalar::magnitude)
            .reduce(Real::max)
            .unwrap_or_else(|| ctx.one());
        if s.is_zero() {
            return Ok(m.get(0, 0).zero_like());
        }
        let inv = s.recip();
        rows.push(m.row(i).iter().map(|v| v.scale(&inv)).collect());
        factor *= s;
    }
    Ok(det(&Matrix::from_rows(rows)?, ctx)?.scale(&factor))
}

fn short_list<T: Scalar>(v: &[T]) -> Vec<(f64, f64)> {
    v.iter().map(|z| z.to_complex().to_f64()).collect()
}

/// Checks `det((u_i y_j - v_i x_j)/(l_j - k_i))` against
/// `det[[U, X], [V, Y]] / ∏_{i,j}(l_j - k_i)` with `U, V` built from
/// `(u, v, k)` and `X, Y` from `(x, y, l)` by [`interleaved_matrix`].
///
/// The tolerance is `10^(-digits+10)` relative.
pub fn okada_identity<T: Scalar>(
    spec: &InterleavedSpec<T>,
    ctx: &PrecisionCtx,
) -> Result<ResidualReport> {
    spec.validate()?;
    let n = spec.n();
    let s = spec;
    let cauchy = Matrix::from_fn(n, n, |i, j| {
        s.u[i]
            .mul_ref(&s.y[j])
            .sub_ref(&s.v[i].mul_ref(&s.x[j]))
            .div_ref(&s.l[j].sub_ref(&s.k[i]))
    });
    let lhs = scaled_det(&cauchy, ctx)?;
    let um = interleaved_matrix(&s.u, &s.v, &s.k)?;
    let vm = interleaved_matrix(&s.v, &s.u, &s.k)?;
    let xm = interleaved_matrix(&s.x, &s.y, &s.l)?;
    let ym = interleaved_matrix(&s.y, &s.x, &s.l)?;
    let block = Matrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => um.get(i, j).clone(),
        (true, false) => xm.get(i, j - n).clone(),
        (false, true) => vm.get(i - n, j).clone(),
        (false, false) => ym.get(i - n, j - n).clone(),
    });
    let mut denom = s.u[0].one_like();
    for lj in &s.l {
        for ki in &s.k {
            denom = denom.mul_ref(&lj.sub_ref(ki));
        }
    }
    if !denom.is_finite() || denom.magnitude().is_zero() {
        return Err(Error::Conditioning {
            estimate: f64::INFINITY,
            context: format!("denominator product of the n={n} instance is not representable"),
        });
    }
    let rhs = scaled_det(&block, ctx)?.div_ref(&denom);
    let inputs = format!("n={n} k={:?} l={:?}", short_list(&s.k), short_list(&s.l));
    let tol = libm::pow(10.0, -f64::from(ctx.digits()) + 10.0);
    Ok(ResidualReport::compare(
        "okada",
        inputs,
        &lhs.to_complex(),
        &rhs.to_complex(),
        tol,
        ToleranceMode::Relative,
    ))
}

fn distinct_ints<R: Rng>(rng: &mut R, count: usize) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(count);
    while out.len() < count {
        let v = rng.gen_range(1..=20);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Random real instance on the integer grid `1..=20`; all `k` and `l`
/// values are pairwise distinct.
pub fn random_real_instance<R: Rng>(
    n: usize,
    rng: &mut R,
    ctx: &PrecisionCtx,
) -> Result<InterleavedSpec<Real>> {
    if !(1..=10).contains(&n) {
        bail!(
            Precondition,
            "random instances support 1 <= n <= 10, got {n}"
        );
    }
    let kl = distinct_ints(rng, 2 * n);
    let mut draw = || -> Vec<Real> { (0..n).map(|_| ctx.int(rng.gen_range(1..=20))).collect() };
    let (u, v, x, y) = (draw(), draw(), draw(), draw());
    let k = kl[..n].iter().map(|&v| ctx.int(v)).collect();
    let l = kl[n..].iter().map(|&v| ctx.int(v)).collect();
    InterleavedSpec::new(u, v, k, x, y, l)
}

/// Random complex instance: real and imaginary parts on the grid `1..=20`;
/// the real parts of `k` and `l` are pairwise distinct.
pub fn random_complex_instance<R: Rng>(
    n: usize,
    rng: &mut R,
    ctx: &PrecisionCtx,
) -> Result<InterleavedSpec<Complex>> {
    if !(1..=10).contains(&n) {
        bail!(
            Precondition,
            "random instances support 1 <= n <= 10, got {n}"
        );
    }
    let kl = distinct_ints(rng, 2 * n);
    let z = |re: i64, rng: &mut R| Complex::new(ctx.int(re), ctx.int(rng.gen_range(1..=20)));
    let draw =
        |rng: &mut R| -> Vec<Complex> { (0..n).map(|_| z(rng.gen_range(1..=20), rng)).collect() };
    let (u, v, x, y) = (draw(rng), draw(rng), draw(rng), draw(rng));
    let mut z = |re: i64| Complex::new(ctx.int(re), ctx.int(rng.gen_range(1..=20)));
    let k = kl[..n].iter().map(|&v| z(v)).collect();
    let l = kl[n..].iter().map(|&v| z(v)).collect();
    InterleavedSpec::new(u, v, k, x, y, l)
}

/// Checks `det(sh((κ_i+κ_j)x)/(κ_i+κ_j))` against
/// `W(ch(κ_1x), …)·W(sh(κ_1x), …) / (∏κ_i ∏_{i<j}(κ_i+κ_j)²)` with both
/// Wronskians built from closed-form derivatives.
pub fn shch_gram_identity(kappas: &[Real], x: &Real, ctx: &PrecisionCtx) -> Result<ResidualReport> {
    let n = kappas.len();
    if n == 0 {
        bail!(Precondition, "need at least one kappa");
    }
    if !x.is_positive() {
        bail!(Precondition, "x must be positive");
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && kappas[i] == kappas[j] {
                bail!(Precondition, "kappa_{} equals kappa_{}", i + 1, j + 1);
            }
            if (&kappas[i] + &kappas[j]).is_zero() {
                bail!(Precondition, "kappa_{} + kappa_{} = 0", i + 1, j + 1);
            }
        }
    }
    let gram = Matrix::from_fn(n, n, |i, j| {
        let s = &kappas[i] + &kappas[j];
        (&s * x).sinh(ctx) / s
    });
    let lhs = det(&gram, ctx)?;
    let ch: Vec<SeedFn> = kappas.iter().cloned().map(SeedFn::Cosh).collect();
    let sh: Vec<SeedFn> = kappas.iter().cloned().map(SeedFn::Sinh).collect();
    let w = wronskian(&ch, x, ctx)?.re * wronskian(&sh, x, ctx)?.re;
    let mut denom = ctx.one();
    for i in 0..n {
        denom *= &kappas[i];
        for j in i + 1..n {
            denom *= (&kappas[i] + &kappas[j]).sqr();
        }
    }
    let rhs = w / denom;
    let ks: Vec<f64> = kappas.iter().map(Real::to_f64).collect();
    let inputs = format!("kappas={ks:?} x={}", x.to_f64());
    let tol = libm::pow(10.0, -f64::from(ctx.digits()) + 10.0);
    Ok(ResidualReport::compare_real(
        "shch_gram",
        inputs,
        &lhs,
        &rhs,
        tol,
        ToleranceMode::Relative,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> PrecisionCtx {
        PrecisionCtx::new(50).unwrap()
    }

    fn reals(c: &PrecisionCtx, v: &[i64]) -> Vec<Real> {
        v.iter().map(|&x| c.int(x)).collect()
    }

    #[test]
    fn interleaved_small_cases() {
        let c = ctx();
        let m = interleaved_matrix(&reals(&c, &[7]), &reals(&c, &[9]), &reals(&c, &[3])).unwrap();
        assert_eq!(m.rows(), 1);
        assert_eq!(*m.get(0, 0), c.int(7));
        let m = interleaved_matrix(
            &reals(&c, &[1, 1]),
            &reals(&c, &[1, 1]),
            &reals(&c, &[2, 3]),
        )
        .unwrap();
        assert_eq!(
            m,
            Matrix::from_rows(vec![reals(&c, &[1, 1]), reals(&c, &[2, 3])]).unwrap()
        );
        assert!(
            interleaved_matrix(&reals(&c, &[1, 1]), &reals(&c, &[1]), &reals(&c, &[2, 3])).is_err()
        );
    }

    #[test]
    fn interleaved_matches_loop_oracle() {
        let c = ctx();
        let (vals, alt, k) = ([4i64, -2, 5], [1i64, 3, -7], [2i64, -3, 6]);
        let m = interleaved_matrix(&reals(&c, &vals), &reals(&c, &alt), &reals(&c, &k)).unwrap();
        for r in 0..3 {
            for j in 0..3 {
                let base = if r % 2 == 0 { vals[j] } else { alt[j] };
                let mut want = base;
                for _ in 0..r {
                    want *= k[j];
                }
                assert_eq!(*m.get(r, j), c.int(want));
            }
        }
    }

    #[test]
    fn okada_n1_is_exact() {
        let c = ctx();
        let s = InterleavedSpec::new(
            reals(&c, &[3]),
            reals(&c, &[5]),
            reals(&c, &[2]),
            reals(&c, &[7]),
            reals(&c, &[11]),
            reals(&c, &[9]),
        )
        .unwrap();
        let r = okada_identity(&s, &c).unwrap();
        assert!(r.pass);
        assert!(r.rel_residual < 1e-60);
        assert_eq!(r.lhs.re, (3.0 * 11.0 - 5.0 * 7.0) / (9.0 - 2.0));
    }

    #[test]
    fn okada_zero_numerators() {
        let c = ctx();
        let s = InterleavedSpec::new(
            reals(&c, &[2, 3]),
            reals(&c, &[2, 3]),
            reals(&c, &[1, 4]),
            reals(&c, &[5, 6]),
            reals(&c, &[5, 6]),
            reals(&c, &[7, 9]),
        )
        .unwrap();
        let r = okada_identity(&s, &c).unwrap();
        assert_eq!(r.lhs.re, 0.0);
        assert!(r.abs_residual < 1e-50);
        assert!(r.pass);
    }

    #[test]
    fn okada_rejects_coinciding_nodes() {
        let c = ctx();
        let one = reals(&c, &[1, 2]);
        assert!(matches!(
            InterleavedSpec::new(
                one.clone(),
                one.clone(),
                reals(&c, &[3, 4]),
                one.clone(),
                one.clone(),
                reals(&c, &[5, 3])
            ),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn okada_random_n3() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let s = random_real_instance(3, &mut rng, &c).unwrap();
            let r = okada_identity(&s, &c).unwrap();
            assert!(r.rel_residual <= 1e-40, "{r:?}");
        }
        let s = random_complex_instance(3, &mut rng, &c).unwrap();
        assert!(okada_identity(&s, &c).unwrap().pass);
    }

    #[test]
    fn okada_lhs_row_permutation_sign() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = random_real_instance(3, &mut rng, &c).unwrap();
        let lhs = |s: &InterleavedSpec<Real>| okada_identity(s, &c).unwrap().lhs.re;
        let mut t = s.clone();
        for list in [&mut t.u, &mut t.v, &mut t.k] {
            list.swap(0, 2);
        }
        let (a, b) = (lhs(&s), lhs(&t));
        assert!((a + b).abs() <= 1e-12 * a.abs().max(1e-300));
    }

    #[test]
    fn shch_examples() {
        let c = ctx();
        let r = shch_gram_identity(&[c.int(2)], &c.real(0.5), &c).unwrap();
        let want = c.int(2).sinh(&c) / 4;
        assert!((r.lhs.re - want.to_f64()).abs() < 1e-15);
        assert!(r.pass);
        for (ks, x) in [(vec![0.5, 1.5], 0.8), (vec![1.0, 2.0, 3.0], 0.3)] {
            let ks: Vec<Real> = ks.iter().map(|&k| c.real(k)).collect();
            let r = shch_gram_identity(&ks, &c.real(x), &c).unwrap();
            assert!(r.rel_residual <= 1e-40, "{r:?}");
        }
        assert!(shch_gram_identity(&[c.int(1), c.int(-1)], &c.real(0.5), &c).is_err());
        assert!(shch_gram_identity(&[c.int(1), c.int(1)], &c.real(0.5), &c).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn shch_symmetric_in_kappa(perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), x in 0.2f64..3.0) {
            let c = ctx();
            let ks = [0.5, 1.25, 2.0, 3.5];
            let a: Vec<Real> = ks.iter().map(|&k| c.real(k)).collect();
            let b: Vec<Real> = perm.iter().map(|&i| c.real(ks[i])).collect();
            let ra = shch_gram_identity(&a, &c.real(x), &c).unwrap();
            let rb = shch_gram_identity(&b, &c.real(x), &c).unwrap();
            prop_assert!(ra.pass && rb.pass);
            prop_assert!((ra.lhs.re - rb.lhs.re).abs() <= 1e-13 * ra.lhs.re.abs());
            prop_assert!((ra.rhs.re - rb.rhs.re).abs() <= 1e-13 * ra.rhs.re.abs());
        }

        #[test]
        fn okada_random_property(seed in any::<u64>(), n in 1usize..=4, complex in any::<bool>()) {
            let c = ctx();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = if complex {
                okada_identity(&random_complex_instance(n, &mut rng, &c).unwrap(), &c).unwrap()
            } else {
                okada_identity(&random_real_instance(n, &mut rng, &c).unwrap(), &c).unwrap()
            };
            prop_assert!(r.pass, "{:?}", r);
        }
    }
}
