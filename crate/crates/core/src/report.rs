//! Per-identity evaluation records.

use alloc::string::String;

use crate::numerics::{Complex, Real};

/// Complex value rounded to `f64` parts for reporting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn real(re: f64) -> Self {
        C64 { re, im: 0.0 }
    }
}

impl From<&Complex> for C64 {
    fn from(z: &Complex) -> Self {
        let (re, im) = z.to_f64();
        C64 { re, im }
    }
}

impl From<&Real> for C64 {
    fn from(r: &Real) -> Self {
        C64::real(r.to_f64())
    }
}

/// Which residual the pass flag is judged on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceMode {
    Relative,
    Absolute,
}

impl ToleranceMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ToleranceMode::Relative => "relative",
            ToleranceMode::Absolute => "absolute",
        }
    }
}

/// Outcome of checking one identity at one input point.
///
/// Residuals are computed at working precision and only then rounded to
/// `f64`. The relative residual is `|lhs - rhs| / scale`, where `scale` is
/// `max(|lhs|, |rhs|)` unless the check supplies its own (for instance the
/// largest term of an equation).
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub id: String,
    pub inputs: String,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub mode: ToleranceMode,
    pub pass: bool,
    /// Diagnostic attached when the check could not be evaluated.
    pub note: Option<String>,
}

impl ResidualReport {
    pub fn compare(
        id: &str,
        inputs: String,
        lhs: &Complex,
        rhs: &Complex,
        tolerance: f64,
        mode: ToleranceMode,
    ) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        Self::with_scale(id, inputs, lhs, rhs, &scale, tolerance, mode)
    }

    pub fn compare_real(
        id: &str,
        inputs: String,
        lhs: &Real,
        rhs: &Real,
        tolerance: f64,
        mode: ToleranceMode,
    ) -> Self {
        Self::compare(
            id,
            inputs,
            &Complex::from_real(lhs.clone()),
            &Complex::from_real(rhs.clone()),
            tolerance,
            mode,
        )
    }

    pub fn with_scale(
        id: &str,
        inputs: String,
        lhs: &Complex,
        rhs: &Complex,
        scale: &Real,
        tolerance: f64,
        mode: ToleranceMode,
    ) -> Self {
        let diff = (lhs - rhs).abs();
        let rel = if diff.is_zero() {
            0.0
        } else if scale.is_zero() {
            f64::INFINITY
        } else {
            (&diff / scale).to_f64()
        };
        let abs = diff.to_f64();
        let judged = match mode {
            ToleranceMode::Relative => rel,
            ToleranceMode::Absolute => abs,
        };
        ResidualReport {
            id: id.into(),
            inputs,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_residual: abs,
            rel_residual: rel,
            tolerance,
            mode,
            pass: judged <= tolerance,
            note: None,
        }
    }

    /// Report for a check whose ingredients failed to evaluate.
    pub fn failed(
        id: &str,
        inputs: String,
        tolerance: f64,
        mode: ToleranceMode,
        reason: String,
    ) -> Self {
        ResidualReport {
            id: id.into(),
            inputs,
            lhs: C64::real(f64::NAN),
            rhs: C64::real(f64::NAN),
            abs_residual: f64::NAN,
            rel_residual: f64::NAN,
            tolerance,
            mode,
            pass: false,
            note: Some(reason),
        }
    }

    /// The residual the pass flag was judged on.
    pub fn residual(&self) -> f64 {
        match self.mode {
            ToleranceMode::Relative => self.rel_residual,
            ToleranceMode::Absolute => self.abs_residual,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PrecisionCtx;

    #[test]
    fn relative_and_absolute() {
        let c = PrecisionCtx::new(30).unwrap();
        let r = ResidualReport::compare_real(
            "x",
            "".into(),
            &c.real(2.0),
            &c.real(2.002),
            1e-2,
            ToleranceMode::Relative,
        );
        assert!(r.pass);
        assert!((r.rel_residual - 0.002 / 2.002).abs() < 1e-12);
        let r = ResidualReport::compare_real(
            "x",
            "".into(),
            &c.real(0.0),
            &c.real(1e-9),
            1e-8,
            ToleranceMode::Absolute,
        );
        assert!(r.pass && (r.rel_residual - 1.0).abs() < 1e-15, "{r:?}");
        let r = ResidualReport::compare_real(
            "x",
            "".into(),
            &c.zero(),
            &c.zero(),
            0.0,
            ToleranceMode::Relative,
        );
        assert!(r.pass && r.rel_residual == 0.0);
        let f = ResidualReport::failed("x", "".into(), 1.0, ToleranceMode::Relative, "boom".into());
        assert!(!f.pass && f.residual().is_nan());
    }
}
