//! Grids of `a = e^{-x}` values.
//!
//! Points are kept as decimal text and converted at working precision, so
//! `0.4` means exactly 2/5 rather than the nearest double.

use pwkrein_core::{PrecisionCtx, Real};

use crate::UsageError;

#[derive(Clone, Debug, PartialEq)]
pub enum Grid {
    List(Vec<String>),
    Range {
        start: String,
        stop: String,
        count: usize,
    },
}

fn parse_unit(s: &str, what: &str) -> Result<f64, UsageError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("{what}: '{s}' is not a number")))?;
    if !(v > 0.0 && v < 1.0) {
        return Err(UsageError(format!("{what}: {s} is outside (0, 1)")));
    }
    Ok(v)
}

impl Grid {
    /// Builds a grid from either an explicit list or a start/stop/count
    /// triple, validating that every point lies in `(0, 1)`.
    pub fn from_parts(
        list: Option<&[String]>,
        start: Option<&str>,
        stop: Option<&str>,
        count: Option<usize>,
    ) -> Result<Option<Grid>, UsageError> {
        let ranged = start.is_some() || stop.is_some() || count.is_some();
        match (list, ranged) {
            (Some(_), true) => Err(UsageError(
                "--a cannot be combined with --a-start/--a-stop/--a-count".into(),
            )),
            (Some(items), false) => {
                let items: Vec<String> = items
                    .iter()
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if items.is_empty() {
                    return Err(UsageError("the a-grid is empty".into()));
                }
                for s in &items {
                    parse_unit(s, "--a")?;
                }
                Ok(Some(Grid::List(items)))
            }
            (None, false) => Ok(None),
            (None, true) => {
                let (Some(start), Some(stop)) = (start, stop) else {
                    return Err(UsageError(
                        "--a-start and --a-stop must be given together".into(),
                    ));
                };
                let count = count.unwrap_or(11);
                if count == 0 {
                    return Err(UsageError("the a-grid is empty (--a-count 0)".into()));
                }
                let (lo, hi) = (
                    parse_unit(start, "--a-start")?,
                    parse_unit(stop, "--a-stop")?,
                );
                if count > 1 && lo == hi {
                    return Err(UsageError(
                        "--a-start equals --a-stop but --a-count > 1".into(),
                    ));
                }
                Ok(Some(Grid::Range {
                    start: start.trim().into(),
                    stop: stop.trim().into(),
                    count,
                }))
            }
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::List(v) => v.len(),
            Grid::Range { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point `i` at the working precision of `ctx`; range grids are evenly
    /// spaced including both ends.
    pub fn point(&self, i: usize, ctx: &PrecisionCtx) -> Real {
        let parse = |s: &str| ctx.parse(s).expect("grid text was validated");
        match self {
            Grid::List(v) => parse(&v[i]),
            Grid::Range { start, stop, count } => {
                let (a, b) = (parse(start), parse(stop));
                if *count == 1 {
                    return a;
                }
                let step = (&b - &a) / (*count as i64 - 1);
                a + step * i as i64
            }
        }
    }

    pub fn points(&self, ctx: &PrecisionCtx) -> Vec<Real> {
        (0..self.len()).map(|i| self.point(i, ctx)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn list_and_range() {
        let c = PrecisionCtx::new(30).unwrap();
        let g = Grid::from_parts(Some(&list(&["0.4", " 0.5"])), None, None, None)
            .unwrap()
            .unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.point(0, &c), c.ratio(2, 5));
        let r = Grid::from_parts(None, Some("0.25"), Some("0.75"), Some(11))
            .unwrap()
            .unwrap();
        let pts = r.points(&c);
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], c.ratio(1, 4));
        assert_eq!(pts[5], c.ratio(1, 2));
        assert!((&pts[10] - c.ratio(3, 4)).abs() < c.pow10(-30));
        let one = Grid::from_parts(None, Some("0.3"), Some("0.3"), Some(1))
            .unwrap()
            .unwrap();
        assert_eq!(one.points(&c), vec![c.ratio(3, 10)]);
    }

    #[test]
    fn malformed_grids() {
        assert!(Grid::from_parts(None, None, None, None).unwrap().is_none());
        assert!(Grid::from_parts(Some(&list(&[])), None, None, None).is_err());
        assert!(Grid::from_parts(Some(&list(&["1.5"])), None, None, None).is_err());
        assert!(Grid::from_parts(Some(&list(&["0"])), None, None, None).is_err());
        assert!(Grid::from_parts(Some(&list(&["abc"])), None, None, None).is_err());
        assert!(Grid::from_parts(None, Some("0.2"), None, Some(3)).is_err());
        assert!(Grid::from_parts(None, Some("0.2"), Some("0.8"), Some(0)).is_err());
        assert!(Grid::from_parts(Some(&list(&["0.2"])), Some("0.2"), Some("0.8"), None).is_err());
    }
}
