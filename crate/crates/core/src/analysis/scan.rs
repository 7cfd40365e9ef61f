use std::fmt;

use rayon::prelude::*;

use super::diff::{central_diff, default_step};
use super::report::PropertyReport;
use crate::error::{domain, Error, Result};

/// Required sign of a scanned quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignKind {
    Positive,
    Negative,
}

/// The property a scan checks on the scanned quantity `q`.
///
/// `q` is `f` or `ln f` (see [`ScanSpec::log`]), differentiated
/// `deriv_order` times. Monotonicity uses consecutive differences of `q` on the
/// grid and convexity its second differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    Sign(SignKind),
    MonotoneUp,
    MonotoneDown,
    Convex,
    Concave,
    LogConvex,
    LogConcave,
}

impl Property {
    pub fn name(&self) -> &'static str {
        match self {
            Property::Sign(SignKind::Positive) => "sign_positive",
            Property::Sign(SignKind::Negative) => "sign_negative",
            Property::MonotoneUp => "monotone_up",
            Property::MonotoneDown => "monotone_down",
            Property::Convex => "convex",
            Property::Concave => "concave",
            Property::LogConvex => "log_convex",
            Property::LogConcave => "log_concave",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "sign_positive" | "positive" | "sign+" => Property::Sign(SignKind::Positive),
            "sign_negative" | "negative" | "sign-" => Property::Sign(SignKind::Negative),
            "monotone_up" => Property::MonotoneUp,
            "monotone_down" => Property::MonotoneDown,
            "convex" => Property::Convex,
            "concave" => Property::Concave,
            "log_convex" => Property::LogConvex,
            "log_concave" => Property::LogConcave,
            _ => return None,
        })
    }

    fn default_slack(&self) -> f64 {
        match self {
            Property::MonotoneUp | Property::MonotoneDown => 1e-12,
            _ => 1e-10,
        }
    }

    fn takes_log(&self) -> bool {
        matches!(self, Property::LogConvex | Property::LogConcave)
    }

    /// Number of grid points consumed by one sample.
    fn stencil(&self) -> usize {
        match self {
            Property::Sign(_) => 1,
            Property::MonotoneUp | Property::MonotoneDown => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A uniform grid on `[lo, hi]` and the property to check on it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub lo: f64,
    pub hi: f64,
    pub n_points: usize,
    /// Derivative order `k` of the scanned quantity (finite differences).
    pub deriv_order: u32,
    pub property: Property,
    /// Scan `ln f` instead of `f`; implied by the log properties.
    pub log: bool,
    /// Half-width of the band excluded around each of `split_points`.
    pub exclusion_band: f64,
    pub split_points: Vec<f64>,
    /// Margins down to `−slack` (times the magnitude of `q` when
    /// `scale_slack`) are not violations.
    pub slack: f64,
    pub scale_slack: bool,
}

impl ScanSpec {
    pub fn new(lo: f64, hi: f64, n_points: usize, property: Property) -> Result<Self> {
        let spec = Self {
            lo,
            hi,
            n_points,
            deriv_order: 0,
            property,
            log: property.takes_log(),
            exclusion_band: 1e-3 * (hi - lo),
            split_points: Vec::new(),
            slack: property.default_slack(),
            scale_slack: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return domain(format!("scan needs finite lo < hi, got [{:e}, {:e}]", self.lo, self.hi));
        }
        if self.n_points < 3 {
            return domain(format!("scan needs at least 3 points, got {}", self.n_points));
        }
        if !(self.exclusion_band >= 0.0 && self.exclusion_band < 0.5 * (self.hi - self.lo)) {
            return domain(format!("exclusion band {:e} must lie in [0, (hi−lo)/2)", self.exclusion_band));
        }
        if self.deriv_order > 3 {
            return domain(format!("derivative order {} exceeds 3", self.deriv_order));
        }
        if !(self.slack.is_finite() && self.slack >= 0.0) {
            return domain(format!("slack must be a nonnegative number, got {:e}", self.slack));
        }
        Ok(())
    }

    pub fn order(mut self, k: u32) -> Self {
        self.deriv_order = k;
        self
    }

    pub fn log(mut self) -> Self {
        self.log = true;
        self
    }

    pub fn exclude(mut self, points: &[f64]) -> Self {
        self.split_points.extend_from_slice(points);
        self
    }

    pub fn band(mut self, half_width: f64) -> Self {
        self.exclusion_band = half_width;
        self
    }

    pub fn slack(mut self, slack: f64) -> Self {
        self.slack = slack;
        self
    }

    pub fn scaled(mut self) -> Self {
        self.scale_slack = true;
        self
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n_points - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let step = self.step();
        (0..self.n_points).map(|i| if i + 1 == self.n_points { self.hi } else { self.lo + i as f64 * step }).collect()
    }

    fn excluded(&self, lo: f64, hi: f64) -> bool {
        self.split_points.iter().any(|&c| hi >= c - self.exclusion_band && lo <= c + self.exclusion_band)
    }
}

/// One grid sample of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub t: f64,
    /// `f(t)`.
    pub value: f64,
    /// The differenced quantity whose sign the property constrains.
    pub quantity: f64,
    pub excluded: bool,
}

impl ScanRow {
    pub fn sign(&self) -> char {
        if self.quantity > 0.0 {
            '+'
        } else if self.quantity < 0.0 {
            '-'
        } else {
            '0'
        }
    }
}

fn transformed(value: f64, log: bool, t: f64) -> Result<f64> {
    if !log {
        return Ok(value);
    }
    if value > 0.0 {
        Ok(value.ln())
    } else {
        domain(format!("log property needs f > 0, got f({t:e}) = {value:e}"))
    }
}

/// Checks `spec.property` on the grid. Deterministic for a fixed spec and `f`.
pub fn scan<F>(f: F, spec: &ScanSpec) -> Result<PropertyReport>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    scan_detailed(f, spec).map(|(report, _)| report)
}

/// [`scan`] that also returns the per-sample rows in grid order.
pub fn scan_detailed<F>(f: F, spec: &ScanSpec) -> Result<(PropertyReport, Vec<ScanRow>)>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let grid = spec.grid();
    let log = spec.log || spec.property.takes_log();
    let k = spec.deriv_order;
    let q_of = |t: f64| transformed(f(t)?, log, t);
    let evaluated: Vec<Result<(f64, f64)>> = grid
        .par_iter()
        .map(|&t| {
            let value = f(t)?;
            let q = if k == 0 { transformed(value, log, t)? } else { central_diff(q_of, t, k, default_step(k, t))? };
            Ok((value, q))
        })
        .collect();
    let mut values = Vec::with_capacity(grid.len());
    let mut qs = Vec::with_capacity(grid.len());
    for item in evaluated {
        let (v, q) = item?;
        values.push(v);
        qs.push(q);
    }

    let mut report = PropertyReport::empty(spec.property.name());
    let mut rows = Vec::with_capacity(grid.len());
    let step = spec.step();
    let stencil = spec.property.stencil();
    let tolerance = |involved: &[f64]| {
        if spec.scale_slack {
            spec.slack * involved.iter().fold(1f64, |m, q| m.max(q.abs()))
        } else {
            spec.slack
        }
    };
    for i in 0..grid.len() {
        let t = grid[i];
        let (quantity, margin, tol, excluded) = match (spec.property, stencil) {
            (Property::Sign(sign), _) => {
                let q = qs[i];
                let margin = if sign == SignKind::Positive { q } else { -q };
                (q, margin, tolerance(&qs[i..=i]), spec.excluded(t, t))
            }
            (prop, 2) => {
                if i + 1 == grid.len() {
                    continue;
                }
                let d = qs[i + 1] - qs[i];
                let margin = if prop == Property::MonotoneUp { d } else { -d };
                (d, margin, tolerance(&qs[i..=i + 1]), spec.excluded(t, grid[i + 1]))
            }
            (prop, _) => {
                if i == 0 || i + 1 == grid.len() {
                    continue;
                }
                let d2 = qs[i - 1] - 2.0 * qs[i] + qs[i + 1];
                let convex = matches!(prop, Property::Convex | Property::LogConvex);
                let margin = if convex { d2 } else { -d2 };
                (d2, margin, tolerance(&qs[i - 1..=i + 1]), spec.excluded(t - step, t + step))
            }
        };
        if !excluded {
            report.record(margin, tol, &[t]);
        }
        rows.push(ScanRow { t, value: values[i], quantity, excluded });
    }
    Ok((report, rows))
}

/// Abscissa in `[lo, hi]` where `quantity` changes sign, by bisection to an
/// absolute tolerance of `1e-9`.
pub fn split_point<Q>(quantity: Q, lo: f64, hi: f64) -> Result<f64>
where
    Q: Fn(f64) -> Result<f64>,
{
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return domain(format!("split search needs finite lo < hi, got [{lo:e}, {hi:e}]"));
    }
    let mut a = lo;
    let mut b = hi;
    let qa = quantity(a)?;
    let qb = quantity(b)?;
    if qa == 0.0 {
        return Ok(a);
    }
    if qb == 0.0 {
        return Ok(b);
    }
    if qa.signum() == qb.signum() || qa.is_nan() || qb.is_nan() {
        return Err(Error::NotFound(format!("no sign change on [{lo:e}, {hi:e}]: q(lo)={qa:e}, q(hi)={qb:e}")));
    }
    let left_sign = qa.signum();
    while b - a > 1e-9 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let qm = quantity(mid)?;
        if qm == 0.0 {
            return Ok(mid);
        }
        if qm.signum() == left_sign {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
