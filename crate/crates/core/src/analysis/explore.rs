use super::report::PropertyReport;
use super::scan::{scan_detailed, Property, ScanRow, ScanSpec};
use crate::error::{domain, Result};
use crate::means::{self, Family, MeanArgs, ShiftArgs};

/// Sign structure of the second differences of `ln G` or `ln H` in the shift.
#[derive(Debug, Clone, PartialEq)]
pub struct Exploration {
    pub family: Family,
    /// Scan of the `log_convex` inequality; informational only.
    pub report: PropertyReport,
    pub rows: Vec<ScanRow>,
    pub positive: usize,
    pub negative: usize,
    /// Number of strict sign changes along the grid.
    pub sign_changes: usize,
}

/// Scans `w ↦ ln G(w)` or `w ↦ ln H(w)` for convexity. No verdict is implied.
pub fn explore_open_problem(family: Family, base: &MeanArgs, grid: &ScanSpec) -> Result<Exploration> {
    if family == Family::F {
        return domain("exploration covers the G and H families only");
    }
    base.validate()?;
    let lower = family.lower_bound(base);
    if grid.lo <= lower {
        return domain(format!("grid starts at w={:e}, shifts must exceed −min(x, y) = {lower:e}", grid.lo));
    }
    let mut spec = grid.clone();
    spec.property = Property::LogConvex;
    spec.log = true;
    let (report, rows) = scan_detailed(|w| means::eval_family(family, &ShiftArgs::new(*base, w)), &spec)?;
    let positive = rows.iter().filter(|r| r.quantity > 0.0).count();
    let negative = rows.iter().filter(|r| r.quantity < 0.0).count();
    let mut sign_changes = 0;
    let mut last = 0.0f64;
    for row in &rows {
        if row.quantity != 0.0 {
            if last != 0.0 && row.quantity.signum() != last.signum() {
                sign_changes += 1;
            }
            last = row.quantity;
        }
    }
    Ok(Exploration { family, report, rows, positive, negative, sign_changes })
}
