//! Seeded property suites, one per theorem about `g` and the extended means.
//!
//! Each suite draws random parameters (`r, s ∈ [−10, 10]`, `x, y ∈ [0.1, 10]`),
//! runs the scans and checks from [`crate::analysis`] on them and aggregates
//! one [`PropertyReport`] per property. Every draw also yields a [`CaseRow`]
//! holding its own worst margin, which is what the CSV output lists.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    central_diff, default_step, gen_majorization_pairs, scan, schur_check, split_point, stream_rng, Property,
    PropertyReport, Quadrant, ScanSpec, SchurMode, SignKind,
};
use crate::error::{Error, Result};
use crate::gfunc::{self, GPair};
use crate::means::{self, BranchThresholds, Family, MeanArgs, ShiftArgs};

pub const EXPONENT_RANGE: (f64, f64) = (-10.0, 10.0);
pub const POINT_RANGE: (f64, f64) = (0.1, 10.0);

/// Draws keep `|ln(y/x)|` at least this large so that the differenced
/// quantities stay well above round-off.
const MIN_LOG_RATIO: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Theorem2,
    Theorem3,
    Theorem4,
    Theorem5,
    Theorem6,
    Remark,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Theorem2, Suite::Theorem3, Suite::Theorem4, Suite::Theorem5, Suite::Theorem6, Suite::Remark];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Theorem4 => "theorem4",
            Suite::Theorem5 => "theorem5",
            Suite::Theorem6 => "theorem6",
            Suite::Remark => "remark",
        }
    }

    fn stream(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).unwrap() as u64 + 100
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Random parameter draws per suite.
    pub samples: usize,
    /// Points per scan grid.
    pub grid_points: usize,
    /// Majorization pairs per `(x, y)` draw and quadrant.
    pub pairs_per_draw: usize,
    pub thresholds: BranchThresholds,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 42, samples: 100, grid_points: 401, pairs_per_draw: 100, thresholds: BranchThresholds::default() }
    }
}

/// One property checked on one random draw.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseRow {
    pub suite: Suite,
    pub property: String,
    pub case: usize,
    pub params: String,
    pub location: Vec<f64>,
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub suite: Suite,
    /// One aggregated report per property, in first-seen order.
    pub reports: Vec<PropertyReport>,
    pub rows: Vec<CaseRow>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn report(&self, property: &str) -> Option<&PropertyReport> {
        self.reports.iter().find(|r| r.property == property)
    }
}

struct Collector {
    suite: Suite,
    seed: u64,
    reports: Vec<PropertyReport>,
    rows: Vec<CaseRow>,
}

impl Collector {
    fn new(suite: Suite, seed: u64) -> Self {
        Self { suite, seed, reports: Vec::new(), rows: Vec::new() }
    }

    fn add(&mut self, case: usize, params: &str, property: &str, mut report: PropertyReport) {
        report.property = property.to_string();
        self.rows.push(CaseRow {
            suite: self.suite,
            property: property.to_string(),
            case,
            params: params.to_string(),
            location: report.worst_location.clone(),
            margin: report.worst_margin,
            passed: report.passed,
        });
        match self.reports.iter_mut().find(|r| r.property == property) {
            Some(agg) => agg.merge(&report),
            None => self.reports.push(report.with_seed(self.seed)),
        }
    }

    /// Records a single scalar check `margin ≥ 0`.
    fn check(&mut self, case: usize, params: &str, property: &str, margin: f64, location: &[f64]) {
        let mut report = PropertyReport::empty(property);
        report.record(margin, 0.0, location);
        self.add(case, params, property, report);
    }

    fn finish(self) -> SuiteOutcome {
        SuiteOutcome { suite: self.suite, reports: self.reports, rows: self.rows }
    }
}

fn uniform(rng: &mut ChaCha8Rng, range: (f64, f64)) -> f64 {
    rng.random_range(range.0..range.1)
}

/// Two points of `POINT_RANGE` with `|ln(y/x)| ≥ MIN_LOG_RATIO`, in random order.
pub fn draw_points(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let x = uniform(rng, POINT_RANGE);
        let y = uniform(rng, POINT_RANGE);
        if (y / x).ln().abs() >= MIN_LOG_RATIO {
            return (x, y);
        }
    }
}

pub fn draw_pair(rng: &mut ChaCha8Rng) -> GPair {
    let (x, y) = draw_points(rng);
    GPair::from_unordered(x, y).expect("drawn points are valid")
}

pub fn draw_base(rng: &mut ChaCha8Rng) -> MeanArgs {
    let r = uniform(rng, EXPONENT_RANGE);
    let s = uniform(rng, EXPONENT_RANGE);
    let (x, y) = draw_points(rng);
    MeanArgs::new(r, s, x, y).expect("drawn arguments are valid")
}

fn pair_params(p: &GPair) -> String {
    format!("a={:e};b={:e}", p.a(), p.b())
}

fn base_params(m: &MeanArgs) -> String {
    format!("r={:e};s={:e};x={:e};y={:e}", m.r, m.s, m.x, m.y)
}

fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn case_seed(seed: u64, suite: Suite, case: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (suite.stream() << 32) ^ case as u64
}

/// `[ln g]` log-convexity, the sign split of `[ln g]'''`, monotonicity,
/// bounds and derivative consistency of `h`, and the negativity of the gap
/// function.
pub fn theorem2(cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let suite = Suite::Theorem2;
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut out = Collector::new(suite, cfg.seed);
    let n = cfg.grid_points;

    let gap_spec = ScanSpec::new(1e-2, 30.0, n, Property::Sign(SignKind::Negative))?.slack(0.0);
    out.add(0, "", "gap_negative", scan(gfunc::lazarevic_gap, &gap_spec)?);

    for case in 0..cfg.samples {
        let p = draw_pair(&mut rng);
        let params = pair_params(&p);

        let spec = ScanSpec::new(-40.0, 40.0, n, Property::LogConvex)?;
        out.add(case, &params, "g_log_convex", scan(|t| gfunc::eval_g(&p, t), &spec)?);

        let spec = ScanSpec::new(-30.0, -1e-2, n, Property::Sign(SignKind::Positive))?.slack(0.0);
        out.add(case, &params, "d3_positive_left", scan(|t| gfunc::log_g_d3(&p, t), &spec)?);
        let spec = ScanSpec::new(1e-2, 30.0, n, Property::Sign(SignKind::Negative))?.slack(0.0);
        out.add(case, &params, "d3_negative_right", scan(|t| gfunc::log_g_d3(&p, t), &spec)?);

        let spec = ScanSpec::new(-40.0, 40.0, n, Property::Sign(SignKind::Positive))?.slack(0.0);
        out.add(case, &params, "d2_positive", scan(|t| gfunc::log_g_d2(&p, t), &spec)?);

        let spec = ScanSpec::new(-40.0, 40.0, n, Property::MonotoneUp)?;
        out.add(case, &params, "h_increasing", scan(|t| gfunc::eval_h(&p, t), &spec)?);

        let spec = ScanSpec::new(-40.0, 40.0, n, Property::Sign(SignKind::Positive))?.slack(0.0);
        let inside = |t| {
            let h = gfunc::eval_h(&p, t)?;
            Ok((h - p.ln_a()).min(p.ln_b() - h))
        };
        out.add(case, &params, "h_bounds", scan(inside, &spec)?);

        let tail_left = (gfunc::eval_h(&p, -1e4)? - p.ln_a()).abs();
        let tail_right = (gfunc::eval_h(&p, 1e4)? - p.ln_b()).abs();
        out.check(case, &params, "h_limits", 2e-4 - tail_left.max(tail_right), &[-1e4, 1e4]);

        let at_zero = relative_gap(gfunc::eval_h(&p, 0.0)?, p.log_midpoint());
        out.check(case, &params, "h_at_zero", 1e-14 - at_zero, &[0.0]);

        let series = p.log_ratio() * p.log_ratio() / 12.0;
        let d2_zero = gfunc::log_g_d2(&p, 0.0)?;
        out.check(case, &params, "d2_removable_limit", 1e-12 - relative_gap(d2_zero, series), &[0.0]);

        let spec = ScanSpec::new(-30.0, 30.0, 61, Property::Sign(SignKind::Positive))?.slack(0.0);
        let ln_g = |t: f64| gfunc::ln_g(&p, t);
        let h_matches = |t: f64| {
            let fd = central_diff(ln_g, t, 1, default_step(1, t))?;
            let h = gfunc::eval_h(&p, t)?;
            Ok(1e-6 * h.abs().max(1.0) - (h - fd).abs())
        };
        out.add(case, &params, "h_is_derivative", scan(h_matches, &spec)?);
        let d2_matches = |t: f64| {
            let fd = central_diff(ln_g, t, 2, default_step(2, t))?;
            let d2 = gfunc::log_g_d2(&p, t)?;
            Ok(1e-6 * d2.abs() - (d2 - fd).abs())
        };
        out.add(case, &params, "d2_is_second_derivative", scan(d2_matches, &spec)?);
    }
    Ok(out.finish())
}

/// Schur-concavity on `[0, ∞)²` and Schur-convexity on `(−∞, 0]²` in `(r, s)`,
/// agreement of the closed form with the quadrature route, the integral-mean
/// Schur criterion with integrand `h`, and the mean and symmetry properties.
pub fn theorem3(cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let suite = Suite::Theorem3;
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut out = Collector::new(suite, cfg.seed);
    let tol = cfg.thresholds;

    for case in 0..cfg.samples {
        let (x, y) = draw_points(&mut rng);
        let params = format!("x={x:e};y={y:e}");
        let e_rs = |r: f64, s: f64| means::eval_e_tagged(&MeanArgs::new(r, s, x, y)?, &tol).map(|(v, _)| v);
        let pair_seed = case_seed(cfg.seed, suite, case);
        let nonneg = gen_majorization_pairs(pair_seed, cfg.pairs_per_draw, Quadrant::NonNeg, 10.0)?;
        let nonpos = gen_majorization_pairs(pair_seed, cfg.pairs_per_draw, Quadrant::NonPos, 10.0)?;
        out.add(case, &params, "schur_concave_nonneg", schur_check(e_rs, &nonneg, SchurMode::Concave)?);
        out.add(case, &params, "schur_convex_nonpos", schur_check(e_rs, &nonpos, SchurMode::Convex)?);

        // the integral mean of the convex (on t ≤ 0) integrand h is Schur-convex there
        let phi = |r: f64, s: f64| means::ln_e_quadrature(&MeanArgs::new(r, s, x, y)?, 1e-12);
        let few = &nonpos[..nonpos.len().min(10)];
        out.add(case, &params, "integral_mean_schur_convex", schur_check(phi, few, SchurMode::Convex)?);

        // closed form against quadrature; every fifth draw sits near r = s
        let r = uniform(&mut rng, EXPONENT_RANGE);
        let s = if case % 5 == 4 {
            r + 10f64.powf(uniform(&mut rng, (-12.0, -2.0)))
        } else {
            uniform(&mut rng, EXPONENT_RANGE)
        };
        let m = MeanArgs::new(r, s, x, y)?;
        let quad = means::ln_e_quadrature(&m, 1e-12)?;
        let closed = means::ln_e_with(&m, &tol)?;
        out.check(case, &base_params(&m), "quadrature_agreement", 1e-10 - (quad - closed).abs(), &[r, s, x, y]);

        let (e, _) = means::eval_e_tagged(&m, &tol)?;
        let bounds = (e - x.min(y)).min(x.max(y) - e);
        out.check(case, &base_params(&m), "mean_bounds", bounds, &[r, s, x, y]);
        let swapped = means::eval_e_tagged(&MeanArgs::new(s, r, y, x)?, &tol)?.0;
        out.check(case, &base_params(&m), "symmetry", 1e-14 - relative_gap(e, swapped), &[r, s, x, y]);

        let spec = ScanSpec::new(EXPONENT_RANGE.0, EXPONENT_RANGE.1, cfg.grid_points, Property::MonotoneUp)?.scaled();
        out.add(case, &base_params(&m), "increasing_in_r", scan(|t| e_rs(t, s), &spec)?);
    }
    Ok(out.finish())
}

/// Log-convexity of `F` left of `−(s+r)/2` and log-concavity right of it,
/// the split location, the reflection symmetry of `F'/F`, the shift-difference
/// claim for `[ln g]''`, monotonicity of `F`, `G`, `H` and the identric and
/// logarithmic mean identities.
pub fn theorem4(cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let suite = Suite::Theorem4;
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut out = Collector::new(suite, cfg.seed);
    let n = cfg.grid_points;

    for case in 0..cfg.samples {
        let base = draw_base(&mut rng);
        let params = base_params(&base);
        let split = -0.5 * (base.r + base.s);
        let f_of = |w: f64| means::eval_f(&ShiftArgs::new(base, w));
        let ln_f = |w: f64| means::ln_family(Family::F, &ShiftArgs::new(base, w));

        let found = split_point(|w| means::ln_f_d2(&base, w), split - 10.0, split + 10.0)?;
        out.check(case, &params, "split_location", 1e-6 - (found - split).abs(), &[found, split]);

        let band = 1e-3 * 20.0;
        let spec = ScanSpec::new(split - 10.0, split, n / 2 + 1, Property::LogConvex)?.exclude(&[split]).band(band);
        out.add(case, &params, "log_convex_left", scan(f_of, &spec)?);
        let spec = ScanSpec::new(split, split + 10.0, n / 2 + 1, Property::LogConcave)?.exclude(&[split]).band(band);
        out.add(case, &params, "log_concave_right", scan(f_of, &spec)?);

        let spec = ScanSpec::new(split - 10.0, split + 10.0, n, Property::MonotoneUp)?.scaled();
        out.add(case, &params, "f_increasing", scan(f_of, &spec)?);

        let w = uniform(&mut rng, (-10.0, 10.0));
        let mirror = -w - (base.r + base.s);
        let d_here = central_diff(ln_f, w, 1, default_step(1, w))?;
        let d_there = central_diff(ln_f, mirror, 1, default_step(1, mirror))?;
        out.check(case, &params, "log_derivative_reflection", 1e-6 - relative_gap(d_here, d_there), &[w, mirror]);

        let p = GPair::from_unordered(base.x, base.y)?;
        let alpha = uniform(&mut rng, (0.05, 10.0));
        let diff = |t: f64| Ok(gfunc::log_g_d2(&p, t + alpha)? - gfunc::log_g_d2(&p, t)?);
        let centre = -0.5 * alpha;
        let spec = ScanSpec::new(centre - 20.0, centre, n, Property::Sign(SignKind::Positive))?
            .exclude(&[centre])
            .band(1e-6)
            .slack(0.0);
        out.add(case, &params, "shift_difference_left", scan(diff, &spec)?);
        let spec = ScanSpec::new(centre, centre + 20.0, n, Property::Sign(SignKind::Negative))?
            .exclude(&[centre])
            .band(1e-6)
            .slack(0.0);
        out.add(case, &params, "shift_difference_right", scan(diff, &spec)?);

        let lower = -base.x.min(base.y);
        for (family, name) in [(Family::G, "g_increasing"), (Family::H, "h_increasing")] {
            let spec = ScanSpec::new(lower + 1e-2, lower + 20.0, n, Property::MonotoneUp)?.scaled();
            out.add(case, &params, name, scan(|w| means::eval_family(family, &ShiftArgs::new(base, w)), &spec)?);
        }

        let (s, t) = (uniform(&mut rng, (-5.0, 5.0)), uniform(&mut rng, (-5.0, 5.0)));
        let x = -s.min(t) + uniform(&mut rng, (0.01, 10.0));
        let ident = means::eval_i(s, t, x)?;
        let e11 = means::eval_e(&MeanArgs::new(1.0, 1.0, x + s, x + t)?)?;
        out.check(case, &params, "identric_identity", 1e-12 - relative_gap(ident, e11), &[s, t, x]);
        let log_mean = means::eval_l(s, t, x)?;
        let e01 = means::eval_e(&MeanArgs::new(0.0, 1.0, x + s, x + t)?)?;
        out.check(case, &params, "logarithmic_identity", 1e-12 - relative_gap(log_mean, e01), &[s, t, x]);
    }
    Ok(out.finish())
}

/// `𝓕(w) = F(w)F(−w)` is even, increasing on `w < 0`, decreasing on `w > 0`,
/// and equals `xy·F(w)/F(w − (s+r))`. The monotonicity is checked both as
/// stated and with the direction set by the sign of `s + r`.
pub fn theorem5(cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let suite = Suite::Theorem5;
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut out = Collector::new(suite, cfg.seed);
    let n = cfg.grid_points;

    for case in 0..cfg.samples {
        let base = draw_base(&mut rng);
        let params = base_params(&base);
        let prod = |w: f64| means::product_f(&base, w);
        let f_of = |w: f64| means::eval_f(&ShiftArgs::new(base, w));

        let spec = ScanSpec::new(-10.0, -1e-2, n, Property::MonotoneUp)?.scaled();
        out.add(case, &params, "increasing_left", scan(prod, &spec)?);
        let spec = ScanSpec::new(1e-2, 10.0, n, Property::MonotoneDown)?.scaled();
        out.add(case, &params, "decreasing_right", scan(prod, &spec)?);

        // the shift argument behind the statement needs s + r > 0; for s + r < 0
        // the monotonicity flips and for s + r = 0 the product is constant
        let (left, right) = if base.r + base.s < 0.0 {
            (Property::MonotoneDown, Property::MonotoneUp)
        } else {
            (Property::MonotoneUp, Property::MonotoneDown)
        };
        let spec = ScanSpec::new(-10.0, -1e-2, n, left)?.scaled();
        out.add(case, &params, "sign_aware_left", scan(prod, &spec)?);
        let spec = ScanSpec::new(1e-2, 10.0, n, right)?.scaled();
        out.add(case, &params, "sign_aware_right", scan(prod, &spec)?);

        let w = uniform(&mut rng, (-10.0, 10.0));
        let even = relative_gap(prod(w)?, prod(-w)?);
        out.check(case, &params, "even", 1e-12 - even, &[w]);
        let xy = base.x * base.y;
        let shifted = w - (base.r + base.s);
        let rhs = xy * f_of(w)? / f_of(shifted)?;
        out.check(case, &params, "quotient_identity", 1e-10 - relative_gap(prod(w)?, rhs), &[w]);
        let reflected = f_of(-w)? * f_of(shifted)?;
        out.check(case, &params, "reflection_product", 1e-10 - relative_gap(reflected, xy), &[w]);
    }
    Ok(out.finish())
}

/// `w·ln F(w)` is convex between `−(s+r)/2` and 0.
pub fn theorem6(cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let suite = Suite::Theorem6;
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut out = Collector::new(suite, cfg.seed);

    let mut case = 0;
    while case < cfg.samples {
        let base = draw_base(&mut rng);
        let split = -0.5 * (base.r + base.s);
        if split.abs() < 1e-2 {
            continue;
        }
        let params = base_params(&base);
        let (lo, hi) = if split < 0.0 { (split, 0.0) } else { (0.0, split) };
        let spec = ScanSpec::new(lo, hi, cfg.grid_points, Property::Convex)?;
        let w_ln_f = |w: f64| Ok(w * means::ln_family(Family::F, &ShiftArgs::new(base, w))?);
        out.add(case, &params, "w_ln_f_convex", scan(w_ln_f, &spec)?);
        case += 1;
    }
    Ok(out.finish())
}

/// `(w + s − r)·F(w)^{s−r}` with `s > r` is increasing and convex on
/// `[−10, 10]` and log-concave right of `−(s−r)/2`.
pub fn remark(cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    let suite = Suite::Remark;
    let mut rng = stream_rng(cfg.seed, suite.stream());
    let mut out = Collector::new(suite, cfg.seed);
    let n = cfg.grid_points;

    let mut case = 0;
    while case < cfg.samples {
        let mut base = draw_base(&mut rng);
        if base.s < base.r {
            std::mem::swap(&mut base.r, &mut base.s);
        }
        if base.s - base.r < 1e-2 {
            continue;
        }
        let params = base_params(&base);
        let fun = |w: f64| means::remark_fn(&base, w);
        let spec = ScanSpec::new(-10.0, 10.0, n, Property::MonotoneUp)?.scaled();
        out.add(case, &params, "increasing", scan(fun, &spec)?);
        let spec = ScanSpec::new(-10.0, 10.0, n, Property::Convex)?.scaled();
        out.add(case, &params, "convex", scan(fun, &spec)?);
        let lo = -0.5 * (base.s - base.r) + 1e-2;
        let spec = ScanSpec::new(lo, 10.0f64.max(lo + 1.0), n, Property::LogConcave)?;
        out.add(case, &params, "log_concave", scan(fun, &spec)?);
        case += 1;
    }
    Ok(out.finish())
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<SuiteOutcome> {
    match suite {
        Suite::Theorem2 => theorem2(cfg),
        Suite::Theorem3 => theorem3(cfg),
        Suite::Theorem4 => theorem4(cfg),
        Suite::Theorem5 => theorem5(cfg),
        Suite::Theorem6 => theorem6(cfg),
        Suite::Remark => remark(cfg),
    }
}
