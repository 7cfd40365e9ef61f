//! Acceptance criteria, one line of output each.
//!
//! Criteria 9, 11 and 13 do not hold as stated. They are still run at full
//! strength and reported as FAIL. The run as a whole fails only if a criterion
//! changes state, or if a known failure stops matching its analysed cause.

use std::process::Command;
use std::time::Instant;

use stolarsky::analysis::{
    central_diff, default_step, gen_majorization_pairs, scan, schur_check, split_point, stream_rng, Property,
    PropertyReport, Quadrant, ScanSpec, SchurMode,
};
use stolarsky::gfunc::{self, GPair};
use stolarsky::means::{self, BranchThresholds, Family, MeanArgs, ShiftArgs};
use stolarsky::verify::{self, draw_base, draw_pair, VerifyConfig};
use stolarsky::Result;

use rand::Rng;

const SEED: u64 = 20_240_601;

/// Criteria that fail as stated; see the notes next to each check.
const KNOWN_FAILURES: [u32; 3] = [9, 11, 13];

type Check = fn() -> Result<Verdict>;

struct Verdict {
    passed: bool,
    detail: String,
    /// For a known failure: whether the failure has exactly the analysed cause.
    explained: bool,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into(), explained: false }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn pairs(stream: u64, n: usize) -> Vec<GPair> {
    let mut rng = stream_rng(SEED, stream);
    (0..n).map(|_| draw_pair(&mut rng)).collect()
}

fn bases(stream: u64, n: usize) -> Vec<MeanArgs> {
    let mut rng = stream_rng(SEED, stream);
    (0..n).map(|_| draw_base(&mut rng)).collect()
}

fn merged(name: &str, reports: impl IntoIterator<Item = PropertyReport>) -> PropertyReport {
    let mut all = PropertyReport::empty(name);
    for r in reports {
        all.merge(&r);
    }
    all
}

fn c1_special_values() -> Result<Verdict> {
    let sqrt = means::eval_e(&MeanArgs::new(0.0, 0.0, 4.0, 9.0)?)?;
    let mut rng = stream_rng(SEED, 1);
    let mut exact = true;
    for _ in 0..100 {
        let (r, s, x) = (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0), rng.random_range(0.1..10.0));
        exact &= means::eval_e(&MeanArgs::new(r, s, x, x)?)? == x;
    }
    let (x, y) = (2.0f64, 4.0f64);
    let direct = (y * y - x * x) / (2.0 * (y - x));
    let e12 = means::eval_e(&MeanArgs::new(1.0, 2.0, x, y)?)?;
    Ok(Verdict::new(
        rel(sqrt, 6.0) <= 1e-15 && exact && rel(e12, direct) <= 1e-12,
        format!("E(0,0;4,9)={sqrt}, E(r,s;x,x)==x for 100 draws: {exact}, E(1,2;2,4)={e12}"),
    ))
}

fn c2_log_convexity() -> Result<Verdict> {
    let spec = ScanSpec::new(-40.0, 40.0, 2001, Property::Convex)?.slack(1e-10);
    let reports: Result<Vec<_>> = pairs(2, 50).iter().map(|p| scan(|t| gfunc::ln_g(p, t), &spec)).collect();
    let all = merged("ln_g_convex", reports?);
    Ok(Verdict::new(all.passed, all.to_string()))
}

fn c3_sign_split() -> Result<Verdict> {
    let mut worst_left = f64::INFINITY;
    let mut worst_right = f64::NEG_INFINITY;
    for p in pairs(3, 50) {
        for t in grid(-30.0, -1e-2, 2001) {
            worst_left = worst_left.min(gfunc::log_g_d3(&p, t)?);
        }
        for t in grid(1e-2, 30.0, 2001) {
            worst_right = worst_right.max(gfunc::log_g_d3(&p, t)?);
        }
    }
    let mut gap_max = f64::NEG_INFINITY;
    let ts = [1e-6, 1e-4, 1e-3].into_iter().chain(grid(0.0, 30.0, 3001).into_iter().skip(1));
    for t in ts {
        gap_max = gap_max.max(gfunc::lazarevic_gap(t)?);
    }
    let gap1 = gfunc::lazarevic_gap(1.0)?;
    let passed = worst_left > 1e-15 && worst_right < -1e-15 && gap_max < 0.0 && (gap1 + 0.07997).abs() <= 1e-3;
    Ok(Verdict::new(
        passed,
        format!("min d3 left={worst_left:e}, max d3 right={worst_right:e}, max gap={gap_max:e}, gap(1)={gap1}"),
    ))
}

fn c4_h_contract() -> Result<Verdict> {
    let mut strict = true;
    let mut at_zero = 0.0f64;
    let mut tails = 0.0f64;
    let mut fd = 0.0f64;
    for p in pairs(4, 50) {
        let ts = grid(-40.0, 40.0, 2001);
        let hs: Result<Vec<f64>> = ts.iter().map(|&t| gfunc::eval_h(&p, t)).collect();
        strict &= hs?.windows(2).all(|w| w[1] > w[0]);
        let mid = 0.5 * (p.ln_a() + p.ln_b());
        at_zero = at_zero.max((gfunc::eval_h(&p, 0.0)? - mid).abs() / mid.abs().max(1.0));
        tails = tails.max((gfunc::eval_h(&p, 1e4)? - p.ln_b()).abs());
        tails = tails.max((gfunc::eval_h(&p, -1e4)? - p.ln_a()).abs());
        for t in grid(-30.0, 30.0, 121) {
            let d = central_diff(|u| gfunc::ln_g(&p, u), t, 1, default_step(1, t))?;
            let h = gfunc::eval_h(&p, t)?;
            fd = fd.max((h - d).abs() / h.abs().max(1.0));
        }
    }
    Ok(Verdict::new(
        strict && at_zero <= 1e-14 && tails <= 2e-4 && fd <= 1e-6,
        format!("strictly increasing: {strict}, |h(0)-mid|={at_zero:e}, tail error={tails:e}, fd error={fd:e}"),
    ))
}

fn c5_removable_limit() -> Result<Verdict> {
    let mut series = 0.0f64;
    let mut fd = 0.0f64;
    for p in pairs(5, 50) {
        let d2 = gfunc::log_g_d2(&p, 0.0)?;
        series = series.max(rel(d2, p.log_ratio().powi(2) / 12.0));
        fd = fd.max(rel(d2, central_diff(|u| gfunc::ln_g(&p, u), 0.0, 2, default_step(2, 0.0))?));
    }
    Ok(Verdict::new(series <= 1e-12 && fd <= 1e-6, format!("series rel={series:e}, fd rel={fd:e}")))
}

fn c6_quadrature() -> Result<Verdict> {
    let mut rng = stream_rng(SEED, 6);
    let mut worst = 0.0f64;
    let mut at = String::new();
    for i in 0..1000 {
        let base = draw_base(&mut rng);
        let s = if i < 100 {
            let gap = 10f64.powf(rng.random_range(-12.0..-2.0));
            if rng.random_bool(0.5) {
                base.r + gap
            } else {
                base.r - gap
            }
        } else {
            base.s
        };
        let m = MeanArgs::new(base.r, s, base.x, base.y)?;
        let diff = (means::ln_e_quadrature(&m, 1e-12)? - means::ln_e(&m)?).abs();
        if diff > worst {
            worst = diff;
            at = m.to_string();
        }
    }
    Ok(Verdict::new(worst <= 1e-10, format!("max |ln E_quad - ln E|={worst:e} at {at}")))
}

fn c7_schur() -> Result<Verdict> {
    let mut rng = stream_rng(SEED, 7);
    let tol = BranchThresholds::default();
    let mut reports = Vec::new();
    for k in 0..20u64 {
        let (x, y) = verify::draw_points(&mut rng);
        let e = |r: f64, s: f64| means::eval_e_tagged(&MeanArgs::new(r, s, x, y)?, &tol).map(|v| v.0);
        let nonneg = gen_majorization_pairs(SEED + k, 10_000, Quadrant::NonNeg, 10.0)?;
        let nonpos = gen_majorization_pairs(SEED + k, 10_000, Quadrant::NonPos, 10.0)?;
        reports.push(("concave", schur_check(e, &nonneg, SchurMode::Concave)?));
        reports.push(("convex", schur_check(e, &nonpos, SchurMode::Convex)?));
    }
    let concave = merged("schur_concave_nonneg", reports.iter().filter(|r| r.0 == "concave").map(|r| r.1.clone()));
    let convex = merged("schur_convex_nonpos", reports.iter().filter(|r| r.0 == "convex").map(|r| r.1.clone()));
    Ok(Verdict::new(concave.passed && convex.passed, format!("{concave}; {convex}")))
}

fn c8_theorem4() -> Result<Verdict> {
    let mut split_err = 0.0f64;
    let mut fd_reports = Vec::new();
    let mut analytic_ok = true;
    for base in bases(8, 50) {
        let c = -0.5 * (base.r + base.s);
        let found = split_point(|w| means::ln_f_d2(&base, w), c - 10.0, c + 10.0)?;
        split_err = split_err.max((found - c).abs());
        let f = |w: f64| means::eval_f(&ShiftArgs::new(base, w));
        let left = ScanSpec::new(c - 10.0, c, 401, Property::LogConvex)?.exclude(&[c]).band(1e-6);
        let right = ScanSpec::new(c, c + 10.0, 401, Property::LogConcave)?.exclude(&[c]).band(1e-6);
        fd_reports.push(scan(f, &left)?);
        fd_reports.push(scan(f, &right)?);
        for w in grid(c - 10.0, c + 10.0, 401) {
            if (w - c).abs() > 1e-6 {
                let d2 = means::ln_f_d2(&base, w)?;
                analytic_ok &= if w < c { d2 > 0.0 } else { d2 < 0.0 };
            }
        }
    }
    let fd = merged("ln_f_sign_split", fd_reports);
    Ok(Verdict::new(
        split_err <= 1e-6 && fd.passed && analytic_ok,
        format!("max split error={split_err:e}, analytic signs ok: {analytic_ok}, {fd}"),
    ))
}

/// Fails as stated: for `s + r < 0` the product decreases on `w < 0`. The
/// shift argument behind the statement takes `α = s + r`, which needs `α > 0`.
fn c9_theorem5() -> Result<Verdict> {
    let cfg = VerifyConfig { seed: SEED, samples: 50, ..VerifyConfig::default() };
    let out = verify::theorem5(&cfg)?;
    let report = |name: &str| out.report(name).expect("property present");
    let names = ["even", "increasing_left", "decreasing_right", "quotient_identity", "reflection_product"];
    let passed = names.iter().all(|n| report(n).passed);

    // every violating draw has s + r < 0, every draw with s + r > 0 passes,
    // and the direction-corrected scans and identities all pass
    let sign_of_sum =
        |params: &str| -> f64 { params.split(';').take(2).map(|kv| kv[2..].parse::<f64>().unwrap()).sum() };
    let monotone_rows = out.rows.iter().filter(|r| r.property == "increasing_left" || r.property == "decreasing_right");
    let by_sign = monotone_rows.clone().all(|r| r.passed == (sign_of_sum(&r.params) > 0.0));
    let negatives = monotone_rows.filter(|r| !r.passed).count();
    let explained = by_sign
        && negatives > 0
        && ["even", "quotient_identity", "reflection_product", "sign_aware_left", "sign_aware_right"]
            .iter()
            .all(|n| report(n).passed);
    let mut v = Verdict::new(
        passed,
        format!(
            "{}; {}; {}; {}; {}; failing draws all have s+r<0: {by_sign}",
            report("even"),
            report("increasing_left"),
            report("decreasing_right"),
            report("quotient_identity"),
            report("reflection_product")
        ),
    );
    v.explained = explained;
    Ok(v)
}

fn c10_theorem6() -> Result<Verdict> {
    let mut reports = Vec::new();
    let mut seen = (0, 0);
    for base in bases(10, 80) {
        let c = -0.5 * (base.r + base.s);
        if c.abs() < 1e-2 {
            continue;
        }
        let (lo, hi) = if c < 0.0 { (c, 0.0) } else { (0.0, c) };
        if c < 0.0 {
            seen.0 += 1
        } else {
            seen.1 += 1
        }
        let spec = ScanSpec::new(lo, hi, 401, Property::Convex)?.slack(1e-10);
        reports.push(scan(|w| Ok(w * means::ln_family(Family::F, &ShiftArgs::new(base, w))?), &spec)?);
    }
    let all = merged("w_ln_f_convex", reports);
    Ok(Verdict::new(
        all.passed && seen.0 > 0 && seen.1 > 0,
        format!("s+r>0: {} bases, s+r<0: {} bases, {all}", seen.0, seen.1),
    ))
}

/// Fails as stated. An independent 50-digit evaluation at the base below gives
/// `f''(6.2) = −203.30` and `[ln f]''(0.64615) = +0.66212`.
fn c11_remark() -> Result<Verdict> {
    let cfg = VerifyConfig { seed: SEED, samples: 20, ..VerifyConfig::default() };
    let out = verify::remark(&cfg)?;
    let report = |name: &str| out.report(name).expect("property present");
    let passed = report("increasing").passed && report("convex").passed && report("log_concave").passed;

    let base = MeanArgs::new(-4.015421466067912, -0.6107981075217275, 0.3860291886572358, 8.745237313518649)?;
    let f = |w: f64| means::remark_fn(&base, w);
    let f2 = central_diff(f, 6.2, 2, default_step(2, 6.2))?;
    let lnf2 = central_diff(|w| f(w).map(f64::ln), 0.6461506565815263, 2, 1e-3)?;
    let explained = rel(f2, -203.300_332_585_67) <= 1e-4 && rel(lnf2, 0.662_120_616_917_17) <= 1e-4;
    let mut v = Verdict::new(
        passed,
        format!(
            "{}; {}; {}; counterexample f''(6.2)={f2:.6}, [ln f]''(0.646)={lnf2:.6}",
            report("increasing"),
            report("convex"),
            report("log_concave")
        ),
    );
    v.explained = explained;
    Ok(v)
}

fn c12_identities() -> Result<Verdict> {
    let mut rng = stream_rng(SEED, 12);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let s: f64 = rng.random_range(-10.0..10.0);
        let t: f64 = rng.random_range(-10.0..10.0);
        let x = -s.min(t) + rng.random_range(0.01..10.0);
        worst = worst.max(rel(means::eval_i(s, t, x)?, means::eval_e(&MeanArgs::new(1.0, 1.0, x + s, x + t)?)?));
        worst = worst.max(rel(means::eval_l(s, t, x)?, means::eval_e(&MeanArgs::new(0.0, 1.0, x + s, x + t)?)?));
    }
    let mut reports = Vec::new();
    for _ in 0..20 {
        let s: f64 = rng.random_range(-10.0..10.0);
        let t: f64 = rng.random_range(-10.0..10.0);
        let lo = -s.min(t) + 1e-2;
        let spec = ScanSpec::new(lo, lo + 20.0, 401, Property::MonotoneUp)?.scaled();
        reports.push(scan(|x| means::eval_i(s, t, x), &spec)?);
        reports.push(scan(|x| means::eval_l(s, t, x), &spec)?);
    }
    let mono = merged("increasing_in_x", reports);
    Ok(Verdict::new(worst <= 1e-12 && mono.passed, format!("max rel={worst:e}, {mono}")))
}

/// Fails as stated: the CSV is byte-identical, but the exit code is 1 because
/// the theorem 5 and remark suites report the violations of criteria 9 and 11.
fn c13_cli_determinism() -> Result<Verdict> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_stolarsky"))
            .args(["--format", "csv", "verify", "--suite", "all", "--seed", "42"])
            .env_remove("STOLARSKY_SEED")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let codes = (a.status.code(), b.status.code());
    let passed = identical && codes == (Some(0), Some(0));

    let text = String::from_utf8_lossy(&a.stdout);
    let failing: Vec<(String, String)> = text
        .lines()
        .skip(1)
        .filter(|l| l.ends_with(",false"))
        .map(|l| {
            let mut cols = l.split(',');
            (cols.next().unwrap().to_string(), cols.next().unwrap().to_string())
        })
        .collect();
    let known = |(suite, prop): &(String, String)| {
        suite == "remark" || (suite == "theorem5" && (prop == "increasing_left" || prop == "decreasing_right"))
    };
    let mut v = Verdict::new(
        passed,
        format!("exit codes {codes:?}, byte-identical CSV: {identical}, failing rows: {}", failing.len()),
    );
    v.explained = identical && codes == (Some(1), Some(1)) && !failing.is_empty() && failing.iter().all(known);
    Ok(v)
}

fn main() {
    let criteria: [(u32, &str, Check); 13] = [
        (1, "special values", c1_special_values),
        (2, "log-convexity of g", c2_log_convexity),
        (3, "sign split of [ln g]''' and the gap function", c3_sign_split),
        (4, "h contract", c4_h_contract),
        (5, "removable limit of [ln g]''", c5_removable_limit),
        (6, "closed form against quadrature", c6_quadrature),
        (7, "Schur properties", c7_schur),
        (8, "log-convexity split of F", c8_theorem4),
        (9, "product F(w)F(-w)", c9_theorem5),
        (10, "convexity of w ln F", c10_theorem6),
        (11, "remark function", c11_remark),
        (12, "identric and logarithmic identities", c12_identities),
        (13, "CLI determinism", c13_cli_determinism),
    ];
    let mut unexpected = Vec::new();
    for (id, name, check) in criteria {
        let started = Instant::now();
        let verdict = check().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        let status = if verdict.passed { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name} ({:.1?}): {}", started.elapsed(), verdict.detail);
        let known = KNOWN_FAILURES.contains(&id);
        if verdict.passed == known || (known && !verdict.explained) {
            unexpected.push(id);
        }
    }
    let passed = criteria.len() - KNOWN_FAILURES.len();
    if unexpected.is_empty() {
        println!(
            "{passed} of {} criteria pass; criteria {KNOWN_FAILURES:?} fail for their documented reasons",
            criteria.len()
        );
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
