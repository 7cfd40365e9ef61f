//! The function `g(t) = (b^t - a^t) / t` and its logarithmic derivatives.
//!
//! Every quantity is evaluated through the half-argument `v = t·L/2` with
//! `L = ln(b/a)` and the midpoint `μ = (ln a + ln b)/2`:
//!
//! ```text
//! g(t)        = e^{tμ} · L · sinh(v)/v
//! h(t)        = [ln g]'(t)   = μ + (L/2)·(coth v − 1/v)
//! [ln g]''(t) = (L/2)²·(1/v² − csch² v)
//! [ln g]'''(t)= (L³/4)·(cosh v − (sinh v / v)³) / sinh³ v
//! ```
//!
//! Each bracketed factor has a removable singularity at `v = 0` and is
//! evaluated with a cancellation-free series in a band around it.

use std::sync::OnceLock;

use crate::error::{domain, Error, Result};

/// Above this magnitude of `t·ln max(b, 1/a)` evaluation of `g` is refused.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

/// `|t·L|` below which `g` is evaluated with its Taylor series.
pub const SERIES_G: f64 = 1e-3;

/// `|v|` up to which the positive-term series for the `h` and `[ln g]''`
/// numerators are used.
const SERIES_HALF_ARG: f64 = 1.0;

/// `|v|` up to which the gap function is summed as a series.
const SERIES_GAP: f64 = 2.0;

/// An ordered base pair `0 < a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPair {
    a: f64,
    b: f64,
    ln_a: f64,
    ln_b: f64,
    log_ratio: f64,
}

impl GPair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return domain(format!("bases must be finite, got a={a:e}, b={b:e}"));
        }
        if a <= 0.0 {
            return domain(format!("base a must be positive, got {a:e}"));
        }
        if a >= b {
            return domain(format!("bases must satisfy a < b, got a={a:e}, b={b:e}"));
        }
        let ln_a = a.ln();
        let ln_b = b.ln();
        let log_ratio = if b < 2.0 * a { ((b - a) / a).ln_1p() } else { ln_b - ln_a };
        if !(log_ratio.is_finite() && log_ratio > 0.0) {
            return domain(format!("ln(b/a) is not a positive finite number for a={a:e}, b={b:e}"));
        }
        Ok(Self { a, b, ln_a, ln_b, log_ratio })
    }

    /// Builds the pair from two distinct positive points in either order.
    pub fn from_unordered(x: f64, y: f64) -> Result<Self> {
        if x < y {
            Self::new(x, y)
        } else {
            Self::new(y, x)
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn ln_a(&self) -> f64 {
        self.ln_a
    }

    pub fn ln_b(&self) -> f64 {
        self.ln_b
    }

    /// `L = ln(b/a) > 0`.
    pub fn log_ratio(&self) -> f64 {
        self.log_ratio
    }

    /// `(ln a + ln b)/2 = ln √(ab)`.
    pub fn log_midpoint(&self) -> f64 {
        0.5 * (self.ln_a + self.ln_b)
    }

    /// `v = t·L/2`.
    pub fn half_arg(&self, t: f64) -> f64 {
        0.5 * t * self.log_ratio
    }
}

/// How a value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    SeriesNearZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub method: Method,
    /// Claimed upper bound on `|value - exact|`.
    pub est_abs_error: f64,
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        domain(format!("t must be finite, got {t}"))
    }
}

fn check_range(p: &GPair, t: f64) -> Result<()> {
    let exponent = t.abs() * p.ln_b.max(-p.ln_a);
    if exponent > OVERFLOW_EXPONENT {
        Err(Error::Range(format!(
            "|t·ln max(b, 1/a)| = {exponent:e} exceeds {OVERFLOW_EXPONENT} (t={t:e}, a={:e}, b={:e})",
            p.a, p.b
        )))
    } else {
        Ok(())
    }
}

/// `sinh(v) − v` without cancellation near zero.
fn sinh_minus_id(v: f64) -> f64 {
    if v.abs() > SERIES_HALF_ARG {
        return v.sinh() - v;
    }
    let v2 = v * v;
    let mut term = v * v2 / 6.0;
    let mut sum = term;
    let mut k = 1.0;
    while term.abs() > f64::EPSILON * 1e-3 * sum.abs() {
        term *= v2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        sum += term;
        k += 1.0;
    }
    sum
}

/// `sinh(v)/v`, equal to 1 at `v = 0`.
pub(crate) fn sinhc(v: f64) -> f64 {
    if v.abs() < 0.5 * SERIES_G {
        let v2 = v * v;
        1.0 + v2 / 6.0 * (1.0 + v2 / 20.0)
    } else {
        v.sinh() / v
    }
}

/// `ln(sinh(v)/v)`, valid for every finite `v`.
pub(crate) fn ln_sinhc(v: f64) -> f64 {
    let w = v.abs();
    if w > 20.0 {
        w - std::f64::consts::LN_2 - w.ln() + (-(-2.0 * w).exp()).ln_1p()
    } else if w == 0.0 {
        0.0
    } else {
        (sinh_minus_id(w) / w).ln_1p()
    }
}

/// `coth(v) − 1/v`, odd, with value 0 at the origin.
fn coth_minus_recip(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    if v.abs() > SERIES_HALF_ARG {
        return 1.0 / v.tanh() - 1.0 / v;
    }
    // v·cosh v − sinh v = Σ_{k≥1} 2k·v^{2k+1}/(2k+1)!
    let v2 = v * v;
    let mut power = v * v2 / 6.0; // v^{2k+1}/(2k+1)! at k = 1
    let mut sum = 2.0 * power;
    let mut k = 1.0;
    loop {
        power *= v2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        k += 1.0;
        let term = 2.0 * k * power;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
    }
    sum / (v * v.sinh())
}

/// `1/v² − csch² v`, even, with value 1/3 at the origin.
fn recip_sq_minus_csch_sq(v: f64) -> f64 {
    let w = v.abs();
    if w == 0.0 {
        return 1.0 / 3.0;
    }
    if w > 20.0 {
        let csch = 1.0 / w.sinh();
        return 1.0 / (w * w) - csch * csch;
    }
    let s = w.sinh();
    let ws = w * s;
    sinh_minus_id(w) * (s + w) / (ws * ws)
}

/// Taylor coefficients `c_m`, `m ≥ 2`, of `cosh v − (sinh v / v)^3 = Σ c_m v^{2m}`.
/// Every coefficient is negative, so the series sums without cancellation.
fn gap_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // (sinh v / v)^3 = (sinh 3v − 3 sinh v) / (4 v^3)
        let mut out = Vec::new();
        for m in 2..=28u32 {
            let n = 2 * m;
            let fact_n: f64 = (1..=n).map(f64::from).product();
            let fact_n3 = fact_n * f64::from(n + 1) * f64::from(n + 2) * f64::from(n + 3);
            let cube_coeff = (3f64.powi(n as i32 + 3) - 3.0) / (4.0 * fact_n3);
            out.push(1.0 / fact_n - cube_coeff);
        }
        out
    })
}

/// `(cosh v − (sinh v / v)^3) / v^4` for `|v| ≤ SERIES_GAP`.
fn gap_over_v4(v: f64) -> f64 {
    let v2 = v * v;
    let mut power = 1.0;
    let mut sum = 0.0;
    for &c in gap_coefficients() {
        let term = c * power;
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs() {
            break;
        }
        power *= v2;
    }
    sum
}

/// `(cosh v − (sinh v / v)^3) / sinh³ v`, odd, 0 at the origin.
fn gap_over_sinh_cubed(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    if v.abs() <= SERIES_GAP {
        let r = v / v.sinh();
        gap_over_v4(v) * v * r * r * r
    } else {
        let csch = 1.0 / v.sinh();
        csch * csch / v.tanh() - 1.0 / (v * v * v)
    }
}

/// `g_{a,b}(t)`, with the removable value `g(0) = ln b − ln a`.
pub fn eval_g(p: &GPair, t: f64) -> Result<f64> {
    eval_g_detailed(p, t).map(|r| r.value)
}

/// [`eval_g`] with the evaluation path and an error bound.
pub fn eval_g_detailed(p: &GPair, t: f64) -> Result<EvalResult> {
    check_t(t)?;
    check_range(p, t)?;
    let v = p.half_arg(t);
    let exponent = t * p.log_midpoint();
    let value = exponent.exp() * p.log_ratio * sinhc(v);
    let method = if (2.0 * v).abs() < SERIES_G { Method::SeriesNearZero } else { Method::ClosedForm };
    let est_abs_error = value * f64::EPSILON * (8.0 + 2.0 * exponent.abs() + 2.0 * v.abs());
    Ok(EvalResult { value, method, est_abs_error })
}

/// `ln g_{a,b}(t)`, computed in log space so that it never overflows.
pub fn ln_g(p: &GPair, t: f64) -> Result<f64> {
    check_t(t)?;
    let v = p.half_arg(t);
    Ok(t * p.log_midpoint() + p.log_ratio.ln() + ln_sinhc(v))
}

/// `h_{a,b}(t) = [ln g]'(t)`, with `h(0) = ln √(ab)`.
pub fn eval_h(p: &GPair, t: f64) -> Result<f64> {
    check_t(t)?;
    let v = p.half_arg(t);
    Ok(p.log_midpoint() + 0.5 * p.log_ratio * coth_minus_recip(v))
}

/// `[ln g]''(t)`, with the removable value `L²/12` at `t = 0`.
pub fn log_g_d2(p: &GPair, t: f64) -> Result<f64> {
    check_t(t)?;
    let half = 0.5 * p.log_ratio;
    Ok(half * half * recip_sq_minus_csch_sq(p.half_arg(t)))
}

/// `[ln g]'''(t)`, with value 0 at `t = 0`.
pub fn log_g_d3(p: &GPair, t: f64) -> Result<f64> {
    check_t(t)?;
    let l = p.log_ratio;
    Ok(0.25 * l * l * l * gap_over_sinh_cubed(p.half_arg(t)))
}

/// `cosh t − (sinh t / t)^3`, with value 0 at `t = 0`.
pub fn lazarevic_gap(t: f64) -> Result<f64> {
    check_t(t)?;
    if t.abs() <= SERIES_GAP {
        let t2 = t * t;
        return Ok(gap_over_v4(t) * t2 * t2);
    }
    let q = t.sinh() / t;
    let value = t.cosh() - q * q * q;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Range(format!("cosh t − (sinh t/t)^3 overflows at t={t:e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn pair(a: f64, b: f64) -> GPair {
        GPair::new(a, b).unwrap()
    }

    #[test]
    fn g_special_values() {
        // the continuous extension at 0 is ln(b/a), not b − a
        assert_eq!(eval_g(&pair(1.0, 3.0), 0.0).unwrap(), 3f64.ln());
        assert_relative_eq!(eval_g(&pair(1.0, 2.0), 1.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(eval_g(&pair(1.0, 4.0), 0.5).unwrap(), 2.0, max_relative = 1e-15);
        // e − 1 to 40 digits
        assert_relative_eq!(eval_g(&pair(1.0, E), 1.0).unwrap(), 1.718_281_828_459_045_3, max_relative = 1e-15);
    }

    #[test]
    fn g_reports_method() {
        let p = pair(1.0, E);
        assert_eq!(eval_g_detailed(&p, 1e-5).unwrap().method, Method::SeriesNearZero);
        assert_eq!(eval_g_detailed(&p, 0.5).unwrap().method, Method::ClosedForm);
    }

    #[test]
    fn invalid_pairs_are_domain_errors() {
        for (a, b) in [(2.0, 1.0), (1.0, 1.0), (0.0, 1.0), (-1.0, 2.0), (1.0, f64::INFINITY), (f64::NAN, 1.0)] {
            assert!(matches!(GPair::new(a, b), Err(Error::Domain(_))), "a={a}, b={b}");
        }
    }

    #[test]
    fn g_overflow_is_range_error() {
        let p = pair(0.5, 10.0);
        assert!(matches!(eval_g(&p, 400.0), Err(Error::Range(_))));
        // ln(1/a) dominates for small a
        let p = pair(1e-3, 2.0);
        assert!(matches!(eval_g(&p, -200.0), Err(Error::Range(_))));
        assert!(eval_g(&p, 90.0).is_ok());
        assert!(ln_g(&p, -200.0).unwrap().is_finite());
        assert!(matches!(eval_g(&p, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn ln_g_matches_g() {
        let p = pair(0.3, 7.0);
        for &t in &[-30.0, -2.0, -1e-6, 0.0, 1e-6, 0.7, 25.0] {
            let g = eval_g(&p, t).unwrap();
            assert_relative_eq!(ln_g(&p, t).unwrap(), g.ln(), max_relative = 1e-13, epsilon = 1e-15);
        }
    }

    #[test]
    fn h_special_values() {
        assert_relative_eq!(eval_h(&pair(1.0, E * E), 0.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(eval_h(&pair(4.0, 9.0), 0.0).unwrap(), 6f64.ln(), max_relative = 1e-15);
        // e/(e − 1) − 1 to 40 digits
        assert_relative_eq!(eval_h(&pair(1.0, E), 1.0).unwrap(), 0.581_976_706_869_326_5, max_relative = 1e-14);
        assert!(eval_h(&pair(1.0, E), -1e4).unwrap().abs() <= 2e-4);
    }

    #[test]
    fn h_series_band_edges_agree() {
        let p = pair(1.0, E);
        for &v in &[SERIES_HALF_ARG, 0.5 * SERIES_G] {
            let t = 2.0 * v / p.log_ratio();
            let below = eval_h(&p, t * (1.0 - 1e-15)).unwrap();
            let above = eval_h(&p, t * (1.0 + 1e-15)).unwrap();
            assert_relative_eq!(below, above, max_relative = 1e-14);
        }
    }

    #[test]
    fn d2_removable_value_and_evenness() {
        let p = pair(1.0, E);
        assert_relative_eq!(log_g_d2(&p, 0.0).unwrap(), 1.0 / 12.0, max_relative = 1e-15);
        for &t in &[1e-8, 0.3, 1.999, 2.001, 7.0, 39.0, 41.0] {
            assert_eq!(log_g_d2(&p, t).unwrap(), log_g_d2(&p, -t).unwrap());
        }
        // oracle: 1/100 − e^10/(e^10 − 1)^2, 40 digits
        let d = log_g_d2(&p, 10.0).unwrap();
        assert_relative_eq!(d, 0.009_954_595_947_649_525, max_relative = 1e-14);
        assert!(d > 0.0 && d < 0.01);
    }

    #[test]
    fn d3_values_and_oddness() {
        let p = pair(1.0, E);
        assert_eq!(log_g_d3(&p, 0.0).unwrap(), 0.0);
        let d = log_g_d3(&p, 1.0).unwrap();
        // oracle: raw quotient form at 40 digits
        assert_relative_eq!(d, -0.007_705_232_875_012_607, max_relative = 1e-13);
        assert_eq!(log_g_d3(&p, -1.0).unwrap(), -d);
        for &t in &[1e-9, 0.01, 3.9, 4.1, 50.0, 1e3] {
            let right = log_g_d3(&p, t).unwrap();
            assert!(right < 0.0, "t={t}: {right}");
            assert_eq!(log_g_d3(&p, -t).unwrap(), -right);
        }
    }

    #[test]
    fn gap_values() {
        assert_eq!(lazarevic_gap(0.0).unwrap(), 0.0);
        let one = lazarevic_gap(1.0).unwrap();
        // cosh 1 − sinh³ 1 at 40 digits
        assert_relative_eq!(one, -0.079_987_201_804_380_6, max_relative = 1e-14);
        assert_eq!(lazarevic_gap(-1.0).unwrap(), one);
        // both sides of the series/closed-form switch
        assert_relative_eq!(lazarevic_gap(2.0).unwrap(), -2.201_322_313_501_936, max_relative = 1e-14);
        assert_relative_eq!(lazarevic_gap(0.1).unwrap(), -6.678_846_831_772_824e-6, max_relative = 1e-14);
        let below = lazarevic_gap(2.0 - 1e-12).unwrap();
        let above = lazarevic_gap(2.0 + 1e-12).unwrap();
        assert_relative_eq!(below, above, max_relative = 1e-11);
        assert!(matches!(lazarevic_gap(400.0), Err(Error::Range(_))));
    }

    #[test]
    fn gap_coefficients_are_negative() {
        assert_relative_eq!(gap_coefficients()[0], -1.0 / 15.0, max_relative = 1e-15);
        assert!(gap_coefficients().iter().all(|&c| c < 0.0));
    }
}
