//! Extended mean values `E(r, s; x, y)` and the shifted families built on them.
//!
//! For `x < y` and `p = (x, y)` the mean is an average of `h_p = [ln g_p]'`:
//! `ln E = (1/(s−r))·∫_r^s h_p(u) du`, which reduces to `h_p(r)` when `r = s`.
//! The closed forms below never integrate; [`ln_e_quadrature`] does, and
//! serves as an independent route to the same number.
//!
//! The identities `I_{s,t}(x) = E(1, 1; x+s, x+t)` and
//! `L_{s,t}(x) = E(0, 1; x+s, x+t)` hold with both points shifted from the
//! same `x`.

use std::fmt;

use crate::error::{domain, Error, Result};
use crate::gfunc::{self, GPair};
use crate::quad;

/// `|(s−r)·ln(y/x)|` below which the general branch uses the midpoint expansion
/// `h(m) + (s−r)²/24 · h''(m)` instead of a divided difference.
const MIDPOINT_BAND: f64 = 1e-2;

/// The exponents and points of `E(r, s; x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanArgs {
    pub r: f64,
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

impl MeanArgs {
    pub fn new(r: f64, s: f64, x: f64, y: f64) -> Result<Self> {
        let m = Self { r, s, x, y };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.r, self.s, self.x, self.y].iter().all(|v| v.is_finite()) {
            return domain(format!("mean arguments must be finite, got {self}"));
        }
        if self.x <= 0.0 || self.y <= 0.0 {
            return domain(format!("points must be positive, got x={:e}, y={:e}", self.x, self.y));
        }
        Ok(())
    }

    /// Same mean with `r ≤ s` and `x ≤ y`.
    fn normalized(&self) -> Self {
        let (r, s) = if self.r <= self.s { (self.r, self.s) } else { (self.s, self.r) };
        let (x, y) = if self.x <= self.y { (self.x, self.y) } else { (self.y, self.x) };
        Self { r, s, x, y }
    }
}

impl fmt::Display for MeanArgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={:e}, s={:e}, x={:e}, y={:e})", self.r, self.s, self.x, self.y)
    }
}

/// Which definitional case an evaluation used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchTag {
    General,
    RZero,
    SZero,
    EqualExponents,
    BothZero,
    EqualPoints,
}

impl BranchTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchTag::General => "general",
            BranchTag::RZero => "r_zero",
            BranchTag::SZero => "s_zero",
            BranchTag::EqualExponents => "equal_exponents",
            BranchTag::BothZero => "both_zero",
            BranchTag::EqualPoints => "equal_points",
        }
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tolerances deciding when a degenerate case applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchThresholds {
    /// `|r − s| ≤ tol_rs·max(1, |r|, |s|)` selects the equal-exponent case.
    pub tol_rs: f64,
    /// An exponent of magnitude `≤ tol_r` counts as zero.
    pub tol_r: f64,
    /// `|x − y| ≤ tol_xy·max(x, y)` selects the equal-point case.
    pub tol_xy: f64,
}

impl Default for BranchThresholds {
    fn default() -> Self {
        Self { tol_rs: 1e-7, tol_r: 1e-12, tol_xy: 1e-12 }
    }
}

pub fn classify_branch(m: &MeanArgs, tol: &BranchThresholds) -> BranchTag {
    if (m.x - m.y).abs() <= tol.tol_xy * m.x.max(m.y) {
        BranchTag::EqualPoints
    } else if m.r.abs().max(m.s.abs()) <= tol.tol_r {
        BranchTag::BothZero
    } else if (m.r - m.s).abs() <= tol.tol_rs * 1f64.max(m.r.abs()).max(m.s.abs()) {
        BranchTag::EqualExponents
    } else if m.r.abs() <= tol.tol_r {
        BranchTag::RZero
    } else if m.s.abs() <= tol.tol_r {
        BranchTag::SZero
    } else {
        BranchTag::General
    }
}

/// `ln(S(v1)/S(v2))` with `S(v) = sinh(v)/v`.
fn ln_sinhc_ratio(v1: f64, v2: f64) -> f64 {
    if v1.abs().max(v2.abs()) <= 300.0 {
        (gfunc::sinhc(v1) / gfunc::sinhc(v2)).ln()
    } else {
        gfunc::ln_sinhc(v1) - gfunc::ln_sinhc(v2)
    }
}

/// `ln E` for `x < y`, `r ≤ s`, `r ≠ s`, by the divided difference
/// `[ln g(s) − ln g(r)]/(s − r)` with the linear part of `ln g` removed.
fn ln_e_divided(p: &GPair, r: f64, s: f64) -> Result<f64> {
    let width = s - r;
    let mid = 0.5 * (r + s);
    if (width * p.log_ratio()).abs() < MIDPOINT_BAND {
        let h = gfunc::eval_h(p, mid)?;
        let h2 = gfunc::log_g_d3(p, mid)?;
        return Ok(h + width * width / 24.0 * h2);
    }
    Ok(p.log_midpoint() + ln_sinhc_ratio(p.half_arg(s), p.half_arg(r)) / width)
}

fn ln_e_impl(m: &MeanArgs, tol: &BranchThresholds) -> Result<(f64, BranchTag)> {
    m.validate()?;
    let tag = classify_branch(m, tol);
    let n = m.normalized();
    let ln = match tag {
        BranchTag::EqualPoints => (n.x + 0.5 * (n.y - n.x)).ln(),
        BranchTag::BothZero => 0.5 * (n.x.ln() + n.y.ln()),
        BranchTag::EqualExponents => {
            let p = GPair::new(n.x, n.y)?;
            gfunc::eval_h(&p, 0.5 * (n.r + n.s))?
        }
        BranchTag::RZero | BranchTag::SZero | BranchTag::General => {
            let p = GPair::new(n.x, n.y)?;
            let snap = |e: f64| if e.abs() <= tol.tol_r { 0.0 } else { e };
            ln_e_divided(&p, snap(n.r), snap(n.s))?
        }
    };
    if !ln.is_finite() {
        return Err(Error::Range(format!("ln E is not finite at {m}")));
    }
    Ok((ln.clamp(n.x.ln(), n.y.ln()), tag))
}

/// `E(r, s; x, y)` together with the branch that produced it.
///
/// Inputs are normalized to `r ≤ s`, `x ≤ y` before evaluation, so the result
/// is exactly symmetric in both pairs.
pub fn eval_e_tagged(m: &MeanArgs, tol: &BranchThresholds) -> Result<(f64, BranchTag)> {
    let (ln, tag) = ln_e_impl(m, tol)?;
    let n = m.normalized();
    let value = match tag {
        BranchTag::EqualPoints => n.x + 0.5 * (n.y - n.x),
        BranchTag::BothZero => {
            let prod = n.x * n.y;
            if prod.is_normal() {
                prod.sqrt()
            } else {
                n.x.sqrt() * n.y.sqrt()
            }
        }
        _ => ln.exp(),
    };
    Ok((value.clamp(n.x, n.y), tag))
}

/// `E(r, s; x, y)` with the default thresholds.
pub fn eval_e(m: &MeanArgs) -> Result<f64> {
    eval_e_tagged(m, &BranchThresholds::default()).map(|(v, _)| v)
}

/// `ln E(r, s; x, y)` with the default thresholds.
pub fn ln_e(m: &MeanArgs) -> Result<f64> {
    ln_e_impl(m, &BranchThresholds::default()).map(|(v, _)| v)
}

/// `ln E(r, s; x, y)` with explicit thresholds.
pub fn ln_e_with(m: &MeanArgs, tol: &BranchThresholds) -> Result<f64> {
    ln_e_impl(m, tol).map(|(v, _)| v)
}

/// `ln E` as the integral mean of `h_{x,y}` over `[r, s]` by adaptive
/// Gauss–Legendre quadrature, or `h_{x,y}(r)` when `r = s`.
pub fn ln_e_quadrature(m: &MeanArgs, reltol: f64) -> Result<f64> {
    m.validate()?;
    if !(1e-14..=1e-6).contains(&reltol) {
        return domain(format!("reltol must lie in [1e-14, 1e-6], got {reltol:e}"));
    }
    if m.x == m.y {
        return domain(format!("quadrature route needs x ≠ y, got {m}"));
    }
    let p = GPair::from_unordered(m.x, m.y)?;
    let abs_tol = f64::EPSILON * (1.0 + p.ln_a().abs() + p.ln_b().abs());
    quad::integral_mean(|u| gfunc::eval_h(&p, u), m.r, m.s, reltol, abs_tol)
}

/// The three shifted families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `F(w) = E(r+w, s+w; x, y)`
    F,
    /// `G(w) = E(r, s; x+w, y+w)`
    G,
    /// `H(w) = E(r+w, s+w; x+w, y+w)`
    H,
}

impl Family {
    /// Smallest admissible shift (exclusive) for a base.
    pub fn lower_bound(&self, base: &MeanArgs) -> f64 {
        match self {
            Family::F => f64::NEG_INFINITY,
            Family::G | Family::H => -base.x.min(base.y),
        }
    }

    pub fn shifted(&self, base: &MeanArgs, w: f64) -> Result<MeanArgs> {
        if !w.is_finite() {
            return domain(format!("shift must be finite, got {w}"));
        }
        let lower = self.lower_bound(base);
        if w <= lower {
            return domain(format!("shift w={w:e} must exceed −min(x, y) = {lower:e}"));
        }
        let m = match self {
            Family::F => MeanArgs { r: base.r + w, s: base.s + w, ..*base },
            Family::G => MeanArgs { x: base.x + w, y: base.y + w, ..*base },
            Family::H => MeanArgs { r: base.r + w, s: base.s + w, x: base.x + w, y: base.y + w },
        };
        m.validate()?;
        Ok(m)
    }
}

/// A base mean and a shift `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftArgs {
    pub base: MeanArgs,
    pub w: f64,
}

impl ShiftArgs {
    pub fn new(base: MeanArgs, w: f64) -> Self {
        Self { base, w }
    }
}

pub fn eval_family(family: Family, sa: &ShiftArgs) -> Result<f64> {
    eval_e(&family.shifted(&sa.base, sa.w)?)
}

pub fn ln_family(family: Family, sa: &ShiftArgs) -> Result<f64> {
    ln_e(&family.shifted(&sa.base, sa.w)?)
}

/// `F(w) = E(r+w, s+w; x, y)`.
pub fn eval_f(sa: &ShiftArgs) -> Result<f64> {
    eval_family(Family::F, sa)
}

/// `G(w) = E(r, s; x+w, y+w)`, `w > −min(x, y)`.
pub fn eval_g(sa: &ShiftArgs) -> Result<f64> {
    eval_family(Family::G, sa)
}

/// `H(w) = E(r+w, s+w; x+w, y+w)`, `w > −min(x, y)`.
pub fn eval_h(sa: &ShiftArgs) -> Result<f64> {
    eval_family(Family::H, sa)
}

/// `[ln F]''(w) = ([ln g]''(w+s) − [ln g]''(w+r))/(s − r)`, or `[ln g]'''(w+r)`
/// when `r = s`; zero when `x = y`.
pub fn ln_f_d2(base: &MeanArgs, w: f64) -> Result<f64> {
    base.validate()?;
    if base.x == base.y {
        return Ok(0.0);
    }
    let p = GPair::from_unordered(base.x, base.y)?;
    let (r, s) = (base.r.min(base.s), base.r.max(base.s));
    let width = s - r;
    if (width * p.log_ratio()).abs() < 1e-3 {
        return gfunc::log_g_d3(&p, w + 0.5 * (r + s));
    }
    Ok((gfunc::log_g_d2(&p, w + s)? - gfunc::log_g_d2(&p, w + r)?) / width)
}

fn shifted_points(s: f64, t: f64, x: f64) -> Result<(f64, f64)> {
    if ![s, t, x].iter().all(|v| v.is_finite()) {
        return domain(format!("arguments must be finite, got s={s}, t={t}, x={x}"));
    }
    let (u, v) = (x + s, x + t);
    if u <= 0.0 || v <= 0.0 {
        return domain(format!("shifted points x+s={u:e}, x+t={v:e} must be positive"));
    }
    Ok((u, v))
}

/// The exponential (identric) mean `I_{s,t}(x) = (1/e)·[(x+s)^{x+s}/(x+t)^{x+t}]^{1/(s−t)}`.
pub fn eval_i(s: f64, t: f64, x: f64) -> Result<f64> {
    if s == t {
        return domain("I_{s,t} needs s ≠ t");
    }
    let (u, v) = shifted_points(s, t, x)?;
    if u == v {
        return Ok(u);
    }
    // (u ln u − v ln v)/(u − v) = ln u + (v/d)·ln(1 + d/v), d = u − v
    let d = u - v;
    let ln = -1.0 + u.ln() + v / d * (d / v).ln_1p();
    Ok(ln.exp().clamp(u.min(v), u.max(v)))
}

/// The logarithmic mean `L_{s,t}(x) = L(x+s, x+t)`.
pub fn eval_l(s: f64, t: f64, x: f64) -> Result<f64> {
    let (u, v) = shifted_points(s, t, x)?;
    let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
    if lo == hi {
        return Ok(lo);
    }
    let z = (hi - lo) / lo;
    Ok((lo * z / z.ln_1p()).clamp(lo, hi))
}

/// `F(w)·F(−w)`.
pub fn product_f(base: &MeanArgs, w: f64) -> Result<f64> {
    let plus = eval_f(&ShiftArgs::new(*base, w))?;
    let minus = eval_f(&ShiftArgs::new(*base, -w))?;
    Ok(plus * minus)
}

/// `(w + s − r)·F(w)^{s−r}` for `s > r`.
pub fn remark_fn(base: &MeanArgs, w: f64) -> Result<f64> {
    if base.s <= base.r {
        return domain(format!("needs s > r, got r={:e}, s={:e}", base.r, base.s));
    }
    let width = base.s - base.r;
    let ln_f = ln_family(Family::F, &ShiftArgs::new(*base, w))?;
    Ok((w + width) * (width * ln_f).exp())
}
