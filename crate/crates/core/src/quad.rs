//! Gauss–Legendre rules and adaptive panel quadrature.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Number of nodes of the per-panel rule.
pub const ORDER: usize = 15;

/// Maximum bisection depth of [`integral_mean`].
pub const MAX_DEPTH: u32 = 40;

/// Panel budget of [`integral_mean`]; exceeding it is an accuracy error.
pub const MAX_PANELS: usize = 20_000;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Roots of `P_n` by Newton iteration from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Mean value `(1/(hi−lo))·∫_lo^hi f` by this rule; exact for `lo == hi`.
    pub fn mean<F: FnMut(f64) -> Result<f64>>(&self, mut f: F, lo: f64, hi: f64) -> Result<f64> {
        let centre = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(centre + half * x)?;
        }
        Ok(0.5 * acc)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub fn default_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(ORDER))
}

/// Integral mean `(1/(s−r))·∫_r^s f(u) du`, or `f(r)` when `r == s`.
///
/// Panels are bisected until the rule on a panel agrees with the sum over its
/// halves to within `abs_tol + reltol·|mean|`. Panel means enter the total
/// weighted by their share of `[r, s]`, so the same bound holds for the total.
pub fn integral_mean<F>(f: F, r: f64, s: f64, reltol: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if r == s {
        return f(r);
    }
    let rule = default_rule();
    let (lo, hi) = if r < s { (r, s) } else { (s, r) };
    let whole = rule.mean(&f, lo, hi)?;
    let scale = whole.abs();
    let mut converged = true;
    let mut total = 0.0;
    // (lo, hi, estimate, depth); processed depth first so the sum is ordered.
    let mut stack = vec![(lo, hi, whole, 0u32)];
    let mut panels = 0usize;
    while let Some((a, b, est, depth)) = stack.pop() {
        panels += 1;
        let mid = 0.5 * (a + b);
        let left = rule.mean(&f, a, mid)?;
        let right = rule.mean(&f, mid, b)?;
        let refined = 0.5 * (left + right);
        let tol = reltol.max(f64::EPSILON).mul_add(scale.max(refined.abs()), abs_tol);
        let share = (b - a) / (hi - lo);
        let exhausted = panels + stack.len() >= MAX_PANELS;
        if (refined - est).abs() <= tol || exhausted || depth >= MAX_DEPTH || mid <= a || mid >= b {
            if (refined - est).abs() > tol {
                converged = false;
            }
            total += share * refined;
        } else {
            stack.push((mid, b, right, depth + 1));
            stack.push((a, mid, left, depth + 1));
        }
    }
    if converged {
        Ok(total)
    } else {
        Err(Error::Accuracy {
            estimate: total,
            message: format!("integral mean over [{r:e}, {s:e}] did not reach reltol {reltol:e}"),
        })
    }
}
