use rand::Rng;
use rayon::prelude::*;

use super::report::PropertyReport;
use super::stream_rng;
use crate::error::{domain, Error, Result};

/// Components are drawn as integer multiples of this power of two, so every
/// sum and difference formed below is exact.
const QUANTUM: f64 = 1.0 / (1u64 << 20) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    /// `[0, ∞)²`
    NonNeg,
    /// `(−∞, 0]²`
    NonPos,
}

/// Two 2-tuples with `p ≺ q`, each stored in ascending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationPair {
    pub p: [f64; 2],
    pub q: [f64; 2],
}

impl MajorizationPair {
    /// `p = (m − d1, m + d1)`, `q = (m − d2, m + d2)` for `0 ≤ d1 ≤ d2`.
    pub fn new(m: f64, d1: f64, d2: f64) -> Result<Self> {
        if !(0.0 <= d1 && d1 <= d2 && m.is_finite() && d2.is_finite()) {
            return domain(format!("needs 0 ≤ d1 ≤ d2, got m={m:e}, d1={d1:e}, d2={d2:e}"));
        }
        Ok(Self { p: [m - d1, m + d1], q: [m - d2, m + d2] })
    }

    /// Whether `p ≺ q` holds as stored: equal sums and `max p ≤ max q`.
    pub fn is_majorized(&self) -> bool {
        self.p[0] + self.p[1] == self.q[0] + self.q[1] && self.p[1] <= self.q[1]
    }

    pub fn in_quadrant(&self, quadrant: Quadrant) -> bool {
        match quadrant {
            Quadrant::NonNeg => self.q[0] >= 0.0,
            Quadrant::NonPos => self.q[1] <= 0.0,
        }
    }
}

/// `count` seeded pairs `p ≺ q` inside `quadrant`, with centres up to `scale`
/// in magnitude.
pub fn gen_majorization_pairs(
    seed: u64,
    count: usize,
    quadrant: Quadrant,
    scale: f64,
) -> Result<Vec<MajorizationPair>> {
    if count == 0 {
        return domain("count must be at least 1");
    }
    if !(scale > 0.0 && scale <= 1e9) {
        return domain(format!("scale must lie in (0, 1e9], got {scale:e}"));
    }
    let steps = (scale / QUANTUM).floor() as u64;
    let stream = match quadrant {
        Quadrant::NonNeg => 0,
        Quadrant::NonPos => 1,
    };
    let mut rng = stream_rng(seed, stream);
    let sign = match quadrant {
        Quadrant::NonNeg => 1.0,
        Quadrant::NonPos => -1.0,
    };
    (0..count)
        .map(|_| {
            let m = rng.random_range(0..=steps);
            let d2 = rng.random_range(0..=m);
            let d1 = rng.random_range(0..=d2);
            let pair = MajorizationPair::new(sign * m as f64 * QUANTUM, d1 as f64 * QUANTUM, d2 as f64 * QUANTUM)?;
            debug_assert!(pair.is_majorized() && pair.in_quadrant(quadrant));
            Ok(pair)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchurMode {
    /// `f(p) ≤ f(q)` whenever `p ≺ q`.
    Convex,
    /// `f(p) ≥ f(q)` whenever `p ≺ q`.
    Concave,
}

/// Checks the Schur inequality of `mode` on every pair, with slack
/// `1e-12·max(1, |f(q)|)`.
pub fn schur_check<F>(f: F, pairs: &[MajorizationPair], mode: SchurMode) -> Result<PropertyReport>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    let evaluated: Vec<Result<(f64, f64)>> = pairs
        .par_iter()
        .map(|pair| {
            let fp = f(pair.p[0], pair.p[1]).map_err(|e| attach(e, pair))?;
            let fq = f(pair.q[0], pair.q[1]).map_err(|e| attach(e, pair))?;
            Ok((fp, fq))
        })
        .collect();
    let name = match mode {
        SchurMode::Convex => "schur_convex",
        SchurMode::Concave => "schur_concave",
    };
    let mut report = PropertyReport::empty(name);
    for (pair, item) in pairs.iter().zip(evaluated) {
        let (fp, fq) = item?;
        let margin = match mode {
            SchurMode::Convex => fq - fp,
            SchurMode::Concave => fp - fq,
        };
        report.record(margin, 1e-12 * fq.abs().max(1.0), &[pair.p[0], pair.p[1], pair.q[0], pair.q[1]]);
    }
    Ok(report)
}

fn attach(err: Error, pair: &MajorizationPair) -> Error {
    let ctx = format!(" (pair p={:?}, q={:?})", pair.p, pair.q);
    match err {
        Error::Domain(m) => Error::Domain(m + &ctx),
        Error::Range(m) => Error::Range(m + &ctx),
        Error::NotFound(m) => Error::NotFound(m + &ctx),
        Error::Accuracy { estimate, message } => Error::Accuracy { estimate, message: message + &ctx },
    }
}
