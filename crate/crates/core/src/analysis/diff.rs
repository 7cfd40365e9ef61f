use crate::error::Result;

/// Central finite-difference estimate of `f^(order)(t)` for `order ∈ {1, 2, 3}`,
/// with one Richardson step combining steps `h` and `h/2`.
///
/// The stencil reaches `t ± order·h`. Panics on an order outside 1..=3.
pub fn central_diff<F>(f: F, t: f64, order: u32, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    assert!(h > 0.0, "step must be positive");
    let coarse = raw_central(&f, t, order, h)?;
    let fine = raw_central(&f, t, order, 0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

fn raw_central<F>(f: &F, t: f64, order: u32, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok(match order {
        1 => (f(t + h)? - f(t - h)?) / (2.0 * h),
        2 => (f(t + h)? - 2.0 * f(t)? + f(t - h)?) / (h * h),
        3 => (f(t + 2.0 * h)? - 2.0 * f(t + h)? + 2.0 * f(t - h)? - f(t - 2.0 * h)?) / (2.0 * h * h * h),
        _ => panic!("central_diff supports orders 1..=3, got {order}"),
    })
}

/// Step for [`central_diff`] at `t`: `c_k·max(1, |t|)` where `c_k` balances the
/// `O(h⁴)` truncation against round-off amplified by `h^{-k}`.
pub fn default_step(order: u32, t: f64) -> f64 {
    let c = match order {
        1 => 1e-3,
        2 => 1e-2,
        _ => 2e-2,
    };
    c * t.abs().max(1.0)
}
