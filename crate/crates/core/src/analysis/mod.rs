//! Numerical verification machinery: finite differences, grid scans,
//! majorization and Schur checks.

mod diff;
mod explore;
mod majorization;
mod report;
mod scan;

pub use diff::{central_diff, default_step};
pub use explore::{explore_open_problem, Exploration};
pub use majorization::{gen_majorization_pairs, schur_check, MajorizationPair, Quadrant, SchurMode};
pub use report::PropertyReport;
pub use scan::{scan, scan_detailed, split_point, Property, ScanRow, ScanSpec, SignKind};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Reproducible generator: one ChaCha stream per `(seed, stream)` pair, so
/// independent consumers of the same seed never share draws.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
