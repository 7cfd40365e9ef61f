//! Extended mean values and the function `g(t) = (b^t - a^t) / t`.
//!
//! The crate has four layers:
//!
//! - [`gfunc`]: singularity-stable evaluation of `g`, its logarithmic
//!   derivatives `h = [ln g]'`, `[ln g]''`, `[ln g]'''` and the gap function
//!   `cosh t - (sinh t / t)^3`.
//! - [`means`]: the extended mean values `E(r, s; x, y)` with branch
//!   classification, a quadrature route through `ln E = mean of h over [r, s]`,
//!   and the shifted families `F`, `G`, `H`, the identric and logarithmic means.
//! - [`analysis`]: finite differences, grid scanners for sign, monotonicity and
//!   (log-)convexity, majorization pairs and a Schur-convexity checker.
//! - [`verify`]: seeded property suites built from the above, one per theorem.
//!
//! The `stolarsky` binary ([`cli`]) exposes evaluation, scans and the suites.
//!
//! ```
//! use stolarsky::means::{eval_e, MeanArgs};
//!
//! let m = MeanArgs::new(0.0, 0.0, 4.0, 9.0).unwrap();
//! assert_eq!(eval_e(&m).unwrap(), 6.0);
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod gfunc;
pub mod means;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
