//! Explicit upper and lower bounds for `|L(1, f)|` of degree-`d` L-functions,
//! evaluated from the analytic conductor, together with machine checks of
//! every auxiliary inequality, constant and prime-sum estimate the bounds
//! rest on.
//!
//! The crate is organised bottom-up:
//!
//! - [`special`]: digamma and the scalar series used by the explicit formulas.
//! - [`primes`]: a von Mangoldt sieve and the smoothed prime sums.
//! - [`lfunc`]: L-function instances and analytic conductors.
//! - [`dirichlet`]: Dirichlet characters, exact `L(1, χ)` and surveys.
//! - [`bounds`]: the constants `K(d)`, `J₁(d)`, `J₂(d)` and the bound formulas.
//! - [`audit`]: grid, extremum and window checks emitting [`audit::AuditRecord`]s.

pub mod audit;
pub mod bounds;
pub mod consts;
pub mod dirichlet;
mod error;
pub mod lfunc;
pub mod numeric;
pub mod primes;
pub mod special;

pub use audit::{AuditRecord, Interval, Verdict};
pub use bounds::{BoundConstants, BoundReport};
pub use dirichlet::{DirichletCharacter, SurveyRecord};
pub use error::{Error, Result};
pub use lfunc::{LFunctionInstance, LocalParam};
pub use primes::{PrimeTable, WeightedSumResult};
pub use special::SeriesValue;
