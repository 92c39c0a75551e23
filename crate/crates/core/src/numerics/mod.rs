//! Arbitrary-precision complex arithmetic and normalized power series.

mod complex;
pub mod format;
mod real;
mod series;

pub use complex::PrecisionComplex;
pub use real::{ParseRealError, PrecisionReal, Sign, MIN_PRECISION};
pub use series::{int_pow, truncated_exp, NormalizedSeries};
