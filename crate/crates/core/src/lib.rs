//! Walk-number encoding of Hamiltonian path counts and a cascade of
//! first-order filter steps that tries to read the count back out.
//!
//! A graph on `n` vertices gets vertex-numbers `n, n^2, ..., n^n`. Every
//! `n`-walk contributes `e^{iWt}` to `x(t)`, where `W` is the sum of the
//! vertex-numbers it visits; Hamiltonian paths all share `W = a_h`. After
//! shifting by `e^{-i a_h t}` and scaling time, the constant term of `f(t)`
//! is the directed Hamiltonian path count. The filter pipeline and the
//! extraction step attempt to isolate that constant from the truncated
//! series; the brute-force oracle checks the answer.

pub mod error;
pub mod experiment;
pub mod extraction;
pub mod filter_pipeline;
pub mod graph;
pub mod grid;
pub mod numerics;
pub mod schedule;
pub mod walk_oracle;

pub use error::{Error, Result};
pub use graph::Graph;
pub use numerics::{NormalizedSeries, PrecisionComplex, PrecisionReal};
pub use schedule::{PipelineProfile, StepSchedule};
