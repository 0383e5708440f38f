//! Exact computer algebra for linear differential systems whose solutions are
//! E-functions: arbitrary-precision rational/polynomial arithmetic, truncated
//! power series, relation bases, minimal scalar operators, apparent-singularity
//! analysis, and removal of non-zero singularities by polynomial gauge
//! transformations.
//!
//! Everything is exact over the rationals; the only floating point in the crate
//! is the growth-diagnostic fit in [`efunc`], which is explicitly labelled as a
//! diagnostic. All values are immutable after construction and all operations
//! are pure, so everything is safe to share across threads.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod desing;
pub mod diffop;
pub mod diffsys;
pub mod efunc;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod rat;
pub mod ratfun;
pub mod relations;
pub mod series;
pub mod smith;

pub use desing::{desingularize, DesingConfig, DesingResult, DesingStep};
pub use diffop::{FrobeniusData, ScalarOperator};
pub use diffsys::{DiffSystem, SingularLocus};
pub use efunc::EFunction;
pub use error::Error;
pub use matrix::Matrix;
pub use poly::Poly;
pub use rat::Rat;
pub use ratfun::RatFun;
pub use relations::RelationBasis;
pub use series::TruncSeries;

pub type Result<T> = core::result::Result<T, Error>;
