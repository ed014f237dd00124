// negated comparisons are used on purpose: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod config;
pub mod disk;
pub mod error;
pub mod hardy;
pub mod interp;
pub mod model_space;
pub mod obstruct;
pub mod profile;
pub mod quadrature;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type Points = disk::PointSequence<f64>;
pub type Separation = disk::SeparationReport<f64>;
pub type Boundary = boundary::BoundaryFunction<f64>;
pub type Rearrangement = boundary::RearrangementResult<f64>;
pub type Pairing = boundary::HlPairing<f64>;
