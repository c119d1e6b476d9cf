//! Frequency-domain model of a two-sided optomechanical force sensor whose
//! detected output is fed back into the drive port.
//!
//! Start from [`params::OperatingPoint`] or [`params::SystemParams`], build a
//! [`params::Model`], then evaluate spectra with [`response`], stability with
//! [`stability`] and sensor figures with [`metrics`].

// `!(x > 0.0)` is used on purpose so NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod floquet;
mod linalg;
pub mod metrics;
pub mod params;
pub mod response;
pub mod scan;
pub mod stability;

pub use error::{category_of_tag, Error, ErrorCategory, Result};
pub use params::{Model, OperatingPoint, ParameterId, SystemParams};
pub use response::Route;
