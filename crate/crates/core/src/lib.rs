//! Numerical laboratory for Kobayashi distances, horofunctions, ends and
//! holomorphic iteration on concrete hyperbolic domains.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod domain;
pub mod dynamics;
pub mod ends;
pub mod error;
pub mod geodesy;
pub mod horofunction;
pub mod kobayashi;
pub mod point;
pub mod polygon;
pub mod quadrature;
pub mod suites;

pub use domain::{BoundaryTarget, DomainDescriptor, DomainKind, DomainModel, EndTarget};
pub use error::{HoroError, Result};
pub use kobayashi::{DistanceEngine, EngineMode, Interval};
pub use point::Point;
