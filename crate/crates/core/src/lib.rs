//! Linearized polynomials over finite fields, F_{q^n}-linear rank-metric
//! codes, and Moore polynomial sets: exact arithmetic, MRD and Moore
//! deciders with certificates, Delsarte duality, the associated
//! hypersurfaces, and constructors for the known families.

#![allow(clippy::needless_range_loop)]

pub mod code;
pub mod error;
pub mod families;
pub mod gf;
pub mod linpoly;
pub mod moore;
pub mod variety;

pub use code::RankMetricCode;
pub use error::{Error, Result};
pub use gf::{FieldElem, FieldSpec, FieldTower};
pub use linpoly::LinPoly;
pub use moore::MoorePolySet;
pub use variety::MvPoly;
