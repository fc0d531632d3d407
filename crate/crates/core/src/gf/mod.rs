//! Finite fields and the tower GF(p) ⊂ GF(q) ⊂ GF(q^n) ⊂ GF(q^(nm)).

pub mod extension;
pub mod field;
pub mod linalg;
pub(crate) mod poly;
pub mod tower;

pub use extension::Extension;
pub use field::{FieldCtx, FieldElem, DEFAULT_MAX_FIELD_ORDER};
pub use tower::{FieldSpec, FieldTower};
