//! Classification of hyperbolic Coxeter groups over real multiquadratic fields.

pub mod arith;
pub mod classify;
pub mod coxeter;
pub mod error;
pub mod localarith;
pub mod lvalues;
pub mod mqfield;
pub mod par;
pub mod qspace;

pub use error::{Error, Result};
pub use mqfield::{Embedding, FieldElement, FieldTower};
