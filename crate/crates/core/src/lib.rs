//! Exact arithmetic for multiplicative groups of fields.
//!
//! The crate covers finite fields and their unit groups, factorization over
//! `F_q`, the explicit unit-group decomposition of `F_q(x)`, valuations and
//! sections, Hahn series, the perfect closure of `F_2(t)`, and field norms of
//! simple extensions of `F_q(t)`.

pub mod error;
pub mod expr;
pub mod gf;
pub mod groups;
pub mod hahn;
pub mod norm;
pub mod perfect;
pub mod ratfunc;
pub mod valued;

pub use error::{Error, Result};
