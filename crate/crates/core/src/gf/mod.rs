//! Finite fields and polynomials over them.

pub mod factor;
pub mod field;
pub mod gf2;
pub mod poly;

pub use factor::{factor_poly, Factorization};
pub use field::{FieldSpec, FqElem};
pub use gf2::Gf2Poly;
pub use poly::Poly;
