//! Exact arithmetic, polynomial factorization and search tools for newly
//! reducible iterates of polynomials over Q and over finite fields.

pub mod arith;
pub mod claims;
pub mod criteria;
pub mod error;
pub mod factor;
pub mod families;
pub mod ffexplore;
pub mod field;
pub mod gf;
pub mod parse;
pub mod poly;
pub mod search;

pub use arith::{Integer, Rational, Valuation};
pub use error::{Error, Result};
pub use factor::{Factorization, Factorize};
pub use field::{ExtensionField, Field, FieldCtx, FiniteField, PrimeField, RationalField};
pub use poly::Poly;
