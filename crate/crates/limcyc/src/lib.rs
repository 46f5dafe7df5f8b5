//! Numerical toolkit for planar and Liénard differential systems: orbit
//! integration, Poincaré return maps, limit-cycle detection and stability
//! classification, rotational stability operators, and mechanical checkers
//! for the classical limit-cycle uniqueness criteria.

pub mod cli;
pub mod criteria;
pub mod cycles;
pub mod expr;
pub mod field;
pub mod gallery;
pub mod integrate;
pub mod numeric;
pub mod operators;

pub use expr::{Expr, ParseError, Var};
pub use field::{FieldError, LienardForm, LienardSpec, PlanarField, SystemSpec};
