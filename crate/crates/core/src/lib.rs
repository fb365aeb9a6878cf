//! A transitivity-free subtyping system for intersection types.
//!
//! [`subtype::check_sub`] decides `A <: B` and returns a [`Derivation`]
//! that [`derivation::validate`] re-checks rule by rule. Transitivity is
//! not a rule but a derivation transformer, [`subtype::trans_compose`].
//! The [`bcd`] module relates the system to the classic BCD rules in both
//! directions, and [`harness`] holds the exhaustive property suites.

pub mod bcd;
pub mod consistency;
pub mod derivation;
pub mod harness;
pub mod subtype;
pub mod syntax;
pub mod types;

pub use bcd::BcdDerivation;
pub use derivation::{validate, Derivation, Rule, ValidationError};
pub use subtype::{check_sub, trans_compose, Factoring, SubtypeError};
pub use syntax::{parse, print, ParseError};
pub use types::{MeasureTriple, Ty, TyKind};
