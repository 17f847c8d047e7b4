//! Exact character-theory engine for finite groups at desk scale.
//!
//! The crate builds groups as explicit multiplication tables, computes their
//! character tables exactly over cyclotomic fields, enumerates subgroups up
//! to conjugacy, constructs wreath products A wr C_p, and produces
//! machine-checkable certificates for the monomiality family of properties
//! (monomial, quasi-monomial, almost monomial, normally almost monomial),
//! together with hypothesis checkers and a counterexample search harness for
//! the wreath-product closure questions.
//!
//! All character-theoretic values are exact (`cyclo::Cyclotomic`); nothing
//! is floating point except diagnostic renderings and test oracles.

pub mod catalog;
pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod group;
pub mod lattice;
pub mod monomial;
pub mod oracle;
pub mod par;
pub mod report;
pub mod wreath;

pub use error::{Error, Result};
