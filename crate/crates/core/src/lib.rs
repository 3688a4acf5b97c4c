//! Unrolling of comprehensions and quantified expressions in a small constraint
//! modelling language.
//!
//! Two pipelines produce the same flat model: a naive one that enumerates every
//! combination of induction values and simplifies each item, and a solver-aided
//! one that first solves a generator model for the combinations whose items can
//! differ from the aggregate's identity.

pub mod ast;
pub mod cli;
pub mod bench;
pub mod error;
pub mod fdsolver;
pub mod genmodel;
pub mod eval;
pub mod expand;
pub mod lexer;
pub mod parser;
pub mod printer;
pub mod rewrite;

pub use error::{Error, EvalError, Result, Span};
