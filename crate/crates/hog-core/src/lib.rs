//! Finite games whose players are described by multi-valued selection
//! functions and quantifiers.
//!
//! The crate is organised in layers:
//!
//! - [`core`]: ground types: interned symbols, exact-rational outcome
//!   values, ordered finite sets, strict partial orders, agent contexts,
//!   and strategy profiles.
//! - [`hof`]: the higher-order calculus: selection functions, quantifiers,
//!   the induced conversions between them, and decidable checks (totality,
//!   attainment, realism, context independence) over finite context spaces.
//! - [`selections`]: the builtin zoo of agent descriptions (argmax over a
//!   partial order, coordinate argmax/argmin, fixpoint, non-fixpoint,
//!   sub-maximal, preimage preference, lexicographic combination).
//! - [`engine`]: general games, unilateral contexts, generalized Nash and
//!   selection equilibria, and exhaustive solving.
//! - [`compiler`]: lowering a selection-function game to a classical 0/1
//!   payoff game whose pure Nash equilibria are exactly the selection
//!   equilibria, plus a textbook best-response solver.
//! - [`gamedef`]: parser, validator and serializers for the `.hog` game
//!   definition format and for solve reports (table/CSV/JSON).

pub mod compiler;
pub mod core;
pub mod engine;
pub mod error;
pub mod gamedef;
pub mod hof;
pub mod selections;

pub use crate::core::{
    Context, FiniteSet, Interner, OutcomeValue, PartialOrder, Rational, StrategyProfile, Symbol,
};
pub use crate::error::{Error, Result};
pub use crate::hof::{Quantifier, SelectionFunction};
pub use crate::selections::SelectionSpec;
