//! A laboratory for S/K combinator rewriting.
//!
//! Terms are immutable binary trees ([`term::Term`]) over the combinators `s`, `k` and free
//! variables, rewritten by `s[x][y][z] -> x[z][y[z]]` and `k[x][y] -> x`. On top of the
//! rewrite engine sit multiway exploration, causal event graphs, hash-consed DAG storage,
//! finite models, and a bracket-abstraction compiler.

pub mod encode;
pub mod causal;
pub mod compile;
pub mod dag;
pub mod enumerate;
pub mod error;
pub mod metrics;
pub mod models;
pub mod multiway;
pub mod notation;
pub mod par;
pub mod rewrite;
pub mod term;

pub use error::{Error, Result};
pub use notation::{parse, parse_auto, print, Notation};
pub use rewrite::{evolve, run, Limits, Ordering, Outcome, Redex, Strategy, Trace};
pub use term::{Atom, Position, Rule, Term};
