//! Orthologic: sequent calculi, cut elimination, focused proof search and
//! finite ortholattice models.

pub mod bench;
pub mod build;
pub mod formula;
pub mod models;
pub mod ol;
pub mod olf;
pub mod olf0;
pub mod proof;
pub mod search;

pub use build::{with_big_stack, TransformError};
pub use formula::{parse, Formula, Polarity, VarId};
pub use proof::{check, Calculus, Proof, Rule, SeqKind, Sequent};
