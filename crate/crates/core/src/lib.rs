//! A workbench for CCSP extended with a time-out action `t`.
//!
//! Terms are parsed from a small textual syntax, turned into labelled
//! transition systems by structural operational semantics, and compared
//! under strong bisimilarity, trace and (rooted) partial failure trace
//! semantics. The denotational operators on failure trace sets, sampled
//! law checking and may-testing constructions live in their own modules.

pub mod cli;
pub mod denote;
mod error;
pub mod fttrace;
pub mod laws;
pub mod sos;
pub mod term;
pub mod testing;

pub use error::{Error, Result};

/// Resource limits shared by every exploring operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of distinct states an exploration may create.
    pub max_states: usize,
    /// Maximum nesting of recursion unfoldings without passing a prefix.
    pub max_unfoldings: usize,
    /// Maximum size of the working alphabet for refusal automata.
    pub max_alphabet: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 10_000, max_unfoldings: 1000, max_alphabet: 6 }
    }
}

impl Budget {
    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }
}
