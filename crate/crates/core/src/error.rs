use thiserror::Error;

use crate::term::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unguarded recursion: more than {limit} nested unfoldings of {var} without a prefix")]
    UnguardedRecursion { var: String, limit: usize },
    #[error("term is not closed: free variable {0}")]
    OpenTerm(String),
    #[error("state space exceeds the budget of {max_states} states")]
    IncompleteStateSpace { max_states: usize },
    #[error("alphabet of {size} actions exceeds the cap of {cap}")]
    AlphabetTooLarge { size: usize, cap: usize },
    #[error("action {0} is not fresh")]
    BadActionNotFresh(String),
    #[error("unknown law: {0}")]
    UnknownLaw(String),
    #[error("position {0} does not hold a refusal set")]
    InvalidPosition(usize),
    #[error("{0}")]
    Invalid(String),
}
