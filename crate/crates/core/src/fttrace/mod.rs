//! Partial failure traces: membership, enumeration, refusal automata and
//! the (rooted) failure trace equivalences and preorders.

mod alphabet;
pub mod automaton;
mod equiv;
mod member;
mod nfa;
mod trace;

pub use alphabet::{Alphabet, Letter, MAX_NAMES};
pub use automaton::{Dfa, Goal, Projected, RootFlags, Side, TraceAutomaton};
pub use equiv::{
    compare_automata, elements_of, ft_enumerate, ft_equiv, ft_preorder, rft_equiv, rft_preorder, rooted_elements,
    trace_equiv, CheckOptions, Mode, Oracle, Verdict, Witness,
};
pub use member::{ft_member, rooted_member};
pub use nfa::{build_refusal_nfa, NfaState, RefusalAutomaton};
pub use trace::{col_closure, col_closure_traces, RootedElement, Symbol, Trace};

/// The action sequence of a trace.
pub fn trace_project(t: &Trace) -> Vec<crate::term::Name> {
    t.project()
}
