//! Trace-set level operators: decomposition-based parallel composition,
//! abstraction, relational renaming, `ini_Z` and the rooted equations.
//!
//! The operators are automata over component automata, so they apply both
//! to explicit [`TraceSet`]s and, exactly, to the refusal automata of terms.

mod decompose;
mod hide;
mod par;
mod rename;
mod rooted;
mod traceset;

pub use decompose::{is_valid, valid_decompositions, Decomposition, Decompositions};
pub use hide::{abstract_trace, augment, survives_abstraction, HideAutomaton, HideState};
pub use par::{ParAutomaton, ParState};
pub use rename::{inverse_image, rename_preimages, RenameAutomaton, RenameState};
pub use rooted::{ini_z, rfft_action, rfft_choice, rfft_hide, rfft_par, rfft_rename};
pub use traceset::{SetAutomaton, SetState, TraceSet};

use crate::term::{NameSet, Relation};
use crate::Result;

/// `col(F ‖_S G)` on plain traces, cut at the smaller depth.
pub fn set_par(f: &TraceSet, g: &TraceSet, sync: &NameSet) -> Result<TraceSet> {
    rfft_par(&f.plain(), &g.plain(), sync)
}

/// `F ‖_S G` without the collapse closure.
pub fn set_par_raw(f: &TraceSet, g: &TraceSet, sync: &NameSet) -> Result<TraceSet> {
    let depth = f.depth.min(g.depth);
    let aut = ParAutomaton::new(f.plain().automaton()?, g.plain().automaton()?, sync)?.without_collapse();
    TraceSet::from_automaton(aut, depth)
}

/// `{σ | ∃ρ ∈ F. τ_I(ρ) = σ ∪ I}`.
pub fn set_hide(f: &TraceSet, hidden: &NameSet) -> Result<TraceSet> {
    rfft_hide(&f.plain(), hidden)
}

/// `{σ | R⁻¹(σ) ∩ F ≠ ∅}`.
pub fn set_rename(f: &TraceSet, rel: &Relation) -> Result<TraceSet> {
    rfft_rename(&f.plain(), rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fttrace::{compare_automata, Alphabet, Goal, RefusalAutomaton};
    use crate::term::{names, parse_term, Term};
    use crate::Budget;

    fn nfa(p: &Term, s: &Alphabet) -> RefusalAutomaton {
        RefusalAutomaton::rooted(p, s.clone(), &Budget::default()).unwrap()
    }

    fn check_par(p: &str, q: &str, sync: &[&str]) {
        let (p, q) = (parse_term(p).unwrap(), parse_term(q).unwrap());
        let sync = names(sync.iter().copied());
        let s = Alphabet::new(&names(["a", "b", "c"])).unwrap();
        let whole = Term::par(sync.clone(), p.clone(), q.clone());
        let composed = ParAutomaton::new(nfa(&p, &s), nfa(&q, &s), &sync).unwrap();
        let w = compare_automata(composed, nfa(&whole, &s), Goal::Equal, Some(4), true).unwrap();
        assert!(w.is_none(), "{p} |{sync:?}| {q}: {w:?}");
    }

    #[test]
    fn par_matches_terms() {
        check_par("b + t.a", "t.(b + t.a)", &["a", "b"]);
        check_par("t.a", "t.b", &[]);
        check_par("t.(tau + b)", "t.(tau + b)", &["b"]);
        check_par("a + tau.b", "t.c", &["c"]);
        check_par("a.t.b + t.c", "a + t.(b + c)", &["a"]);
        check_par("tau.a", "t.b", &[]);
    }

    fn check_hide(p: &str, hidden: &[&str]) {
        let p = parse_term(p).unwrap();
        let hidden = names(hidden.iter().copied());
        let s = Alphabet::new(&names(["a", "b", "c"])).unwrap();
        let whole = Term::hide(hidden.clone(), p.clone());
        let w = compare_automata(HideAutomaton::new(nfa(&p, &s), &hidden), nfa(&whole, &s), Goal::Equal, Some(4), true)
            .unwrap();
        assert!(w.is_none(), "hide {hidden:?} in {p}: {w:?}");
    }

    #[test]
    fn hide_matches_terms() {
        check_hide("a.b", &["a"]);
        check_hide("t.c.a + b", &["c"]);
        check_hide("a + t.(c.b + t.a)", &["c"]);
        check_hide("c + t.b", &["c"]);
        check_hide("t.(c.a + b)", &["c"]);
        check_hide("b + t.c.c.a", &["c"]);
        check_hide("b + t.(c + t.a)", &["c"]);
        check_hide("b + t.c.t.a", &["c", "a"]);
        check_hide("tau.c + t.a", &["c"]);
    }

    fn check_rename(p: &str, rel: &[(&str, &str)]) {
        let p = parse_term(p).unwrap();
        let rel: Relation = rel.iter().map(|(a, b)| (crate::term::Name::new(a), crate::term::Name::new(b))).collect();
        let s = Alphabet::new(&names(["a", "b", "c"])).unwrap();
        let whole = Term::rename(rel.clone(), p.clone());
        let w = compare_automata(RenameAutomaton::new(nfa(&p, &s), &rel), nfa(&whole, &s), Goal::Equal, Some(4), true)
            .unwrap();
        assert!(w.is_none(), "rename in {p}: {w:?}");
    }

    #[test]
    fn rename_matches_terms() {
        check_rename("t.a", &[("a", "b"), ("a", "c")]);
        check_rename("a + t.b", &[("a", "b"), ("b", "a")]);
        check_rename("a.c + t.b", &[("a", "a"), ("c", "b")]);
    }
}
