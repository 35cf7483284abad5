use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::term::{NameSet, Term};
use crate::{Budget, Error, Result};

use super::alphabet::{Alphabet, MAX_NAMES};
use super::automaton::{compare, enumerate, Dfa, Goal, Projected, Side, TraceAutomaton};
use super::member::{rooted_member, rooted_member_in};
use super::nfa::RefusalAutomaton;
use super::trace::{RootedElement, Trace};

/// Bounded comparisons look at traces of at most `k` symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bounded(usize),
    Exact,
}

impl Mode {
    pub fn depth(self) -> Option<usize> {
        match self {
            Mode::Bounded(k) => Some(k),
            Mode::Exact => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub mode: Mode,
    /// Working alphabet; `sort(P) ∪ sort(Q)` when absent.
    pub alphabet: Option<NameSet>,
    pub budget: Budget,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { mode: Mode::Bounded(5), alphabet: None, budget: Budget::default() }
    }
}

impl CheckOptions {
    pub fn bounded(depth: usize) -> Self {
        CheckOptions { mode: Mode::Bounded(depth), ..Self::default() }
    }

    pub fn exact() -> Self {
        CheckOptions { mode: Mode::Exact, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub element: RootedElement,
    /// The process whose set contains the element.
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub mode: Mode,
    pub alphabet: Vec<String>,
    pub witness: Option<Witness>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.witness, self.mode) {
            (None, Mode::Bounded(k)) => write!(f, "holds up to depth {k}"),
            (None, Mode::Exact) => f.write_str("holds"),
            (Some(w), _) => {
                let side = if w.side == Side::Left { "left" } else { "right" };
                write!(f, "fails, witness: {} (only {side})", w.element)
            }
        }
    }
}

pub(crate) fn working_alphabet(p: &Term, q: Option<&Term>, opts: &CheckOptions) -> Result<Alphabet> {
    let names = match &opts.alphabet {
        Some(s) => s.clone(),
        None => {
            let mut s = p.sort();
            if let Some(q) = q {
                s.extend(q.sort());
            }
            s
        }
    };
    let cap = match opts.mode {
        Mode::Exact => opts.budget.max_alphabet,
        Mode::Bounded(_) => MAX_NAMES.min(opts.budget.max_alphabet.max(10)),
    };
    if names.len() > cap {
        return Err(Error::AlphabetTooLarge { size: names.len(), cap });
    }
    Alphabet::new(&names)
}

/// All `σ` with `|σ| ≤ max_len` over Σ such that `σ⊤ ∈ fft(P)`.
pub fn ft_enumerate(p: &Term, max_len: usize, sigma: &NameSet, budget: &Budget) -> Result<BTreeSet<Trace>> {
    let alpha = Alphabet::new(sigma)?;
    let mut dfa = Dfa::new(RefusalAutomaton::new(p, alpha, budget)?);
    let words = enumerate(&mut dfa, max_len, false)?;
    let alpha = dfa.automaton().alphabet().clone();
    Ok(words.iter().map(|w| alpha.trace(w)).collect())
}

/// `rfft(P)` restricted to Σ and to elements of at most `max_len` symbols.
pub fn rooted_elements(p: &Term, max_len: usize, sigma: &NameSet, budget: &Budget) -> Result<BTreeSet<RootedElement>> {
    let alpha = Alphabet::new(sigma)?;
    elements_of(RefusalAutomaton::rooted(p, alpha, budget)?, max_len)
}

/// Every element with at most `max_len` symbols accepted by a rooted automaton.
pub fn elements_of<A: TraceAutomaton>(aut: A, max_len: usize) -> Result<BTreeSet<RootedElement>> {
    let mut dfa = Dfa::new(aut);
    let flags = dfa.automaton().root_flags()?;
    let words = enumerate(&mut dfa, max_len, true)?;
    let alpha = dfa.automaton().alphabet().clone();
    let mut out: BTreeSet<RootedElement> = words.iter().map(|w| alpha.element(w)).collect();
    if flags.stable {
        out.insert(RootedElement::Stable);
    }
    if flags.post_stable {
        out.insert(RootedElement::PostStable);
    }
    Ok(out)
}

/// Compares two (rooted) automata and returns the least separating element.
pub fn compare_automata<A: TraceAutomaton, B: TraceAutomaton>(
    left: A,
    right: B,
    goal: Goal,
    depth: Option<usize>,
    rooted: bool,
) -> Result<Option<Witness>> {
    let mut l = Dfa::new(left);
    let mut r = Dfa::new(right);
    if rooted {
        let (fl, fr) = (l.automaton().root_flags()?, r.automaton().root_flags()?);
        for (a, b, e) in
            [(fl.stable, fr.stable, RootedElement::Stable), (fl.post_stable, fr.post_stable, RootedElement::PostStable)]
        {
            let bad = match goal {
                Goal::Equal => a != b,
                Goal::Includes => b && !a,
            };
            if bad {
                return Ok(Some(Witness { element: e, side: if a { Side::Left } else { Side::Right } }));
            }
        }
    }
    let alpha = l.automaton().alphabet().clone();
    Ok(compare(&mut l, &mut r, goal, depth, rooted)?.map(|(w, side)| Witness { element: alpha.element(&w), side }))
}

fn check(p: &Term, q: &Term, opts: &CheckOptions, goal: Goal, rooted: bool) -> Result<Verdict> {
    let alpha = working_alphabet(p, Some(q), opts)?;
    let build = |t: &Term| {
        if rooted {
            RefusalAutomaton::rooted(t, alpha.clone(), &opts.budget)
        } else {
            RefusalAutomaton::new(t, alpha.clone(), &opts.budget)
        }
    };
    let witness = compare_automata(build(p)?, build(q)?, goal, opts.mode.depth(), rooted)?;
    if let Some(w) = &witness {
        validate(p, q, w, &opts.budget)?;
    }
    Ok(Verdict {
        holds: witness.is_none(),
        mode: opts.mode,
        alphabet: alpha.names().iter().map(|n| n.to_string()).collect(),
        witness,
    })
}

/// Re-checks a witness by direct membership on both processes.
fn validate(p: &Term, q: &Term, w: &Witness, budget: &Budget) -> Result<()> {
    let (in_p, in_q) = (rooted_member(p, &w.element, budget)?, rooted_member(q, &w.element, budget)?);
    let ok = match w.side {
        Side::Left => in_p && !in_q,
        Side::Right => in_q && !in_p,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("witness {} failed re-validation", w.element)))
    }
}

/// `fft(P) = fft(Q)`.
pub fn ft_equiv(p: &Term, q: &Term, opts: &CheckOptions) -> Result<Verdict> {
    check(p, q, opts, Goal::Equal, false)
}

/// `rfft(P) = rfft(Q)`.
pub fn rft_equiv(p: &Term, q: &Term, opts: &CheckOptions) -> Result<Verdict> {
    check(p, q, opts, Goal::Equal, true)
}

/// `P ⊑ Q` iff `fft(P) ⊇ fft(Q)`.
pub fn ft_preorder(p: &Term, q: &Term, opts: &CheckOptions) -> Result<Verdict> {
    check(p, q, opts, Goal::Includes, false)
}

/// `P ⊑ Q` iff `rfft(P) ⊇ rfft(Q)`.
pub fn rft_preorder(p: &Term, q: &Term, opts: &CheckOptions) -> Result<Verdict> {
    check(p, q, opts, Goal::Includes, true)
}

/// Equality of the projected (refusal-free) trace sets.
pub fn trace_equiv(p: &Term, q: &Term, opts: &CheckOptions) -> Result<Verdict> {
    let alpha = working_alphabet(p, Some(q), opts)?;
    let l = Projected(RefusalAutomaton::new(p, alpha.clone(), &opts.budget)?);
    let r = Projected(RefusalAutomaton::new(q, alpha.clone(), &opts.budget)?);
    let witness = compare_automata(l, r, Goal::Equal, opts.mode.depth(), false)?;
    if let Some(w) = &witness {
        let (in_p, in_q) = (trace_member(p, &w.element, opts)?, trace_member(q, &w.element, opts)?);
        if in_p == in_q || in_p != (w.side == Side::Left) {
            return Err(Error::Invalid(format!("witness {} failed re-validation", w.element)));
        }
    }
    Ok(Verdict {
        holds: witness.is_none(),
        mode: opts.mode,
        alphabet: alpha.names().iter().map(|n| n.to_string()).collect(),
        witness,
    })
}

fn trace_member(p: &Term, e: &RootedElement, opts: &CheckOptions) -> Result<bool> {
    let Some(t) = e.as_plain() else { return Ok(false) };
    let alpha = working_alphabet(p, None, &CheckOptions { alphabet: Some(t.names()), ..opts.clone() })?;
    let mut dfa = Dfa::new(Projected(RefusalAutomaton::new(p, alpha, &opts.budget)?));
    let word = dfa.automaton().alphabet().word(t).ok_or_else(|| Error::Invalid("trace outside alphabet".into()))?;
    dfa.accepts(&word)
}

/// Membership of many elements against one explored process.
pub struct Oracle {
    space: crate::sos::StateSpace,
    root: crate::sos::StateId,
}

impl Oracle {
    pub fn new(p: &Term, budget: &Budget) -> Result<Self> {
        let mut space = crate::sos::StateSpace::new(*budget);
        let root = space.intern(p)?;
        Ok(Oracle { space, root })
    }

    pub fn contains(&mut self, e: &RootedElement) -> Result<bool> {
        rooted_member_in(&mut self.space, self.root, e)
    }

    pub fn contains_trace(&mut self, t: &Trace) -> Result<bool> {
        super::member::member_in(&mut self.space, self.root, t.symbols())
    }
}
