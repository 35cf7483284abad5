use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::fttrace::{ft_member, Symbol, Trace};
use crate::sos::{StateId, StateSpace};
use crate::term::{Action, Name, NameSet, Term};
use crate::{Budget, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SafetyVerdict {
    pub holds: bool,
    /// A partial failure trace ending in the bad action, when violated.
    pub witness: Option<Trace>,
}

impl SafetyVerdict {
    fn holds() -> Self {
        SafetyVerdict { holds: true, witness: None }
    }

    fn violated(witness: Trace) -> Self {
        SafetyVerdict { holds: false, witness: Some(witness) }
    }
}

impl std::fmt::Display for SafetyVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.witness {
            None => f.write_str("holds"),
            Some(w) => write!(f, "violated, witness: {w}"),
        }
    }
}

/// Search node: a state plus the stable source of a time-out whose
/// refusal has not been placed yet.
type Node = (StateId, Option<StateId>);

/// `P ⊨ safety(b)`: no partial failure trace of `P` contains `b`.
///
/// Decided by reachability. A time-out is usable only from a stable state
/// `x`, and leaves a refusal pending until either a stable state is reached
/// (refuse `∅` there) or a visible action `a ∉ I(x)` is taken (refuse `{a}`
/// before the time-out). Every path of this shape spells a partial failure
/// trace, and every partial failure trace is spelled by one.
pub fn safety_holds(p: &Term, bad: &Name, budget: &Budget) -> Result<SafetyVerdict> {
    let mut space = StateSpace::new(*budget);
    let root = space.intern(p)?;
    let mut parent: HashMap<Node, (Node, Vec<Symbol>)> = HashMap::new();
    let start: Node = (root, None);
    let mut queue = VecDeque::from([start]);
    parent.insert(start, (start, Vec::new()));
    while let Some(node) = queue.pop_front() {
        let (s, pending) = node;
        let stable = space.is_stable(s)?;
        let pending_init = match pending {
            Some(x) => Some(space.initials(x)?.unwrap_or_default()),
            None => None,
        };
        let mut next: Vec<(Node, Vec<Symbol>, bool)> = Vec::new();
        if pending.is_some() && stable {
            // placing ∅ here subsumes every other move
            next.push(((s, None), vec![Symbol::Refusal(NameSet::new())], false));
        }
        let moves = if pending.is_some() && stable { Vec::new() } else { space.successors(s)?.to_vec() };
        for (a, t) in moves {
            match a {
                Action::Tau => next.push(((t, pending), Vec::new(), false)),
                Action::Timeout => {
                    if stable && pending.is_none() {
                        next.push(((t, Some(s)), Vec::new(), false));
                    }
                }
                Action::Visible(n) => {
                    let syms = match &pending_init {
                        None => vec![Symbol::Action(n.clone())],
                        Some(init) if !init.contains(&n) => {
                            vec![Symbol::Refusal([n.clone()].into_iter().collect()), Symbol::Action(n.clone())]
                        }
                        Some(_) => continue,
                    };
                    next.push(((t, None), syms, n == *bad));
                }
            }
        }
        for (succ, syms, is_bad) in next {
            if is_bad {
                let mut out = syms;
                let mut cur = node;
                while cur != start {
                    let (prev, s) = &parent[&cur];
                    out.splice(0..0, s.iter().cloned());
                    cur = *prev;
                }
                return Ok(SafetyVerdict::violated(Trace::new(out)));
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(succ) {
                e.insert((node, syms));
                queue.push_back(succ);
            }
        }
    }
    Ok(SafetyVerdict::holds())
}

/// `fft(P) ∩ B = ∅` for a finite set `B` of bad traces; the witness is the
/// first member of `B` found in `fft(P)`.
pub fn safety_general<'a>(
    p: &Term,
    bad: impl IntoIterator<Item = &'a Trace>,
    budget: &Budget,
) -> Result<SafetyVerdict> {
    for sigma in bad {
        if ft_member(p, sigma, budget)? {
            return Ok(SafetyVerdict::violated(sigma.clone()));
        }
    }
    Ok(SafetyVerdict::holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn check(p: &str, b: &str) -> SafetyVerdict {
        let p = parse_term(p).unwrap();
        let v = safety_holds(&p, &Name::new(b), &Budget::default()).unwrap();
        if let Some(w) = &v.witness {
            assert!(ft_member(&p, w, &Budget::default()).unwrap(), "{w}");
        }
        v
    }

    #[test]
    fn small_cases() {
        assert_eq!(check("t.b", "b").witness.unwrap().to_string(), "{} b top");
        assert!(check("tau + t.b", "b").holds);
        assert!(check("a", "b").holds);
        assert_eq!(check("a.b", "b").witness.unwrap().to_string(), "a b top");
    }

    #[test]
    fn pending_refusal_needs_stability_or_a_fresh_action() {
        // after the time-out only an unstable state offers b, and b is initial at the source
        assert!(check("b + t.(b + tau)", "b").witness.unwrap().to_string() == "b top");
        assert!(check("a + t.(b + tau)", "b").witness.unwrap().to_string() == "{b} b top");
        assert!(check("a.c + t.(a.b + tau)", "b").holds);
        assert_eq!(check("c + t.(a.b + tau)", "b").witness.unwrap().to_string(), "{a} a b top");
    }
}
