use std::collections::HashSet;

use crate::sos::{StateId, StateSpace};
use crate::term::{Action, NameSet, Term};
use crate::{Budget, Result};

use super::trace::{RootedElement, Symbol, Trace};

/// Rule-based derivability of `σ⊤` from state `root`, as forward reachability
/// over goals `(state, position)`.
pub(crate) fn member_in(space: &mut StateSpace, root: StateId, sigma: &[Symbol]) -> Result<bool> {
    let n = sigma.len();
    let mut seen: HashSet<(StateId, usize)> = HashSet::new();
    let mut work = vec![(root, 0usize)];
    seen.insert((root, 0));
    while let Some((x, i)) = work.pop() {
        if i == n {
            return Ok(true);
        }
        let succ = space.successors(x)?.to_vec();
        let stable = succ.iter().all(|(a, _)| *a != Action::Tau);
        let mut next = Vec::new();
        for (a, y) in &succ {
            if *a == Action::Tau {
                next.push((*y, i));
            }
        }
        match &sigma[i] {
            Symbol::Action(name) => {
                for (a, y) in &succ {
                    if a.name() == Some(name) {
                        next.push((*y, i + 1));
                    }
                }
            }
            Symbol::Refusal(x_set) => {
                let refusable = stable && !succ.iter().any(|(a, _)| a.name().is_some_and(|m| x_set.contains(m)));
                if refusable {
                    next.push((x, i + 1));
                    for (a, y) in &succ {
                        if *a == Action::Timeout {
                            next.push((*y, i));
                            if let Some(Symbol::Action(b)) = sigma.get(i + 1) {
                                if x_set.contains(b) {
                                    next.push((*y, i + 1));
                                }
                            }
                        }
                    }
                }
            }
        }
        for g in next {
            if seen.insert(g) {
                work.push(g);
            }
        }
    }
    Ok(false)
}

/// `σ⊤ ∈ fft(P)`.
pub fn ft_member(p: &Term, sigma: &Trace, budget: &Budget) -> Result<bool> {
    let mut space = StateSpace::new(*budget);
    let root = space.intern(p)?;
    member_in(&mut space, root, sigma.symbols())
}

pub(crate) fn rooted_member_in(space: &mut StateSpace, root: StateId, e: &RootedElement) -> Result<bool> {
    match e {
        RootedElement::Plain(t) => member_in(space, root, t.symbols()),
        RootedElement::Stable => space.is_stable(root),
        RootedElement::PostStable => {
            Ok(!space.is_stable(root)? && member_in(space, root, &[Symbol::Refusal(NameSet::new())])?)
        }
        RootedElement::TimeoutPrefixed(x, rest) => {
            let Some(init) = space.initials(root)? else { return Ok(false) };
            if !init.is_disjoint(x) {
                return Ok(false);
            }
            let mut word = vec![Symbol::Refusal(x.clone())];
            word.extend(rest.symbols().iter().cloned());
            let targets: Vec<StateId> =
                space.successors(root)?.iter().filter(|(a, _)| *a == Action::Timeout).map(|(_, y)| *y).collect();
            for y in targets {
                if member_in(space, y, &word)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Membership in the rooted set `rfft(P)`.
pub fn rooted_member(p: &Term, e: &RootedElement, budget: &Budget) -> Result<bool> {
    let mut space = StateSpace::new(*budget);
    let root = space.intern(p)?;
    rooted_member_in(&mut space, root, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn member(p: &str, s: &str) -> bool {
        ft_member(&parse_term(p).unwrap(), &s.parse().unwrap(), &Budget::default()).unwrap()
    }

    fn rooted(p: &str, s: &str) -> bool {
        rooted_member(&parse_term(p).unwrap(), &s.parse().unwrap(), &Budget::default()).unwrap()
    }

    #[test]
    fn refusal_after_internal_choice() {
        assert!(member("a + tau.b", "{a} top"));
        assert!(!member("a + b", "{a} top"));
        assert!(member("a + b", "{} a top"));
        assert!(!member("a + tau.b", "{} a top"));
    }

    #[test]
    fn trace_equal_pair_witness() {
        let left = "a.(b + c.d) + a.(f + c.e)";
        let right = "a.(b + c.e) + a.(f + c.d)";
        assert!(member(left, "a {f} c d"));
        assert!(!member(right, "a {f} c d"));
    }

    #[test]
    fn timeout_rules() {
        assert!(member("t.b", "{a} b"));
        assert!(member("t.b", "{a,b} b"));
        assert!(!member("t.b", "{a} a"));
        assert!(!member("t.b", "{} b b"));
        assert!(member("tau.0", "{a}"));
        // t from an unstable state never fires
        assert!(!member("tau.0 + t.b", "{} b"));
    }

    #[test]
    fn rooted_tags() {
        assert!(rooted("t.t.b", "t {a,b} b"));
        assert!(!rooted("t.b", "t {a,b} b"));
        assert!(rooted("tau.b", "post-st"));
        assert!(!rooted("b", "post-st"));
        assert!(rooted("0", "st"));
        assert!(!rooted("tau.0", "st"));
    }
}
