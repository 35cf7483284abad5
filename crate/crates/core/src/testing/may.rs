use std::collections::BTreeSet;

use crate::fttrace::{ft_member, ft_preorder, CheckOptions, Symbol, Trace, Verdict};
use crate::sos::StateSpace;
use crate::term::{Name, NameSet, Relation, Term};
use crate::{Budget, Error, Result};

use super::safety::safety_holds;

/// No reachable state of `P` has an `f`-transition.
pub fn is_fresh(f: &Name, p: &Term, budget: &Budget) -> Result<bool> {
    let mut space = StateSpace::new(*budget);
    let root = space.intern(p)?;
    let mut stack = vec![root];
    let mut seen = BTreeSet::from([root]);
    while let Some(s) = stack.pop() {
        for (a, t) in space.successors(s)?.to_vec() {
            if a.name() == Some(f) {
                return Ok(false);
            }
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    Ok(true)
}

/// A name not in `taken`, built by priming `base`.
pub fn primed(base: &Name, taken: &NameSet) -> Name {
    let mut s = format!("{base}'");
    while taken.contains(&Name::new(&s)) {
        s.push('\'');
    }
    Name::new(&s)
}

/// Bijectively renames `sort(P)` so that `reserve` is no longer used:
/// `reserve` goes to a primed copy, every other name to itself.
pub fn fresh_rename(p: &Term, reserve: &Name) -> Term {
    let sort = p.sort();
    if !sort.contains(reserve) {
        return p.clone();
    }
    let mut taken = sort.clone();
    taken.insert(reserve.clone());
    let target = primed(reserve, &taken);
    let rel: Relation =
        sort.iter().map(|a| (a.clone(), if a == reserve { target.clone() } else { a.clone() })).collect();
    Term::rename(rel, p.clone())
}

fn sum_of(names: impl IntoIterator<Item = Name>) -> Vec<Term> {
    names.into_iter().map(|a| Term::act(a.as_str(), Term::nil())).collect()
}

/// The test process `T_σ`: it may report `b` exactly against processes
/// having `σ⊤` as a partial failure trace.
pub fn build_test(sigma: &Trace, bad: &Name) -> Result<Term> {
    if sigma.names().contains(bad) {
        return Err(Error::BadActionNotFresh(bad.to_string()));
    }
    Ok(build(sigma.symbols(), bad))
}

fn build(s: &[Symbol], bad: &Name) -> Term {
    match s {
        [] => Term::timeout(Term::act(bad.as_str(), Term::nil())),
        [Symbol::Action(c), rest @ ..] => Term::choice(Term::tau(Term::nil()), Term::act(c.as_str(), build(rest, bad))),
        [Symbol::Refusal(x), Symbol::Action(d), rest @ ..] if x.contains(d) => {
            let mut inner = vec![Term::act(d.as_str(), build(rest, bad))];
            inner.extend(sum_of(x.iter().filter(|a| *a != d).cloned()));
            let mut outer = vec![Term::timeout(Term::sum(inner))];
            outer.extend(sum_of(x.iter().cloned()));
            Term::sum(outer)
        }
        [Symbol::Refusal(x), rest @ ..] => {
            let mut outer = vec![Term::timeout(build(rest, bad))];
            outer.extend(sum_of(x.iter().cloned()));
            Term::sum(outer)
        }
    }
}

/// The names a test and its subject interact on: everything but `b`.
pub fn interface(t: &Term, p: &Term, bad: &Name) -> NameSet {
    let mut b = t.sort();
    b.extend(p.sort());
    b.remove(bad);
    b
}

/// `τ_B(T ‖_B _)`, a context with hole `_`.
pub fn test_context(t: &Term, sync: &NameSet) -> Term {
    Term::hide(sync.clone(), Term::par(sync.clone(), t.clone(), Term::var("_")))
}

/// `τ_B(T ‖_B P)` with `B` the interface of `T` and `P` minus `b`.
pub fn compose_test(t: &Term, p: &Term, bad: &Name) -> Term {
    let b = interface(t, p, bad);
    Term::hide(b.clone(), Term::par(b, t.clone(), p.clone()))
}

/// The composed system can report `b`.
pub fn may_verdict(t: &Term, p: &Term, bad: &Name, budget: &Budget) -> Result<bool> {
    if !is_fresh(bad, p, budget)? {
        return Err(Error::BadActionNotFresh(bad.to_string()));
    }
    Ok(!safety_holds(&compose_test(t, p, bad), bad, budget)?.holds)
}

/// `P` may pass `T`: the composition has a partial failure trace containing `ω`.
pub fn may_pass(p: &Term, t: &Term, omega: &Name, budget: &Budget) -> Result<bool> {
    Ok(!safety_holds(&compose_test(t, p, omega), omega, budget)?.holds)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct MayVerdict {
    /// Verdict of the dual failure trace preorder; the witness, if any, is
    /// a trace of the left process that the right one lacks.
    pub verdict: Verdict,
    /// For a failure: the test built from the witness, passed only by the left process.
    pub test: Option<Term>,
}

/// `P ⊑_may Q`, decided as `fft(Q) ⊇ fft(P)`. A failing witness is turned
/// into a test and replayed against both processes.
pub fn may_preorder(p: &Term, q: &Term, omega: &Name, opts: &CheckOptions) -> Result<MayVerdict> {
    let verdict = ft_preorder(q, p, opts)?;
    let Some(w) = &verdict.witness else { return Ok(MayVerdict { verdict, test: None }) };
    let sigma = w.element.as_plain().cloned().ok_or_else(|| Error::Invalid("plain witness expected".into()))?;
    let t = build_test(&sigma, omega)?;
    let (pass_p, pass_q) = (may_pass(p, &t, omega, &opts.budget)?, may_pass(q, &t, omega, &opts.budget)?);
    if !pass_p || pass_q {
        return Err(Error::Invalid(format!("test for {sigma} did not separate the processes")));
    }
    Ok(MayVerdict { verdict, test: Some(t) })
}

/// `σ⊤ ∈ fft(P)` via the test: renames `b` away from `P` first.
pub fn member_by_test(p: &Term, sigma: &Trace, bad: &Name, budget: &Budget) -> Result<bool> {
    let p = fresh_rename(p, bad);
    let t = build_test(sigma, bad)?;
    may_verdict(&t, &p, bad, budget)
}

/// Both sides of the membership duality, for cross-checks.
pub fn check_duality(p: &Term, sigma: &Trace, bad: &Name, budget: &Budget) -> Result<(bool, bool)> {
    Ok((member_by_test(p, sigma, bad, budget)?, ft_member(&fresh_rename(p, bad), sigma, budget)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;

    fn test_of(s: &str) -> String {
        build_test(&s.parse().unwrap(), &Name::new("b")).unwrap().to_string()
    }

    #[test]
    fn test_processes() {
        assert_eq!(test_of("top"), "t.b.0");
        assert_eq!(test_of("{a} a"), "t.a.t.b.0 + a.0");
        assert_eq!(test_of("{a}"), "t.t.b.0 + a.0");
        assert_eq!(test_of("c"), "tau.0 + c.t.b.0");
        assert!(build_test(&"{b}".parse().unwrap(), &Name::new("b")).is_err());
    }

    #[test]
    fn freshness() {
        let b = Name::new("b");
        let p = parse_term("a.b").unwrap();
        assert!(!is_fresh(&b, &p, &Budget::default()).unwrap());
        let r = fresh_rename(&p, &b);
        assert!(is_fresh(&b, &r, &Budget::default()).unwrap());
        assert!(!r.sort().contains(&b));
        let q = parse_term("a.c").unwrap();
        assert_eq!(fresh_rename(&q, &b), q);
    }

    #[test]
    fn small_duality() {
        let b = Name::new("w");
        let budget = Budget::default();
        for (p, s) in [("0", "top"), ("0", "a"), ("a", "{a} a"), ("a + tau.c", "{a}"), ("t.c", "{c} c")] {
            let (by_test, direct) = check_duality(&parse_term(p).unwrap(), &s.parse().unwrap(), &b, &budget).unwrap();
            assert_eq!(by_test, direct, "{p} / {s}");
        }
    }

    #[test]
    fn may_pass_simple() {
        let w = Name::new("w");
        let t = parse_term("a.w").unwrap();
        assert!(may_pass(&parse_term("a").unwrap(), &t, &w, &Budget::default()).unwrap());
        assert!(!may_pass(&parse_term("b").unwrap(), &t, &w, &Budget::default()).unwrap());
    }
}
