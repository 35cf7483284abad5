use std::collections::BTreeSet;

use crate::fttrace::{Alphabet, RootedElement, Symbol, Trace};
use crate::term::{Action, NameSet, Relation};
use crate::{Error, Result};

use super::hide::HideAutomaton;
use super::par::ParAutomaton;
use super::rename::RenameAutomaton;
use super::traceset::TraceSet;

/// Least superset of `F ∪ {⊤}` closed under prefixing refusals disjoint
/// from `Z`, cut at the depth of `F`.
pub fn ini_z(f: &TraceSet, z: &NameSet) -> Result<TraceSet> {
    let alpha = Alphabet::new(&f.alphabet)?;
    let zmask = alpha.mask_of(z);
    let prefixes: Vec<Symbol> =
        alpha.refusals().iter().filter(|&&m| m & zmask == 0).map(|&m| Symbol::Refusal(alpha.set_of(m))).collect();
    let mut out = f.clone();
    out.elements.insert(RootedElement::Plain(Trace::empty()));
    let mut work: Vec<Trace> = out.traces().cloned().collect();
    while let Some(t) = work.pop() {
        if t.len() >= out.depth {
            continue;
        }
        for x in &prefixes {
            let mut v = vec![x.clone()];
            v.extend(t.symbols().iter().cloned());
            let next = Trace::new(v);
            if out.elements.insert(RootedElement::Plain(next.clone())) {
                work.push(next);
            }
        }
    }
    Ok(out)
}

fn prepend(s: Symbol, t: &Trace) -> Trace {
    let mut v = vec![s];
    v.extend(t.symbols().iter().cloned());
    Trace::new(v)
}

fn plain_set(base: &TraceSet, traces: impl IntoIterator<Item = Trace>) -> TraceSet {
    TraceSet::from_traces(base.alphabet.clone(), base.depth, traces.into_iter().filter(|t| t.len() <= base.depth))
}

/// `rfft(α.P)` from `rfft(P)`, for a visible action, `τ` or `t`.
pub fn rfft_action(alpha: &Action, p: &TraceSet) -> Result<TraceSet> {
    let k = p.depth;
    match alpha {
        Action::Visible(a) => {
            if !p.alphabet.contains(a) {
                return Err(Error::Invalid(format!("action {a} outside the alphabet")));
            }
            let f = plain_set(p, p.traces().map(|s| prepend(Symbol::Action(a.clone()), s)));
            let mut out = ini_z(&f, &[a.clone()].into_iter().collect())?;
            out.elements.insert(RootedElement::Stable);
            Ok(out)
        }
        Action::Tau => {
            let mut out = p.plain();
            if p.contains_trace(&Trace::new(vec![Symbol::Refusal(NameSet::new())])) {
                out.elements.insert(RootedElement::PostStable);
            }
            Ok(out)
        }
        Action::Timeout => {
            let mut base = Vec::new();
            for t in p.traces() {
                match t.symbols().first() {
                    Some(Symbol::Refusal(_)) => base.push(t.clone()),
                    Some(Symbol::Action(a)) => {
                        // X a σ for every X containing a
                        let alpha = Alphabet::new(&p.alphabet)?;
                        let bit = 1u64 << alpha.index_of(a).expect("trace within alphabet");
                        for &m in alpha.refusals().iter().filter(|&&m| m & bit != 0) {
                            base.push(prepend(Symbol::Refusal(alpha.set_of(m)), t));
                        }
                    }
                    None => {}
                }
            }
            let mut out = ini_z(&plain_set(p, base), &NameSet::new())?;
            out.elements.insert(RootedElement::Stable);
            for t in p.traces() {
                if let Some((Symbol::Refusal(x), rest)) = t.symbols().split_first() {
                    if t.len() <= k {
                        out.elements.insert(RootedElement::TimeoutPrefixed(x.clone(), Trace::new(rest.to_vec())));
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `rfft(P + Q)` from `rfft(P)` and `rfft(Q)`, case by case on stability,
/// with `H` and `K` exactly as in the stable/stable case of the equation.
pub fn rfft_choice(p: &TraceSet, q: &TraceSet) -> Result<TraceSet> {
    if p.alphabet != q.alphabet {
        return Err(Error::Invalid("choice operands must share an alphabet".into()));
    }
    let depth = p.depth.min(q.depth);
    let (p, q) = (p.truncate(depth), q.truncate(depth));
    let starts_with_action =
        |e: &RootedElement| matches!(e.as_plain().and_then(|t| t.symbols().first()), Some(Symbol::Action(_)));
    let elements: BTreeSet<RootedElement> = match (p.is_stable(), q.is_stable()) {
        (false, false) => p.elements.union(&q.elements).cloned().collect(),
        (true, false) => p.elements.iter().filter(|e| starts_with_action(e)).chain(&q.elements).cloned().collect(),
        (false, true) => {
            p.elements.iter().chain(q.elements.iter().filter(|e| starts_with_action(e))).cloned().collect()
        }
        (true, true) => {
            let init: NameSet = p.initial_actions().union(&q.initial_actions()).cloned().collect();
            let both = || p.elements.iter().chain(&q.elements);
            let mut h = Vec::new();
            let mut k = Vec::new();
            for e in both() {
                match e {
                    RootedElement::Plain(t) => match t.symbols() {
                        [Symbol::Action(_), ..] => h.push(t.clone()),
                        [Symbol::Refusal(x), Symbol::Action(a), ..] if x.contains(a) && x.is_disjoint(&init) => {
                            h.push(t.clone())
                        }
                        _ => {}
                    },
                    RootedElement::TimeoutPrefixed(x, rest) if x.is_disjoint(&init) => {
                        h.push(prepend(Symbol::Refusal(x.clone()), rest));
                        k.push(e.clone());
                    }
                    _ => {}
                }
            }
            let mut out = ini_z(&plain_set(&p, h), &init)?.elements;
            out.insert(RootedElement::Stable);
            out.extend(k);
            out
        }
    };
    Ok(TraceSet::from_elements(p.alphabet.clone(), depth, elements))
}

/// `col(F ‖_S G)` with rooted elements, computed on the trie automata.
/// Exact only up to the input depth: collapsed pre-images longer than the
/// inputs are not seen.
pub fn rfft_par(f: &TraceSet, g: &TraceSet, sync: &NameSet) -> Result<TraceSet> {
    let depth = f.depth.min(g.depth);
    TraceSet::from_automaton(ParAutomaton::new(f.automaton()?, g.automaton()?, sync)?, depth)
}

/// `rfft(τ_I(P))` from an explicit `rfft(P)`; pre-images longer than the
/// input depth are not seen.
pub fn rfft_hide(f: &TraceSet, hidden: &NameSet) -> Result<TraceSet> {
    TraceSet::from_automaton(HideAutomaton::new(f.automaton()?, hidden), f.depth)
}

/// `rfft(R(P))` from `rfft(P)`; exact at the input depth.
pub fn rfft_rename(f: &TraceSet, rel: &Relation) -> Result<TraceSet> {
    TraceSet::from_automaton(RenameAutomaton::new(f.automaton()?, rel), f.depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fttrace::rooted_elements;
    use crate::term::{names, parse_term};
    use crate::Budget;

    fn rooted(p: &str, sigma: &NameSet, k: usize) -> TraceSet {
        let e = rooted_elements(&parse_term(p).unwrap(), k, sigma, &Budget::default()).unwrap();
        TraceSet::from_elements(sigma.clone(), k, e)
    }

    #[test]
    fn ini_z_small() {
        let f = TraceSet::from_traces(names(["a", "b"]), 2, ["a".parse().unwrap()]);
        let got = ini_z(&f, &names(["a"])).unwrap();
        let want: BTreeSet<RootedElement> =
            ["top", "a", "{} top", "{b} top", "{} a", "{b} a", "{} {} top", "{} {b} top", "{b} {} top", "{b} {b} top"]
                .iter()
                .map(|s| s.parse().unwrap())
                .collect();
        assert_eq!(got.elements, want);
    }

    #[test]
    fn action_equations() {
        let s = names(["a", "b"]);
        for k in 1..=3 {
            let b = rooted("b", &s, k);
            assert_eq!(rfft_action(&Action::Timeout, &b).unwrap(), rooted("t.b", &s, k));
            assert_eq!(rfft_action(&Action::Tau, &b).unwrap(), rooted("tau.b", &s, k));
            assert_eq!(rfft_action(&Action::visible("a"), &b).unwrap(), rooted("a.b", &s, k));
        }
    }

    #[test]
    fn choice_equation() {
        let s = names(["a", "b"]);
        let got = rfft_choice(&rooted("a", &s, 3), &rooted("t.b", &s, 3)).unwrap();
        assert_eq!(got, rooted("a + t.b", &s, 3));
    }
}
