#![allow(dead_code)]

use std::collections::HashSet;

use ccspt::fttrace::{Symbol, Trace};
use ccspt::laws::Sampler;
use ccspt::sos::outgoing;
use ccspt::term::{Action, Name, NameSet, Term};
use rand::Rng;

/// Closed time-guarded term over the given names, at most `ops` operators.
pub fn term(seed: u64, names: &[&str], ops: usize) -> Term {
    let mut s = Sampler::with_names(seed, names);
    s.max_ops = ops;
    s.term()
}

/// Like [`term`] but only prefixes and choices: small, finite and fast.
pub fn plain_term(seed: u64, names: &[&str], ops: usize) -> Term {
    let mut s = Sampler::with_names(seed, names);
    s.max_ops = ops;
    s.rich = false;
    s.term()
}

pub fn subsets(names: &[&str]) -> Vec<NameSet> {
    (0..1u32 << names.len())
        .map(|m| names.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, n)| Name::new(n)).collect())
        .collect()
}

/// Every symbol over `names`: one action each plus all refusal sets.
pub fn symbols(names: &[&str]) -> Vec<Symbol> {
    let mut out: Vec<Symbol> = names.iter().map(|n| Symbol::action(n)).collect();
    out.extend(subsets(names).into_iter().map(Symbol::Refusal));
    out
}

/// All traces over `names` with at most `len` symbols.
pub fn all_traces(names: &[&str], len: usize) -> Vec<Trace> {
    let syms = symbols(names);
    let mut out = vec![Trace::empty()];
    let mut layer = vec![Vec::<Symbol>::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for s in &syms {
                let mut v = w.clone();
                v.push(s.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Trace::new));
        layer = next;
    }
    out
}

pub fn random_trace(rng: &mut impl Rng, names: &[&str], max_len: usize) -> Trace {
    let syms = symbols(names);
    let n = rng.gen_range(0..=max_len);
    Trace::new((0..n).map(|_| syms[rng.gen_range(0..syms.len())].clone()).collect())
}

/// Independent membership oracle: top-down evaluation of the six
/// derivation rules directly on terms. Cycles through silent bridges are
/// cut on the current path; only positive results are cached.
pub struct RuleOracle {
    proven: HashSet<(Term, usize)>,
}

impl RuleOracle {
    pub fn new() -> Self {
        RuleOracle { proven: HashSet::new() }
    }

    pub fn member(p: &Term, sigma: &Trace) -> bool {
        let mut o = RuleOracle::new();
        let mut path = HashSet::new();
        o.derive(p, sigma.symbols(), 0, &mut path)
    }

    fn derive(&mut self, p: &Term, s: &[Symbol], i: usize, path: &mut HashSet<(Term, usize)>) -> bool {
        // rule 1
        if i == s.len() {
            return true;
        }
        let key = (p.clone(), i);
        if self.proven.contains(&key) {
            return true;
        }
        if !path.insert(key.clone()) {
            return false;
        }
        let moves = outgoing(p).expect("finite branching");
        let stable = moves.iter().all(|(a, _)| *a != Action::Tau);
        let initials: NameSet = moves.iter().filter_map(|(a, _)| a.name().cloned()).collect();
        let mut ok = false;
        for (a, q) in &moves {
            if ok {
                break;
            }
            ok = match (a, &s[i]) {
                // rule 3
                (Action::Tau, _) => self.derive(q, s, i, path),
                // rule 2
                (Action::Visible(n), Symbol::Action(m)) if n == m => self.derive(q, s, i + 1, path),
                _ => false,
            };
        }
        if !ok {
            if let Symbol::Refusal(x) = &s[i] {
                if stable && initials.is_disjoint(x) {
                    // rule 4
                    ok = self.derive(p, s, i + 1, path);
                    for (a, q) in &moves {
                        if ok {
                            break;
                        }
                        if *a != Action::Timeout {
                            continue;
                        }
                        // rule 5
                        ok = self.derive(q, s, i, path);
                        // rule 6
                        if !ok {
                            if let Some(Symbol::Action(b)) = s.get(i + 1) {
                                ok = x.contains(b) && self.derive(q, s, i + 1, path);
                            }
                        }
                    }
                }
            }
        }
        path.remove(&key);
        if ok {
            self.proven.insert(key);
        }
        ok
    }
}
