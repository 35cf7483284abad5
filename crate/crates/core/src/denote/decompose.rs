use serde::Serialize;

use crate::fttrace::{Symbol, Trace};
use crate::term::{Name, NameSet};

/// A split of a composed trace into the traces of the two components.
/// `None` in a raw sequence is the placeholder for "no symbol on this side".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub whole: Trace,
    pub left_raw: Vec<Option<Symbol>>,
    pub right_raw: Vec<Option<Symbol>>,
    pub left: Trace,
    pub right: Trace,
}

enum Choice {
    /// Action outside the sync set: left or right.
    Solo(Name),
    Shared(Name),
    /// Refusal: fixed part outside S, and the S-part split three ways per name.
    Split {
        outside: NameSet,
        shared: Vec<Name>,
    },
}

impl Choice {
    fn count(&self) -> usize {
        match self {
            Choice::Solo(_) => 2,
            Choice::Shared(_) => 1,
            Choice::Split { shared, .. } => 3usize.pow(shared.len() as u32),
        }
    }

    fn pick(&self, mut k: usize) -> (Option<Symbol>, Option<Symbol>) {
        match self {
            Choice::Solo(a) if k == 0 => (Some(Symbol::Action(a.clone())), None),
            Choice::Solo(a) => (None, Some(Symbol::Action(a.clone()))),
            Choice::Shared(a) => (Some(Symbol::Action(a.clone())), Some(Symbol::Action(a.clone()))),
            Choice::Split { outside, shared } => {
                let (mut l, mut r) = (outside.clone(), outside.clone());
                for n in shared {
                    match k % 3 {
                        0 => {
                            l.insert(n.clone());
                        }
                        1 => {
                            r.insert(n.clone());
                        }
                        _ => {
                            l.insert(n.clone());
                            r.insert(n.clone());
                        }
                    }
                    k /= 3;
                }
                (Some(Symbol::Refusal(l)), Some(Symbol::Refusal(r)))
            }
        }
    }
}

/// Lazily enumerates the valid decompositions of `sigma` for sync set `sync`.
pub struct Decompositions {
    whole: Trace,
    choices: Vec<Choice>,
    counter: Vec<usize>,
    done: bool,
}

/// The valid decompositions of `σ` with respect to `S`. Refusal sets are
/// split only over `σ`'s own names, so Σ does not widen the search.
pub fn valid_decompositions(sigma: &Trace, sync: &NameSet) -> Decompositions {
    let choices: Vec<Choice> = sigma
        .symbols()
        .iter()
        .map(|s| match s {
            Symbol::Action(a) if sync.contains(a) => Choice::Shared(a.clone()),
            Symbol::Action(a) => Choice::Solo(a.clone()),
            Symbol::Refusal(x) => Choice::Split {
                outside: x.difference(sync).cloned().collect(),
                shared: x.intersection(sync).cloned().collect(),
            },
        })
        .collect();
    let counter = vec![0; choices.len()];
    Decompositions { whole: sigma.clone(), choices, counter, done: false }
}

/// Whether the refusal at raw position `i` is followed on this side by an
/// action it contains.
fn side_ended(raw: &[Option<Symbol>], i: usize) -> bool {
    let Some(Symbol::Refusal(x)) = &raw[i] else { return false };
    match raw[i + 1..].iter().flatten().next() {
        Some(Symbol::Action(a)) => x.contains(a),
        _ => false,
    }
}

/// Conditions on every refusal position: the composed refusal is
/// system-ended iff exactly one component refusal is.
pub fn is_valid(whole: &Trace, left_raw: &[Option<Symbol>], right_raw: &[Option<Symbol>]) -> bool {
    (0..whole.len()).all(|i| {
        if !whole.symbols()[i].is_refusal() {
            return true;
        }
        let se = whole.is_system_ended(i).unwrap_or(false);
        let (l, r) = (side_ended(left_raw, i), side_ended(right_raw, i));
        se == (l || r) && !(l && r)
    })
}

impl Iterator for Decompositions {
    type Item = Decomposition;

    fn next(&mut self) -> Option<Decomposition> {
        while !self.done {
            let (left_raw, right_raw): (Vec<_>, Vec<_>) =
                self.choices.iter().zip(&self.counter).map(|(c, &k)| c.pick(k)).unzip();
            // advance the odometer
            let mut i = 0;
            loop {
                if i == self.counter.len() {
                    self.done = true;
                    break;
                }
                self.counter[i] += 1;
                if self.counter[i] < self.choices[i].count() {
                    break;
                }
                self.counter[i] = 0;
                i += 1;
            }
            if is_valid(&self.whole, &left_raw, &right_raw) {
                let left = Trace::new(left_raw.iter().flatten().cloned().collect());
                let right = Trace::new(right_raw.iter().flatten().cloned().collect());
                return Some(Decomposition { whole: self.whole.clone(), left_raw, right_raw, left, right });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::names;

    fn splits(sigma: &str, sync: &[&str]) -> Vec<(String, String)> {
        valid_decompositions(&sigma.parse().unwrap(), &names(sync.iter().copied()))
            .map(|d| (d.left.to_string(), d.right.to_string()))
            .collect()
    }

    #[test]
    fn single_action() {
        assert_eq!(splits("a", &[]), [("a top".into(), "top".into()), ("top".into(), "a top".into())]);
        assert_eq!(splits("a", &["a"]), [("a top".to_string(), "a top".to_string())]);
    }

    #[test]
    fn both_ended_is_blocked() {
        // {b} a b: the refusal is not system-ended in the whole trace
        let ds = splits("{b} a b", &[]);
        assert!(!ds.contains(&("{b} a top".into(), "{b} b top".into())));
        assert!(ds.contains(&("{b} a b top".into(), "{b} top".into())));
    }
}
