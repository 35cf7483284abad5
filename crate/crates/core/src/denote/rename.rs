use std::collections::BTreeSet;

use crate::fttrace::{Alphabet, Letter, RootFlags, Symbol, Trace, TraceAutomaton};
use crate::term::{Name, NameSet, Relation};
use crate::Result;

/// `R⁻¹(X) = {a | ∃b ∈ X. (a, b) ∈ R}`.
pub fn inverse_image(rel: &Relation, x: &NameSet) -> NameSet {
    rel.iter().filter(|(_, b)| x.contains(b)).map(|(a, _)| a.clone()).collect()
}

/// All `ρ ∈ R⁻¹(σ)`: refusals become `R⁻¹(X)`, each action `b` becomes some
/// `a` with `(a, b) ∈ R`, and right after a refusal `X` the choice must
/// satisfy `b ∈ X ⇔ a ∈ R⁻¹(X)`.
pub fn rename_preimages(sigma: &Trace, rel: &Relation) -> BTreeSet<Trace> {
    let mut partial: Vec<Vec<Symbol>> = vec![Vec::new()];
    let mut prev: Option<&NameSet> = None;
    for s in sigma.symbols() {
        match s {
            Symbol::Refusal(x) => {
                let inv = inverse_image(rel, x);
                for p in &mut partial {
                    p.push(Symbol::Refusal(inv.clone()));
                }
                prev = Some(x);
            }
            Symbol::Action(b) => {
                let sources: Vec<&Name> = rel
                    .iter()
                    .filter(|(a, img)| {
                        img == b && prev.is_none_or(|x| x.contains(b) == inverse_image(rel, x).contains(a))
                    })
                    .map(|(a, _)| a)
                    .collect();
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        sources.iter().map(move |a| {
                            let mut q = p.clone();
                            q.push(Symbol::Action((*a).clone()));
                            q
                        })
                    })
                    .collect();
                prev = None;
            }
        }
    }
    partial.into_iter().map(Trace::new).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RenameState<S> {
    inner: S,
    /// The output refusal just read, if the previous letter was one.
    after: Option<u64>,
}

/// Accepts `σ` iff the component accepts some `ρ ∈ R⁻¹(σ)`.
pub struct RenameAutomaton<A> {
    inner: A,
    /// `(source, image)` index pairs inside Σ.
    pairs: Vec<(u8, u8)>,
}

impl<A: TraceAutomaton> RenameAutomaton<A> {
    pub fn new(inner: A, rel: &Relation) -> Self {
        let alpha = inner.alphabet();
        let pairs = rel.iter().filter_map(|(a, b)| Some((alpha.index_of(a)?, alpha.index_of(b)?))).collect();
        RenameAutomaton { inner, pairs }
    }

    fn inverse(&self, x: u64) -> u64 {
        self.pairs.iter().filter(|(_, b)| x & (1 << b) != 0).fold(0, |m, (a, _)| m | (1 << a))
    }
}

impl<A: TraceAutomaton> TraceAutomaton for RenameAutomaton<A> {
    type State = RenameState<A::State>;

    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn initial_states(&mut self) -> Result<Vec<Self::State>> {
        Ok(self.inner.initial_states()?.into_iter().map(|inner| RenameState { inner, after: None }).collect())
    }

    fn silent(&mut self, s: &Self::State) -> Result<Vec<Self::State>> {
        Ok(self.inner.silent(&s.inner)?.into_iter().map(|inner| RenameState { inner, after: s.after }).collect())
    }

    fn step(&mut self, s: &Self::State, letter: Letter) -> Result<Vec<Self::State>> {
        let mut out = Vec::new();
        match letter {
            Letter::Act(b) => {
                let sources: Vec<u8> = self
                    .pairs
                    .iter()
                    .filter(|&&(a, img)| {
                        img == b && s.after.is_none_or(|x| (x & (1 << b) != 0) == (self.inverse(x) & (1 << a) != 0))
                    })
                    .map(|&(a, _)| a)
                    .collect();
                for a in sources {
                    for inner in self.inner.step(&s.inner, Letter::Act(a))? {
                        out.push(RenameState { inner, after: None });
                    }
                }
            }
            Letter::Refuse(x) => {
                let inv = self.inverse(x);
                for inner in self.inner.step(&s.inner, Letter::Refuse(inv))? {
                    out.push(RenameState { inner, after: Some(x) });
                }
            }
            Letter::Timeout => {
                for inner in self.inner.step(&s.inner, letter)? {
                    out.push(RenameState { inner, after: None });
                }
            }
        }
        Ok(out)
    }

    fn is_accepting(&mut self, s: &Self::State) -> Result<bool> {
        self.inner.is_accepting(&s.inner)
    }

    fn root_flags(&mut self) -> Result<RootFlags> {
        self.inner.root_flags()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Name;

    fn rel(pairs: &[(&str, &str)]) -> Relation {
        pairs.iter().map(|(a, b)| (Name::new(a), Name::new(b))).collect()
    }

    fn pre(s: &str, r: &[(&str, &str)]) -> Vec<String> {
        rename_preimages(&s.parse().unwrap(), &rel(r)).iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn preimages() {
        assert!(pre("{b} c", &[("a", "b"), ("a", "c")]).is_empty());
        assert_eq!(pre("b", &[("a", "b")]), ["a top"]);
        assert_eq!(pre("{b,c} b", &[("a", "b"), ("a", "c")]), ["{a} a top"]);
    }
}
