use std::collections::HashSet;

use crate::fttrace::automaton::{accepts_from, closure};
use crate::fttrace::{Alphabet, Letter, RootFlags, Symbol, Trace, TraceAutomaton};
use crate::term::NameSet;
use crate::Result;

/// Checks the three conditions under which `τ_I(ρ)` is defined: every
/// refusal contains `I`, hidden runs between refusals keep the refusal,
/// and a hidden run ending in a visible action `a` has `a` in the refusal.
pub fn survives_abstraction(rho: &Trace, hidden: &NameSet) -> bool {
    let s = rho.symbols();
    for (i, sym) in s.iter().enumerate() {
        let Symbol::Refusal(x) = sym else { continue };
        if !hidden.is_subset(x) {
            return false;
        }
        let mut j = i + 1;
        while matches!(s.get(j), Some(Symbol::Action(c)) if hidden.contains(c)) {
            j += 1;
        }
        if j == i + 1 {
            continue;
        }
        match s.get(j) {
            Some(Symbol::Refusal(y)) if y != x => return false,
            Some(Symbol::Action(a)) if !x.contains(a) => return false,
            _ => {}
        }
    }
    true
}

/// `τ_I(ρ)`: contract `X c₀…cₙ X` to `X` and drop the remaining hidden actions.
pub fn abstract_trace(rho: &Trace, hidden: &NameSet) -> Option<Trace> {
    if !survives_abstraction(rho, hidden) {
        return None;
    }
    let mut out: Vec<Symbol> = Vec::new();
    let mut hidden_run = false;
    for sym in rho.symbols() {
        match sym {
            Symbol::Action(c) if hidden.contains(c) => hidden_run = true,
            Symbol::Refusal(_) if hidden_run && out.last() == Some(sym) => hidden_run = false,
            _ => {
                out.push(sym.clone());
                hidden_run = false;
            }
        }
    }
    Some(Trace::new(out))
}

/// `σ ∪ I`: every refusal extended by the hidden names.
pub fn augment(sigma: &Trace, hidden: &NameSet) -> Trace {
    Trace::new(
        sigma
            .symbols()
            .iter()
            .map(|s| match s {
                Symbol::Refusal(x) => Symbol::Refusal(x.union(hidden).cloned().collect()),
                a => a.clone(),
            })
            .collect(),
    )
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pending {
    x: u64,
    hidden_since: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Phase {
    Normal,
    /// Root time-out read while the component stays at its root.
    AfterTimeout,
    /// The refusal after such a time-out must be followed by a hidden run...
    MustHide,
    /// ...and then by the same refusal again.
    MustContract,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HideState<S> {
    inner: S,
    pending: Option<Pending>,
    phase: Phase,
}

/// Accepts `σ` iff some `ρ` accepted by the component survives abstraction
/// from `I` and `τ_I(ρ) = σ ∪ I`.
///
/// A rooted `t X σ` arises either from the component's own `t X' η` or,
/// at a stable root, from a plain `X' c₀…cₙ X' η`: the component timed out
/// before the hidden run and refuses `X'` again after it.
pub struct HideAutomaton<A> {
    inner: A,
    hidden: u64,
    inner_flags: Option<RootFlags>,
}

impl<A: TraceAutomaton> HideAutomaton<A> {
    pub fn new(inner: A, hidden: &NameSet) -> Self {
        let hidden = inner.alphabet().mask_of(hidden);
        HideAutomaton { inner, hidden, inner_flags: None }
    }

    fn inner_flags(&mut self) -> Result<RootFlags> {
        if self.inner_flags.is_none() {
            self.inner_flags = Some(self.inner.root_flags()?);
        }
        Ok(self.inner_flags.unwrap())
    }

    fn hidden_letters(&self) -> Vec<Letter> {
        (0..64u8).filter(|i| self.hidden & (1 << i) != 0).map(Letter::Act).collect()
    }

    /// Some `c₀…cₙ I⊤` (n ≥ 0, all `cᵢ ∈ I`) is accepted.
    fn hidden_run_then_refusal(&mut self) -> Result<bool> {
        let init = self.inner.initial_states()?;
        let start = closure(&mut self.inner, init)?;
        let letters = self.hidden_letters();
        let mut seen: HashSet<A::State> = HashSet::new();
        let mut frontier = start;
        let mut reached = Vec::new();
        loop {
            let mut next = Vec::new();
            for s in &frontier {
                for &l in &letters {
                    next.extend(self.inner.step(s, l)?);
                }
            }
            let next = closure(&mut self.inner, next)?;
            frontier = next.into_iter().filter(|s| seen.insert(s.clone())).collect();
            if frontier.is_empty() {
                break;
            }
            reached.extend(frontier.iter().cloned());
        }
        accepts_from(&mut self.inner, reached, &[Letter::Refuse(self.hidden)])
    }
}

impl<A: TraceAutomaton> TraceAutomaton for HideAutomaton<A> {
    type State = HideState<A::State>;

    fn alphabet(&self) -> &Alphabet {
        self.inner.alphabet()
    }

    fn initial_states(&mut self) -> Result<Vec<Self::State>> {
        Ok(self
            .inner
            .initial_states()?
            .into_iter()
            .map(|inner| HideState { inner, pending: None, phase: Phase::Normal })
            .collect())
    }

    fn silent(&mut self, s: &Self::State) -> Result<Vec<Self::State>> {
        let mut out: Vec<Self::State> = self
            .inner
            .silent(&s.inner)?
            .into_iter()
            .map(|inner| HideState { inner, pending: s.pending, phase: s.phase })
            .collect();
        if s.phase == Phase::AfterTimeout {
            return Ok(out);
        }
        let after = s.pending.map(|p| Pending { hidden_since: true, ..p });
        let hidden_phase = if s.phase == Phase::Normal { Phase::Normal } else { Phase::MustContract };
        for l in self.hidden_letters() {
            for inner in self.inner.step(&s.inner, l)? {
                out.push(HideState { inner, pending: after, phase: hidden_phase });
            }
        }
        if let Some(p) = s.pending.filter(|p| p.hidden_since) {
            for inner in self.inner.step(&s.inner, Letter::Refuse(p.x))? {
                out.push(HideState {
                    inner,
                    pending: Some(Pending { x: p.x, hidden_since: false }),
                    phase: Phase::Normal,
                });
            }
        }
        Ok(out)
    }

    fn step(&mut self, s: &Self::State, letter: Letter) -> Result<Vec<Self::State>> {
        let phase = s.phase;
        let (read, pending, next) = match (letter, phase) {
            (_, Phase::MustHide | Phase::MustContract) => return Ok(Vec::new()),
            (Letter::Refuse(y), Phase::AfterTimeout) => {
                let x = y | self.hidden;
                (Letter::Refuse(x), Some(Pending { x, hidden_since: false }), Phase::MustHide)
            }
            (_, Phase::AfterTimeout) => return Ok(Vec::new()),
            (Letter::Act(a), _) => {
                let bit = 1u64 << a;
                if self.hidden & bit != 0 {
                    return Ok(Vec::new());
                }
                if s.pending.is_some_and(|p| p.hidden_since && p.x & bit == 0) {
                    return Ok(Vec::new());
                }
                (letter, None, Phase::Normal)
            }
            (Letter::Refuse(y), _) => {
                if s.pending.is_some_and(|p| p.hidden_since) {
                    return Ok(Vec::new());
                }
                let x = y | self.hidden;
                (Letter::Refuse(x), Some(Pending { x, hidden_since: false }), Phase::Normal)
            }
            (Letter::Timeout, _) => {
                let mut out = Vec::new();
                if self.inner_flags()?.stable {
                    out.push(HideState { inner: s.inner.clone(), pending: None, phase: Phase::AfterTimeout });
                }
                for inner in self.inner.step(&s.inner, letter)? {
                    out.push(HideState { inner, pending: None, phase: Phase::Normal });
                }
                return Ok(out);
            }
        };
        Ok(self
            .inner
            .step(&s.inner, read)?
            .into_iter()
            .map(|inner| HideState { inner, pending, phase: next })
            .collect())
    }

    fn is_accepting(&mut self, s: &Self::State) -> Result<bool> {
        Ok(s.phase == Phase::Normal && self.inner.is_accepting(&s.inner)?)
    }

    fn root_flags(&mut self) -> Result<RootFlags> {
        let f = self.inner_flags()?;
        let refuses_hidden = crate::fttrace::automaton::accepts(&mut self.inner, &[Letter::Refuse(self.hidden)])?;
        Ok(RootFlags {
            stable: f.stable && refuses_hidden,
            post_stable: self.hidden_run_then_refusal()? || (f.post_stable && refuses_hidden),
        })
    }
}
