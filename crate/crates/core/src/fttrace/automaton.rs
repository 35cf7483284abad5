use std::collections::{HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::Result;

use super::alphabet::{Alphabet, Letter};

/// Root-level observations that are not words: `st` and `post-st`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RootFlags {
    pub stable: bool,
    pub post_stable: bool,
}

/// A nondeterministic automaton with silent moves over [`Letter`]s.
///
/// Plain words spell partial failure traces. Rooted automata additionally
/// read [`Letter::Timeout`] as the first letter of a `t X σ` element and
/// report the `st`/`post-st` tags through [`TraceAutomaton::root_flags`].
pub trait TraceAutomaton {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn alphabet(&self) -> &Alphabet;
    fn initial_states(&mut self) -> Result<Vec<Self::State>>;
    fn silent(&mut self, s: &Self::State) -> Result<Vec<Self::State>>;
    fn step(&mut self, s: &Self::State, letter: Letter) -> Result<Vec<Self::State>>;
    fn is_accepting(&mut self, s: &Self::State) -> Result<bool>;

    fn root_flags(&mut self) -> Result<RootFlags> {
        Ok(RootFlags::default())
    }
}

impl<A: TraceAutomaton + ?Sized> TraceAutomaton for &mut A {
    type State = A::State;

    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn initial_states(&mut self) -> Result<Vec<Self::State>> {
        (**self).initial_states()
    }
    fn silent(&mut self, s: &Self::State) -> Result<Vec<Self::State>> {
        (**self).silent(s)
    }
    fn step(&mut self, s: &Self::State, letter: Letter) -> Result<Vec<Self::State>> {
        (**self).step(s, letter)
    }
    fn is_accepting(&mut self, s: &Self::State) -> Result<bool> {
        (**self).is_accepting(s)
    }
    fn root_flags(&mut self) -> Result<RootFlags> {
        (**self).root_flags()
    }
}

/// Silent closure of a set of states, sorted.
pub fn closure<A: TraceAutomaton>(aut: &mut A, start: Vec<A::State>) -> Result<Vec<A::State>> {
    let mut seen: HashSet<A::State> = start.iter().cloned().collect();
    let mut work = start;
    let mut out = Vec::new();
    while let Some(s) = work.pop() {
        for t in aut.silent(&s)? {
            if seen.insert(t.clone()) {
                work.push(t);
            }
        }
        out.push(s);
    }
    out.sort();
    Ok(out)
}

/// Closed successor set of a closed set under one letter.
pub fn step_set<A: TraceAutomaton>(aut: &mut A, set: &[A::State], letter: Letter) -> Result<Vec<A::State>> {
    let mut next = Vec::new();
    for s in set {
        next.extend(aut.step(s, letter)?);
    }
    next.sort();
    next.dedup();
    closure(aut, next)
}

pub fn accepts_from<A: TraceAutomaton>(aut: &mut A, start: Vec<A::State>, word: &[Letter]) -> Result<bool> {
    let mut set = closure(aut, start)?;
    for &l in word {
        if set.is_empty() {
            return Ok(false);
        }
        set = step_set(aut, &set, l)?;
    }
    for s in &set {
        if aut.is_accepting(s)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Word acceptance from the initial states.
pub fn accepts<A: TraceAutomaton>(aut: &mut A, word: &[Letter]) -> Result<bool> {
    let init = aut.initial_states()?;
    accepts_from(aut, init, word)
}

pub type DfaState = u32;
pub const DEAD: DfaState = 0;

/// Lazy subset construction.
pub struct Dfa<A: TraceAutomaton> {
    aut: A,
    sets: Vec<Vec<A::State>>,
    index: HashMap<Vec<A::State>, DfaState>,
    accepting: Vec<bool>,
    trans: HashMap<(DfaState, Letter), DfaState>,
    initial: Option<DfaState>,
}

impl<A: TraceAutomaton> Dfa<A> {
    pub fn new(aut: A) -> Self {
        let mut d = Dfa {
            aut,
            sets: Vec::new(),
            index: HashMap::new(),
            accepting: Vec::new(),
            trans: HashMap::new(),
            initial: None,
        };
        d.sets.push(Vec::new());
        d.index.insert(Vec::new(), DEAD);
        d.accepting.push(false);
        d
    }

    pub fn automaton(&mut self) -> &mut A {
        &mut self.aut
    }

    pub fn into_inner(self) -> A {
        self.aut
    }

    pub fn num_states(&self) -> usize {
        self.sets.len()
    }

    fn intern(&mut self, set: Vec<A::State>) -> Result<DfaState> {
        if let Some(&id) = self.index.get(&set) {
            return Ok(id);
        }
        let mut acc = false;
        for s in &set {
            if self.aut.is_accepting(s)? {
                acc = true;
                break;
            }
        }
        let id = self.sets.len() as DfaState;
        self.sets.push(set.clone());
        self.index.insert(set, id);
        self.accepting.push(acc);
        Ok(id)
    }

    pub fn initial(&mut self) -> Result<DfaState> {
        if let Some(i) = self.initial {
            return Ok(i);
        }
        let init = self.aut.initial_states()?;
        let set = closure(&mut self.aut, init)?;
        let id = self.intern(set)?;
        self.initial = Some(id);
        Ok(id)
    }

    pub fn step(&mut self, d: DfaState, letter: Letter) -> Result<DfaState> {
        if d == DEAD {
            return Ok(DEAD);
        }
        if let Some(&t) = self.trans.get(&(d, letter)) {
            return Ok(t);
        }
        let set = self.sets[d as usize].clone();
        let next = step_set(&mut self.aut, &set, letter)?;
        let id = self.intern(next)?;
        self.trans.insert((d, letter), id);
        Ok(id)
    }

    pub fn is_accepting(&self, d: DfaState) -> bool {
        self.accepting[d as usize]
    }

    pub fn run(&mut self, word: &[Letter]) -> Result<DfaState> {
        let mut d = self.initial()?;
        for &l in word {
            d = self.step(d, l)?;
        }
        Ok(d)
    }

    pub fn accepts(&mut self, word: &[Letter]) -> Result<bool> {
        let d = self.run(word)?;
        Ok(self.is_accepting(d))
    }
}

/// Which language contains a distinguishing word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    /// L(left) = L(right).
    Equal,
    /// L(left) ⊇ L(right).
    Includes,
}

/// Breadth-first search for the least word (length, then letter order, with
/// plain words before time-out words) separating the two languages.
///
/// `depth` bounds the number of trace symbols; a leading time-out letter is
/// free. With `rooted`, the time-out letter is offered at the start only.
pub fn compare<A, B>(
    left: &mut Dfa<A>,
    right: &mut Dfa<B>,
    goal: Goal,
    depth: Option<usize>,
    rooted: bool,
) -> Result<Option<(Vec<Letter>, Side)>>
where
    A: TraceAutomaton,
    B: TraceAutomaton,
{
    let letters = left.aut.alphabet().letters(false);
    let mut seen: HashSet<(DfaState, DfaState, bool)> = HashSet::new();
    let (l0, r0) = (left.initial()?, right.initial()?);
    let mut level: Vec<(DfaState, DfaState, bool, Vec<Letter>)> = vec![(l0, r0, false, Vec::new())];
    seen.insert((l0, r0, false));
    if rooted {
        let (lt, rt) = (left.step(l0, Letter::Timeout)?, right.step(r0, Letter::Timeout)?);
        if relevant(goal, lt, rt) && seen.insert((lt, rt, true)) {
            level.push((lt, rt, true, vec![Letter::Timeout]));
        }
    }
    let mut len = 0;
    while !level.is_empty() {
        for (l, r, _, word) in &level {
            let (al, ar) = (left.is_accepting(*l), right.is_accepting(*r));
            let bad = match goal {
                Goal::Equal => al != ar,
                Goal::Includes => ar && !al,
            };
            if bad {
                return Ok(Some((word.clone(), if al { Side::Left } else { Side::Right })));
            }
        }
        if depth.is_some_and(|k| len >= k) {
            break;
        }
        let mut plain = Vec::new();
        let mut timed = Vec::new();
        for (l, r, phase, word) in level {
            for &letter in &letters {
                let (l2, r2) = (left.step(l, letter)?, right.step(r, letter)?);
                if relevant(goal, l2, r2) && seen.insert((l2, r2, phase)) {
                    let mut w = word.clone();
                    w.push(letter);
                    if phase {
                        timed.push((l2, r2, phase, w));
                    } else {
                        plain.push((l2, r2, phase, w));
                    }
                }
            }
        }
        plain.extend(timed);
        level = plain;
        len += 1;
    }
    Ok(None)
}

fn relevant(goal: Goal, l: DfaState, r: DfaState) -> bool {
    match goal {
        Goal::Equal => l != DEAD || r != DEAD,
        Goal::Includes => r != DEAD,
    }
}

/// All accepted words with at most `depth` trace symbols, in search order.
pub fn enumerate<A: TraceAutomaton>(dfa: &mut Dfa<A>, depth: usize, rooted: bool) -> Result<Vec<Vec<Letter>>> {
    let letters = dfa.aut.alphabet().letters(false);
    let mut out = Vec::new();
    let init = dfa.initial()?;
    let mut stack: Vec<(DfaState, Vec<Letter>, usize)> = vec![(init, Vec::new(), 0)];
    if rooted {
        let t = dfa.step(init, Letter::Timeout)?;
        if t != DEAD {
            stack.push((t, vec![Letter::Timeout], 0));
        }
    }
    while let Some((d, word, len)) = stack.pop() {
        if dfa.is_accepting(d) {
            out.push(word.clone());
        }
        if len == depth {
            continue;
        }
        for &l in letters.iter().rev() {
            let next = dfa.step(d, l)?;
            if next != DEAD {
                let mut w = word.clone();
                w.push(l);
                stack.push((next, w, len + 1));
            }
        }
    }
    Ok(out)
}

/// Refusal letters become silent; the language is the set of projections.
pub struct Projected<A>(pub A);

impl<A: TraceAutomaton> TraceAutomaton for Projected<A> {
    type State = A::State;

    fn alphabet(&self) -> &Alphabet {
        self.0.alphabet()
    }

    fn initial_states(&mut self) -> Result<Vec<A::State>> {
        self.0.initial_states()
    }

    // ∅ and singletons suffice: a refusal only constrains more as it grows,
    // except for the one action that ends it
    fn silent(&mut self, s: &A::State) -> Result<Vec<A::State>> {
        let mut out = self.0.silent(s)?;
        out.extend(self.0.step(s, Letter::Refuse(0))?);
        for i in 0..self.0.alphabet().len() {
            out.extend(self.0.step(s, Letter::Refuse(1 << i))?);
        }
        Ok(out)
    }

    fn step(&mut self, s: &A::State, letter: Letter) -> Result<Vec<A::State>> {
        match letter {
            Letter::Act(_) => self.0.step(s, letter),
            _ => Ok(Vec::new()),
        }
    }

    fn is_accepting(&mut self, s: &A::State) -> Result<bool> {
        self.0.is_accepting(s)
    }
}
