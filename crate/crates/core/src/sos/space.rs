use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::outgoing_with;
use crate::term::{Action, Name, NameSet, Term};
use crate::{Budget, Error, Result};

pub type StateId = u32;

/// A lazily expanded state space: states are interned by structural
/// equality and expanded on demand within a state budget.
pub struct StateSpace {
    budget: Budget,
    states: Vec<Term>,
    index: HashMap<Term, StateId>,
    succ: Vec<Option<Vec<(Action, StateId)>>>,
    stable: Vec<bool>,
}

impl StateSpace {
    pub fn new(budget: Budget) -> Self {
        StateSpace { budget, states: Vec::new(), index: HashMap::new(), succ: Vec::new(), stable: Vec::new() }
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// Returns the id of `t`, creating a new state if needed.
    pub fn intern(&mut self, t: &Term) -> Result<StateId> {
        if let Some(&id) = self.index.get(t) {
            return Ok(id);
        }
        if self.states.len() >= self.budget.max_states {
            return Err(Error::IncompleteStateSpace { max_states: self.budget.max_states });
        }
        let id = self.states.len() as StateId;
        self.states.push(t.clone());
        self.index.insert(t.clone(), id);
        self.succ.push(None);
        self.stable.push(true);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn term(&self, s: StateId) -> &Term {
        &self.states[s as usize]
    }

    pub fn is_expanded(&self, s: StateId) -> bool {
        self.succ[s as usize].is_some()
    }

    /// Outgoing transitions of `s`, expanding it first if necessary.
    pub fn successors(&mut self, s: StateId) -> Result<&[(Action, StateId)]> {
        if self.succ[s as usize].is_none() {
            let out = outgoing_with(&self.states[s as usize].clone(), &self.budget)?;
            let mut succ = Vec::with_capacity(out.len());
            for (a, t) in out {
                let id = self.intern(&t)?;
                succ.push((a, id));
            }
            self.stable[s as usize] = succ.iter().all(|(a, _)| *a != Action::Tau);
            self.succ[s as usize] = Some(succ);
        }
        Ok(self.succ[s as usize].as_deref().unwrap())
    }

    pub fn is_stable(&mut self, s: StateId) -> Result<bool> {
        self.successors(s)?;
        Ok(self.stable[s as usize])
    }

    /// Initial visible actions of `s` if it is stable.
    pub fn initials(&mut self, s: StateId) -> Result<Option<NameSet>> {
        let succ = self.successors(s)?;
        if succ.iter().any(|(a, _)| *a == Action::Tau) {
            return Ok(None);
        }
        Ok(Some(succ.iter().filter_map(|(a, _)| a.name().cloned()).collect()))
    }
}

/// An explored fragment of the transition relation.
#[derive(Clone, Debug, Serialize)]
pub struct Lts {
    pub states: Vec<Term>,
    pub roots: Vec<StateId>,
    pub transitions: Vec<Vec<(Action, StateId)>>,
    pub expanded: Vec<bool>,
    pub complete: bool,
}

impl Lts {
    pub fn initial(&self) -> StateId {
        self.roots[0]
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    pub fn is_stable(&self, s: StateId) -> bool {
        self.transitions[s as usize].iter().all(|(a, _)| *a != Action::Tau)
    }

    pub fn initials(&self, s: StateId) -> Option<NameSet> {
        if !self.is_stable(s) {
            return None;
        }
        Some(self.transitions[s as usize].iter().filter_map(|(a, _)| a.name().cloned()).collect())
    }

    /// Visible actions labelling some transition.
    pub fn visible_actions(&self) -> NameSet {
        self.transitions.iter().flatten().filter_map(|(a, _)| a.name().cloned()).collect()
    }

    /// True iff some listed transition carries the visible action `name`.
    pub fn performs(&self, name: &Name) -> bool {
        self.transitions.iter().flatten().any(|(a, _)| a.name() == Some(name))
    }
}

/// Breadth-first exploration from `p`, stopping at `max_states` states.
pub fn explore(p: &Term, max_states: usize) -> Result<Lts> {
    explore_all(std::slice::from_ref(p), Budget::default().with_max_states(max_states))
}

/// Explores several roots into one transition system.
pub fn explore_all(roots: &[Term], budget: Budget) -> Result<Lts> {
    let mut space = StateSpace::new(budget);
    let mut root_ids = Vec::new();
    let mut complete = true;
    for r in roots {
        match space.intern(r) {
            Ok(id) => root_ids.push(id),
            Err(Error::IncompleteStateSpace { .. }) => {
                return Err(Error::Invalid("state budget smaller than the number of roots".into()))
            }
            Err(e) => return Err(e),
        }
    }
    let mut queue: VecDeque<StateId> = root_ids.iter().copied().collect();
    let mut seen = vec![false; space.len()];
    for &r in &root_ids {
        seen[r as usize] = true;
    }
    while let Some(s) = queue.pop_front() {
        match space.successors(s) {
            Ok(succ) => {
                let targets: Vec<StateId> = succ.iter().map(|(_, t)| *t).collect();
                for t in targets {
                    if t as usize >= seen.len() {
                        seen.resize(t as usize + 1, false);
                    }
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        queue.push_back(t);
                    }
                }
            }
            Err(Error::IncompleteStateSpace { .. }) => {
                complete = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let n = space.len();
    let mut transitions = Vec::with_capacity(n);
    let mut expanded = Vec::with_capacity(n);
    for s in 0..n as StateId {
        if space.is_expanded(s) {
            transitions.push(space.successors(s)?.to_vec());
            expanded.push(true);
        } else {
            transitions.push(Vec::new());
            expanded.push(false);
        }
    }
    Ok(Lts { states: space.states, roots: root_ids, transitions, expanded, complete })
}
