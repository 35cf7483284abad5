use std::collections::{BTreeSet, HashMap};

use super::space::{explore_all, Lts, StateId};
use crate::term::{Action, Term};
use crate::{Budget, Error, Result};

type Signature<'a> = (usize, BTreeSet<(&'a Action, usize)>);

/// Coarsest stable partition: block index per state.
fn partition(lts: &Lts) -> Vec<usize> {
    let n = lts.num_states();
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<Signature, usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for s in 0..n {
            let sig: BTreeSet<(&Action, usize)> =
                lts.transitions[s].iter().map(|(a, t)| (a, block[*t as usize])).collect();
            let len = ids.len();
            next[s] = *ids.entry((block[s], sig)).or_insert(len);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            return block;
        }
        count = new_count;
    }
}

/// Strong bisimilarity of two states of a completely explored system.
pub fn strong_bisim(lts: &Lts, s: StateId, t: StateId) -> Result<bool> {
    if !lts.complete {
        return Err(Error::IncompleteStateSpace { max_states: lts.num_states() });
    }
    let block = partition(lts);
    Ok(block[s as usize] == block[t as usize])
}

/// Explores both processes together and decides strong bisimilarity.
pub fn bisimilar(p: &Term, q: &Term, budget: Budget) -> Result<bool> {
    let lts = explore_all(&[p.clone(), q.clone()], budget)?;
    if !lts.complete {
        return Err(Error::IncompleteStateSpace { max_states: budget.max_states });
    }
    strong_bisim(&lts, lts.roots[0], lts.roots[1])
}
