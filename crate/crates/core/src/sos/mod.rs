//! Structural operational semantics, state-space exploration and bisimilarity.

mod bisim;
mod export;
mod space;

use std::collections::BTreeSet;

use crate::term::{Action, Kind, NameSet, Term};
use crate::{Budget, Error, Result};

pub use bisim::{bisimilar, strong_bisim};
pub use space::{explore, explore_all, Lts, StateId, StateSpace};

/// All `(α, P')` with `P --α--> P'`, sorted and without duplicates.
pub fn outgoing(p: &Term) -> Result<Vec<(Action, Term)>> {
    outgoing_with(p, &Budget::default())
}

pub fn outgoing_with(p: &Term, budget: &Budget) -> Result<Vec<(Action, Term)>> {
    let mut out = Vec::new();
    collect(p, 0, budget.max_unfoldings, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

fn collect(p: &Term, depth: usize, limit: usize, out: &mut Vec<(Action, Term)>) -> Result<()> {
    match p.kind() {
        Kind::Nil => {}
        Kind::Prefix(a, body) => out.push((a.clone(), body.clone())),
        Kind::Choice(l, r) => {
            collect(l, depth, limit, out)?;
            collect(r, depth, limit, out)?;
        }
        Kind::Par(sync, l, r) => {
            let mut left = Vec::new();
            let mut right = Vec::new();
            collect(l, depth, limit, &mut left)?;
            collect(r, depth, limit, &mut right)?;
            let synced = |a: &Action| matches!(a, Action::Visible(n) if sync.contains(n));
            for (a, l2) in &left {
                if !synced(a) {
                    out.push((a.clone(), Term::from_kind(Kind::Par(sync.clone(), l2.clone(), r.clone()))));
                }
            }
            for (a, r2) in &right {
                if !synced(a) {
                    out.push((a.clone(), Term::from_kind(Kind::Par(sync.clone(), l.clone(), r2.clone()))));
                }
            }
            for (a, l2) in left.iter().filter(|(a, _)| synced(a)) {
                for (_, r2) in right.iter().filter(|(b, _)| b == a) {
                    out.push((a.clone(), Term::from_kind(Kind::Par(sync.clone(), l2.clone(), r2.clone()))));
                }
            }
        }
        Kind::Hide(hidden, body) => {
            let mut inner = Vec::new();
            collect(body, depth, limit, &mut inner)?;
            for (a, b2) in inner {
                let label = match &a {
                    Action::Visible(n) if hidden.contains(n) => Action::Tau,
                    _ => a,
                };
                out.push((label, Term::from_kind(Kind::Hide(hidden.clone(), b2))));
            }
        }
        Kind::Rename(rel, body) => {
            let mut inner = Vec::new();
            collect(body, depth, limit, &mut inner)?;
            for (a, b2) in inner {
                let target = Term::from_kind(Kind::Rename(rel.clone(), b2));
                match &a {
                    Action::Visible(n) => {
                        for (_, img) in rel.iter().filter(|(x, _)| x == n) {
                            out.push((Action::Visible(img.clone()), target.clone()));
                        }
                    }
                    _ => out.push((a, target)),
                }
            }
        }
        Kind::Var(x) => return Err(Error::OpenTerm(x.to_string())),
        Kind::Rec(x, _) => {
            if depth >= limit {
                return Err(Error::UnguardedRecursion { var: x.to_string(), limit });
            }
            if let Some(unfolded) = p.unfold() {
                collect(&unfolded, depth + 1, limit, out)?;
            }
        }
    }
    Ok(())
}

/// No outgoing τ-transition.
pub fn is_stable(p: &Term) -> Result<bool> {
    Ok(outgoing(p)?.iter().all(|(a, _)| *a != Action::Tau))
}

/// Initial visible actions of a stable process; `None` when unstable.
pub fn initials(p: &Term) -> Result<Option<NameSet>> {
    let out = outgoing(p)?;
    if out.iter().any(|(a, _)| *a == Action::Tau) {
        return Ok(None);
    }
    Ok(Some(out.iter().filter_map(|(a, _)| a.name().cloned()).collect()))
}

/// A head normal form `Σ α_i.P_i` whose summands are the outgoing transitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadNormalForm {
    pub summands: BTreeSet<(Action, Term)>,
}

impl HeadNormalForm {
    pub fn to_term(&self) -> Term {
        Term::sum(self.summands.iter().map(|(a, p)| Term::prefix(a.clone(), p.clone())))
    }
}

pub fn hnf(p: &Term) -> Result<HeadNormalForm> {
    Ok(HeadNormalForm { summands: outgoing(p)?.into_iter().collect() })
}
