//! Sampled validation of the strong bisimilarity axioms and of the time-out
//! laws under rooted failure trace equivalence.

mod sample;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::fttrace::{rft_equiv, CheckOptions, Mode, Verdict};
use crate::sos::{bisimilar, hnf};
use crate::term::{names, Action, NameSet, Relation, Term};
use crate::{Budget, Error, Result};

pub use sample::{Sampler, NAMES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawId {
    ChoiceAssoc,
    ChoiceComm,
    ChoiceIdem,
    ChoiceNil,
    HideChoice,
    HidePrefixVisible,
    HidePrefixHidden,
    RenameChoice,
    RenameTau,
    RenameTimeout,
    RenameAction,
    Rdp,
    Expansion,
    Law1,
    Law2,
    Law3,
    ObviousIdentity,
    Law1Bisim,
    BrokenTauTimeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawRelation {
    Bisim,
    RootedFt,
}

impl fmt::Display for LawRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LawRelation::Bisim => "bisim",
            LawRelation::RootedFt => "rooted-ft",
        })
    }
}

impl LawId {
    pub const ALL: [LawId; 19] = [
        LawId::ChoiceAssoc,
        LawId::ChoiceComm,
        LawId::ChoiceIdem,
        LawId::ChoiceNil,
        LawId::HideChoice,
        LawId::HidePrefixVisible,
        LawId::HidePrefixHidden,
        LawId::RenameChoice,
        LawId::RenameTau,
        LawId::RenameTimeout,
        LawId::RenameAction,
        LawId::Rdp,
        LawId::Expansion,
        LawId::Law1,
        LawId::Law2,
        LawId::Law3,
        LawId::ObviousIdentity,
        LawId::Law1Bisim,
        LawId::BrokenTauTimeout,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawId::ChoiceAssoc => "choice-assoc",
            LawId::ChoiceComm => "choice-comm",
            LawId::ChoiceIdem => "choice-idem",
            LawId::ChoiceNil => "choice-nil",
            LawId::HideChoice => "hide-choice",
            LawId::HidePrefixVisible => "hide-prefix-visible",
            LawId::HidePrefixHidden => "hide-prefix-hidden",
            LawId::RenameChoice => "rename-choice",
            LawId::RenameTau => "rename-tau",
            LawId::RenameTimeout => "rename-timeout",
            LawId::RenameAction => "rename-action",
            LawId::Rdp => "rdp",
            LawId::Expansion => "expansion",
            LawId::Law1 => "law1",
            LawId::Law2 => "law2",
            LawId::Law3 => "law3",
            LawId::ObviousIdentity => "obvious-identity",
            LawId::Law1Bisim => "law1-bisim",
            LawId::BrokenTauTimeout => "broken-tau-timeout",
        }
    }

    /// The equation as written, with its side condition.
    pub fn equation(self) -> &'static str {
        match self {
            LawId::ChoiceAssoc => "x + (y + z) = (x + y) + z",
            LawId::ChoiceComm => "x + y = y + x",
            LawId::ChoiceIdem => "x + x = x",
            LawId::ChoiceNil => "x + 0 = x",
            LawId::HideChoice => "hide I in (x + y) = hide I in x + hide I in y",
            LawId::HidePrefixVisible => "hide I in alpha.x = alpha.hide I in x   (alpha not in I)",
            LawId::HidePrefixHidden => "hide I in a.x = tau.hide I in x   (a in I)",
            LawId::RenameChoice => "R(x + y) = R(x) + R(y)",
            LawId::RenameTau => "R(tau.x) = tau.R(x)",
            LawId::RenameTimeout => "R(t.x) = t.R(x)",
            LawId::RenameAction => "R(a.x) = sum of b.R(x) over (a,b) in R",
            LawId::Rdp => "<X|S> = <S_X|S>",
            LawId::Expansion => "P |[S]| Q = expansion of the head normal forms",
            LawId::Law1 => "tau.P + t.Q = tau.P",
            LawId::Law2 => {
                "t.(tau.hide {b} in P + b.Q) |[b]| t.(tau.hide {b} in S + b.T) = t.tau.hide {b} in P |[b]| t.tau.hide {b} in S"
            }
            LawId::Law3 => "a.P + t.(Q + tau.R + a.S) = a.P + t.(Q + tau.R)",
            LawId::ObviousIdentity => "hide {b} in x |[b]| t.(y + b.z) = hide {b} in x |[b]| t.y",
            LawId::Law1Bisim => "tau.P + t.Q = tau.P   (under bisimilarity)",
            LawId::BrokenTauTimeout => "tau.x + t.y = t.y   (not a law)",
        }
    }

    pub fn relation(self) -> LawRelation {
        match self {
            LawId::Law1 | LawId::Law2 | LawId::Law3 | LawId::ObviousIdentity | LawId::BrokenTauTimeout => {
                LawRelation::RootedFt
            }
            _ => LawRelation::Bisim,
        }
    }

    /// Whether the equation is expected to hold on every instance.
    pub fn expected_to_hold(self) -> bool {
        !matches!(self, LawId::Law1Bisim | LawId::BrokenTauTimeout)
    }

    /// The term variables the law is stated over.
    pub fn variables(self) -> &'static [&'static str] {
        match self {
            LawId::ChoiceAssoc | LawId::ObviousIdentity => &["x", "y", "z"],
            LawId::ChoiceComm | LawId::HideChoice | LawId::RenameChoice | LawId::BrokenTauTimeout => &["x", "y"],
            LawId::ChoiceIdem
            | LawId::ChoiceNil
            | LawId::HidePrefixVisible
            | LawId::HidePrefixHidden
            | LawId::RenameTau
            | LawId::RenameTimeout
            | LawId::RenameAction => &["x"],
            LawId::Rdp => &["S"],
            LawId::Expansion | LawId::Law1 | LawId::Law1Bisim => &["P", "Q"],
            LawId::Law2 => &["P", "Q", "S", "T"],
            LawId::Law3 => &["P", "Q", "S"],
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL.into_iter().find(|l| l.name() == s).ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

/// Non-term parameters of a law instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Params {
    /// `I` of the hiding laws.
    pub hidden: Option<NameSet>,
    /// `α` or `a` of the prefix laws and law (3).
    pub action: Option<Action>,
    pub relation: Option<Relation>,
    /// `S` of the expansion law.
    pub sync: Option<NameSet>,
    /// `R` of law (3).
    pub extra: Option<Term>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawInstance {
    pub law: LawId,
    pub seed: Option<u64>,
    pub assignment: BTreeMap<String, Term>,
    pub params: Params,
    pub lhs: Term,
    pub rhs: Term,
    pub relation: LawRelation,
}

fn get(assignment: &BTreeMap<String, Term>, v: &str) -> Result<Term> {
    assignment.get(v).cloned().ok_or_else(|| Error::Invalid(format!("law variable {v} is not assigned")))
}

fn hide_b(t: Term) -> Term {
    Term::hide(names(["b"]), t)
}

/// The sides of `law` under an explicit assignment and parameters.
pub fn instantiate_with(law: LawId, assignment: BTreeMap<String, Term>, params: Params) -> Result<LawInstance> {
    let v = |name: &str| get(&assignment, name);
    let hidden = || params.hidden.clone().ok_or_else(|| Error::Invalid("hidden set missing".into()));
    let action = || params.action.clone().ok_or_else(|| Error::Invalid("action missing".into()));
    let rel = || params.relation.clone().ok_or_else(|| Error::Invalid("relation missing".into()));
    let (lhs, rhs) = match law {
        LawId::ChoiceAssoc => (
            Term::choice(v("x")?, Term::choice(v("y")?, v("z")?)),
            Term::choice(Term::choice(v("x")?, v("y")?), v("z")?),
        ),
        LawId::ChoiceComm => (Term::choice(v("x")?, v("y")?), Term::choice(v("y")?, v("x")?)),
        LawId::ChoiceIdem => (Term::choice(v("x")?, v("x")?), v("x")?),
        LawId::ChoiceNil => (Term::choice(v("x")?, Term::nil()), v("x")?),
        LawId::HideChoice => {
            let i = hidden()?;
            (
                Term::hide(i.clone(), Term::choice(v("x")?, v("y")?)),
                Term::choice(Term::hide(i.clone(), v("x")?), Term::hide(i, v("y")?)),
            )
        }
        LawId::HidePrefixVisible | LawId::HidePrefixHidden => {
            let (i, a) = (hidden()?, action()?);
            let inside = matches!(&a, Action::Visible(n) if i.contains(n));
            if inside != (law == LawId::HidePrefixHidden) {
                return Err(Error::Invalid(format!("side condition of {law} fails for {a}")));
            }
            let body = Term::hide(i.clone(), v("x")?);
            let rhs = if inside { Term::tau(body) } else { Term::prefix(a.clone(), body) };
            (Term::hide(i, Term::prefix(a, v("x")?)), rhs)
        }
        LawId::RenameChoice => {
            let r = rel()?;
            (
                Term::rename(r.clone(), Term::choice(v("x")?, v("y")?)),
                Term::choice(Term::rename(r.clone(), v("x")?), Term::rename(r, v("y")?)),
            )
        }
        LawId::RenameTau => {
            let r = rel()?;
            (Term::rename(r.clone(), Term::tau(v("x")?)), Term::tau(Term::rename(r, v("x")?)))
        }
        LawId::RenameTimeout => {
            let r = rel()?;
            (Term::rename(r.clone(), Term::timeout(v("x")?)), Term::timeout(Term::rename(r, v("x")?)))
        }
        LawId::RenameAction => {
            let (r, a) = (rel()?, action()?);
            let Action::Visible(a) = a else {
                return Err(Error::Invalid("rename-action needs a visible action".into()));
            };
            let body = Term::rename(r.clone(), v("x")?);
            let images = r.iter().filter(|(x, _)| *x == a).map(|(_, b)| Term::act(b.as_str(), body.clone()));
            (Term::rename(r.clone(), Term::act(a.as_str(), v("x")?)), Term::sum(images))
        }
        LawId::Rdp => {
            let s = v("S")?;
            let unfolded = s.unfold().ok_or_else(|| Error::Invalid("rdp needs a recursion term".into()))?;
            (s, unfolded)
        }
        LawId::Expansion => {
            let sync = params.sync.clone().unwrap_or_default();
            let (p, q) = (v("P")?, v("Q")?);
            let (hp, hq) = (hnf(&p)?.summands, hnf(&q)?.summands);
            let synced = |a: &Action| matches!(a, Action::Visible(n) if sync.contains(n));
            let mut summands = Vec::new();
            for (a, pi) in hp.iter().filter(|(a, _)| !synced(a)) {
                summands.push(Term::prefix(a.clone(), Term::par(sync.clone(), pi.clone(), q.clone())));
            }
            for (b, qj) in hq.iter().filter(|(b, _)| !synced(b)) {
                summands.push(Term::prefix(b.clone(), Term::par(sync.clone(), p.clone(), qj.clone())));
            }
            for (a, pi) in hp.iter().filter(|(a, _)| synced(a)) {
                for (_, qj) in hq.iter().filter(|(b, _)| b == a) {
                    summands.push(Term::prefix(a.clone(), Term::par(sync.clone(), pi.clone(), qj.clone())));
                }
            }
            (Term::par(sync, p, q), Term::sum(summands))
        }
        LawId::Law1 | LawId::Law1Bisim => {
            let tp = Term::tau(v("P")?);
            (Term::choice(tp.clone(), Term::timeout(v("Q")?)), tp)
        }
        LawId::Law2 => {
            let b = names(["b"]);
            let (p, q, s, t) = (v("P")?, v("Q")?, v("S")?, v("T")?);
            let left = |x: &Term, y: &Term| {
                Term::timeout(Term::choice(Term::tau(hide_b(x.clone())), Term::act("b", y.clone())))
            };
            (
                Term::par(b.clone(), left(&p, &q), left(&s, &t)),
                Term::par(b, Term::timeout(Term::tau(hide_b(p))), Term::timeout(Term::tau(hide_b(s)))),
            )
        }
        LawId::Law3 => {
            let a = action()?;
            let r = params.extra.clone().ok_or_else(|| Error::Invalid("law3 needs R".into()))?;
            let (p, q, s) = (v("P")?, v("Q")?, v("S")?);
            let ap = Term::prefix(a.clone(), p);
            let base = Term::choice(q, Term::tau(r));
            (
                Term::choice(ap.clone(), Term::timeout(Term::choice(base.clone(), Term::prefix(a, s)))),
                Term::choice(ap, Term::timeout(base)),
            )
        }
        LawId::ObviousIdentity => {
            let b = names(["b"]);
            let hx = hide_b(v("x")?);
            (
                Term::par(b.clone(), hx.clone(), Term::timeout(Term::choice(v("y")?, Term::act("b", v("z")?)))),
                Term::par(b, hx, Term::timeout(v("y")?)),
            )
        }
        LawId::BrokenTauTimeout => {
            let ty = Term::timeout(v("y")?);
            (Term::choice(Term::tau(v("x")?), ty.clone()), ty)
        }
    };
    Ok(LawInstance { law, seed: None, assignment, params, lhs, rhs, relation: law.relation() })
}

/// A deterministic instance of `law` drawn from `seed`.
pub fn instantiate_law(law: LawId, seed: u64) -> Result<LawInstance> {
    let mut s = Sampler::new(seed);
    let mut assignment = BTreeMap::new();
    let mut params = Params::default();
    let small = 4;
    for v in law.variables() {
        let t = match (law, *v) {
            (LawId::Rdp, _) => s.recursion(8),
            (LawId::Expansion, _) => {
                let n = s.rng().gen_range(0..=3);
                Term::sum(s.head_normal_form(n).into_iter().map(|(a, p)| Term::prefix(a, p)))
            }
            _ => s.small_term(small),
        };
        assignment.insert(v.to_string(), t);
    }
    match law {
        LawId::HideChoice => params.hidden = Some(s.nonempty_subset()),
        LawId::HidePrefixVisible => {
            let i = s.nonempty_subset();
            let a = loop {
                let a = s.action();
                if !matches!(&a, Action::Visible(n) if i.contains(n)) {
                    break a;
                }
            };
            params.hidden = Some(i);
            params.action = Some(a);
        }
        LawId::HidePrefixHidden => {
            let i = s.nonempty_subset();
            let a = i.iter().nth(s.rng().gen_range(0..i.len())).expect("nonempty").clone();
            params.hidden = Some(i);
            params.action = Some(Action::Visible(a));
        }
        LawId::RenameChoice | LawId::RenameTau | LawId::RenameTimeout => params.relation = Some(s.relation()),
        LawId::RenameAction => {
            params.relation = Some(s.relation());
            params.action = Some(Action::Visible(s.name()));
        }
        LawId::Expansion => params.sync = Some(s.subset()),
        LawId::Law3 => {
            params.action = Some(Action::Visible(s.name()));
            params.extra = Some(s.small_term(small));
        }
        _ => {}
    }
    let mut inst = instantiate_with(law, assignment, params)?;
    inst.seed = Some(seed);
    Ok(inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    BudgetExceeded,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub law: LawId,
    pub seed: Option<u64>,
    pub relation: LawRelation,
    pub lhs: Term,
    pub rhs: Term,
    pub outcome: Outcome,
    pub expected: Outcome,
    pub witness: Option<String>,
}

impl LawReport {
    pub fn as_expected(&self) -> bool {
        self.outcome == self.expected
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }
}

/// Limits for law checking.
#[derive(Clone, Copy, Debug)]
pub struct LawBudget {
    /// State cap for bisimilarity checks.
    pub bisim_states: usize,
    /// Depth for rooted failure trace checks.
    pub depth: usize,
    pub budget: Budget,
}

impl Default for LawBudget {
    fn default() -> Self {
        LawBudget { bisim_states: 500, depth: 5, budget: Budget::default() }
    }
}

fn rooted_check(lhs: &Term, rhs: &Term, lb: &LawBudget) -> Result<Verdict> {
    let opts = CheckOptions { mode: Mode::Bounded(lb.depth), alphabet: None, budget: lb.budget };
    rft_equiv(lhs, rhs, &opts)
}

/// Decides one instance; running out of budget is an outcome, not an error.
pub fn check_law(inst: &LawInstance, lb: &LawBudget) -> Result<LawReport> {
    let result = match inst.relation {
        LawRelation::Bisim => {
            bisimilar(&inst.lhs, &inst.rhs, lb.budget.with_max_states(lb.bisim_states)).map(|b| (b, None))
        }
        LawRelation::RootedFt => {
            rooted_check(&inst.lhs, &inst.rhs, lb).map(|v| (v.holds, v.witness.map(|w| w.element.to_string())))
        }
    };
    let (outcome, witness) = match result {
        Ok((true, _)) => (Outcome::Pass, None),
        Ok((false, w)) => (Outcome::Fail, w),
        Err(Error::IncompleteStateSpace { .. } | Error::AlphabetTooLarge { .. }) => (Outcome::BudgetExceeded, None),
        Err(e) => return Err(e),
    };
    Ok(LawReport {
        law: inst.law,
        seed: inst.seed,
        relation: inst.relation,
        lhs: inst.lhs.clone(),
        rhs: inst.rhs.clone(),
        outcome,
        expected: if inst.law.expected_to_hold() { Outcome::Pass } else { Outcome::Fail },
        witness,
    })
}

/// `τ_{b}(x) ‖_{b} t.(y + b.z) = τ_{b}(x) ‖_{b} t.y` under rooted failure traces.
pub fn obvious_identity_check(x: &Term, y: &Term, z: &Term, depth: usize) -> Result<Verdict> {
    let assignment = [("x", x), ("y", y), ("z", z)].into_iter().map(|(k, t)| (k.to_string(), t.clone())).collect();
    let inst = instantiate_with(LawId::ObviousIdentity, assignment, Params::default())?;
    rooted_check(&inst.lhs, &inst.rhs, &LawBudget { depth, ..LawBudget::default() })
}

/// Seed of the `i`-th instance of a law in a run.
pub fn instance_seed(run_seed: u64, law: LawId, i: u64) -> u64 {
    let idx = LawId::ALL.iter().position(|l| *l == law).unwrap_or(0) as u64;
    run_seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (idx << 40) ^ i
}

/// `samples` instances of every selected law.
pub fn run_laws(laws: &[LawId], samples: u64, seed: u64, lb: &LawBudget) -> Result<Vec<LawReport>> {
    let mut out = Vec::new();
    for &law in laws {
        for i in 0..samples {
            out.push(check_law(&instantiate_law(law, instance_seed(seed, law, i))?, lb)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LawSummary {
    pub law: LawId,
    pub relation: LawRelation,
    pub pass: usize,
    pub fail: usize,
    pub budget_exceeded: usize,
    pub expected: Outcome,
    /// Every instance ended as expected.
    pub ok: bool,
}

pub fn summarise(reports: &[LawReport]) -> Vec<LawSummary> {
    let mut by_law: BTreeMap<LawId, Vec<&LawReport>> = BTreeMap::new();
    for r in reports {
        by_law.entry(r.law).or_default().push(r);
    }
    by_law
        .into_iter()
        .map(|(law, rs)| {
            let count = |o| rs.iter().filter(|r| r.outcome == o).count();
            let expected = rs[0].expected;
            LawSummary {
                law,
                relation: law.relation(),
                pass: count(Outcome::Pass),
                fail: count(Outcome::Fail),
                budget_exceeded: count(Outcome::BudgetExceeded),
                expected,
                ok: rs.iter().all(|r| r.as_expected()),
            }
        })
        .collect()
}
