use std::fmt;

use serde::Serialize;

use crate::fttrace::{ft_equiv, ft_member, CheckOptions, Side, Trace};
use crate::term::{Name, NameSet, Term};
use crate::{Error, Result};

use super::may::{build_test, fresh_rename, test_context};
use super::safety::{safety_holds, SafetyVerdict};

/// A test separating two processes, with the contexts it induces.
#[derive(Clone, Debug, Serialize)]
pub struct TestReport {
    pub bad: Name,
    /// A partial failure trace of exactly one process.
    pub sigma: Trace,
    pub side: Side,
    pub test: Term,
    /// `τ_B(T_σ ‖_B _)`.
    pub context: Term,
    pub composed_left: Term,
    pub composed_right: Term,
    pub verdict_left: SafetyVerdict,
    pub verdict_right: SafetyVerdict,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Distinction {
    Distinguished(Box<TestReport>),
    EquivalentUpTo { depth: Option<usize> },
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.side == Side::Left { "left" } else { "right" };
        writeln!(f, "distinguishing trace: {} (only {side})", self.sigma)?;
        writeln!(f, "test: {}", self.test)?;
        writeln!(f, "context: {}", self.context)?;
        writeln!(f, "left in context: safety({}) {}", self.bad, self.verdict_left)?;
        write!(f, "right in context: safety({}) {}", self.bad, self.verdict_right)
    }
}

impl fmt::Display for Distinction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distinction::Distinguished(r) => r.fmt(f),
            Distinction::EquivalentUpTo { depth: Some(k) } => write!(f, "equivalent up to depth {k}"),
            Distinction::EquivalentUpTo { depth: None } => f.write_str("equivalent"),
        }
    }
}

/// Plugs `p` into the hole `_` of `context`.
pub fn plug(context: &Term, p: &Term) -> Term {
    context.replace_var(&Name::new("_"), p)
}

/// Searches a trace of exactly one process, turns it into a test and
/// checks that the two composed systems disagree on `safety(b)`.
pub fn distinguish(p: &Term, q: &Term, bad: &Name, opts: &CheckOptions) -> Result<Distinction> {
    let (p, q) = (fresh_rename(p, bad), fresh_rename(q, bad));
    let verdict = ft_equiv(&p, &q, opts)?;
    let Some(w) = verdict.witness else {
        return Ok(Distinction::EquivalentUpTo { depth: opts.mode.depth() });
    };
    let sigma = w.element.as_plain().cloned().ok_or_else(|| Error::Invalid("plain witness expected".into()))?;
    let test = build_test(&sigma, bad)?;
    let mut sync: NameSet = test.sort();
    sync.extend(p.sort());
    sync.extend(q.sort());
    sync.remove(bad);
    let context = test_context(&test, &sync);
    let (composed_left, composed_right) = (plug(&context, &p), plug(&context, &q));
    let verdict_left = safety_holds(&composed_left, bad, &opts.budget)?;
    let verdict_right = safety_holds(&composed_right, bad, &opts.budget)?;
    let in_left = ft_member(&p, &sigma, &opts.budget)?;
    if verdict_left.holds == verdict_right.holds || in_left != (w.side == Side::Left) || in_left == verdict_left.holds {
        return Err(Error::Invalid(format!("test for {sigma} does not separate the processes")));
    }
    Ok(Distinction::Distinguished(Box::new(TestReport {
        bad: bad.clone(),
        sigma,
        side: w.side,
        test,
        context,
        composed_left,
        composed_right,
        verdict_left,
        verdict_right,
    })))
}

/// Runs `safety(b)` on `C[P]` and `C[Q]` for a given context.
pub fn replay_context(
    context: &Term,
    p: &Term,
    q: &Term,
    bad: &Name,
    budget: &crate::Budget,
) -> Result<(SafetyVerdict, SafetyVerdict)> {
    Ok((safety_holds(&plug(context, p), bad, budget)?, safety_holds(&plug(context, q), bad, budget)?))
}
