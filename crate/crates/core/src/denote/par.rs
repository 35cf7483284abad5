use crate::fttrace::{Alphabet, Letter, RootFlags, TraceAutomaton};
use crate::term::NameSet;
use crate::{Error, Result};

/// The last refusal read, with whether it (and each component copy) ended
/// by an action it contains. `None` is "not yet known".
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Pending {
    x: u64,
    xl: u64,
    xr: u64,
    ended: Option<bool>,
    ended_l: Option<bool>,
    ended_r: Option<bool>,
}

impl Pending {
    fn fresh(&self) -> bool {
        self.ended.is_none() && self.ended_l.is_none() && self.ended_r.is_none()
    }

    /// `None` while unresolved, else whether the decomposition conditions hold.
    fn verdict(&self) -> Option<bool> {
        match (self.ended, self.ended_l, self.ended_r) {
            (Some(e), Some(l), Some(r)) => Some(e == (l || r) && !(l && r)),
            _ => None,
        }
    }

    /// Conditions with every unknown read as "followed by ⊤".
    fn holds_at_end(&self) -> bool {
        let (e, l, r) = (self.ended.unwrap_or(false), self.ended_l.unwrap_or(false), self.ended_r.unwrap_or(false));
        e == (l || r) && !(l && r)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ParState<L, R> {
    left: L,
    right: R,
    pending: Option<Pending>,
    /// A root time-out was just read; its refusal must come next.
    timed: bool,
}

/// `col(F ‖_S G)` for the languages of two automata over one alphabet.
///
/// Refusals are split per the decomposition conditions; adjacent duplicate
/// refusals are recovered by a silent move that lets both components read
/// the last refusal again. For rooted components the time-out letter goes to
/// exactly one side, and only when both are stable.
pub struct ParAutomaton<A, B> {
    left: A,
    right: B,
    sync: u64,
    collapse: bool,
    flags: Option<(RootFlags, RootFlags)>,
}

impl<A: TraceAutomaton, B: TraceAutomaton> ParAutomaton<A, B> {
    pub fn new(left: A, right: B, sync: &NameSet) -> Result<Self> {
        if left.alphabet() != right.alphabet() {
            return Err(Error::Invalid("parallel components must share an alphabet".into()));
        }
        let sync = left.alphabet().mask_of(sync);
        Ok(ParAutomaton { left, right, sync, collapse: true, flags: None })
    }

    /// Without the collapse move the language is the plain `F ‖_S G`.
    pub fn without_collapse(mut self) -> Self {
        self.collapse = false;
        self
    }

    fn flags(&mut self) -> Result<(RootFlags, RootFlags)> {
        if self.flags.is_none() {
            self.flags = Some((self.left.root_flags()?, self.right.root_flags()?));
        }
        Ok(self.flags.unwrap())
    }

    /// `(xl, xr)` with `xl ∖ S = x ∖ S = xr ∖ S` and `(xl ∪ xr) ∩ S = x ∩ S`.
    fn splits(&self, x: u64) -> Vec<(u64, u64)> {
        let outside = x & !self.sync;
        let shared: Vec<u64> = (0..64).map(|i| 1u64 << i).filter(|b| x & self.sync & b != 0).collect();
        let mut out = vec![(outside, outside)];
        for b in shared {
            out = out.into_iter().flat_map(|(l, r)| [(l | b, r), (l, r | b), (l | b, r | b)]).collect();
        }
        out
    }

    fn read_split(&mut self, s: &ParState<A::State, B::State>, xl: u64, xr: u64) -> Result<Vec<(A::State, B::State)>> {
        let ls = self.left.step(&s.left, Letter::Refuse(xl))?;
        if ls.is_empty() {
            return Ok(Vec::new());
        }
        let rs = self.right.step(&s.right, Letter::Refuse(xr))?;
        let mut out = Vec::new();
        for l in &ls {
            for r in &rs {
                out.push((l.clone(), r.clone()));
            }
        }
        Ok(out)
    }
}

/// Resolves pending information; `None` if the conditions fail.
fn settle(p: Pending) -> Option<Option<Pending>> {
    match p.verdict() {
        Some(true) => Some(None),
        Some(false) => None,
        None => Some(Some(p)),
    }
}

impl<A: TraceAutomaton, B: TraceAutomaton> TraceAutomaton for ParAutomaton<A, B> {
    type State = ParState<A::State, B::State>;

    fn alphabet(&self) -> &Alphabet {
        self.left.alphabet()
    }

    fn initial_states(&mut self) -> Result<Vec<Self::State>> {
        let ls = self.left.initial_states()?;
        let rs = self.right.initial_states()?;
        let mut out = Vec::new();
        for l in &ls {
            for r in &rs {
                out.push(ParState { left: l.clone(), right: r.clone(), pending: None, timed: false });
            }
        }
        Ok(out)
    }

    fn silent(&mut self, s: &Self::State) -> Result<Vec<Self::State>> {
        let mut out = Vec::new();
        for l in self.left.silent(&s.left)? {
            out.push(ParState { left: l, right: s.right.clone(), pending: s.pending, timed: s.timed });
        }
        for r in self.right.silent(&s.right)? {
            out.push(ParState { left: s.left.clone(), right: r, pending: s.pending, timed: s.timed });
        }
        if self.collapse {
            if let Some(p) = s.pending.filter(Pending::fresh) {
                for (xl, xr) in self.splits(p.x) {
                    for (l, r) in self.read_split(s, xl, xr)? {
                        out.push(ParState { left: l, right: r, pending: Some(Pending { xl, xr, ..p }), timed: false });
                    }
                }
            }
        }
        Ok(out)
    }

    fn step(&mut self, s: &Self::State, letter: Letter) -> Result<Vec<Self::State>> {
        let mut out = Vec::new();
        if s.timed && !matches!(letter, Letter::Refuse(_)) {
            return Ok(out);
        }
        match letter {
            Letter::Timeout => {
                let (fl, fr) = self.flags()?;
                if fr.stable {
                    for l in self.left.step(&s.left, Letter::Timeout)? {
                        out.push(ParState { left: l, right: s.right.clone(), pending: None, timed: true });
                    }
                }
                if fl.stable {
                    for r in self.right.step(&s.right, Letter::Timeout)? {
                        out.push(ParState { left: s.left.clone(), right: r, pending: None, timed: true });
                    }
                }
            }
            Letter::Act(a) => {
                let bit = 1u64 << a;
                let mut p = s.pending;
                if let Some(p) = p.as_mut() {
                    p.ended.get_or_insert(p.x & bit != 0);
                }
                if self.sync & bit != 0 {
                    let ls = self.left.step(&s.left, letter)?;
                    if ls.is_empty() {
                        return Ok(out);
                    }
                    let rs = self.right.step(&s.right, letter)?;
                    let p = match p {
                        Some(mut p) => {
                            p.ended_l.get_or_insert(p.xl & bit != 0);
                            p.ended_r.get_or_insert(p.xr & bit != 0);
                            match settle(p) {
                                Some(p) => p,
                                None => return Ok(out),
                            }
                        }
                        None => None,
                    };
                    for l in &ls {
                        for r in &rs {
                            out.push(ParState { left: l.clone(), right: r.clone(), pending: p, timed: false });
                        }
                    }
                } else {
                    let mut pl = p;
                    if let Some(q) = pl.as_mut() {
                        q.ended_l.get_or_insert(q.xl & bit != 0);
                    }
                    if let Some(pl) = pl.map_or(Some(None), settle) {
                        for l in self.left.step(&s.left, letter)? {
                            out.push(ParState { left: l, right: s.right.clone(), pending: pl, timed: false });
                        }
                    }
                    let mut pr = p;
                    if let Some(q) = pr.as_mut() {
                        q.ended_r.get_or_insert(q.xr & bit != 0);
                    }
                    if let Some(pr) = pr.map_or(Some(None), settle) {
                        for r in self.right.step(&s.right, letter)? {
                            out.push(ParState { left: s.left.clone(), right: r, pending: pr, timed: false });
                        }
                    }
                }
            }
            Letter::Refuse(x) => {
                if let Some(mut p) = s.pending {
                    p.ended.get_or_insert(false);
                    p.ended_l.get_or_insert(false);
                    p.ended_r.get_or_insert(false);
                    if p.verdict() != Some(true) {
                        return Ok(out);
                    }
                }
                for (xl, xr) in self.splits(x) {
                    for (l, r) in self.read_split(s, xl, xr)? {
                        let pending = Pending { x, xl, xr, ended: None, ended_l: None, ended_r: None };
                        out.push(ParState { left: l, right: r, pending: Some(pending), timed: false });
                    }
                }
            }
        }
        Ok(out)
    }

    fn is_accepting(&mut self, s: &Self::State) -> Result<bool> {
        Ok(s.pending.is_none_or(|p| p.holds_at_end())
            && self.left.is_accepting(&s.left)?
            && self.right.is_accepting(&s.right)?)
    }

    fn root_flags(&mut self) -> Result<RootFlags> {
        let (l, r) = self.flags()?;
        Ok(RootFlags {
            stable: l.stable && r.stable,
            post_stable: (l.post_stable && r.post_stable) || (l.post_stable && r.stable) || (l.stable && r.post_stable),
        })
    }
}
