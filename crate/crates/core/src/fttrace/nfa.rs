use crate::sos::{StateId, StateSpace};
use crate::term::{Action, Term};
use crate::{Budget, Error, Result};

use super::alphabet::{Alphabet, Letter};
use super::automaton::{RootFlags, TraceAutomaton};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Mode {
    Neutral,
    /// The refusal has been read; the state may still idle or time out.
    Refusing(u64),
    /// A system time-out ended the refusal; an action from it must follow.
    Forced(u64),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NfaState {
    Root,
    RootTimeout,
    At(StateId, Mode),
}

#[derive(Clone, Default)]
struct Info {
    stable: bool,
    initials: u64,
    tau: Vec<StateId>,
    timeout: Vec<StateId>,
    acts: Vec<(u8, StateId)>,
}

/// Automaton over actions and refusal letters whose language is
/// `{σ | σ⊤ ∈ fft(P)}` restricted to Σ. The rooted variant also reads
/// `t X σ` words and reports `st`/`post-st`.
pub struct RefusalAutomaton {
    alphabet: Alphabet,
    space: StateSpace,
    root: StateId,
    rooted: bool,
    info: Vec<Option<Info>>,
}

impl RefusalAutomaton {
    pub fn new(p: &Term, alphabet: Alphabet, budget: &Budget) -> Result<Self> {
        Self::build(p, alphabet, budget, false)
    }

    pub fn rooted(p: &Term, alphabet: Alphabet, budget: &Budget) -> Result<Self> {
        Self::build(p, alphabet, budget, true)
    }

    fn build(p: &Term, alphabet: Alphabet, budget: &Budget, rooted: bool) -> Result<Self> {
        let mut space = StateSpace::new(*budget);
        let root = space.intern(p)?;
        Ok(RefusalAutomaton { alphabet, space, root, rooted, info: Vec::new() })
    }

    pub fn states_explored(&self) -> usize {
        self.space.len()
    }

    fn info(&mut self, x: StateId) -> Result<&Info> {
        let i = x as usize;
        if self.info.len() <= i {
            self.info.resize(i + 1, None);
        }
        if self.info[i].is_none() {
            let succ = self.space.successors(x)?.to_vec();
            let mut info = Info { stable: true, ..Info::default() };
            for (a, y) in succ {
                match a {
                    Action::Tau => {
                        info.stable = false;
                        info.tau.push(y);
                    }
                    Action::Timeout => info.timeout.push(y),
                    Action::Visible(n) => {
                        if let Some(k) = self.alphabet.index_of(&n) {
                            info.initials |= 1 << k;
                            info.acts.push((k, y));
                        }
                    }
                }
            }
            self.info[i] = Some(info);
        }
        Ok(self.info[i].as_ref().unwrap())
    }
}

/// Fails with [`Error::AlphabetTooLarge`] beyond the configured cap.
pub fn build_refusal_nfa(p: &Term, alphabet: Alphabet, budget: &Budget) -> Result<RefusalAutomaton> {
    if alphabet.len() > budget.max_alphabet {
        return Err(Error::AlphabetTooLarge { size: alphabet.len(), cap: budget.max_alphabet });
    }
    RefusalAutomaton::new(p, alphabet, budget)
}

impl TraceAutomaton for RefusalAutomaton {
    type State = NfaState;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn initial_states(&mut self) -> Result<Vec<NfaState>> {
        Ok(vec![if self.rooted { NfaState::Root } else { NfaState::At(self.root, Mode::Neutral) }])
    }

    fn silent(&mut self, s: &NfaState) -> Result<Vec<NfaState>> {
        let (x, mode) = match *s {
            NfaState::Root => return Ok(vec![NfaState::At(self.root, Mode::Neutral)]),
            NfaState::RootTimeout => return Ok(Vec::new()),
            NfaState::At(x, m) => (x, m),
        };
        let info = self.info(x)?;
        let mut out: Vec<NfaState> = info.tau.iter().map(|&y| NfaState::At(y, mode)).collect();
        if let Mode::Refusing(m) = mode {
            if info.stable && info.initials & m == 0 {
                out.push(NfaState::At(x, Mode::Neutral));
                for &y in &info.timeout {
                    out.push(NfaState::At(y, Mode::Refusing(m)));
                    if m != 0 {
                        out.push(NfaState::At(y, Mode::Forced(m)));
                    }
                }
            }
        }
        Ok(out)
    }

    fn step(&mut self, s: &NfaState, letter: Letter) -> Result<Vec<NfaState>> {
        let root = self.root;
        match (*s, letter) {
            (NfaState::Root, Letter::Timeout) => {
                Ok(if self.info(root)?.stable { vec![NfaState::RootTimeout] } else { Vec::new() })
            }
            (NfaState::RootTimeout, Letter::Refuse(m)) => {
                let info = self.info(root)?;
                if info.stable && info.initials & m == 0 {
                    Ok(info.timeout.iter().map(|&y| NfaState::At(y, Mode::Refusing(m))).collect())
                } else {
                    Ok(Vec::new())
                }
            }
            (NfaState::At(x, Mode::Neutral), Letter::Act(a)) => Ok(self
                .info(x)?
                .acts
                .iter()
                .filter(|(b, _)| *b == a)
                .map(|&(_, y)| NfaState::At(y, Mode::Neutral))
                .collect()),
            (NfaState::At(x, Mode::Neutral), Letter::Refuse(m)) => Ok(vec![NfaState::At(x, Mode::Refusing(m))]),
            (NfaState::At(x, Mode::Forced(m)), Letter::Act(a)) if m & (1 << a) != 0 => Ok(self
                .info(x)?
                .acts
                .iter()
                .filter(|(b, _)| *b == a)
                .map(|&(_, y)| NfaState::At(y, Mode::Neutral))
                .collect()),
            _ => Ok(Vec::new()),
        }
    }

    fn is_accepting(&mut self, s: &NfaState) -> Result<bool> {
        Ok(matches!(s, NfaState::At(_, Mode::Neutral)))
    }

    fn root_flags(&mut self) -> Result<RootFlags> {
        let root = self.root;
        let stable = self.info(root)?.stable;
        let post_stable = !stable && {
            let start = vec![NfaState::At(root, Mode::Neutral)];
            super::automaton::accepts_from(self, start, &[Letter::Refuse(0)])?
        };
        Ok(RootFlags { stable, post_stable })
    }
}
