use std::collections::HashMap;
use std::fmt;

use crate::term::{Name, NameSet};
use crate::{Error, Result};

use super::trace::{RootedElement, Symbol, Trace};

/// Hard ceiling on working-alphabet size for any letter-level computation.
pub const MAX_NAMES: usize = 16;

/// A letter of the automata: an action index, a refusal bitmask, or the
/// root-level time-out marker that may only start a word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Letter {
    Act(u8),
    Refuse(u64),
    Timeout,
}

/// A finite working alphabet Σ with a fixed name order.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<Name>,
    index: HashMap<Name, u8>,
    /// Refusal masks sorted by size, then by name order.
    refusals: Vec<u64>,
}

impl Alphabet {
    pub fn new(names: &NameSet) -> Result<Self> {
        if names.len() > MAX_NAMES {
            return Err(Error::AlphabetTooLarge { size: names.len(), cap: MAX_NAMES });
        }
        let names: Vec<Name> = names.iter().cloned().collect();
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i as u8)).collect();
        let mut refusals: Vec<u64> = (0..1u64 << names.len()).collect();
        refusals.sort_by_cached_key(|&m| (m.count_ones(), bits(m)));
        Ok(Alphabet { names, index, refusals })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn name_set(&self) -> NameSet {
        self.names.iter().cloned().collect()
    }

    pub fn name(&self, i: u8) -> &Name {
        &self.names[i as usize]
    }

    pub fn index_of(&self, n: &Name) -> Option<u8> {
        self.index.get(n).copied()
    }

    pub fn full_mask(&self) -> u64 {
        if self.names.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.names.len()) - 1
        }
    }

    /// Mask of the members of `set` that lie in Σ.
    pub fn mask_of(&self, set: &NameSet) -> u64 {
        set.iter().filter_map(|n| self.index_of(n)).fold(0, |m, i| m | (1 << i))
    }

    /// Like [`Alphabet::mask_of`] but fails if `set` leaves Σ.
    pub fn exact_mask(&self, set: &NameSet) -> Option<u64> {
        let mut m = 0;
        for n in set {
            m |= 1 << self.index_of(n)?;
        }
        Some(m)
    }

    pub fn set_of(&self, mask: u64) -> NameSet {
        bits(mask).into_iter().map(|i| self.names[i as usize].clone()).collect()
    }

    /// Refusal masks in canonical order.
    pub fn refusals(&self) -> &[u64] {
        &self.refusals
    }

    /// All letters in witness order: actions, refusals, then optionally `t`.
    pub fn letters(&self, with_timeout: bool) -> Vec<Letter> {
        let mut out: Vec<Letter> = (0..self.names.len() as u8).map(Letter::Act).collect();
        out.extend(self.refusals.iter().map(|&m| Letter::Refuse(m)));
        if with_timeout {
            out.push(Letter::Timeout);
        }
        out
    }

    pub fn symbol(&self, l: Letter) -> Option<Symbol> {
        match l {
            Letter::Act(i) => Some(Symbol::Action(self.name(i).clone())),
            Letter::Refuse(m) => Some(Symbol::Refusal(self.set_of(m))),
            Letter::Timeout => None,
        }
    }

    /// `None` if the symbol mentions a name outside Σ.
    pub fn letter(&self, s: &Symbol) -> Option<Letter> {
        match s {
            Symbol::Action(a) => self.index_of(a).map(Letter::Act),
            Symbol::Refusal(x) => self.exact_mask(x).map(Letter::Refuse),
        }
    }

    pub fn word(&self, t: &Trace) -> Option<Vec<Letter>> {
        t.symbols().iter().map(|s| self.letter(s)).collect()
    }

    /// Letters of a rooted element; `None` for the `st`/`post-st` tags.
    pub fn rooted_word(&self, e: &RootedElement) -> Option<Vec<Letter>> {
        match e {
            RootedElement::Plain(t) => self.word(t),
            RootedElement::TimeoutPrefixed(x, rest) => {
                let mut w = vec![Letter::Timeout, Letter::Refuse(self.exact_mask(x)?)];
                w.extend(self.word(rest)?);
                Some(w)
            }
            _ => None,
        }
    }

    pub fn trace(&self, word: &[Letter]) -> Trace {
        Trace::new(word.iter().filter_map(|&l| self.symbol(l)).collect())
    }

    pub fn element(&self, word: &[Letter]) -> RootedElement {
        match word {
            [Letter::Timeout, Letter::Refuse(x), rest @ ..] => {
                RootedElement::TimeoutPrefixed(self.set_of(*x), self.trace(rest))
            }
            _ => RootedElement::Plain(self.trace(word)),
        }
    }
}

fn bits(mask: u64) -> Vec<u8> {
    (0..64u8).filter(|i| mask & (1 << i) != 0).collect()
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::trace::fmt_set(&self.name_set()))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::names;

    #[test]
    fn refusal_order_is_size_then_names() {
        let s = Alphabet::new(&names(["a", "b", "c"])).unwrap();
        let sets: Vec<String> = s.refusals().iter().map(|&m| super::super::trace::fmt_set(&s.set_of(m))).collect();
        assert_eq!(sets, ["{}", "{a}", "{b}", "{c}", "{a,b}", "{a,c}", "{b,c}", "{a,b,c}"]);
    }

    #[test]
    fn element_round_trip() {
        let s = Alphabet::new(&names(["a", "b"])).unwrap();
        let e: RootedElement = "t {a,b} b top".parse().unwrap();
        let w = s.rooted_word(&e).unwrap();
        assert_eq!(s.element(&w), e);
    }
}
