use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::term::{Name, NameSet};
use crate::{Error, Result};

/// One position of a partial failure trace: an action or a refusal set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    Action(Name),
    Refusal(NameSet),
}

impl Symbol {
    pub fn action(name: &str) -> Self {
        Symbol::Action(Name::new(name))
    }

    pub fn refusal<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        Symbol::Refusal(crate::term::names(names))
    }

    pub fn is_refusal(&self) -> bool {
        matches!(self, Symbol::Refusal(_))
    }
}

/// Actions before refusals; refusal sets by size, then by their names.
impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Symbol::Action(a), Symbol::Action(b)) => a.cmp(b),
            (Symbol::Action(_), Symbol::Refusal(_)) => Ordering::Less,
            (Symbol::Refusal(_), Symbol::Action(_)) => Ordering::Greater,
            (Symbol::Refusal(x), Symbol::Refusal(y)) => x.len().cmp(&y.len()).then_with(|| x.cmp(y)),
        }
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_set(set: &NameSet) -> String {
    let inner: Vec<&str> = set.iter().map(Name::as_str).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Action(a) => write!(f, "{a}"),
            Symbol::Refusal(x) => f.write_str(&fmt_set(x)),
        }
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A partial failure trace `σ⊤`; the terminal tag is implicit.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace(pub Vec<Symbol>);

impl Trace {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Trace(symbols)
    }

    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff the refusal at `i` is followed by an action it contains.
    pub fn is_system_ended(&self, i: usize) -> Result<bool> {
        match self.0.get(i) {
            Some(Symbol::Refusal(x)) => Ok(matches!(self.0.get(i + 1), Some(Symbol::Action(a)) if x.contains(a))),
            _ => Err(Error::InvalidPosition(i)),
        }
    }

    /// The action sequence obtained by deleting all refusal sets.
    pub fn project(&self) -> Vec<Name> {
        self.0
            .iter()
            .filter_map(|s| match s {
                Symbol::Action(a) => Some(a.clone()),
                Symbol::Refusal(_) => None,
            })
            .collect()
    }

    /// Every action name and refusal member occurring in the trace.
    pub fn names(&self) -> NameSet {
        let mut out = NameSet::new();
        for s in &self.0 {
            match s {
                Symbol::Action(a) => {
                    out.insert(a.clone());
                }
                Symbol::Refusal(x) => out.extend(x.iter().cloned()),
            }
        }
        out
    }

    /// Length first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.cmp(other))
    }

    /// Traces obtained by removing one copy of an adjacent duplicated refusal.
    fn collapses(&self) -> impl Iterator<Item = Trace> + '_ {
        (0..self.0.len().saturating_sub(1)).filter(|&i| self.0[i].is_refusal() && self.0[i] == self.0[i + 1]).map(|i| {
            let mut v = self.0.clone();
            v.remove(i);
            Trace(v)
        })
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s} ")?;
        }
        f.write_str("top")
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Trace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn tokens(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '{' {
            let mut tok = String::new();
            loop {
                match chars.next() {
                    Some('}') => {
                        tok.push('}');
                        break;
                    }
                    Some(ch) if !ch.is_whitespace() => tok.push(ch),
                    Some(_) => {}
                    None => return Err(Error::Invalid(format!("unterminated refusal set in `{text}`"))),
                }
            }
            out.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&ch) = chars.peek() {
                if ch.is_whitespace() || ch == '{' {
                    break;
                }
                tok.push(ch);
                chars.next();
            }
            out.push(tok);
        }
    }
    Ok(out)
}

fn valid_action(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase())
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !["tau", "t", "top"].contains(&s)
}

fn parse_symbols(toks: &[String]) -> Result<Trace> {
    let mut out = Vec::new();
    for (i, tok) in toks.iter().enumerate() {
        if tok == "top" {
            if i + 1 != toks.len() {
                return Err(Error::Invalid("`top` must end the trace".into()));
            }
        } else if let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let mut set = NameSet::new();
            for n in inner.split(',').filter(|n| !n.is_empty()) {
                if !valid_action(n) {
                    return Err(Error::Invalid(format!("`{n}` is not an action name")));
                }
                set.insert(Name::new(n));
            }
            out.push(Symbol::Refusal(set));
        } else if valid_action(tok) {
            out.push(Symbol::Action(Name::new(tok)));
        } else {
            return Err(Error::Invalid(format!("unexpected token `{tok}` in trace")));
        }
    }
    Ok(Trace(out))
}

impl FromStr for Trace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_symbols(&tokens(s)?)
    }
}

/// An element of a rooted partial failure trace set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootedElement {
    Plain(Trace),
    /// `st`: the process has no τ-transition.
    Stable,
    /// `post-st`: the process has a τ-transition and `∅⊤` is a partial failure trace.
    PostStable,
    /// `t X σ`: a time-out from the stable root followed by `Xσ`.
    TimeoutPrefixed(NameSet, Trace),
}

impl RootedElement {
    /// Number of trace symbols; the leading `t` is not counted.
    pub fn len(&self) -> usize {
        match self {
            RootedElement::Plain(t) => t.len(),
            RootedElement::Stable | RootedElement::PostStable => 0,
            RootedElement::TimeoutPrefixed(_, rest) => 1 + rest.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_plain(&self) -> Option<&Trace> {
        match self {
            RootedElement::Plain(t) => Some(t),
            _ => None,
        }
    }

    /// Names mentioned anywhere in the element.
    pub fn names(&self) -> NameSet {
        match self {
            RootedElement::Plain(t) => t.names(),
            RootedElement::Stable | RootedElement::PostStable => NameSet::new(),
            RootedElement::TimeoutPrefixed(x, rest) => {
                let mut n = rest.names();
                n.extend(x.iter().cloned());
                n
            }
        }
    }
}

impl From<Trace> for RootedElement {
    fn from(t: Trace) -> Self {
        RootedElement::Plain(t)
    }
}

impl fmt::Display for RootedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootedElement::Plain(t) => write!(f, "{t}"),
            RootedElement::Stable => f.write_str("st"),
            RootedElement::PostStable => f.write_str("post-st"),
            RootedElement::TimeoutPrefixed(x, rest) => write!(f, "t {} {rest}", fmt_set(x)),
        }
    }
}

impl fmt::Debug for RootedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RootedElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for RootedElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = tokens(s)?;
        match toks.first().map(String::as_str) {
            Some("st") if toks.len() == 1 => Ok(RootedElement::Stable),
            Some("post-st") if toks.len() == 1 => Ok(RootedElement::PostStable),
            Some("t") => {
                let rest = parse_symbols(&toks[1..])?;
                match rest.0.split_first() {
                    Some((Symbol::Refusal(x), tail)) => {
                        Ok(RootedElement::TimeoutPrefixed(x.clone(), Trace(tail.to_vec())))
                    }
                    _ => Err(Error::Invalid("`t` must be followed by a refusal set".into())),
                }
            }
            _ => Ok(RootedElement::Plain(parse_symbols(&toks)?)),
        }
    }
}

/// Closure under collapsing adjacent duplicated refusals: `σXXρ ↦ σXρ`.
pub fn col_closure(set: &BTreeSet<RootedElement>) -> BTreeSet<RootedElement> {
    let mut out = set.clone();
    let mut work: Vec<RootedElement> = set.iter().cloned().collect();
    while let Some(e) = work.pop() {
        let next: Vec<RootedElement> = match &e {
            RootedElement::Plain(t) => t.collapses().map(RootedElement::Plain).collect(),
            RootedElement::TimeoutPrefixed(x, rest) => {
                let mut whole = vec![Symbol::Refusal(x.clone())];
                whole.extend(rest.0.iter().cloned());
                Trace(whole)
                    .collapses()
                    .map(|t| match t.0.split_first() {
                        Some((Symbol::Refusal(x), tail)) => {
                            RootedElement::TimeoutPrefixed(x.clone(), Trace(tail.to_vec()))
                        }
                        _ => unreachable!("collapsing keeps the leading refusal"),
                    })
                    .collect()
            }
            _ => Vec::new(),
        };
        for n in next {
            if out.insert(n.clone()) {
                work.push(n);
            }
        }
    }
    out
}

/// [`col_closure`] on plain traces.
pub fn col_closure_traces(set: &BTreeSet<Trace>) -> BTreeSet<Trace> {
    let rooted: BTreeSet<RootedElement> = set.iter().cloned().map(RootedElement::Plain).collect();
    col_closure(&rooted).into_iter().filter_map(|e| e.as_plain().cloned()).collect()
}
