use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::fttrace::{elements_of, Alphabet, Letter, RootFlags, RootedElement, Trace, TraceAutomaton};
use crate::term::{Name, NameSet};
use crate::{Error, Result};

/// A finite set of (rooted) partial failure traces over Σ, up to a depth.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSet {
    pub alphabet: NameSet,
    pub depth: usize,
    pub elements: BTreeSet<RootedElement>,
}

impl TraceSet {
    pub fn new(alphabet: NameSet, depth: usize) -> Self {
        TraceSet { alphabet, depth, elements: BTreeSet::new() }
    }

    pub fn from_elements(alphabet: NameSet, depth: usize, elements: impl IntoIterator<Item = RootedElement>) -> Self {
        TraceSet { alphabet, depth, elements: elements.into_iter().collect() }
    }

    pub fn from_traces(alphabet: NameSet, depth: usize, traces: impl IntoIterator<Item = Trace>) -> Self {
        Self::from_elements(alphabet, depth, traces.into_iter().map(RootedElement::Plain))
    }

    /// Elements of a rooted automaton, enumerated at `depth`.
    pub fn from_automaton<A: TraceAutomaton>(aut: A, depth: usize) -> Result<Self> {
        let alphabet = aut.alphabet().name_set();
        Ok(TraceSet { alphabet, depth, elements: elements_of(aut, depth)? })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &RootedElement) -> bool {
        self.elements.contains(e)
    }

    pub fn contains_trace(&self, t: &Trace) -> bool {
        self.elements.contains(&RootedElement::Plain(t.clone()))
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> {
        self.elements.iter().filter_map(RootedElement::as_plain)
    }

    pub fn is_stable(&self) -> bool {
        self.elements.contains(&RootedElement::Stable)
    }

    pub fn is_post_stable(&self) -> bool {
        self.elements.contains(&RootedElement::PostStable)
    }

    /// Actions starting some plain trace; the initials when the set is stable.
    pub fn initial_actions(&self) -> NameSet {
        self.traces()
            .filter_map(|t| match t.symbols().first() {
                Some(crate::fttrace::Symbol::Action(a)) => Some(a.clone()),
                _ => None,
            })
            .collect()
    }

    /// Only the plain traces.
    pub fn plain(&self) -> TraceSet {
        Self::from_elements(self.alphabet.clone(), self.depth, self.traces().cloned().map(RootedElement::Plain))
    }

    /// Keeps the elements of at most `depth` symbols.
    pub fn truncate(&self, depth: usize) -> TraceSet {
        let depth = depth.min(self.depth);
        Self::from_elements(self.alphabet.clone(), depth, self.elements.iter().filter(|e| e.len() <= depth).cloned())
    }

    pub fn automaton(&self) -> Result<SetAutomaton> {
        SetAutomaton::new(self)
    }

    /// Header line recording Σ and depth, then one element per line.
    pub fn to_text(&self) -> String {
        let names: Vec<&str> = self.alphabet.iter().map(Name::as_str).collect();
        let mut out = format!("# alphabet {{{}}} depth {}\n", names.join(","), self.depth);
        for e in &self.elements {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for TraceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for TraceSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Invalid("empty trace set".into()))?;
        let bad = || Error::Invalid(format!("bad trace set header `{header}`"));
        let rest = header.strip_prefix('#').ok_or_else(bad)?.trim();
        let rest = rest.strip_prefix("alphabet").ok_or_else(bad)?.trim();
        let close = rest.find('}').ok_or_else(bad)?;
        let set = rest[..close].strip_prefix('{').ok_or_else(bad)?;
        let alphabet: NameSet = set.split(',').map(str::trim).filter(|n| !n.is_empty()).map(Name::new).collect();
        let depth =
            rest[close + 1..].trim().strip_prefix("depth").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let mut out = TraceSet::new(alphabet, depth);
        for l in lines {
            out.elements.insert(l.parse()?);
        }
        Ok(out)
    }
}

#[derive(Default)]
struct Node {
    next: BTreeMap<Letter, usize>,
    accept: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SetState {
    Root,
    Node(usize),
}

/// A rooted trie automaton accepting exactly the elements of a [`TraceSet`].
pub struct SetAutomaton {
    alphabet: Alphabet,
    nodes: Vec<Node>,
    timeout_root: Option<usize>,
    flags: RootFlags,
}

impl SetAutomaton {
    pub fn new(set: &TraceSet) -> Result<Self> {
        let alphabet = Alphabet::new(&set.alphabet)?;
        let mut aut = SetAutomaton {
            alphabet,
            nodes: vec![Node::default()],
            timeout_root: None,
            flags: RootFlags { stable: set.is_stable(), post_stable: set.is_post_stable() },
        };
        for e in &set.elements {
            let Some(word) = aut.alphabet.rooted_word(e) else { continue };
            let (mut at, rest) = match word.split_first() {
                Some((Letter::Timeout, rest)) => {
                    let root = match aut.timeout_root {
                        Some(r) => r,
                        None => {
                            aut.nodes.push(Node::default());
                            aut.timeout_root = Some(aut.nodes.len() - 1);
                            aut.nodes.len() - 1
                        }
                    };
                    (root, rest)
                }
                _ => (0, &word[..]),
            };
            for &l in rest {
                at = match aut.nodes[at].next.get(&l) {
                    Some(&n) => n,
                    None => {
                        aut.nodes.push(Node::default());
                        let n = aut.nodes.len() - 1;
                        aut.nodes[at].next.insert(l, n);
                        n
                    }
                };
            }
            aut.nodes[at].accept = true;
        }
        aut.share_subtrees();
        Ok(aut)
    }

    /// Merges nodes with identical subtrees, turning the trie into a DAG.
    /// Children always have larger indices than their parents.
    fn share_subtrees(&mut self) {
        type Sig = (bool, bool, Vec<(Letter, usize)>);
        let n = self.nodes.len();
        let mut canon = vec![0usize; n];
        let mut ids: std::collections::HashMap<Sig, usize> = std::collections::HashMap::new();
        let mut shared: Vec<Node> = Vec::new();
        for i in (0..n).rev() {
            let next: Vec<(Letter, usize)> = self.nodes[i].next.iter().map(|(&l, &c)| (l, canon[c])).collect();
            let sig = (self.nodes[i].accept, Some(i) == self.timeout_root, next);
            canon[i] = *ids.entry(sig.clone()).or_insert_with(|| {
                shared.push(Node { next: sig.2.iter().copied().collect(), accept: sig.0 });
                shared.len() - 1
            });
        }
        // keep the root at index 0
        let root = canon[0];
        let swap = |x: usize| {
            if x == root {
                0
            } else if x == 0 {
                root
            } else {
                x
            }
        };
        shared.swap(0, root);
        for node in &mut shared {
            for c in node.next.values_mut() {
                *c = swap(*c);
            }
        }
        self.timeout_root = self.timeout_root.map(|t| swap(canon[t]));
        self.nodes = shared;
    }
}

impl TraceAutomaton for SetAutomaton {
    type State = SetState;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn initial_states(&mut self) -> Result<Vec<SetState>> {
        Ok(vec![SetState::Root])
    }

    fn silent(&mut self, s: &SetState) -> Result<Vec<SetState>> {
        Ok(match s {
            SetState::Root => vec![SetState::Node(0)],
            SetState::Node(_) => Vec::new(),
        })
    }

    fn step(&mut self, s: &SetState, letter: Letter) -> Result<Vec<SetState>> {
        Ok(match (s, letter) {
            (SetState::Root, Letter::Timeout) => self.timeout_root.map(SetState::Node).into_iter().collect(),
            (SetState::Node(n), l) => self.nodes[*n].next.get(&l).map(|&m| SetState::Node(m)).into_iter().collect(),
            _ => Vec::new(),
        })
    }

    fn is_accepting(&mut self, s: &SetState) -> Result<bool> {
        Ok(matches!(s, SetState::Node(n) if self.nodes[*n].accept && Some(*n) != self.timeout_root))
    }

    fn root_flags(&mut self) -> Result<RootFlags> {
        Ok(self.flags)
    }
}
