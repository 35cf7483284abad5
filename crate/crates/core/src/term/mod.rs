//! Abstract syntax of CCSP with time-outs, plus the static checks.

mod parse;
mod print;

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Serialize, Serializer};

pub use parse::{parse_context, parse_spec, parse_term, ParseError};

/// An identifier: a visible action name or a process variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

pub type NameSet = BTreeSet<Name>;

/// A finite renaming relation: pairs `(from, to)`.
pub type Relation = BTreeSet<(Name, Name)>;

/// Builds a name set from string slices.
pub fn names<'a>(items: impl IntoIterator<Item = &'a str>) -> NameSet {
    items.into_iter().map(Name::new).collect()
}

/// Transition labels: visible actions, the internal action and the time-out.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Visible(Name),
    Tau,
    Timeout,
}

impl Action {
    pub fn visible(name: &str) -> Self {
        Action::Visible(Name::new(name))
    }

    pub fn name(&self) -> Option<&Name> {
        match self {
            Action::Visible(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Visible(n) => write!(f, "{n}"),
            Action::Tau => f.write_str("tau"),
            Action::Timeout => f.write_str("t"),
        }
    }
}

impl fmt::Debug for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Action {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A recursive specification: finitely many equations `X = E`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecSpec {
    equations: BTreeMap<Name, Term>,
}

impl RecSpec {
    pub fn new() -> Self {
        RecSpec::default()
    }

    pub fn from_equations(eqs: impl IntoIterator<Item = (Name, Term)>) -> Self {
        RecSpec { equations: eqs.into_iter().collect() }
    }

    /// Adds an equation, returning false if the variable was already bound.
    pub fn insert(&mut self, var: Name, body: Term) -> bool {
        if self.equations.contains_key(&var) {
            return false;
        }
        self.equations.insert(var, body);
        true
    }

    pub fn get(&self, var: &Name) -> Option<&Term> {
        self.equations.get(var)
    }

    pub fn contains(&self, var: &Name) -> bool {
        self.equations.contains_key(var)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Name> {
        self.equations.keys()
    }

    pub fn equations(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.equations.iter()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Variables free in some right-hand side and not bound by this spec.
    pub fn unbound_variables(&self) -> NameSet {
        self.equations.values().flat_map(|t| t.free_vars().iter().cloned()).filter(|v| !self.contains(v)).collect()
    }

    /// No infinite chain of unguarded occurrences (every prefix guards).
    pub fn is_guarded(&self) -> bool {
        self.acyclic(|_| true)
    }

    /// No infinite chain of occurrences outside time-out prefixes.
    pub fn is_time_guarded(&self) -> bool {
        self.acyclic(|a| *a == Action::Timeout)
    }

    fn acyclic(&self, guards: impl Fn(&Action) -> bool + Copy) -> bool {
        let edges: BTreeMap<&Name, NameSet> = self
            .equations
            .iter()
            .map(|(x, body)| {
                let mut out = NameSet::new();
                unguarded_occurrences(body, guards, &NameSet::new(), &mut out);
                out.retain(|y| self.contains(y));
                (x, out)
            })
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut colour: BTreeMap<&Name, u8> = BTreeMap::new();
        fn dfs<'a>(x: &'a Name, edges: &'a BTreeMap<&'a Name, NameSet>, colour: &mut BTreeMap<&'a Name, u8>) -> bool {
            colour.insert(x, 1);
            for y in &edges[x] {
                let (key, _) = edges.get_key_value(y).unwrap();
                match colour.get(key).copied().unwrap_or(0) {
                    1 => return false,
                    0 if !dfs(key, edges, colour) => return false,
                    _ => {}
                }
            }
            colour.insert(x, 2);
            true
        }
        for x in edges.keys() {
            if colour.get(x).copied().unwrap_or(0) == 0 && !dfs(x, &edges, &mut colour) {
                return false;
            }
        }
        true
    }
}

fn unguarded_occurrences(t: &Term, guards: impl Fn(&Action) -> bool + Copy, shadow: &NameSet, out: &mut NameSet) {
    match t.kind() {
        Kind::Nil => {}
        Kind::Prefix(a, body) => {
            if !guards(a) {
                unguarded_occurrences(body, guards, shadow, out);
            }
        }
        Kind::Choice(l, r) | Kind::Par(_, l, r) => {
            unguarded_occurrences(l, guards, shadow, out);
            unguarded_occurrences(r, guards, shadow, out);
        }
        Kind::Hide(_, body) | Kind::Rename(_, body) => unguarded_occurrences(body, guards, shadow, out),
        Kind::Var(x) => {
            if !shadow.contains(x) {
                out.insert(x.clone());
            }
        }
        Kind::Rec(_, spec) => {
            let mut inner = shadow.clone();
            inner.extend(spec.vars().cloned());
            for (_, body) in spec.equations() {
                unguarded_occurrences(body, guards, &inner, out);
            }
        }
    }
}

/// A process term; cheap to clone, hashed once at construction.
#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: Kind,
    hash: u64,
    free: Box<[Name]>,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Nil,
    Prefix(Action, Term),
    Choice(Term, Term),
    Par(Arc<NameSet>, Term, Term),
    Hide(Arc<NameSet>, Term),
    Rename(Arc<Relation>, Term),
    Var(Name),
    Rec(Name, Arc<RecSpec>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.kind == other.0.kind)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            std::cmp::Ordering::Equal
        } else {
            self.0.kind.cmp(&other.0.kind)
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn merge_free(a: &[Name], b: &[Name]) -> Box<[Name]> {
    let set: BTreeSet<&Name> = a.iter().chain(b.iter()).collect();
    set.into_iter().cloned().collect()
}

impl Term {
    pub fn from_kind(kind: Kind) -> Term {
        let free: Box<[Name]> = match &kind {
            Kind::Nil => Box::new([]),
            Kind::Prefix(_, b) | Kind::Hide(_, b) | Kind::Rename(_, b) => b.0.free.clone(),
            Kind::Choice(l, r) | Kind::Par(_, l, r) => merge_free(&l.0.free, &r.0.free),
            Kind::Var(x) => Box::new([x.clone()]),
            Kind::Rec(_, spec) => {
                let set: BTreeSet<&Name> =
                    spec.equations.values().flat_map(|t| t.0.free.iter()).filter(|v| !spec.contains(v)).collect();
                set.into_iter().cloned().collect()
            }
        };
        let mut h = DefaultHasher::new();
        kind.hash(&mut h);
        Term(Arc::new(Node { kind, hash: h.finish(), free }))
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn nil() -> Term {
        Term::from_kind(Kind::Nil)
    }

    pub fn prefix(action: Action, body: Term) -> Term {
        Term::from_kind(Kind::Prefix(action, body))
    }

    /// `a.body` for a visible action `a`.
    pub fn act(name: &str, body: Term) -> Term {
        Term::prefix(Action::visible(name), body)
    }

    pub fn tau(body: Term) -> Term {
        Term::prefix(Action::Tau, body)
    }

    pub fn timeout(body: Term) -> Term {
        Term::prefix(Action::Timeout, body)
    }

    pub fn choice(left: Term, right: Term) -> Term {
        Term::from_kind(Kind::Choice(left, right))
    }

    /// Left-nested choice over the summands, `0` when empty.
    pub fn sum(summands: impl IntoIterator<Item = Term>) -> Term {
        summands.into_iter().reduce(Term::choice).unwrap_or_else(Term::nil)
    }

    pub fn par(sync: NameSet, left: Term, right: Term) -> Term {
        Term::from_kind(Kind::Par(Arc::new(sync), left, right))
    }

    pub fn hide(hidden: NameSet, body: Term) -> Term {
        Term::from_kind(Kind::Hide(Arc::new(hidden), body))
    }

    pub fn rename(rel: Relation, body: Term) -> Term {
        Term::from_kind(Kind::Rename(Arc::new(rel), body))
    }

    pub fn var(name: &str) -> Term {
        Term::from_kind(Kind::Var(Name::new(name)))
    }

    pub fn rec(var: Name, spec: Arc<RecSpec>) -> Term {
        Term::from_kind(Kind::Rec(var, spec))
    }

    /// Free process variables, sorted.
    pub fn free_vars(&self) -> &[Name] {
        &self.0.free
    }

    pub fn is_closed(&self) -> bool {
        self.0.free.is_empty()
    }

    /// Every recursive specification occurring in the term is guarded.
    pub fn is_guarded(&self) -> bool {
        self.all_specs(&|s| s.is_guarded())
    }

    /// Every recursive specification occurring in the term is time guarded.
    pub fn is_time_guarded(&self) -> bool {
        self.all_specs(&|s| s.is_time_guarded())
    }

    fn all_specs(&self, check: &dyn Fn(&RecSpec) -> bool) -> bool {
        match self.kind() {
            Kind::Nil | Kind::Var(_) => true,
            Kind::Prefix(_, b) | Kind::Hide(_, b) | Kind::Rename(_, b) => b.all_specs(check),
            Kind::Choice(l, r) | Kind::Par(_, l, r) => l.all_specs(check) && r.all_specs(check),
            Kind::Rec(_, spec) => check(spec) && spec.equations.values().all(|t| t.all_specs(check)),
        }
    }

    /// Syntactic over-approximation of the visible actions the term can perform.
    pub fn sort(&self) -> NameSet {
        sort_in(self, &BTreeMap::new())
    }

    /// Number of operators (every node except `0` and variables).
    pub fn size(&self) -> usize {
        match self.kind() {
            Kind::Nil | Kind::Var(_) => 0,
            Kind::Prefix(_, b) | Kind::Hide(_, b) | Kind::Rename(_, b) => 1 + b.size(),
            Kind::Choice(l, r) | Kind::Par(_, l, r) => 1 + l.size() + r.size(),
            Kind::Rec(_, spec) => 1 + spec.equations.values().map(Term::size).sum::<usize>(),
        }
    }

    /// Replaces free occurrences of `var` by `with`.
    pub fn replace_var(&self, var: &Name, with: &Term) -> Term {
        if !self.0.free.contains(var) {
            return self.clone();
        }
        match self.kind() {
            Kind::Nil => self.clone(),
            Kind::Var(x) => {
                if x == var {
                    with.clone()
                } else {
                    self.clone()
                }
            }
            Kind::Prefix(a, b) => Term::prefix(a.clone(), b.replace_var(var, with)),
            Kind::Choice(l, r) => Term::choice(l.replace_var(var, with), r.replace_var(var, with)),
            Kind::Par(s, l, r) => {
                Term::from_kind(Kind::Par(s.clone(), l.replace_var(var, with), r.replace_var(var, with)))
            }
            Kind::Hide(i, b) => Term::from_kind(Kind::Hide(i.clone(), b.replace_var(var, with))),
            Kind::Rename(rel, b) => Term::from_kind(Kind::Rename(rel.clone(), b.replace_var(var, with))),
            Kind::Rec(x, spec) => {
                if spec.contains(var) {
                    return self.clone();
                }
                let eqs = spec.equations.iter().map(|(y, b)| (y.clone(), b.replace_var(var, with)));
                Term::rec(x.clone(), Arc::new(RecSpec::from_equations(eqs)))
            }
        }
    }

    /// The unfolding `<S_X|S>` of a recursion term, if this is one.
    pub fn unfold(&self) -> Option<Term> {
        match self.kind() {
            Kind::Rec(x, spec) => spec.get(x).map(|body| substitute(body, spec)),
            _ => None,
        }
    }
}

fn sort_in(t: &Term, env: &BTreeMap<Name, NameSet>) -> NameSet {
    match t.kind() {
        Kind::Nil => NameSet::new(),
        Kind::Var(x) => env.get(x).cloned().unwrap_or_default(),
        Kind::Prefix(a, b) => {
            let mut s = sort_in(b, env);
            if let Action::Visible(n) = a {
                s.insert(n.clone());
            }
            s
        }
        Kind::Choice(l, r) | Kind::Par(_, l, r) => {
            let mut s = sort_in(l, env);
            s.extend(sort_in(r, env));
            s
        }
        Kind::Hide(i, b) => sort_in(b, env).difference(i).cloned().collect(),
        Kind::Rename(rel, b) => {
            let inner = sort_in(b, env);
            rel.iter().filter(|(a, _)| inner.contains(a)).map(|(_, b)| b.clone()).collect()
        }
        Kind::Rec(x, spec) => {
            let mut env = env.clone();
            for y in spec.vars() {
                env.insert(y.clone(), NameSet::new());
            }
            loop {
                let mut changed = false;
                for (y, body) in spec.equations() {
                    let s = sort_in(body, &env);
                    if env[y] != s {
                        env.insert(y.clone(), s);
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            env.remove(x).unwrap_or_default()
        }
    }
}

/// `<E|S>`: replaces every free `Y` bound by `S` with `Rec(Y, S)`.
pub fn substitute(e: &Term, spec: &Arc<RecSpec>) -> Term {
    subst(e, spec, &NameSet::new())
}

fn subst(e: &Term, spec: &Arc<RecSpec>, shadow: &NameSet) -> Term {
    if !e.0.free.iter().any(|v| spec.contains(v) && !shadow.contains(v)) {
        return e.clone();
    }
    match e.kind() {
        Kind::Nil => e.clone(),
        Kind::Var(x) => Term::rec(x.clone(), spec.clone()),
        Kind::Prefix(a, b) => Term::prefix(a.clone(), subst(b, spec, shadow)),
        Kind::Choice(l, r) => Term::choice(subst(l, spec, shadow), subst(r, spec, shadow)),
        Kind::Par(s, l, r) => Term::from_kind(Kind::Par(s.clone(), subst(l, spec, shadow), subst(r, spec, shadow))),
        Kind::Hide(i, b) => Term::from_kind(Kind::Hide(i.clone(), subst(b, spec, shadow))),
        Kind::Rename(rel, b) => Term::from_kind(Kind::Rename(rel.clone(), subst(b, spec, shadow))),
        Kind::Rec(x, inner) => {
            let mut shadow = shadow.clone();
            shadow.extend(inner.vars().cloned());
            let eqs = inner.equations.iter().map(|(y, b)| (y.clone(), subst(b, spec, &shadow)));
            Term::rec(x.clone(), Arc::new(RecSpec::from_equations(eqs)))
        }
    }
}

/// Resolves a process reference against a specification: an equation name
/// or an inline term whose variables are bound by the specification.
pub fn resolve_process(text: &str, spec: &Arc<RecSpec>) -> crate::Result<Term> {
    let t = parse::parse_term_bound(text, spec.vars().cloned().collect())?;
    let closed = substitute(&t, spec);
    match closed.free_vars().first() {
        Some(v) => Err(crate::Error::OpenTerm(v.to_string())),
        None => Ok(closed),
    }
}
