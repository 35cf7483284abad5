use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::term::{Action, Name, NameSet, RecSpec, Relation, Term};

pub const NAMES: [&str; 4] = ["a", "b", "c", "d"];

/// Seeded generator of closed, time-guarded terms.
pub struct Sampler {
    rng: ChaCha8Rng,
    names: Vec<Name>,
    /// Upper bound on the operator count of one sampled term.
    pub max_ops: usize,
    /// Allow recursion, parallel composition, hiding and renaming.
    pub rich: bool,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler::with_names(seed, &NAMES)
    }

    pub fn with_names(seed: u64, names: &[&str]) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            names: names.iter().map(|n| Name::new(n)).collect(),
            max_ops: 12,
            rich: true,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn name(&mut self) -> Name {
        self.names.choose(&mut self.rng).expect("nonempty alphabet").clone()
    }

    pub fn action(&mut self) -> Action {
        match self.rng.gen_range(0..6) {
            0 => Action::Tau,
            1 => Action::Timeout,
            _ => Action::Visible(self.name()),
        }
    }

    pub fn subset(&mut self) -> NameSet {
        let names = self.names.clone();
        names.into_iter().filter(|_| self.rng.gen_bool(0.4)).collect()
    }

    pub fn nonempty_subset(&mut self) -> NameSet {
        let mut s = self.subset();
        if s.is_empty() {
            s.insert(self.name());
        }
        s
    }

    /// A relation giving every name one or two images.
    pub fn relation(&mut self) -> Relation {
        let mut rel = Relation::new();
        for a in self.names.clone() {
            let n = if self.rng.gen_bool(0.25) { 2 } else { 1 };
            for _ in 0..n {
                let b = self.name();
                rel.insert((a.clone(), b));
            }
        }
        rel
    }

    /// A closed time-guarded term with at most `max_ops` operators.
    pub fn term(&mut self) -> Term {
        let budget = self.rng.gen_range(0..=self.max_ops);
        self.gen(budget)
    }

    /// Same as [`Sampler::term`] with a smaller operator budget.
    pub fn small_term(&mut self, max_ops: usize) -> Term {
        let budget = self.rng.gen_range(0..=max_ops);
        self.gen(budget)
    }

    fn gen(&mut self, ops: usize) -> Term {
        if ops == 0 {
            return Term::nil();
        }
        let pick = if self.rich { self.rng.gen_range(0..20) } else { self.rng.gen_range(0..14) };
        match pick {
            0..=7 => {
                let a = self.action();
                let body = self.gen(ops - 1);
                Term::prefix(a, body)
            }
            8..=13 if ops >= 3 => {
                let k = self.rng.gen_range(1..ops - 1);
                Term::choice(self.gen(k), self.gen(ops - 1 - k))
            }
            14 | 15 if ops >= 3 => {
                let k = self.rng.gen_range(1..ops - 1);
                let sync = self.subset();
                Term::par(sync, self.gen(k), self.gen(ops - 1 - k))
            }
            16 => {
                let i = self.nonempty_subset();
                Term::hide(i, self.gen(ops - 1))
            }
            17 => {
                let r = self.relation();
                Term::rename(r, self.gen(ops - 1))
            }
            18 | 19 if ops >= 3 => self.recursion(ops),
            _ => {
                let a = self.action();
                Term::prefix(a, self.gen(ops - 1))
            }
        }
    }

    /// `<X | X = E>` where every `X` in `E` sits below a time-out and only
    /// prefixes and choices surround it, so the state space stays finite.
    pub fn recursion(&mut self, ops: usize) -> Term {
        let x = Name::new("X");
        let body = self.rec_body(ops - 1, &x, false);
        let spec = Arc::new(RecSpec::from_equations([(x.clone(), body)]));
        Term::rec(x, spec)
    }

    fn rec_body(&mut self, ops: usize, x: &Name, timed: bool) -> Term {
        if ops == 0 {
            return if timed && self.rng.gen_bool(0.7) { Term::var(x.as_str()) } else { Term::nil() };
        }
        if ops >= 3 && self.rng.gen_bool(0.3) {
            let k = self.rng.gen_range(1..ops - 1);
            return Term::choice(self.rec_body(k, x, timed), self.rec_body(ops - 1 - k, x, timed));
        }
        let a = self.action();
        let timed = timed || a == Action::Timeout;
        Term::prefix(a, self.rec_body(ops - 1, x, timed))
    }

    /// A head normal form `Σ αᵢ.Pᵢ` with small continuations.
    pub fn head_normal_form(&mut self, summands: usize) -> Vec<(Action, Term)> {
        (0..summands)
            .map(|_| {
                let a = self.action();
                let p = self.small_term(3);
                (a, p)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_are_closed_time_guarded_and_small() {
        let mut s = Sampler::new(7);
        for _ in 0..300 {
            let t = s.term();
            assert!(t.is_closed(), "{t}");
            assert!(t.is_time_guarded(), "{t}");
            assert!(t.size() <= 12, "{t}");
        }
    }

    #[test]
    fn deterministic() {
        let a: Vec<String> = (0..5).map(|_| Sampler::new(3).term().to_string()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
    }
}
