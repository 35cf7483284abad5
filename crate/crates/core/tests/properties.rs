mod common;

use std::sync::Arc;

use ccspt::denote::{ini_z, TraceSet};
use ccspt::fttrace::{
    ft_enumerate, ft_member, rft_equiv, rft_preorder, rooted_elements, Alphabet, CheckOptions, RefusalAutomaton,
    Symbol, Trace,
};
use ccspt::sos::{bisimilar, hnf, initials, is_stable, outgoing};
use ccspt::term::{names, parse_spec, parse_term, substitute, Name, NameSet, RecSpec, Relation, Term};
use ccspt::testing::{build_test, check_duality, fresh_rename, is_fresh, may_verdict, member_by_test, safety_holds};
use ccspt::Budget;
use common::{plain_term, random_trace, subsets, term};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AB: [&str; 2] = ["a", "b"];

fn budget() -> Budget {
    Budget::default()
}

fn member(p: &Term, s: &Trace) -> bool {
    ft_member(p, s, &budget()).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `σ X ρ` split around a random refusal position; None if σXρ has no refusal.
fn with_refusal(seed: u64) -> (Trace, Trace, NameSet) {
    let mut r = rng(seed);
    let sigma = random_trace(&mut r, &AB, 2);
    let rho = random_trace(&mut r, &AB, 2);
    let x = subsets(&AB)[r.gen_range(0..4)].clone();
    (sigma, rho, x)
}

fn join(sigma: &Trace, mid: &[Symbol], rho: &Trace) -> Trace {
    let mut v = sigma.symbols().to_vec();
    v.extend(mid.iter().cloned());
    v.extend(rho.symbols().iter().cloned());
    Trace::new(v)
}

/// Random specification text over variables X, Y, possibly unguarded.
fn spec_text(seed: u64) -> String {
    let mut r = rng(seed);
    fn body(r: &mut ChaCha8Rng, d: usize) -> String {
        match if d == 0 { r.gen_range(0..3) } else { r.gen_range(0..7) } {
            0 => "0".into(),
            1 => "X".into(),
            2 => "Y".into(),
            3 => format!("a.{}", body(r, d - 1)),
            4 => format!("t.{}", body(r, d - 1)),
            5 => format!("tau.{}", body(r, d - 1)),
            _ => format!("({} + {})", body(r, d - 1), body(r, d - 1)),
        }
    }
    format!("X = {};\nY = {};\n", body(&mut r, 3), body(&mut r, 3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let p = term(seed, &["a", "b", "c"], 12);
        let back = parse_term(&p.to_string()).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(parse_term(&back.to_string()).unwrap(), back);
    }

    #[test]
    fn time_guarded_specs_are_guarded(seed in any::<u64>()) {
        let spec = parse_spec(&spec_text(seed)).unwrap();
        if spec.is_time_guarded() {
            prop_assert!(spec.is_guarded());
        }
    }

    #[test]
    fn substitute_leaves_closed_terms_alone(seed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let spec = Arc::new(RecSpec::from_equations([(Name::new("Z"), parse_term("a.Z").unwrap())]));
        prop_assert_eq!(substitute(&p, &spec), p.clone());
        prop_assert_eq!(substitute(&substitute(&p, &spec), &spec), p);
    }

    #[test]
    fn successors_of_closed_terms_are_closed(seed in any::<u64>()) {
        let p = term(seed, &AB, 12);
        for (_, q) in outgoing(&p).unwrap() {
            prop_assert!(q.is_closed(), "{}", q);
        }
    }

    #[test]
    fn head_normal_form_is_bisimilar(seed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let h = hnf(&p).unwrap().to_term();
        prop_assert!(bisimilar(&p, &h, budget()).unwrap(), "{} vs {}", p, h);
    }

    #[test]
    fn bisimilar_pairs_agree_on_stability_and_rooted_elements(seed in any::<u64>()) {
        let p = term(seed, &AB, 8);
        let sigma = names(AB);
        for q in [hnf(&p).unwrap().to_term(), Term::choice(p.clone(), p.clone())] {
            prop_assert!(bisimilar(&p, &q, budget()).unwrap());
            prop_assert!(bisimilar(&q, &p, budget()).unwrap());
            prop_assert_eq!(is_stable(&p).unwrap(), is_stable(&q).unwrap());
            prop_assert_eq!(initials(&p).unwrap(), initials(&q).unwrap());
            prop_assert_eq!(
                rooted_elements(&p, 3, &sigma, &budget()).unwrap(),
                rooted_elements(&q, 3, &sigma, &budget()).unwrap()
            );
        }
    }

    #[test]
    fn doubling_a_refusal(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let (sigma, rho, x) = with_refusal(tseed);
        let once = join(&sigma, &[Symbol::Refusal(x.clone())], &rho);
        let twice = join(&sigma, &[Symbol::Refusal(x.clone()), Symbol::Refusal(x)], &rho);
        prop_assert_eq!(member(&p, &once), member(&p, &twice), "{} / {}", p, once);
    }

    #[test]
    fn padding_with_a_fresh_action(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let (sigma, rho, x) = with_refusal(tseed);
        let mut padded = x.clone();
        padded.insert(Name::new("f"));
        let plain = join(&sigma, &[Symbol::Refusal(x)], &rho);
        let wide = join(&sigma, &[Symbol::Refusal(padded)], &rho);
        prop_assert_eq!(member(&p, &plain), member(&p, &wide), "{} / {}", p, plain);
    }

    #[test]
    fn refusals_close_downward_unless_system_ended(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let (sigma, rho, x) = with_refusal(tseed);
        let whole = join(&sigma, &[Symbol::Refusal(x.clone())], &rho);
        let ended = matches!(rho.symbols().first(), Some(Symbol::Action(a)) if x.contains(a));
        if !ended && member(&p, &whole) {
            for y in subsets(&AB).into_iter().filter(|y| y.is_subset(&x)) {
                let smaller = join(&sigma, &[Symbol::Refusal(y)], &rho);
                prop_assert!(member(&p, &smaller), "{} / {}", p, smaller);
            }
        }
    }

    #[test]
    fn stable_initials_cannot_follow_their_refusal(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        if let Some(init) = initials(&p).unwrap() {
            let eta = random_trace(&mut rng(tseed), &AB, 2);
            for x in subsets(&AB).into_iter().filter(|x| x.is_disjoint(&init)) {
                for a in &x {
                    let mut v = vec![Symbol::Action(a.clone())];
                    v.extend(eta.symbols().iter().cloned());
                    prop_assert!(!member(&p, &Trace::new(v)), "{} can do {}", p, a);
                }
            }
        }
    }

    #[test]
    fn tau_absorbs_a_timeout_alternative(seed in any::<u64>()) {
        let p = term(seed, &AB, 6);
        let q = term(seed.wrapping_add(1), &AB, 6);
        let lhs = Term::choice(Term::tau(p.clone()), Term::timeout(q));
        let v = rft_equiv(&lhs, &Term::tau(p), &CheckOptions::bounded(4)).unwrap();
        prop_assert!(v.holds, "{}", v);
    }

    #[test]
    fn renaming_away_the_bad_action(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &["a", "b", "c"], 10);
        let b = Name::new("b");
        let r = fresh_rename(&p, &b);
        prop_assert!(is_fresh(&b, &r, &budget()).unwrap());
        prop_assert!(!r.sort().contains(&b));
        let mut g = rng(tseed);
        let s = random_trace(&mut g, &["a", "c"], 3);
        prop_assert_eq!(member(&p, &s), member(&r, &s));
    }

    #[test]
    fn may_verdict_ignores_the_choice_of_fresh_name(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &["a", "b", "c"], 8);
        let b = Name::new("b");
        let away = |to: &str| {
            let rel: Relation = p.sort().iter().map(|n| (n.clone(), if *n == b { Name::new(to) } else { n.clone() })).collect();
            Term::rename(rel, p.clone())
        };
        let mut g = rng(tseed);
        let s = random_trace(&mut g, &["a", "c"], 3);
        let t = build_test(&s, &b).unwrap();
        let one = may_verdict(&t, &away("b'"), &b, &budget()).unwrap();
        let other = may_verdict(&t, &away("e"), &b, &budget()).unwrap();
        prop_assert_eq!(one, other, "{} / {}", p, s);
        prop_assert_eq!(one, member_by_test(&p, &s, &b, &budget()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refusal_automaton_agrees_with_membership(seed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let alpha = Alphabet::new(&names(AB)).unwrap();
        let mut aut = RefusalAutomaton::new(&p, alpha.clone(), &budget()).unwrap();
        for w in common::all_traces(&AB, 3) {
            let word = alpha.word(&w).unwrap();
            prop_assert_eq!(ccspt::fttrace::automaton::accepts(&mut aut, &word).unwrap(), member(&p, &w), "{} / {}", p, w);
        }
    }

    #[test]
    fn tests_decide_membership(seed in any::<u64>(), tseed in any::<u64>()) {
        let p = term(seed, &["a", "c"], 8);
        let mut g = rng(tseed);
        let s = random_trace(&mut g, &["a", "c"], 3);
        let (by_test, direct) = check_duality(&p, &s, &Name::new("w"), &budget()).unwrap();
        prop_assert_eq!(by_test, direct, "{} / {}", p, s);
    }

    #[test]
    fn safety_matches_enumeration(seed in any::<u64>()) {
        let p = term(seed, &AB, 10);
        let b = Name::new("b");
        let v = safety_holds(&p, &b, &budget()).unwrap();
        let listed = ft_enumerate(&p, 4, &names(AB), &budget()).unwrap();
        let seen = listed.iter().any(|t| t.names().contains(&b) && t.project().contains(&b));
        if let Some(w) = &v.witness {
            prop_assert!(member(&p, w));
            prop_assert!(w.project().contains(&b));
        }
        if seen {
            prop_assert!(!v.holds, "{}", p);
        }
    }

    #[test]
    fn initials_equal_under_the_rooted_preorder(seed in any::<u64>()) {
        let p = plain_term(seed, &["a"], 3);
        let q = plain_term(seed ^ 0x5555, &["a"], 3);
        let holds = rft_preorder(&p, &q, &CheckOptions::bounded(3)).unwrap().holds
            && rft_preorder(&q, &p, &CheckOptions::bounded(3)).unwrap().holds;
        if holds && is_stable(&p).unwrap() && is_stable(&q).unwrap() {
            prop_assert_eq!(initials(&p).unwrap(), initials(&q).unwrap());
        }
        let pp = Term::choice(p.clone(), p.clone());
        if is_stable(&p).unwrap() {
            prop_assert!(rft_preorder(&p, &pp, &CheckOptions::bounded(3)).unwrap().holds);
            prop_assert_eq!(initials(&p).unwrap(), initials(&pp).unwrap());
        }
    }

    #[test]
    fn ini_z_is_monotone_and_antitone(seed in any::<u64>(), zbits in 0usize..4, wbits in 0usize..4) {
        let sigma = names(AB);
        let p = term(seed, &AB, 6);
        let q = term(seed ^ 7, &AB, 6);
        let fp = ft_enumerate(&p, 3, &sigma, &budget()).unwrap();
        let f = TraceSet::from_traces(sigma.clone(), 3, fp.iter().filter(|t| t.len() < 3).cloned());
        let mut more = fp.clone();
        more.extend(ft_enumerate(&q, 3, &sigma, &budget()).unwrap());
        let g = TraceSet::from_traces(sigma.clone(), 3, more);
        let subs = subsets(&AB);
        let (z, w) = (subs[zbits].clone(), subs[zbits | wbits].clone());
        let fz = ini_z(&f, &z).unwrap();
        let gz = ini_z(&g, &z).unwrap();
        let fw = ini_z(&f, &w).unwrap();
        prop_assert!(f.traces().all(|t| g.contains_trace(t)));
        prop_assert!(fz.traces().all(|t| gz.contains_trace(t)));
        prop_assert!(fw.traces().all(|t| fz.contains_trace(t)));
    }
}
