//! One PASS/FAIL line per acceptance criterion, with timings.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ccspt::denote::{
    rfft_action, rfft_choice, rfft_rename, set_hide, set_par, set_rename, HideAutomaton, ParAutomaton, TraceSet,
};
use ccspt::fttrace::{
    automaton::accepts, compare_automata, ft_enumerate, ft_equiv, ft_member, rft_equiv, rft_preorder, rooted_elements,
    rooted_member, trace_equiv, Alphabet, CheckOptions, Dfa, Goal, Letter, RefusalAutomaton, RootedElement, Side,
    Symbol, Trace,
};
use ccspt::laws::{run_laws, summarise, LawBudget, LawId, Outcome, Sampler};
use ccspt::sos::{explore, explore_all, strong_bisim};
use ccspt::term::{names, parse_context, parse_term, Action, Name, NameSet, Term};
use ccspt::testing::{member_by_test, plug, safety_holds};
use ccspt::Budget;
use common::{all_traces, random_trace, subsets, term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn b() -> Budget {
    Budget::default()
}

fn p(s: &str) -> Term {
    parse_term(s).expect("valid term")
}

const FIG_P: &str = "a.(b + c.d) + a.(f + c.e)";
const FIG_Q: &str = "a.(b + c.e) + a.(f + c.d)";

/// Shortest partial failure trace of at most `depth` symbols that performs
/// `d`, by breadth-first search over the determinised refusal automaton.
fn shows_within(t: &Term, sigma: &NameSet, d: &Name, depth: usize) -> Result<Option<Trace>, String> {
    let alpha = Alphabet::new(sigma).map_err(e)?;
    let letters = alpha.letters(false);
    let mut dfa = Dfa::new(RefusalAutomaton::new(t, alpha.clone(), &b()).map_err(e)?);
    let init = dfa.initial().map_err(e)?;
    let mut seen = HashSet::from([init]);
    let mut layer = vec![(init, Vec::new())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (s, word) in &layer {
            for &l in &letters {
                let n = dfa.step(*s, l).map_err(e)?;
                if !dfa.is_accepting(n) {
                    continue;
                }
                let mut w: Vec<Letter> = word.clone();
                w.push(l);
                if alpha.symbol(l) == Some(Symbol::Action(d.clone())) {
                    return Ok(Some(alpha.trace(&w)));
                }
                if seen.insert(n) {
                    next.push((n, w));
                }
            }
        }
        layer = next;
    }
    Ok(None)
}

fn context_for_trace_equal_pair() -> Check {
    let ctx = parse_context("hide {a,b,c} in (a.(b + t.c) |[a,b,c,f]| _)").map_err(e)?;
    let d = Name::new("d");
    let (cp, cq) = (plug(&ctx, &p(FIG_P)), plug(&ctx, &p(FIG_Q)));
    for c in [&cp, &cq] {
        let n = explore(c, 200).map_err(e)?;
        ensure(n.complete && n.num_states() <= 200, || format!("{c} has more than 200 states"))?;
    }
    let sigma = cp.sort().union(&cq.sort()).cloned().collect::<NameSet>();
    let sigma: NameSet = sigma.difference(&names(["a", "b", "c"])).cloned().collect();
    ensure(shows_within(&cp, &sigma, &d, 6)?.is_none(), || "C[P] shows d".into())?;
    ensure(safety_holds(&cp, &d, &b()).map_err(e)?.holds, || "C[P] violates safety(d)".into())?;
    let v = safety_holds(&cq, &d, &b()).map_err(e)?;
    let w = v.witness.ok_or("C[Q] satisfies safety(d)")?;
    ensure(ft_member(&cq, &w, &b()).map_err(e)?, || format!("{w} not a trace of C[Q]"))?;
    let short = shows_within(&cq, &sigma, &d, 6)?.ok_or("C[Q] shows no d up to depth 6")?;
    Ok(format!("C[Q] witnesses {w} and {short}; C[P] clean to depth 6"))
}

fn context_for_a_choice() -> Check {
    let ctx = parse_context("hide {a,b} in (a.(b + t.d) |[a,b]| _)").map_err(e)?;
    let d = Name::new("d");
    let vl = safety_holds(&plug(&ctx, &p("a.b + a")), &d, &b()).map_err(e)?;
    let vr = safety_holds(&plug(&ctx, &p("a.b")), &d, &b()).map_err(e)?;
    ensure(!vl.holds && vr.holds, || format!("left {vl}, right {vr}"))?;
    Ok(format!("C[a.b + a]: {vl}; C[a.b]: holds"))
}

fn trace_equal_but_failure_inequal() -> Check {
    let (fp, fq) = (p(FIG_P), p(FIG_Q));
    let opts = CheckOptions::bounded(5);
    let tv = trace_equiv(&fp, &fq, &opts).map_err(e)?;
    ensure(tv.holds, || format!("traces differ: {tv}"))?;
    let v = ft_equiv(&fp, &fq, &opts).map_err(e)?;
    let w = v.witness.ok_or("ft-equal")?;
    let s = w.element.as_plain().ok_or("rooted witness")?;
    let (ip, iq) = (ft_member(&fp, s, &b()).map_err(e)?, ft_member(&fq, s, &b()).map_err(e)?);
    ensure(ip != iq && ip == (w.side == Side::Left), || format!("{s}: in P {ip}, in Q {iq}"))?;
    let f: Trace = "a {f} c d top".parse().map_err(e)?;
    ensure(ft_member(&fp, &f, &b()).map_err(e)? && !ft_member(&fq, &f, &b()).map_err(e)?, || "a {f} c d".into())?;
    Ok(format!("witness {s} (only {})", if ip { "P" } else { "Q" }))
}

fn doubling_and_padding() -> Check {
    let ab = ["a", "b"];
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in 0..500u64 {
        let t = term(i, &ab, 10);
        let sigma = random_trace(&mut rng, &ab, 2);
        let rho = random_trace(&mut rng, &ab, 2);
        let x = subsets(&ab)[rng.gen_range(0..4)].clone();
        let mut padded = x.clone();
        padded.insert(Name::new("f"));
        let build = |mid: Vec<NameSet>| {
            let mut v = sigma.symbols().to_vec();
            v.extend(mid.into_iter().map(Symbol::Refusal));
            v.extend(rho.symbols().iter().cloned());
            Trace::new(v)
        };
        let (once, twice, wide) = (build(vec![x.clone()]), build(vec![x.clone(), x.clone()]), build(vec![padded]));
        let m = |s: &Trace| ft_member(&t, s, &b()).map_err(e);
        let base = m(&once)?;
        if base != m(&twice)? {
            violations.push(format!("doubling {t} / {once}"));
        }
        if base != m(&wide)? {
            violations.push(format!("padding {t} / {once}"));
        }
        checked += 2;
    }
    ensure(violations.is_empty(), || violations.join("; "))?;
    Ok(format!("{checked} checks"))
}

fn operators() -> Check {
    let abc = ["a", "b", "c"];
    let sigma = names(abc);
    let alpha = Alphabet::new(&sigma).map_err(e)?;
    let k = 4;
    let mut counts = [0usize; 4];
    for i in 0..200u64 {
        let mut s = Sampler::with_names(9000 + i, &abc);
        s.max_ops = 5;
        let (x, y) = (s.term(), s.term());
        let sync = s.subset();
        let hidden = s.nonempty_subset();
        let rel = s.relation();
        let par = Term::par(sync.clone(), x.clone(), y.clone());
        let hide = Term::hide(hidden.clone(), x.clone());
        let ren = Term::rename(rel.clone(), x.clone());
        let en = |t: &Term| -> Result<TraceSet, String> {
            Ok(TraceSet::from_traces(sigma.clone(), k, ft_enumerate(t, k, &sigma, &b()).map_err(e)?))
        };
        let rs = |t: &Term| -> Result<TraceSet, String> {
            Ok(TraceSet::from_elements(sigma.clone(), k, rooted_elements(t, k, &sigma, &b()).map_err(e)?))
        };
        let nfa = |t: &Term, rooted: bool| {
            if rooted {
                RefusalAutomaton::rooted(t, alpha.clone(), &b())
            } else {
                RefusalAutomaton::new(t, alpha.clone(), &b())
            }
            .map_err(e)
        };
        let (fx, fy) = (en(&x)?, en(&y)?);

        // parallel
        let mut whole = Dfa::new(nfa(&par, false)?);
        for t in set_par(&fx, &fy, &sync).map_err(e)?.traces() {
            let w = alpha.word(t).ok_or_else(|| format!("{t} outside the alphabet"))?;
            ensure(whole.accepts(&w).map_err(e)?, || format!("unsound par: {t} for {par}"))?;
            counts[0] += 1;
        }
        for rooted in [false, true] {
            let comp = ParAutomaton::new(nfa(&x, rooted)?, nfa(&y, rooted)?, &sync).map_err(e)?;
            let w = compare_automata(comp, nfa(&par, rooted)?, Goal::Equal, Some(k), rooted).map_err(e)?;
            ensure(w.is_none(), || format!("par {par}: {w:?}"))?;
            counts[1] += 1;
        }
        // abstraction
        let mut whole = Dfa::new(nfa(&hide, false)?);
        for t in set_hide(&fx, &hidden).map_err(e)?.traces() {
            let w = alpha.word(t).ok_or_else(|| format!("{t} outside the alphabet"))?;
            ensure(whole.accepts(&w).map_err(e)?, || format!("unsound hide: {t} for {hide}"))?;
            counts[2] += 1;
        }
        for rooted in [false, true] {
            let comp = HideAutomaton::new(nfa(&x, rooted)?, &hidden);
            let w = compare_automata(comp, nfa(&hide, rooted)?, Goal::Equal, Some(k), rooted).map_err(e)?;
            ensure(w.is_none(), || format!("hide {hide}: {w:?}"))?;
            counts[1] += 1;
        }
        // renaming
        ensure(set_rename(&fx, &rel).map_err(e)? == en(&ren)?, || format!("rename {ren}"))?;
        ensure(rfft_rename(&rs(&x)?, &rel).map_err(e)? == rs(&ren)?, || format!("rooted rename {ren}"))?;
        counts[3] += 2;
    }
    Ok(format!(
        "{} par and {} hide traces sound; {} exact automaton comparisons; {} rename equalities",
        counts[0], counts[2], counts[1], counts[3]
    ))
}

fn rooted_equations() -> Check {
    let abc = ["a", "b", "c"];
    let sigma = names(abc);
    let alpha = Alphabet::new(&sigma).map_err(e)?;
    let k = 4;
    let rs = |t: &Term| -> Result<TraceSet, String> {
        Ok(TraceSet::from_elements(sigma.clone(), k, rooted_elements(t, k, &sigma, &b()).map_err(e)?))
    };
    let nfa = |t: &Term| RefusalAutomaton::rooted(t, alpha.clone(), &b()).map_err(e);
    for i in 0..100u64 {
        let mut s = Sampler::with_names(7000 + i, &abc);
        s.max_ops = 5;
        let (x, y) = (s.term(), s.term());
        let (rx, ry) = (rs(&x)?, rs(&y)?);
        for a in [Action::visible("a"), Action::Tau, Action::Timeout] {
            let whole = Term::prefix(a.clone(), x.clone());
            ensure(rfft_action(&a, &rx).map_err(e)? == rs(&whole)?, || format!("action: {whole}"))?;
        }
        let whole = Term::choice(x.clone(), y.clone());
        ensure(rfft_choice(&rx, &ry).map_err(e)? == rs(&whole)?, || format!("choice: {whole}"))?;
        let sync = s.subset();
        let whole = Term::par(sync.clone(), x.clone(), y.clone());
        let w = compare_automata(
            ParAutomaton::new(nfa(&x)?, nfa(&y)?, &sync).map_err(e)?,
            nfa(&whole)?,
            Goal::Equal,
            Some(k),
            true,
        )
        .map_err(e)?;
        ensure(w.is_none(), || format!("par: {whole}: {w:?}"))?;
        let hidden = s.nonempty_subset();
        let whole = Term::hide(hidden.clone(), x.clone());
        let w = compare_automata(HideAutomaton::new(nfa(&x)?, &hidden), nfa(&whole)?, Goal::Equal, Some(k), true)
            .map_err(e)?;
        ensure(w.is_none(), || format!("hide: {whole}: {w:?}"))?;
        let rel = s.relation();
        let whole = Term::rename(rel.clone(), x.clone());
        ensure(rfft_rename(&rx, &rel).map_err(e)? == rs(&whole)?, || format!("rename: {whole}"))?;
    }
    Ok("100 instances, 7 equations each".into())
}

fn may_theorem() -> Check {
    let names_ = ["a", "c"];
    let w = Name::new("w");
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut yes, mut no) = (0, 0);
    for i in 0..300u64 {
        let t = term(5000 + i, &names_, 10);
        let s = random_trace(&mut rng, &names_, 4);
        let by_test = member_by_test(&t, &s, &w, &b()).map_err(e)?;
        let direct = ft_member(&t, &s, &b()).map_err(e)?;
        ensure(by_test == direct, || format!("{t} / {s}: test {by_test}, member {direct}"))?;
        if direct {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("{yes} members, {no} non-members, no disagreement"))
}

fn laws() -> Check {
    let reports = run_laws(&LawId::ALL, 100, 20_241_015, &LawBudget::default()).map_err(e)?;
    let summary = summarise(&reports);
    let bad: Vec<String> =
        summary.iter().filter(|s| !s.ok).map(|s| format!("{} {}/{}", s.law, s.pass, s.fail)).collect();
    ensure(bad.is_empty(), || format!("unexpected: {}", bad.join(", ")))?;
    let generic = reports.iter().find(|r| r.law == LawId::Law1Bisim).ok_or("no law1-bisim report")?;
    ensure(generic.outcome == Outcome::Fail, || "law (1) holds under bisimilarity".into())?;
    Ok(format!("{} instances, {} laws as expected", reports.len(), summary.len()))
}

fn rooted_witnesses() -> Check {
    let el = |s: &str| -> Result<RootedElement, String> { s.parse().map_err(e) };
    let m = |t: &str, x: &RootedElement| rooted_member(&p(t), x, &b()).map_err(e);
    let txb = el("t {a,b} b top")?;
    ensure(m("t.t.b", &txb)? && !m("t.b", &txb)?, || "t {a,b} b".into())?;
    let opts = CheckOptions { alphabet: Some(names(["a", "b"])), ..CheckOptions::bounded(4) };
    ensure(ft_equiv(&p("t.b"), &p("t.t.b"), &opts).map_err(e)?.holds, || "t.b, t.t.b ft-inequal".into())?;
    ensure(!rft_equiv(&p("t.b"), &p("t.t.b"), &opts).map_err(e)?.holds, || "t.b, t.t.b rft-equal".into())?;
    let (ra, ea) = (el("{a} top")?, el("{} a top")?);
    ensure(m("a + tau.b", &ra)? && !m("a + b", &ra)?, || "{a} top".into())?;
    ensure(m("a + b", &ea)? && !m("a + tau.b", &ea)?, || "{} a top".into())?;
    let ps = el("post-st")?;
    ensure(m("tau.b", &ps)? && !m("b", &ps)?, || "post-st".into())?;
    for k in 1..=6 {
        let v = rft_preorder(&p("b"), &p("<X | X = b + tau.X>"), &CheckOptions::bounded(k)).map_err(e)?;
        ensure(v.holds, || format!("depth {k}: {v}"))?;
    }
    Ok("all four separations and the preorder at depths 1..6".into())
}

fn refusal_automaton() -> Check {
    let ab = ["a", "b"];
    let alpha = Alphabet::new(&names(ab)).map_err(e)?;
    let words = all_traces(&ab, 4);
    for i in 0..100u64 {
        let t = term(3000 + i, &ab, 10);
        let mut aut = RefusalAutomaton::new(&t, alpha.clone(), &b()).map_err(e)?;
        for w in &words {
            let word = alpha.word(w).ok_or("word outside alphabet")?;
            let (acc, mem) = (accepts(&mut aut, &word).map_err(e)?, ft_member(&t, w, &b()).map_err(e)?);
            ensure(acc == mem, || format!("{t} / {w}: automaton {acc}, member {mem}"))?;
        }
    }
    Ok(format!("100 terms x {} words", words.len()))
}

fn expansion_of_parallel() -> Check {
    let (l, r) = (p("a |[]| t.b"), p("a.t.b + t.(a.b + b.a)"));
    let lts = explore_all(&[l, r], b()).map_err(e)?;
    ensure(strong_bisim(&lts, lts.roots[0], lts.roots[1]).map_err(e)?, || "not bisimilar".into())?;
    Ok("bisimilar".into())
}

type Criterion = (&'static str, u64, fn() -> Check);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("distinguishing context, same traces", 1, context_for_trace_equal_pair),
        ("distinguishing context, a.b + a vs a.b", 1, context_for_a_choice),
        ("trace-equal but failure-trace-inequal pair", 5, trace_equal_but_failure_inequal),
        ("refusal doubling and fresh padding", 10, doubling_and_padding),
        ("parallel, abstraction and renaming on trace sets", 30, operators),
        ("rooted equations per operator", 20, rooted_equations),
        ("may tests decide membership", 20, may_theorem),
        ("laws on sampled instances", 30, laws),
        ("rooted witnesses", 5, rooted_witnesses),
        ("refusal automaton against membership", 60, refusal_automaton),
        ("expansion of a |[]| t.b", 1, expansion_of_parallel),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        let res = match res {
            Ok(msg) if took > Duration::from_secs(limit) => Err(format!("{msg}; took {took:.2?}, limit {limit}s")),
            r => r,
        };
        match res {
            Ok(msg) => println!("PASS {:>2} {name} ({took:.2?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
