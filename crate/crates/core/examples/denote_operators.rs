//! Operators on failure trace sets, checked against the terms they model.
//!
//!     cargo run --example denote_operators

use ccspt::denote::{rfft_action, rfft_choice, valid_decompositions, HideAutomaton, ParAutomaton, TraceSet};
use ccspt::fttrace::{compare_automata, rooted_elements, Alphabet, Goal, RefusalAutomaton, Trace};
use ccspt::term::{names, parse_term, Action, Term};
use ccspt::Budget;

fn rfft(p: &Term, sigma: &ccspt::term::NameSet, k: usize) -> ccspt::Result<TraceSet> {
    Ok(TraceSet::from_elements(sigma.clone(), k, rooted_elements(p, k, sigma, &Budget::default())?))
}

fn main() -> ccspt::Result<()> {
    let sigma = names(["a", "b", "c"]);
    let k = 3;
    let (p, q) = (parse_term("a + t.b")?, parse_term("tau.c")?);
    let (fp, fq) = (rfft(&p, &sigma, k)?, rfft(&q, &sigma, k)?);

    // t.P and P + Q from the sets alone
    let via_set = rfft_action(&Action::Timeout, &fp)?;
    println!("rfft(t.({p})) from rfft({p}): {}", via_set == rfft(&Term::timeout(p.clone()), &sigma, k)?);
    let via_set = rfft_choice(&fp, &fq)?;
    println!("rfft({p} + {q}) from the parts: {}", via_set == rfft(&Term::choice(p.clone(), q.clone()), &sigma, k)?);

    // how a trace of P |[a]| Q splits into component traces
    let t: Trace = "{a,b} b top".parse()?;
    let decs = valid_decompositions(&t, &names(["a"]));
    println!("decompositions of {t} over sync {{a}}:");
    for d in decs.take(6) {
        println!("  {}  |  {}", d.left, d.right);
    }

    // parallel composition and abstraction as automata over component automata
    let alpha = Alphabet::new(&sigma)?;
    let aut = |t: &Term| RefusalAutomaton::rooted(t, alpha.clone(), &Budget::default());
    let sync = names(["b"]);
    let whole = Term::par(sync.clone(), p.clone(), parse_term("b.c")?);
    let composed = ParAutomaton::new(aut(&p)?, aut(&parse_term("b.c")?)?, &sync)?;
    let w = compare_automata(composed, aut(&whole)?, Goal::Equal, Some(4), true)?;
    println!("par automaton matches {whole}: {}", w.is_none());

    let hidden = names(["c"]);
    let r = parse_term("t.c.a + b")?;
    let whole = Term::hide(hidden.clone(), r.clone());
    let w = compare_automata(HideAutomaton::new(aut(&r)?, &hidden), aut(&whole)?, Goal::Equal, Some(4), true)?;
    println!("hide automaton matches {whole}: {}", w.is_none());
    Ok(())
}
