//! May testing: tests built from traces, and the testing preorder.
//!
//!     cargo run --example may_testing

use ccspt::fttrace::{CheckOptions, Trace};
use ccspt::term::{parse_term, Name};
use ccspt::testing::{build_test, check_duality, compose_test, may_pass, may_preorder};
use ccspt::Budget;

fn main() -> ccspt::Result<()> {
    let w = Name::new("w");
    let budget = Budget::default();

    for s in ["top", "c", "{a}", "{a} a top", "a {b} c top"] {
        let sigma: Trace = s.parse()?;
        println!("test for {s:12} {}", build_test(&sigma, &w)?);
    }

    // a process may pass the test of σ exactly when σ is one of its partial failure traces
    let p = parse_term("a.c + t.b")?;
    for s in ["a c top", "{a} b top", "{} b top", "{b} a top"] {
        let (by_test, direct) = check_duality(&p, &s.parse()?, &w, &budget)?;
        println!("{p}: {s:10} may pass {by_test}, member {direct}");
    }

    let t = build_test(&"{a} b top".parse()?, &w)?;
    println!("composed: {}", compose_test(&t, &p, &w));
    println!("may pass: {}", may_pass(&p, &t, &w, &budget)?);

    // a failing preorder comes with a test that only the left process passes
    let (l, r) = (parse_term("a + t.b")?, parse_term("a + b")?);
    let v = may_preorder(&l, &r, &w, &CheckOptions::bounded(4))?;
    match (&v.verdict.witness, &v.test) {
        (Some(wit), Some(t)) => println!("{l} below {r}: no, {} only in {l}\n  separating test: {t}", wit.element),
        _ => println!("{l} below {r}: {}", v.verdict.holds),
    }
    let v = may_preorder(&r, &l, &w, &CheckOptions::bounded(4))?;
    println!("{r} below {l}: {}", v.verdict.holds);
    Ok(())
}
