//! Parse a specification, then report closedness, guardedness and sorts.
//!
//!     cargo run --example parse_and_check [FILE]

use std::sync::Arc;

use ccspt::term::{parse_spec, parse_term, Term};

fn main() -> ccspt::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/specs/vending.ccsp").into());
    let text = std::fs::read_to_string(&path).expect("readable spec file");
    let spec = Arc::new(parse_spec(&text)?);

    println!("{path}: {} equations", spec.len());
    println!("  guarded: {}, time-guarded: {}", spec.is_guarded(), spec.is_time_guarded());
    for x in spec.vars() {
        let t = Term::rec(x.clone(), spec.clone());
        println!("  {x}: sort {:?}", t.sort().iter().map(|n| n.as_str()).collect::<Vec<_>>());
    }

    // terms print back in the syntax they were read from
    for src in ["a.b + t.(c |[c]| c.d)", "hide {a} in rename {b->c} in (a.b + tau)", "<X | X = t.a.X>"] {
        let t = parse_term(src)?;
        println!("{src:42} => {t}   (size {}, time-guarded {})", t.size(), t.is_time_guarded());
        assert_eq!(parse_term(&t.to_string())?, t);
    }

    // errors carry a position
    match parse_term("a.(b + ") {
        Err(e) => println!("parse error: {e}"),
        Ok(t) => unreachable!("{t}"),
    }
    Ok(())
}
