//! Two processes with the same traces that partial failure traces separate.
//!
//!     cargo run --example compare_semantics

use ccspt::fttrace::{ft_equiv, ft_member, trace_equiv, CheckOptions, Side};
use ccspt::sos::bisimilar;
use ccspt::term::parse_term;
use ccspt::Budget;

fn main() -> ccspt::Result<()> {
    let p = parse_term("a.(b + c.d) + a.(f + c.e)")?;
    let q = parse_term("a.(b + c.e) + a.(f + c.d)")?;
    let opts = CheckOptions::bounded(5);

    println!("traces: {}", trace_equiv(&p, &q, &opts)?);
    let v = ft_equiv(&p, &q, &opts)?;
    println!("partial failure traces: {v}");

    let w = v.witness.expect("the pair differs");
    let sigma = w.element.as_plain().expect("plain trace");
    let (in_p, in_q) = (ft_member(&p, sigma, &Budget::default())?, ft_member(&q, sigma, &Budget::default())?);
    println!("  re-checked: in P {in_p}, in Q {in_q}, reported side {:?}", w.side);
    assert_eq!(in_p, w.side == Side::Left);
    assert_eq!(in_q, w.side == Side::Right);

    // exact comparison of complete languages
    println!("exact: {}", ft_equiv(&p, &q, &CheckOptions::exact())?);
    println!("bisimilar: {}", bisimilar(&p, &q, Budget::default())?);
    Ok(())
}
