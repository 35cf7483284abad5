//! Derive a transition system from the operational rules and export it.
//!
//!     cargo run --example explore_lts

use ccspt::sos::{explore, hnf, initials, is_stable, outgoing};
use ccspt::term::parse_term;

fn main() -> ccspt::Result<()> {
    let p = parse_term("t.a |[]| t.b")?;
    let lts = explore(&p, 100)?;
    println!("{p}: {} states, {} transitions, complete {}", lts.num_states(), lts.num_transitions(), lts.complete);
    print!("{}", lts.to_aut());

    // a time-out can only fire where the process could idle
    let q = parse_term("a + tau.b + t.c")?;
    for (a, next) in outgoing(&q)? {
        println!("{q} --{a}--> {next}");
    }
    println!("stable: {}, initials: {:?}", is_stable(&q)?, initials(&q)?);
    let r = parse_term("a |[]| b")?;
    println!("head normal form of {r}: {}", hnf(&r)?.to_term());
    print!("{}", explore(&parse_term("a.(b |[b]| b.c)")?, 10)?.to_dot());
    Ok(())
}
