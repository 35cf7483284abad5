//! Strong bisimilarity by partition refinement.
//!
//!     cargo run --example bisimulation

use ccspt::sos::{bisimilar, explore_all, strong_bisim};
use ccspt::term::parse_term;
use ccspt::Budget;

fn main() -> ccspt::Result<()> {
    // the expansion of a parallel composition with a time-out
    let p = parse_term("a |[]| t.b")?;
    let q = parse_term("a.t.b + t.(a.b + b.a)")?;
    let lts = explore_all(&[p.clone(), q.clone()], Budget::default())?;
    println!("{p} ~ {q}: {}", strong_bisim(&lts, lts.roots[0], lts.roots[1])?);

    for (l, r) in [("a.0 + a.0", "a"), ("tau.a", "a"), ("<X | X = t.X>", "t.<Y | Y = t.t.Y>")] {
        println!("{l} ~ {r}: {}", bisimilar(&parse_term(l)?, &parse_term(r)?, Budget::default())?);
    }
    Ok(())
}
