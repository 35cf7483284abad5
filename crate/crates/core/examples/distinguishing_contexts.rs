//! Contexts that tell failure-trace-inequivalent processes apart.
//!
//!     cargo run --example distinguishing_contexts

use ccspt::fttrace::CheckOptions;
use ccspt::term::{parse_context, parse_term, Name};
use ccspt::testing::{distinguish, replay_context};
use ccspt::Budget;

fn main() -> ccspt::Result<()> {
    let budget = Budget::default();

    let p = parse_term("a.(b + c.d) + a.(f + c.e)")?;
    let q = parse_term("a.(b + c.e) + a.(f + c.d)")?;
    let ctx = parse_context("hide {a,b,c} in (a.(b + t.c) |[a,b,c,f]| _)")?;
    let (vp, vq) = replay_context(&ctx, &p, &q, &Name::new("d"), &budget)?;
    println!("{ctx}\n  P: {vp}\n  Q: {vq}");

    let (p, q) = (parse_term("a.b + a")?, parse_term("a.b")?);
    let ctx = parse_context("hide {a,b} in (a.(b + t.d) |[a,b]| _)")?;
    let (vp, vq) = replay_context(&ctx, &p, &q, &Name::new("d"), &budget)?;
    println!("{ctx}\n  {p}: {vp}\n  {q}: {vq}");

    // let the tool find one
    let (p, q) = (parse_term("a + tau.b")?, parse_term("a + b")?);
    println!("{}", distinguish(&p, &q, &Name::new("z"), &CheckOptions::bounded(4))?);
    Ok(())
}
