//! Partial failure traces: membership, enumeration, system-ended refusals.
//!
//!     cargo run --example failure_traces

use ccspt::fttrace::{ft_enumerate, ft_member, Trace};
use ccspt::term::{names, parse_term};
use ccspt::Budget;

fn main() -> ccspt::Result<()> {
    let budget = Budget::default();
    let p = parse_term("a + tau.b")?;
    for s in ["{a} top", "{} a top", "{b} top", "{a} b top", "b top"] {
        let t: Trace = s.parse()?;
        println!("{s:12} in fft({p}): {}", ft_member(&p, &t, &budget)?);
    }

    // t.b: the environment offers nothing, the time-out fires, then b.
    // `{b} b` is system-ended: b sits in the refusal right before it.
    let q = parse_term("t.b")?;
    for s in ["{} b top", "{b} b top", "{a} top"] {
        let t: Trace = s.parse()?;
        println!(
            "{s:12} in fft({q}): {}  (system-ended at 0: {})",
            ft_member(&q, &t, &budget)?,
            t.is_system_ended(0).unwrap_or(false)
        );
    }

    let all = ft_enumerate(&q, 2, &names(["a", "b"]), &budget)?;
    println!("fft({q}) up to length 2 over {{a,b}}: {} traces", all.len());
    for t in all.iter().take(12) {
        println!("  {t}");
    }
    Ok(())
}
