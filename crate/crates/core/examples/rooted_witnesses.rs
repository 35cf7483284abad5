//! Rooted elements (`st`, `post-st`, `t X σ`) and why choice needs them.
//!
//!     cargo run --example rooted_witnesses

use ccspt::fttrace::{ft_equiv, rft_equiv, rft_preorder, rooted_elements, CheckOptions};
use ccspt::term::{names, parse_term};
use ccspt::Budget;

fn show(p: &str, q: &str) -> ccspt::Result<()> {
    let (p, q) = (parse_term(p)?, parse_term(q)?);
    let opts = CheckOptions { alphabet: Some(names(["a", "b"])), ..CheckOptions::bounded(4) };
    println!("{p}  vs  {q}");
    println!("  ft:  {}", ft_equiv(&p, &q, &opts)?);
    println!("  rft: {}", rft_equiv(&p, &q, &opts)?);
    Ok(())
}

fn main() -> ccspt::Result<()> {
    show("t.b", "t.t.b")?;
    show("a + tau.b", "a + b")?;
    show("tau.b", "b")?;

    let p = parse_term("b + t.a")?;
    let els = rooted_elements(&p, 2, &names(["a", "b"]), &Budget::default())?;
    println!("rooted elements of {p} up to length 2:");
    for e in &els {
        println!("  {e}");
    }

    let (b, loopy) = (parse_term("b")?, parse_term("<X | X = b + tau.X>")?);
    for k in 1..=6 {
        println!("depth {k}: {}", rft_preorder(&b, &loopy, &CheckOptions::bounded(k))?);
    }
    Ok(())
}
