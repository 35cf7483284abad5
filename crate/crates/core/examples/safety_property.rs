//! The canonical safety property: can a bad action ever be observed?
//!
//!     cargo run --example safety_property

use ccspt::fttrace::ft_member;
use ccspt::term::{parse_term, Name};
use ccspt::testing::safety_holds;
use ccspt::Budget;

fn main() -> ccspt::Result<()> {
    let bad = Name::new("b");
    let budget = Budget::default();
    for src in ["t.b", "tau + t.b", "a.c + t.(a.b + tau)", "c + t.(a.b + tau)", "<X | X = a.X + t.(c + tau.b)>"] {
        let p = parse_term(src)?;
        let v = safety_holds(&p, &bad, &budget)?;
        println!("{src:32} safety(b): {v}");
        if let Some(w) = &v.witness {
            assert!(ft_member(&p, w, &budget)?);
        }
    }
    Ok(())
}
