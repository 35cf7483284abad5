//! Check algebraic laws on seeded random instances.
//!
//!     cargo run --example law_sampling [SEED]

use ccspt::laws::{check_law, instantiate_law, run_laws, summarise, LawBudget, LawId};

fn main() -> ccspt::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2024);
    let lb = LawBudget::default();

    let inst = instantiate_law(LawId::Law1, seed)?;
    println!("{}: {}", LawId::Law1, LawId::Law1.equation());
    println!("  {}\n  = {}", inst.lhs, inst.rhs);
    println!("  {}", check_law(&inst, &lb)?.to_json());

    let reports = run_laws(&LawId::ALL, 10, seed, &lb)?;
    println!("seed {seed}");
    for s in summarise(&reports) {
        println!(
            "{:22} {:10} pass {:3} fail {:3} budget {:3} {}",
            s.law.name(),
            s.relation.to_string(),
            s.pass,
            s.fail,
            s.budget_exceeded,
            if s.ok { "ok" } else { "UNEXPECTED" }
        );
    }
    Ok(())
}
