//! Move canonical states by seeded random local operators and check that the
//! classifier still names the same family.

use qutrit_slocc::classifier::classify_tripartite;
use qutrit_slocc::harness::{orbit_sample, DEFAULT_CONDITION_BOUND};
use qutrit_slocc::numerics::TolerancePolicy;
use qutrit_slocc::pencil::SearchBudget;
use qutrit_slocc::states::catalog;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seeds: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10);
    let tol = TolerancePolicy::default();
    let budget = SearchBudget::default();
    let mut misses = 0;
    for e in catalog() {
        let hits = (0..seeds)
            .filter(|&seed| {
                let s = orbit_sample(&e.state, seed, DEFAULT_CONDITION_BOUND).expect("valid seed");
                classify_tripartite(&s, &tol, &budget)
                    .ok()
                    .and_then(|v| v.label)
                    .is_some_and(|l| l.family == e.id.family)
            })
            .count() as u64;
        misses += seeds - hits;
        println!("{:<12} {hits}/{seeds}", e.id.to_string());
    }
    println!("misses: {misses}");
    Ok(())
}
