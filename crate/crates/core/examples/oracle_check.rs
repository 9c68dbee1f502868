//! Compare span signatures against the brute-force rank-locus search on
//! random spans.

use qutrit_slocc::harness::{brute_force_rank_locus, random_span};
use qutrit_slocc::numerics::TolerancePolicy;
use qutrit_slocc::pencil::{rank_profile_dim1, rank_profile_dim2, rank_profile_dim3, SearchBudget};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(50);
    let tol = TolerancePolicy::default();
    let budget = SearchBudget::default();
    for dim in 1..=3 {
        let mut agree = 0;
        for seed in 0..count {
            let g = random_span(seed, dim);
            let sig = match dim {
                1 => rank_profile_dim1(&g[0], &tol)?,
                2 => rank_profile_dim2(&g[0], &g[1], &tol)?,
                _ => rank_profile_dim3(&g[0], &g[1], &g[2], &tol, &budget)?,
            };
            let oracle = brute_force_rank_locus(&g, 400)?;
            if (oracle.min_rank, oracle.generic_rank) == (sig.min_rank(), sig.generic_rank) {
                agree += 1;
            }
        }
        println!("dim {dim}: {agree}/{count} agree");
    }
    Ok(())
}
