//! Two-qutrit classes: the states |I>, |II>, |III>, the
//! explicit operator taking |III> onto |II>, and canonicalization of a
//! random state.

use qutrit_slocc::bipartite::{
    apply_ilo_bipartite, canonicalize_bipartite, classify_bipartite, iii_to_ii_operator, state_i, state_ii, state_iii,
    IloPair,
};
use qutrit_slocc::harness::complex_gaussian;
use qutrit_slocc::numerics::{CMatrix, TolerancePolicy};
use qutrit_slocc::states::{unflatten, Flattening};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::default();

    for (name, s) in [("I", state_i()), ("II", state_ii()), ("III", state_iii())] {
        let c = classify_bipartite(&s, &tol)?;
        println!("|{name}>: Schmidt rank {} ({})", c.schmidt_rank, c.canonical_name());
    }

    let pair = IloPair::new(CMatrix::identity(3), iii_to_ii_operator())?;
    let mapped = apply_ilo_bipartite(&state_iii(), &pair)?.normalized();
    println!(
        "I (x) F |III> vs |II>: ray distance {:.1e}",
        mapped.ray_distance(&state_ii())
    );

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = complex_gaussian(&mut rng, 3, 2);
    let d = complex_gaussian(&mut rng, 2, 3);
    let s = unflatten(
        &Flattening {
            pivot_party: 1,
            matrix: &c * &d,
        },
        2,
    )?;
    let (class, to_canonical) = canonicalize_bipartite(&s, &tol)?;
    let reached = apply_ilo_bipartite(&s, &to_canonical)?;
    println!(
        "random rank-2 state -> {} (distance to canonical {:.1e})",
        class.canonical_name(),
        reached.ray_distance(&class.canonical)
    );
    Ok(())
}
