//! Pairwise equivalence decisions between a few states.

use qutrit_slocc::bipartite::{state_i, state_ii, state_iii};
use qutrit_slocc::classifier::verify_equivalence;
use qutrit_slocc::harness::orbit_sample;
use qutrit_slocc::numerics::TolerancePolicy;
use qutrit_slocc::pencil::SearchBudget;
use qutrit_slocc::states::PureState;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::default();
    let budget = SearchBudget::default();

    println!(
        "II vs III: {}",
        verify_equivalence(&state_ii(), &state_iii(), &tol, &budget)?
    );
    println!(
        "I vs II: {}",
        verify_equivalence(&state_i(), &state_ii(), &tol, &budget)?
    );

    let ghz = PureState::from_kets(&["000", "111", "222"])?;
    let w = PureState::from_kets(&["001", "010", "100"])?;
    let moved = orbit_sample(&ghz, 3, 20.0)?;
    println!("GHZ vs moved GHZ: {}", verify_equivalence(&ghz, &moved, &tol, &budget)?);
    println!("GHZ vs W: {}", verify_equivalence(&ghz, &w, &tol, &budget)?);
    Ok(())
}
