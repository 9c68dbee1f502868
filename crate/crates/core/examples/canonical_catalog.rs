//! Every canonical three-qutrit representative with its classification
//! fingerprint.

use qutrit_slocc::classifier::classify_tripartite;
use qutrit_slocc::numerics::TolerancePolicy;
use qutrit_slocc::pencil::SearchBudget;
use qutrit_slocc::states::catalog;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tol = TolerancePolicy::default();
    let budget = SearchBudget::default();
    for e in catalog() {
        let v = classify_tripartite(&e.state, &tol, &budget)?;
        let kets = e.state.support().len();
        println!(
            "{:<12} {:>2} kets  {:?}  {}",
            e.id.to_string(),
            kets,
            v.rank_triple,
            v.signature
        );
    }
    Ok(())
}
