//! Number of SLOCC classes of three n-level systems for n = 2..=20.

use qutrit_slocc::classifier::count_classes;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 2..=20 {
        println!("{n:>2} {}", count_classes(n)?.total);
    }
    Ok(())
}
