//! The update monad against the update comonad, and what a one-entry mutation breaks.

use interaction_laws::finset::FinSet;
use interaction_laws::monadic::{mcil_check, mcil_update, Action};

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let m = mcil_update(&Action::rotation(&a))?;
    let rep = m.check()?;
    println!("update law: {} unit, {} multiplication instances, passed = {}", rep.unit_checked, rep.mult_checked, rep.passed());
    let mut bad = m.law.clone();
    let (p, q) = bad.entry(3, 1);
    bad.set_entry(3, 1, (1 - p, q));
    match mcil_check(&m.t, &m.d, &bad)?.failure {
        Some(f) => println!("mutated: {f}"),
        None => println!("mutated: unexpectedly passes"),
    }
    Ok(())
}
