//! The update interaction law rebuilt from reader and writer through distributive laws.

use interaction_laws::finset::FinSet;
use interaction_laws::monadic::*;

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let action = Action::rotation(&a);
    let (lam, kap) = update_distributive_laws(&action)?;
    let comp = mcil_composite(&mcil_reader(&a)?, &mcil_writer(&action.monoid)?, &lam, &kap)?;
    let direct = mcil_update(&action)?;
    println!("composite law equals the direct one: {}", comp.law == direct.law);
    println!("composite monad: {} shapes", comp.t.c.num_shapes());
    Ok(())
}
