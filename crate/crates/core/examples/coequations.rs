//! Coassociative cooperations are corectangular; the cofree comonad is not coassociative.

use interaction_laws::monadic::*;

fn main() -> interaction_laws::Result<()> {
    let inst = sweedler_nelist(2)?;
    println!("pair-choice: {:?}", coequation_checks(&inst.comonad, &pair_choice_cooperation())?);
    let ds = comonad_enumerate(2, 2)?;
    let (n, bad) = corectangularity_theorem(&ds)?;
    println!("{} comonads, {n} coassociative cooperations, counterexample: {bad:?}", ds.len());
    if let Some(m) = cofree_coassoc_counterexample(2)? {
        println!("cofree on Y + Y fails coassociativity at {:?}", m.observe(2));
    }
    Ok(())
}
