//! Nonempty lists against `Y × (Y + Y)`: every law reads the head or the last element.

use interaction_laws::monadic::*;

fn main() -> interaction_laws::Result<()> {
    let inst = sweedler_nelist(4)?;
    let rep = inst.mcil.check()?;
    println!("squares hold: {}, law passes: {}", sweedler_squares(&inst.monad, &inst.comonad, &inst.iota)?.is_none(), rep.passed());
    for (t, tag) in ["inl", "inr"].iter().enumerate() {
        let picks: Vec<usize> = (0..4).map(|len| inst.mcil.law.entry(len, t).0).collect();
        println!("  {tag}: lists of length 1..=4 read position {picks:?}");
    }
    let maps = comonad_map_enumerate(&inst.comonad, &inst.comonad)?;
    println!("{} comonad endomaps of the pair-choice comonad", maps.len());
    Ok(())
}
