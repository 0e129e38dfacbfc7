//! The dual computed as an end over a finite universe agrees with the container dual.

use interaction_laws::container::*;
use interaction_laws::dual::dual;
use interaction_laws::finmodel::{end_dual, find_natural_iso, FinFunctor, Universe};
use interaction_laws::finset::FinSet;

fn main() -> interaction_laws::Result<()> {
    let u = Universe::new(3);
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    for (name, c) in [("Id", c_id()), ("A x X", c_writer(&a)), ("A => X", c_reader(&a)), ("maybe", c_maybe())] {
        let g = FinFunctor::from_container(&c, u.clone())?;
        let by_end = end_dual(&g)?;
        let by_container = FinFunctor::from_container(&dual(&c)?, u.clone())?;
        let iso = find_natural_iso(&by_end, &by_container)?.is_some();
        println!("{name:>7}: end and container dual naturally isomorphic: {iso}");
    }
    Ok(())
}
