//! From an interaction law to a runner for every coalgebra, and back.

use interaction_laws::finset::FinSet;
use interaction_laws::monadic::{mcil_update, Action};
use interaction_laws::runners::*;

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let m = mcil_update(&Action::rotation(&a))?;
    let spec = mcil_to_runner_spec(&m);
    let back = runner_spec_to_mcil(&m.t, &m.d, &spec)?;
    println!("law recovered from its runner spec: {}", back.law == m.law);
    let (coalg, start, _) = cofree_coalgebra(&m.d, 0)?;
    let r = spec(&coalg)?;
    println!("runner on the cofree coalgebra: {} states, start {start}", r.state.len());
    Ok(())
}
