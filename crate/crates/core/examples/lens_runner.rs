//! An update lens as a runner, and its four equivalent presentations.

use interaction_laws::finset::FinSet;
use interaction_laws::monadic::{monad_update, Action, FreeTree};
use interaction_laws::runners::*;

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let action = Action::rotation(&a);
    // Y = A × B: look at the first component, update both.
    let y = FinSet::range("Y", 4);
    let lkp: Vec<usize> = (0..4).map(|v| v / 2).collect();
    let upd: Vec<Vec<usize>> = (0..4).map(|v| (0..2).map(|b| action.act(v / 2, b) * 2 + (v % 2 + b) % 2).collect()).collect();
    let r = update_lens_runner(&action, &y, &lkp, &upd)?;
    let t = monad_update(&action)?;
    println!("runner laws: {:?}", runner_check(&r, &t)?);
    println!("state map round trip: {}", state_map_to_runner(&runner_to_state_map(&r))? == r);
    println!("coalgebra round trip: {}", coalgebra_to_runner(&runner_to_coalgebra(&r)?)? == r);
    println!("costate round trip: {}", costate_family_to_runner(&runner_to_costate_family(&r)?, &r.c)? == r);
    let tree = FreeTree::Node(3, vec![FreeTree::Node(0, vec![FreeTree::Leaf(0), FreeTree::Leaf(1)]), FreeTree::Leaf(2)]);
    let (x, y1, trace) = run(&r, &tree, 0)?;
    println!("run from state 0: leaf {x}, state {y1}, {} steps", trace.len());
    Ok(())
}
