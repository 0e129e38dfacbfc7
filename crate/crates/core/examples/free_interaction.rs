//! A tree over `A ⇒ X` against a machine of its dual, with the step-by-step trace.

use interaction_laws::container::c_reader;
use interaction_laws::dual::dual;
use interaction_laws::finset::FinSet;
use interaction_laws::monadic::{canonical_mcil, FreeTree, Machine};

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let c = c_reader(&a);
    // The machine alternates between answering a1 and a0.
    let m = Machine::new(dual(&c)?, vec!["start", "mid"], vec![(1, vec![1]), (0, vec![0])], 0)?;
    let leaf = |x| FreeTree::Leaf(x);
    let tree = FreeTree::Node(0, vec![leaf("a"), FreeTree::Node(0, vec![leaf("b"), leaf("c")])]);
    let (x, label, trace) = canonical_mcil(&c, &tree, &m)?;
    println!("result ({x}, {label})");
    for e in trace {
        println!("  step {}: position {} answered by machine shape {}, now in state {}", e.step, e.tree_position, e.machine_shape, e.state);
    }
    Ok(())
}
