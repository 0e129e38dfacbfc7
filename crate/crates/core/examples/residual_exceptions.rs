//! A residual law for reader-with-exceptions against `A × Y`, and an aborting runner.

use interaction_laws::container::Container;
use interaction_laws::finset::FinSet;
use interaction_laws::monadic::FreeTree;
use interaction_laws::residual::*;

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let e = FinSet::from_strs("E", &["e0", "e1"])?;
    let (t, d, law) = exceptions_example(&a, &e)?;
    let rep = residual_mcil_check(&t, &d, &law)?;
    println!("exceptions law: {} unit, {} mult instances, passed = {}", rep.unit_checked, rep.mult_checked, rep.passed());

    let sig = Container::new(FinSet::from_strs("Op", &["lookup", "abort"])?, vec![a.clone(), FinSet::empty("0")])?;
    let theta = vec![vec![RVal::Val(0), RVal::Val(3)], vec![RVal::Raise(0); 2]];
    let rr = ResidualRunner::new(sig, ResidualMonad::Exceptions(1), a, theta)?;
    let tree = FreeTree::Node(0, vec![FreeTree::Leaf(0), FreeTree::Node(1, vec![])]);
    println!("from a0: {}", residual_run(&rr, &tree, 0)?);
    println!("from a1: {}", residual_run(&rr, &tree, 1)?);
    Ok(())
}
