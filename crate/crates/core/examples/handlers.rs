//! A handler folds a tree into an algebra; it is the only such fold.

use interaction_laws::container::c_maybe;
use interaction_laws::monadic::FreeTree;
use interaction_laws::runners::*;

fn main() -> interaction_laws::Result<()> {
    // Maybe signature into Z = {0, 1}: `nothing` handles to 1, `just` passes its child through.
    let h = Handler::from_fn(&c_maybe(), 2, vec![0, 0], |s, zs| if s == 0 { zs[0] } else { 1 })?;
    let t = FreeTree::Node(0, vec![FreeTree::Node(1, vec![])]);
    println!("handle(just(nothing)) = {}", handle(&h, &t));
    println!("triangles: {:?}", handler_triangles(&h, 3)?);
    println!("folds satisfying both triangles at depth 2: {}", handler_uniqueness(&h, 2)?);
    Ok(())
}
