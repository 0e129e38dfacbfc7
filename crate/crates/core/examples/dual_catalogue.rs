//! Duals of the catalogue functors, each matched to its expected form by an iso.

use interaction_laws::container::*;
use interaction_laws::dual::dual;
use interaction_laws::finset::FinSet;

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let cases = [
        ("Id", c_id(), c_id()),
        ("1", c_one(), c_zero()),
        ("0", c_zero(), c_one()),
        ("A x X", c_writer(&a), c_reader(&a)),
        ("A => X", c_reader(&a), c_writer(&a)),
        ("1 + Id", c_coproduct(&c_one(), &c_id())?, c_product(&c_zero(), &c_id())?),
    ];
    for (name, c, expected) in cases {
        let d = dual(&c)?;
        let iso = find_iso(&d, &expected).is_some();
        println!("{name:>8}: dual has {} shapes, iso to expected: {iso}", d.num_shapes());
    }
    let d = dual(&c_nelist(3))?;
    println!("nelist(3): dual has {} shapes of {} positions", d.num_shapes(), d.arity(0));
    Ok(())
}
