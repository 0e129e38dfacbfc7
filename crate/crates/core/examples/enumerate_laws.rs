//! Counting interaction laws, and the functors nothing can interact with.

use interaction_laws::container::*;
use interaction_laws::finset::FinSet;
use interaction_laws::interaction::{il_count, il_enumerate};

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let (r, w) = (c_reader(&a), c_writer(&a));
    println!("reader x writer: {} laws", il_count(&r, &w));
    for law in il_enumerate(&r, &w)? {
        println!("  {:?}", law.table);
    }
    let partners = c_generate(3, 3).iter().filter(|g| il_count(&c_maybe(), g) > 0).count();
    println!("maybe interacts with {partners} of {} generated nonzero functors", c_generate(3, 3).len());
    Ok(())
}
