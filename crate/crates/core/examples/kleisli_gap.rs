//! Residual laws are natural in pure maps only: a multiset law and a duplicating
//! Kleisli map give different multisets along the two routes.

use interaction_laws::residual::*;

fn main() -> interaction_laws::Result<()> {
    let (law, distributed, mapped) = kleisli_counterexample()?;
    println!("pure naturality: {:?}", pure_naturality_check(&law, 3)?);
    println!("distribute, then interact: {distributed}");
    println!("interact, then map:        {mapped}");
    Ok(())
}
