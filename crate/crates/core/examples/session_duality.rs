//! Syntactic session duality against the container dual.

use interaction_laws::container::find_iso;
use interaction_laws::container::session::*;
use interaction_laws::dual::dual;
use interaction_laws::finset::FinSet;

fn main() -> interaction_laws::Result<()> {
    let a = FinSet::from_strs("A", &["a0", "a1"])?;
    let b = FinSet::from_strs("B", &["b0", "b1"])?;
    let all = enumerate_sessions(2, std::slice::from_ref(&a));
    println!("{} session types of depth <= 2; dual is an involution: {}", all.len(), all.iter().all(|t| session_dual(&session_dual(t)) == *t));
    let t = SessionType::input(&a, SessionType::output(&b, SessionType::Return));
    let semantic = dual(&session_to_container(&t)?)?;
    let syntactic = session_to_container(&session_dual(&t))?;
    println!("input over output: container duals iso = {}", find_iso(&semantic, &syntactic).is_some());
    Ok(())
}
