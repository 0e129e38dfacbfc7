//! Container monads and comonads, free and cofree constructions,
//! monad-comonad interaction laws, and the registered Sweedler-dual instances.

mod comonad;
mod free;
mod mcil;
mod monad;
mod sweedler;

pub use comonad::{
    comonad_identity, comonad_reader, comonad_update, comonad_writer, ComonadLawFailure, Comult, ContainerComonad,
};
pub use free::{enumerate_trees, FreeTree, Machine, Observation, TraceEvent};
pub use mcil::{
    assoc_op_degeneracy, canonical_mcil, matching_condition, mcil_check, mcil_composite, mcil_identity, mcil_product,
    mcil_reader, mcil_update, mcil_writer, run_with_law, update_distributive_laws, BinaryOp, Mcil, McilFailure,
    McilReport, OpDegeneracy,
};
pub use monad::{
    monad_exceptions_reader, monad_identity, monad_nelist, monad_reader, monad_update, monad_writer, update_fn,
    update_shape, Action, ContainerMonad, MonadLawFailure, Monoid,
};
pub use sweedler::{
    coequation_checks, cofree_coassoc_counterexample, comonad_enumerate, comonad_map_enumerate, comonad_map_from_mcil,
    cooperations, corectangularity_theorem, is_comonad_map, mcil_enumerate, mcil_from_comonad_map,
    pair_choice_cooperation, sweedler_nelist, sweedler_squares, sweedler_update, CoequationReport, Cooperation,
    SweedlerInstance,
};
