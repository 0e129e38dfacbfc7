use std::sync::OnceLock;

use interaction_laws::cli::codec::*;
use interaction_laws::container::session::{enumerate_sessions, session_dual, SessionType};
use interaction_laws::container::{c_coproduct, c_product, find_iso, Container};
use interaction_laws::dual::dual;
use interaction_laws::finmodel::container_with_arities;
use interaction_laws::finset::FinSet;
use interaction_laws::interaction::{il_count, il_enumerate};
use interaction_laws::monadic::{enumerate_trees, FreeTree};
use interaction_laws::residual::{RVal, ResidualMonad};
use interaction_laws::runners::*;
use proptest::prelude::*;

fn arities() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..=3, 1..=3)
}

fn sessions() -> &'static [SessionType] {
    static ALL: OnceLock<Vec<SessionType>> = OnceLock::new();
    ALL.get_or_init(|| enumerate_sessions(3, &[FinSet::range("A", 2)]))
}

/// A runner on positive arities with `n` states, as raw choices reduced modulo the bounds.
fn runner_parts() -> impl Strategy<Value = (Vec<usize>, usize, Vec<(usize, usize)>)> {
    (prop::collection::vec(1usize..=3, 1..=3), 1usize..=3, prop::collection::vec((0usize..6, 0usize..6), 9))
}

fn build_runner(arities: &[usize], n: usize, raw: &[(usize, usize)]) -> Runner {
    let c = container_with_arities(arities).unwrap();
    let theta = (0..arities.len())
        .map(|s| (0..n).map(|y| raw[s * 3 + y]).map(|(p, y2)| (p % arities[s], y2 % n)).collect())
        .collect();
    Runner::new(c, FinSet::range("Y", n), theta).unwrap()
}

fn monads() -> [ResidualMonad; 4] {
    [ResidualMonad::Identity, ResidualMonad::Exceptions(2), ResidualMonad::Maybe, ResidualMonad::FinNondet]
}

proptest! {
    #[test]
    fn dual_cardinalities(a in arities()) {
        let c = container_with_arities(&a).unwrap();
        let d = dual(&c).unwrap();
        prop_assert_eq!(d.num_shapes(), a.iter().product::<usize>());
        for t in 0..d.num_shapes() {
            prop_assert_eq!(d.arity(t), a.len());
        }
    }

    #[test]
    fn dual_turns_coproducts_into_products(a in arities(), b in arities()) {
        let (c, d) = (container_with_arities(&a).unwrap(), container_with_arities(&b).unwrap());
        let lhs = dual(&c_coproduct(&c, &d).unwrap()).unwrap();
        let rhs = c_product(&dual(&c).unwrap(), &dual(&d).unwrap()).unwrap();
        prop_assert!(find_iso(&lhs, &rhs).is_some_and(|m| m.is_iso()));
    }

    #[test]
    fn law_count_matches_enumeration(a in arities(), b in arities(), pick in any::<prop::sample::Index>()) {
        let (f, g) = (container_with_arities(&a).unwrap(), container_with_arities(&b).unwrap());
        let count = il_count(&f, &g);
        prop_assume!(count <= 5000);
        let all = il_enumerate(&f, &g).unwrap();
        prop_assert_eq!(all.len() as u128, count);
        if !all.is_empty() {
            let law = &all[pick.index(all.len())];
            prop_assert_eq!(&parse_law(&law_json(law)).unwrap(), law);
        }
    }

    #[test]
    fn container_and_tree_codecs_round_trip(a in arities(), pick in any::<prop::sample::Index>()) {
        let c = container_with_arities(&a).unwrap();
        prop_assert_eq!(&parse_container(&container_json(&c)).unwrap(), &c);
        let trees = enumerate_trees(&c, &["u".to_string(), "v".to_string()], 2).unwrap();
        let t: &FreeTree<String> = &trees[pick.index(trees.len())];
        prop_assert_eq!(&parse_tree(&c, &tree_json(&c, t)).unwrap(), t);
    }

    #[test]
    fn session_dual_is_an_involution(pick in any::<prop::sample::Index>()) {
        let all = sessions();
        let t = &all[pick.index(all.len())];
        prop_assert_eq!(&session_dual(&session_dual(t)), t);
    }

    #[test]
    fn runners_agree_and_round_trip((a, n, raw) in runner_parts(), pick in any::<prop::sample::Index>(), y0 in 0usize..3) {
        let r = build_runner(&a, n, &raw);
        let trees = enumerate_trees(&r.c, &[0usize, 1], 2).unwrap();
        let tree = &trees[pick.index(trees.len())];
        let (by_run, by_machine) = run_both(&r, tree, y0 % n).unwrap();
        prop_assert_eq!(by_run, by_machine);
        prop_assert_eq!(&state_map_to_runner(&runner_to_state_map(&r)).unwrap(), &r);
        prop_assert_eq!(&coalgebra_to_runner(&runner_to_coalgebra(&r).unwrap()).unwrap(), &r);
        let (back, start) = parse_runner(&r.c, &runner_json(&r, y0 % n)).unwrap();
        prop_assert_eq!((&back, start), (&r, y0 % n));
    }

    #[test]
    fn residual_bind_is_associative(m in 0usize..4, v in any::<prop::sample::Index>(), k in prop::collection::vec(any::<prop::sample::Index>(), 3), l in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let r = monads()[m];
        let vals = r.enumerate(3, 2);
        let pick = |ix: &[prop::sample::Index]| -> Vec<RVal> { ix.iter().map(|i| vals[i.index(vals.len())].clone()).collect() };
        let (kv, lv) = (pick(&k), pick(&l));
        let v = &vals[v.index(vals.len())];
        let lhs = r.bind(&r.bind(v, &mut |x| kv[x].clone()), &mut |x| lv[x].clone());
        let rhs = r.bind(v, &mut |x| r.bind(&kv[x], &mut |y| lv[y].clone()));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(r.bind(v, &mut |x| r.unit(x)), v.clone());
        prop_assert_eq!(r.bind(&r.unit(1), &mut |x| kv[x].clone()), kv[1].clone());
    }
}

#[test]
fn dual_of_empty_container_is_terminal() {
    let c = Container::new(FinSet::empty("S"), vec![]).unwrap();
    let d = dual(&c).unwrap();
    assert_eq!(d.num_shapes(), 1);
    assert_eq!(d.arity(0), 0);
}
