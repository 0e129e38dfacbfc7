//! The dual `⊥C` of a container: shapes are the dependent tuples
//! `Π_s P(s)`, and every position set is a copy of `S`.
//!
//! A dual shape `q` is a machine that, shown a computation of shape `s`,
//! answers with the position `q(s)`; the computation in turn tells the
//! machine which shape it had.

use crate::container::{c_compose, c_id, left_unitor, Composite, Container, ContainerMorphism};
use crate::error::{Error, Result};
use crate::finset::{card_product, guard, lex_decode, lex_index, lex_tuples, FinSet};
use crate::interaction::InteractionLaw;

fn radices(c: &Container) -> Vec<usize> {
    (0..c.num_shapes()).map(|s| c.arity(s)).collect()
}

/// Index of the dual shape whose tuple is `q`.
pub fn dual_shape_index(c: &Container, q: &[usize]) -> usize {
    lex_index(&radices(c), q)
}

/// Tuple of the dual shape with index `idx`.
pub fn dual_shape_tuple(c: &Container, idx: usize) -> Vec<usize> {
    lex_decode(&radices(c), idx)
}

pub fn dual(c: &Container) -> Result<Container> {
    let r = radices(c);
    guard("dual shapes", card_product(r.iter().copied()))?;
    let positions = c.shapes.renamed("S");
    let mut shapes = Vec::new();
    for q in lex_tuples(&r) {
        let parts: Vec<&str> = q.iter().enumerate().map(|(s, &p)| c.pos(s).elem(p)).collect();
        shapes.push(format!("<{}>", parts.join(",")));
    }
    let n = shapes.len();
    Container::new(FinSet::new("Q", shapes)?, vec![positions; n])
}

/// A container, its dual, and the canonical pairing between them.
#[derive(Clone, Debug)]
pub struct DualWitness {
    pub src: Container,
    pub dual: Container,
    pub pairing: InteractionLaw,
}

pub fn dual_witness(c: &Container) -> Result<DualWitness> {
    let pairing = dual_pairing(c)?;
    Ok(DualWitness { src: c.clone(), dual: pairing.g.clone(), pairing })
}

/// The evaluation law between `C` and `⊥C`: entry `(s, q) = (q(s), s)`.
pub fn dual_pairing(c: &Container) -> Result<InteractionLaw> {
    let d = dual(c)?;
    InteractionLaw::from_fn(c, &d, |s, qi| (dual_shape_tuple(c, qi)[s], s))
}

/// The morphism `F → ⊥G` corresponding to a law between `F` and `G`.
pub fn il_to_morphism(il: &InteractionLaw) -> Result<ContainerMorphism> {
    let d = dual(&il.g)?;
    ContainerMorphism::from_fn(&il.f, &d, |s| {
        let q: Vec<usize> = (0..il.g.num_shapes()).map(|t| il.entry(s, t).1).collect();
        let pm = (0..il.g.num_shapes()).map(|t| il.entry(s, t).0).collect();
        (dual_shape_index(&il.g, &q), pm)
    })
}

/// The law between `F` and `G` corresponding to a morphism `F → ⊥G`.
pub fn morphism_to_il(m: &ContainerMorphism, g: &Container) -> Result<InteractionLaw> {
    if m.dst != dual(g)? {
        return Err(Error::mismatch("morphism does not land in the dual"));
    }
    InteractionLaw::from_fn(&m.src, g, |s, t| {
        let q = dual_shape_tuple(g, m.shape_map[s]);
        (m.pos_maps[s][t], q[t])
    })
}

/// `e : Id → ⊥Id` and its inverse.
pub fn e_iso() -> Result<(ContainerMorphism, ContainerMorphism)> {
    let d = dual(&c_id())?;
    let e = ContainerMorphism::from_fn(&c_id(), &d, |_| (0, vec![0]))?;
    let inv = e.inverse()?;
    Ok((e, inv))
}

/// `⊥α : ⊥G → ⊥G'` for `α : G' → G`.
pub fn dual_morphism(alpha: &ContainerMorphism) -> Result<ContainerMorphism> {
    let (g_src, g_dst) = (&alpha.src, &alpha.dst);
    ContainerMorphism::from_fn(&dual(g_dst)?, &dual(g_src)?, |qi| {
        let q = dual_shape_tuple(g_dst, qi);
        let q2: Vec<usize> =
            (0..g_src.num_shapes()).map(|s| alpha.pos_maps[s][q[alpha.shape_map[s]]]).collect();
        (dual_shape_index(g_src, &q2), alpha.shape_map.clone())
    })
}

/// `m : ⊥G0 ∘ ⊥G1 → ⊥(G0 ∘ G1)`, i.e. `(q0, f) ↦ λ(s0, g). (q0 s0, f s0 (g (q0 s0)))`.
pub fn m_map(g0: &Container, g1: &Container) -> Result<ContainerMorphism> {
    let (d0, d1) = (dual(g0)?, dual(g1)?);
    let src_view = Composite::new(&d0, &d1)?;
    let src = src_view.container()?;
    let tgt_view = Composite::new(g0, g1)?;
    let g01 = tgt_view.container()?;
    let dst = dual(&g01)?;
    ContainerMorphism::from_fn(&src, &dst, |idx| {
        let (q0i, f) = src_view.decode_shape(idx);
        let q0 = dual_shape_tuple(g0, q0i);
        let inner: Vec<Vec<usize>> = f.iter().map(|&qi| dual_shape_tuple(g1, qi)).collect();
        let mut r = Vec::with_capacity(g01.num_shapes());
        let mut pm = Vec::with_capacity(g01.num_shapes());
        for sg in 0..g01.num_shapes() {
            let (s0, g) = tgt_view.decode_shape(sg);
            let p = q0[s0];
            let p2 = inner[s0][g[p]];
            r.push(tgt_view.pos_index(&g, p, p2));
            pm.push(src_view.pos_index(&f, s0, g[p]));
        }
        (dual_shape_index(&g01, &r), pm)
    })
}

/// The unit `C → ⊥⊥C`: a shape becomes the constant tuple, read back by evaluation.
pub fn dual_unit(c: &Container) -> Result<ContainerMorphism> {
    let d = dual(c)?;
    let dd = dual(&d)?;
    ContainerMorphism::from_fn(c, &dd, |s| {
        let tuple = vec![s; d.num_shapes()];
        let pm = (0..d.num_shapes()).map(|qi| dual_shape_tuple(c, qi)[s]).collect();
        (dual_shape_index(&d, &tuple), pm)
    })
}

/// Unit coherence of `(e, m)` on the left: `m_{Id,G} ∘ (e·⊥G) ∘ λ⁻¹ = ⊥(λ_G)`.
pub fn left_unit_coherence(g: &Container) -> Result<bool> {
    let dg = dual(g)?;
    let (e, _) = e_iso()?;
    let lhs = ContainerMorphism::chain(&[
        left_unitor(&dg)?.inverse()?,
        ContainerMorphism::whisker_right(&e, &dg)?,
        m_map(&c_id(), g)?,
    ])?;
    Ok(lhs == dual_morphism(&left_unitor(g)?)?)
}

/// Unit coherence on the right: `m_{G,Id} ∘ (⊥G·e) ∘ ρ⁻¹ = ⊥(ρ_G)`.
pub fn right_unit_coherence(g: &Container) -> Result<bool> {
    let dg = dual(g)?;
    let (e, _) = e_iso()?;
    let lhs = ContainerMorphism::chain(&[
        crate::container::right_unitor(&dg)?.inverse()?,
        ContainerMorphism::whisker_left(&dg, &e)?,
        m_map(g, &c_id())?,
    ])?;
    Ok(lhs == dual_morphism(&crate::container::right_unitor(g)?)?)
}

/// Associativity coherence of `m` for a triple of containers.
pub fn assoc_coherence(g0: &Container, g1: &Container, g2: &Container) -> Result<bool> {
    let (d0, d1, d2) = (dual(g0)?, dual(g1)?, dual(g2)?);
    let g12 = c_compose(g1, g2)?;
    let g01 = c_compose(g0, g1)?;
    let lhs = ContainerMorphism::chain(&[
        crate::container::assoc(&d0, &d1, &d2)?,
        ContainerMorphism::whisker_left(&d0, &m_map(g1, g2)?)?,
        m_map(g0, &g12)?,
    ])?;
    let rhs = ContainerMorphism::chain(&[
        ContainerMorphism::whisker_right(&m_map(g0, g1)?, &d2)?,
        m_map(&g01, g2)?,
        dual_morphism(&crate::container::assoc(g0, g1, g2)?.inverse()?)?,
    ])?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{
        c_coproduct, c_maybe, c_nelist, c_one, c_product, c_reader, c_writer, c_zero, find_iso, nat_trans_enumerate,
        ContainerElement,
    };
    use crate::finset::FinFn;
    use crate::interaction::{il_count, il_enumerate};

    fn set(name: &str, n: usize) -> FinSet {
        FinSet::new(name, (0..n).map(|i| format!("{}{}", name.to_lowercase(), i)).collect()).unwrap()
    }

    fn catalogue() -> Vec<Container> {
        let a = set("A", 2);
        vec![
            c_id(),
            c_one(),
            c_zero(),
            c_reader(&a),
            c_writer(&a),
            c_maybe(),
            c_nelist(3),
            c_compose(&c_reader(&a), &c_writer(&set("B", 2))).unwrap(),
        ]
    }

    #[test]
    fn cardinalities() {
        for c in catalogue() {
            let d = dual(&c).unwrap();
            assert_eq!(d.num_shapes() as u128, card_product(radices(&c)));
            assert!(d.positions.iter().all(|p| *p == c.shapes));
        }
    }

    #[test]
    fn small_duals() {
        let a = set("A", 3);
        assert!(find_iso(&dual(&c_reader(&a)).unwrap(), &c_writer(&a)).is_some());
        assert!(find_iso(&dual(&c_writer(&a)).unwrap(), &c_reader(&a)).is_some());
        assert_eq!(dual(&c_one()).unwrap().num_shapes(), 0);
        assert_eq!(dual(&c_maybe()).unwrap().num_shapes(), 0);
        assert!(dual_pairing(&c_maybe()).unwrap().table.is_empty());
        assert_eq!(dual(&c_reader(&a)).unwrap().shapes.elems(), ["<a0>", "<a1>", "<a2>"]);
    }

    #[test]
    fn coproduct_dual_is_product_of_duals() {
        let a = set("A", 2);
        let cs = [c_id(), c_reader(&a), c_writer(&a), c_nelist(2), c_one()];
        for g0 in &cs {
            for g1 in &cs {
                let lhs = dual(&c_coproduct(g0, g1).unwrap()).unwrap();
                let rhs = c_product(&dual(g0).unwrap(), &dual(g1).unwrap()).unwrap();
                assert!(find_iso(&lhs, &rhs).is_some(), "{g0:?} {g1:?}");
            }
        }
    }

    #[test]
    fn pairing_formulas() {
        // Reader: φ(f, (a, y)) = (f a, y). Dual shape `<a>` has the single position `*`.
        let a = set("A", 2);
        let p = dual_pairing(&c_reader(&a)).unwrap();
        for t in 0..2 {
            assert_eq!(p.entry(0, t), (t, 0));
        }
        // Writer: ψ((b, x), g) = (x, g b).
        let p = dual_pairing(&c_writer(&a)).unwrap();
        for s in 0..2 {
            assert_eq!(p.entry(s, 0), (0, s));
        }
    }

    #[test]
    fn il_morphism_roundtrip() {
        let a = set("A", 2);
        let (f, g) = (c_reader(&a), c_writer(&a));
        for (f, g) in [(f.clone(), g.clone()), (g, f)] {
            for il in il_enumerate(&f, &g).unwrap() {
                let m = il_to_morphism(&il).unwrap();
                assert_eq!(morphism_to_il(&m, &g).unwrap(), il);
            }
        }
        // The pairing read from the machine side is the identity on the dual;
        // read from the computation side it is the unit into the double dual.
        for c in catalogue().into_iter().take(6) {
            let pairing = dual_pairing(&c).unwrap();
            let m = il_to_morphism(&crate::interaction::il_rev(&pairing)).unwrap();
            assert_eq!(m, ContainerMorphism::identity(&m.src));
            assert_eq!(il_to_morphism(&pairing).unwrap(), dual_unit(&c).unwrap());
        }
    }

    #[test]
    fn law_and_morphism_counts_agree() {
        let a = set("A", 2);
        let pairs = [
            (c_reader(&a), c_writer(&a)),
            (c_writer(&a), c_reader(&a)),
            (c_id(), c_id()),
            (c_maybe(), c_writer(&a)),
            (c_nelist(2), c_coproduct(&c_id(), &c_writer(&a)).unwrap()),
        ];
        for (f, g) in pairs {
            let d = dual(&g).unwrap();
            assert_eq!(il_count(&f, &g), nat_trans_enumerate(&f, &d).unwrap().len() as u128);
        }
    }

    #[test]
    fn e_is_iso() {
        let (e, inv) = e_iso().unwrap();
        assert_eq!(ContainerMorphism::compose(&inv, &e).unwrap(), ContainerMorphism::identity(&c_id()));
        assert_eq!(ContainerMorphism::compose(&e, &inv).unwrap(), ContainerMorphism::identity(&e.dst));
        let x = FinSet::range("X", 2);
        let elem = ContainerElement { shape: 0, payload: FinFn::new(FinSet::unit(), x.clone(), vec![1]).unwrap() };
        let out = e.apply(&elem).unwrap();
        assert_eq!(out.payload.table, vec![1]);
    }

    #[test]
    fn m_for_reader_writer() {
        // m(a, f) = λg. (a, f (g a))
        let (a, b) = (set("A", 2), set("B", 2));
        let (g0, g1) = (c_reader(&a), c_writer(&b));
        let m = m_map(&g0, &g1).unwrap();
        let (d0, d1) = (dual(&g0).unwrap(), dual(&g1).unwrap());
        let outer = Composite::new(&d0, &d1).unwrap();
        let g01 = Composite::new(&g0, &g1).unwrap();
        let g01c = g01.container().unwrap();
        let x = FinSet::range("X", 3);
        for e in m.src.elements(&x).unwrap() {
            let (q0i, kids) = outer.split(&e);
            let a_val = dual_shape_tuple(&g0, q0i)[0];
            let f = &kids[0].payload;
            let out = m.apply(&e).unwrap();
            let r = dual_shape_tuple(&g01c, out.shape);
            for sg in 0..g01.num_shapes() {
                let (_, g) = g01.decode_shape(sg);
                assert_eq!(g01.decode_pos(&g, r[sg]).0, a_val);
                assert_eq!(out.payload.apply(sg), f.apply(g[a_val]));
            }
        }
        assert_eq!((m.src.num_shapes(), m.dst.num_shapes()), (2, 16));
    }

    #[test]
    fn m_with_identity_is_iso() {
        let a = set("A", 2);
        for g in [c_reader(&a), c_writer(&a), c_maybe()] {
            assert!(m_map(&c_id(), &g).unwrap().is_iso());
            assert!(m_map(&g, &c_id()).unwrap().is_iso());
        }
    }

    #[test]
    fn lax_monoidal_coherence() {
        let a = set("A", 2);
        let cs = [c_id(), c_reader(&a), c_writer(&a), c_maybe()];
        for g in &cs {
            assert!(left_unit_coherence(g).unwrap());
            assert!(right_unit_coherence(g).unwrap());
        }
        let mut checked = 0;
        for g0 in &cs {
            for g1 in &cs {
                for g2 in &cs {
                    match crate::finset::with_size_guard(50_000, || assoc_coherence(g0, g1, g2)) {
                        Ok(ok) => {
                            assert!(ok, "{g0:?} {g1:?} {g2:?}");
                            checked += 1;
                        }
                        Err(e) => assert!(e.is_size_guard()),
                    }
                }
            }
        }
        assert!(checked >= 40, "only {checked} triples fit the guard");
    }

    #[test]
    fn dual_morphism_is_contravariant_functor() {
        let a = set("A", 2);
        let (f, g) = (c_coproduct(&c_id(), &c_writer(&a)).unwrap(), c_writer(&a));
        for al in nat_trans_enumerate(&f, &g).unwrap() {
            for be in nat_trans_enumerate(&g, &g).unwrap() {
                let comp = ContainerMorphism::compose(&be, &al).unwrap();
                let lhs = dual_morphism(&comp).unwrap();
                let rhs =
                    ContainerMorphism::compose(&dual_morphism(&al).unwrap(), &dual_morphism(&be).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn unit_into_double_dual_is_natural() {
        let a = set("A", 2);
        for c in [c_reader(&a), c_writer(&a), c_maybe()] {
            let u = dual_unit(&c).unwrap();
            for al in nat_trans_enumerate(&c, &c).unwrap() {
                let lhs = ContainerMorphism::compose(&u, &al).unwrap();
                let dd = dual_morphism(&dual_morphism(&al).unwrap()).unwrap();
                let rhs = ContainerMorphism::compose(&dd, &u).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
