//! Finite containers ⟨S, P⟩ standing for the functors `X ↦ Σ s∈S. X^{P(s)}`,
//! their elements and morphisms, and the closure constructions.

mod morphism;
pub mod session;

pub use morphism::{assoc, expect_same, from_identity, left_unitor, right_unitor, to_identity, ContainerMorphism};

use std::fmt;

use crate::error::{Error, Result};
use crate::finset::{
    card_pow, card_product, fn_token, guard, inl_token, inr_token, lex_decode, lex_index, lex_tuples,
    pair_token, FinFn, FinSet,
};

/// A container: a shape set and a position set for every shape.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Container {
    pub shapes: FinSet,
    pub positions: Vec<FinSet>,
}

/// An element of `C X`: a shape together with a payload `P(shape) → X`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContainerElement {
    pub shape: usize,
    pub payload: FinFn,
}

impl ContainerElement {
    pub fn carrier(&self) -> &FinSet {
        &self.payload.cod
    }

    /// The generic element of shape `s`: payload is the identity on `P(s)`.
    pub fn universal(c: &Container, s: usize) -> ContainerElement {
        ContainerElement { shape: s, payload: FinFn::identity(c.pos(s)) }
    }

    pub fn token(&self, c: &Container) -> String {
        let xs: Vec<&str> = self.payload.table.iter().map(|&x| self.carrier().elem(x)).collect();
        format!("{}[{}]", c.shapes.elem(self.shape), xs.join(","))
    }
}

impl fmt::Debug for ContainerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{:?}", self.shape, self.payload.table)
    }
}

/// `C X` as a finite set together with the elements in the same order.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub set: FinSet,
    pub elements: Vec<ContainerElement>,
}

impl Container {
    pub fn new(shapes: FinSet, positions: Vec<FinSet>) -> Result<Container> {
        if positions.len() != shapes.len() {
            return Err(Error::invalid(format!(
                "container has {} shapes but {} position sets",
                shapes.len(),
                positions.len()
            )));
        }
        Ok(Container { shapes, positions })
    }

    pub fn num_shapes(&self) -> usize {
        self.shapes.len()
    }

    pub fn pos(&self, s: usize) -> &FinSet {
        &self.positions[s]
    }

    pub fn arity(&self, s: usize) -> usize {
        self.positions[s].len()
    }

    pub fn max_arity(&self) -> usize {
        self.positions.iter().map(FinSet::len).max().unwrap_or(0)
    }

    /// `|C X|` for `|X| = n`.
    pub fn count_at(&self, n: usize) -> u128 {
        (0..self.num_shapes()).fold(0u128, |acc, s| acc.saturating_add(card_pow(n, self.arity(s))))
    }

    /// Position of `e` in the enumeration order of [`Container::interpret`].
    pub fn element_index(&self, e: &ContainerElement) -> usize {
        let n = e.carrier().len();
        let offset: usize = (0..e.shape).map(|s| card_pow(n, self.arity(s)) as usize).sum();
        offset + lex_index(&vec![n; self.arity(e.shape)], &e.payload.table)
    }

    /// Checks that `e` is an element of this container over some carrier.
    pub fn check_element(&self, e: &ContainerElement) -> Result<()> {
        if e.shape >= self.num_shapes() {
            return Err(Error::mismatch(format!("shape index {} out of range", e.shape)));
        }
        if e.payload.dom != *self.pos(e.shape) {
            return Err(Error::mismatch(format!(
                "payload domain `{}` is not the position set of shape `{}`",
                e.payload.dom.name(),
                self.shapes.elem(e.shape)
            )));
        }
        Ok(())
    }

    /// All elements of `C X`, by shape and then lexicographically by payload.
    pub fn elements(&self, x: &FinSet) -> Result<Vec<ContainerElement>> {
        guard("container interpretation", self.count_at(x.len()))?;
        let mut out = Vec::new();
        for s in 0..self.num_shapes() {
            for table in lex_tuples(&vec![x.len(); self.arity(s)]) {
                out.push(ContainerElement { shape: s, payload: FinFn { dom: self.pos(s).clone(), cod: x.clone(), table } });
            }
        }
        Ok(out)
    }

    pub fn interpret(&self, x: &FinSet) -> Result<Interpretation> {
        let elements = self.elements(x)?;
        let tokens = elements.iter().map(|e| e.token(self)).collect();
        let set = FinSet::new(format!("C({})", x.name()), tokens)?;
        Ok(Interpretation { set, elements })
    }

    /// `C f` applied to `e`: post-compose the payload.
    pub fn fmap(&self, f: &FinFn, e: &ContainerElement) -> Result<ContainerElement> {
        self.check_element(e)?;
        if e.payload.cod != f.dom {
            return Err(Error::mismatch("element carrier differs from the function's domain"));
        }
        Ok(ContainerElement { shape: e.shape, payload: FinFn::compose(f, &e.payload)? })
    }

    /// Looks up a shape by token.
    pub fn shape(&self, token: &str) -> Result<usize> {
        self.shapes.require(token)
    }
}

impl fmt::Debug for Container {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.num_shapes())
            .map(|s| format!("{}:{}", self.shapes.elem(s), self.arity(s)))
            .collect();
        write!(f, "<{}>", parts.join(" "))
    }
}

fn positions_named(s: &str, elems: Vec<String>) -> Result<FinSet> {
    FinSet::new(format!("P({s})"), elems)
}

/// The identity functor ⟨1, 1⟩.
pub fn c_id() -> Container {
    Container { shapes: FinSet::unit(), positions: vec![FinSet::unit()] }
}

/// The constant functor at `A`: shapes `A`, no positions.
pub fn c_const(a: &FinSet) -> Container {
    let positions = (0..a.len()).map(|_| FinSet::empty("0")).collect();
    Container { shapes: a.clone(), positions }
}

/// The constant-zero functor (no shapes).
pub fn c_zero() -> Container {
    c_const(&FinSet::empty("0"))
}

/// The constant-one functor.
pub fn c_one() -> Container {
    c_const(&FinSet::unit())
}

/// `A ⇒ X`, the container ⟨1, A⟩.
pub fn c_reader(a: &FinSet) -> Container {
    Container { shapes: FinSet::unit(), positions: vec![a.clone()] }
}

/// `A × X`, the container ⟨A, 1⟩.
pub fn c_writer(a: &FinSet) -> Container {
    let positions = (0..a.len()).map(|_| FinSet::unit()).collect();
    Container { shapes: a.clone(), positions }
}

/// `C0 X × C1 X`.
pub fn c_product(c0: &Container, c1: &Container) -> Result<Container> {
    guard("product shapes", card_product([c0.num_shapes(), c1.num_shapes()]))?;
    let mut shapes = Vec::new();
    let mut positions = Vec::new();
    for s0 in 0..c0.num_shapes() {
        for s1 in 0..c1.num_shapes() {
            let tok = pair_token(c0.shapes.elem(s0), c1.shapes.elem(s1));
            let elems =
                c0.pos(s0).elems().iter().map(|p| inl_token(p)).chain(c1.pos(s1).elems().iter().map(|p| inr_token(p)));
            positions.push(positions_named(&tok, elems.collect())?);
            shapes.push(tok);
        }
    }
    Container::new(FinSet::new("S", shapes)?, positions)
}

/// `C0 X + C1 X`.
pub fn c_coproduct(c0: &Container, c1: &Container) -> Result<Container> {
    let shapes =
        c0.shapes.elems().iter().map(|s| inl_token(s)).chain(c1.shapes.elems().iter().map(|s| inr_token(s))).collect();
    let positions = c0.positions.iter().chain(&c1.positions).cloned().collect();
    Container::new(FinSet::new("S", shapes)?, positions)
}

/// Index arithmetic for the composite `outer ∘ inner`.
///
/// Shapes are pairs `(s0, f : P0(s0) → S1)` ordered by `s0` and then
/// lexicographically by `f`; positions of `(s0, f)` are pairs `(p, q)` with
/// `q ∈ P1(f p)`, ordered by `p` then `q`.
#[derive(Clone, Debug)]
pub struct Composite<'a> {
    pub outer: &'a Container,
    pub inner: &'a Container,
    offsets: Vec<usize>,
}

impl<'a> Composite<'a> {
    pub fn new(outer: &'a Container, inner: &'a Container) -> Result<Composite<'a>> {
        let mut offsets = Vec::with_capacity(outer.num_shapes() + 1);
        let mut total = 0u128;
        for s0 in 0..outer.num_shapes() {
            offsets.push(total as usize);
            total = total.saturating_add(card_pow(inner.num_shapes(), outer.arity(s0)));
            guard("composite shapes", total)?;
        }
        offsets.push(total as usize);
        Ok(Composite { outer, inner, offsets })
    }

    pub fn num_shapes(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn shape_index(&self, s0: usize, f: &[usize]) -> usize {
        self.offsets[s0] + lex_index(&vec![self.inner.num_shapes(); f.len()], f)
    }

    pub fn decode_shape(&self, idx: usize) -> (usize, Vec<usize>) {
        let s0 = self.offsets.partition_point(|&o| o <= idx) - 1;
        let f = lex_decode(&vec![self.inner.num_shapes(); self.outer.arity(s0)], idx - self.offsets[s0]);
        (s0, f)
    }

    pub fn pos_index(&self, f: &[usize], p: usize, q: usize) -> usize {
        f[..p].iter().map(|&s1| self.inner.arity(s1)).sum::<usize>() + q
    }

    pub fn decode_pos(&self, f: &[usize], mut idx: usize) -> (usize, usize) {
        for (p, &s1) in f.iter().enumerate() {
            let n = self.inner.arity(s1);
            if idx < n {
                return (p, idx);
            }
            idx -= n;
        }
        panic!("position index out of range for composite shape");
    }

    pub fn arity(&self, f: &[usize]) -> usize {
        f.iter().map(|&s1| self.inner.arity(s1)).sum()
    }

    /// Builds the composite container.
    pub fn container(&self) -> Result<Container> {
        let (c0, c1) = (self.outer, self.inner);
        let mut shapes = Vec::with_capacity(self.num_shapes());
        let mut positions = Vec::with_capacity(self.num_shapes());
        for s0 in 0..c0.num_shapes() {
            for f in lex_tuples(&vec![c1.num_shapes(); c0.arity(s0)]) {
                let ftok = fn_token(c0.pos(s0).elems().iter().zip(&f).map(|(p, &s1)| (p.as_str(), c1.shapes.elem(s1))));
                let tok = pair_token(c0.shapes.elem(s0), &ftok);
                let mut elems = Vec::new();
                for (p, &s1) in f.iter().enumerate() {
                    for q in c1.pos(s1).elems() {
                        elems.push(pair_token(c0.pos(s0).elem(p), q));
                    }
                }
                positions.push(positions_named(&tok, elems)?);
                shapes.push(tok);
            }
        }
        Container::new(FinSet::new("S", shapes)?, positions)
    }

    /// Flattens an outer element whose payload picks inner elements.
    pub fn flatten(
        &self,
        composite: &Container,
        shape: usize,
        children: &[ContainerElement],
    ) -> Result<ContainerElement> {
        if children.len() != self.outer.arity(shape) {
            return Err(Error::mismatch("wrong number of inner elements"));
        }
        let carrier = match children.first() {
            Some(c) => c.carrier().clone(),
            None => return Err(Error::mismatch("flattening a leaf-free element needs an explicit carrier")),
        };
        self.flatten_over(composite, shape, children, &carrier)
    }

    /// As [`Composite::flatten`], with the carrier given explicitly.
    pub fn flatten_over(
        &self,
        composite: &Container,
        shape: usize,
        children: &[ContainerElement],
        carrier: &FinSet,
    ) -> Result<ContainerElement> {
        let f: Vec<usize> = children.iter().map(|c| c.shape).collect();
        let idx = self.shape_index(shape, &f);
        let mut table = Vec::with_capacity(self.arity(&f));
        for c in children {
            if c.carrier() != carrier {
                return Err(Error::mismatch("inner elements live over different carriers"));
            }
            table.extend_from_slice(&c.payload.table);
        }
        Ok(ContainerElement { shape: idx, payload: FinFn::new(composite.pos(idx).clone(), carrier.clone(), table)? })
    }

    /// Splits a composite element into its outer shape and inner elements.
    pub fn split(&self, e: &ContainerElement) -> (usize, Vec<ContainerElement>) {
        let (s0, f) = self.decode_shape(e.shape);
        let mut children = Vec::with_capacity(f.len());
        let mut at = 0;
        for &s1 in &f {
            let n = self.inner.arity(s1);
            let table = e.payload.table[at..at + n].to_vec();
            at += n;
            children.push(ContainerElement {
                shape: s1,
                payload: FinFn { dom: self.inner.pos(s1).clone(), cod: e.carrier().clone(), table },
            });
        }
        (s0, children)
    }
}

/// `C0 ∘ C1`, i.e. `X ↦ C0 (C1 X)`.
pub fn c_compose(c0: &Container, c1: &Container) -> Result<Container> {
    Composite::new(c0, c1)?.container()
}

/// `A ⇒ C X`: shapes are functions `A → S`, positions of `g` are `Σ a. P(g a)`.
pub fn c_exponent(a: &FinSet, c: &Container) -> Result<Container> {
    guard("exponent shapes", card_pow(c.num_shapes(), a.len()))?;
    let mut shapes = Vec::new();
    let mut positions = Vec::new();
    for g in lex_tuples(&vec![c.num_shapes(); a.len()]) {
        let tok = fn_token(a.elems().iter().zip(&g).map(|(x, &s)| (x.as_str(), c.shapes.elem(s))));
        let mut elems = Vec::new();
        for (i, &s) in g.iter().enumerate() {
            for p in c.pos(s).elems() {
                elems.push(pair_token(a.elem(i), p));
            }
        }
        positions.push(positions_named(&tok, elems)?);
        shapes.push(tok);
    }
    Container::new(FinSet::new("S", shapes)?, positions)
}

/// `Maybe X`: shapes `just` (one position) and `nothing` (none).
pub fn c_maybe() -> Container {
    Container {
        shapes: FinSet::from_strs("S", &["just", "nothing"]).unwrap(),
        positions: vec![FinSet::unit(), FinSet::empty("0")],
    }
}

/// Nonempty lists of length at most `n`: shapes `1..=n`, positions `0..len`.
pub fn c_nelist(n: usize) -> Container {
    let shapes = FinSet::new("S", (1..=n).map(|k| k.to_string()).collect()).unwrap();
    let positions = (1..=n).map(|k| FinSet::range(format!("P({k})"), k)).collect();
    Container { shapes, positions }
}

/// Count of container morphisms `F → G`: `Π_s Σ_{s'} |P_F(s)|^{|P_G(s')|}`.
pub fn nat_trans_count(f: &Container, g: &Container) -> u128 {
    (0..f.num_shapes()).fold(1u128, |acc, s| {
        let options =
            (0..g.num_shapes()).fold(0u128, |a, t| a.saturating_add(card_pow(f.arity(s), g.arity(t))));
        acc.saturating_mul(options)
    })
}

/// Every container morphism `F → G`, in canonical order.
///
/// For each source shape the choices are ordered by target shape and then
/// lexicographically by position map; the morphisms are ordered
/// lexicographically over these per-shape choices.
pub fn nat_trans_enumerate(f: &Container, g: &Container) -> Result<Vec<ContainerMorphism>> {
    guard("natural transformations", nat_trans_count(f, g))?;
    let per_shape: Vec<Vec<(usize, Vec<usize>)>> = (0..f.num_shapes())
        .map(|s| {
            (0..g.num_shapes())
                .flat_map(|t| lex_tuples(&vec![f.arity(s); g.arity(t)]).map(move |pm| (t, pm)))
                .collect()
        })
        .collect();
    let radices: Vec<usize> = per_shape.iter().map(Vec::len).collect();
    Ok(lex_tuples(&radices)
        .map(|choice| {
            let (shape_map, pos_maps) = choice.iter().enumerate().map(|(s, &i)| per_shape[s][i].clone()).unzip();
            ContainerMorphism::new_unchecked(f.clone(), g.clone(), shape_map, pos_maps)
        })
        .collect())
}

/// Every container with `1..=max_shapes` shapes and arities in `0..=max_arity`,
/// one per multiset of arities (arities nondecreasing), in lexicographic order.
pub fn c_generate(max_shapes: usize, max_arity: usize) -> Vec<Container> {
    let mut out = Vec::new();
    for n in 1..=max_shapes {
        for arities in lex_tuples(&vec![max_arity + 1; n]) {
            if arities.windows(2).all(|w| w[0] <= w[1]) {
                let shapes = FinSet::range("S", n);
                let positions = arities.iter().map(|&k| FinSet::range("P", k)).collect();
                out.push(Container { shapes, positions });
            }
        }
    }
    out
}

/// Searches for a container isomorphism `C → D`.
///
/// Any bijection of shapes that preserves arities extends to an iso, so the
/// search matches shapes greedily by arity and uses index-order bijections
/// on positions.
pub fn find_iso(c: &Container, d: &Container) -> Option<ContainerMorphism> {
    if c.num_shapes() != d.num_shapes() {
        return None;
    }
    let mut used = vec![false; d.num_shapes()];
    let mut shape_map = Vec::with_capacity(c.num_shapes());
    for s in 0..c.num_shapes() {
        let t = (0..d.num_shapes()).find(|&t| !used[t] && d.arity(t) == c.arity(s))?;
        used[t] = true;
        shape_map.push(t);
    }
    let pos_maps = (0..c.num_shapes()).map(|s| (0..c.arity(s)).collect()).collect();
    Some(ContainerMorphism::new_unchecked(c.clone(), d.clone(), shape_map, pos_maps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn interpretation_counts() {
        let x3 = FinSet::range("X", 3);
        assert_eq!(c_reader(&two()).interpret(&x3).unwrap().set.len(), 9);
        assert_eq!(c_one().interpret(&x3).unwrap().set.len(), 1);
        assert_eq!(c_writer(&two()).interpret(&x3).unwrap().set.len(), 6);
        assert_eq!(c_nelist(3).interpret(&FinSet::range("X", 2)).unwrap().set.len(), 2 + 4 + 8);
    }

    #[test]
    fn generated_containers() {
        // Multisets of size 1..=3 over 4 arities: 4 + 10 + 20.
        assert_eq!(c_generate(3, 3).len(), 34);
        let one = &c_generate(1, 0)[0];
        assert!(find_iso(one, &c_one()).is_some());
    }

    #[test]
    fn element_index_matches_enumeration() {
        let c = c_coproduct(&c_nelist(2), &c_maybe()).unwrap();
        let x = FinSet::range("X", 3);
        for (i, e) in c.elements(&x).unwrap().iter().enumerate() {
            assert_eq!(c.element_index(e), i);
        }
    }

    #[test]
    fn fmap_functor_laws() {
        let c = c_product(&c_reader(&two()), &c_maybe()).unwrap();
        let x = FinSet::range("X", 2);
        let fs = crate::finset::exponent(&x, &x).unwrap().functions;
        for e in c.elements(&x).unwrap() {
            assert_eq!(c.fmap(&FinFn::identity(&x), &e).unwrap(), e);
            for f in &fs {
                for g in &fs {
                    let gf = FinFn::compose(g, f).unwrap();
                    assert_eq!(c.fmap(&gf, &e).unwrap(), c.fmap(g, &c.fmap(f, &e).unwrap()).unwrap());
                }
            }
        }
        let k = c_const(&two());
        let e = &k.elements(&x).unwrap()[1];
        assert_eq!(k.fmap(&fs[0], e).unwrap().shape, 1);
    }

    #[test]
    fn fmap_rejects_wrong_carrier() {
        let c = c_id();
        let e = &c.elements(&FinSet::range("X", 2)).unwrap()[0];
        let f = FinFn::identity(&FinSet::range("Y", 3));
        assert!(c.fmap(&f, e).is_err());
    }

    #[test]
    fn compose_reader_writer_is_update_shape() {
        let b = FinSet::from_strs("B", &["b0", "b1", "b2"]).unwrap();
        let u = c_compose(&c_reader(&two()), &c_writer(&b)).unwrap();
        assert_eq!(u.num_shapes(), 9);
        assert!((0..9).all(|s| u.arity(s) == 2));
        assert_eq!(u.shapes.elem(1), "(*,{a0->b0,a1->b1})");
    }

    #[test]
    fn composite_index_roundtrip() {
        let c0 = c_nelist(2);
        let c1 = c_maybe();
        let comp = Composite::new(&c0, &c1).unwrap();
        let c = comp.container().unwrap();
        assert_eq!(c.num_shapes(), comp.num_shapes());
        for idx in 0..comp.num_shapes() {
            let (s0, f) = comp.decode_shape(idx);
            assert_eq!(comp.shape_index(s0, &f), idx);
            assert_eq!(comp.arity(&f), c.arity(idx));
            for k in 0..c.arity(idx) {
                let (p, q) = comp.decode_pos(&f, k);
                assert_eq!(comp.pos_index(&f, p, q), k);
            }
        }
        let x = FinSet::range("X", 2);
        for e in c.elements(&x).unwrap() {
            let (s0, children) = comp.split(&e);
            assert_eq!(comp.flatten_over(&c, s0, &children, &x).unwrap(), e);
        }
    }

    #[test]
    fn coproduct_shapes_are_disjoint_union() {
        let c = c_coproduct(&c_writer(&two()), &c_id()).unwrap();
        assert_eq!(c.shapes.elems(), ["inl(a0)", "inl(a1)", "inr(*)"]);
    }

    #[test]
    fn exponent_container() {
        let c = c_exponent(&two(), &c_maybe()).unwrap();
        assert_eq!(c.num_shapes(), 4);
        assert_eq!(c.positions.iter().map(FinSet::len).collect::<Vec<_>>(), vec![2, 1, 1, 0]);
    }

    #[test]
    fn nat_trans_examples() {
        assert_eq!(nat_trans_enumerate(&c_id(), &c_id()).unwrap().len(), 1);
        let w = c_writer(&two());
        assert_eq!(nat_trans_enumerate(&w, &w).unwrap().len(), 4);
        // A shape with no positions only maps to shapes with no positions.
        let g = c_coproduct(&c_maybe(), &c_one()).unwrap();
        assert_eq!(nat_trans_enumerate(&c_one(), &g).unwrap().len(), 2);
        assert_eq!(nat_trans_enumerate(&c_one(), &c_zero()).unwrap().len(), 0);
    }

    #[test]
    fn nat_trans_count_formula() {
        let cs = [c_id(), c_maybe(), c_reader(&two()), c_writer(&two()), c_nelist(2), c_zero()];
        for f in &cs {
            for g in &cs {
                let all = nat_trans_enumerate(f, g).unwrap();
                assert_eq!(all.len() as u128, nat_trans_count(f, g));
                let mut dedup = all.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
            }
        }
    }

    #[test]
    fn find_iso_by_arity() {
        let a = c_coproduct(&c_maybe(), &c_id()).unwrap();
        let b = c_coproduct(&c_id(), &c_maybe()).unwrap();
        let iso = find_iso(&a, &b).unwrap();
        assert!(iso.is_iso());
        assert!(find_iso(&c_maybe(), &c_writer(&two())).is_none());
    }
}
