//! Functor-functor interaction laws between containers, stored as tables
//! `(s, t) ↦ (p, q)` with `p ∈ P_F(s)` and `q ∈ P_G(t)`.
//!
//! A table is the Yoneda-reduced form of a natural family
//! `F X × G Y → X × Y`: the computation reads position `p`, the machine
//! reads position `q`.

use std::fmt;

use crate::container::{c_coproduct, c_id, c_product, Composite, Container, ContainerElement, ContainerMorphism};
use crate::error::{Error, Result};
use crate::finset::{card_product, guard, lex_tuples};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InteractionLaw {
    pub f: Container,
    pub g: Container,
    /// Indexed by `s * |S_G| + t`.
    pub table: Vec<(usize, usize)>,
}

impl fmt::Debug for InteractionLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IL {:?} x {:?} {:?}", self.f, self.g, self.table)
    }
}

impl InteractionLaw {
    pub fn new(f: Container, g: Container, table: Vec<(usize, usize)>) -> Result<Self> {
        if table.len() != f.num_shapes() * g.num_shapes() {
            return Err(Error::invalid("interaction table is not total"));
        }
        for s in 0..f.num_shapes() {
            for t in 0..g.num_shapes() {
                let (p, q) = table[s * g.num_shapes() + t];
                if p >= f.arity(s) || q >= g.arity(t) {
                    return Err(Error::invalid(format!(
                        "entry at ({}, {}) is not a position pair",
                        f.shapes.elem(s),
                        g.shapes.elem(t)
                    )));
                }
            }
        }
        Ok(InteractionLaw { f, g, table })
    }

    /// Builds a law from a per-shape-pair rule.
    pub fn from_fn(f: &Container, g: &Container, mut rule: impl FnMut(usize, usize) -> (usize, usize)) -> Result<Self> {
        let mut table = Vec::with_capacity(f.num_shapes() * g.num_shapes());
        for s in 0..f.num_shapes() {
            for t in 0..g.num_shapes() {
                table.push(rule(s, t));
            }
        }
        Self::new(f.clone(), g.clone(), table)
    }

    pub fn entry(&self, s: usize, t: usize) -> (usize, usize) {
        self.table[s * self.g.num_shapes() + t]
    }

    pub fn set_entry(&mut self, s: usize, t: usize, v: (usize, usize)) {
        let n = self.g.num_shapes();
        self.table[s * n + t] = v;
    }
}

/// `φ(eF, eG)`: indices of the resulting value in `X` and state in `Y`.
pub fn il_apply(il: &InteractionLaw, ef: &ContainerElement, eg: &ContainerElement) -> Result<(usize, usize)> {
    il.f.check_element(ef)?;
    il.g.check_element(eg)?;
    let (p, q) = il.entry(ef.shape, eg.shape);
    Ok((ef.payload.apply(p), eg.payload.apply(q)))
}

/// Number of laws between `F` and `G`.
pub fn il_count(f: &Container, g: &Container) -> u128 {
    let mut n = 1u128;
    for s in 0..f.num_shapes() {
        for t in 0..g.num_shapes() {
            n = n.saturating_mul(card_product([f.arity(s), g.arity(t)]));
        }
    }
    n
}

/// Every law between `F` and `G`, lexicographic over the table entries.
pub fn il_enumerate(f: &Container, g: &Container) -> Result<Vec<InteractionLaw>> {
    guard("interaction laws", il_count(f, g))?;
    let mut radices = Vec::new();
    for s in 0..f.num_shapes() {
        for t in 0..g.num_shapes() {
            radices.push(f.arity(s) * g.arity(t));
        }
    }
    let nt = g.num_shapes();
    Ok(lex_tuples(&radices)
        .map(|choice| {
            let table = choice
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let gt = g.arity(i % nt.max(1));
                    (c / gt, c % gt)
                })
                .collect();
            InteractionLaw { f: f.clone(), g: g.clone(), table }
        })
        .collect())
}

/// `(F∘J, G∘K)`: the outer law resolves the outer layer, the inner law the chosen inner layer.
pub fn il_tensor(outer: &InteractionLaw, inner: &InteractionLaw) -> Result<InteractionLaw> {
    let fj = Composite::new(&outer.f, &inner.f)?;
    let gk = Composite::new(&outer.g, &inner.g)?;
    let (fjc, gkc) = (fj.container()?, gk.container()?);
    InteractionLaw::from_fn(&fjc, &gkc, |a, b| {
        let (s, f) = fj.decode_shape(a);
        let (t, g) = gk.decode_shape(b);
        let (p, q) = outer.entry(s, t);
        let (p2, q2) = inner.entry(f[p], g[q]);
        (fj.pos_index(&f, p, p2), gk.pos_index(&g, q, q2))
    })
}

/// The tensor unit `(Id, Id, id)`.
pub fn il_identity() -> InteractionLaw {
    InteractionLaw { f: c_id(), g: c_id(), table: vec![(0, 0)] }
}

/// `(G, F, sym ∘ φ ∘ sym)`.
pub fn il_rev(il: &InteractionLaw) -> InteractionLaw {
    let mut table = Vec::with_capacity(il.table.len());
    for t in 0..il.g.num_shapes() {
        for s in 0..il.f.num_shapes() {
            let (p, q) = il.entry(s, t);
            table.push((q, p));
        }
    }
    InteractionLaw { f: il.g.clone(), g: il.f.clone(), table }
}

/// `(F', G', φ ∘ (f × g))` for `f : F' → F`, `g : G' → G`.
pub fn il_stretch(il: &InteractionLaw, f: &ContainerMorphism, g: &ContainerMorphism) -> Result<InteractionLaw> {
    if f.dst != il.f || g.dst != il.g {
        return Err(Error::mismatch("stretching morphisms must land in the law's functors"));
    }
    InteractionLaw::from_fn(&f.src, &g.src, |s, t| {
        let (p, q) = il.entry(f.shape_map[s], g.shape_map[t]);
        (f.pos_maps[s][p], g.pos_maps[t][q])
    })
}

/// `(F0 × F1, G0 + G1)`: the machine's tag picks which law answers.
pub fn il_product(l0: &InteractionLaw, l1: &InteractionLaw) -> Result<InteractionLaw> {
    let f = c_product(&l0.f, &l1.f)?;
    let g = c_coproduct(&l0.g, &l1.g)?;
    let n1 = l1.f.num_shapes();
    let g0 = l0.g.num_shapes();
    InteractionLaw::from_fn(&f, &g, |s, t| {
        let (s0, s1) = (s / n1.max(1), s % n1.max(1));
        if t < g0 {
            l0.entry(s0, t)
        } else {
            let (p, q) = l1.entry(s1, t - g0);
            (l0.f.arity(s0) + p, q)
        }
    })
}

/// A candidate map between laws: `f : F → F'` and `g : G' → G`.
#[derive(Clone, Debug)]
pub struct ILMap {
    pub src: InteractionLaw,
    pub dst: InteractionLaw,
    pub f: ContainerMorphism,
    pub g: ContainerMorphism,
}

/// First shape pair `(s ∈ S_F, t ∈ S_G')` where `φ ∘ (id × g) ≠ φ' ∘ (f × id)`.
pub fn il_map_counterexample(m: &ILMap) -> Result<Option<(usize, usize)>> {
    if m.f.src != m.src.f || m.f.dst != m.dst.f || m.g.src != m.dst.g || m.g.dst != m.src.g {
        return Err(Error::mismatch("law map components have the wrong types"));
    }
    for s in 0..m.src.f.num_shapes() {
        for t in 0..m.dst.g.num_shapes() {
            let (p, q) = m.src.entry(s, m.g.shape_map[t]);
            let (p2, q2) = m.dst.entry(m.f.shape_map[s], t);
            if p != m.f.pos_maps[s][p2] || m.g.pos_maps[t][q] != q2 {
                return Ok(Some((s, t)));
            }
        }
    }
    Ok(None)
}

pub fn il_map_check(m: &ILMap) -> bool {
    matches!(il_map_counterexample(m), Ok(None))
}
