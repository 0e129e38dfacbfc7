use std::fmt;

use super::comonad::{comonad_identity, comonad_reader, comonad_update, comonad_writer, ContainerComonad};
use super::free::{FreeTree, Machine, TraceEvent};
use super::monad::{
    monad_identity, monad_reader, monad_update, monad_writer, update_fn, update_shape, Action, ContainerMonad, Monoid,
};
use crate::container::{
    assoc, c_compose, c_coproduct, c_product, c_reader, c_writer, Composite, Container, ContainerElement, ContainerMorphism,
};
use crate::dual::dual_pairing;
use crate::error::{Error, Result};
use crate::finset::{lex_index, FinFn, FinSet};
use crate::interaction::{il_apply, il_map_counterexample, il_product, il_tensor, ILMap, InteractionLaw};

/// A monad, a comonad, and an interaction law between their containers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mcil {
    pub t: ContainerMonad,
    pub d: ContainerComonad,
    pub law: InteractionLaw,
}

/// Where an interaction law fails to respect the (co)unit or (co)multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum McilFailure {
    /// `ψ(η x, d) ≠ (x, ε d)` at this comonad shape.
    Unit { d_shape: usize },
    /// The multiplication square fails at composite monad shape `(s, f)` and comonad shape `d_shape`.
    Mult { s: usize, f: Vec<usize>, d_shape: usize },
}

impl fmt::Display for McilFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McilFailure::Unit { d_shape } => write!(f, "unit square fails at comonad shape {d_shape}"),
            McilFailure::Mult { s, f: inner, d_shape } => {
                write!(f, "multiplication square fails at monad shape ({s}, {inner:?}) and comonad shape {d_shape}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McilReport {
    pub unit_checked: usize,
    pub mult_checked: usize,
    /// Instances skipped because the monad multiplication is undefined there.
    pub mult_skipped: usize,
    pub failure: Option<McilFailure>,
}

impl McilReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl Mcil {
    /// Packages a law, failing if the containers differ or a square fails.
    pub fn new(t: ContainerMonad, d: ContainerComonad, law: InteractionLaw) -> Result<Mcil> {
        let report = mcil_check(&t, &d, &law)?;
        if let Some(f) = report.failure {
            return Err(Error::law(f.to_string()));
        }
        Ok(Mcil { t, d, law })
    }

    pub fn check(&self) -> Result<McilReport> {
        mcil_check(&self.t, &self.d, &self.law)
    }
}

/// Checks both squares at universal carriers: `X` is the position set of a
/// monad shape, `Y` the position set of a comonad shape.
pub fn mcil_check(t: &ContainerMonad, d: &ContainerComonad, law: &InteractionLaw) -> Result<McilReport> {
    if law.f != t.c || law.g != d.c {
        return Err(Error::mismatch("law containers differ from the monad and comonad"));
    }
    let mut report = McilReport { unit_checked: 0, mult_checked: 0, mult_skipped: 0, failure: None };
    let nd = d.c.num_shapes();
    for ds in 0..nd {
        report.unit_checked += 1;
        if law.entry(t.unit, ds).1 != d.counit[ds] {
            report.failure = Some(McilFailure::Unit { d_shape: ds });
            return Ok(report);
        }
    }
    let tcomp = t.composite()?;
    let dcomp = d.composite()?;
    for idx in 0..tcomp.num_shapes() {
        let (s, f) = tcomp.decode_shape(idx);
        let Some((s2, pi)) = t.mult_at(s, &f) else {
            report.mult_skipped += nd;
            continue;
        };
        for ds in 0..nd {
            report.mult_checked += 1;
            let (p_star, q_star) = law.entry(s2, ds);
            let delta = d.delta(ds);
            let (p1, q1) = law.entry(s, delta.outer);
            let (p2, q2) = law.entry(f[p1], delta.inner[q1]);
            let ok = pi[p_star] == (p1, p2) && q_star == delta.back[dcomp.pos_index(&delta.inner, q1, q2)];
            if !ok {
                report.failure = Some(McilFailure::Mult { s, f, d_shape: ds });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// The reader monad `A ⇒ X` with the environment comonad `A × Y`: `ψ(f, (a, y)) = (f a, y)`.
pub fn mcil_reader(a: &FinSet) -> Result<Mcil> {
    let t = monad_reader(a)?;
    let d = comonad_writer(a)?;
    let law = InteractionLaw::from_fn(&t.c, &d.c, |_, x| (x, 0))?;
    Mcil::new(t, d, law)
}

/// The writer monad `B × X` with the comonad `B ⇒ Y`: `ψ((b, x), g) = (x, g b)`.
pub fn mcil_writer(b: &Monoid) -> Result<Mcil> {
    let t = monad_writer(b)?;
    let d = comonad_reader(b)?;
    let law = InteractionLaw::from_fn(&t.c, &d.c, |s, _| (0, s))?;
    Mcil::new(t, d, law)
}

/// The update monad with the update comonad: `ψ(f, (a, g)) = let (b, x) = f a in (x, g b)`.
pub fn mcil_update(action: &Action) -> Result<Mcil> {
    let t = monad_update(action)?;
    let d = comonad_update(action)?;
    let law = InteractionLaw::from_fn(&t.c, &d.c, |s, a| (a, update_fn(action, s)[a]))?;
    Mcil::new(t, d, law)
}

pub fn mcil_identity() -> Mcil {
    let t = monad_identity();
    let d = comonad_identity();
    let law = InteractionLaw::from_fn(&t.c, &d.c, |_, _| (0, 0)).unwrap();
    Mcil::new(t, d, law).unwrap()
}

/// Runs a tree against a machine, resolving each node with the law's table.
pub fn run_with_law<L: Clone, M: Clone>(
    il: &InteractionLaw,
    tree: &FreeTree<L>,
    machine: &Machine<M>,
) -> Result<(L, M, Vec<TraceEvent>)> {
    if machine.g != il.g {
        return Err(Error::mismatch("machine container differs from the law's"));
    }
    tree.check(&il.f)?;
    let mut trace = Vec::new();
    let mut node = tree;
    let mut m = machine.clone();
    loop {
        match node {
            FreeTree::Leaf(x) => return Ok((x.clone(), m.extract().clone(), trace)),
            FreeTree::Node(s, ks) => {
                let t = m.shape();
                let (p, q) = il.entry(*s, t);
                m = m.advance(q);
                trace.push(TraceEvent {
                    step: trace.len(),
                    tree_shape: *s,
                    machine_shape: t,
                    tree_position: p,
                    machine_position: q,
                    state: m.current,
                });
                node = &ks[p];
            }
        }
    }
}

/// The free interaction: a tree over `C` against a machine of `⊥C`, paired by evaluation.
pub fn canonical_mcil<L: Clone, M: Clone>(
    c: &Container,
    tree: &FreeTree<L>,
    machine: &Machine<M>,
) -> Result<(L, M, Vec<TraceEvent>)> {
    run_with_law(&dual_pairing(c)?, tree, machine)
}

/// Product of monads `T0 × T1`, coproduct of comonads `D0 + D1`, and the product law.
pub fn mcil_product(m0: &Mcil, m1: &Mcil) -> Result<Mcil> {
    let (t0, t1) = (&m0.t, &m1.t);
    let c = c_product(&t0.c, &t1.c)?;
    let n1 = t1.c.num_shapes();
    let unit = t0.unit * n1 + t1.unit;
    let t = ContainerMonad::from_rule(format!("{}x{}", t0.name, t1.name), c.clone(), unit, |s, f| {
        let (s0, s1) = (s / n1, s % n1);
        let a0 = t0.c.arity(s0);
        let f0: Vec<usize> = f[..a0].iter().map(|&u| u / n1).collect();
        let f1: Vec<usize> = f[a0..].iter().map(|&u| u % n1).collect();
        let (r0, pi0) = t0.mult_at(s0, &f0)?;
        let (r1, pi1) = t1.mult_at(s1, &f1)?;
        let mut pm: Vec<(usize, usize)> = pi0;
        pm.extend(pi1.into_iter().map(|(p, q)| (a0 + p, t0.c.arity(f[a0 + p] / n1) + q)));
        Some((r0 * n1 + r1, pm))
    })?;
    let (d0, d1) = (&m0.d, &m1.d);
    let g = c_coproduct(&d0.c, &d1.c)?;
    let n0 = d0.c.num_shapes();
    let counit = d0.counit.iter().chain(&d1.counit).copied().collect();
    let d = ContainerComonad::from_rule(format!("{}+{}", d0.name, d1.name), g, counit, |x| {
        if x < n0 {
            let dl = d0.delta(x);
            (dl.outer, dl.inner, dl.back)
        } else {
            let dl = d1.delta(x - n0);
            (n0 + dl.outer, dl.inner.iter().map(|&u| n0 + u).collect(), dl.back)
        }
    })?;
    Mcil::new(t, d, il_product(&m0.law, &m1.law)?)
}

/// The matching condition for composing two laws through distributive laws
/// `λ : T1∘T0 → T0∘T1` and `κ : D0∘D1 → D1∘D0`. Returns the first failing shape pair.
pub fn matching_condition(
    m0: &Mcil,
    m1: &Mcil,
    lam: &ContainerMorphism,
    kap: &ContainerMorphism,
) -> Result<Option<(usize, usize)>> {
    let map = ILMap { src: il_tensor(&m1.law, &m0.law)?, dst: il_tensor(&m0.law, &m1.law)?, f: lam.clone(), g: kap.clone() };
    il_map_counterexample(&map)
}

/// Composite monad `T0∘T1` and composite comonad `D0∘D1` with the layered law "ψ0 then ψ1".
pub fn mcil_composite(m0: &Mcil, m1: &Mcil, lam: &ContainerMorphism, kap: &ContainerMorphism) -> Result<Mcil> {
    if let Some((s, t)) = matching_condition(m0, m1, lam, kap)? {
        return Err(Error::law(format!("matching condition fails at shapes ({s}, {t})")));
    }
    let t = composite_monad(&m0.t, &m1.t, lam)?;
    let d = composite_comonad(&m0.d, &m1.d, kap)?;
    Mcil::new(t, d, il_tensor(&m0.law, &m1.law)?)
}

fn composite_monad(t0: &ContainerMonad, t1: &ContainerMonad, lam: &ContainerMorphism) -> Result<ContainerMonad> {
    let (a, b) = (&t0.c, &t1.c);
    let ab = c_compose(a, b)?;
    let steps = [
        assoc(a, b, &ab)?,
        ContainerMorphism::whisker_left(a, &assoc(b, a, b)?.inverse()?)?,
        ContainerMorphism::whisker_left(a, &ContainerMorphism::whisker_right(lam, b)?)?,
        ContainerMorphism::whisker_left(a, &assoc(a, b, b)?)?,
        assoc(a, a, &c_compose(b, b)?)?.inverse()?,
        ContainerMorphism::hcomp(&t0.mult_morphism()?, &t1.mult_morphism()?)?,
    ];
    let mu = ContainerMorphism::chain(&steps)?;
    let unit = Composite::new(a, b)?.shape_index(t0.unit, &vec![t1.unit; a.arity(t0.unit)]);
    ContainerMonad::from_morphism(format!("{}.{}", t0.name, t1.name), unit, &mu)
}

fn composite_comonad(d0: &ContainerComonad, d1: &ContainerComonad, kap: &ContainerMorphism) -> Result<ContainerComonad> {
    let (c, d) = (&d0.c, &d1.c);
    let cd = c_compose(c, d)?;
    let steps = [
        ContainerMorphism::hcomp(&d0.comult, &d1.comult)?,
        assoc(c, c, &c_compose(d, d)?)?,
        ContainerMorphism::whisker_left(c, &assoc(c, d, d)?.inverse()?)?,
        ContainerMorphism::whisker_left(c, &ContainerMorphism::whisker_right(kap, d)?)?,
        ContainerMorphism::whisker_left(c, &assoc(d, c, d)?)?,
        assoc(c, d, &cd)?.inverse()?,
    ];
    let delta = ContainerMorphism::chain(&steps)?;
    let comp = Composite::new(c, d)?;
    let counit = (0..cd.num_shapes())
        .map(|x| {
            let (s0, f) = comp.decode_shape(x);
            let e0 = d0.counit[s0];
            comp.pos_index(&f, e0, d1.counit[f[e0]])
        })
        .collect();
    ContainerComonad::new(format!("{}.{}", d0.name, d1.name), cd, counit, delta)
}

/// `λ : B × (A ⇒ X) → A ⇒ (B × X)`, `λ(b, f) = λa. (b, f (a ↓ b))`, and
/// `κ : A × (B ⇒ Y) → B ⇒ (A × Y)`, `κ(a, f) = λb. (a ↓ b, f b)`.
pub fn update_distributive_laws(action: &Action) -> Result<(ContainerMorphism, ContainerMorphism)> {
    let (set, m) = (&action.set, &action.monoid);
    let (ra, wb) = (c_reader(set), c_writer(&m.carrier));
    let lam = ContainerMorphism::from_fn(&c_compose(&wb, &ra)?, &c_compose(&ra, &wb)?, |b| {
        (update_shape(action, &vec![b; set.len()]), (0..set.len()).map(|a| action.act(a, b)).collect())
    })?;
    let (wa, rb) = (c_writer(set), c_reader(&m.carrier));
    let kap = ContainerMorphism::from_fn(&c_compose(&wa, &rb)?, &c_compose(&rb, &wa)?, |a| {
        let g: Vec<usize> = (0..m.len()).map(|b| action.act(a, b)).collect();
        (lex_index(&vec![set.len(); m.len()], &g), (0..m.len()).collect())
    })?;
    Ok((lam, kap))
}

/// A natural binary operation `X × X → T X`: a shape whose positions each read argument 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryOp {
    pub shape: usize,
    pub args: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDegeneracy {
    /// The operation is associative on `(x0, x1, x2)`.
    pub associative: bool,
    pub checked: usize,
    /// Comonad shapes where `ψ(c(c(x0,x1),x2), d)` or `ψ(c(x0,c(x1,x2)), d)` differs from `ψ(c(x0,x2), d)`.
    pub violations: Vec<usize>,
}

/// For a monad with an associative operation, a law can only see the outer
/// arguments of a triple: both bracketings interact like `c(x0, x2)`.
pub fn assoc_op_degeneracy(m: &Mcil, op: &BinaryOp) -> Result<OpDegeneracy> {
    let t = &m.t;
    if op.shape >= t.c.num_shapes() || op.args.len() != t.c.arity(op.shape) || op.args.iter().any(|&a| a > 1) {
        return Err(Error::invalid("binary operation does not fit the monad"));
    }
    let x = FinSet::range("X", 3);
    let apply_op = |u: &ContainerElement, v: &ContainerElement| -> Result<Option<ContainerElement>> {
        let children: Vec<ContainerElement> = op.args.iter().map(|&i| if i == 0 { u.clone() } else { v.clone() }).collect();
        t.join(op.shape, &children, &x)
    };
    let pair = |a: usize, b: usize| ContainerElement {
        shape: op.shape,
        payload: FinFn { dom: t.c.pos(op.shape).clone(), cod: x.clone(), table: op.args.iter().map(|&i| [a, b][i]).collect() },
    };
    let left = apply_op(&pair(0, 1), &t.unit_element(2, &x))?;
    let right = apply_op(&t.unit_element(0, &x), &pair(1, 2))?;
    let (Some(left), Some(right)) = (left, right) else {
        return Err(Error::invalid("the monad cannot multiply the bracketed triples"));
    };
    let outer = pair(0, 2);
    let mut report = OpDegeneracy { associative: left == right, checked: 0, violations: Vec::new() };
    for ds in 0..m.d.c.num_shapes() {
        let ed = ContainerElement::universal(&m.d.c, ds);
        let target = il_apply(&m.law, &outer, &ed)?;
        report.checked += 1;
        if il_apply(&m.law, &left, &ed)? != target || il_apply(&m.law, &right, &ed)? != target {
            report.violations.push(ds);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{left_unitor, right_unitor};
    use crate::monadic::enumerate_trees;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn canonical_instances_pass() {
        for n in 1..=3 {
            let a = FinSet::range("A", n);
            assert!(mcil_reader(&a).unwrap().check().unwrap().passed());
        }
        assert!(mcil_writer(&Monoid::cyclic(2)).unwrap().check().unwrap().passed());
        let up = mcil_update(&Action::rotation(&a2())).unwrap();
        let r = up.check().unwrap();
        assert!(r.passed() && r.mult_checked == 64 * 2);
    }

    #[test]
    fn mutations_fail() {
        let up = mcil_update(&Action::rotation(&a2())).unwrap();
        for i in 0..up.law.table.len() {
            let mut law = up.law.clone();
            let (p, q) = law.table[i];
            law.table[i] = (p, 1 - q);
            assert!(!mcil_check(&up.t, &up.d, &law).unwrap().passed(), "entry {i}");
            let mut law = up.law.clone();
            law.table[i] = (1 - p, q);
            assert!(!mcil_check(&up.t, &up.d, &law).unwrap().passed(), "entry {i}");
        }
    }

    #[test]
    fn product_of_reader_and_writer() {
        let r = mcil_reader(&a2()).unwrap();
        let w = mcil_writer(&Monoid::cyclic(2)).unwrap();
        let p = mcil_product(&r, &w).unwrap();
        assert!(p.check().unwrap().passed());
        // An inl machine shape is answered by the reader component.
        assert_eq!(p.law.entry(0, 1), r.law.entry(0, 1));
    }

    #[test]
    fn composite_is_the_update_law() {
        for action in [Action::rotation(&a2()), Action::trivial(&a2(), &Monoid::cyclic(2))] {
            let r = mcil_reader(&a2()).unwrap();
            let w = mcil_writer(&action.monoid).unwrap();
            let (lam, kap) = update_distributive_laws(&action).unwrap();
            let comp = mcil_composite(&r, &w, &lam, &kap).unwrap();
            let direct = mcil_update(&action).unwrap();
            assert_eq!(comp.law, direct.law);
            assert_eq!(comp.t.mult, direct.t.mult);
            assert_eq!(comp.t.unit, direct.t.unit);
            assert_eq!(comp.d.comult, direct.d.comult);
            assert_eq!(comp.d.counit, direct.d.counit);
        }
    }

    #[test]
    fn broken_distributive_law_is_reported() {
        let action = Action::rotation(&a2());
        let r = mcil_reader(&a2()).unwrap();
        let w = mcil_writer(&action.monoid).unwrap();
        let (mut lam, kap) = update_distributive_laws(&action).unwrap();
        lam.pos_maps[1].swap(0, 1);
        assert!(matching_condition(&r, &w, &lam, &kap).unwrap().is_some());
        assert!(mcil_composite(&r, &w, &lam, &kap).is_err());
    }

    #[test]
    fn identity_composites_are_unitors() {
        let r = mcil_reader(&a2()).unwrap();
        let id = mcil_identity();
        // λ : Id∘T → T∘Id and κ : D∘Id → Id∘D.
        let lam = ContainerMorphism::compose(&right_unitor(&r.t.c).unwrap().inverse().unwrap(), &left_unitor(&r.t.c).unwrap()).unwrap();
        let kap = ContainerMorphism::compose(&left_unitor(&r.d.c).unwrap().inverse().unwrap(), &right_unitor(&r.d.c).unwrap()).unwrap();
        let comp = mcil_composite(&r, &id, &lam, &kap).unwrap();
        assert_eq!(comp.law.table, r.law.table);
    }

    #[test]
    fn free_interaction_unfolds() {
        let c = c_reader(&a2());
        let d = crate::dual::dual(&c).unwrap();
        // The dual of a reader is a writer: a machine holding a1 answers `ask` with a1.
        let m = Machine::new(d.clone(), vec![5], vec![(1, vec![0])], 0).unwrap();
        let ask = FreeTree::Node(0, vec![FreeTree::Leaf(10), FreeTree::Leaf(11)]);
        let (x, y, trace) = canonical_mcil(&c, &ask, &m).unwrap();
        assert_eq!((x, y, trace.len()), (11, 5, 1));
        let (x, y, trace) = canonical_mcil(&c, &FreeTree::Leaf(3), &m).unwrap();
        assert_eq!((x, y, trace.len()), (3, 5, 0));
        // Two nodes are two steps of the tensor of the pairing with itself.
        let w = c_writer(&a2());
        let two = enumerate_trees(&w, &[0usize, 1], 2).unwrap();
        let pairing = dual_pairing(&w).unwrap();
        let sq = il_tensor(&pairing, &pairing).unwrap();
        let dw = crate::dual::dual(&w).unwrap();
        let comp = Composite::new(&w, &w).unwrap();
        let dcomp = Composite::new(&dw, &dw).unwrap();
        for m in Machine::enumerate(&dw, 2, 2).unwrap() {
            for t in two.iter().filter(|t| t.depth() == 2) {
                let FreeTree::Node(s, ks) = t else { unreachable!() };
                let FreeTree::Node(s2, leaves) = &ks[0] else { continue };
                let FreeTree::Leaf(x) = leaves[0] else { continue };
                let (got_x, got_y, _) = canonical_mcil(&w, t, &m).unwrap();
                let m1 = m.advance(0);
                let ts = comp.shape_index(*s, &[*s2]);
                let ms = dcomp.shape_index(m.shape(), &vec![m1.shape(); dw.arity(m.shape())]);
                let (_, q) = sq.entry(ts, ms);
                let (q1, q2) = dcomp.decode_pos(&vec![m1.shape(); dw.arity(m.shape())], q);
                assert_eq!((got_x, got_y), (x, *m.at(m.step[m.current].1[q1]).advance(q2).extract()));
            }
        }
    }
}
