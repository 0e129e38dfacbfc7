use super::comonad::{comonad_update, ContainerComonad};
use super::free::Machine;
use super::mcil::{mcil_check, Mcil};
use super::monad::{monad_nelist, monad_update, update_fn, Action, ContainerMonad};
use crate::container::{c_compose, nat_trans_enumerate, to_identity, Container, ContainerMorphism};
use crate::dual::{dual, dual_morphism, dual_shape_index, dual_shape_tuple, e_iso, il_to_morphism, morphism_to_il};
use crate::error::{Error, Result};
use crate::finset::{lex_tuples, FinSet};
use crate::interaction::{il_enumerate, il_rev};

/// A monad with a registered comonad `D` and a comonad map `ι : D → ⊥T`
/// exhibiting `D` as the greatest comonad interacting with `T`.
#[derive(Clone, Debug)]
pub struct SweedlerInstance {
    pub monad: ContainerMonad,
    pub comonad: ContainerComonad,
    pub iota: ContainerMorphism,
    pub mcil: Mcil,
}

impl SweedlerInstance {
    fn build(monad: ContainerMonad, comonad: ContainerComonad, iota: ContainerMorphism) -> Result<Self> {
        if let Some(msg) = sweedler_squares(&monad, &comonad, &iota)? {
            return Err(Error::law(msg));
        }
        let law = il_rev(&morphism_to_il(&iota, &monad.c)?);
        let mcil = Mcil::new(monad.clone(), comonad.clone(), law)?;
        Ok(SweedlerInstance { monad, comonad, iota, mcil })
    }
}

/// Nonempty lists up to length `n` against `Y × (Y + Y)`: a machine answers a
/// one-element list with its head and a longer list with the head (`inl`) or
/// the last element (`inr`).
pub fn sweedler_nelist(n: usize) -> Result<SweedlerInstance> {
    if n < 2 {
        return Err(Error::invalid("the list bound must be at least 2"));
    }
    let t = monad_nelist(n)?;
    let pos = FinSet::from_strs("P", &["fst", "snd"])?;
    let c = Container::new(FinSet::from_strs("S", &["inl", "inr"])?, vec![pos.clone(), pos])?;
    // ρ(fst, q) = q and ρ(snd, _) = snd.
    let d = ContainerComonad::from_rule("pair-choice", c.clone(), vec![0, 0], |t| (t, vec![t, t], vec![0, 1, 1, 1]))?;
    let iota = ContainerMorphism::from_fn(&c, &dual(&t.c)?, |tag| {
        let picks: Vec<usize> = (0..n).map(|len| if tag == 0 { 0 } else { len }).collect();
        let back = (0..n).map(|len| usize::from(len > 0)).collect();
        (dual_shape_index(&t.c, &picks), back)
    })?;
    SweedlerInstance::build(t, d, iota)
}

/// The update monad against `A × (B ⇒ Y)` with `ι (a, f) = λg. (a, f (g a))`.
pub fn sweedler_update(action: &Action) -> Result<SweedlerInstance> {
    let t = monad_update(action)?;
    let d = comonad_update(action)?;
    let n = t.c.num_shapes();
    let iota = ContainerMorphism::from_fn(&d.c, &dual(&t.c)?, |a| {
        (dual_shape_index(&t.c, &vec![a; n]), (0..n).map(|g| update_fn(action, g)[a]).collect())
    })?;
    SweedlerInstance::build(t, d, iota)
}

/// The two squares making `ι : D → ⊥T` a comonad map into the dual monoid:
/// `e ∘ ε = ⊥η ∘ ι` and `m ∘ (ι ∗ ι) ∘ δ = ⊥μ ∘ ι`.
///
/// The second square lands in `⊥(T ∘ T)`, whose shape set is too large to
/// build, so both sides are compared pointwise at each shape of `T ∘ T`.
/// Shapes where `μ` is undefined are skipped.
pub fn sweedler_squares(t: &ContainerMonad, d: &ContainerComonad, iota: &ContainerMorphism) -> Result<Option<String>> {
    if iota.src != d.c || iota.dst != dual(&t.c)? {
        return Err(Error::mismatch("ι must map the comonad into the dual of the monad"));
    }
    let (e, _) = e_iso()?;
    let lhs = ContainerMorphism::compose(&e, &to_identity(&d.c, &d.counit)?)?;
    let rhs = ContainerMorphism::compose(&dual_morphism(&t.unit_morphism()?)?, iota)?;
    if lhs != rhs {
        return Ok(Some("unit square of ι fails".into()));
    }
    let comp = t.composite()?;
    let dcomp = d.composite()?;
    let tuple = |x: usize| dual_shape_tuple(&t.c, iota.shape_map[x]);
    for x in 0..d.c.num_shapes() {
        let (q, pi) = (tuple(x), &iota.pos_maps[x]);
        let delta = d.delta(x);
        let q0 = tuple(delta.outer);
        let pi0 = &iota.pos_maps[delta.outer];
        for sigma in 0..comp.num_shapes() {
            let (s0, g) = comp.decode_shape(sigma);
            let Some((r, pm)) = t.mult_at(s0, &g) else { continue };
            let right = (pm[q[r]], pi[r]);
            let p = q0[s0];
            let inner = delta.inner[pi0[s0]];
            let (qi, pii) = (tuple(inner), &iota.pos_maps[inner]);
            let left = ((p, qi[g[p]]), delta.back[dcomp.pos_index(&delta.inner, pi0[s0], pii[g[p]])]);
            if left != right {
                return Ok(Some(format!("multiplication square of ι fails at comonad shape {x}, monad shape {sigma}")));
            }
        }
    }
    Ok(None)
}

/// Whether `h : D → D'` preserves counit and comultiplication.
pub fn is_comonad_map(d: &ContainerComonad, d2: &ContainerComonad, h: &ContainerMorphism) -> Result<bool> {
    if h.src != d.c || h.dst != d2.c {
        return Err(Error::mismatch("comonad map has the wrong endpoints"));
    }
    for t in 0..d.c.num_shapes() {
        if h.pos_maps[t][d2.counit[h.shape_map[t]]] != d.counit[t] {
            return Ok(false);
        }
    }
    let lhs = ContainerMorphism::compose(&d2.comult, h)?;
    let rhs = ContainerMorphism::compose(&ContainerMorphism::hcomp(h, h)?, &d.comult)?;
    Ok(lhs == rhs)
}

pub fn comonad_map_enumerate(d: &ContainerComonad, d2: &ContainerComonad) -> Result<Vec<ContainerMorphism>> {
    let mut out = Vec::new();
    for h in nat_trans_enumerate(&d.c, &d2.c)? {
        if is_comonad_map(d, d2, &h)? {
            out.push(h);
        }
    }
    Ok(out)
}

/// The law `ψ = ι ∘ h` induced by a comonad map `h : D → D_T` into a registered instance.
pub fn mcil_from_comonad_map(inst: &SweedlerInstance, d: &ContainerComonad, h: &ContainerMorphism) -> Result<Mcil> {
    if !is_comonad_map(d, &inst.comonad, h)? {
        return Err(Error::law("not a comonad map"));
    }
    let k = ContainerMorphism::compose(&inst.iota, h)?;
    Mcil::new(inst.monad.clone(), d.clone(), il_rev(&morphism_to_il(&k, &inst.monad.c)?))
}

/// The comonad map through which an interaction law factors, if any.
pub fn comonad_map_from_mcil(inst: &SweedlerInstance, m: &Mcil) -> Result<Option<ContainerMorphism>> {
    let target = il_to_morphism(&il_rev(&m.law))?;
    for h in comonad_map_enumerate(&m.d, &inst.comonad)? {
        if ContainerMorphism::compose(&inst.iota, &h)? == target {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Every law between `T` and `D` that passes the interaction checker.
pub fn mcil_enumerate(t: &ContainerMonad, d: &ContainerComonad) -> Result<Vec<Mcil>> {
    let mut out = Vec::new();
    for law in il_enumerate(&t.c, &d.c)? {
        if mcil_check(t, d, &law)?.passed() {
            out.push(Mcil { t: t.clone(), d: d.clone(), law });
        }
    }
    Ok(out)
}

/// All comonads on containers with `1..=max_shapes` shapes of arity `1..=max_arity`.
pub fn comonad_enumerate(max_shapes: usize, max_arity: usize) -> Result<Vec<ContainerComonad>> {
    let mut out = Vec::new();
    for k in 1..=max_shapes {
        for arities in lex_tuples(&vec![max_arity; k]) {
            let arities: Vec<usize> = arities.iter().map(|a| a + 1).collect();
            let positions = arities.iter().map(|&a| FinSet::range("P", a)).collect();
            let c = Container::new(FinSet::range("S", k), positions)?;
            let cc = c_compose(&c, &c)?;
            let deltas = nat_trans_enumerate(&c, &cc)?;
            for counit in lex_tuples(&arities) {
                for delta in &deltas {
                    let name = format!("comonad{arities:?}");
                    if let Ok(d) = ContainerComonad::new(name, c.clone(), counit.clone(), delta.clone()) {
                        out.push(d);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A binary cooperation `D Y → Y + Y`, one `(tag, position)` per shape.
pub type Cooperation = Vec<(usize, usize)>;

pub fn cooperations(d: &ContainerComonad) -> Vec<Cooperation> {
    let n = d.c.num_shapes();
    let radices: Vec<usize> = (0..n).map(|t| 2 * d.c.arity(t)).collect();
    lex_tuples(&radices)
        .map(|pick| pick.iter().enumerate().map(|(t, &i)| (i / d.c.arity(t), i % d.c.arity(t))).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoequationReport {
    pub coassoc: bool,
    pub left_corect: bool,
    pub right_corect: bool,
}

/// Results in `Y + (Y + Y)` are coded `0`, `1`, `2` with a position of the shape.
fn coop_routes(d: &ContainerComonad, c: &Cooperation, t: usize) -> ((usize, usize), (usize, usize)) {
    let comp = d.composite().expect("composite of a comonad");
    let delta = d.delta(t);
    let (tag1, p1) = c[delta.outer];
    let inner = delta.inner[p1];
    let back = |q: usize| delta.back[comp.pos_index(&delta.inner, p1, q)];
    let (tag2, p2) = c[inner];
    let top = if tag1 == 0 { (tag2, back(p2)) } else { (2, back(d.counit[inner])) };
    let bottom = if tag1 == 0 { (0, back(d.counit[inner])) } else { (1 + tag2, back(p2)) };
    (top, bottom)
}

pub fn coequation_checks(d: &ContainerComonad, c: &Cooperation) -> Result<CoequationReport> {
    if c.len() != d.c.num_shapes() || c.iter().enumerate().any(|(t, &(tag, p))| tag > 1 || p >= d.c.arity(t)) {
        return Err(Error::invalid("cooperation must pick a tag and a position for every shape"));
    }
    let mut r = CoequationReport { coassoc: true, left_corect: true, right_corect: true };
    for t in 0..d.c.num_shapes() {
        let (top, bottom) = coop_routes(d, c, t);
        let plain = (2 * c[t].0, c[t].1);
        r.coassoc &= top == bottom;
        r.left_corect &= top == plain;
        r.right_corect &= bottom == plain;
    }
    Ok(r)
}

/// The cooperation of `Y × (Y + Y)`: the tag and the second component.
pub fn pair_choice_cooperation() -> Cooperation {
    vec![(0, 1), (1, 1)]
}

/// Searches the cofree comonad on `Y + Y` (machines with up to `max_states`
/// states) for an element where the "first tag, next label" cooperation is not
/// coassociative.
pub fn cofree_coassoc_counterexample(max_states: usize) -> Result<Option<Machine>> {
    let g = crate::container::c_writer(&FinSet::range("tag", 2));
    for m in Machine::enumerate(&g, max_states, max_states)? {
        let tag1 = m.shape();
        let m1 = m.advance(0);
        let (tag2, m2) = (m1.shape(), m1.advance(0));
        let top = if tag1 == 0 { (tag2, *m2.extract()) } else { (2, *m1.extract()) };
        let bottom = if tag1 == 0 { (0, *m1.extract()) } else { (1 + tag2, *m2.extract()) };
        if top != bottom {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// Over the given comonads and all their cooperations: how many were coassociative,
/// and the first coassociative one that is not corectangular.
pub fn corectangularity_theorem(ds: &[ContainerComonad]) -> Result<(usize, Option<(usize, Cooperation)>)> {
    let mut coassoc = 0;
    for (i, d) in ds.iter().enumerate() {
        for c in cooperations(d) {
            let r = coequation_checks(d, &c)?;
            if r.coassoc {
                coassoc += 1;
                if !(r.left_corect && r.right_corect) {
                    return Ok((coassoc, Some((i, c))));
                }
            }
        }
    }
    Ok((coassoc, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::ContainerElement;
    use crate::finset::FinFn;
    use crate::interaction::il_apply;
    use crate::monadic::{assoc_op_degeneracy, BinaryOp, Monoid};

    #[test]
    fn nelist_instance_clauses() {
        let inst = sweedler_nelist(4).unwrap();
        let law = &inst.mcil.law;
        // Length 1 reads the head and the first component.
        assert_eq!(law.entry(0, 0), (0, 0));
        assert_eq!(law.entry(0, 1), (0, 0));
        assert_eq!(law.entry(2, 0), (0, 1));
        assert_eq!(law.entry(2, 1), (2, 1));
        let y = FinSet::range("Y", 3);
        let ed = ContainerElement { shape: 1, payload: FinFn::new(inst.comonad.c.pos(1).clone(), y, vec![0, 2]).unwrap() };
        let x = FinSet::range("X", 4);
        let list = ContainerElement { shape: 3, payload: FinFn::new(inst.monad.c.pos(3).clone(), x, vec![3, 1, 0, 2]).unwrap() };
        assert_eq!(il_apply(law, &list, &ed).unwrap(), (2, 2));
    }

    #[test]
    fn associative_operation_collapses() {
        let inst = sweedler_nelist(3).unwrap();
        let r = assoc_op_degeneracy(&inst.mcil, &BinaryOp { shape: 1, args: vec![0, 1] }).unwrap();
        assert!(r.associative && r.violations.is_empty() && r.checked == 2);
    }

    #[test]
    fn update_instance() {
        let a = FinSet::range("A", 2);
        for action in [Action::rotation(&a), Action::trivial(&a, &Monoid::cyclic(2))] {
            let inst = sweedler_update(&action).unwrap();
            assert_eq!(inst.mcil.law, crate::monadic::mcil_update(&action).unwrap().law);
        }
    }

    #[test]
    fn broken_iota_fails_squares() {
        let inst = sweedler_update(&Action::rotation(&FinSet::range("A", 2))).unwrap();
        let mut iota = inst.iota.clone();
        iota.pos_maps[0][3] = 1 - iota.pos_maps[0][3];
        assert!(sweedler_squares(&inst.monad, &inst.comonad, &iota).unwrap().is_some());
    }

    #[test]
    fn comonad_maps_into_pair_choice() {
        let inst = sweedler_nelist(3).unwrap();
        let id = ContainerMorphism::identity(&inst.comonad.c);
        assert!(comonad_map_enumerate(&inst.comonad, &inst.comonad).unwrap().contains(&id));
        assert_eq!(mcil_from_comonad_map(&inst, &inst.comonad, &id).unwrap().law, inst.mcil.law);
        assert_eq!(comonad_map_from_mcil(&inst, &inst.mcil).unwrap(), Some(id));
    }

    #[test]
    fn coequations() {
        let inst = sweedler_nelist(3).unwrap();
        let r = coequation_checks(&inst.comonad, &pair_choice_cooperation()).unwrap();
        assert!(r.coassoc && r.left_corect && r.right_corect);
        let mut bad = inst.comonad.clone();
        bad.comult.pos_maps[0] = vec![0, 1, 0, 1];
        assert!(!coequation_checks(&bad, &pair_choice_cooperation()).unwrap().coassoc);
        let m = cofree_coassoc_counterexample(2).unwrap().expect("counterexample");
        assert!(m.num_states() == 2);
    }
}
