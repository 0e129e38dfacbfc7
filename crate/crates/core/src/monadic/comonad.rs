use std::fmt;

use super::monad::{Action, Monoid};
use crate::container::{c_compose, c_id, c_reader, c_writer, to_identity, Composite, Container, ContainerMorphism};
use crate::error::{Error, Result};
use crate::finset::FinSet;

/// A comonad structure on a container: a counit position per shape and a
/// comultiplication morphism `C → C ∘ C`.
#[derive(Clone, PartialEq, Eq)]
pub struct ContainerComonad {
    pub name: String,
    pub c: Container,
    pub counit: Vec<usize>,
    pub comult: ContainerMorphism,
}

impl fmt::Debug for ContainerComonad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Comonad {} on {:?}", self.name, self.c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComonadLawFailure {
    pub law: &'static str,
    pub shape: usize,
}

impl fmt::Display for ComonadLawFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at shape {}", self.law, self.shape)
    }
}

/// `δ` at one shape: the composite shape `(t', l)` and `ρ` from its positions back to `P(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comult {
    pub outer: usize,
    pub inner: Vec<usize>,
    pub back: Vec<usize>,
}

impl ContainerComonad {
    /// Builds a comonad and checks its laws.
    pub fn new(name: impl Into<String>, c: Container, counit: Vec<usize>, comult: ContainerMorphism) -> Result<Self> {
        if comult.src != c || comult.dst != c_compose(&c, &c)? {
            return Err(Error::mismatch("comultiplication must be a morphism C → C ∘ C"));
        }
        if counit.len() != c.num_shapes() || counit.iter().enumerate().any(|(t, &p)| p >= c.arity(t)) {
            return Err(Error::invalid("counit must pick a position of every shape"));
        }
        let d = ContainerComonad { name: name.into(), c, counit, comult };
        d.check_laws().map_err(|f| Error::law(f.to_string()))?;
        Ok(d)
    }

    /// Builds a comonad from a rule `t ↦ (t', l, ρ)` with `ρ` listed over composite positions.
    pub fn from_rule(
        name: impl Into<String>,
        c: Container,
        counit: Vec<usize>,
        rule: impl Fn(usize) -> (usize, Vec<usize>, Vec<usize>),
    ) -> Result<Self> {
        let comp = Composite::new(&c, &c)?;
        let cc = comp.container()?;
        let comult = ContainerMorphism::from_fn(&c, &cc, |t| {
            let (outer, inner, back) = rule(t);
            (comp.shape_index(outer, &inner), back)
        })?;
        ContainerComonad::new(name, c, counit, comult)
    }

    pub fn composite(&self) -> Result<Composite<'_>> {
        Composite::new(&self.c, &self.c)
    }

    pub fn delta(&self, t: usize) -> Comult {
        let comp = Composite::new(&self.c, &self.c).expect("composite of a comonad");
        let (outer, inner) = comp.decode_shape(self.comult.shape_map[t]);
        Comult { outer, inner, back: self.comult.pos_maps[t].clone() }
    }

    pub fn counit_morphism(&self) -> Result<ContainerMorphism> {
        to_identity(&self.c, &self.counit)
    }

    /// Counit laws and coassociativity at universal carriers.
    pub fn check_laws(&self) -> std::result::Result<(), ComonadLawFailure> {
        let comp = self.composite().map_err(|_| ComonadLawFailure { law: "composite", shape: 0 })?;
        let eps = &self.counit;
        for t in 0..self.c.num_shapes() {
            let Comult { outer, inner, back } = self.delta(t);
            // εD ∘ δ = id
            let e = eps[outer];
            if inner[e] != t || (0..self.c.arity(t)).any(|q| back[comp.pos_index(&inner, e, q)] != q) {
                return Err(ComonadLawFailure { law: "left counit", shape: t });
            }
            // Dε ∘ δ = id
            if outer != t || (0..self.c.arity(t)).any(|p| back[comp.pos_index(&inner, p, eps[inner[p]])] != p) {
                return Err(ComonadLawFailure { law: "right counit", shape: t });
            }
            if self.coassoc_left(t) != self.coassoc_right(t) {
                return Err(ComonadLawFailure { law: "coassociativity", shape: t });
            }
        }
        Ok(())
    }

    /// `δD ∘ δ` at shape `t`: the `DDD` shape and, per triple position, the position of `t`.
    fn coassoc_left(&self, t: usize) -> (usize, Vec<usize>, Vec<usize>, Vec<(usize, usize, usize, usize)>) {
        let comp = self.composite().unwrap();
        let d = self.delta(t);
        let d2 = self.delta(d.outer);
        let mid: Vec<usize> = (0..d2.back.len()).map(|x| d.inner[d2.back[x]]).collect();
        let mut triples = Vec::new();
        for x in 0..d2.back.len() {
            let (p, q) = comp.decode_pos(&d2.inner, x);
            for r in 0..self.c.arity(mid[x]) {
                triples.push((p, q, r, d.back[comp.pos_index(&d.inner, d2.back[x], r)]));
            }
        }
        (d2.outer, d2.inner, mid, triples)
    }

    /// `Dδ ∘ δ` at shape `t`.
    fn coassoc_right(&self, t: usize) -> (usize, Vec<usize>, Vec<usize>, Vec<(usize, usize, usize, usize)>) {
        let comp = self.composite().unwrap();
        let d = self.delta(t);
        let mut mid_shapes = Vec::new();
        let mut mid = Vec::new();
        let mut triples = Vec::new();
        for (p, &lp) in d.inner.iter().enumerate() {
            let dp = self.delta(lp);
            mid_shapes.push(dp.outer);
            for q in 0..self.c.arity(dp.outer) {
                mid.push(dp.inner[q]);
                for r in 0..self.c.arity(dp.inner[q]) {
                    let within = dp.back[comp.pos_index(&dp.inner, q, r)];
                    triples.push((p, q, r, d.back[comp.pos_index(&d.inner, p, within)]));
                }
            }
        }
        (d.outer, mid_shapes, mid, triples)
    }
}

/// The identity comonad on `Id`.
pub fn comonad_identity() -> ContainerComonad {
    ContainerComonad::from_rule("identity", c_id(), vec![0], |_| (0, vec![0], vec![0])).unwrap()
}

/// `A × Y`: the counit forgets `A`, the comultiplication copies it.
pub fn comonad_writer(a: &FinSet) -> Result<ContainerComonad> {
    ContainerComonad::from_rule(format!("env({})", a.len()), c_writer(a), vec![0; a.len()], |t| (t, vec![t], vec![0]))
}

/// `B ⇒ Y` for a monoid `B`: `ε f = f e`, `δ f = λb. λb'. f (b ⊕ b')`.
pub fn comonad_reader(b: &Monoid) -> Result<ContainerComonad> {
    let n = b.len();
    ContainerComonad::from_rule(format!("traced({n})"), c_reader(&b.carrier), vec![b.unit], |_| {
        (0, vec![0; n], (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| b.mul(x, y)).collect())
    })
}

/// The update comonad `A × (B ⇒ Y)`: `δ (a, f) = (a, λb. (a ↓ b, λb'. f (b ⊕ b')))`.
pub fn comonad_update(action: &Action) -> Result<ContainerComonad> {
    let (set, m) = (&action.set, &action.monoid);
    let c = c_compose(&c_writer(set), &c_reader(&m.carrier))?;
    let n = m.len();
    ContainerComonad::from_rule(format!("update({},{})", set.len(), n), c, vec![m.unit; set.len()], |a| {
        let inner = (0..n).map(|b| action.act(a, b)).collect();
        let back = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| m.mul(x, y)).collect();
        (a, inner, back)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn registered_comonads_pass() {
        comonad_identity();
        comonad_writer(&a2()).unwrap();
        comonad_reader(&Monoid::cyclic(3)).unwrap();
        comonad_update(&Action::rotation(&a2())).unwrap();
        comonad_update(&Action::trivial(&a2(), &Monoid::cyclic(2))).unwrap();
    }

    #[test]
    fn mutated_comultiplication_fails() {
        let d = comonad_reader(&Monoid::cyclic(2)).unwrap();
        let mut delta = d.comult.clone();
        // ρ(b, b') = b instead of b ⊕ b'.
        delta.pos_maps[0] = vec![0, 0, 1, 1];
        let err = ContainerComonad::new("bad", d.c.clone(), d.counit.clone(), delta).unwrap_err();
        assert!(err.to_string().contains("counit"), "{err}");

        let d = comonad_update(&Action::rotation(&a2())).unwrap();
        let mut delta = d.comult.clone();
        // Forget the action in the inner shapes: l(b) = a.
        let comp = d.composite().unwrap();
        delta.shape_map[0] = comp.shape_index(0, &[0, 0]);
        assert!(ContainerComonad::new("bad", d.c.clone(), d.counit.clone(), delta).is_err());
    }

    #[test]
    fn trivial_monoid_update_is_env() {
        let d = comonad_update(&Action::trivial(&a2(), &Monoid::trivial())).unwrap();
        let w = comonad_writer(&a2()).unwrap();
        assert_eq!(d.c.num_shapes(), w.c.num_shapes());
        assert!((0..2).all(|t| d.c.arity(t) == 1 && d.delta(t).inner == w.delta(t).inner));
    }
}
