use std::fmt;

use crate::container::{
    c_compose, c_const, c_coproduct, c_exponent, c_id, c_nelist, c_reader, c_writer, from_identity, Composite,
    Container, ContainerElement, ContainerMorphism,
};
use crate::error::{Error, Result};
use crate::finset::{lex_decode, lex_index, lex_tuples, FinFn, FinSet};

/// A finite monoid given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct Monoid {
    pub carrier: FinSet,
    pub unit: usize,
    /// `table[b][b'] = b ⊕ b'`.
    pub table: Vec<Vec<usize>>,
}

impl fmt::Debug for Monoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monoid({}, unit {}, {:?})", self.carrier.name(), self.unit, self.table)
    }
}

impl Monoid {
    pub fn new(carrier: FinSet, unit: usize, table: Vec<Vec<usize>>) -> Result<Monoid> {
        let n = carrier.len();
        if unit >= n || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::invalid("monoid table has the wrong shape"));
        }
        for a in 0..n {
            if table[unit][a] != a || table[a][unit] != a {
                return Err(Error::law(format!("`{}` is not a unit for `{}`", carrier.elem(unit), carrier.elem(a))));
            }
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::law("monoid multiplication is not associative"));
                    }
                }
            }
        }
        Ok(Monoid { carrier, unit, table })
    }

    /// `ℤ/n` under addition.
    pub fn cyclic(n: usize) -> Monoid {
        let carrier = FinSet::range(format!("Z{n}"), n);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Monoid::new(carrier, 0, table).expect("cyclic group")
    }

    /// The one-element monoid.
    pub fn trivial() -> Monoid {
        Monoid::new(FinSet::unit(), 0, vec![vec![0]]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// A right action `a ↓ b` of a monoid on a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Action {
    pub set: FinSet,
    pub monoid: Monoid,
    /// `table[a][b] = a ↓ b`.
    pub table: Vec<Vec<usize>>,
}

impl Action {
    pub fn new(set: FinSet, monoid: Monoid, table: Vec<Vec<usize>>) -> Result<Action> {
        let (na, nb) = (set.len(), monoid.len());
        if table.len() != na || table.iter().any(|r| r.len() != nb || r.iter().any(|&v| v >= na)) {
            return Err(Error::invalid("action table has the wrong shape"));
        }
        for a in 0..na {
            if table[a][monoid.unit] != a {
                return Err(Error::law(format!("the unit moves `{}`", set.elem(a))));
            }
            for b in 0..nb {
                for c in 0..nb {
                    if table[table[a][b]][c] != table[a][monoid.mul(b, c)] {
                        return Err(Error::law(format!(
                            "(a↓b)↓b' ≠ a↓(b⊕b') at a=`{}`, b=`{}`, b'=`{}`",
                            set.elem(a),
                            monoid.carrier.elem(b),
                            monoid.carrier.elem(c)
                        )));
                    }
                }
            }
        }
        Ok(Action { set, monoid, table })
    }

    pub fn from_fn(set: &FinSet, monoid: &Monoid, f: impl Fn(usize, usize) -> usize) -> Result<Action> {
        let table = (0..set.len()).map(|a| (0..monoid.len()).map(|b| f(a, b)).collect()).collect();
        Action::new(set.clone(), monoid.clone(), table)
    }

    /// Every monoid element acts as the identity.
    pub fn trivial(set: &FinSet, monoid: &Monoid) -> Action {
        Action::from_fn(set, monoid, |a, _| a).expect("trivial action")
    }

    /// `ℤ/n` acting on an `n`-element set by rotation.
    pub fn rotation(set: &FinSet) -> Action {
        let n = set.len();
        Action::from_fn(set, &Monoid::cyclic(n), |a, b| (a + b) % n).expect("rotation action")
    }

    pub fn act(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

/// A monad structure on a container.
///
/// The unit is a distinguished shape; every position of that shape reads the
/// one value. The multiplication is tabulated per shape of `C ∘ C`, and may be
/// undefined on some shapes (a truncated list monad cannot concatenate past
/// its bound).
#[derive(Clone, PartialEq, Eq)]
pub struct ContainerMonad {
    pub name: String,
    pub c: Container,
    pub unit: usize,
    /// Per shape of `C ∘ C`: the result shape and, for each of its positions,
    /// the composite position it reads.
    pub mult: Vec<Option<(usize, Vec<usize>)>>,
}

impl fmt::Debug for ContainerMonad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monad {} on {:?}", self.name, self.c)
    }
}

/// The first failing monad law instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadLawFailure {
    pub law: &'static str,
    pub detail: String,
}

impl fmt::Display for MonadLawFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails: {}", self.law, self.detail)
    }
}

impl ContainerMonad {
    /// Builds a monad and checks its laws.
    pub fn new(
        name: impl Into<String>,
        c: Container,
        unit: usize,
        mult: Vec<Option<(usize, Vec<usize>)>>,
    ) -> Result<ContainerMonad> {
        let m = ContainerMonad { name: name.into(), c, unit, mult };
        m.validate()?;
        m.check_laws().map_err(|f| Error::law(f.to_string()))?;
        Ok(m)
    }

    /// Builds a monad from a rule `(s, f) ↦ (shape, [(p, q)])` on composite shapes.
    pub fn from_rule(
        name: impl Into<String>,
        c: Container,
        unit: usize,
        rule: impl Fn(usize, &[usize]) -> Option<(usize, Vec<(usize, usize)>)>,
    ) -> Result<ContainerMonad> {
        let comp = Composite::new(&c, &c)?;
        let mult = (0..comp.num_shapes())
            .map(|idx| {
                let (s, f) = comp.decode_shape(idx);
                rule(s, &f).map(|(r, pm)| (r, pm.iter().map(|&(p, q)| comp.pos_index(&f, p, q)).collect()))
            })
            .collect();
        ContainerMonad::new(name, c, unit, mult)
    }

    /// Builds a monad from a total multiplication morphism `C ∘ C → C`.
    pub fn from_morphism(name: impl Into<String>, unit: usize, mult: &ContainerMorphism) -> Result<ContainerMonad> {
        let c = mult.dst.clone();
        if mult.src != c_compose(&c, &c)? {
            return Err(Error::mismatch("multiplication must start at C ∘ C"));
        }
        let table = mult.shape_map.iter().zip(&mult.pos_maps).map(|(&s, pm)| Some((s, pm.clone()))).collect();
        ContainerMonad::new(name, c, unit, table)
    }

    fn validate(&self) -> Result<()> {
        let comp = self.composite()?;
        if self.unit >= self.c.num_shapes() || self.mult.len() != comp.num_shapes() {
            return Err(Error::invalid("monad tables do not fit the container"));
        }
        for (idx, m) in self.mult.iter().enumerate() {
            if let Some((r, pm)) = m {
                let (_, f) = comp.decode_shape(idx);
                if *r >= self.c.num_shapes() || pm.len() != self.c.arity(*r) || pm.iter().any(|&x| x >= comp.arity(&f)) {
                    return Err(Error::invalid(format!("multiplication entry {idx} has the wrong type")));
                }
            }
        }
        Ok(())
    }

    pub fn composite(&self) -> Result<Composite<'_>> {
        Composite::new(&self.c, &self.c)
    }

    pub fn is_total(&self) -> bool {
        self.mult.iter().all(Option::is_some)
    }

    /// The multiplication at composite shape `(s, f)`, positions decoded to pairs.
    pub fn mult_at(&self, s: usize, f: &[usize]) -> Option<(usize, Vec<(usize, usize)>)> {
        let comp = self.composite().ok()?;
        let (r, pm) = self.mult[comp.shape_index(s, f)].as_ref()?;
        Some((*r, pm.iter().map(|&x| comp.decode_pos(f, x)).collect()))
    }

    pub fn unit_morphism(&self) -> Result<ContainerMorphism> {
        from_identity(&self.c, self.unit)
    }

    pub fn mult_morphism(&self) -> Result<ContainerMorphism> {
        let src = c_compose(&self.c, &self.c)?;
        let (shape_map, pos_maps) = self
            .mult
            .iter()
            .map(|m| m.clone().ok_or_else(|| Error::invalid(format!("multiplication of {} is partial", self.name))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        ContainerMorphism::new(src, self.c.clone(), shape_map, pos_maps)
    }

    /// `η_X(x)`.
    pub fn unit_element(&self, x: usize, carrier: &FinSet) -> ContainerElement {
        let table = vec![x; self.c.arity(self.unit)];
        ContainerElement { shape: self.unit, payload: FinFn { dom: self.c.pos(self.unit).clone(), cod: carrier.clone(), table } }
    }

    /// `μ_X` applied to an outer shape whose positions hold the given inner elements.
    pub fn join(&self, s: usize, children: &[ContainerElement], carrier: &FinSet) -> Result<Option<ContainerElement>> {
        let comp = self.composite()?;
        let f: Vec<usize> = children.iter().map(|c| c.shape).collect();
        if f.len() != self.c.arity(s) {
            return Err(Error::mismatch("wrong number of inner elements"));
        }
        let Some((r, pm)) = &self.mult[comp.shape_index(s, &f)] else { return Ok(None) };
        let table = pm
            .iter()
            .map(|&x| {
                let (p, q) = comp.decode_pos(&f, x);
                children[p].payload.table[q]
            })
            .collect();
        Ok(Some(ContainerElement { shape: *r, payload: FinFn { dom: self.c.pos(*r).clone(), cod: carrier.clone(), table } }))
    }

    /// Checks the unit laws and associativity at universal carriers.
    ///
    /// Returns the number of associativity instances checked and skipped.
    /// An undefined `μ(s, f)` counts as one skipped instance for all its inner shapes.
    pub fn check_laws(&self) -> std::result::Result<(usize, usize), MonadLawFailure> {
        let comp = self.composite().map_err(|e| MonadLawFailure { law: "composite", detail: e.to_string() })?;
        let c = &self.c;
        let n = c.num_shapes();
        let eta = self.unit;
        let tok = |s: usize| c.shapes.elem(s).to_string();
        for s in 0..n {
            match self.mult_at(eta, &vec![s; c.arity(eta)]) {
                Some((r, pm)) if r == s && pm.iter().enumerate().all(|(p, &(_, q))| q == p) => {}
                _ => return Err(MonadLawFailure { law: "left unit", detail: format!("shape `{}`", tok(s)) }),
            }
            match self.mult_at(s, &vec![eta; c.arity(s)]) {
                Some((r, pm)) if r == s && pm.iter().enumerate().all(|(p, &(pp, _))| pp == p) => {}
                _ => return Err(MonadLawFailure { law: "right unit", detail: format!("shape `{}`", tok(s)) }),
            }
        }
        let (mut checked, mut skipped) = (0, 0);
        for idx in 0..comp.num_shapes() {
            let (s, f) = comp.decode_shape(idx);
            // Both sides are undefined when `μ(s, f)` is.
            if self.mult[idx].is_none() {
                skipped += 1;
                continue;
            }
            for g in lex_tuples(&vec![n; comp.arity(&f)]) {
                match (self.assoc_left(s, &f, &g), self.assoc_right(s, &f, &g)) {
                    (Some(a), Some(b)) if a == b => checked += 1,
                    (Some(_), Some(_)) => {
                        return Err(MonadLawFailure {
                            law: "associativity",
                            detail: format!("outer `{}`, middle {:?}, inner {:?}", tok(s), f, g),
                        })
                    }
                    _ => skipped += 1,
                }
            }
        }
        Ok((checked, skipped))
    }

    /// `μ ∘ μT` at the universal element of the `TTT` shape `(s, f, g)`: result shape and triples.
    fn assoc_left(&self, s: usize, f: &[usize], g: &[usize]) -> Option<(usize, Vec<(usize, usize, usize)>)> {
        let comp = self.composite().ok()?;
        let (s1, pi1) = self.mult_at(s, f)?;
        let g1: Vec<usize> = pi1.iter().map(|&(p, q)| g[comp.pos_index(f, p, q)]).collect();
        let (s2, pi2) = self.mult_at(s1, &g1)?;
        Some((s2, pi2.iter().map(|&(p1, r)| (pi1[p1].0, pi1[p1].1, r)).collect()))
    }

    /// `μ ∘ Tμ` at the same element.
    fn assoc_right(&self, s: usize, f: &[usize], g: &[usize]) -> Option<(usize, Vec<(usize, usize, usize)>)> {
        let comp = self.composite().ok()?;
        let mut h = Vec::with_capacity(f.len());
        let mut sigma = Vec::with_capacity(f.len());
        for (p, &fp) in f.iter().enumerate() {
            let gp: Vec<usize> = (0..self.c.arity(fp)).map(|q| g[comp.pos_index(f, p, q)]).collect();
            let (hp, sp) = self.mult_at(fp, &gp)?;
            h.push(hp);
            sigma.push(sp);
        }
        let (s3, pi3) = self.mult_at(s, &h)?;
        Some((s3, pi3.iter().map(|&(p, r1)| (p, sigma[p][r1].0, sigma[p][r1].1)).collect()))
    }
}

/// The identity monad on `Id`.
pub fn monad_identity() -> ContainerMonad {
    ContainerMonad::from_rule("identity", c_id(), 0, |_, _| Some((0, vec![(0, 0)]))).unwrap()
}

/// The reader monad `A ⇒ X`: multiplication reads the diagonal.
pub fn monad_reader(a: &FinSet) -> Result<ContainerMonad> {
    ContainerMonad::from_rule(format!("reader({})", a.len()), c_reader(a), 0, |_, _| {
        Some((0, (0..a.len()).map(|x| (x, x)).collect()))
    })
}

/// The writer monad `B × X` for a monoid `B`.
pub fn monad_writer(b: &Monoid) -> Result<ContainerMonad> {
    ContainerMonad::from_rule(format!("writer({})", b.len()), c_writer(&b.carrier), b.unit, |s, f| {
        Some((b.mul(s, f[0]), vec![(0, 0)]))
    })
}

/// Shape index of `g : A → B` in the update container `A ⇒ (B × −)`.
pub fn update_shape(action: &Action, g: &[usize]) -> usize {
    lex_index(&vec![action.monoid.len(); action.set.len()], g)
}

/// The function `A → B` of an update shape.
pub fn update_fn(action: &Action, s: usize) -> Vec<usize> {
    lex_decode(&vec![action.monoid.len(); action.set.len()], s)
}

/// The update monad `A ⇒ (B × X)`: `μ(g, k)(a) = (g a ⊕ b', x)` where `(b', x) = k(a)(a ↓ g a)`.
pub fn monad_update(action: &Action) -> Result<ContainerMonad> {
    let (set, m) = (&action.set, &action.monoid);
    let c = c_compose(&c_reader(set), &c_writer(&m.carrier))?;
    let unit = update_shape(action, &vec![m.unit; set.len()]);
    ContainerMonad::from_rule(format!("update({},{})", set.len(), m.len()), c, unit, |s, f| {
        let g = update_fn(action, s);
        let mut h = Vec::with_capacity(g.len());
        let mut pm = Vec::with_capacity(g.len());
        for (a, &ga) in g.iter().enumerate() {
            let a2 = action.act(a, ga);
            h.push(m.mul(ga, update_fn(action, f[a])[a2]));
            pm.push((a, a2));
        }
        Some((update_shape(action, &h), pm))
    })
}

/// Nonempty lists of length at most `n`, with concatenation; undefined past the bound.
pub fn monad_nelist(n: usize) -> Result<ContainerMonad> {
    ContainerMonad::from_rule(format!("nelist({n})"), c_nelist(n), 0, |s, f| {
        let total: usize = f.iter().map(|&l| l + 1).sum();
        if total > n {
            return None;
        }
        let pm = (0..=s).flat_map(|p| (0..=f[p]).map(move |q| (p, q))).collect();
        Some((total - 1, pm))
    })
}

/// The reader-exceptions monad `A ⇒ (X + E)`.
///
/// Shapes are functions `A → {inl, e…}` (index 0 is `inl`); the positions of
/// `g` are the arguments where `g` returns a value, in order.
pub fn monad_exceptions_reader(a: &FinSet, e: &FinSet) -> Result<ContainerMonad> {
    let body = c_coproduct(&c_id(), &c_const(e))?;
    let c = c_exponent(a, &body)?;
    let radix = vec![e.len() + 1; a.len()];
    let name = format!("exceptions-reader({},{})", a.len(), e.len());
    ContainerMonad::from_rule(name, c, 0, |s, f| {
        let g = lex_decode(&radix, s);
        let value_args: Vec<usize> = (0..a.len()).filter(|&x| g[x] == 0).collect();
        let mut r = g.clone();
        let mut pm = Vec::new();
        for (p, &x) in value_args.iter().enumerate() {
            let inner = lex_decode(&radix, f[p]);
            r[x] = inner[x];
            if inner[x] == 0 {
                let q = (0..x).filter(|&y| inner[y] == 0).count();
                pm.push((p, q));
            }
        }
        Some((lex_index(&radix, &r), pm))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn registered_monads_pass() {
        let a3 = FinSet::from_strs("A", &["a0", "a1", "a2"]).unwrap();
        assert!(monad_reader(&a3).is_ok());
        assert!(monad_writer(&Monoid::cyclic(3)).is_ok());
        assert!(monad_update(&Action::rotation(&a2())).is_ok());
        assert!(monad_exceptions_reader(&a2(), &a2()).is_ok());
        let (checked, skipped) = monad_nelist(3).unwrap().check_laws().unwrap();
        assert!(checked > 0 && skipped > 0);
    }

    #[test]
    fn non_actions_are_rejected() {
        let z2 = Monoid::cyclic(2);
        // The generator fixes a0 but sends a1 to a0: applying it twice is not the unit.
        assert!(Action::from_fn(&a2(), &z2, |a, b| if b == 1 { 0 } else { a }).is_err());
        assert!(Monoid::new(a2(), 0, vec![vec![0, 1], vec![1, 1]]).is_ok());
        assert!(Monoid::new(a2(), 0, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(Monoid::new(a2(), 1, vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn broken_multiplication_is_caught() {
        let w = monad_writer(&Monoid::cyclic(3)).unwrap();
        let mut mult = w.mult.clone();
        // Send (1, 1) to 0 instead of 2.
        mult[4] = Some((0, vec![0]));
        let err = ContainerMonad::new("bad", w.c.clone(), 0, mult).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn update_multiplication_by_hand() {
        let act = Action::rotation(&a2());
        let t = monad_update(&act).unwrap();
        // g = (a0 ↦ 1, a1 ↦ 0); k(a0) = const 1, k(a1) = const 0.
        let g = update_shape(&act, &[1, 0]);
        let k = [update_shape(&act, &[1, 1]), update_shape(&act, &[0, 0])];
        let (r, pm) = t.mult_at(g, &k).unwrap();
        // a0: g a0 = 1, a0↓1 = a1, k(a0)(a1) = 1, 1⊕1 = 0.  a1: g a1 = 0, k(a1)(a1) = 0.
        assert_eq!(update_fn(&act, r), vec![0, 0]);
        assert_eq!(pm, vec![(0, 1), (1, 1)]);
    }

    #[test]
    fn join_matches_concatenation() {
        let t = monad_nelist(4).unwrap();
        let x = FinSet::range("X", 3);
        let el = |v: &[usize]| ContainerElement {
            shape: v.len() - 1,
            payload: FinFn { dom: t.c.pos(v.len() - 1).clone(), cod: x.clone(), table: v.to_vec() },
        };
        let joined = t.join(1, &[el(&[0, 1]), el(&[2])], &x).unwrap().unwrap();
        assert_eq!(joined.payload.table, vec![0, 1, 2]);
        assert!(t.join(1, &[el(&[0, 1, 2]), el(&[2, 2])], &x).unwrap().is_none());
    }

    #[test]
    fn exceptions_reader_propagates_errors() {
        let t = monad_exceptions_reader(&a2(), &FinSet::from_strs("E", &["e0", "e1"]).unwrap()).unwrap();
        // Outer g = (a0 ↦ value, a1 ↦ e1); inner at a0 raises e0 everywhere.
        let g = lex_index(&[3, 3], &[0, 2]);
        let inner = lex_index(&[3, 3], &[1, 1]);
        let (r, pm) = t.mult_at(g, &[inner]).unwrap();
        assert_eq!(lex_decode(&[3, 3], r), vec![1, 2]);
        assert!(pm.is_empty());
    }
}
