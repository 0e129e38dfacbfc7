use std::fmt;

use super::{c_compose, c_id, Composite, Container, ContainerElement};
use crate::error::{Error, Result};
use crate::finset::FinFn;

/// A container morphism `src → dst`: a shape map and, for every source shape
/// `s`, a backwards position map `P_dst(shape_map s) → P_src(s)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ContainerMorphism {
    pub src: Container,
    pub dst: Container,
    pub shape_map: Vec<usize>,
    pub pos_maps: Vec<Vec<usize>>,
}

impl fmt::Debug for ContainerMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} {:?} {:?}", self.src, self.dst, self.shape_map, self.pos_maps)
    }
}

impl ContainerMorphism {
    pub fn new(src: Container, dst: Container, shape_map: Vec<usize>, pos_maps: Vec<Vec<usize>>) -> Result<Self> {
        if shape_map.len() != src.num_shapes() || pos_maps.len() != src.num_shapes() {
            return Err(Error::mismatch("morphism tables do not cover the source shapes"));
        }
        for (s, (&t, pm)) in shape_map.iter().zip(&pos_maps).enumerate() {
            if t >= dst.num_shapes() {
                return Err(Error::mismatch(format!("shape {s} mapped outside the target")));
            }
            if pm.len() != dst.arity(t) || pm.iter().any(|&p| p >= src.arity(s)) {
                return Err(Error::mismatch(format!(
                    "position map at shape `{}` has the wrong type",
                    src.shapes.elem(s)
                )));
            }
        }
        Ok(Self::new_unchecked(src, dst, shape_map, pos_maps))
    }

    pub(crate) fn new_unchecked(
        src: Container,
        dst: Container,
        shape_map: Vec<usize>,
        pos_maps: Vec<Vec<usize>>,
    ) -> Self {
        ContainerMorphism { src, dst, shape_map, pos_maps }
    }

    /// Builds a morphism from a per-shape rule `s ↦ (shape, position map)`.
    pub fn from_fn(
        src: &Container,
        dst: &Container,
        mut rule: impl FnMut(usize) -> (usize, Vec<usize>),
    ) -> Result<Self> {
        let (shape_map, pos_maps) = (0..src.num_shapes()).map(&mut rule).unzip();
        Self::new(src.clone(), dst.clone(), shape_map, pos_maps)
    }

    pub fn identity(c: &Container) -> Self {
        let pos_maps = (0..c.num_shapes()).map(|s| (0..c.arity(s)).collect()).collect();
        Self::new_unchecked(c.clone(), c.clone(), (0..c.num_shapes()).collect(), pos_maps)
    }

    pub fn shape_fn(&self) -> FinFn {
        FinFn { dom: self.src.shapes.clone(), cod: self.dst.shapes.clone(), table: self.shape_map.clone() }
    }

    pub fn pos_fn(&self, s: usize) -> FinFn {
        FinFn {
            dom: self.dst.pos(self.shape_map[s]).clone(),
            cod: self.src.pos(s).clone(),
            table: self.pos_maps[s].clone(),
        }
    }

    /// Component at an element: new shape, payload precomposed with the position map.
    pub fn apply(&self, e: &ContainerElement) -> Result<ContainerElement> {
        self.src.check_element(e)?;
        let t = self.shape_map[e.shape];
        let table = self.pos_maps[e.shape].iter().map(|&p| e.payload.table[p]).collect();
        Ok(ContainerElement { shape: t, payload: FinFn::new(self.dst.pos(t).clone(), e.carrier().clone(), table)? })
    }

    /// `g ∘ f`.
    pub fn compose(g: &ContainerMorphism, f: &ContainerMorphism) -> Result<Self> {
        if f.dst != g.src {
            return Err(Error::mismatch("morphisms are not composable"));
        }
        let shape_map = f.shape_map.iter().map(|&t| g.shape_map[t]).collect();
        let pos_maps = (0..f.src.num_shapes())
            .map(|s| {
                let t = f.shape_map[s];
                g.pos_maps[t].iter().map(|&q| f.pos_maps[s][q]).collect()
            })
            .collect();
        Ok(Self::new_unchecked(f.src.clone(), g.dst.clone(), shape_map, pos_maps))
    }

    /// Composes a chain `m_n ∘ ... ∘ m_1` given in application order.
    pub fn chain(steps: &[ContainerMorphism]) -> Result<Self> {
        let (first, rest) = steps.split_first().ok_or_else(|| Error::invalid("empty morphism chain"))?;
        rest.iter().try_fold(first.clone(), |acc, m| Self::compose(m, &acc))
    }

    pub fn is_iso(&self) -> bool {
        let mut hit = vec![false; self.dst.num_shapes()];
        if self.src.num_shapes() != self.dst.num_shapes() {
            return false;
        }
        for (s, &t) in self.shape_map.iter().enumerate() {
            if std::mem::replace(&mut hit[t], true) {
                return false;
            }
            let mut seen = vec![false; self.src.arity(s)];
            if self.pos_maps[s].len() != seen.len() || self.pos_maps[s].iter().any(|&p| std::mem::replace(&mut seen[p], true)) {
                return false;
            }
        }
        true
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_iso() {
            return Err(Error::invalid("morphism is not invertible"));
        }
        let n = self.src.num_shapes();
        let mut shape_map = vec![0; n];
        let mut pos_maps = vec![Vec::new(); n];
        for (s, &t) in self.shape_map.iter().enumerate() {
            shape_map[t] = s;
            let mut inv = vec![0; self.pos_maps[s].len()];
            for (q, &p) in self.pos_maps[s].iter().enumerate() {
                inv[p] = q;
            }
            pos_maps[t] = inv;
        }
        Ok(Self::new_unchecked(self.dst.clone(), self.src.clone(), shape_map, pos_maps))
    }

    /// `H·α : H∘F → H∘G` for `α : F → G`.
    pub fn whisker_left(h: &Container, alpha: &ContainerMorphism) -> Result<Self> {
        let hf = Composite::new(h, &alpha.src)?;
        let hg = Composite::new(h, &alpha.dst)?;
        let (src, dst) = (hf.container()?, hg.container()?);
        Self::from_fn(&src, &dst, |idx| {
            let (t, f) = hf.decode_shape(idx);
            let g: Vec<usize> = f.iter().map(|&s| alpha.shape_map[s]).collect();
            let mut pm = Vec::with_capacity(hg.arity(&g));
            for (p, &s) in f.iter().enumerate() {
                for &q in &alpha.pos_maps[s] {
                    pm.push(hf.pos_index(&f, p, q));
                }
            }
            (hg.shape_index(t, &g), pm)
        })
    }

    /// `α·H : F∘H → G∘H` for `α : F → G`.
    pub fn whisker_right(alpha: &ContainerMorphism, h: &Container) -> Result<Self> {
        let fh = Composite::new(&alpha.src, h)?;
        let gh = Composite::new(&alpha.dst, h)?;
        let (src, dst) = (fh.container()?, gh.container()?);
        Self::from_fn(&src, &dst, |idx| {
            let (s, f) = fh.decode_shape(idx);
            let pi = &alpha.pos_maps[s];
            let g: Vec<usize> = pi.iter().map(|&p| f[p]).collect();
            let mut pm = Vec::with_capacity(gh.arity(&g));
            for &p in pi.iter() {
                for r in 0..h.arity(f[p]) {
                    pm.push(fh.pos_index(&f, p, r));
                }
            }
            (gh.shape_index(alpha.shape_map[s], &g), pm)
        })
    }

    /// Horizontal composite `α ∗ β : F∘H → G∘K`.
    pub fn hcomp(alpha: &ContainerMorphism, beta: &ContainerMorphism) -> Result<Self> {
        let first = Self::whisker_left(&alpha.src, beta)?;
        let second = Self::whisker_right(alpha, &beta.dst)?;
        Self::compose(&second, &first)
    }
}

/// The associator `(C0∘C1)∘C2 → C0∘(C1∘C2)`.
pub fn assoc(c0: &Container, c1: &Container, c2: &Container) -> Result<ContainerMorphism> {
    let c01 = c_compose(c0, c1)?;
    let c12 = c_compose(c1, c2)?;
    let l01 = Composite::new(c0, c1)?;
    let left = Composite::new(&c01, c2)?;
    let r12 = Composite::new(c1, c2)?;
    let right = Composite::new(c0, &c12)?;
    let (src, dst) = (left.container()?, right.container()?);
    ContainerMorphism::from_fn(&src, &dst, |idx| {
        let (st, f2) = left.decode_shape(idx);
        let (s0, f1) = l01.decode_shape(st);
        let g: Vec<usize> = f1
            .iter()
            .enumerate()
            .map(|(p, &s1)| {
                let inner: Vec<usize> = (0..c1.arity(s1)).map(|q| f2[l01.pos_index(&f1, p, q)]).collect();
                r12.shape_index(s1, &inner)
            })
            .collect();
        let mut pm = Vec::new();
        for (p, &s1) in f1.iter().enumerate() {
            for q in 0..c1.arity(s1) {
                let pq = l01.pos_index(&f1, p, q);
                for r in 0..c2.arity(f2[pq]) {
                    pm.push(left.pos_index(&f2, pq, r));
                }
            }
        }
        (right.shape_index(s0, &g), pm)
    })
}

/// The left unitor `Id∘C → C`.
pub fn left_unitor(c: &Container) -> Result<ContainerMorphism> {
    let id = c_id();
    let comp = Composite::new(&id, c)?;
    ContainerMorphism::from_fn(&comp.container()?, c, |idx| {
        let (_, f) = comp.decode_shape(idx);
        (f[0], (0..c.arity(f[0])).collect())
    })
}

/// The right unitor `C∘Id → C`.
pub fn right_unitor(c: &Container) -> Result<ContainerMorphism> {
    let id = c_id();
    let comp = Composite::new(c, &id)?;
    ContainerMorphism::from_fn(&comp.container()?, c, |idx| {
        let (s, _) = comp.decode_shape(idx);
        (s, (0..c.arity(s)).collect())
    })
}

/// The morphism `C → Id` that keeps only the position `counit[s]` of each shape.
pub fn to_identity(c: &Container, counit: &[usize]) -> Result<ContainerMorphism> {
    ContainerMorphism::from_fn(c, &c_id(), |s| (0, vec![counit[s]]))
}

/// The morphism `Id → C` picking the shape `s` (whose positions all read the one value).
pub fn from_identity(c: &Container, s: usize) -> Result<ContainerMorphism> {
    ContainerMorphism::from_fn(&c_id(), c, |_| (s, vec![0; c.arity(s)]))
}

/// Checks that two containers are equal, naming `what` on failure.
pub fn expect_same(a: &Container, b: &Container, what: &str) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::mismatch(format!("{what}: containers differ ({a:?} vs {b:?})")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;
    use crate::container::{c_maybe, c_nelist, c_reader, c_writer, nat_trans_enumerate};

    fn two() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn identity_fixes_elements() {
        let c = c_nelist(2);
        let id = ContainerMorphism::identity(&c);
        for e in c.elements(&FinSet::range("X", 2)).unwrap() {
            assert_eq!(id.apply(&e).unwrap(), e);
        }
    }

    #[test]
    fn naturality_of_apply() {
        let f = c_coproduct2();
        let g = c_writer(&two());
        let x = FinSet::range("X", 2);
        let fs = crate::finset::exponent(&x, &x).unwrap().functions;
        for m in nat_trans_enumerate(&f, &g).unwrap() {
            for e in f.elements(&x).unwrap() {
                for h in &fs {
                    let lhs = g.fmap(h, &m.apply(&e).unwrap()).unwrap();
                    let rhs = m.apply(&f.fmap(h, &e).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn c_coproduct2() -> Container {
        crate::container::c_coproduct(&c_reader(&two()), &c_maybe()).unwrap()
    }

    #[test]
    fn composite_application_is_sequential() {
        let a = c_coproduct2();
        let b = c_writer(&two());
        let x = FinSet::range("X", 2);
        let ms = nat_trans_enumerate(&a, &a).unwrap();
        let ns = nat_trans_enumerate(&a, &b).unwrap();
        for m in ms.iter().step_by(7) {
            for n in ns.iter().step_by(5) {
                let nm = ContainerMorphism::compose(n, m).unwrap();
                for e in a.elements(&x).unwrap() {
                    assert_eq!(nm.apply(&e).unwrap(), n.apply(&m.apply(&e).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn associator_and_unitors_are_isos() {
        let (a, b, c) = (c_maybe(), c_reader(&two()), c_nelist(2));
        let m = assoc(&a, &b, &c).unwrap();
        assert!(m.is_iso());
        let back = ContainerMorphism::compose(&m.inverse().unwrap(), &m).unwrap();
        assert_eq!(back, ContainerMorphism::identity(&m.src));
        assert!(left_unitor(&c).unwrap().is_iso());
        assert!(right_unitor(&c).unwrap().is_iso());
    }

    #[test]
    fn associator_preserves_elements() {
        // Flattening a doubly nested element both ways and transporting along the
        // associator must agree.
        let (c0, c1, c2) = (c_reader(&two()), c_maybe(), c_writer(&two()));
        let c01 = c_compose(&c0, &c1).unwrap();
        let c12 = c_compose(&c1, &c2).unwrap();
        let l = Composite::new(&c01, &c2).unwrap();
        let r = Composite::new(&c0, &c12).unwrap();
        let m = assoc(&c0, &c1, &c2).unwrap();
        let x = FinSet::range("X", 2);
        let lc = l.container().unwrap();
        let rc = r.container().unwrap();
        for e in lc.elements(&x).unwrap() {
            let moved = m.apply(&e).unwrap();
            let (s, kids) = r.split(&moved);
            let again = r.flatten_over(&rc, s, &kids, &x).unwrap();
            assert_eq!(again, moved);
            // Leaves appear in the same order on both sides.
            assert_eq!(moved.payload.table, e.payload.table);
        }
    }

    #[test]
    fn hcomp_interchange() {
        let a = c_reader(&two());
        let b = c_writer(&two());
        let alphas = nat_trans_enumerate(&a, &a).unwrap();
        let betas = nat_trans_enumerate(&b, &b).unwrap();
        for al in &alphas {
            for be in &betas {
                let h = ContainerMorphism::hcomp(al, be).unwrap();
                let other = ContainerMorphism::compose(
                    &ContainerMorphism::whisker_left(&al.dst, be).unwrap(),
                    &ContainerMorphism::whisker_right(al, &be.src).unwrap(),
                )
                .unwrap();
                assert_eq!(h, other);
            }
        }
    }
}
