//! Brute-force functors on a truncated universe of finite sets.
//!
//! The universe holds the sets `{0..n-1}` for `n ≤ k` and every function
//! between them. A functor is a table of object images and morphism images;
//! natural families are found by exhaustive search with constraint
//! propagation. Nothing here looks at container shapes or positions, so it
//! serves as an independent oracle for the closed forms elsewhere.

use std::collections::HashMap;
use std::sync::Arc;

use crate::container::Container;
use crate::error::{Error, Result};
use crate::finset::{card_pow, guard, lex_index, lex_tuples, FinSet};

/// A function between universe objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UMorphism {
    pub dom: usize,
    pub cod: usize,
    pub table: Vec<usize>,
}

#[derive(Debug)]
pub struct Universe {
    pub k: usize,
    pub objects: Vec<FinSet>,
    pub morphisms: Vec<UMorphism>,
    index: HashMap<UMorphism, usize>,
    out_of: Vec<Vec<usize>>,
}

impl Universe {
    pub fn new(k: usize) -> Arc<Universe> {
        let objects: Vec<FinSet> = (0..=k).map(|n| FinSet::range(format!("[{n}]"), n)).collect();
        let mut morphisms = Vec::new();
        let mut out_of = vec![Vec::new(); k + 1];
        for dom in 0..=k {
            for cod in 0..=k {
                for table in lex_tuples(&vec![cod; dom]) {
                    out_of[dom].push(morphisms.len());
                    morphisms.push(UMorphism { dom, cod, table });
                }
            }
        }
        let index = morphisms.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Arc::new(Universe { k, objects, morphisms, index, out_of })
    }

    pub fn num_objects(&self) -> usize {
        self.k + 1
    }

    pub fn out_of(&self, o: usize) -> &[usize] {
        &self.out_of[o]
    }

    pub fn find(&self, m: &UMorphism) -> usize {
        self.index[m]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.find(&UMorphism { dom: o, cod: o, table: (0..o).collect() })
    }

    /// Index of `g ∘ f`.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        let (gm, fm) = (&self.morphisms[g], &self.morphisms[f]);
        debug_assert_eq!(fm.cod, gm.dom);
        self.find(&UMorphism { dom: fm.dom, cod: gm.cod, table: fm.table.iter().map(|&x| gm.table[x]).collect() })
    }
}

/// A functor on the universe, given by tables.
#[derive(Clone, Debug)]
pub struct FinFunctor {
    pub universe: Arc<Universe>,
    pub objects: Vec<FinSet>,
    /// `maps[m]` sends elements of `objects[dom m]` to `objects[cod m]`.
    pub maps: Vec<Vec<usize>>,
}

impl FinFunctor {
    /// Builds a functor from tables, checking identities and composition.
    pub fn new(universe: Arc<Universe>, objects: Vec<FinSet>, maps: Vec<Vec<usize>>) -> Result<FinFunctor> {
        let f = FinFunctor { universe, objects, maps };
        f.check_laws()?;
        Ok(f)
    }

    /// Builds a functor from an action `(morphism, element) ↦ element`.
    pub fn from_action(
        universe: Arc<Universe>,
        objects: Vec<FinSet>,
        action: impl Fn(&UMorphism, usize) -> usize,
    ) -> Result<FinFunctor> {
        let maps = universe.morphisms.iter().map(|m| (0..objects[m.dom].len()).map(|e| action(m, e)).collect()).collect();
        FinFunctor::new(universe, objects, maps)
    }

    fn check_laws(&self) -> Result<()> {
        let u = &self.universe;
        if self.objects.len() != u.num_objects() || self.maps.len() != u.morphisms.len() {
            return Err(Error::invalid("functor tables do not cover the universe"));
        }
        for (i, m) in u.morphisms.iter().enumerate() {
            let t = &self.maps[i];
            if t.len() != self.objects[m.dom].len() || t.iter().any(|&v| v >= self.objects[m.cod].len()) {
                return Err(Error::invalid(format!("morphism image {i} has the wrong type")));
            }
        }
        for o in 0..u.num_objects() {
            let id = u.identity(o);
            if self.maps[id].iter().enumerate().any(|(e, &v)| e != v) {
                return Err(Error::law(format!("identity on object {o} is not preserved")));
            }
        }
        for (fi, f) in u.morphisms.iter().enumerate() {
            for &gi in u.out_of(f.cod) {
                let gf = u.compose(gi, fi);
                let (tf, tg, tgf) = (&self.maps[fi], &self.maps[gi], &self.maps[gf]);
                if tf.iter().zip(tgf).any(|(&a, &b)| tg[a] != b) {
                    return Err(Error::law(format!("composition not preserved for morphisms {fi}, {gi}")));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, m: usize, e: usize) -> usize {
        self.maps[m][e]
    }

    pub fn size(&self, o: usize) -> usize {
        self.objects[o].len()
    }

    /// True when some object has an element.
    pub fn is_nonzero(&self) -> bool {
        self.objects.iter().any(|o| !o.is_empty())
    }

    pub fn from_container(c: &Container, universe: Arc<Universe>) -> Result<FinFunctor> {
        let interps: Vec<_> = universe.objects.iter().map(|x| c.interpret(x)).collect::<Result<_>>()?;
        let objects = interps.iter().map(|i| i.set.clone()).collect();
        let maps = universe
            .morphisms
            .iter()
            .map(|m| {
                interps[m.dom]
                    .elements
                    .iter()
                    .map(|e| {
                        let moved: Vec<usize> = e.payload.table.iter().map(|&x| m.table[x]).collect();
                        let offset: u128 = (0..e.shape).map(|s| card_pow(m.cod, c.arity(s))).sum();
                        offset as usize + lex_index(&vec![m.cod; moved.len()], &moved)
                    })
                    .collect()
            })
            .collect();
        FinFunctor::new(universe, objects, maps)
    }

    pub fn identity(universe: Arc<Universe>) -> FinFunctor {
        let objects = universe.objects.clone();
        FinFunctor::from_action(universe, objects, |m, e| m.table[e]).expect("identity functor")
    }

    pub fn constant(universe: Arc<Universe>, a: &FinSet) -> FinFunctor {
        let objects = vec![a.clone(); universe.num_objects()];
        FinFunctor::from_action(universe, objects, |_, e| e).expect("constant functor")
    }

    /// `X ↦ A × X` for a fixed size `a`, elements indexed `x_a * |X| + x`.
    pub fn left_product(universe: Arc<Universe>, a: usize) -> FinFunctor {
        let objects = (0..universe.num_objects()).map(|n| FinSet::range(format!("{a}x{n}"), a * n)).collect();
        let sizes: Vec<usize> = (0..universe.num_objects()).collect();
        FinFunctor::from_action(universe, objects, |m, e| {
            let n = sizes[m.dom];
            (e / n) * m.cod + m.table[e % n]
        })
        .expect("product functor")
    }

    /// `X ↦ X × X`, elements `(i, j)` indexed `i * |X| + j`.
    pub fn square(universe: Arc<Universe>) -> FinFunctor {
        let objects = (0..universe.num_objects())
            .map(|n| {
                let elems = (0..n * n).map(|e| format!("({},{})", e / n, e % n)).collect();
                FinSet::new(format!("{n}^2"), elems).unwrap()
            })
            .collect();
        FinFunctor::from_action(universe, objects, |m, e| {
            let n = m.dom;
            m.table[e / n] * m.cod + m.table[e % n]
        })
        .expect("square functor")
    }

    /// Unordered pairs `{i, j}` (with `i ≤ j`): `X × X` quotiented by the swap.
    pub fn unordered_pair(universe: Arc<Universe>) -> FinFunctor {
        let pairs: Vec<Vec<(usize, usize)>> =
            (0..universe.num_objects()).map(|n| (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()).collect();
        let objects = pairs
            .iter()
            .enumerate()
            .map(|(n, ps)| FinSet::new(format!("P2[{n}]"), ps.iter().map(|(i, j)| format!("{{{i},{j}}}")).collect()).unwrap())
            .collect();
        let lookup: Vec<HashMap<(usize, usize), usize>> =
            pairs.iter().map(|ps| ps.iter().enumerate().map(|(i, &p)| (p, i)).collect()).collect();
        FinFunctor::from_action(universe, objects, |m, e| {
            let (i, j) = pairs[m.dom][e];
            let (a, b) = (m.table[i], m.table[j]);
            lookup[m.cod][&(a.min(b), a.max(b))]
        })
        .expect("unordered pair functor")
    }
}

/// A family of components, one table per index object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatFamily {
    pub components: Vec<Vec<usize>>,
}

/// A functor on some index category, flattened to action tables.
struct Diagram {
    sizes: Vec<usize>,
    /// `(dom, cod)` per morphism.
    arrows: Vec<(usize, usize)>,
    out_of: Vec<Vec<usize>>,
}

struct Search<'a> {
    diagram: &'a Diagram,
    src: &'a [Vec<usize>],
    tgt: &'a [Vec<usize>],
    tgt_sizes: Vec<usize>,
    order: Vec<(usize, usize)>,
    assign: Vec<Vec<usize>>,
    used: Option<Vec<Vec<u32>>>,
    trail: Vec<(usize, usize)>,
    results: Vec<NatFamily>,
    limit: usize,
}

const UNSET: usize = usize::MAX;

impl Search<'_> {
    fn set(&mut self, o: usize, e: usize, v: usize) -> bool {
        let cur = self.assign[o][e];
        if cur != UNSET {
            return cur == v;
        }
        if let Some(used) = &mut self.used {
            if used[o][v] > 0 {
                return false;
            }
            used[o][v] += 1;
        }
        self.assign[o][e] = v;
        self.trail.push((o, e));
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (o, e) = self.trail.pop().unwrap();
            if let Some(used) = &mut self.used {
                used[o][self.assign[o][e]] -= 1;
            }
            self.assign[o][e] = UNSET;
        }
    }

    fn propagate(&mut self, o: usize, e: usize, v: usize) -> bool {
        let d = self.diagram;
        for &m in &d.out_of[o] {
            let cod = d.arrows[m].1;
            let (se, tv) = (self.src[m][e], self.tgt[m][v]);
            if !self.set(cod, se, tv) {
                return false;
            }
        }
        true
    }

    fn run(&mut self, i: usize) {
        if self.results.len() >= self.limit {
            return;
        }
        let Some(&(o, e)) = self.order.get(i) else {
            self.results.push(NatFamily { components: self.assign.clone() });
            return;
        };
        if self.assign[o][e] != UNSET {
            return self.run(i + 1);
        }
        for v in 0..self.tgt_sizes[o] {
            let mark = self.trail.len();
            if self.set(o, e, v) && self.propagate(o, e, v) {
                self.run(i + 1);
            }
            self.undo(mark);
            if self.results.len() >= self.limit {
                return;
            }
        }
    }
}

/// Natural families `src → tgt` over a diagram, seeds taken from the largest objects first.
fn search(
    diagram: &Diagram,
    src: &[Vec<usize>],
    tgt: &[Vec<usize>],
    tgt_sizes: Vec<usize>,
    injective: bool,
    limit: usize,
) -> Vec<NatFamily> {
    let mut objs: Vec<usize> = (0..diagram.sizes.len()).collect();
    objs.sort_by_key(|&o| std::cmp::Reverse(diagram.sizes[o]));
    let order = objs.iter().flat_map(|&o| (0..diagram.sizes[o]).map(move |e| (o, e))).collect();
    let used = injective.then(|| tgt_sizes.iter().map(|&n| vec![0u32; n]).collect());
    let mut s = Search {
        diagram,
        src,
        tgt,
        assign: diagram.sizes.iter().map(|&n| vec![UNSET; n]).collect(),
        tgt_sizes,
        order,
        used,
        trail: Vec::new(),
        results: Vec::new(),
        limit,
    };
    s.run(0);
    s.results
}

fn universe_diagram(u: &Universe, f: &FinFunctor) -> Diagram {
    Diagram {
        sizes: (0..u.num_objects()).map(|o| f.size(o)).collect(),
        arrows: u.morphisms.iter().map(|m| (m.dom, m.cod)).collect(),
        out_of: (0..u.num_objects()).map(|o| u.out_of(o).to_vec()).collect(),
    }
}

fn same_universe(f: &FinFunctor, g: &FinFunctor) -> Result<()> {
    if Arc::ptr_eq(&f.universe, &g.universe) || f.universe.k == g.universe.k {
        Ok(())
    } else {
        Err(Error::mismatch("functors live on different universes"))
    }
}

/// All natural transformations `F → G` over the universe.
pub fn natural_transformations(f: &FinFunctor, g: &FinFunctor) -> Result<Vec<NatFamily>> {
    same_universe(f, g)?;
    let d = universe_diagram(&f.universe, f);
    let sizes = (0..g.objects.len()).map(|o| g.size(o)).collect();
    Ok(search(&d, &f.maps, &g.maps, sizes, false, usize::MAX))
}

/// Independent naturality check of a family `F → G`.
pub fn is_natural(f: &FinFunctor, g: &FinFunctor, fam: &NatFamily) -> bool {
    let u = &f.universe;
    u.morphisms.iter().enumerate().all(|(mi, m)| {
        (0..f.size(m.dom)).all(|e| fam.components[m.cod][f.apply(mi, e)] == g.apply(mi, fam.components[m.dom][e]))
    })
}

/// A natural isomorphism `F → G`, if the search finds one.
pub fn find_natural_iso(f: &FinFunctor, g: &FinFunctor) -> Result<Option<NatFamily>> {
    same_universe(f, g)?;
    if (0..f.objects.len()).any(|o| f.size(o) != g.size(o)) {
        return Ok(None);
    }
    let d = universe_diagram(&f.universe, f);
    let sizes = (0..g.objects.len()).map(|o| g.size(o)).collect();
    Ok(search(&d, &f.maps, &g.maps, sizes, true, 1).pop())
}

/// The dual computed as an end: at `X`, the natural families `G Y → X × Y`.
pub fn end_dual(g: &FinFunctor) -> Result<FinFunctor> {
    let u = g.universe.clone();
    if u.k < 2 {
        return Err(Error::invalid("the end needs a universe with k ≥ 2"));
    }
    let mut families = Vec::with_capacity(u.num_objects());
    for x in 0..u.num_objects() {
        let target = FinFunctor::left_product(u.clone(), x);
        let fams = natural_transformations(g, &target)?;
        guard("end families", fams.len() as u128)?;
        families.push(fams);
    }
    let lookup: Vec<HashMap<&NatFamily, usize>> =
        families.iter().map(|fs| fs.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    let objects = families
        .iter()
        .enumerate()
        .map(|(x, fs)| FinSet::new(format!("end[{x}]"), (0..fs.len()).map(|i| format!("a{i}")).collect()))
        .collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::with_capacity(u.morphisms.len());
    for m in &u.morphisms {
        let mut table = Vec::with_capacity(families[m.dom].len());
        for fam in &families[m.dom] {
            // Post-compose with f × id: component values are x * |Y| + y.
            let moved = NatFamily {
                components: fam
                    .components
                    .iter()
                    .enumerate()
                    .map(|(y, comp)| comp.iter().map(|&v| m.table[v / y] * y + v % y).collect())
                    .collect(),
            };
            let i = lookup[m.cod].get(&moved).ok_or_else(|| Error::law("end is not closed under post-composition"))?;
            table.push(*i);
        }
        maps.push(table);
    }
    FinFunctor::new(u, objects, maps)
}

/// Binatural families `F X × G Y → X × Y`. Component `(X, Y)` lives at index
/// `X * (k+1) + Y`; its table is indexed by `a * |G Y| + b` with values `x * |Y| + y`.
pub fn interaction_families(f: &FinFunctor, g: &FinFunctor) -> Result<Vec<NatFamily>> {
    interaction_families_limited(f, g, usize::MAX)
}

/// As [`interaction_families`], stopping after `limit` families.
pub fn interaction_families_limited(f: &FinFunctor, g: &FinFunctor, limit: usize) -> Result<Vec<NatFamily>> {
    same_universe(f, g)?;
    let u = &f.universe;
    let n = u.num_objects();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let sizes: Vec<usize> = cells.iter().map(|&(x, y)| f.size(x) * g.size(y)).collect();
    guard("interaction family domain", sizes.iter().map(|&s| s as u128).sum())?;
    let mut arrows = Vec::new();
    let mut out_of = vec![Vec::new(); cells.len()];
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    for (ci, &(x, y)) in cells.iter().enumerate() {
        for &mf in u.out_of(x) {
            for &mg in u.out_of(y) {
                let (fm, gm) = (&u.morphisms[mf], &u.morphisms[mg]);
                let cod = fm.cod * n + gm.cod;
                out_of[ci].push(arrows.len());
                arrows.push((ci, cod));
                let gy = g.size(y);
                let gy2 = g.size(gm.cod);
                src.push(
                    (0..sizes[ci]).map(|e| f.apply(mf, e / gy) * gy2 + g.apply(mg, e % gy)).collect::<Vec<usize>>(),
                );
                tgt.push((0..x * y).map(|v| fm.table[v / y] * gm.cod + gm.table[v % y]).collect::<Vec<usize>>());
            }
        }
    }
    let d = Diagram { sizes, arrows, out_of };
    let tsizes = cells.iter().map(|&(x, y)| x * y).collect();
    Ok(search(&d, &src, &tgt, tsizes, false, limit))
}

/// Independent binaturality check of an interaction family.
pub fn is_binatural(f: &FinFunctor, g: &FinFunctor, fam: &NatFamily) -> bool {
    let u = &f.universe;
    let n = u.num_objects();
    for (mf, fm) in u.morphisms.iter().enumerate() {
        for (mg, gm) in u.morphisms.iter().enumerate() {
            let (x, y, x2, y2) = (fm.dom, gm.dom, fm.cod, gm.cod);
            let (src, dst) = (&fam.components[x * n + y], &fam.components[x2 * n + y2]);
            for a in 0..f.size(x) {
                for b in 0..g.size(y) {
                    let v = src[a * g.size(y) + b];
                    let moved = fm.table[v / y] * y2 + gm.table[v % y];
                    if dst[f.apply(mf, a) * g.size(y2) + g.apply(mg, b)] != moved {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A named functor used as a candidate partner in degeneracy searches.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub name: String,
    pub functor: FinFunctor,
}

/// Candidate partners: containers with 1–2 shapes of arity 0–2, plus the
/// square and unordered-pair functors.
pub fn generated_family(universe: Arc<Universe>) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    for shapes in 1..=2usize {
        for arities in lex_tuples(&vec![3; shapes]) {
            let c = container_with_arities(&arities)?;
            out.push(Candidate {
                name: format!("container{arities:?}"),
                functor: FinFunctor::from_container(&c, universe.clone())?,
            });
        }
    }
    out.push(Candidate { name: "square".into(), functor: FinFunctor::square(universe.clone()) });
    out.push(Candidate { name: "unordered-pair".into(), functor: FinFunctor::unordered_pair(universe) });
    Ok(out)
}

/// A container whose shape `i` has `arities[i]` positions.
pub fn container_with_arities(arities: &[usize]) -> Result<Container> {
    let shapes = FinSet::new("S", (0..arities.len()).map(|i| format!("s{i}")).collect())?;
    let positions = arities.iter().enumerate().map(|(i, &n)| FinSet::range(format!("P(s{i})"), n)).collect();
    Container::new(shapes, positions)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyReport {
    /// Whether the supplied operation is a natural family (and commutative, when required).
    pub operation_valid: bool,
    /// Candidates that admit at least one interaction family, with the count found.
    pub witnesses: Vec<(String, usize)>,
    pub candidates_tested: usize,
    /// True when the operation is valid and no nonzero candidate interacts.
    pub degenerate: bool,
}

/// The constant-one functor as the source of nullary operations.
pub fn nullary_operations(f: &FinFunctor) -> Result<Vec<NatFamily>> {
    let one = FinFunctor::constant(f.universe.clone(), &FinSet::unit());
    natural_transformations(&one, f)
}

/// Binary operations `X × X → F X` that are invariant under swapping the arguments.
pub fn commutative_operations(f: &FinFunctor) -> Result<Vec<NatFamily>> {
    let sq = FinFunctor::square(f.universe.clone());
    Ok(natural_transformations(&sq, f)?.into_iter().filter(is_commutative).collect())
}

fn is_commutative(op: &NatFamily) -> bool {
    op.components.iter().enumerate().all(|(n, comp)| (0..n * n).all(|e| comp[e] == comp[(e % n) * n + e / n]))
}

fn degeneracy(f: &FinFunctor, valid: bool, family: &[Candidate]) -> Result<DegeneracyReport> {
    let mut witnesses = Vec::new();
    let mut tested = 0;
    for c in family.iter().filter(|c| c.functor.is_nonzero()) {
        tested += 1;
        let found = interaction_families_limited(f, &c.functor, 64)?;
        if !found.is_empty() {
            witnesses.push((c.name.clone(), found.len()));
        }
    }
    Ok(DegeneracyReport {
        operation_valid: valid,
        degenerate: valid && witnesses.is_empty(),
        witnesses,
        candidates_tested: tested,
    })
}

/// Nullary degeneracy: with `op : 1 → F` natural, no nonzero `G` should interact with `F`.
pub fn check_nullary_degeneracy(f: &FinFunctor, op: Option<&NatFamily>, family: &[Candidate]) -> Result<DegeneracyReport> {
    let one = FinFunctor::constant(f.universe.clone(), &FinSet::unit());
    let valid = op.is_some_and(|op| is_natural(&one, f, op));
    degeneracy(f, valid, family)
}

/// Commutative degeneracy: with `op : X × X → F X` natural and swap-invariant,
/// no nonzero `G` should interact with `F`.
pub fn check_commutative_degeneracy(
    f: &FinFunctor,
    op: Option<&NatFamily>,
    family: &[Candidate],
) -> Result<DegeneracyReport> {
    let sq = FinFunctor::square(f.universe.clone());
    let valid = op.is_some_and(|op| is_natural(&sq, f, op) && is_commutative(op));
    degeneracy(f, valid, family)
}

/// `|F X|` summed over the universe: a cheap size estimate.
pub fn total_size(f: &FinFunctor) -> u128 {
    f.objects.iter().map(|o| o.len() as u128).sum()
}

/// Size of the largest hom-set, for guard messages.
pub fn max_hom(u: &Universe) -> u128 {
    card_pow(u.k, u.k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{c_const, c_id, c_maybe, c_one, c_reader, c_writer, c_zero};
    use crate::dual::dual;
    use crate::interaction::il_count;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn universe_shape() {
        let u = Universe::new(3);
        assert_eq!(u.morphisms.len(), 4 + 6 + 14 + 36);
        for o in 0..4 {
            let id = u.identity(o);
            assert_eq!(u.compose(id, id), id);
        }
    }

    #[test]
    fn container_functors_match_simple_ones() {
        let u = Universe::new(3);
        let id = FinFunctor::from_container(&c_id(), u.clone()).unwrap();
        assert_eq!(id.maps, FinFunctor::identity(u.clone()).maps);
        let k = FinFunctor::from_container(&c_const(&a2()), u.clone()).unwrap();
        assert_eq!(k.maps, FinFunctor::constant(u.clone(), &a2()).maps);
        let u2 = Universe::new(2);
        let w = FinFunctor::from_container(&c_writer(&a2()), u2.clone()).unwrap();
        assert_eq!(w.maps, FinFunctor::left_product(u2, 2).maps);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let u = Universe::new(2);
        let mut f = FinFunctor::unordered_pair(u.clone());
        // Break composition: send every endomorphism of [2] to the identity.
        for (i, m) in u.morphisms.iter().enumerate() {
            if m.dom == 2 && m.cod == 2 {
                f.maps[i] = (0..f.size(2)).collect();
            }
        }
        assert!(FinFunctor::new(u, f.objects, f.maps).is_err());
    }

    #[test]
    fn small_ends() {
        let u = Universe::new(3);
        let id = FinFunctor::identity(u.clone());
        assert!(find_natural_iso(&end_dual(&id).unwrap(), &id).unwrap().is_some());
        let one = FinFunctor::from_container(&c_one(), u.clone()).unwrap();
        let zero = FinFunctor::from_container(&c_zero(), u.clone()).unwrap();
        assert!(find_natural_iso(&end_dual(&one).unwrap(), &zero).unwrap().is_some());
        let w = FinFunctor::from_container(&c_writer(&a2()), u.clone()).unwrap();
        let r = FinFunctor::from_container(&c_reader(&a2()), u.clone()).unwrap();
        let e = end_dual(&w).unwrap();
        assert!(find_natural_iso(&e, &r).unwrap().is_some());
        let r_dual = FinFunctor::from_container(&dual(&c_writer(&a2())).unwrap(), u).unwrap();
        assert!(find_natural_iso(&e, &r_dual).unwrap().is_some());
    }

    #[test]
    fn iso_search_refutes_non_isos() {
        let u = Universe::new(2);
        let sq = FinFunctor::square(u.clone());
        let r = FinFunctor::from_container(&c_reader(&a2()), u.clone()).unwrap();
        assert!(find_natural_iso(&sq, &r).unwrap().is_some());
        let w = FinFunctor::from_container(&c_writer(&a2()), u).unwrap();
        assert!(find_natural_iso(&sq, &w).unwrap().is_none());
    }

    #[test]
    fn families_agree_with_table_count() {
        let u = Universe::new(2);
        let f = FinFunctor::from_container(&c_reader(&a2()), u.clone()).unwrap();
        let g = FinFunctor::from_container(&c_writer(&a2()), u).unwrap();
        let fams = interaction_families(&f, &g).unwrap();
        assert_eq!(fams.len() as u128, il_count(&c_reader(&a2()), &c_writer(&a2())));
        assert!(fams.iter().all(|fam| is_binatural(&f, &g, fam)));
    }

    #[test]
    fn maybe_has_no_partner() {
        let u = Universe::new(3);
        let m = FinFunctor::from_container(&c_maybe(), u.clone()).unwrap();
        let id = FinFunctor::identity(u);
        assert!(interaction_families(&m, &id).unwrap().is_empty());
    }

    #[test]
    fn degeneracy_reports() {
        let u = Universe::new(3);
        let family = generated_family(u.clone()).unwrap();
        let maybe = FinFunctor::from_container(&c_maybe(), u.clone()).unwrap();
        let ops = nullary_operations(&maybe).unwrap();
        assert_eq!(ops.len(), 1);
        let r = check_nullary_degeneracy(&maybe, ops.first(), &family).unwrap();
        assert!(r.degenerate, "{r:?}");

        let reader = FinFunctor::from_container(&c_reader(&a2()), u.clone()).unwrap();
        assert!(nullary_operations(&reader).unwrap().is_empty());
        let r = check_nullary_degeneracy(&reader, None, &family).unwrap();
        assert!(!r.degenerate);
        assert!(r.witnesses.iter().any(|(n, _)| n == "container[1, 1]"));

        let up = FinFunctor::unordered_pair(u);
        let ops = commutative_operations(&up).unwrap();
        assert_eq!(ops.len(), 1);
        let r = check_commutative_degeneracy(&up, ops.first(), &family).unwrap();
        assert!(r.degenerate, "{r:?}");
    }
}
