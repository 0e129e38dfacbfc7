//! Stateful runners and their equivalent presentations: monad maps into
//! state, coalgebras of the dual, and costate families. Also the
//! correspondence between interaction laws and runner specs, update lenses,
//! and handlers for contrast.

use std::fmt;

use crate::container::{Container, ContainerMorphism};
use crate::dual::{dual, dual_shape_index, dual_shape_tuple};
use crate::error::{Error, Result};
use crate::finset::{lex_decode, lex_index, FinSet};
use crate::interaction::InteractionLaw;
use crate::monadic::{
    canonical_mcil, enumerate_trees, sweedler_squares, update_fn, Action, ContainerComonad, ContainerMonad, FreeTree,
    Machine, Mcil, TraceEvent,
};

/// A runner of a signature or monad on `C`: `θ(s, y) = (p, y')`.
#[derive(Clone, PartialEq, Eq)]
pub struct Runner {
    pub c: Container,
    pub state: FinSet,
    /// Indexed `[shape][state]`.
    pub theta: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for Runner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Runner on {} states {:?}", self.state.len(), self.theta)
    }
}

impl Runner {
    pub fn new(c: Container, state: FinSet, theta: Vec<Vec<(usize, usize)>>) -> Result<Runner> {
        if theta.len() != c.num_shapes() {
            return Err(Error::invalid("runner table must cover every shape"));
        }
        for (s, row) in theta.iter().enumerate() {
            if row.len() != state.len() || row.iter().any(|&(p, y)| p >= c.arity(s) || y >= state.len()) {
                return Err(Error::invalid(format!("runner row for shape `{}` is malformed", c.shapes.elem(s))));
            }
        }
        Ok(Runner { c, state, theta })
    }

    pub fn from_fn(c: &Container, state: &FinSet, rule: impl Fn(usize, usize) -> (usize, usize)) -> Result<Runner> {
        let theta = (0..c.num_shapes()).map(|s| (0..state.len()).map(|y| rule(s, y)).collect()).collect();
        Runner::new(c.clone(), state.clone(), theta)
    }

    /// Every runner of the signature on a state set of size `n`, in lexicographic order.
    pub fn enumerate(c: &Container, n: usize) -> Result<Vec<Runner>> {
        let state = FinSet::range("Y", n);
        let radices: Vec<usize> =
            (0..c.num_shapes()).flat_map(|s| std::iter::repeat_n(c.arity(s) * n, n)).collect();
        crate::finset::guard("runners", crate::finset::card_product(radices.iter().copied()))?;
        let mut out = Vec::new();
        for pick in crate::finset::lex_tuples(&radices) {
            let theta = (0..c.num_shapes())
                .map(|s| (0..n).map(|y| (pick[s * n + y] / n, pick[s * n + y] % n)).collect())
                .collect();
            out.push(Runner { c: c.clone(), state: state.clone(), theta });
        }
        Ok(out)
    }
}

/// Runs a tree from state `y0`, following `θ` at every node.
pub fn run<L: Clone>(r: &Runner, tree: &FreeTree<L>, y0: usize) -> Result<(L, usize, Vec<TraceEvent>)> {
    tree.check(&r.c)?;
    if y0 >= r.state.len() {
        return Err(Error::invalid("start state is out of range"));
    }
    let (mut node, mut y, mut trace) = (tree, y0, Vec::new());
    loop {
        match node {
            FreeTree::Leaf(x) => return Ok((x.clone(), y, trace)),
            FreeTree::Node(s, ks) => {
                let (p, y2) = r.theta[*s][y];
                trace.push(TraceEvent {
                    step: trace.len(),
                    tree_shape: *s,
                    machine_shape: y,
                    tree_position: p,
                    machine_position: y2,
                    state: y2,
                });
                node = &ks[p];
                y = y2;
            }
        }
    }
}

/// Checks the runner laws against a monad on the runner's container.
///
/// The unit shape must leave the state alone; a multiplied shape must run as
/// its two layers in sequence, reading the same composite position.
pub fn runner_check(r: &Runner, t: &ContainerMonad) -> Result<Option<String>> {
    if r.c != t.c {
        return Err(Error::mismatch("runner and monad containers differ"));
    }
    for y in 0..r.state.len() {
        if r.theta[t.unit][y].1 != y {
            return Ok(Some(format!("unit shape moves state {}", r.state.elem(y))));
        }
    }
    let comp = t.composite()?;
    for idx in 0..comp.num_shapes() {
        let (s, f) = comp.decode_shape(idx);
        let Some((s2, pi)) = t.mult_at(s, &f) else { continue };
        for y in 0..r.state.len() {
            let (ps, ys) = r.theta[s2][y];
            let (p1, y1) = r.theta[s][y];
            let (p2, y2) = r.theta[f[p1]][y1];
            if pi[ps] != (p1, p2) || ys != y2 {
                return Ok(Some(format!("multiplication law fails at shape ({s}, {f:?}), state {}", r.state.elem(y))));
            }
        }
    }
    Ok(None)
}

/// A monad map `T → St^Y` at universal carriers: for each shape, a table
/// `y ↦ p·|Y| + y'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateMonadMap {
    pub c: Container,
    pub state: FinSet,
    pub components: Vec<Vec<usize>>,
}

pub fn runner_to_state_map(r: &Runner) -> StateMonadMap {
    let n = r.state.len();
    let components = r.theta.iter().map(|row| row.iter().map(|&(p, y)| p * n + y).collect()).collect();
    StateMonadMap { c: r.c.clone(), state: r.state.clone(), components }
}

pub fn state_map_to_runner(m: &StateMonadMap) -> Result<Runner> {
    let n = m.state.len();
    let theta = m.components.iter().map(|row| row.iter().map(|&v| (v / n, v % n)).collect()).collect();
    Runner::new(m.c.clone(), m.state.clone(), theta)
}

/// The two monad-map squares: `ϑ ∘ η = η^Y` and `ϑ ∘ μ = μ^Y ∘ St^Y ϑ ∘ ϑT`.
pub fn state_map_check(m: &StateMonadMap, t: &ContainerMonad) -> Result<Option<String>> {
    let n = m.state.len();
    let comp = t.composite()?;
    for y in 0..n {
        if m.components[t.unit][y] % n != y {
            return Ok(Some("unit square fails".into()));
        }
    }
    for idx in 0..comp.num_shapes() {
        let (s, f) = comp.decode_shape(idx);
        let Some((s2, pi)) = t.mult_at(s, &f) else { continue };
        for y in 0..n {
            // The state-monad multiplication threads the state through both layers.
            let v1 = m.components[s][y];
            let v2 = m.components[f[v1 / n]][v1 % n];
            let direct = m.components[s2][y];
            if pi[direct / n] != (v1 / n, v2 / n) || direct % n != v2 % n {
                return Ok(Some(format!("multiplication square fails at shape ({s}, {f:?})")));
            }
        }
    }
    Ok(None)
}

/// A coalgebra `γ : Y → ⊥T Y`: per state, a dual shape and the next state for each `T`-shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCoalgebra {
    pub c: Container,
    pub state: FinSet,
    pub gamma: Vec<(usize, Vec<usize>)>,
}

pub fn runner_to_coalgebra(r: &Runner) -> Result<DualCoalgebra> {
    let n = r.c.num_shapes();
    let gamma = (0..r.state.len())
        .map(|y| {
            let q: Vec<usize> = (0..n).map(|s| r.theta[s][y].0).collect();
            (dual_shape_index(&r.c, &q), (0..n).map(|s| r.theta[s][y].1).collect())
        })
        .collect();
    Ok(DualCoalgebra { c: r.c.clone(), state: r.state.clone(), gamma })
}

pub fn coalgebra_to_runner(g: &DualCoalgebra) -> Result<Runner> {
    let tuples: Vec<Vec<usize>> = g.gamma.iter().map(|(q, _)| dual_shape_tuple(&g.c, *q)).collect();
    Runner::from_fn(&g.c, &g.state, |s, y| (tuples[y][s], g.gamma[y].1[s]))
}

/// The coalgebra as a machine of `⊥C` labelled by its own states.
pub fn coalgebra_machine(g: &DualCoalgebra, start: usize) -> Result<Machine> {
    let out = (0..g.state.len()).collect();
    Machine::new(dual(&g.c)?, out, g.gamma.clone(), start)
}

/// Both conditions on `γ`: `⊥η ∘ γ = e` and `⊥μ ∘ γ = m ∘ ⊥T γ ∘ γ`, evaluated pointwise
/// at each shape of `T ∘ T`.
pub fn coalgebra_check(g: &DualCoalgebra, t: &ContainerMonad) -> Result<Option<String>> {
    let comp = t.composite()?;
    for (y, (qi, next)) in g.gamma.iter().enumerate() {
        if next[t.unit] != y {
            return Ok(Some(format!("unit condition fails at state {}", g.state.elem(y))));
        }
        let q = dual_shape_tuple(&g.c, *qi);
        for idx in 0..comp.num_shapes() {
            let (s0, f) = comp.decode_shape(idx);
            let Some((r, pm)) = t.mult_at(s0, &f) else { continue };
            let direct = (pm[q[r]], next[r]);
            let p = q[s0];
            let y1 = next[s0];
            let q1 = dual_shape_tuple(&g.c, g.gamma[y1].0);
            let stepped = ((p, q1[f[p]]), g.gamma[y1].1[f[p]]);
            if direct != stepped {
                return Ok(Some(format!("multiplication condition fails at state {}", g.state.elem(y))));
            }
        }
    }
    Ok(None)
}

/// The costate comonad `(Y ⇒ Z) × Y` as a container with shapes and positions `Y`.
pub fn costate_comonad(state: &FinSet) -> Result<ContainerComonad> {
    let n = state.len();
    let c = Container::new(state.renamed("Y"), vec![state.renamed("Y"); n])?;
    ContainerComonad::from_rule(format!("costate({n})"), c, (0..n).collect(), |y| {
        (y, (0..n).collect(), (0..n).flat_map(|_| 0..n).collect())
    })
}

/// `ζ : Cost^Y → ⊥T` as a container morphism: the state picks a dual shape,
/// and each `T`-shape reads the function at the next state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostateFamily {
    pub state: FinSet,
    pub zeta: ContainerMorphism,
}

pub fn runner_to_costate_family(r: &Runner) -> Result<CostateFamily> {
    let g = runner_to_coalgebra(r)?;
    let cost = costate_comonad(&r.state)?;
    let zeta = ContainerMorphism::from_fn(&cost.c, &dual(&r.c)?, |y| g.gamma[y].clone())?;
    Ok(CostateFamily { state: r.state.clone(), zeta })
}

pub fn costate_family_to_runner(z: &CostateFamily, c: &Container) -> Result<Runner> {
    let g = DualCoalgebra { c: c.clone(), state: z.state.clone(), gamma: (0..z.state.len()).map(|y| (z.zeta.shape_map[y], z.zeta.pos_maps[y].clone())).collect() };
    coalgebra_to_runner(&g)
}

/// The unit and multiplication conditions on `ζ`.
pub fn costate_check(z: &CostateFamily, t: &ContainerMonad) -> Result<Option<String>> {
    sweedler_squares(t, &costate_comonad(&z.state)?, &z.zeta)
}

/// An update lens over an action of `B` on `A`: `lkp : Y → A`, `upd : Y × B → Y`,
/// running `θ(f, y) = let (b, x) = f (lkp y) in (x, upd (y, b))`.
pub fn update_lens_runner(action: &Action, state: &FinSet, lkp: &[usize], upd: &[Vec<usize>]) -> Result<Runner> {
    let t = crate::monadic::monad_update(action)?;
    let m = &action.monoid;
    if lkp.len() != state.len() || upd.len() != state.len() || upd.iter().any(|row| row.len() != m.len()) {
        return Err(Error::invalid("lens tables must cover every state"));
    }
    for y in 0..state.len() {
        for b in 0..m.len() {
            if lkp[upd[y][b]] != action.act(lkp[y], b) {
                return Err(Error::law(format!(
                    "lookup is not equivariant at state {} and update {}",
                    state.elem(y),
                    m.carrier.elem(b)
                )));
            }
        }
    }
    let r = Runner::from_fn(&t.c, state, |g, y| (lkp[y], upd[y][update_fn(action, g)[lkp[y]]]))?;
    if let Some(msg) = runner_check(&r, &t)? {
        return Err(Error::law(msg));
    }
    Ok(r)
}

/// A coalgebra `γ : Y → D Y` of a container comonad: per state, a shape and a
/// state for each of its positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComonadCoalgebra {
    pub state: FinSet,
    pub gamma: Vec<(usize, Vec<usize>)>,
}

pub fn comonad_coalgebra_check(d: &ContainerComonad, g: &ComonadCoalgebra) -> Result<Option<String>> {
    let comp = d.composite()?;
    for (y, (t, k)) in g.gamma.iter().enumerate() {
        if *t >= d.c.num_shapes() || k.len() != d.c.arity(*t) || k.iter().any(|&z| z >= g.state.len()) {
            return Err(Error::invalid(format!("coalgebra entry at state {y} is malformed")));
        }
        if k[d.counit[*t]] != y {
            return Ok(Some(format!("counit law fails at state {}", g.state.elem(y))));
        }
        let delta = d.delta(*t);
        for (p, &kp) in k.iter().enumerate() {
            let spread: Vec<usize> =
                (0..d.c.arity(delta.inner[p])).map(|q| k[delta.back[comp.pos_index(&delta.inner, p, q)]]).collect();
            if g.gamma[kp] != (delta.inner[p], spread) {
                return Ok(Some(format!("coassociativity fails at state {}", g.state.elem(y))));
            }
        }
    }
    Ok(None)
}

/// `Ψ(Y, γ)`: the runner `θ(s, y) = (p, k q)` where `γ y = (t, k)` and `(p, q) = ψ(s, t)`.
pub fn mcil_to_runner_spec(m: &Mcil) -> impl Fn(&ComonadCoalgebra) -> Result<Runner> + '_ {
    move |g| {
        if let Some(msg) = comonad_coalgebra_check(&m.d, g)? {
            return Err(Error::law(msg));
        }
        Runner::from_fn(&m.t.c, &g.state, |s, y| {
            let (t, k) = &g.gamma[y];
            let (p, q) = m.law.entry(s, *t);
            (p, k[q])
        })
    }
}

/// The cofree coalgebra `(D Y, δ_Y)` at `Y = P(t)`: its states are the elements of
/// `D Y`, and the universal element `(t, id)` is returned alongside.
pub fn cofree_coalgebra(d: &ContainerComonad, t: usize) -> Result<(ComonadCoalgebra, usize, Vec<(usize, Vec<usize>)>)> {
    let y = d.c.arity(t);
    let mut elems = Vec::new();
    for s in 0..d.c.num_shapes() {
        for k in crate::finset::lex_tuples(&vec![y; d.c.arity(s)]) {
            elems.push((s, k));
        }
    }
    crate::finset::guard("cofree coalgebra states", elems.len() as u128)?;
    let index = |e: &(usize, Vec<usize>)| elems.iter().position(|x| x == e).expect("element of D Y");
    let comp = d.composite()?;
    let gamma = elems
        .iter()
        .map(|(s, k)| {
            let delta = d.delta(*s);
            let next = (0..d.c.arity(delta.outer))
                .map(|p| {
                    let inner = delta.inner[p];
                    let payload = (0..d.c.arity(inner)).map(|q| k[delta.back[comp.pos_index(&delta.inner, p, q)]]).collect();
                    index(&(inner, payload))
                })
                .collect();
            (delta.outer, next)
        })
        .collect();
    let start = index(&(t, (0..y).collect()));
    let state = FinSet::range("DY", elems.len());
    Ok((ComonadCoalgebra { state, gamma }, start, elems))
}

/// Recovers `ψ` from a runner spec by running it on cofree coalgebras and
/// extracting with `ε`.
pub fn runner_spec_to_mcil(
    t: &ContainerMonad,
    d: &ContainerComonad,
    spec: &dyn Fn(&ComonadCoalgebra) -> Result<Runner>,
) -> Result<Mcil> {
    let mut table = vec![(0, 0); t.c.num_shapes() * d.c.num_shapes()];
    for dt in 0..d.c.num_shapes() {
        let (g, start, elems) = cofree_coalgebra(d, dt)?;
        let r = spec(&g)?;
        for s in 0..t.c.num_shapes() {
            let (p, y) = r.theta[s][start];
            let (shape, k) = &elems[y];
            table[s * d.c.num_shapes() + dt] = (p, k[d.counit[*shape]]);
        }
    }
    Mcil::new(t.clone(), d.clone(), InteractionLaw::new(t.c.clone(), d.c.clone(), table)?)
}

/// Runs a tree through a runner and through the free interaction against the
/// runner's coalgebra machine; returns both results.
pub fn run_both(r: &Runner, tree: &FreeTree<usize>, y0: usize) -> Result<((usize, usize), (usize, usize))> {
    let (x, y, _) = run(r, tree, y0)?;
    let m = coalgebra_machine(&runner_to_coalgebra(r)?, y0)?;
    let (x2, y2, _) = canonical_mcil(&r.c, tree, &m)?;
    Ok(((x, y), (x2, y2)))
}

/// An algebra of the free monad on a signature with a seed `X → Z`.
///
/// `algebra[s]` is indexed by the lexicographic code of `Z^{P(s)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handler {
    pub c: Container,
    pub carrier: usize,
    pub algebra: Vec<Vec<usize>>,
    pub seed: Vec<usize>,
}

impl Handler {
    pub fn new(c: Container, carrier: usize, algebra: Vec<Vec<usize>>, seed: Vec<usize>) -> Result<Handler> {
        let ok = algebra.len() == c.num_shapes()
            && algebra.iter().enumerate().all(|(s, a)| {
                crate::finset::card_pow(carrier, c.arity(s)) == a.len() as u128 && a.iter().all(|&z| z < carrier)
            })
            && seed.iter().all(|&z| z < carrier);
        if !ok {
            return Err(Error::invalid("handler tables do not fit the signature"));
        }
        Ok(Handler { c, carrier, algebra, seed })
    }

    pub fn from_fn(c: &Container, carrier: usize, seed: Vec<usize>, alg: impl Fn(usize, &[usize]) -> usize) -> Result<Handler> {
        let algebra = (0..c.num_shapes())
            .map(|s| crate::finset::lex_tuples(&vec![carrier; c.arity(s)]).map(|zs| alg(s, &zs)).collect())
            .collect();
        Handler::new(c.clone(), carrier, algebra, seed)
    }

    pub fn apply(&self, s: usize, zs: &[usize]) -> usize {
        self.algebra[s][lex_index(&vec![self.carrier; zs.len()], zs)]
    }
}

/// The fold: leaves go through the seed, nodes through the algebra.
pub fn handle(h: &Handler, tree: &FreeTree<usize>) -> usize {
    match tree {
        FreeTree::Leaf(x) => h.seed[*x],
        FreeTree::Node(s, ks) => {
            let zs: Vec<usize> = ks.iter().map(|k| handle(h, k)).collect();
            h.apply(*s, &zs)
        }
    }
}

/// The monad algebra on `Z` induced by the handler: fold a tree of `Z`s.
fn algebra_fold(h: &Handler, tree: &FreeTree<usize>) -> usize {
    match tree {
        FreeTree::Leaf(z) => *z,
        FreeTree::Node(s, ks) => {
            let zs: Vec<usize> = ks.iter().map(|k| algebra_fold(h, k)).collect();
            h.apply(*s, &zs)
        }
    }
}

/// Both triangles at the free algebra: `h ∘ η = f` and `h ∘ μ = a ∘ T h`,
/// over trees of trees whose flattening has depth at most `depth`.
pub fn handler_triangles(h: &Handler, depth: usize) -> Result<Option<String>> {
    let xs: Vec<usize> = (0..h.seed.len()).collect();
    for &x in &xs {
        if handle(h, &FreeTree::Leaf(x)) != h.seed[x] {
            return Ok(Some(format!("unit triangle fails at {x}")));
        }
    }
    for inner_depth in 0..=depth {
        let inner = enumerate_trees(&h.c, &xs, inner_depth)?;
        let outer = enumerate_trees(&h.c, &inner, depth - inner_depth)?;
        for t in &outer {
            let lhs = handle(h, &t.join());
            let rhs = algebra_fold(h, &t.map(&|k| handle(h, k)));
            if lhs != rhs {
                return Ok(Some("multiplication triangle fails".into()));
            }
        }
    }
    Ok(None)
}

/// Searches all maps from trees of depth at most `depth` to `Z` for those satisfying both
/// triangles on that set of trees. Returns the number found.
pub fn handler_uniqueness(h: &Handler, depth: usize) -> Result<usize> {
    let xs: Vec<usize> = (0..h.seed.len()).collect();
    let trees = enumerate_trees(&h.c, &xs, depth)?;
    crate::finset::guard("candidate folds", crate::finset::card_pow(h.carrier, trees.len()))?;
    let pos = |t: &FreeTree<usize>| trees.iter().position(|u| u == t).expect("enumerated tree");
    let mut found = 0;
    let total = crate::finset::card_pow(h.carrier, trees.len()) as usize;
    'cand: for code in 0..total {
        let cand = lex_decode(&vec![h.carrier; trees.len()], code);
        for (i, t) in trees.iter().enumerate() {
            let ok = match t {
                FreeTree::Leaf(x) => cand[i] == h.seed[*x],
                FreeTree::Node(s, ks) => {
                    let zs: Vec<usize> = ks.iter().map(|k| cand[pos(k)]).collect();
                    cand[i] == h.apply(*s, &zs)
                }
            };
            if !ok {
                continue 'cand;
            }
        }
        found += 1;
    }
    Ok(found)
}
