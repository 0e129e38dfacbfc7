//! Residual interaction: laws `F X × G Y → R (X × Y)` and runners
//! `T X × Y → R (X × Y)` for a small registry of residual monads `R`.
//!
//! R-values are stored over finite carriers of "atoms". In a law table the
//! atom of the position pair `(p, q)` is `p * |P_G(t)| + q`; in a runner
//! table the atom of `(p, y)` is `p * |Y| + y`.

use std::fmt;

use crate::container::{Composite, Container, ContainerElement};
use crate::error::{Error, Result};
use crate::finset::{card_pow, guard, lex_tuples, FinFn, FinSet};
use crate::interaction::InteractionLaw;
use crate::monadic::{ContainerComonad, ContainerMonad, FreeTree, TraceEvent};

/// A value of one of the registered residual monads over a carrier of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RVal {
    Val(usize),
    Raise(usize),
    Nothing,
    /// A finite multiset, kept sorted.
    Bag(Vec<usize>),
}

impl fmt::Display for RVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RVal::Val(x) => write!(f, "{x}"),
            RVal::Raise(e) => write!(f, "raise {e}"),
            RVal::Nothing => write!(f, "nothing"),
            RVal::Bag(xs) => write!(f, "{xs:?}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidualMonad {
    Identity,
    /// `X + E` with `|E|` exceptions.
    Exceptions(usize),
    Maybe,
    /// Finite multisets.
    FinNondet,
}

impl fmt::Display for ResidualMonad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualMonad::Identity => write!(f, "identity"),
            ResidualMonad::Exceptions(e) => write!(f, "exceptions({e})"),
            ResidualMonad::Maybe => write!(f, "maybe"),
            ResidualMonad::FinNondet => write!(f, "finnondet"),
        }
    }
}

impl ResidualMonad {
    pub fn unit(&self, x: usize) -> RVal {
        match self {
            ResidualMonad::FinNondet => RVal::Bag(vec![x]),
            _ => RVal::Val(x),
        }
    }

    pub fn bind(&self, v: &RVal, k: &mut impl FnMut(usize) -> RVal) -> RVal {
        match v {
            RVal::Val(x) => k(*x),
            RVal::Raise(e) => RVal::Raise(*e),
            RVal::Nothing => RVal::Nothing,
            RVal::Bag(xs) => {
                let mut out = Vec::new();
                for &x in xs {
                    match k(x) {
                        RVal::Bag(ys) => out.extend(ys),
                        other => panic!("bag bound into {other:?}"),
                    }
                }
                out.sort_unstable();
                RVal::Bag(out)
            }
        }
    }

    pub fn map(&self, v: &RVal, mut f: impl FnMut(usize) -> usize) -> RVal {
        self.bind(v, &mut |x| self.unit(f(x)))
    }

    /// Whether `v` is a value of this monad over `n` atoms.
    pub fn contains(&self, v: &RVal, n: usize) -> bool {
        match (self, v) {
            (_, RVal::Val(x)) => !matches!(self, ResidualMonad::FinNondet) && *x < n,
            (ResidualMonad::Exceptions(e), RVal::Raise(i)) => i < e,
            (ResidualMonad::Maybe, RVal::Nothing) => true,
            (ResidualMonad::FinNondet, RVal::Bag(xs)) => xs.windows(2).all(|w| w[0] <= w[1]) && xs.iter().all(|&x| x < n),
            _ => false,
        }
    }

    /// All values over `n` atoms; multisets are limited to `max_bag` elements.
    pub fn enumerate(&self, n: usize, max_bag: usize) -> Vec<RVal> {
        let vals = (0..n).map(RVal::Val);
        match self {
            ResidualMonad::Identity => vals.collect(),
            ResidualMonad::Exceptions(e) => vals.chain((0..*e).map(RVal::Raise)).collect(),
            ResidualMonad::Maybe => vals.chain([RVal::Nothing]).collect(),
            ResidualMonad::FinNondet => {
                let mut out = Vec::new();
                for size in 0..=max_bag {
                    for xs in lex_tuples(&vec![n; size]) {
                        if xs.windows(2).all(|w| w[0] <= w[1]) {
                            out.push(RVal::Bag(xs));
                        }
                    }
                }
                out
            }
        }
    }

    /// Unit and associativity of bind, over carriers of size at most `max_carrier`.
    pub fn check_laws(&self, max_carrier: usize, max_bag: usize) -> Result<Option<String>> {
        for n in 0..=max_carrier {
            let vals = self.enumerate(n, max_bag);
            let ks: Vec<Vec<usize>> = lex_tuples(&vec![vals.len(); n]).collect();
            guard("residual law instances", (vals.len() * ks.len() * ks.len()) as u128)?;
            for x in 0..n {
                for k in &ks {
                    if self.bind(&self.unit(x), &mut |a| vals[k[a]].clone()) != vals[k[x]] {
                        return Ok(Some(format!("{self}: left unit fails")));
                    }
                }
            }
            for v in &vals {
                if self.bind(v, &mut |a| self.unit(a)) != *v {
                    return Ok(Some(format!("{self}: right unit fails")));
                }
                for k in &ks {
                    for k2 in &ks {
                        let lhs = self.bind(&self.bind(v, &mut |a| vals[k[a]].clone()), &mut |b| vals[k2[b]].clone());
                        let rhs = self.bind(v, &mut |a| self.bind(&vals[k[a]], &mut |b| vals[k2[b]].clone()));
                        if lhs != rhs {
                            return Ok(Some(format!("{self}: associativity fails")));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// A residual law as a table of R-values over position pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualLaw {
    pub f: Container,
    pub g: Container,
    pub r: ResidualMonad,
    /// Indexed `s * |S_G| + t`.
    pub table: Vec<RVal>,
}

impl ResidualLaw {
    pub fn new(f: Container, g: Container, r: ResidualMonad, table: Vec<RVal>) -> Result<Self> {
        if table.len() != f.num_shapes() * g.num_shapes() {
            return Err(Error::invalid("residual table is not total"));
        }
        for s in 0..f.num_shapes() {
            for t in 0..g.num_shapes() {
                if !r.contains(&table[s * g.num_shapes() + t], f.arity(s) * g.arity(t)) {
                    return Err(Error::invalid(format!("entry at ({s}, {t}) is not an {r} value over position pairs")));
                }
            }
        }
        Ok(ResidualLaw { f, g, r, table })
    }

    pub fn from_fn(f: &Container, g: &Container, r: ResidualMonad, rule: impl Fn(usize, usize) -> RVal) -> Result<Self> {
        let table = (0..f.num_shapes()).flat_map(|s| (0..g.num_shapes()).map(move |t| (s, t))).map(|(s, t)| rule(s, t)).collect();
        ResidualLaw::new(f.clone(), g.clone(), r, table)
    }

    pub fn entry(&self, s: usize, t: usize) -> &RVal {
        &self.table[s * self.g.num_shapes() + t]
    }

    /// The law seen with `R`: every entry becomes a pure value.
    pub fn embed(il: &InteractionLaw, r: ResidualMonad) -> Result<Self> {
        ResidualLaw::from_fn(&il.f, &il.g, r, |s, t| {
            let (p, q) = il.entry(s, t);
            r.unit(p * il.g.arity(t) + q)
        })
    }

    /// The plain law, if every entry is pure.
    pub fn project(&self) -> Option<InteractionLaw> {
        let mut table = Vec::with_capacity(self.table.len());
        for s in 0..self.f.num_shapes() {
            for t in 0..self.g.num_shapes() {
                let atom = match self.entry(s, t) {
                    RVal::Val(a) => *a,
                    RVal::Bag(xs) if xs.len() == 1 => xs[0],
                    _ => return None,
                };
                table.push((atom / self.g.arity(t), atom % self.g.arity(t)));
            }
        }
        InteractionLaw::new(self.f.clone(), self.g.clone(), table).ok()
    }
}

/// `φ(eF, eG)` as an R-value over `X × Y`, with atom `x * |Y| + y`.
pub fn residual_apply(law: &ResidualLaw, ef: &ContainerElement, eg: &ContainerElement) -> Result<RVal> {
    law.f.check_element(ef)?;
    law.g.check_element(eg)?;
    let (gq, ny) = (law.g.arity(eg.shape), eg.carrier().len());
    Ok(law.r.map(law.entry(ef.shape, eg.shape), |a| ef.payload.apply(a / gq) * ny + eg.payload.apply(a % gq)))
}

/// `(F∘J, G∘K)`: the outer law runs first, and its result is bound into the inner law.
pub fn residual_tensor(outer: &ResidualLaw, inner: &ResidualLaw) -> Result<ResidualLaw> {
    if outer.r != inner.r {
        return Err(Error::mismatch("residual monads differ"));
    }
    let r = outer.r;
    let fj = Composite::new(&outer.f, &inner.f)?;
    let gk = Composite::new(&outer.g, &inner.g)?;
    let (fjc, gkc) = (fj.container()?, gk.container()?);
    ResidualLaw::from_fn(&fjc, &gkc, r, |a, b| {
        let (s, f) = fj.decode_shape(a);
        let (t, g) = gk.decode_shape(b);
        let width = gk.arity(&g);
        r.bind(outer.entry(s, t), &mut |atom| {
            let (p, q) = (atom / outer.g.arity(t), atom % outer.g.arity(t));
            let gq = inner.g.arity(g[q]);
            r.map(inner.entry(f[p], g[q]), |a2| fj.pos_index(&f, p, a2 / gq) * width + gk.pos_index(&g, q, a2 % gq))
        })
    })
}

pub fn residual_identity(r: ResidualMonad) -> ResidualLaw {
    let id = crate::container::c_id();
    ResidualLaw::new(id.clone(), id, r, vec![r.unit(0)]).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualReport {
    pub unit_checked: usize,
    pub mult_checked: usize,
    pub failure: Option<String>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Both residual squares at universal carriers.
pub fn residual_mcil_check(t: &ContainerMonad, d: &ContainerComonad, law: &ResidualLaw) -> Result<ResidualReport> {
    if law.f != t.c || law.g != d.c {
        return Err(Error::mismatch("law containers differ from the monad and comonad"));
    }
    let r = law.r;
    let mut rep = ResidualReport { unit_checked: 0, mult_checked: 0, failure: None };
    for dt in 0..d.c.num_shapes() {
        rep.unit_checked += 1;
        let q = d.c.arity(dt);
        if r.map(law.entry(t.unit, dt), |a| a % q) != r.unit(d.counit[dt]) {
            rep.failure = Some(format!("unit square fails at comonad shape {dt}"));
            return Ok(rep);
        }
    }
    let tcomp = t.composite()?;
    let dcomp = d.composite()?;
    for idx in 0..tcomp.num_shapes() {
        let (s, f) = tcomp.decode_shape(idx);
        let Some((s2, pi)) = t.mult_at(s, &f) else { continue };
        for dt in 0..d.c.num_shapes() {
            rep.mult_checked += 1;
            let w = d.c.arity(dt);
            let lhs = r.map(law.entry(s2, dt), |a| {
                let (p1, p2) = pi[a / w];
                tcomp.pos_index(&f, p1, p2) * w + a % w
            });
            let delta = d.delta(dt);
            let wo = d.c.arity(delta.outer);
            let rhs = r.bind(law.entry(s, delta.outer), &mut |a| {
                let (p1, q1) = (a / wo, a % wo);
                let wi = d.c.arity(delta.inner[q1]);
                r.map(law.entry(f[p1], delta.inner[q1]), |a2| {
                    tcomp.pos_index(&f, p1, a2 / wi) * w + delta.back[dcomp.pos_index(&delta.inner, q1, a2 % wi)]
                })
            });
            if lhs != rhs {
                rep.failure = Some(format!("multiplication square fails at monad shape ({s}, {f:?}), comonad shape {dt}"));
                return Ok(rep);
            }
        }
    }
    Ok(rep)
}

/// `ψ(f, (a, y)) = case f a of inl x ↦ (x, y) | inr e ↦ raise e` for `T X = A ⇒ (X + E)`, `D Y = A × Y`.
pub fn exceptions_example(a: &FinSet, e: &FinSet) -> Result<(ContainerMonad, ContainerComonad, ResidualLaw)> {
    let t = crate::monadic::monad_exceptions_reader(a, e)?;
    let d = crate::monadic::comonad_writer(a)?;
    let radix = vec![e.len() + 1; a.len()];
    let law = ResidualLaw::from_fn(&t.c, &d.c, ResidualMonad::Exceptions(e.len()), |s, x| {
        let g = crate::finset::lex_decode(&radix, s);
        if g[x] == 0 {
            RVal::Val((0..x).filter(|&y| g[y] == 0).count())
        } else {
            RVal::Raise(g[x] - 1)
        }
    })?;
    Ok((t, d, law))
}

/// Every residual law between `F` and `G`, multisets limited to `max_bag` elements.
pub fn residual_enumerate(f: &Container, g: &Container, r: ResidualMonad, max_bag: usize) -> Result<Vec<ResidualLaw>> {
    let mut choices = Vec::new();
    for s in 0..f.num_shapes() {
        for t in 0..g.num_shapes() {
            choices.push(r.enumerate(f.arity(s) * g.arity(t), max_bag));
        }
    }
    let radices: Vec<usize> = choices.iter().map(Vec::len).collect();
    guard("residual laws", crate::finset::card_product(radices.iter().copied()))?;
    Ok(lex_tuples(&radices)
        .map(|pick| ResidualLaw {
            f: f.clone(),
            g: g.clone(),
            r,
            table: pick.iter().enumerate().map(|(i, &c)| choices[i][c].clone()).collect(),
        })
        .collect())
}

fn all_elements(c: &Container, n: usize) -> Result<Vec<ContainerElement>> {
    c.elements(&FinSet::range("X", n))
}

/// The pure-map naturality square `R(f × g) ∘ φ = φ ∘ (F f × G g)` for all
/// carriers and functions up to `max_carrier`. Returns the number of instances.
pub fn pure_naturality_check(law: &ResidualLaw, max_carrier: usize) -> Result<(usize, Option<String>)> {
    let mut checked = 0;
    for nx in 1..=max_carrier {
        for ny in 1..=max_carrier {
            let efs = all_elements(&law.f, nx)?;
            let egs = all_elements(&law.g, ny)?;
            for mx in 1..=max_carrier {
                for my in 1..=max_carrier {
                    let fs: Vec<Vec<usize>> = lex_tuples(&vec![mx; nx]).collect();
                    let gs: Vec<Vec<usize>> = lex_tuples(&vec![my; ny]).collect();
                    guard("naturality instances", (efs.len() * egs.len() * fs.len() * gs.len()) as u128)?;
                    let (xs, ys) = (FinSet::range("X", mx), FinSet::range("Y", my));
                    for ef in &efs {
                        for eg in &egs {
                            let base = residual_apply(law, ef, eg)?;
                            for f in &fs {
                                let fx = FinFn { dom: ef.carrier().clone(), cod: xs.clone(), table: f.clone() };
                                let ef2 = law.f.fmap(&fx, ef)?;
                                for g in &gs {
                                    let gy = FinFn { dom: eg.carrier().clone(), cod: ys.clone(), table: g.clone() };
                                    let eg2 = law.g.fmap(&gy, eg)?;
                                    checked += 1;
                                    let lhs = law.r.map(&base, |a| f[a / ny] * my + g[a % ny]);
                                    if lhs != residual_apply(law, &ef2, &eg2)? {
                                        return Ok((checked, Some(format!("naturality fails for {ef:?}, {eg:?}"))));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok((checked, None))
}

/// Sequences the positions of an element of `C (R X)` in order: `C R → R C`.
fn sequence(r: ResidualMonad, vals: &[RVal], width: usize) -> RVal {
    // The result atom is the lexicographic code of the chosen payload over `width` values.
    fn go(r: ResidualMonad, vals: &[RVal], acc: usize, width: usize) -> RVal {
        match vals.split_first() {
            None => r.unit(acc),
            Some((v, rest)) => r.bind(v, &mut |x| go(r, rest, acc * width + x, width)),
        }
    }
    go(r, vals, 0, width)
}

/// Both sides of the Kleisli naturality square for Kleisli maps `k : X → R X'`
/// and `l : Y → R Y'`, at one pair of elements. Atoms of the result are `x' * |Y'| + y'`.
pub fn kleisli_square(
    law: &ResidualLaw,
    ef: &ContainerElement,
    eg: &ContainerElement,
    k: &[RVal],
    l: &[RVal],
    (mx, my): (usize, usize),
) -> Result<(RVal, RVal)> {
    let r = law.r;
    // φ first, then R(k × l), then the monoidal map and μ.
    let base = residual_apply(law, ef, eg)?;
    let ny = eg.carrier().len();
    let rhs = r.bind(&base, &mut |a| r.bind(&k[a / ny], &mut |x| r.map(&l[a % ny], |y| x * my + y)));
    // F k × G l, distribute, pair, then φ.
    let fk: Vec<RVal> = ef.payload.table.iter().map(|&x| k[x].clone()).collect();
    let gl: Vec<RVal> = eg.payload.table.iter().map(|&y| l[y].clone()).collect();
    let (xs, ys) = (FinSet::range("X", mx), FinSet::range("Y", my));
    let (pf, pg) = (law.f.arity(ef.shape), law.g.arity(eg.shape));
    let decode = |code: usize, width: usize, len: usize| crate::finset::lex_decode(&vec![width; len], code);
    let lhs = r.bind(&sequence(r, &fk, mx), &mut |cf| {
        r.bind(&sequence(r, &gl, my), &mut |cg| {
            let ef2 = ContainerElement { shape: ef.shape, payload: FinFn { dom: ef.payload.dom.clone(), cod: xs.clone(), table: decode(cf, mx, pf) } };
            let eg2 = ContainerElement { shape: eg.shape, payload: FinFn { dom: eg.payload.dom.clone(), cod: ys.clone(), table: decode(cg, my, pg) } };
            residual_apply(law, &ef2, &eg2).expect("well-formed elements")
        })
    });
    Ok((lhs, rhs))
}

/// A nondeterministic law on `(A ⇒ −, Id)` reading either argument, and a
/// duplicating Kleisli map: the Kleisli square fails although the pure one holds.
pub fn kleisli_counterexample() -> Result<(ResidualLaw, RVal, RVal)> {
    let f = crate::container::c_reader(&FinSet::range("A", 2));
    let g = crate::container::c_id();
    let law = ResidualLaw::new(f.clone(), g, ResidualMonad::FinNondet, vec![RVal::Bag(vec![0, 1])])?;
    let ef = ContainerElement { shape: 0, payload: FinFn { dom: f.pos(0).clone(), cod: FinSet::range("X", 2), table: vec![0, 1] } };
    let eg = ContainerElement { shape: 0, payload: FinFn::identity(&FinSet::unit()) };
    let k = vec![RVal::Bag(vec![0, 0]), RVal::Bag(vec![1, 1])];
    let l = vec![RVal::Bag(vec![0])];
    let (lhs, rhs) = kleisli_square(&law, &ef, &eg, &k, &l, (2, 1))?;
    Ok((law, lhs, rhs))
}

/// A residual runner: `θ(s, y)` is an R-value over `P(s) × Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualRunner {
    pub c: Container,
    pub r: ResidualMonad,
    pub state: FinSet,
    /// Indexed `[shape][state]`, atoms `p * |Y| + y'`.
    pub theta: Vec<Vec<RVal>>,
}

impl ResidualRunner {
    pub fn new(c: Container, r: ResidualMonad, state: FinSet, theta: Vec<Vec<RVal>>) -> Result<Self> {
        let n = state.len();
        if theta.len() != c.num_shapes()
            || theta.iter().enumerate().any(|(s, row)| row.len() != n || row.iter().any(|v| !r.contains(v, c.arity(s) * n)))
        {
            return Err(Error::invalid("residual runner table does not fit"));
        }
        Ok(ResidualRunner { c, r, state, theta })
    }
}

/// Runs a tree with leaves in `0..` from `y0`; atoms of the result are `x * |Y| + y`.
pub fn residual_run(rr: &ResidualRunner, tree: &FreeTree<usize>, y0: usize) -> Result<RVal> {
    tree.check(&rr.c)?;
    fn go(rr: &ResidualRunner, t: &FreeTree<usize>, y: usize) -> RVal {
        let n = rr.state.len();
        match t {
            FreeTree::Leaf(x) => rr.r.unit(x * n + y),
            FreeTree::Node(s, ks) => rr.r.bind(&rr.theta[*s][y], &mut |a| go(rr, &ks[a / n], a % n)),
        }
    }
    Ok(go(rr, tree, y0))
}

/// The single path of a run when `R` does not branch: one event per step taken,
/// ending at a leaf or at the first raised or missing value. `None` for multisets.
pub fn residual_trace(rr: &ResidualRunner, tree: &FreeTree<usize>, y0: usize) -> Result<Option<Vec<TraceEvent>>> {
    tree.check(&rr.c)?;
    if matches!(rr.r, ResidualMonad::FinNondet) {
        return Ok(None);
    }
    let n = rr.state.len();
    let (mut node, mut y, mut trace) = (tree, y0, Vec::new());
    while let FreeTree::Node(s, ks) = node {
        let RVal::Val(a) = rr.theta[*s][y] else { break };
        let (p, y2) = (a / n, a % n);
        trace.push(TraceEvent { step: trace.len(), tree_shape: *s, machine_shape: y, tree_position: p, machine_position: y2, state: y2 });
        node = &ks[p];
        y = y2;
    }
    Ok(Some(trace))
}

pub fn residual_runner_check(rr: &ResidualRunner, t: &ContainerMonad) -> Result<Option<String>> {
    if rr.c != t.c {
        return Err(Error::mismatch("runner and monad containers differ"));
    }
    let (r, n) = (rr.r, rr.state.len());
    for y in 0..n {
        if r.map(&rr.theta[t.unit][y], |a| a % n) != r.unit(y) {
            return Ok(Some(format!("unit law fails at state {}", rr.state.elem(y))));
        }
    }
    let comp = t.composite()?;
    for idx in 0..comp.num_shapes() {
        let (s, f) = comp.decode_shape(idx);
        let Some((s2, pi)) = t.mult_at(s, &f) else { continue };
        for y in 0..n {
            let lhs = r.map(&rr.theta[s2][y], |a| {
                let (p1, p2) = pi[a / n];
                comp.pos_index(&f, p1, p2) * n + a % n
            });
            let rhs = r.bind(&rr.theta[s][y], &mut |a| {
                let p1 = a / n;
                r.map(&rr.theta[f[p1]][a % n], |a2| comp.pos_index(&f, p1, a2 / n) * n + a2 % n)
            });
            if lhs != rhs {
                return Ok(Some(format!("multiplication law fails at shape ({s}, {f:?}), state {}", rr.state.elem(y))));
            }
        }
    }
    Ok(None)
}

/// A monad map `T → St^{R,Y}` at universal carriers: per state, per shape, the R-value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualStateMap {
    pub c: Container,
    pub r: ResidualMonad,
    pub state: FinSet,
    /// Indexed `[state][shape]`: the state-monad element `y ↦ ϑ(s)(y)`.
    pub components: Vec<Vec<RVal>>,
}

pub fn residual_runner_to_state_map(rr: &ResidualRunner) -> ResidualStateMap {
    let components = (0..rr.state.len()).map(|y| (0..rr.c.num_shapes()).map(|s| rr.theta[s][y].clone()).collect()).collect();
    ResidualStateMap { c: rr.c.clone(), r: rr.r, state: rr.state.clone(), components }
}

pub fn residual_state_map_to_runner(m: &ResidualStateMap) -> Result<ResidualRunner> {
    let theta = (0..m.c.num_shapes()).map(|s| m.components.iter().map(|row| row[s].clone()).collect()).collect();
    ResidualRunner::new(m.c.clone(), m.r, m.state.clone(), theta)
}

/// The embedding of a plain runner table with `R`.
pub fn residual_runner_embed(r: ResidualMonad, runner: &crate::runners::Runner) -> ResidualRunner {
    let n = runner.state.len();
    let theta = runner.theta.iter().map(|row| row.iter().map(|&(p, y)| r.unit(p * n + y)).collect()).collect();
    ResidualRunner { c: runner.c.clone(), r, state: runner.state.clone(), theta }
}

/// Counts instances for the size guard before enumerating runners.
pub fn residual_runner_count(c: &Container, r: ResidualMonad, n: usize, max_bag: usize) -> u128 {
    (0..c.num_shapes()).fold(1u128, |acc, s| acc.saturating_mul(card_pow(r.enumerate(c.arity(s) * n, max_bag).len(), n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{c_maybe, c_reader, c_writer};
    use crate::monadic::{mcil_reader, mcil_update, Action};

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn registered_monads_pass_laws() {
        for r in [ResidualMonad::Identity, ResidualMonad::Exceptions(2), ResidualMonad::Maybe] {
            assert_eq!(r.check_laws(3, 0).unwrap(), None, "{r}");
        }
        assert_eq!(ResidualMonad::FinNondet.check_laws(2, 2).unwrap(), None);
    }

    #[test]
    fn exceptions_example_passes() {
        let (t, d, law) = exceptions_example(&a2(), &FinSet::range("E", 2)).unwrap();
        let rep = residual_mcil_check(&t, &d, &law).unwrap();
        assert!(rep.passed(), "{:?}", rep.failure);
        let mut bad = law.clone();
        let i = bad.table.iter().position(|v| matches!(v, RVal::Raise(_))).unwrap();
        bad.table[i] = RVal::Raise(1 - match bad.table[i] { RVal::Raise(e) => e, _ => 0 });
        assert!(!residual_mcil_check(&t, &d, &bad).unwrap().passed());
    }

    #[test]
    fn identity_embedding_is_exact() {
        let m = mcil_update(&Action::rotation(&a2())).unwrap();
        let e = ResidualLaw::embed(&m.law, ResidualMonad::Identity).unwrap();
        assert!(residual_mcil_check(&m.t, &m.d, &e).unwrap().passed());
        assert_eq!(e.project().unwrap(), m.law);
        let r = mcil_reader(&a2()).unwrap();
        assert!(residual_mcil_check(&r.t, &r.d, &ResidualLaw::embed(&r.law, ResidualMonad::Maybe).unwrap()).unwrap().passed());
    }

    #[test]
    fn tensor_embeds_plain_tensor() {
        let r = mcil_reader(&a2()).unwrap();
        let e = ResidualLaw::embed(&r.law, ResidualMonad::Maybe).unwrap();
        let t = residual_tensor(&e, &e).unwrap();
        let plain = crate::interaction::il_tensor(&r.law, &r.law).unwrap();
        assert_eq!(t.project().unwrap(), plain);
        let u = residual_identity(ResidualMonad::Maybe);
        assert_eq!(residual_tensor(&u, &e).unwrap().project().unwrap().table, e.project().unwrap().table);
    }

    #[test]
    fn inner_error_propagates() {
        let (_, _, law) = exceptions_example(&a2(), &FinSet::range("E", 2)).unwrap();
        let t = residual_tensor(&law, &law).unwrap();
        // Outer returns a value at a0, inner raises e1 at a0.
        let fj = Composite::new(&law.f, &law.f).unwrap();
        let gk = Composite::new(&law.g, &law.g).unwrap();
        let outer = crate::finset::lex_index(&[3, 3], &[0, 0]);
        let inner = crate::finset::lex_index(&[3, 3], &[2, 0]);
        assert_eq!(*t.entry(fj.shape_index(outer, &[inner, inner]), gk.shape_index(0, &[0])), RVal::Raise(1));
    }

    #[test]
    fn maybe_escapes_degeneracy() {
        let laws = residual_enumerate(&c_maybe(), &c_writer(&a2()), ResidualMonad::Maybe, 0).unwrap();
        assert!(!laws.is_empty());
        assert!(crate::interaction::il_enumerate(&c_maybe(), &c_writer(&a2())).unwrap().is_empty());
    }

    #[test]
    fn naturality_and_kleisli_gap() {
        let f = c_reader(&a2());
        for law in residual_enumerate(&f, &crate::container::c_id(), ResidualMonad::FinNondet, 2).unwrap().iter().step_by(3) {
            assert_eq!(pure_naturality_check(law, 2).unwrap().1, None);
        }
        let (law, lhs, rhs) = kleisli_counterexample().unwrap();
        assert_eq!(pure_naturality_check(&law, 3).unwrap().1, None);
        match (lhs, rhs) {
            (RVal::Bag(l), RVal::Bag(r)) => assert_eq!((l.len(), r.len()), (8, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nondeterministic_run_branches() {
        let c = c_reader(&a2());
        let rr = ResidualRunner::new(c, ResidualMonad::FinNondet, FinSet::range("Y", 1), vec![vec![RVal::Bag(vec![0, 1])]]).unwrap();
        let leafy = FreeTree::Node(0, vec![FreeTree::Leaf(0), FreeTree::Leaf(1)]);
        let tree = FreeTree::Node(0, vec![leafy.clone(), leafy]);
        assert_eq!(residual_run(&rr, &tree, 0).unwrap(), RVal::Bag(vec![0, 0, 1, 1]));
        assert_eq!(residual_run(&rr, &FreeTree::Leaf(1), 0).unwrap(), RVal::Bag(vec![1]));
    }

    #[test]
    fn runner_round_trip() {
        let (t, _, _) = exceptions_example(&a2(), &FinSet::range("E", 2)).unwrap();
        let radix = [3, 3];
        // State is the current argument; errors are raised, values read at that argument.
        let rr = ResidualRunner::new(
            t.c.clone(),
            ResidualMonad::Exceptions(2),
            a2(),
            (0..t.c.num_shapes())
                .map(|s| {
                    let g = crate::finset::lex_decode(&radix, s);
                    (0..2).map(|y| if g[y] == 0 { RVal::Val((0..y).filter(|&z| g[z] == 0).count() * 2 + y) } else { RVal::Raise(g[y] - 1) }).collect()
                })
                .collect(),
        )
        .unwrap();
        assert_eq!(residual_runner_check(&rr, &t).unwrap(), None);
        assert_eq!(residual_state_map_to_runner(&residual_runner_to_state_map(&rr)).unwrap(), rr);
    }
}
