use crate::container::Container;
use crate::error::{Error, Result};
use crate::finset::{guard, lex_tuples};

/// An operation tree: leaves carry values, nodes carry a shape and one child per position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FreeTree<L = usize> {
    Leaf(L),
    Node(usize, Vec<FreeTree<L>>),
}

impl<L: Clone> FreeTree<L> {
    pub fn depth(&self) -> usize {
        match self {
            FreeTree::Leaf(_) => 0,
            FreeTree::Node(_, ks) => 1 + ks.iter().map(FreeTree::depth).max().unwrap_or(0),
        }
    }

    /// Checks that every node has as many children as its shape has positions.
    pub fn check(&self, c: &Container) -> Result<()> {
        match self {
            FreeTree::Leaf(_) => Ok(()),
            FreeTree::Node(s, ks) => {
                if *s >= c.num_shapes() || ks.len() != c.arity(*s) {
                    return Err(Error::mismatch(format!("tree node {s} does not fit the signature")));
                }
                ks.iter().try_for_each(|k| k.check(c))
            }
        }
    }

    /// Grafting: replace every leaf `x` by `k(x)`.
    pub fn bind<M: Clone>(&self, k: &impl Fn(&L) -> FreeTree<M>) -> FreeTree<M> {
        match self {
            FreeTree::Leaf(x) => k(x),
            FreeTree::Node(s, ks) => FreeTree::Node(*s, ks.iter().map(|t| t.bind(k)).collect()),
        }
    }

    pub fn map<M: Clone>(&self, f: &impl Fn(&L) -> M) -> FreeTree<M> {
        self.bind(&|x| FreeTree::Leaf(f(x)))
    }

    pub fn leaves(&self) -> Vec<&L> {
        match self {
            FreeTree::Leaf(x) => vec![x],
            FreeTree::Node(_, ks) => ks.iter().flat_map(|k| k.leaves()).collect(),
        }
    }
}

impl<L: Clone> FreeTree<FreeTree<L>> {
    pub fn join(&self) -> FreeTree<L> {
        self.bind(&|t: &FreeTree<L>| t.clone())
    }
}

/// All trees over `c` of depth at most `depth` with leaves drawn from `leaves`.
///
/// Order: leaves first, then nodes by shape with children in lexicographic order.
pub fn enumerate_trees<L: Clone>(c: &Container, leaves: &[L], depth: usize) -> Result<Vec<FreeTree<L>>> {
    let mut all: Vec<FreeTree<L>> = leaves.iter().cloned().map(FreeTree::Leaf).collect();
    for _ in 0..depth {
        let prev = all;
        let mut count = leaves.len() as u128;
        for s in 0..c.num_shapes() {
            count = count.saturating_add((prev.len() as u128).saturating_pow(c.arity(s) as u32));
        }
        guard("trees", count)?;
        all = leaves.iter().cloned().map(FreeTree::Leaf).collect();
        for s in 0..c.num_shapes() {
            for pick in lex_tuples(&vec![prev.len(); c.arity(s)]) {
                all.push(FreeTree::Node(s, pick.iter().map(|&i| prev[i].clone()).collect()));
            }
        }
    }
    Ok(all)
}

/// A finite-state machine of a container `G`: each state has a label and a
/// step `(shape t, successor state per position of t)`.
///
/// A machine with a current state stands for an element of the cofree
/// comonad on `G`; equality is observational up to a depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine<L = usize> {
    pub g: Container,
    pub out: Vec<L>,
    pub step: Vec<(usize, Vec<usize>)>,
    pub current: usize,
}

/// The depth-bounded unfolding of a machine.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Observation<L> {
    pub label: L,
    pub next: Option<(usize, Vec<Observation<L>>)>,
}

/// One interaction step: the tree's shape, the machine's shape, the positions each side
/// supplied, and the machine state reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: usize,
    pub tree_shape: usize,
    pub machine_shape: usize,
    pub tree_position: usize,
    pub machine_position: usize,
    pub state: usize,
}

impl<L: Clone> Machine<L> {
    pub fn new(g: Container, out: Vec<L>, step: Vec<(usize, Vec<usize>)>, current: usize) -> Result<Self> {
        let n = out.len();
        if step.len() != n || current >= n.max(1) {
            return Err(Error::invalid("machine tables must cover every state"));
        }
        for (z, (t, next)) in step.iter().enumerate() {
            if *t >= g.num_shapes() || next.len() != g.arity(*t) || next.iter().any(|&w| w >= n) {
                return Err(Error::invalid(format!("step of state {z} does not fit the container")));
            }
        }
        Ok(Machine { g, out, step, current })
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn extract(&self) -> &L {
        &self.out[self.current]
    }

    pub fn shape(&self) -> usize {
        self.step[self.current].0
    }

    /// The same machine started at `z`.
    pub fn at(&self, z: usize) -> Self {
        Machine { current: z, ..self.clone() }
    }

    /// The machine after answering through position `q` of its current shape.
    pub fn advance(&self, q: usize) -> Self {
        self.at(self.step[self.current].1[q])
    }

    pub fn map<M: Clone>(&self, f: impl Fn(&L) -> M) -> Machine<M> {
        Machine { g: self.g.clone(), out: self.out.iter().map(f).collect(), step: self.step.clone(), current: self.current }
    }

    /// Every state relabelled by the machine started there.
    pub fn duplicate(&self) -> Machine<Machine<L>> {
        Machine {
            g: self.g.clone(),
            out: (0..self.num_states()).map(|z| self.at(z)).collect(),
            step: self.step.clone(),
            current: self.current,
        }
    }

    pub fn observe(&self, depth: usize) -> Observation<L> {
        let label = self.extract().clone();
        let next = (depth > 0).then(|| {
            let (t, succ) = &self.step[self.current];
            (*t, succ.iter().map(|&z| self.at(z).observe(depth - 1)).collect())
        });
        Observation { label, next }
    }
}

impl Machine<usize> {
    /// All machines with `1..=max_states` states and labels below `labels`.
    pub fn enumerate(g: &Container, labels: usize, max_states: usize) -> Result<Vec<Machine>> {
        let mut out = Vec::new();
        for n in 1..=max_states {
            let per_state: Vec<(usize, Vec<usize>)> = (0..g.num_shapes())
                .flat_map(|t| lex_tuples(&vec![n; g.arity(t)]).map(move |next| (t, next)))
                .collect();
            let count = (per_state.len() as u128).saturating_pow(n as u32) * (labels as u128).pow(n as u32) * n as u128;
            guard("machines", count)?;
            for steps in lex_tuples(&vec![per_state.len(); n]) {
                for outs in lex_tuples(&vec![labels; n]) {
                    for z in 0..n {
                        let step = steps.iter().map(|&i| per_state[i].clone()).collect();
                        out.push(Machine { g: g.clone(), out: outs.clone(), step, current: z });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{c_maybe, c_reader, c_writer};
    use crate::finset::FinSet;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn tree_counts() {
        let r = c_reader(&a2());
        assert_eq!(enumerate_trees(&r, &[0, 1], 1).unwrap().len(), 6);
        assert_eq!(enumerate_trees(&r, &[0, 1], 2).unwrap().len(), 38);
        assert_eq!(enumerate_trees(&c_maybe(), &[0, 1], 3).unwrap().len(), 11);
    }

    #[test]
    fn free_monad_laws() {
        let w = c_writer(&a2());
        let trees = enumerate_trees(&w, &[0usize, 1], 2).unwrap();
        let ks: Vec<FreeTree> = enumerate_trees(&w, &[0usize, 1], 1).unwrap();
        for t in &trees {
            assert_eq!(t.bind(&|x| FreeTree::Leaf(*x)), *t);
            for k0 in &ks {
                for k1 in &ks {
                    let k = |x: &usize| if *x == 0 { k0.clone() } else { k1.clone() };
                    assert_eq!(FreeTree::Leaf(0).bind(&k), *k0);
                    let twice = t.bind(&k).bind(&k);
                    assert_eq!(twice, t.bind(&|x| k(x).bind(&k)));
                }
            }
        }
        let tt = FreeTree::Node(1, vec![FreeTree::Leaf(FreeTree::Node(0, vec![FreeTree::Leaf(7)]))]);
        assert_eq!(tt.join(), FreeTree::Node(1, vec![FreeTree::Node(0, vec![FreeTree::Leaf(7)])]));
    }

    #[test]
    fn cofree_laws_up_to_depth() {
        let g = c_reader(&a2());
        for m in Machine::enumerate(&g, 2, 2).unwrap().into_iter().step_by(7) {
            let dup = m.duplicate();
            assert_eq!(dup.extract().observe(4), m.observe(4));
            assert_eq!(dup.map(|w| *w.extract()).observe(4), m.observe(4));
            let lhs = dup.duplicate().map(|w| w.map(|v| v.observe(2)).observe(2)).observe(2);
            let rhs = dup.map(|w| w.duplicate()).map(|w| w.map(|v| v.observe(2)).observe(2)).observe(2);
            assert_eq!(lhs, rhs);
        }
        let one = Machine::new(g.clone(), vec![0], vec![(0, vec![0, 0])], 0).unwrap();
        assert_eq!(one.duplicate().map(|w| w.observe(4)).observe(4).label, one.observe(4));
    }
}
