//! Finite sets of string tokens, tabulated functions, and the
//! product / coproduct / exponent calculus.
//!
//! Element order is construction order and never changes, so every
//! enumeration built on top of these sets is reproducible.

use std::cell::Cell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_SIZE_GUARD: usize = 1_000_000;

thread_local! {
    static SIZE_GUARD: Cell<usize> = const { Cell::new(DEFAULT_SIZE_GUARD) };
}

/// Current per-thread size limit for constructed sets.
pub fn size_guard() -> usize {
    SIZE_GUARD.with(|g| g.get())
}

/// Sets the per-thread size limit.
pub fn set_size_guard(limit: usize) {
    SIZE_GUARD.with(|g| g.set(limit));
}

/// Runs `f` with a temporary size limit, restoring the old one afterwards.
pub fn with_size_guard<R>(limit: usize, f: impl FnOnce() -> R) -> R {
    let old = size_guard();
    set_size_guard(limit);
    let out = f();
    set_size_guard(old);
    out
}

/// Fails if `size` exceeds the current guard.
pub fn guard(what: &str, size: u128) -> Result<usize> {
    let limit = size_guard();
    if size > limit as u128 {
        Err(Error::SizeGuard { what: what.to_string(), size, limit })
    } else {
        Ok(size as usize)
    }
}

/// Saturating product of cardinalities.
pub fn card_product(factors: impl IntoIterator<Item = usize>) -> u128 {
    factors.into_iter().fold(1u128, |acc, n| acc.saturating_mul(n as u128))
}

/// Saturating `base^exp` with `0^0 = 1`.
pub fn card_pow(base: usize, exp: usize) -> u128 {
    let mut acc = 1u128;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc == 0 {
            break;
        }
    }
    acc
}

/// All tuples `t` with `t[i] < radices[i]`, first coordinate most significant.
pub fn lex_tuples(radices: &[usize]) -> LexTuples {
    let next = (!radices.contains(&0)).then(|| vec![0; radices.len()]);
    LexTuples { radices: radices.to_vec(), next }
}

pub struct LexTuples {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Iterator for LexTuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.radices[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Index of `tuple` in the order produced by [`lex_tuples`].
pub fn lex_index(radices: &[usize], tuple: &[usize]) -> usize {
    tuple.iter().zip(radices).fold(0, |acc, (&t, &r)| acc * r + t)
}

/// Inverse of [`lex_index`].
pub fn lex_decode(radices: &[usize], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        out[i] = index % radices[i];
        index /= radices[i];
    }
    out
}

#[derive(Debug)]
struct SetData {
    name: String,
    elems: Vec<String>,
    index: HashMap<String, usize>,
}

/// A finite set of distinct string tokens in canonical order.
///
/// Cloning is cheap. Equality compares elements only; the name is a label.
#[derive(Clone)]
pub struct FinSet(Arc<SetData>);

impl FinSet {
    pub fn new(name: impl Into<String>, elems: Vec<String>) -> Result<FinSet> {
        let name = name.into();
        guard(&name, elems.len() as u128)?;
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate element `{e}` in set `{name}`")));
            }
        }
        Ok(FinSet(Arc::new(SetData { name, elems, index })))
    }

    /// Builds a set from tokens that are distinct by construction.
    pub fn from_strs<S: AsRef<str>>(name: &str, elems: &[S]) -> Result<FinSet> {
        FinSet::new(name, elems.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(name: impl Into<String>, n: usize) -> FinSet {
        FinSet::new(name, (0..n).map(|i| i.to_string()).collect())
            .expect("range elements are distinct")
    }

    pub fn empty(name: impl Into<String>) -> FinSet {
        FinSet::range(name, 0)
    }

    /// The one-element set `{*}`.
    pub fn unit() -> FinSet {
        FinSet::new("1", vec!["*".to_string()]).expect("singleton")
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> FinSet {
        FinSet(Arc::new(SetData {
            name: name.into(),
            elems: self.0.elems.clone(),
            index: self.0.index.clone(),
        }))
    }

    pub fn len(&self) -> usize {
        self.0.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elems.is_empty()
    }

    pub fn elems(&self) -> &[String] {
        &self.0.elems
    }

    pub fn elem(&self, i: usize) -> &str {
        &self.0.elems[i]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.0.index.get(token).copied()
    }

    /// Index of `token`, or an error naming the set.
    pub fn require(&self, token: &str) -> Result<usize> {
        self.index_of(token).ok_or_else(|| Error::UnknownElement {
            token: token.to_string(),
            set: self.name().to_string(),
        })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.index.contains_key(token)
    }
}

impl PartialEq for FinSet {
    fn eq(&self, other: &FinSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elems == other.0.elems
    }
}

impl Eq for FinSet {}

impl std::hash::Hash for FinSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.elems.hash(state);
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{{}}}", self.name(), self.0.elems.join(","))
    }
}

pub fn pair_token(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

pub fn inl_token(a: &str) -> String {
    format!("inl({a})")
}

pub fn inr_token(b: &str) -> String {
    format!("inr({b})")
}

/// Token for a function given as `(argument, value)` pairs.
pub fn fn_token<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> String {
    let body: Vec<String> = entries.into_iter().map(|(a, b)| format!("{a}->{b}")).collect();
    format!("{{{}}}", body.join(","))
}

/// `A × B`, ordered lexicographically by (A-index, B-index).
pub fn product(a: &FinSet, b: &FinSet) -> Result<FinSet> {
    let name = format!("{}x{}", a.name(), b.name());
    guard(&name, card_product([a.len(), b.len()]))?;
    let mut elems = Vec::with_capacity(a.len() * b.len());
    for x in a.elems() {
        for y in b.elems() {
            elems.push(pair_token(x, y));
        }
    }
    FinSet::new(name, elems)
}

/// `A + B` with every left tag before every right tag.
pub fn coproduct(a: &FinSet, b: &FinSet) -> Result<FinSet> {
    let name = format!("{}+{}", a.name(), b.name());
    let elems = a.elems().iter().map(|x| inl_token(x)).chain(b.elems().iter().map(|y| inr_token(y)));
    FinSet::new(name, elems.collect())
}

/// All functions `A → B`, in lexicographic order of their value tuples.
#[derive(Clone, Debug)]
pub struct Exponent {
    pub set: FinSet,
    pub functions: Vec<FinFn>,
}

pub fn exponent(a: &FinSet, b: &FinSet) -> Result<Exponent> {
    let name = format!("{}=>{}", a.name(), b.name());
    guard(&name, card_pow(b.len(), a.len()))?;
    let radices = vec![b.len(); a.len()];
    let mut elems = Vec::new();
    let mut functions = Vec::new();
    for table in lex_tuples(&radices) {
        elems.push(fn_token(a.elems().iter().zip(&table).map(|(x, &y)| (x.as_str(), b.elem(y)))));
        functions.push(FinFn { dom: a.clone(), cod: b.clone(), table });
    }
    Ok(Exponent { set: FinSet::new(name, elems)?, functions })
}

/// A total function between finite sets, stored by element index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinFn {
    pub dom: FinSet,
    pub cod: FinSet,
    pub table: Vec<usize>,
}

impl FinFn {
    pub fn new(dom: FinSet, cod: FinSet, table: Vec<usize>) -> Result<FinFn> {
        if table.len() != dom.len() {
            return Err(Error::mismatch(format!(
                "function table has {} entries but domain `{}` has {}",
                table.len(),
                dom.name(),
                dom.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::mismatch(format!("value index {bad} outside codomain `{}`", cod.name())));
        }
        Ok(FinFn { dom, cod, table })
    }

    /// Builds a function from `(argument, value)` token pairs covering the domain.
    pub fn from_pairs<S: AsRef<str>>(dom: &FinSet, cod: &FinSet, pairs: &[(S, S)]) -> Result<FinFn> {
        let mut table = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            table[dom.require(a.as_ref())?] = cod.require(b.as_ref())?;
        }
        if let Some(i) = table.iter().position(|&v| v == usize::MAX) {
            return Err(Error::invalid(format!("function undefined at `{}`", dom.elem(i))));
        }
        Ok(FinFn { dom: dom.clone(), cod: cod.clone(), table })
    }

    pub fn from_fn(dom: &FinSet, cod: &FinSet, f: impl Fn(usize) -> usize) -> Result<FinFn> {
        FinFn::new(dom.clone(), cod.clone(), (0..dom.len()).map(f).collect())
    }

    pub fn identity(a: &FinSet) -> FinFn {
        FinFn { dom: a.clone(), cod: a.clone(), table: (0..a.len()).collect() }
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn apply_token(&self, token: &str) -> Result<&str> {
        Ok(self.cod.elem(self.table[self.dom.require(token)?]))
    }

    /// `g ∘ f`.
    pub fn compose(g: &FinFn, f: &FinFn) -> Result<FinFn> {
        if f.cod != g.dom {
            return Err(Error::mismatch(format!(
                "cannot compose: codomain `{}` is not domain `{}`",
                f.cod.name(),
                g.dom.name()
            )));
        }
        Ok(FinFn { dom: f.dom.clone(), cod: g.cod.clone(), table: f.table.iter().map(|&i| g.table[i]).collect() })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective()
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> =
            self.table.iter().enumerate().map(|(i, &v)| format!("{}->{}", self.dom.elem(i), self.cod.elem(v))).collect();
        write!(f, "{}->{}{{{}}}", self.dom.name(), self.cod.name(), entries.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::from_strs(name, elems).unwrap()
    }

    #[test]
    fn product_examples() {
        let p = product(&set("A", &["a"]), &set("B", &["x", "y"])).unwrap();
        assert_eq!(p.elems(), ["(a,x)", "(a,y)"]);
        assert!(product(&FinSet::empty("E"), &set("B", &["x"])).unwrap().is_empty());
        let p = product(&set("A", &["a", "b"]), &set("B", &["x", "y"])).unwrap();
        let mut expected = Vec::new();
        for a in ["a", "b"] {
            for x in ["x", "y"] {
                expected.push(pair_token(a, x));
            }
        }
        assert_eq!(p.elems(), expected.as_slice());
    }

    #[test]
    fn coproduct_examples() {
        let b = set("B", &["x", "y"]);
        assert_eq!(coproduct(&FinSet::empty("E"), &b).unwrap().elems(), ["inr(x)", "inr(y)"]);
        let a = set("A", &["a"]);
        let c = coproduct(&a, &a).unwrap();
        assert_eq!(c.len(), 2);
        assert_ne!(c.elem(0), c.elem(1));
        assert_eq!(coproduct(&set("A", &["a", "b"]), &set("B", &["x"])).unwrap().len(), 3);
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(exponent(&set("A", &["a"]), &set("B", &["x", "y"])).unwrap().set.len(), 2);
        let e = exponent(&FinSet::empty("E"), &FinSet::empty("F")).unwrap();
        assert_eq!(e.set.elems(), ["{}"]);
        let e = exponent(&set("A", &["a", "b"]), &set("B", &["x", "y", "z"])).unwrap();
        assert_eq!(e.set.len(), 9);
        assert_eq!(e.set.elem(1), "{a->x,b->y}");
        assert_eq!(e.functions[5].table, vec![1, 2]);
    }

    #[test]
    fn exponent_respects_guard() {
        let err = with_size_guard(100, || exponent(&FinSet::range("A", 7), &FinSet::range("B", 2)).unwrap_err());
        assert!(err.is_size_guard());
    }

    #[test]
    fn compose_and_identity() {
        let a = set("A", &["p", "q"]);
        let swap = FinFn::new(a.clone(), a.clone(), vec![1, 0]).unwrap();
        let id = FinFn::identity(&a);
        assert_eq!(FinFn::compose(&id, &swap).unwrap(), swap);
        assert_eq!(FinFn::compose(&swap, &id).unwrap(), swap);
        assert_eq!(FinFn::compose(&swap, &swap).unwrap(), id);
        let b = set("B", &["x"]);
        let f = FinFn::new(a.clone(), b.clone(), vec![0, 0]).unwrap();
        assert!(matches!(FinFn::compose(&f, &f), Err(Error::Mismatch(_))));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(FinSet::from_strs("A", &["a", "a"]).is_err());
    }

    #[test]
    fn lex_helpers_agree() {
        let radices = [2, 3, 1, 2];
        for (i, t) in lex_tuples(&radices).enumerate() {
            assert_eq!(lex_index(&radices, &t), i);
            assert_eq!(lex_decode(&radices, i), t);
        }
        assert_eq!(lex_tuples(&[]).count(), 1);
        assert_eq!(lex_tuples(&[3, 0]).count(), 0);
    }
}
