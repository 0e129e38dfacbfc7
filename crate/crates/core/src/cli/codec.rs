//! JSON encodings of sets, containers, laws, trees, machines and runners.
//!
//! Everything is addressed by element tokens; object keys follow the order of
//! the underlying sets so that output is byte-stable.

use serde_json::{json, Map, Value};

use crate::container::{Container, ContainerElement};
use crate::error::{Error, Result};
use crate::finset::{FinFn, FinSet};
use crate::interaction::InteractionLaw;
use crate::monadic::{FreeTree, Machine, TraceEvent};
use crate::residual::{RVal, ResidualMonad, ResidualRunner};
use crate::runners::Runner;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field `{key}`")))
}

fn str_of(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| parse_err(format!("expected a string, got {v}")))
}

fn obj_of(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(format!("expected an object, got {v}")))
}

fn pair_of(v: &Value) -> Result<(&str, &str)> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((str_of(a)?, str_of(b)?)),
        _ => Err(parse_err(format!("expected a pair of tokens, got {v}"))),
    }
}

/// Splits a `"a,b"` key where both tokens may themselves contain commas.
fn split_key(key: &str, left: &FinSet, right: &FinSet) -> Result<(usize, usize)> {
    let hits: Vec<(usize, usize)> = key
        .match_indices(',')
        .filter_map(|(i, _)| Some((left.index_of(&key[..i])?, right.index_of(&key[i + 1..])?)))
        .collect();
    match hits.as_slice() {
        [one] => Ok(*one),
        [] => Err(parse_err(format!("key `{key}` does not name a pair in {} × {}", left.name(), right.name()))),
        _ => Err(parse_err(format!("key `{key}` is ambiguous"))),
    }
}

pub fn set_json(s: &FinSet) -> Value {
    json!({ "name": s.name(), "elems": s.elems() })
}

pub fn parse_set(v: &Value) -> Result<FinSet> {
    let name = str_of(field(v, "name")?)?;
    let elems = field(v, "elems")?
        .as_array()
        .ok_or_else(|| parse_err("`elems` must be an array"))?
        .iter()
        .map(|e| str_of(e).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    FinSet::new(name, elems)
}

pub fn container_json(c: &Container) -> Value {
    let mut positions = Map::new();
    for (s, tok) in c.shapes.elems().iter().enumerate() {
        positions.insert(tok.clone(), set_json(c.pos(s)));
    }
    json!({ "shapes": set_json(&c.shapes), "positions": positions })
}

pub fn parse_container(v: &Value) -> Result<Container> {
    let shapes = parse_set(field(v, "shapes")?)?;
    let pos = obj_of(field(v, "positions")?)?;
    if pos.len() != shapes.len() {
        return Err(parse_err("`positions` must list every shape exactly once"));
    }
    let positions = shapes
        .elems()
        .iter()
        .map(|s| parse_set(pos.get(s).ok_or_else(|| parse_err(format!("no positions for shape `{s}`")))?))
        .collect::<Result<Vec<_>>>()?;
    Container::new(shapes, positions)
}

pub fn law_json(il: &InteractionLaw) -> Value {
    let mut table = Map::new();
    for s in 0..il.f.num_shapes() {
        for t in 0..il.g.num_shapes() {
            let (p, q) = il.entry(s, t);
            let key = format!("{},{}", il.f.shapes.elem(s), il.g.shapes.elem(t));
            table.insert(key, json!([il.f.pos(s).elem(p), il.g.pos(t).elem(q)]));
        }
    }
    json!({ "F": container_json(&il.f), "G": container_json(&il.g), "table": table })
}

pub fn parse_law(v: &Value) -> Result<InteractionLaw> {
    let f = parse_container(field(v, "F")?)?;
    let g = parse_container(field(v, "G")?)?;
    let mut table = vec![None; f.num_shapes() * g.num_shapes()];
    for (key, entry) in obj_of(field(v, "table")?)? {
        let (s, t) = split_key(key, &f.shapes, &g.shapes)?;
        let (p, q) = pair_of(entry)?;
        table[s * g.num_shapes() + t] = Some((f.pos(s).require(p)?, g.pos(t).require(q)?));
    }
    let table = table.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| parse_err("law table is not total"))?;
    InteractionLaw::new(f, g, table)
}

pub fn tree_json(c: &Container, t: &FreeTree<String>) -> Value {
    match t {
        FreeTree::Leaf(x) => json!({ "leaf": x }),
        FreeTree::Node(s, ks) => {
            let mut args = Map::new();
            for (p, k) in ks.iter().enumerate() {
                args.insert(c.pos(*s).elem(p).to_string(), tree_json(c, k));
            }
            json!({ "op": c.shapes.elem(*s), "args": args })
        }
    }
}

pub fn parse_tree(c: &Container, v: &Value) -> Result<FreeTree<String>> {
    if let Some(x) = v.get("leaf") {
        return Ok(FreeTree::Leaf(str_of(x)?.to_string()));
    }
    let s = c.shapes.require(str_of(field(v, "op")?)?)?;
    let args = obj_of(field(v, "args")?)?;
    if args.len() != c.arity(s) {
        return Err(Error::mismatch(format!("operation `{}` takes {} arguments", c.shapes.elem(s), c.arity(s))));
    }
    let ks = c
        .pos(s)
        .elems()
        .iter()
        .map(|p| parse_tree(c, args.get(p).ok_or_else(|| parse_err(format!("missing argument `{p}`")))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeTree::Node(s, ks))
}

/// Leaf labels become indices into the sorted set of labels occurring in the tree.
pub fn index_leaves(t: &FreeTree<String>) -> (FreeTree<usize>, Vec<String>) {
    let mut labels: Vec<String> = t.leaves().into_iter().cloned().collect();
    labels.sort();
    labels.dedup();
    let indexed = t.map(&|x: &String| labels.binary_search(x).unwrap());
    (indexed, labels)
}

pub fn element_json(c: &Container, e: &ContainerElement) -> Value {
    let mut payload = Map::new();
    for (p, &x) in e.payload.table.iter().enumerate() {
        payload.insert(c.pos(e.shape).elem(p).to_string(), json!(e.carrier().elem(x)));
    }
    json!({ "shape": c.shapes.elem(e.shape), "payload": payload })
}

pub fn parse_element(c: &Container, carrier: &FinSet, v: &Value) -> Result<ContainerElement> {
    let shape = c.shapes.require(str_of(field(v, "shape")?)?)?;
    let payload = obj_of(field(v, "payload")?)?;
    let pairs = payload.iter().map(|(k, x)| Ok((k.as_str(), str_of(x)?))).collect::<Result<Vec<_>>>()?;
    let payload = FinFn::from_pairs(c.pos(shape), carrier, &pairs)?;
    Ok(ContainerElement { shape, payload })
}

pub fn machine_json(m: &Machine<String>, states: &FinSet) -> Value {
    let mut out = Map::new();
    let mut step = Map::new();
    for z in 0..m.num_states() {
        out.insert(states.elem(z).to_string(), json!(m.out[z]));
        let (t, next) = &m.step[z];
        let e = ContainerElement { shape: *t, payload: FinFn { dom: m.g.pos(*t).clone(), cod: states.clone(), table: next.clone() } };
        step.insert(states.elem(z).to_string(), element_json(&m.g, &e));
    }
    json!({ "states": set_json(states), "out": out, "step": step, "start": states.elem(m.current) })
}

pub fn parse_machine(g: &Container, v: &Value) -> Result<(Machine<String>, FinSet)> {
    let states = parse_set(field(v, "states")?)?;
    let out_obj = obj_of(field(v, "out")?)?;
    let step_obj = obj_of(field(v, "step")?)?;
    let mut out = Vec::new();
    let mut step = Vec::new();
    for z in states.elems() {
        out.push(str_of(out_obj.get(z).ok_or_else(|| parse_err(format!("no label for state `{z}`")))?)?.to_string());
        let e = parse_element(g, &states, step_obj.get(z).ok_or_else(|| parse_err(format!("no step for state `{z}`")))?)?;
        step.push((e.shape, e.payload.table));
    }
    let start = states.require(str_of(field(v, "start")?)?)?;
    Ok((Machine::new(g.clone(), out, step, start)?, states))
}

pub fn runner_json(r: &Runner, start: usize) -> Value {
    let mut theta = Map::new();
    for s in 0..r.c.num_shapes() {
        for y in 0..r.state.len() {
            let (p, y2) = r.theta[s][y];
            theta.insert(format!("{},{}", r.c.shapes.elem(s), r.state.elem(y)), json!([r.c.pos(s).elem(p), r.state.elem(y2)]));
        }
    }
    json!({ "state": set_json(&r.state), "theta": theta, "start": r.state.elem(start) })
}

fn theta_cells<'a>(c: &Container, state: &FinSet, v: &'a Value) -> Result<Vec<Vec<&'a Value>>> {
    let mut cells = vec![vec![None; state.len()]; c.num_shapes()];
    for (key, entry) in obj_of(field(v, "theta")?)? {
        let (s, y) = split_key(key, &c.shapes, state)?;
        cells[s][y] = Some(entry);
    }
    cells
        .into_iter()
        .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| parse_err("`theta` must cover every shape and state"))
}

pub fn parse_runner(c: &Container, v: &Value) -> Result<(Runner, usize)> {
    let state = parse_set(field(v, "state")?)?;
    let cells = theta_cells(c, &state, v)?;
    let mut theta = Vec::new();
    for (s, row) in cells.iter().enumerate() {
        let mut out = Vec::new();
        for cell in row {
            let (p, y) = pair_of(cell)?;
            out.push((c.pos(s).require(p)?, state.require(y)?));
        }
        theta.push(out);
    }
    let start = state.require(str_of(field(v, "start")?)?)?;
    Ok((Runner::new(c.clone(), state, theta)?, start))
}

/// `"identity"`, `"maybe"`, `"finnondet"`, or `{"exceptions": FinSet}`.
pub fn parse_residual_monad(v: &Value) -> Result<(ResidualMonad, Option<FinSet>)> {
    if let Some(e) = v.get("exceptions") {
        let errors = parse_set(e)?;
        return Ok((ResidualMonad::Exceptions(errors.len()), Some(errors)));
    }
    match str_of(v)? {
        "identity" => Ok((ResidualMonad::Identity, None)),
        "maybe" => Ok((ResidualMonad::Maybe, None)),
        "finnondet" => Ok((ResidualMonad::FinNondet, None)),
        other => Err(parse_err(format!("unknown residual monad `{other}`"))),
    }
}

pub fn residual_monad_json(r: ResidualMonad, errors: Option<&FinSet>) -> Value {
    match (r, errors) {
        (ResidualMonad::Exceptions(_), Some(e)) => json!({ "exceptions": set_json(e) }),
        _ => json!(r.to_string()),
    }
}

/// Tokens for the two components of an atom.
pub struct AtomNames<'a> {
    pub left: &'a [String],
    pub right: &'a [String],
    pub errors: Option<&'a FinSet>,
}

/// An R-value: a pair `[x, y]`, `{"raise": e}`, `"nothing"`, or `{"bag": [pairs]}`.
pub fn rval_json(v: &RVal, names: &AtomNames) -> Value {
    let n = names.right.len();
    let atom = |a: usize| json!([names.left[a / n], names.right[a % n]]);
    match v {
        RVal::Val(a) => atom(*a),
        RVal::Raise(e) => json!({ "raise": names.errors.map(|s| s.elem(*e).to_string()).unwrap_or_else(|| e.to_string()) }),
        RVal::Nothing => json!("nothing"),
        RVal::Bag(xs) => json!({ "bag": xs.iter().map(|&a| atom(a)).collect::<Vec<_>>() }),
    }
}

fn parse_rval(v: &Value, r: ResidualMonad, left: &FinSet, right: &FinSet, errors: Option<&FinSet>) -> Result<RVal> {
    let atom = |v: &Value| -> Result<usize> {
        let (x, y) = pair_of(v)?;
        Ok(left.require(x)? * right.len() + right.require(y)?)
    };
    let out = if v.is_array() {
        r.unit(atom(v)?)
    } else if v.as_str() == Some("nothing") {
        RVal::Nothing
    } else if let Some(e) = v.get("raise") {
        let set = errors.ok_or_else(|| parse_err("`raise` needs an exceptions monad"))?;
        RVal::Raise(set.require(str_of(e)?)?)
    } else if let Some(bag) = v.get("bag").and_then(Value::as_array) {
        let mut xs = bag.iter().map(atom).collect::<Result<Vec<_>>>()?;
        xs.sort_unstable();
        RVal::Bag(xs)
    } else {
        return Err(parse_err(format!("not a residual value: {v}")));
    };
    if !r.contains(&out, left.len() * right.len()) {
        return Err(Error::mismatch(format!("{v} is not a {r} value")));
    }
    Ok(out)
}

pub fn residual_runner_json(rr: &ResidualRunner, errors: Option<&FinSet>, start: usize) -> Value {
    let mut theta = Map::new();
    for s in 0..rr.c.num_shapes() {
        for y in 0..rr.state.len() {
            let names = AtomNames { left: rr.c.pos(s).elems(), right: rr.state.elems(), errors };
            theta.insert(format!("{},{}", rr.c.shapes.elem(s), rr.state.elem(y)), rval_json(&rr.theta[s][y], &names));
        }
    }
    json!({ "R": residual_monad_json(rr.r, errors), "state": set_json(&rr.state), "theta": theta, "start": rr.state.elem(start) })
}

pub fn parse_residual_runner(c: &Container, v: &Value) -> Result<(ResidualRunner, Option<FinSet>, usize)> {
    let (r, errors) = parse_residual_monad(field(v, "R")?)?;
    let state = parse_set(field(v, "state")?)?;
    let cells = theta_cells(c, &state, v)?;
    let theta = cells
        .iter()
        .enumerate()
        .map(|(s, row)| row.iter().map(|cell| parse_rval(cell, r, c.pos(s), &state, errors.as_ref())).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let start = state.require(str_of(field(v, "start")?)?)?;
    Ok((ResidualRunner::new(c.clone(), r, state, theta)?, errors, start))
}

/// Names for the columns of a trace.
pub struct TraceNames<'a> {
    pub tree: &'a Container,
    pub agent_shape: &'a dyn Fn(usize) -> String,
    pub agent_position: &'a dyn Fn(usize, usize) -> String,
    pub state: &'a dyn Fn(usize) -> String,
}

pub fn trace_json(trace: &[TraceEvent], names: &TraceNames) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|e| {
                json!({
                    "step": e.step,
                    "op": names.tree.shapes.elem(e.tree_shape),
                    "agent": (names.agent_shape)(e.machine_shape),
                    "position": names.tree.pos(e.tree_shape).elem(e.tree_position),
                    "answer": (names.agent_position)(e.machine_shape, e.machine_position),
                    "state": (names.state)(e.state),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::{c_exponent, c_maybe, c_reader};
    use crate::dual::dual_pairing;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn containers_and_laws_round_trip() {
        let c = c_exponent(&a2(), &c_maybe()).unwrap();
        assert_eq!(parse_container(&container_json(&c)).unwrap(), c);
        let law = dual_pairing(&c_reader(&a2())).unwrap();
        assert_eq!(parse_law(&law_json(&law)).unwrap(), law);
    }

    #[test]
    fn comma_keys_split_uniquely() {
        let l = FinSet::from_strs("L", &["a", "a,b"]).unwrap();
        let r = FinSet::from_strs("R", &["c", "b,c"]).unwrap();
        assert_eq!(split_key("a,c", &l, &r).unwrap(), (0, 0));
        assert!(split_key("a,b,c", &l, &r).is_err());
        assert!(split_key("x,c", &l, &r).is_err());
    }

    #[test]
    fn trees_round_trip() {
        let c = c_reader(&a2());
        let t = FreeTree::Node(0, vec![FreeTree::Leaf("x".to_string()), FreeTree::Node(0, vec![FreeTree::Leaf("y".into()), FreeTree::Leaf("x".into())])]);
        assert_eq!(parse_tree(&c, &tree_json(&c, &t)).unwrap(), t);
        let (idx, labels) = index_leaves(&t);
        assert_eq!(labels, ["x", "y"]);
        assert_eq!(idx.leaves(), [&0, &1, &0]);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(parse_set(&json!({"name": "A"})), Err(Error::Parse(_))));
        assert!(matches!(parse_container(&json!([1, 2])), Err(Error::Parse(_))));
    }
}
