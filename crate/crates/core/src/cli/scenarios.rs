//! The bundled `run` scenarios: reader, update and exceptions.
//!
//! Each scenario is a signature, a tree and an agent (machine or runner) in
//! the JSON formats of [`super::codec`].

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use super::codec::*;
use crate::container::{c_reader, Container};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::monadic::{mcil_update, Action, FreeTree, Machine};
use crate::residual::{RVal, ResidualMonad, ResidualRunner};

pub const SCENARIOS: [&str; 3] = ["reader", "update", "exceptions"];

pub struct Scenario {
    pub signature: Value,
    pub tree: Value,
    pub agent: Value,
    /// File name of the agent: `machine.json` or `runner.json`.
    pub agent_file: &'static str,
}

fn a2() -> FinSet {
    FinSet::from_strs("A", &["a0", "a1"]).unwrap()
}

fn leaf(x: &str) -> FreeTree<String> {
    FreeTree::Leaf(x.to_string())
}

/// One `ask` against a two-state machine of the dual functor `A × Y`.
fn reader() -> Result<Scenario> {
    let mut c = c_reader(&a2());
    c.shapes = FinSet::from_strs("Op", &["ask"])?;
    let tree = FreeTree::Node(0, vec![leaf("left"), leaf("right")]);
    let g = crate::dual::dual(&c)?;
    let states = FinSet::from_strs("M", &["fresh", "used"])?;
    let m = Machine::new(g, vec!["fresh".into(), "used".into()], vec![(1, vec![1]), (0, vec![0])], 0)?;
    Ok(Scenario { signature: container_json(&c), tree: tree_json(&c, &tree), agent: machine_json(&m, &states), agent_file: "machine.json" })
}

/// Two updates against the update comonad; the machine's state is the current
/// element of `A`, and an update by `b` rotates it.
fn update() -> Result<Scenario> {
    let action = Action::rotation(&a2());
    let m = mcil_update(&action)?;
    let c = &m.t.c;
    // f0 = λa. (1, a), f1 = λa. (0, a): flip, then read without changing.
    let (f0, f1) = (crate::monadic::update_shape(&action, &[1, 1]), crate::monadic::update_shape(&action, &[0, 0]));
    let inner = FreeTree::Node(f1, vec![leaf("x0"), leaf("x1")]);
    let tree = FreeTree::Node(f0, vec![inner, leaf("stop")]);
    let n = action.monoid.len();
    let steps = (0..action.set.len()).map(|a| (a, (0..n).map(|b| action.act(a, b)).collect())).collect();
    let labels = action.set.elems().to_vec();
    let machine = Machine::new(m.d.c.clone(), labels, steps, 0)?;
    let mut agent = machine_json(&machine, &action.set);
    agent["law"] = law_json(&m.law);
    Ok(Scenario { signature: container_json(c), tree: tree_json(c, &tree), agent, agent_file: "machine.json" })
}

/// `lookup` reads the state; `abort` raises. Started at `a1`, the tree reaches `abort`.
fn exceptions() -> Result<Scenario> {
    let a = a2();
    let c = Container::new(FinSet::from_strs("Op", &["lookup", "abort"])?, vec![a.clone(), FinSet::empty("P(abort)")])?;
    let tree = FreeTree::Node(0, vec![leaf("done"), FreeTree::Node(1, vec![])]);
    let errors = FinSet::from_strs("E", &["aborted"])?;
    let n = a.len();
    let theta = vec![(0..n).map(|y| RVal::Val(y * n + y)).collect(), vec![RVal::Raise(0); n]];
    let rr = ResidualRunner::new(c.clone(), ResidualMonad::Exceptions(1), a, theta)?;
    Ok(Scenario {
        signature: container_json(&c),
        tree: tree_json(&c, &tree),
        agent: residual_runner_json(&rr, Some(&errors), 1),
        agent_file: "runner.json",
    })
}

pub fn scenario(name: &str) -> Result<Scenario> {
    match name {
        "reader" => reader(),
        "update" => update(),
        "exceptions" => exceptions(),
        _ => Err(Error::Parse(format!("unknown scenario `{name}`"))),
    }
}

/// Writes `<dir>/<name>/{signature,tree,machine|runner}.json` for every scenario.
pub fn write_scenarios(dir: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(e.to_string());
    for name in SCENARIOS {
        let s = scenario(name)?;
        let sub = dir.join(name);
        fs::create_dir_all(&sub).map_err(io)?;
        for (file, v) in [("signature.json", &s.signature), ("tree.json", &s.tree), (s.agent_file, &s.agent)] {
            fs::write(sub.join(file), super::pretty(v)).map_err(io)?;
        }
    }
    Ok(())
}

/// The expected results, as quoted in the README.
pub fn expected_result(name: &str) -> Value {
    match name {
        "reader" => json!({ "value": "right", "label": "used" }),
        "update" => json!({ "value": "x1", "label": "a1" }),
        _ => json!({ "raise": "aborted" }),
    }
}
