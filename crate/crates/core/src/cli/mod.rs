//! The `ilaws` command line: `dual`, `run`, `check` and `enumerate`.
//!
//! Exit codes: 0 pass, 1 law failure (or golden mismatch), 2 input error,
//! 3 size-guard abort.

pub mod codec;
pub mod scenarios;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::container::{c_id, c_maybe, c_nelist, c_one, c_product, c_reader, c_writer, c_zero, find_iso, Container};
use crate::dual::{dual, dual_pairing};
use crate::error::{Error, Result};
use crate::finset::{with_size_guard, FinSet, DEFAULT_SIZE_GUARD};
use crate::interaction::{il_count, il_enumerate};
use crate::monadic::run_with_law;
use crate::residual::{residual_run, residual_trace};
use crate::runners::run;

use codec::*;

pub use suites::SUITES;

#[derive(Parser, Debug)]
#[command(name = "ilaws", version, about = "Interaction laws of finite containers")]
pub struct Cli {
    /// JSON bounds file with keys max_carrier, max_depth, universe_k, size_guard.
    #[arg(long, global = true)]
    pub bounds: Option<PathBuf>,
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Compare the JSON report against `<dir>/<name>.json`, writing it if absent.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dual of a container, with the catalogue entry it matches.
    Dual { container: String },
    /// Run a tree against a machine, a runner, or a residual runner.
    Run { signature: String, tree: String, agent: String },
    /// Run a law suite on builtin instances or JSON targets.
    Check {
        suite: String,
        #[arg(required = true)]
        targets: Vec<String>,
    },
    /// Count (and optionally list) the interaction laws between two containers.
    Enumerate {
        f: String,
        g: String,
        #[arg(long)]
        limit: Option<u128>,
        #[arg(long)]
        dump: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    pub max_carrier: usize,
    pub max_depth: usize,
    pub universe_k: usize,
    pub size_guard: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_carrier: 3, max_depth: 4, universe_k: 3, size_guard: DEFAULT_SIZE_GUARD }
    }
}

/// A finished command: exit code, text rendering and JSON report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { code: 0, text, json }
    }

    fn from_error(e: &Error) -> Self {
        let code = match e {
            Error::SizeGuard { .. } => 3,
            Error::LawViolation(_) => 1,
            _ => 2,
        };
        Outcome { code, text: format!("error: {e}"), json: json!({ "error": e.to_string(), "exit": code }) }
    }

    /// The text or pretty JSON form, newline-terminated.
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            pretty(&self.json)
        } else {
            format!("{}\n", self.text.trim_end())
        }
    }
}

pub fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("serializable"))
}

fn read_json(path: &str) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

pub fn load_bounds(path: Option<&Path>) -> Result<Bounds> {
    match path {
        None => Ok(Bounds::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
        }
    }
}

fn is_file_arg(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

/// A container from a JSON file or a builtin name: `id`, `zero`, `one`, `maybe`,
/// `reader<n>`, `writer<n>`, `nelist<n>`.
pub fn resolve_container(arg: &str) -> Result<Container> {
    if is_file_arg(arg) {
        return parse_container(&read_json(arg)?);
    }
    let size = |prefix: &str| arg.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    let set = |n: usize| FinSet::new("A", (0..n).map(|i| format!("a{i}")).collect());
    match arg {
        "id" => Ok(c_id()),
        "zero" => Ok(c_zero()),
        "one" => Ok(c_one()),
        "maybe" => Ok(c_maybe()),
        _ => {
            if let Some(n) = size("reader") {
                Ok(c_reader(&set(n)?))
            } else if let Some(n) = size("writer") {
                Ok(c_writer(&set(n)?))
            } else if let Some(n) = size("nelist").filter(|&n| n > 0) {
                Ok(c_nelist(n))
            } else {
                Err(Error::Parse(format!("`{arg}` is neither a JSON file nor a builtin container")))
            }
        }
    }
}

/// Recognizes a catalogue functor and builds the dual it is expected to have.
fn catalogue_expectation(c: &Container) -> Result<Option<(&'static str, Container)>> {
    let arities: Vec<usize> = (0..c.num_shapes()).map(|s| c.arity(s)).collect();
    Ok(match arities.as_slice() {
        [1] => Some(("Id -> Id", c_id())),
        [0] => Some(("1 -> 0", c_zero())),
        [] => Some(("0 -> 1", c_one())),
        [1, 0] | [0, 1] => Some(("Maybe -> 0", c_zero())),
        [_] => Some(("A => X -> A x X", c_writer(c.pos(0)))),
        _ if arities.iter().all(|&k| k == 1) => Some(("A x X -> A => X", c_reader(&c.shapes))),
        _ if arities.iter().enumerate().all(|(i, &k)| k == i + 1) => {
            let mut factors = arities.iter().map(|&k| c_writer(&FinSet::range("N", k)));
            let first = factors.next().expect("at least two shapes");
            Some(("nelist(n) -> product of ([0..k) x X)", factors.try_fold(first, |acc, w| c_product(&acc, &w))?))
        }
        _ => None,
    })
}

fn cmd_dual(arg: &str) -> Result<Outcome> {
    let c = resolve_container(arg)?;
    let d = dual(&c)?;
    let mut text = format!("dual: {} shapes, {} positions each\n", d.num_shapes(), c.num_shapes());
    let catalogue = match catalogue_expectation(&c)? {
        Some((entry, expected)) => {
            let iso = find_iso(&d, &expected).is_some();
            text.push_str(&format!("catalogue {entry}: {}\n", if iso { "iso found" } else { "no iso" }));
            json!({ "entry": entry, "expected": container_json(&expected), "iso": iso })
        }
        None => {
            text.push_str("catalogue: no entry\n");
            Value::Null
        }
    };
    let code = if catalogue.get("iso") == Some(&Value::Bool(false)) { 1 } else { 0 };
    Ok(Outcome { code, text, json: json!({ "input": container_json(&c), "dual": container_json(&d), "catalogue": catalogue }) })
}

fn cmd_run(sig: &str, tree: &str, agent: &str) -> Result<Outcome> {
    let c = resolve_container(sig)?;
    let tree = parse_tree(&c, &read_json(tree)?)?;
    let agent = read_json(agent)?;
    let leaf_name = |labels: &[String], i: usize| labels[i].clone();
    let (indexed, labels) = index_leaves(&tree);
    if agent.get("theta").is_some() && agent.get("R").is_some() {
        let (rr, errors, start) = parse_residual_runner(&c, &agent)?;
        let result = residual_run(&rr, &indexed, start)?;
        let names = AtomNames { left: &labels, right: rr.state.elems(), errors: errors.as_ref() };
        let result_json = rval_json(&result, &names);
        let trace = residual_trace(&rr, &indexed, start)?;
        let state_name = |y: usize| rr.state.elem(y).to_string();
        let trace_json = trace.as_ref().map(|t| {
            trace_json(t, &TraceNames { tree: &c, agent_shape: &state_name, agent_position: &|_, y| state_name(y), state: &state_name })
        });
        let text = format!("result: {}\ntrace: {} steps\n", result_json, trace.map_or(0, |t| t.len()));
        return Ok(Outcome::ok(text, json!({ "result": result_json, "trace": trace_json })));
    }
    if agent.get("theta").is_some() {
        let (r, start) = parse_runner(&c, &agent)?;
        let (x, y, trace) = run(&r, &indexed, start)?;
        let state_name = |y: usize| r.state.elem(y).to_string();
        let tj = trace_json(&trace, &TraceNames { tree: &c, agent_shape: &state_name, agent_position: &|_, y| state_name(y), state: &state_name });
        let (x, y) = (leaf_name(&labels, x), state_name(y));
        let text = format!("result: ({x}, {y})\ntrace: {} steps\n", trace.len());
        return Ok(Outcome::ok(text, json!({ "result": { "value": x, "state": y }, "trace": tj })));
    }
    let law = match agent.get("law") {
        Some(l) => {
            let law = parse_law(l)?;
            if law.f != c {
                return Err(Error::mismatch("the machine's law is not over the signature"));
            }
            law
        }
        None => dual_pairing(&c)?,
    };
    let (m, states) = parse_machine(&law.g, &agent)?;
    let (x, label, trace) = run_with_law(&law, &indexed, &m)?;
    let g = &law.g;
    let state_name = |z: usize| states.elem(z).to_string();
    let tj = trace_json(
        &trace,
        &TraceNames {
            tree: &c,
            agent_shape: &|t| g.shapes.elem(t).to_string(),
            agent_position: &|t, q| g.pos(t).elem(q).to_string(),
            state: &state_name,
        },
    );
    let x = leaf_name(&labels, x);
    let text = format!("result: ({x}, {label})\ntrace: {} steps\n", trace.len());
    Ok(Outcome::ok(text, json!({ "result": { "value": x, "label": label }, "trace": tj })))
}

fn cmd_enumerate(f: &str, g: &str, limit: Option<u128>, dump: bool, bounds: &Bounds) -> Result<Outcome> {
    let (fc, gc) = (resolve_container(f)?, resolve_container(g)?);
    let count = il_count(&fc, &gc);
    let limit = limit.unwrap_or(bounds.size_guard as u128);
    if count > limit {
        return Err(Error::SizeGuard { what: "interaction laws".into(), size: count, limit: limit.min(usize::MAX as u128) as usize });
    }
    let mut out = json!({ "count": count.to_string() });
    if dump {
        out["laws"] = Value::Array(il_enumerate(&fc, &gc)?.iter().map(law_json).collect());
    }
    Ok(Outcome::ok(format!("{count} interaction laws\n"), out))
}

/// File-name key for golden output: the subcommand and its first argument.
fn golden_name(cmd: &Command) -> String {
    let (name, first) = match cmd {
        Command::Dual { container } => ("dual", container.as_str()),
        Command::Run { tree, .. } => ("run", tree.as_str()),
        Command::Check { suite, targets } => return format!("check-{suite}-{}", arg_key(&targets[0])),
        Command::Enumerate { f, .. } => ("enumerate", f.as_str()),
    };
    format!("{name}-{}", arg_key(first))
}

fn arg_key(arg: &str) -> String {
    let p = Path::new(arg);
    if is_file_arg(arg) {
        let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("input");
        match p.parent().and_then(Path::file_name).and_then(|s| s.to_str()) {
            Some(dir) => format!("{dir}-{stem}"),
            None => stem.to_string(),
        }
    } else {
        arg.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '-' { ch } else { '_' }).collect()
    }
}

fn dispatch(cli: &Cli, bounds: &Bounds) -> Result<Outcome> {
    match &cli.command {
        Command::Dual { container } => cmd_dual(container),
        Command::Run { signature, tree, agent } => cmd_run(signature, tree, agent),
        Command::Check { suite, targets } => suites::cmd_check(suite, targets, bounds),
        Command::Enumerate { f, g, limit, dump } => cmd_enumerate(f, g, *limit, *dump, bounds),
    }
}

/// Runs a parsed command line, including the golden-file comparison.
pub fn execute(cli: &Cli) -> Outcome {
    let bounds = match load_bounds(cli.bounds.as_deref()) {
        Ok(b) => b,
        Err(e) => return Outcome::from_error(&e),
    };
    let mut out = with_size_guard(bounds.size_guard, || dispatch(cli, &bounds)).unwrap_or_else(|e| Outcome::from_error(&e));
    if let Some(dir) = &cli.golden {
        let path = dir.join(format!("{}.json", golden_name(&cli.command)));
        let fresh = pretty(&out.json);
        match fs::read_to_string(&path) {
            Ok(old) if old == fresh => out.text.push_str(&format!("golden {}: identical\n", path.display())),
            Ok(_) => {
                out.text.push_str(&format!("golden {}: differs\n", path.display()));
                out.code = out.code.max(1);
            }
            Err(_) => match fs::create_dir_all(dir).and_then(|_| fs::write(&path, &fresh)) {
                Ok(()) => out.text.push_str(&format!("golden {}: written\n", path.display())),
                Err(e) => return Outcome::from_error(&Error::Parse(format!("{}: {e}", path.display()))),
            },
        }
    }
    out
}

/// Parses `args` (including the program name), runs, prints, and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out = execute(&cli);
    let rendered = out.render(cli.json);
    if out.code == 2 || out.code == 3 {
        eprint!("{rendered}");
    } else {
        print!("{rendered}");
    }
    out.code
}
