//! Law suites behind `ilaws check`.

use serde_json::{json, Value};

use super::codec::*;
use super::{is_file_arg, read_json, resolve_container, Bounds, Outcome};
use crate::container::{c_generate, Container};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::interaction::{il_count, InteractionLaw};
use crate::monadic::*;
use crate::residual::*;
use crate::runners::*;

pub const SUITES: [&str; 7] = ["ffil", "mcil", "runner", "residual", "degeneracy", "sweedler", "coequations"];

#[derive(Clone)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
    counterexample: Option<Value>,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.to_string(), passed, detail: detail.into(), counterexample: None }
}

/// A pass when `failure` is `None`, otherwise a failure carrying its message.
fn verdict(name: &str, failure: Option<String>, ok: &str) -> Check {
    match failure {
        None => check(name, true, ok),
        Some(msg) => check(name, false, msg),
    }
}

fn a(n: usize) -> Result<FinSet> {
    FinSet::new("A", (0..n).map(|i| format!("a{i}")).collect())
}

/// Builtin monad-comonad interaction laws: `reader<n>`, `writer<n>`, `update`, `identity`.
fn builtin_mcil(name: &str) -> Result<Mcil> {
    let sized = |prefix: &str, default: usize| {
        name.strip_prefix(prefix).and_then(|n| if n.is_empty() { Some(default) } else { n.parse().ok() })
    };
    if name == "update" {
        mcil_update(&Action::rotation(&a(2)?))
    } else if name == "identity" {
        Ok(mcil_identity())
    } else if let Some(n) = sized("reader", 2).filter(|&n| n > 0) {
        mcil_reader(&a(n)?)
    } else if let Some(n) = sized("writer", 2).filter(|&n| n > 0) {
        mcil_writer(&Monoid::cyclic(n))
    } else {
        Err(Error::Parse(format!("unknown builtin instance `{name}`")))
    }
}

/// A builtin name, or a file `{"instance": name, "law": law}` replacing the law table.
fn load_mcil_target(target: &str) -> Result<(Mcil, InteractionLaw)> {
    if !is_file_arg(target) {
        let m = builtin_mcil(target)?;
        let law = m.law.clone();
        return Ok((m, law));
    }
    let v = read_json(target)?;
    let name = v.get("instance").and_then(Value::as_str).ok_or_else(|| Error::Parse("missing field `instance`".into()))?;
    let m = builtin_mcil(name)?;
    let law = match v.get("law") {
        Some(l) => parse_law(l)?,
        None => m.law.clone(),
    };
    Ok((m, law))
}

fn mcil_counterexample(law: &InteractionLaw, t: &ContainerMonad, f: &McilFailure) -> Value {
    let sh = |c: &Container, s: usize| c.shapes.elem(s).to_string();
    match f {
        McilFailure::Unit { d_shape } => {
            let (p, q) = law.entry(t.unit, *d_shape);
            json!({
                "square": "unit",
                "monad_shape": sh(&law.f, t.unit),
                "comonad_shape": sh(&law.g, *d_shape),
                "entry": [law.f.pos(t.unit).elem(p), law.g.pos(*d_shape).elem(q)],
            })
        }
        McilFailure::Mult { s, f, d_shape } => json!({
            "square": "multiplication",
            "monad_shape": sh(&law.f, *s),
            "inner_shapes": f.iter().map(|&u| sh(&law.f, u)).collect::<Vec<_>>(),
            "comonad_shape": sh(&law.g, *d_shape),
        }),
    }
}

fn suite_mcil(target: &str) -> Result<Vec<Check>> {
    let (m, law) = load_mcil_target(target)?;
    let mut out = vec![
        verdict("monad laws", m.t.check_laws().err().map(|e| e.to_string()), &format!("{} holds", m.t.name)),
        verdict("comonad laws", m.d.check_laws().err().map(|e| e.to_string()), &format!("{} holds", m.d.name)),
    ];
    let rep = mcil_check(&m.t, &m.d, &law)?;
    let detail = format!("{} unit and {} multiplication instances", rep.unit_checked, rep.mult_checked);
    let mut c = match &rep.failure {
        None => check("interaction squares", true, detail),
        Some(f) => check("interaction squares", false, f.to_string()),
    };
    c.counterexample = rep.failure.as_ref().map(|f| mcil_counterexample(&law, &m.t, f));
    out.push(c);
    Ok(out)
}

fn suite_ffil(target: &str, bounds: &Bounds) -> Result<Vec<Check>> {
    let law = if is_file_arg(target) { parse_law(&read_json(target)?)? } else { builtin_mcil(target)?.law };
    let (checked, failure) = pure_naturality_check(&ResidualLaw::embed(&law, ResidualMonad::Identity)?, bounds.max_carrier)?;
    Ok(vec![
        check("table", true, format!("{} entries", law.table.len())),
        verdict("binaturality", failure, &format!("{checked} instances at carriers <= {}", bounds.max_carrier)),
    ])
}

fn round_trip(name: &str, same: bool) -> Check {
    check(name, same, if same { "identity" } else { "differs" })
}

fn runner_round_trips(r: &Runner) -> Result<Vec<Check>> {
    Ok(vec![
        round_trip("state map round trip", state_map_to_runner(&runner_to_state_map(r))? == *r),
        round_trip("dual coalgebra round trip", coalgebra_to_runner(&runner_to_coalgebra(r)?)? == *r),
        round_trip("costate round trip", costate_family_to_runner(&runner_to_costate_family(r)?, &r.c)? == *r),
    ])
}

fn runs_agree(r: &Runner, depth: usize) -> Result<Check> {
    let trees = enumerate_trees(&r.c, &[0usize, 1], depth)?;
    let mut checked = 0;
    for t in &trees {
        for y in 0..r.state.len() {
            let (a, b) = run_both(r, t, y)?;
            checked += 1;
            if a != b {
                return Ok(check("runs agree with the dual machine", false, format!("tree {t:?} from state {y}: {a:?} vs {b:?}")));
            }
        }
    }
    Ok(check("runs agree with the dual machine", true, format!("{checked} runs, depth <= {depth}")))
}

fn suite_runner(targets: &[String], bounds: &Bounds) -> Result<Vec<Check>> {
    let depth = bounds.max_depth.min(2);
    if targets[0] == "update-lens" {
        let action = Action::rotation(&a(2)?);
        let m = &action.monoid;
        let y = FinSet::range("Y", 4);
        let lkp: Vec<usize> = (0..4).map(|v| v / 2).collect();
        let upd: Vec<Vec<usize>> = (0..4).map(|v| (0..2).map(|b| action.act(v / 2, b) * 2 + m.mul(v % 2, b)).collect()).collect();
        let r = update_lens_runner(&action, &y, &lkp, &upd)?;
        let t = monad_update(&action)?;
        let mut out = vec![
            verdict("runner laws", runner_check(&r, &t)?, "unit and multiplication hold"),
            verdict("state map squares", state_map_check(&runner_to_state_map(&r), &t)?, "hold"),
            verdict("dual coalgebra squares", coalgebra_check(&runner_to_coalgebra(&r)?, &t)?, "hold"),
            verdict("costate squares", costate_check(&runner_to_costate_family(&r)?, &t)?, "hold"),
        ];
        out.extend(runner_round_trips(&r)?);
        return Ok(out);
    }
    let [sig, runner] = targets else {
        return Err(Error::Parse("runner suite takes `update-lens` or a signature and a runner file".into()));
    };
    let c = resolve_container(sig)?;
    let (r, _) = parse_runner(&c, &read_json(runner)?)?;
    let mut out = runner_round_trips(&r)?;
    out.push(runs_agree(&r, depth)?);
    Ok(out)
}

fn suite_residual(targets: &[String], bounds: &Bounds) -> Result<Vec<Check>> {
    match targets[0].as_str() {
        "exceptions" => {
            let (t, d, law) = exceptions_example(&a(2)?, &FinSet::from_strs("E", &["e0", "e1"])?)?;
            let rep = residual_mcil_check(&t, &d, &law)?;
            let (checked, nat) = pure_naturality_check(&law, bounds.max_carrier.min(2))?;
            Ok(vec![
                verdict("residual monad laws", law.r.check_laws(bounds.max_carrier, 0)?, "hold"),
                verdict("residual interaction squares", rep.failure, &format!("{} unit and {} multiplication instances", rep.unit_checked, rep.mult_checked)),
                verdict("pure naturality", nat, &format!("{checked} instances")),
            ])
        }
        "kleisli" => {
            let (law, lhs, rhs) = kleisli_counterexample()?;
            let (_, nat) = pure_naturality_check(&law, bounds.max_carrier)?;
            let sizes = |v: &RVal| if let RVal::Bag(xs) = v { xs.len() } else { 1 };
            let mut gap = check("kleisli square differs", lhs != rhs, format!("{} vs {} outcomes", sizes(&lhs), sizes(&rhs)));
            gap.counterexample = Some(json!({ "distributed": lhs.to_string(), "mapped": rhs.to_string() }));
            Ok(vec![verdict("pure naturality", nat, "holds"), gap])
        }
        _ => {
            let [sig, runner] = targets else {
                return Err(Error::Parse("residual suite takes `exceptions`, `kleisli`, or a signature and a runner file".into()));
            };
            let c = resolve_container(sig)?;
            let (rr, _, _) = parse_residual_runner(&c, &read_json(runner)?)?;
            let back = residual_state_map_to_runner(&residual_runner_to_state_map(&rr))?;
            Ok(vec![round_trip("state map round trip", back == rr)])
        }
    }
}

fn suite_degeneracy(target: &str, bounds: &Bounds) -> Result<Vec<Check>> {
    if target == "nelist" {
        let inst = sweedler_nelist(3)?;
        let r = assoc_op_degeneracy(&inst.mcil, &BinaryOp { shape: 1, args: vec![0, 1] })?;
        let ok = r.associative && r.violations.is_empty();
        return Ok(vec![check(
            "associative operation collapses",
            ok,
            format!("{} comonad shapes see only the outer arguments", r.checked - r.violations.len()),
        )]);
    }
    let f = resolve_container(target)?;
    let empty = (0..f.num_shapes()).any(|s| f.arity(s) == 0);
    let gs = c_generate(3, bounds.max_carrier);
    let interacting = gs.iter().filter(|g| il_count(&f, g) > 0).count();
    let detail = if empty {
        format!("no interacting functor: none of {} generated nonzero functors interacts", gs.len())
    } else {
        format!("{interacting} of {} generated functors interact", gs.len())
    };
    Ok(vec![check("degeneracy", !empty || interacting == 0, detail)])
}

fn suite_sweedler(target: &str, bounds: &Bounds) -> Result<Vec<Check>> {
    let inst = match target {
        "nelist" => sweedler_nelist(bounds.max_depth.max(2))?,
        "update" => sweedler_update(&Action::rotation(&a(2)?))?,
        _ => return Err(Error::Parse(format!("unknown Sweedler instance `{target}`"))),
    };
    let rep = inst.mcil.check()?;
    Ok(vec![
        verdict("comonad laws", inst.comonad.check_laws().err().map(|e| e.to_string()), "hold"),
        verdict("comonad map squares", sweedler_squares(&inst.monad, &inst.comonad, &inst.iota)?, "hold"),
        verdict(
            "interaction squares",
            rep.failure.map(|f| f.to_string()),
            &format!("{} instances, {} skipped beyond the list bound", rep.unit_checked + rep.mult_checked, rep.mult_skipped),
        ),
    ])
}

fn suite_coequations(target: &str) -> Result<Vec<Check>> {
    match target {
        "pair-choice" => {
            let inst = sweedler_nelist(2)?;
            let r = coequation_checks(&inst.comonad, &pair_choice_cooperation())?;
            Ok(vec![
                check("coassociativity", r.coassoc, ""),
                check("left corectangularity", r.left_corect, ""),
                check("right corectangularity", r.right_corect, ""),
            ])
        }
        "theorem" => {
            let ds = comonad_enumerate(2, 2)?;
            let (n, bad) = corectangularity_theorem(&ds)?;
            let detail = match &bad {
                None => format!("{n} coassociative cooperations over {} comonads, all corectangular", ds.len()),
                Some((i, c)) => format!("comonad {i} with cooperation {c:?} is coassociative but not corectangular"),
            };
            Ok(vec![check("coassociative implies corectangular", bad.is_none(), detail)])
        }
        "cofree" => {
            let m = cofree_coassoc_counterexample(2)?;
            let detail = m.as_ref().map_or("none found".to_string(), |m| format!("machine with {} states", m.num_states()));
            Ok(vec![check("cofree cooperation is not coassociative", m.is_some(), detail)])
        }
        _ => Err(Error::Parse(format!("unknown coequation target `{target}`"))),
    }
}

pub(super) fn cmd_check(suite: &str, targets: &[String], bounds: &Bounds) -> Result<Outcome> {
    let checks = match suite {
        "ffil" => targets.iter().map(|t| suite_ffil(t, bounds)).collect::<Result<Vec<_>>>()?.concat(),
        "mcil" => targets.iter().map(|t| suite_mcil(t)).collect::<Result<Vec<_>>>()?.concat(),
        "runner" => suite_runner(targets, bounds)?,
        "residual" => suite_residual(targets, bounds)?,
        "degeneracy" => targets.iter().map(|t| suite_degeneracy(t, bounds)).collect::<Result<Vec<_>>>()?.concat(),
        "sweedler" => targets.iter().map(|t| suite_sweedler(t, bounds)).collect::<Result<Vec<_>>>()?.concat(),
        "coequations" => targets.iter().map(|t| suite_coequations(t)).collect::<Result<Vec<_>>>()?.concat(),
        other => return Err(Error::Parse(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    };
    let passed = checks.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            text.push_str(&format!("{mark} {}\n", c.name));
        } else {
            text.push_str(&format!("{mark} {}: {}\n", c.name, c.detail));
        }
        if let Some(cx) = &c.counterexample {
            text.push_str(&format!("  counterexample: {cx}\n"));
        }
    }
    let json_checks: Vec<Value> = checks
        .iter()
        .map(|c| {
            let mut v = json!({ "name": c.name, "passed": c.passed, "detail": c.detail });
            if let Some(cx) = &c.counterexample {
                v["counterexample"] = cx.clone();
            }
            v
        })
        .collect();
    Ok(Outcome {
        code: if passed { 0 } else { 1 },
        text,
        json: json!({ "suite": suite, "targets": targets, "passed": passed, "checks": json_checks }),
    })
}
