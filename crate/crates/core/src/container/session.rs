//! Finite (non-recursive) session types, their syntactic dual, and their
//! reading as containers.

use serde::{Deserialize, Serialize};

use super::{c_coproduct, c_id, c_product, Container};
use crate::container::{c_compose, c_exponent, c_writer};
use crate::error::Result;
use crate::finset::FinSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SessionType {
    Return,
    InternalChoice { left: Box<SessionType>, right: Box<SessionType> },
    ExternalChoice { left: Box<SessionType>, right: Box<SessionType> },
    Output { values: Vec<String>, rest: Box<SessionType> },
    Input { values: Vec<String>, rest: Box<SessionType> },
}

use SessionType::*;

impl SessionType {
    pub fn internal(l: SessionType, r: SessionType) -> Self {
        InternalChoice { left: Box::new(l), right: Box::new(r) }
    }

    pub fn external(l: SessionType, r: SessionType) -> Self {
        ExternalChoice { left: Box::new(l), right: Box::new(r) }
    }

    pub fn output(a: &FinSet, rest: SessionType) -> Self {
        Output { values: a.elems().to_vec(), rest: Box::new(rest) }
    }

    pub fn input(a: &FinSet, rest: SessionType) -> Self {
        Input { values: a.elems().to_vec(), rest: Box::new(rest) }
    }

    pub fn depth(&self) -> usize {
        match self {
            Return => 0,
            InternalChoice { left, right } | ExternalChoice { left, right } => 1 + left.depth().max(right.depth()),
            Output { rest, .. } | Input { rest, .. } => 1 + rest.depth(),
        }
    }

    /// True when every input or external choice continues with a single-shape type.
    ///
    /// On this fragment the syntactic dual matches the container dual.
    pub fn dual_agrees(&self) -> Result<bool> {
        Ok(match self {
            Return => true,
            InternalChoice { left, right } => left.dual_agrees()? && right.dual_agrees()?,
            ExternalChoice { left, right } => {
                left.dual_agrees()?
                    && right.dual_agrees()?
                    && session_to_container(left)?.num_shapes() == 1
                    && session_to_container(right)?.num_shapes() == 1
            }
            Output { rest, .. } => rest.dual_agrees()?,
            Input { rest, .. } => rest.dual_agrees()? && session_to_container(rest)?.num_shapes() == 1,
        })
    }

    /// True when the type contains no input and no external choice.
    pub fn is_input_free(&self) -> bool {
        match self {
            Return => true,
            InternalChoice { left, right } => left.is_input_free() && right.is_input_free(),
            ExternalChoice { .. } | Input { .. } => false,
            Output { rest, .. } => rest.is_input_free(),
        }
    }
}

fn values_set(values: &[String]) -> Result<FinSet> {
    FinSet::new("A", values.to_vec())
}

/// Clause-by-clause dual: choices swap, output and input swap, `Return` is fixed.
pub fn session_dual(t: &SessionType) -> SessionType {
    match t {
        Return => Return,
        InternalChoice { left, right } => {
            ExternalChoice { left: Box::new(session_dual(left)), right: Box::new(session_dual(right)) }
        }
        ExternalChoice { left, right } => {
            InternalChoice { left: Box::new(session_dual(left)), right: Box::new(session_dual(right)) }
        }
        Output { values, rest } => Input { values: values.clone(), rest: Box::new(session_dual(rest)) },
        Input { values, rest } => Output { values: values.clone(), rest: Box::new(session_dual(rest)) },
    }
}

/// Reads a session type as a container, with `Return` as the identity.
pub fn session_to_container(t: &SessionType) -> Result<Container> {
    match t {
        Return => Ok(c_id()),
        InternalChoice { left, right } => c_coproduct(&session_to_container(left)?, &session_to_container(right)?),
        ExternalChoice { left, right } => c_product(&session_to_container(left)?, &session_to_container(right)?),
        Output { values, rest } => c_compose(&c_writer(&values_set(values)?), &session_to_container(rest)?),
        Input { values, rest } => c_exponent(&values_set(values)?, &session_to_container(rest)?),
    }
}

/// All session types of depth at most `depth` whose value sets are drawn from `alphabets`.
pub fn enumerate_sessions(depth: usize, alphabets: &[FinSet]) -> Vec<SessionType> {
    let mut all = vec![Return];
    for _ in 0..depth {
        let prev = all.clone();
        let mut next = vec![Return];
        for l in &prev {
            for r in &prev {
                next.push(SessionType::internal(l.clone(), r.clone()));
            }
        }
        for l in &prev {
            for r in &prev {
                next.push(SessionType::external(l.clone(), r.clone()));
            }
        }
        for a in alphabets {
            for r in &prev {
                next.push(SessionType::output(a, r.clone()));
                next.push(SessionType::input(a, r.clone()));
            }
        }
        all = next;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::container::find_iso;
    use crate::dual::dual;

    fn a2() -> FinSet {
        FinSet::from_strs("A", &["a0", "a1"]).unwrap()
    }

    #[test]
    fn dual_clauses() {
        assert_eq!(session_dual(&Return), Return);
        assert_eq!(session_dual(&SessionType::output(&a2(), Return)), SessionType::input(&a2(), Return));
    }

    #[test]
    fn json_uses_kind_tag() {
        let t = SessionType::output(&a2(), Return);
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["kind"], "Output");
        assert_eq!(v["rest"]["kind"], "Return");
        let back: SessionType = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn containers_of_basic_types() {
        let out = session_to_container(&SessionType::output(&a2(), Return)).unwrap();
        assert_eq!(out.num_shapes(), 2);
        let inp = session_to_container(&SessionType::input(&a2(), Return)).unwrap();
        assert_eq!((inp.num_shapes(), inp.arity(0)), (1, 2));
    }

    #[test]
    fn input_over_output_disagrees() {
        let b = FinSet::from_strs("B", &["b0", "b1"]).unwrap();
        let t = SessionType::input(&a2(), SessionType::output(&b, Return));
        assert!(!t.dual_agrees().unwrap());
        let semantic = dual(&session_to_container(&t).unwrap()).unwrap();
        let syntactic = session_to_container(&session_dual(&t)).unwrap();
        assert!(find_iso(&semantic, &syntactic).is_none());
    }
}
