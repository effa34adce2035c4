//! The synchronous LOCAL round engine.
//!
//! In the LOCAL model the state of a node after `r` rounds is a function of
//! its radius-`r` [`View`], so a deterministic algorithm is modelled as a pure
//! decision rule on the final view. [`execute`] evaluates that rule at every
//! node and checks the algorithm's declared round count by re-deciding on the
//! smaller ball.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Label, LabeledGraph, NodeId, View, ViewError};

/// The local output of one node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeOutput {
    /// Membership in the constructed set.
    #[serde(with = "bit")]
    pub bit: bool,
    /// Labels of a path from this node to a claimed member, when the
    /// algorithm provides one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path_certificate: Option<Vec<Label>>,
}

impl NodeOutput {
    pub fn member(bit: bool) -> Self {
        NodeOutput {
            bit,
            path_certificate: None,
        }
    }

    pub fn with_path(bit: bool, path: Vec<Label>) -> Self {
        NodeOutput {
            bit,
            path_certificate: Some(path),
        }
    }
}

mod bit {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(b: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(*b))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(serde::de::Error::custom(format!(
                "bit must be 0 or 1, got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("algorithm needs a ring: {0}")]
    NotARing(String),
    #[error("view of radius {got} too small, {needed} rounds required")]
    ViewTooSmall { needed: u32, got: u32 },
    #[error(transparent)]
    View(#[from] ViewError),
    #[error("nested execution failed: {0}")]
    Nested(String),
}

/// A deterministic per-node decision rule.
///
/// `decide` may consult only the view it is given. Equal views must give equal
/// outputs.
pub trait NodeAlgorithm: Send + Sync {
    fn name(&self) -> &str;

    /// Integer parameters the rule depends on (`T`, `L`, ...).
    fn parameters(&self) -> BTreeMap<String, i64>;

    /// Number of rounds the algorithm needs; its output must be decidable from
    /// a view of this radius.
    fn rounds(&self) -> u32;

    fn decide(&self, view: &View) -> Result<NodeOutput, DecideError>;
}

/// A family of algorithms parameterized by round budget and label bound.
pub trait AlgorithmFamily: Send + Sync {
    fn name(&self) -> &str;

    fn instantiate(&self, t: u32, label_bound: Label) -> Box<dyn NodeAlgorithm>;
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("algorithm `{name}` needs {declared} rounds but only {budget} are available")]
    RoundBudget {
        name: String,
        declared: u32,
        budget: u32,
    },
    #[error("node {node} (label {label}): {source}")]
    Decide {
        node: NodeId,
        label: Label,
        source: DecideError,
    },
    #[error(
        "node {node} (label {label}) decides differently with {declared} rounds \
         than with the full budget"
    )]
    RoundsCrossCheck {
        node: NodeId,
        label: Label,
        declared: u32,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("nested simulation: {0}")]
    Containment(#[from] ViewError),
}

/// Outputs of one synchronous execution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionResult {
    /// Indexed by node.
    pub outputs: Vec<NodeOutput>,
    pub rounds_used: u32,
    pub member_set: BTreeSet<NodeId>,
}

impl ExecutionResult {
    pub fn size(&self) -> usize {
        self.member_set.len()
    }

    pub fn is_member(&self, v: NodeId) -> bool {
        self.outputs[v].bit
    }

    pub fn bits(&self) -> Vec<bool> {
        self.outputs.iter().map(|o| o.bit).collect()
    }

    pub fn member_labels(&self, g: &LabeledGraph) -> BTreeSet<Label> {
        self.member_set.iter().map(|&v| g.label(v)).collect()
    }
}

/// Runs `alg` at every node of `g` with a budget of `t` rounds.
pub fn execute(
    alg: &dyn NodeAlgorithm,
    g: &LabeledGraph,
    t: u32,
) -> Result<ExecutionResult, SimError> {
    let declared = alg.rounds();
    if declared > t {
        return Err(SimError::RoundBudget {
            name: alg.name().to_string(),
            declared,
            budget: t,
        });
    }
    let outputs = g
        .nodes()
        .into_par_iter()
        .map(|v| {
            let fail = |source| SimError::Decide {
                node: v,
                label: g.label(v),
                source,
            };
            let out = alg.decide(&g.ball(v, t)?).map_err(fail)?;
            if declared < t {
                let short = alg.decide(&g.ball(v, declared)?).map_err(fail)?;
                if short != out {
                    return Err(SimError::RoundsCrossCheck {
                        node: v,
                        label: g.label(v),
                        declared,
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, SimError>>()?;
    let member_set = outputs
        .iter()
        .enumerate()
        .filter(|(_, o)| o.bit)
        .map(|(v, _)| v)
        .collect();
    Ok(ExecutionResult {
        outputs,
        rounds_used: declared,
        member_set,
    })
}

/// Runs `alg` with budget `t` on node `w` using only what `view` shows.
///
/// The `t`-ball of `w` must lie inside `view`; a violation is an error rather
/// than a silently wrong answer.
pub fn execute_at(
    alg: &dyn NodeAlgorithm,
    view: &View,
    w: Label,
    t: u32,
) -> Result<NodeOutput, SimError> {
    if alg.rounds() > t {
        return Err(SimError::RoundBudget {
            name: alg.name().to_string(),
            declared: alg.rounds(),
            budget: t,
        });
    }
    let sub = view.sub_view(w, t)?;
    alg.decide(&sub).map_err(|source| SimError::Decide {
        node: usize::MAX,
        label: w,
        source,
    })
}

/// Whether two nodes are in indistinguishable states.
pub fn views_equal(a: &View, b: &View) -> bool {
    a == b
}
