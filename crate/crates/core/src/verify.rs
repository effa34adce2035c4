//! Ground-truth checks on execution outputs.
//!
//! Every check returns a [`Verdict`]; a failed verdict always carries a
//! witness that can be re-checked independently.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Label, LabeledGraph, NodeId, RingSpec};
use crate::sim::ExecutionResult;

/// Largest graph [`min_dominating_size_oracle`] accepts.
pub const ORACLE_MAX_NODES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("ring of {n} nodes is shorter than a window of {window}")]
    WindowTooLarge { n: usize, window: usize },
    #[error("exhaustive search is limited to {max} nodes, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("node {0} has no entry")]
    MissingNode(NodeId),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
}

/// Counterexample attached to a failed verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A node too far from every member; `nearest` is `None` when the set is
    /// empty.
    Node {
        node: NodeId,
        label: Label,
        nearest: Option<u32>,
    },
    /// Ring positions `start, start+1, ...` (cyclically) holding no member.
    Window { start: NodeId, len: usize },
    /// A monochromatic edge, or an edge touching an out-of-range colour.
    Edge { u: NodeId, v: NodeId, colour: u8 },
    Certificate {
        node: NodeId,
        label: Label,
        reason: String,
    },
    /// Two members too close to each other.
    Pair { u: NodeId, v: NodeId, distance: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub predicate: String,
    pub verdict: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn pass(predicate: &str) -> Self {
        Verdict {
            predicate: predicate.to_string(),
            verdict: true,
            witness: None,
        }
    }

    fn fail(predicate: &str, witness: Witness) -> Self {
        Verdict {
            predicate: predicate.to_string(),
            verdict: false,
            witness: Some(witness),
        }
    }
}

/// Distance from every node to the nearest member of `set`.
pub fn distances_to_set(g: &LabeledGraph, set: &BTreeSet<NodeId>) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.node_count()];
    let mut queue = VecDeque::new();
    for &v in set {
        dist[v] = Some(0);
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].expect("queued nodes have a distance");
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Whether every node is within distance `t` of `set`. The witness is the
/// node farthest from the set (smallest id among ties).
pub fn is_t_dominating(
    g: &LabeledGraph,
    set: &BTreeSet<NodeId>,
    t: u32,
) -> Result<Verdict, VerifyError> {
    if let Some(&v) = set.iter().find(|&&v| v >= g.node_count()) {
        return Err(VerifyError::UnknownNode(v));
    }
    let pred = format!("{t}-dominating");
    let dist = distances_to_set(g, set);
    let worst = g
        .nodes()
        .max_by_key(|&v| (dist[v].map_or(u64::MAX, u64::from), std::cmp::Reverse(v)))
        .expect("graphs are non-empty");
    Ok(match dist[worst] {
        Some(d) if d <= t => Verdict::pass(&pred),
        nearest => Verdict::fail(
            &pred,
            Witness::Node {
                node: worst,
                label: g.label(worst),
                nearest,
            },
        ),
    })
}

/// Whether members are pairwise more than `k` apart.
pub fn is_k_spaced(
    g: &LabeledGraph,
    set: &BTreeSet<NodeId>,
    k: u32,
) -> Result<Verdict, VerifyError> {
    if let Some(&v) = set.iter().find(|&&v| v >= g.node_count()) {
        return Err(VerifyError::UnknownNode(v));
    }
    let pred = format!("members more than {k} apart");
    for &u in set {
        let close = g
            .ball_nodes(u, k)
            .expect("node exists")
            .into_iter()
            .filter(|&(v, _)| v > u && set.contains(&v))
            .min();
        if let Some((v, distance)) = close {
            return Ok(Verdict::fail(&pred, Witness::Pair { u, v, distance }));
        }
    }
    Ok(Verdict::pass(&pred))
}

/// Whether every window of `2t + 1` consecutive ring positions holds a member.
pub fn window_check_ring(
    ring: &RingSpec,
    set: &BTreeSet<NodeId>,
    t: u32,
) -> Result<Verdict, VerifyError> {
    let n = ring.len();
    let w = 2 * t as usize + 1;
    if n < w {
        return Err(VerifyError::WindowTooLarge { n, window: w });
    }
    if let Some(&v) = set.iter().find(|&&v| v >= n) {
        return Err(VerifyError::UnknownNode(v));
    }
    let pred = format!("windows of {w} hit the set");
    let mut inside = (0..w).filter(|i| set.contains(i)).count();
    for start in 0..n {
        if inside == 0 {
            return Ok(Verdict::fail(&pred, Witness::Window { start, len: w }));
        }
        inside -= usize::from(set.contains(&start));
        inside += usize::from(set.contains(&((start + w) % n)));
    }
    Ok(Verdict::pass(&pred))
}

/// Size of a smallest `t`-dominating set, by exhaustive search.
///
/// Search is by increasing size. Each step takes the first node not yet
/// dominated and branches over the nodes able to dominate it, so on rings
/// every branch places a member in the first uncovered window of `2t + 1`.
pub fn min_dominating_size_oracle(g: &LabeledGraph, t: u32) -> Result<usize, VerifyError> {
    let n = g.node_count();
    if n > ORACLE_MAX_NODES {
        return Err(VerifyError::TooLarge {
            n,
            max: ORACLE_MAX_NODES,
        });
    }
    let balls: Vec<u32> = g
        .nodes()
        .map(|v| {
            g.ball_nodes(v, t)
                .expect("node exists")
                .into_iter()
                .fold(0u32, |m, (u, _)| m | 1 << u)
        })
        .collect();
    let full: u32 = (1 << n) - 1;

    fn search(covered: u32, budget: usize, full: u32, balls: &[u32]) -> bool {
        if covered == full {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let u = (!covered & full).trailing_zeros();
        // nodes whose ball contains u are exactly the nodes in u's ball
        let mut cands = balls[u as usize];
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            if search(covered | balls[v], budget - 1, full, balls) {
                return true;
            }
        }
        false
    }

    Ok((0..=n)
        .find(|&s| search(0, s, full, &balls))
        .expect("the whole vertex set dominates"))
}

/// Whether adjacent nodes always get different colours from `1..=q`.
pub fn is_proper_colouring(
    g: &LabeledGraph,
    colours: &[Option<u8>],
    q: u8,
) -> Result<Verdict, VerifyError> {
    if colours.len() != g.node_count() {
        return Err(VerifyError::LengthMismatch {
            expected: g.node_count(),
            got: colours.len(),
        });
    }
    let cs = colours
        .iter()
        .enumerate()
        .map(|(v, c)| c.ok_or(VerifyError::MissingNode(v)))
        .collect::<Result<Vec<u8>, _>>()?;
    let pred = format!("proper {q}-colouring");
    for (u, v) in g.edges() {
        let bad = |c: u8| c == 0 || c > q;
        if cs[u] == cs[v] || bad(cs[u]) || bad(cs[v]) {
            let colour = if bad(cs[v]) && !bad(cs[u]) {
                cs[v]
            } else {
                cs[u]
            };
            return Ok(Verdict::fail(&pred, Witness::Edge { u, v, colour }));
        }
    }
    Ok(Verdict::pass(&pred))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StretchKind {
    Member,
    NonMember,
    Survivor,
    NonSurvivor,
}

/// A maximal run of ring positions of one kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stretch {
    pub kind: StretchKind,
    /// Ring positions in path order, starting from the endpoint with the
    /// smaller label.
    pub nodes: Vec<NodeId>,
}

impl Stretch {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchDecomposition {
    /// In ring order of their first position.
    pub stretches: Vec<Stretch>,
    /// The whole ring is one stretch.
    pub degenerate: bool,
}

impl StretchDecomposition {
    pub fn longest(&self, kind: StretchKind) -> Option<&Stretch> {
        self.stretches
            .iter()
            .filter(|s| s.kind == kind)
            .max_by_key(|s| s.len())
    }
}

/// Splits a ring into maximal runs of equal kind, merging across the wrap.
pub fn stretch_decomposition(
    ring: &RingSpec,
    kinds: &[StretchKind],
) -> Result<StretchDecomposition, VerifyError> {
    let n = ring.len();
    if kinds.len() != n {
        return Err(VerifyError::LengthMismatch {
            expected: n,
            got: kinds.len(),
        });
    }
    let labels = ring.labels();
    let Some(first_break) = (0..n).find(|&i| kinds[i] != kinds[(i + n - 1) % n]) else {
        // single stretch: walk from the smallest label towards its smaller neighbour
        let start = (0..n)
            .min_by_key(|&i| labels[i])
            .expect("rings are non-empty");
        let forward = labels[(start + 1) % n] < labels[(start + n - 1) % n];
        let nodes = (0..n)
            .map(|i| {
                if forward {
                    (start + i) % n
                } else {
                    (start + n - i) % n
                }
            })
            .collect();
        return Ok(StretchDecomposition {
            stretches: vec![Stretch {
                kind: kinds[0],
                nodes,
            }],
            degenerate: true,
        });
    };
    let mut stretches = Vec::new();
    let mut run: Vec<NodeId> = Vec::new();
    for i in 0..n {
        let p = (first_break + i) % n;
        if !run.is_empty() && kinds[p] != kinds[run[0]] {
            stretches.push(run);
            run = Vec::new();
        }
        run.push(p);
    }
    stretches.push(run);
    let stretches = stretches
        .into_iter()
        .map(|mut nodes| {
            if labels[nodes[nodes.len() - 1]] < labels[nodes[0]] {
                nodes.reverse();
            }
            Stretch {
                kind: kinds[nodes[0]],
                nodes,
            }
        })
        .collect();
    Ok(StretchDecomposition {
        stretches,
        degenerate: false,
    })
}

/// Whether every path certificate starts at its node, follows edges, has at
/// most `t` hops and ends at a member.
pub fn check_certificates(g: &LabeledGraph, result: &ExecutionResult, t: u32) -> Verdict {
    let pred = format!("path certificates within {t}");
    for (v, out) in result.outputs.iter().enumerate() {
        let Some(path) = &out.path_certificate else {
            continue;
        };
        let fail = |reason: String| {
            Verdict::fail(
                &pred,
                Witness::Certificate {
                    node: v,
                    label: g.label(v),
                    reason,
                },
            )
        };
        if path.is_empty() {
            if out.bit {
                continue;
            }
            return fail("empty path from a non-member".into());
        }
        if path[0] != g.label(v) {
            return fail(format!("path starts at label {}", path[0]));
        }
        if path.len() - 1 > t as usize {
            return fail(format!("path has {} hops", path.len() - 1));
        }
        let mut nodes = Vec::with_capacity(path.len());
        for &l in path {
            match g.node_of(l) {
                Some(u) => nodes.push(u),
                None => return fail(format!("label {l} is not in the graph")),
            }
        }
        if let Some(w) = nodes
            .windows(2)
            .find(|w| !g.neighbors(w[0]).contains(&w[1]))
        {
            return fail(format!(
                "labels {} and {} are not adjacent",
                g.label(w[0]),
                g.label(w[1])
            ));
        }
        let end = *nodes.last().expect("non-empty path");
        if !result.is_member(end) {
            return fail(format!("path ends at non-member {}", g.label(end)));
        }
    }
    Verdict::pass(&pred)
}
