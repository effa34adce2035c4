//! The ring cut-and-paste lower bound for T-dominating sets.
//!
//! Two executions on the rings `[1..n]` and `[n+1..2n]` fix a member `m_i` in
//! every segment of `2T+1` positions. The radius-`T` paths around
//! `m_{4k}` and `m_{4k+2}`, joined through the middle node of segment
//! `S_{4k+1}`, are glued into a new ring `R_c` of size `n` together with a
//! filler path of unused labels. Every glued representative keeps its
//! radius-`T` view, so it still outputs 1 on `R_c`, and each glued path is
//! forced to hold a third member between its two representatives.

use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{build_ring, GraphError, Label, LabeledGraph, RingSpec};
use crate::sim::{execute, views_equal, AlgorithmFamily, ExecutionResult, SimError};
use crate::verify::{is_t_dominating, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("candidate output on {ring} is not {t}-dominating")]
    NotDominating {
        ring: String,
        t: u32,
        verdict: Verdict,
    },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameter check with the derived sizes of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    pub reason: Option<String>,
    /// Number of segments per source ring, `n / (2T+1)`.
    pub segments: Option<u64>,
    pub c: Option<u64>,
    /// Glue paths available from both source rings.
    pub paths_available: Option<u64>,
    pub filler: Option<i64>,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Whether the construction applies to `(n, T, lambda)`.
pub fn feasible(n: u64, t: u32, lambda: Rational64) -> Feasibility {
    let mut f = Feasibility {
        feasible: false,
        reason: None,
        segments: None,
        c: None,
        paths_available: None,
        filler: None,
    };
    let fail = |mut f: Feasibility, r: String| {
        f.reason = Some(r);
        f
    };
    if lambda <= Rational64::from_integer(0) {
        return fail(f, "λ must be > 0".into());
    }
    if lambda >= Rational64::new(3, 2) {
        return fail(f, format!("λ must be < 3/2, got {lambda}"));
    }
    let w = 2 * u64::from(t) + 1;
    if n == 0 || !n.is_multiple_of(w) {
        return fail(f, format!("2T+1 = {w} must divide n = {n}"));
    }
    let segs = n / w;
    f.segments = Some(segs);
    if !segs.is_multiple_of(4) {
        return fail(f, format!("4 must divide n/(2T+1) = {segs}"));
    }
    let c = floor_div(*lambda.numer() * segs as i64, 3 * *lambda.denom()) as u64;
    let paths = segs / 2;
    let filler = n as i64 - (c * (4 * u64::from(t) + 3)) as i64;
    f.c = Some(c);
    f.paths_available = Some(paths);
    f.filler = Some(filler);
    if c > paths {
        return fail(f, format!("c = {c} exceeds the {paths} available paths"));
    }
    let need = 8 * i64::from(t) + 4;
    if filler < need {
        return fail(f, format!("filler {filler} < 8T+4 = {need}"));
    }
    f.feasible = true;
    f
}

/// `P_k`: the radius-`T` path around `m_{4k}`, the separator, and the path
/// around `m_{4k+2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluePath {
    pub k: usize,
    pub left: Label,
    pub separator: Label,
    pub right: Label,
    pub nodes: Vec<Label>,
}

/// Every intermediate object of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryArtifacts {
    pub n: u64,
    pub t: u32,
    pub lambda: String,
    pub label_bound: Label,
    /// `S_i` over both source rings, `i` in `0..2n/(2T+1)`.
    pub segments: Vec<Vec<Label>>,
    /// `m_i`, the smallest-label member of `S_i`.
    pub representatives: Vec<Label>,
    /// `(2j, H_{2j})` for both source rings.
    pub ball_paths: Vec<(usize, Vec<Label>)>,
    /// `P_k` for both source rings.
    pub glue_paths: Vec<GluePath>,
    pub c: u64,
    /// Indices `k` of the glue paths used, in ring order.
    pub chosen: Vec<usize>,
    pub filler: Vec<Label>,
    pub composed: RingSpec,
}

/// One source ring with its execution.
struct Source {
    base: Label,
    graph: LabeledGraph,
    result: ExecutionResult,
}

impl Source {
    fn label(&self, pos: usize) -> Label {
        self.base + pos as Label + 1
    }
}

/// Instance with the executions that produced it.
pub struct CutAndPasteInstance {
    pub artifacts: AdversaryArtifacts,
    sources: [Source; 2],
    composed_graph: LabeledGraph,
}

/// Runs the candidate on both source rings and glues `R_c`.
pub fn build_cut_and_paste_instance(
    family: &dyn AlgorithmFamily,
    n: u64,
    t: u32,
    lambda: Rational64,
) -> Result<CutAndPasteInstance, AdversaryError> {
    let f = feasible(n, t, lambda);
    if !f.feasible {
        return Err(AdversaryError::Infeasible(f.reason.unwrap_or_default()));
    }
    let bound = 2 * n;
    let alg = family.instantiate(t, bound);
    let nn = n as usize;
    let w = 2 * t as usize + 1;
    let ti = t as usize;
    let segs = nn / w;
    let mut sources = Vec::with_capacity(2);
    for (idx, base) in [0, n].into_iter().enumerate() {
        let graph = build_ring((base + 1..=base + n).collect(), bound)?;
        let result = execute(alg.as_ref(), &graph, t)?;
        let verdict = is_t_dominating(&graph, &result.member_set, t)
            .expect("member set comes from the graph");
        if !verdict.verdict {
            return Err(AdversaryError::NotDominating {
                ring: format!("R_{}", idx + 1),
                t,
                verdict,
            });
        }
        sources.push(Source {
            base,
            graph,
            result,
        });
    }

    let mut segments = Vec::with_capacity(2 * segs);
    let mut rep_pos = Vec::with_capacity(2 * segs);
    for s in &sources {
        for i in 0..segs {
            segments.push((i * w..(i + 1) * w).map(|p| s.label(p)).collect());
            // labels grow with position, so the first member has the smallest label
            let m = (i * w..(i + 1) * w)
                .find(|&p| s.result.is_member(p))
                .expect("a dominating set meets every segment");
            rep_pos.push(m);
        }
    }
    let representatives: Vec<Label> = rep_pos
        .iter()
        .enumerate()
        .map(|(i, &p)| sources[i / segs].label(p))
        .collect();
    let ball = |i: usize| -> Vec<Label> {
        let s = &sources[i / segs];
        (0..w)
            .map(|d| s.label((rep_pos[i] + nn + d - ti) % nn))
            .collect()
    };
    let ball_paths: Vec<(usize, Vec<Label>)> = (0..segs).map(|j| (2 * j, ball(2 * j))).collect();

    let mut glue_paths = Vec::with_capacity(segs / 2);
    for k in 0..segs / 2 {
        let (src, kl) = (k / (segs / 4), k % (segs / 4));
        let i = src * segs + 4 * kl;
        let separator = sources[src].label(w * (4 * kl + 1) + ti);
        let mut nodes = ball(i);
        nodes.push(separator);
        nodes.extend(ball(i + 2));
        glue_paths.push(GluePath {
            k,
            left: representatives[i],
            separator,
            right: representatives[i + 2],
            nodes,
        });
    }

    let c = f.c.expect("feasible instances have c") as usize;
    let chosen: Vec<usize> = (0..c).collect();
    let mut labels: Vec<Label> = chosen
        .iter()
        .flat_map(|&k| glue_paths[k].nodes.iter().copied())
        .collect();
    let used: BTreeSet<Label> = labels.iter().copied().collect();
    let filler: Vec<Label> = (1..=bound)
        .filter(|l| !used.contains(l))
        .take(nn - labels.len())
        .collect();
    labels.extend(&filler);
    let composed = RingSpec::new(labels)?;
    let composed_graph = composed.to_graph(bound)?;

    let artifacts = AdversaryArtifacts {
        n,
        t,
        lambda: lambda.to_string(),
        label_bound: bound,
        segments,
        representatives,
        ball_paths,
        glue_paths,
        c: c as u64,
        chosen,
        filler,
        composed,
    };
    let [a, b]: [Source; 2] = sources.try_into().ok().expect("two source rings");
    Ok(CutAndPasteInstance {
        artifacts,
        sources: [a, b],
        composed_graph,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub k: usize,
    pub left: Label,
    pub right: Label,
    pub left_view_equal: bool,
    pub right_view_equal: bool,
    pub left_member: bool,
    pub right_member: bool,
    /// Members among the `2T+1` nodes strictly between the two.
    pub members_between: usize,
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        self.left_view_equal
            && self.right_view_equal
            && self.left_member
            && self.right_member
            && self.members_between >= 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutAndPasteReport {
    pub algorithm: String,
    pub n: u64,
    pub t: u32,
    pub lambda: String,
    pub c: u64,
    /// `3c + 4`.
    pub bound: u64,
    /// `λ n / (2T+1)`, exact.
    pub target: String,
    pub target_approx: f64,
    pub bound_exceeds_target: bool,
    pub member_count: usize,
    pub rounds_used: u32,
    pub pairs: Vec<PairCheck>,
    pub filler_len: usize,
    pub filler_members: usize,
    pub composed_dominating: Verdict,
    /// All pair checks pass, the filler holds at least 4 members and the
    /// member count reaches the bound.
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub composed_ring: Option<Vec<Label>>,
}

impl CutAndPasteInstance {
    /// Position of `label` in its source ring.
    fn source_of(&self, label: Label) -> (&Source, usize) {
        let n = self.artifacts.n;
        let s = &self.sources[usize::from(label > n)];
        (s, (label - s.base - 1) as usize)
    }

    /// Runs the candidate on `R_c` and checks every step of the argument.
    pub fn run(
        &self,
        family: &dyn AlgorithmFamily,
        include_ring: bool,
    ) -> Result<CutAndPasteReport, AdversaryError> {
        let a = &self.artifacts;
        let t = a.t;
        let g = &self.composed_graph;
        let alg = family.instantiate(t, a.label_bound);
        let res = execute(alg.as_ref(), g, t)?;
        let member = |l: Label| res.is_member(g.node_of(l).expect("label is on R_c"));
        let view_equal = |l: Label| -> Result<bool, AdversaryError> {
            let (s, p) = self.source_of(l);
            let here = g.ball(g.node_of(l).expect("label is on R_c"), t)?;
            Ok(views_equal(&s.graph.ball(p, t)?, &here))
        };
        let ti = t as usize;
        let mut pairs = Vec::with_capacity(a.chosen.len());
        for &k in &a.chosen {
            let p = &a.glue_paths[k];
            pairs.push(PairCheck {
                k,
                left: p.left,
                right: p.right,
                left_view_equal: view_equal(p.left)?,
                right_view_equal: view_equal(p.right)?,
                left_member: member(p.left),
                right_member: member(p.right),
                members_between: p.nodes[ti + 1..=3 * ti + 1]
                    .iter()
                    .filter(|&&l| member(l))
                    .count(),
            });
        }
        let filler_members = a.filler.iter().filter(|&&l| member(l)).count();
        let lambda: Rational64 = a.lambda.parse().expect("written from a Rational64");
        let target = lambda * Rational64::new(a.n as i64, 2 * i64::from(t) + 1);
        let bound = 3 * a.c + 4;
        let bound_exceeds_target = Rational64::from_integer(bound as i64) > target;
        let composed_dominating =
            is_t_dominating(g, &res.member_set, t).expect("member set comes from the graph");
        let certified = pairs.iter().all(PairCheck::passed)
            && filler_members >= 4
            && res.size() as u64 >= bound
            && bound_exceeds_target;
        Ok(CutAndPasteReport {
            algorithm: family.name().to_string(),
            n: a.n,
            t,
            lambda: a.lambda.clone(),
            c: a.c,
            bound,
            target: target.to_string(),
            target_approx: *target.numer() as f64 / *target.denom() as f64,
            bound_exceeds_target,
            member_count: res.size(),
            rounds_used: res.rounds_used,
            pairs,
            filler_len: a.filler.len(),
            filler_members,
            composed_dominating,
            certified,
            composed_ring: include_ring.then(|| a.composed.labels().to_vec()),
        })
    }
}

/// Builds `R_c` for `family` and reports on the execution there.
pub fn run_cut_and_paste_experiment(
    family: &dyn AlgorithmFamily,
    n: u64,
    t: u32,
    lambda: Rational64,
    include_ring: bool,
) -> Result<CutAndPasteReport, AdversaryError> {
    build_cut_and_paste_instance(family, n, t, lambda)?.run(family, include_ring)
}
