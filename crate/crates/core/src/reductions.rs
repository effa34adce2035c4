//! 8-colouring rings with a T-dominating-set algorithm as a subroutine.
//!
//! Each node gathers its radius-`2yT` view and simulates the candidate
//! algorithm inside it: once with budget `T` on every node within `2yT - T`
//! (members and non-members), and once with budget `T'` on the nodes of its
//! own long member stretch within `yT` (survivors and non-survivors). Every
//! stretch is then 2-coloured by parity of the distance from its
//! smaller-labelled end, with a separate colour pair per kind.

use std::fmt::Write as _;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithms::log_star;
use crate::graph::{GraphError, Label, LabeledGraph, NodeId, RingSpec, RingStrip, View, ViewError};
use crate::sim::{execute, execute_at, views_equal, AlgorithmFamily, NodeAlgorithm, SimError};
use crate::verify::{stretch_decomposition, Stretch, StretchDecomposition, StretchKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("x must lie strictly between 0 and 1, got {0}")]
    InvalidX(Rational64),
    #[error("β must be positive, got {0}")]
    InvalidBeta(Rational64),
    #[error("below scale: T = {0} (T must be at least 1)")]
    BelowScale(u32),
    #[error("T' = {t_prime} exceeds T = {t}")]
    PrimeExceedsT { t: u32, t_prime: u32 },
    #[error("label {label} exceeds the ring size {n}")]
    LabelOutOfRange { label: Label, n: usize },
    #[error("stretch of {len} nodes is shorter than yT = {needed}")]
    StretchTooShort { len: usize, needed: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    View(#[from] ViewError),
}

/// Explicit round budgets replacing the `log*`-derived ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetOverrides {
    pub t: Option<u32>,
    pub t_prime: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EightColourParams {
    pub n: usize,
    pub x: Rational64,
    pub beta: Rational64,
    /// Smallest integer with `(y - 2) / y > x`.
    pub y: u32,
    /// `β / 4y`.
    pub alpha: Rational64,
    pub t: u32,
    pub t_prime: u32,
}

fn floor_times(r: Rational64, k: u32) -> u32 {
    (r * Rational64::from_integer(i64::from(k)))
        .floor()
        .to_integer() as u32
}

impl EightColourParams {
    pub fn new(
        n: usize,
        x: Rational64,
        beta: Rational64,
        overrides: BudgetOverrides,
    ) -> Result<Self, ReductionError> {
        let zero = Rational64::from_integer(0);
        let one = Rational64::from_integer(1);
        if x <= zero || x >= one {
            return Err(ReductionError::InvalidX(x));
        }
        if beta <= zero {
            return Err(ReductionError::InvalidBeta(beta));
        }
        let (p, q) = (*x.numer(), *x.denom());
        let y = (2 * q / (q - p) + 1) as u32;
        let alpha = beta / Rational64::from_integer(4 * i64::from(y));
        let ls = log_star(n.max(1) as u64).expect("argument is positive");
        let t = overrides.t.unwrap_or_else(|| floor_times(alpha, ls));
        if t < 1 {
            return Err(ReductionError::BelowScale(t));
        }
        let t_prime = overrides.t_prime.unwrap_or_else(|| {
            floor_times(alpha, log_star(u64::from(y * t)).expect("yT is positive"))
        });
        if t_prime > t {
            return Err(ReductionError::PrimeExceedsT { t, t_prime });
        }
        Ok(EightColourParams {
            n,
            x,
            beta,
            y,
            alpha,
            t,
            t_prime,
        })
    }

    /// `2yT`, the radius every node gathers.
    pub fn budget(&self) -> u32 {
        2 * self.y * self.t
    }

    /// `yT`, the short-stretch threshold.
    pub fn yt(&self) -> usize {
        (self.y * self.t) as usize
    }
}

/// Why a node could not pick a colour.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Undetermined {
    /// A stretch boundary lies outside the simulated region.
    BoundaryNotVisible,
}

/// The stretch-length bounds the colouring relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StretchBound {
    NonMembersWithin2T,
    NonSurvivorsWithin2T,
    SurvivorsBelowYT,
    Visible,
    SurvivalWithinYT,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimVerdict {
    pub claim: StretchBound,
    pub statement: String,
    pub holds: bool,
    pub witness: Option<Stretch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub verdicts: Vec<ClaimVerdict>,
    pub decomposition: StretchDecomposition,
}

impl ClaimReport {
    pub fn violations(&self) -> Vec<ClaimVerdict> {
        self.verdicts.iter().filter(|v| !v.holds).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringResult {
    pub params: EightColourParams,
    /// Colour in `1..=8` per ring position, `None` where undetermined.
    pub colors: Vec<Option<u8>>,
    pub rounds_used: u32,
    pub claim_violations: Vec<ClaimVerdict>,
    /// Whole ring is a single stretch of one kind.
    pub degenerate: bool,
    pub undetermined: Vec<(NodeId, Undetermined)>,
    /// Output of the budget-`T` run per position.
    pub memberships: Vec<bool>,
    /// Output of the budget-`T'` run, for positions in long member stretches.
    pub survivorships: Vec<Option<bool>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Boundary,
    Unknown,
    Wrapped,
}

/// Number of positions past `root` in one direction sharing its value.
fn extent<K: PartialEq + Copy>(
    strip: &RingStrip,
    vals: &[Option<K>],
    root: usize,
    forward: bool,
) -> (usize, End) {
    let me = vals[root];
    let mut cur = root;
    let mut count = 0;
    loop {
        let Some(next) = strip.step(cur, forward) else {
            return (count, End::Unknown);
        };
        if next == root {
            return (count, End::Wrapped);
        }
        match vals[next] {
            None => return (count, End::Unknown),
            v if v == me => {
                count += 1;
                cur = next;
            }
            _ => return (count, End::Boundary),
        }
    }
}

/// Colour `base` or `base + 1` by parity of the distance from the
/// smaller-labelled end of the stretch `[root - left, root + right]`.
fn parity_colour(strip: &RingStrip, root: usize, left: usize, right: usize, base: u8) -> u8 {
    let walk = |steps: usize, forward: bool| {
        (0..steps).fold(root, |p, _| {
            strip.step(p, forward).expect("stretch is on the strip")
        })
    };
    let (a, b) = (walk(left, false), walk(right, true));
    let dist = if strip.labels[a] <= strip.labels[b] {
        left
    } else {
        right
    };
    base + (dist % 2) as u8
}

/// Colour on a ring that is one stretch: parity of the distance from the
/// smallest label, walking away from its smaller-labelled neighbour, with
/// `spare` for the last node of an odd ring. `spare` is a colour no other
/// stretch kind can use, as none exists.
fn cyclic_colour(strip: &RingStrip, root: usize, base: u8, spare: u8) -> u8 {
    let n = strip.len();
    let start = (0..n)
        .min_by_key(|&p| strip.labels[p])
        .expect("ring is not empty");
    let fwd = strip.step(start, true).expect("strip is cyclic");
    let bwd = strip.step(start, false).expect("strip is cyclic");
    let forward = strip.labels[fwd] > strip.labels[bwd];
    let (mut cur, mut i) = (start, 0);
    while cur != root {
        cur = strip.step(cur, forward).expect("strip is cyclic");
        i += 1;
    }
    if n % 2 == 1 && i == n - 1 {
        spare
    } else {
        base + (i % 2) as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Survival {
    Survivor,
    NonSurvivor,
    /// A non-member, which ends every survivor or non-survivor stretch.
    Outside,
}

struct Instances {
    a: Box<dyn NodeAlgorithm>,
    a_prime: Box<dyn NodeAlgorithm>,
}

fn colour_from_view(
    view: &View,
    inst: &Instances,
    params: &EightColourParams,
) -> Result<Result<u8, Undetermined>, ReductionError> {
    let strip = view.ring_strip()?;
    let root = strip.root;
    let (t, tp) = (params.t, params.t_prime);
    let budget = params.budget() as usize;
    let yt = params.yt();
    let dist = |p: usize| strip.distance(root, p);

    let mut a1: Vec<Option<bool>> = vec![None; strip.len()];
    for (p, slot) in a1.iter_mut().enumerate() {
        if dist(p) <= budget - t as usize {
            *slot = Some(execute_at(inst.a.as_ref(), view, strip.labels[p], t)?.bit);
        }
    }
    let (l, el) = extent(&strip, &a1, root, false);
    let (r, er) = extent(&strip, &a1, root, true);
    if el == End::Wrapped {
        if a1[root] == Some(false) {
            return Ok(Ok(cyclic_colour(&strip, root, 1, 3)));
        }
        if strip.len() <= yt {
            return Ok(Ok(cyclic_colour(&strip, root, 3, 1)));
        }
    } else if a1[root] == Some(false) || l + r < yt {
        // non-members, and members that may be in a short stretch
        return Ok(match (el, er) {
            (End::Boundary, End::Boundary) => {
                let base = if a1[root] == Some(false) { 1 } else { 3 };
                Ok(parity_colour(&strip, root, l, r, base))
            }
            _ => Err(Undetermined::BoundaryNotVisible),
        });
    }

    // long member stretch: simulate the smaller budget on its nodes within yT
    let mut a2: Vec<Option<Survival>> = vec![None; strip.len()];
    for (p, slot) in a2.iter_mut().enumerate() {
        *slot = match a1[p] {
            Some(false) => Some(Survival::Outside),
            _ => None,
        };
    }
    for forward in [false, true] {
        let mut cur = root;
        for step in 0..=yt {
            if a1[cur] != Some(true) || (step > 0 && cur == root) {
                break;
            }
            let out = execute_at(inst.a_prime.as_ref(), view, strip.labels[cur], tp)?;
            a2[cur] = Some(if out.bit {
                Survival::Survivor
            } else {
                Survival::NonSurvivor
            });
            match strip.step(cur, forward) {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    let (l, el) = extent(&strip, &a2, root, false);
    let (r, er) = extent(&strip, &a2, root, true);
    Ok(match (el, er) {
        (End::Boundary, End::Boundary) => {
            let base = if a2[root] == Some(Survival::Survivor) {
                7
            } else {
                5
            };
            Ok(parity_colour(&strip, root, l, r, base))
        }
        (End::Wrapped, _) | (_, End::Wrapped) => {
            let base = if a2[root] == Some(Survival::Survivor) {
                7
            } else {
                5
            };
            Ok(cyclic_colour(&strip, root, base, 1))
        }
        _ => Err(Undetermined::BoundaryNotVisible),
    })
}

fn check_labels(ring: &RingSpec) -> Result<(), ReductionError> {
    let n = ring.len();
    match ring.labels().iter().find(|&&l| l > n as Label) {
        Some(&label) => Err(ReductionError::LabelOutOfRange { label, n }),
        None => Ok(()),
    }
}

/// Global member and survivor outputs of the two candidate runs.
pub fn memberships(
    family: &dyn AlgorithmFamily,
    ring: &RingSpec,
    params: &EightColourParams,
) -> Result<(Vec<bool>, Vec<Option<bool>>), ReductionError> {
    let g = ring.to_graph(params.n as Label)?;
    let members = execute(
        family.instantiate(params.t, g.label_bound()).as_ref(),
        &g,
        params.t,
    )?
    .bits();
    let a_prime = family.instantiate(params.t_prime, g.label_bound());
    let survivors = execute(a_prime.as_ref(), &g, params.t_prime)?.bits();
    let kinds: Vec<StretchKind> = members
        .iter()
        .map(|&m| {
            if m {
                StretchKind::Member
            } else {
                StretchKind::NonMember
            }
        })
        .collect();
    let decomposition = stretch_decomposition(ring, &kinds).expect("one kind per position");
    let mut surv = vec![None; ring.len()];
    for s in &decomposition.stretches {
        if s.kind == StretchKind::Member && s.len() > params.yt() {
            for &p in &s.nodes {
                surv[p] = Some(survivors[p]);
            }
        }
    }
    Ok((members, surv))
}

/// Checks the stretch-length bounds that make the colouring well defined.
pub fn validate_claims(
    ring: &RingSpec,
    memberships: &[bool],
    survivorships: &[Option<bool>],
    params: &EightColourParams,
) -> ClaimReport {
    let kinds: Vec<StretchKind> = memberships
        .iter()
        .zip(survivorships)
        .map(|(&m, s)| match (m, s) {
            (false, _) => StretchKind::NonMember,
            (true, None) => StretchKind::Member,
            (true, Some(true)) => StretchKind::Survivor,
            (true, Some(false)) => StretchKind::NonSurvivor,
        })
        .collect();
    let decomposition = stretch_decomposition(ring, &kinds).expect("one kind per position");
    let t = params.t as usize;
    let yt = params.yt();
    let check =
        |claim: StretchBound, statement: &str, bad: &dyn Fn(&Stretch) -> bool| ClaimVerdict {
            claim,
            statement: statement.to_string(),
            holds: !decomposition.stretches.iter().any(bad),
            witness: decomposition.stretches.iter().find(|s| bad(s)).cloned(),
        };
    use StretchBound::*;
    use StretchKind::*;
    let verdicts = vec![
        check(
            NonMembersWithin2T,
            "non-member stretches have at most 2T nodes",
            &|s| s.kind == NonMember && s.len() > 2 * t,
        ),
        check(
            NonSurvivorsWithin2T,
            "non-survivor stretches have at most 2T nodes",
            &|s| s.kind == NonSurvivor && s.len() > 2 * t,
        ),
        check(
            SurvivorsBelowYT,
            "survivor stretches have fewer than yT nodes",
            &|s| s.kind == Survivor && s.len() >= yt,
        ),
        check(
            Visible,
            "non-member stretches fit in 2yT - T and short member stretches in yT",
            &|s| {
                (s.kind == NonMember && s.len() > 2 * yt - t) || (s.kind == Member && s.len() > yt)
            },
        ),
        check(
            SurvivalWithinYT,
            "survivor and non-survivor stretches fit in yT",
            &|s| matches!(s.kind, Survivor | NonSurvivor) && s.len() > yt,
        ),
    ];
    ClaimReport {
        verdicts,
        decomposition,
    }
}

/// Colours `ring` at every node from that node's radius-`2yT` view.
pub fn eight_colour_ring(
    family: &dyn AlgorithmFamily,
    ring: &RingSpec,
    x: Rational64,
    beta: Rational64,
    overrides: BudgetOverrides,
) -> Result<ColoringResult, ReductionError> {
    check_labels(ring)?;
    let params = EightColourParams::new(ring.len(), x, beta, overrides)?;
    let g = ring.to_graph(params.n as Label)?;
    let inst = Instances {
        a: family.instantiate(params.t, g.label_bound()),
        a_prime: family.instantiate(params.t_prime, g.label_bound()),
    };
    let per_node = g
        .nodes()
        .into_par_iter()
        .map(|v| colour_from_view(&g.ball(v, params.budget())?, &inst, &params))
        .collect::<Result<Vec<_>, ReductionError>>()?;
    let (members, surv) = memberships(family, ring, &params)?;
    let report = validate_claims(ring, &members, &surv, &params);
    let mut colors = Vec::with_capacity(per_node.len());
    let mut undetermined = Vec::new();
    for (v, c) in per_node.into_iter().enumerate() {
        match c {
            Ok(c) => colors.push(Some(c)),
            Err(why) => {
                colors.push(None);
                undetermined.push((v, why));
            }
        }
    }
    Ok(ColoringResult {
        params,
        colors,
        rounds_used: params.budget(),
        claim_violations: report.violations(),
        degenerate: report.decomposition.degenerate,
        undetermined,
        memberships: members,
        survivorships: surv,
    })
}

/// The ring cut out of a long survivor stretch, with the checks showing the
/// candidate's size promise fails on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorCounterexample {
    pub ring: RingSpec,
    /// Labels of the middle band, positions `T..(y-1)T` of the cut ring.
    pub middle: Vec<Label>,
    pub views_equal: Vec<bool>,
    /// Middle-band outputs on the cut ring.
    pub middle_outputs: Vec<bool>,
    pub member_count: usize,
    /// `member_count > x * yT`, exact.
    pub exceeds: bool,
}

impl SurvivorCounterexample {
    pub fn confirmed(&self) -> bool {
        self.views_equal.iter().all(|&b| b)
            && self.middle_outputs.iter().all(|&b| b)
            && self.exceeds
    }
}

/// Closes the first `yT` nodes of a survivor stretch into a ring and reruns
/// the smaller budget there.
pub fn survivor_counterexample_ring(
    family: &dyn AlgorithmFamily,
    ring: &RingSpec,
    stretch: &Stretch,
    params: &EightColourParams,
) -> Result<SurvivorCounterexample, ReductionError> {
    let yt = params.yt();
    if stretch.len() < yt {
        return Err(ReductionError::StretchTooShort {
            len: stretch.len(),
            needed: yt,
        });
    }
    let host = ring.to_graph(params.n as Label)?;
    let z = &stretch.nodes[..yt];
    let cut = RingSpec::new(z.iter().map(|&p| ring.labels()[p]).collect())?;
    let cut_graph: LabeledGraph = cut.to_graph(params.n as Label)?;
    let alg = family.instantiate(params.t_prime, params.n as Label);
    let res = execute(alg.as_ref(), &cut_graph, params.t_prime)?;
    let t = params.t as usize;
    let band = t..(params.y as usize - 1) * t;
    let mut views = Vec::with_capacity(band.len());
    for i in band.clone() {
        let here = cut_graph.ball(i, params.t_prime)?;
        views.push(views_equal(&host.ball(z[i], params.t_prime)?, &here));
    }
    let member_count = res.size();
    let x = params.x;
    Ok(SurvivorCounterexample {
        middle: band.clone().map(|i| cut.labels()[i]).collect(),
        views_equal: views,
        middle_outputs: band.map(|i| res.is_member(i)).collect(),
        exceeds: member_count as i64 * *x.denom() > *x.numer() * yt as i64,
        member_count,
        ring: cut,
    })
}

/// Graphviz rendering of a coloured ring.
pub fn to_dot(ring: &RingSpec, colors: &[Option<u8>]) -> String {
    const PALETTE: [&str; 8] = [
        "#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666",
    ];
    let mut out = String::from("graph ring {\n  node [style=filled];\n");
    for (p, (&l, c)) in ring.labels().iter().zip(colors).enumerate() {
        let _ = match c {
            Some(c) => writeln!(
                out,
                "  n{p} [label=\"{l}\\n{c}\", fillcolor=\"{}\"];",
                PALETTE[usize::from(c - 1) % 8]
            ),
            None => writeln!(out, "  n{p} [label=\"{l}\\n?\", fillcolor=white];"),
        };
    }
    let n = ring.len();
    for p in 0..n {
        let _ = writeln!(out, "  n{p} -- n{};", (p + 1) % n);
    }
    out.push_str("}\n");
    out
}
