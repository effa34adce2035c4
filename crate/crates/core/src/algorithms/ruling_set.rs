//! Spaced dominating sets on rings.
//!
//! Level 0 is a maximal independent set of the ring, so consecutive members
//! are 2 or 3 apart. Level `j` takes a maximal independent set of the virtual
//! ring formed by the level `j-1` members (the anchors), then places members
//! evenly inside every gap between consecutive anchors so that all gaps lie
//! in `[k_j + 1, 2 k_j + 1]` with `k_j = 2^(j+1) - 1`. The top level that fits
//! in the round budget is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::colour::{
    colour_reduction_rounds, maximal_independent_set, nearest_selected, three_colour, LocalRing,
    MIS_ROUNDS,
};
use crate::graph::{Label, RingStrip, View};
use crate::sim::{DecideError, NodeAlgorithm, NodeOutput};

/// Round accounting for [`RulingSetDominator`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulingParams {
    pub t: u32,
    pub label_bound: Label,
    /// Rounds of one 3-colouring of a (virtual) ring.
    pub t0: u32,
    /// Top level, `None` when even level 0 does not fit and every node joins.
    pub level: Option<u32>,
    /// Members are pairwise more than `k` apart and every node is within `k`
    /// of a member. `None` in the fallback.
    pub k: Option<u32>,
    pub rounds: u32,
}

fn spacing(level: u32) -> u64 {
    (1u64 << (level + 1)) - 1
}

impl RulingParams {
    pub fn new(t: u32, label_bound: Label) -> Self {
        let t0 = colour_reduction_rounds(label_bound);
        let mut best = None;
        let mut cost = u64::from(t0 + MIS_ROUNDS);
        let mut level = 0;
        while cost <= u64::from(t) {
            best = Some((level, cost));
            level += 1;
            cost += u64::from(t0 + 6) * spacing(level);
        }
        RulingParams {
            t,
            label_bound,
            t0,
            level: best.map(|(l, _)| l),
            k: best.map(|(l, _)| spacing(l) as u32),
            rounds: best.map_or(0, |(_, c)| c as u32),
        }
    }

    /// Rounds needed to reach `level`.
    pub fn cost(label_bound: Label, level: u32) -> u64 {
        let t0 = u64::from(colour_reduction_rounds(label_bound));
        (1..=level).fold(t0 + u64::from(MIS_ROUNDS), |c, j| c + (t0 + 6) * spacing(j))
    }
}

/// A `k`-dominating set whose members are pairwise more than `k` apart, for
/// the largest `k = 2^(j+1) - 1` the budget allows. Rings only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RulingSetDominator {
    params: RulingParams,
}

/// Membership of one position and the way to its nearest member.
#[derive(Debug, Clone, Copy)]
struct Placement {
    member: bool,
    steps: usize,
    forward: bool,
}

fn walk(strip: &RingStrip, from: usize, steps: usize, forward: bool) -> (usize, Vec<Label>) {
    let mut path = vec![strip.labels[from]];
    let mut cur = from;
    for _ in 0..steps {
        cur = strip
            .step(cur, forward)
            .expect("target lies inside the strip");
        path.push(strip.labels[cur]);
    }
    (cur, path)
}

/// Evenly spaced members in the gap of `p`, from the anchor status of every
/// position. `None` if an anchor on either side is not determined.
fn place(strip: &RingStrip, anchors: &[Option<bool>], k: u64, p: usize) -> Option<Placement> {
    if anchors[p]? {
        return Some(Placement {
            member: true,
            steps: 0,
            forward: true,
        });
    }
    let (left, dl) = nearest_selected(strip, anchors, p, false)?;
    let (right, dr) = nearest_selected(strip, anchors, p, true)?;
    let d = dl + dr;
    // the gap is laid out from its origin anchor
    let from_left = if left == right {
        let fwd = strip.step(left, true)?;
        let bwd = strip.step(left, false)?;
        strip.labels[fwd] < strip.labels[bwd]
    } else {
        strip.labels[left] < strip.labels[right]
    };
    let o = if from_left { dl } else { dr };
    let m = d as u64 / (k + 1);
    let mut points: Vec<usize> = (1..m).map(|i| (i * d as u64 / m) as usize).collect();
    points.push(0);
    points.push(d);
    let below = o - *points
        .iter()
        .filter(|&&q| q <= o)
        .max()
        .expect("0 is a point");
    let above = *points
        .iter()
        .filter(|&&q| q >= o)
        .min()
        .expect("d is a point")
        - o;
    let member = below == 0;
    let towards_origin = if below == above {
        let (a, _) = walk(strip, p, below, !from_left);
        let (b, _) = walk(strip, p, above, from_left);
        strip.labels[a] < strip.labels[b]
    } else {
        below < above
    };
    Some(if towards_origin {
        Placement {
            member,
            steps: below,
            forward: !from_left,
        }
    } else {
        Placement {
            member,
            steps: above,
            forward: from_left,
        }
    })
}

impl RulingSetDominator {
    pub fn new(t: u32, label_bound: Label) -> Self {
        RulingSetDominator {
            params: RulingParams::new(t, label_bound),
        }
    }

    pub fn params(&self) -> RulingParams {
        self.params
    }

    /// Root's membership and the path to its nearest member, `None` if the
    /// strip does not determine them.
    fn compute(&self, strip: &RingStrip, top: u32) -> Option<(bool, Vec<Label>)> {
        let bound = self.params.label_bound;
        let ring = LocalRing::from_strip(strip);
        let mis = maximal_independent_set(&ring, &three_colour(&ring, bound));
        let mut selected: Vec<Option<bool>> = mis.iter().map(|s| s.map(|s| s.joined)).collect();
        if top == 0 {
            let s = mis[strip.root]?;
            return Some(match s.blocker {
                _ if s.joined => (true, vec![strip.labels[strip.root]]),
                Some(b) => (false, vec![strip.labels[strip.root], strip.labels[b]]),
                None => unreachable!("a node outside the set has a joined neighbour"),
            });
        }
        for level in 1..=top {
            let (positions, virt) = LocalRing::virtual_over(strip, &selected);
            let vmis = maximal_independent_set(&virt, &three_colour(&virt, bound));
            let mut anchors: Vec<Option<bool>> =
                selected.iter().map(|s| s.map(|_| false)).collect();
            for (i, &p) in positions.iter().enumerate() {
                anchors[p] = vmis[i].map(|s| s.joined);
            }
            let k = spacing(level);
            if level == top {
                let pl = place(strip, &anchors, k, strip.root)?;
                let (_, path) = walk(strip, strip.root, pl.steps, pl.forward);
                return Some((pl.member, path));
            }
            selected = (0..strip.len())
                .map(|p| place(strip, &anchors, k, p).map(|pl| pl.member))
                .collect();
        }
        unreachable!("the loop returns at the top level")
    }
}

impl NodeAlgorithm for RulingSetDominator {
    fn name(&self) -> &str {
        "ruling-set"
    }

    fn parameters(&self) -> BTreeMap<String, i64> {
        let p = self.params;
        let mut m = BTreeMap::from([
            ("T".to_string(), i64::from(p.t)),
            ("L".to_string(), p.label_bound as i64),
            ("t0".to_string(), i64::from(p.t0)),
        ]);
        if let (Some(level), Some(k)) = (p.level, p.k) {
            m.insert("level".to_string(), i64::from(level));
            m.insert("k".to_string(), i64::from(k));
        }
        m
    }

    fn rounds(&self) -> u32 {
        self.params.rounds
    }

    fn decide(&self, view: &View) -> Result<NodeOutput, DecideError> {
        let strip = view
            .ring_strip()
            .map_err(|e| DecideError::NotARing(e.to_string()))?;
        let Some(top) = self.params.level else {
            return Ok(NodeOutput::with_path(true, vec![view.root_label()]));
        };
        let (member, path) = self.compute(&strip, top).ok_or(DecideError::ViewTooSmall {
            needed: self.params.rounds,
            got: view.radius(),
        })?;
        Ok(NodeOutput::with_path(member, path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{LabeledGraph, RingSpec};
    use crate::sim::execute;

    /// Gaps between consecutive members around the ring.
    fn gaps(bits: &[bool]) -> Vec<usize> {
        let pos: Vec<usize> = (0..bits.len()).filter(|&i| bits[i]).collect();
        (0..pos.len())
            .map(|i| {
                let next = pos[(i + 1) % pos.len()];
                (next + bits.len() - pos[i] - 1) % bits.len() + 1
            })
            .collect()
    }

    #[test]
    fn level_costs() {
        // L = 100: 3 Cole-Vishkin steps, so one colouring takes 15 rounds
        assert_eq!(RulingParams::cost(100, 0), 18);
        assert_eq!(RulingParams::cost(100, 1), 18 + 21 * 3);
        assert_eq!(RulingParams::cost(100, 2), 18 + 21 * 3 + 21 * 7);
        let p = RulingParams::new(81, 100);
        assert_eq!((p.level, p.k, p.rounds), (Some(1), Some(3), 81));
        let p = RulingParams::new(80, 100);
        assert_eq!((p.level, p.k, p.rounds), (Some(0), Some(1), 18));
    }

    #[test]
    fn fallback_selects_everyone() {
        let g = RingSpec::shuffled(30, 1).unwrap().to_graph(30).unwrap();
        let alg = RulingSetDominator::new(4, 30);
        assert_eq!(alg.params().level, None);
        let res = execute(&alg, &g, 4).unwrap();
        assert_eq!(res.size(), 30);
        assert_eq!(res.rounds_used, 0);
    }

    #[test]
    fn rejects_non_rings() {
        let g = LabeledGraph::from_edges(vec![1, 2, 3, 4], &[(0, 1), (1, 2), (1, 3)], 4).unwrap();
        assert!(execute(&RulingSetDominator::new(50, 4), &g, 50).is_err());
    }

    fn check(n: usize, seed: u64, t: u32) {
        let g = RingSpec::shuffled(n, seed)
            .unwrap()
            .to_graph(n as u64)
            .unwrap();
        let alg = RulingSetDominator::new(t, n as u64);
        let res = execute(&alg, &g, t).unwrap();
        let k = alg.params().k.unwrap() as usize;
        let gs = gaps(&res.bits());
        if gs.len() > 1 {
            assert!(
                gs.iter().all(|&d| d > k && d <= 2 * k + 1),
                "n={n} t={t} {gs:?}"
            );
        } else {
            assert!(n / 2 <= k, "n={n} t={t}");
        }
        assert!(res.size() <= n / (k + 1) || res.size() == 1);
        for (v, out) in res.outputs.iter().enumerate() {
            let path = out.path_certificate.as_ref().unwrap();
            assert_eq!(path[0], g.label(v));
            assert!(path.len() - 1 <= k);
            assert!(res.is_member(g.node_of(*path.last().unwrap()).unwrap()));
        }
    }

    #[test]
    fn level_zero_is_an_independent_dominating_set() {
        for n in [3, 4, 5, 17, 64, 101] {
            check(n, 2, RulingParams::cost(n as u64, 0) as u32);
        }
    }

    #[test]
    fn higher_levels_keep_gaps_in_range() {
        for n in [3, 7, 20, 64, 150] {
            for level in 1..=2 {
                check(n, 5, RulingParams::cost(n as u64, level) as u32);
            }
        }
    }
}
