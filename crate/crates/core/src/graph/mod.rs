//! Labeled undirected graphs, rings, distances and LOCAL-model balls.
//!
//! Nodes are dense indices `0..n`. Every node carries a distinct positive
//! label bounded by the graph's label bound `L`; algorithms only ever see
//! labels, never node indices.

mod format;
mod view;

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::{parse_graph, write_graph, ParseError};
pub use view::{RingStrip, View, ViewError};

/// A node label. Labels are drawn from `1..=L`.
pub type Label = u64;

/// Index of a node inside a [`LabeledGraph`].
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("label {0} is used by more than one node")]
    DuplicateLabel(Label),
    #[error("label 0 is not allowed, labels start at 1")]
    ZeroLabel,
    #[error("label {label} exceeds the label bound {bound}")]
    LabelOutOfRange { label: Label, bound: Label },
    #[error("a ring needs at least 3 nodes, got {0}")]
    RingTooSmall(usize),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("edge {0}-{1} listed twice")]
    DuplicateEdge(NodeId, NodeId),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("label permutation is not a bijection on 1..={0}")]
    NotABijection(Label),
    #[error("graph is not a ring")]
    NotARing,
}

/// An undirected connected graph with distinct node labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<Label>,
    adjacency: Vec<Vec<NodeId>>,
    label_bound: Label,
    by_label: BTreeMap<Label, NodeId>,
    ring: bool,
}

impl LabeledGraph {
    /// Builds a graph from an edge list over nodes `0..labels.len()`.
    pub fn from_edges(
        labels: Vec<Label>,
        edges: &[(NodeId, NodeId)],
        label_bound: Label,
    ) -> Result<Self, GraphError> {
        let n = labels.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let by_label = index_labels(&labels, label_bound)?;
        let mut adjacency = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::UnknownNode(u));
            }
            if v >= n {
                return Err(GraphError::UnknownNode(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let g = LabeledGraph {
            labels,
            adjacency,
            label_bound,
            by_label,
            ring: false,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let ring = n >= 3 && g.adjacency.iter().all(|a| a.len() == 2);
        if ring {
            // A connected 2-regular graph is a single cycle; renumber it so that
            // node i sits at ring position i.
            return Ok(g.ring_order());
        }
        Ok(g)
    }

    fn ring_order(self) -> LabeledGraph {
        let n = self.labels.len();
        let mut order = Vec::with_capacity(n);
        let (mut prev, mut cur) = (usize::MAX, 0);
        for _ in 0..n {
            order.push(cur);
            let next = if self.adjacency[cur][0] != prev {
                self.adjacency[cur][0]
            } else {
                self.adjacency[cur][1]
            };
            prev = cur;
            cur = next;
        }
        let labels = order.iter().map(|&v| self.labels[v]).collect();
        build_ring(labels, self.label_bound).expect("labels were already validated")
    }

    /// Number of nodes `n`.
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label_bound(&self) -> Label {
        self.label_bound
    }

    pub fn label(&self, v: NodeId) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn node_of(&self, label: Label) -> Option<NodeId> {
        self.by_label.get(&label).copied()
    }

    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.labels.len()
    }

    /// Every edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// True when the topology is a single cycle. Ring nodes are numbered in
    /// cyclic order: node `i` is adjacent to `i - 1` and `i + 1` modulo `n`.
    pub fn is_ring(&self) -> bool {
        self.ring
    }

    /// The cyclic label sequence of a ring.
    pub fn ring_spec(&self) -> Option<RingSpec> {
        self.ring.then(|| RingSpec {
            labels: self.labels.clone(),
        })
    }

    fn check(&self, v: NodeId) -> Result<(), GraphError> {
        if v < self.labels.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v))
        }
    }

    /// BFS hop distances from `source`, `None` for unreachable nodes.
    pub fn distances_from(&self, source: NodeId) -> Result<Vec<Option<u32>>, GraphError> {
        self.check(source)?;
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// Shortest-path hop count between `u` and `v`.
    pub fn distance(&self, u: NodeId, v: NodeId) -> Result<u32, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if self.ring {
            let n = self.node_count();
            let d = u.abs_diff(v);
            return Ok(d.min(n - d) as u32);
        }
        Ok(self.distances_from(u)?[v].expect("graph is connected"))
    }

    /// Nodes within distance `radius` of `v`, with their distances, in BFS order.
    pub fn ball_nodes(&self, v: NodeId, radius: u32) -> Result<Vec<(NodeId, u32)>, GraphError> {
        self.check(v)?;
        let mut seen: HashMap<NodeId, u32> = HashMap::from([(v, 0)]);
        let mut out = vec![(v, 0)];
        let mut head = 0;
        while head < out.len() {
            let (u, d) = out[head];
            head += 1;
            if d == radius {
                continue;
            }
            for &w in &self.adjacency[u] {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(d + 1);
                    out.push((w, d + 1));
                }
            }
        }
        Ok(out)
    }

    /// What node `v` knows after `radius` rounds: see [`View`].
    pub fn ball(&self, v: NodeId, radius: u32) -> Result<View, GraphError> {
        let nodes = self.ball_nodes(v, radius)?;
        Ok(View::from_ball(self, &nodes, radius))
    }

    /// Applies a label permutation, keeping the topology.
    pub fn relabel(&self, sigma: &LabelPermutation) -> Result<LabeledGraph, GraphError> {
        if sigma.bound() != self.label_bound {
            return Err(GraphError::NotABijection(self.label_bound));
        }
        let labels: Vec<Label> = self.labels.iter().map(|&l| sigma.apply(l)).collect();
        let by_label = index_labels(&labels, self.label_bound)?;
        Ok(LabeledGraph {
            labels,
            adjacency: self.adjacency.clone(),
            label_bound: self.label_bound,
            by_label,
            ring: self.ring,
        })
    }

    fn is_connected(&self) -> bool {
        self.distances_from(0)
            .map(|d| d.iter().all(Option::is_some))
            .unwrap_or(false)
    }
}

fn index_labels(labels: &[Label], bound: Label) -> Result<BTreeMap<Label, NodeId>, GraphError> {
    let mut by_label = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        if l == 0 {
            return Err(GraphError::ZeroLabel);
        }
        if l > bound {
            return Err(GraphError::LabelOutOfRange { label: l, bound });
        }
        if by_label.insert(l, v).is_some() {
            return Err(GraphError::DuplicateLabel(l));
        }
    }
    Ok(by_label)
}

/// Builds the ring visiting `labels` in the given cyclic order.
pub fn build_ring(labels: Vec<Label>, label_bound: Label) -> Result<LabeledGraph, GraphError> {
    let n = labels.len();
    if n < 3 {
        return Err(GraphError::RingTooSmall(n));
    }
    let by_label = index_labels(&labels, label_bound)?;
    let adjacency = (0..n)
        .map(|i| {
            let mut a = vec![(i + n - 1) % n, (i + 1) % n];
            a.sort_unstable();
            a
        })
        .collect();
    Ok(LabeledGraph {
        labels,
        adjacency,
        label_bound,
        by_label,
        ring: true,
    })
}

/// A cyclic sequence of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    labels: Vec<Label>,
}

impl RingSpec {
    pub fn new(labels: Vec<Label>) -> Result<Self, GraphError> {
        if labels.len() < 3 {
            return Err(GraphError::RingTooSmall(labels.len()));
        }
        index_labels(&labels, Label::MAX)?;
        Ok(RingSpec { labels })
    }

    /// The ring `[1, 2, ..., n]`.
    pub fn identity(n: usize) -> Result<Self, GraphError> {
        Self::new((1..=n as Label).collect())
    }

    /// A ring on labels `1..=n` in a seeded pseudo-random order.
    pub fn shuffled(n: usize, seed: u64) -> Result<Self, GraphError> {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut labels: Vec<Label> = (1..=n as Label).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        labels.shuffle(&mut rng);
        Self::new(labels)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn max_label(&self) -> Label {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    pub fn to_graph(&self, label_bound: Label) -> Result<LabeledGraph, GraphError> {
        build_ring(self.labels.clone(), label_bound)
    }

    /// Ring positions `start, start+1, ..., start+len-1` (wrapping).
    pub fn segment(&self, start: usize, len: usize) -> Vec<NodeId> {
        let n = self.labels.len();
        (0..len).map(|i| (start + i) % n).collect()
    }
}

/// A bijection on `1..=L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelPermutation {
    image: Vec<Label>,
}

impl LabelPermutation {
    /// `image[i]` is the new label of old label `i + 1`.
    pub fn new(image: Vec<Label>) -> Result<Self, GraphError> {
        let bound = image.len() as Label;
        let mut seen = vec![false; image.len()];
        for &l in &image {
            if l == 0 || l > bound || std::mem::replace(&mut seen[(l - 1) as usize], true) {
                return Err(GraphError::NotABijection(bound));
            }
        }
        Ok(LabelPermutation { image })
    }

    pub fn identity(bound: Label) -> Self {
        LabelPermutation {
            image: (1..=bound).collect(),
        }
    }

    /// Swaps two labels and fixes everything else.
    pub fn transposition(bound: Label, a: Label, b: Label) -> Result<Self, GraphError> {
        if a == 0 || b == 0 || a > bound || b > bound {
            return Err(GraphError::NotABijection(bound));
        }
        let mut p = Self::identity(bound);
        p.image.swap((a - 1) as usize, (b - 1) as usize);
        Ok(p)
    }

    pub fn bound(&self) -> Label {
        self.image.len() as Label
    }

    pub fn apply(&self, label: Label) -> Label {
        self.image[(label - 1) as usize]
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.image.len()];
        for (i, &l) in self.image.iter().enumerate() {
            image[(l - 1) as usize] = i as Label + 1;
        }
        LabelPermutation { image }
    }
}
