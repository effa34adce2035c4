use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use super::{Label, LabeledGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViewError {
    #[error("label {0} is not inside the view")]
    UnknownLabel(Label),
    #[error(
        "ball of radius {radius} around {center} is not contained in the view \
         (center at distance {center_distance}, view radius {view_radius})"
    )]
    NotContained {
        center: Label,
        center_distance: u32,
        radius: u32,
        view_radius: u32,
    },
    #[error("view is not part of a ring (a node has degree {0})")]
    NotARing(u32),
}

/// The knowledge of a node after `radius` synchronous rounds.
///
/// A view holds the subgraph induced by the nodes at distance at most
/// `radius` from the root, minus the edges joining two nodes that are both at
/// distance exactly `radius`, together with the host-graph degree of every
/// node. Nodes are stored in canonical order (distance first, then label), so
/// two views are equal exactly when they are isomorphic as rooted labeled
/// structures. The root is always index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct View {
    radius: u32,
    labels: Vec<Label>,
    dist: Vec<u32>,
    adjacency: Vec<Vec<u32>>,
    degrees: Vec<u32>,
}

impl View {
    pub(super) fn from_ball(g: &LabeledGraph, nodes: &[(NodeId, u32)], radius: u32) -> View {
        let mut order: Vec<(u32, Label, NodeId)> =
            nodes.iter().map(|&(v, d)| (d, g.label(v), v)).collect();
        order.sort_unstable();
        let local: std::collections::HashMap<NodeId, (u32, u32)> = order
            .iter()
            .enumerate()
            .map(|(i, &(d, _, v))| (v, (i as u32, d)))
            .collect();
        let mut adjacency = Vec::with_capacity(order.len());
        for &(d, _, v) in &order {
            let mut nbrs: Vec<u32> = g
                .neighbors(v)
                .iter()
                .filter_map(|w| local.get(w))
                .filter(|&&(_, dw)| !(d == radius && dw == radius))
                .map(|&(i, _)| i)
                .collect();
            nbrs.sort_unstable();
            adjacency.push(nbrs);
        }
        View {
            radius,
            labels: order.iter().map(|&(_, l, _)| l).collect(),
            dist: order.iter().map(|&(d, _, _)| d).collect(),
            adjacency,
            degrees: order.iter().map(|&(_, _, v)| g.degree(v) as u32).collect(),
        }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Number of nodes in the view.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root_label(&self) -> Label {
        self.labels[0]
    }

    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Distance from the root to local node `i`.
    pub fn distance(&self, i: usize) -> u32 {
        self.dist[i]
    }

    /// Neighbours of `i` that are visible in the view.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[i]
    }

    /// Degree of `i` in the host graph.
    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    /// Host-graph degrees of the nodes at distance exactly `radius`.
    pub fn frontier_degrees(&self) -> BTreeMap<Label, u32> {
        (0..self.len())
            .filter(|&i| self.dist[i] == self.radius)
            .map(|i| (self.labels[i], self.degrees[i]))
            .collect()
    }

    pub fn index_of(&self, label: Label) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn contains(&self, label: Label) -> bool {
        self.index_of(label).is_some()
    }

    /// Local nodes within `limit` hops of `start`, with distances, in BFS order
    /// (neighbours visited in canonical order).
    ///
    /// Distances are exact as long as `distance(start) + limit <= radius`.
    pub fn bfs(&self, start: usize, limit: u32) -> Vec<(usize, u32)> {
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut out = vec![(start, 0)];
        let mut head = 0;
        while head < out.len() {
            let (u, d) = out[head];
            head += 1;
            if d == limit {
                continue;
            }
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if !seen[w] {
                    seen[w] = true;
                    out.push((w, d + 1));
                }
            }
        }
        out
    }

    /// A shortest path (as labels) from the root to local node `target`,
    /// preferring canonically smaller intermediate nodes.
    pub fn path_from_root(&self, target: usize) -> Vec<Label> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            if u == target {
                break;
            }
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![self.labels[target]];
        let mut cur = target;
        while cur != 0 {
            cur = parent[cur];
            path.push(self.labels[cur]);
        }
        path.reverse();
        path
    }

    /// The view that node `center` would have after `radius` rounds,
    /// reconstructed from this view.
    pub fn sub_view(&self, center: Label, radius: u32) -> Result<View, ViewError> {
        let c = self
            .index_of(center)
            .ok_or(ViewError::UnknownLabel(center))?;
        if self.dist[c] + radius > self.radius {
            return Err(ViewError::NotContained {
                center,
                center_distance: self.dist[c],
                radius,
                view_radius: self.radius,
            });
        }
        let ball = self.bfs(c, radius);
        let mut order: Vec<(u32, Label, usize)> =
            ball.iter().map(|&(i, d)| (d, self.labels[i], i)).collect();
        order.sort_unstable();
        let mut local = vec![(u32::MAX, 0u32); self.len()];
        for (j, &(d, _, i)) in order.iter().enumerate() {
            local[i] = (j as u32, d);
        }
        let adjacency = order
            .iter()
            .map(|&(d, _, i)| {
                let mut nbrs: Vec<u32> = self.adjacency[i]
                    .iter()
                    .map(|&w| local[w as usize])
                    .filter(|&(j, dw)| j != u32::MAX && !(d == radius && dw == radius))
                    .map(|(j, _)| j)
                    .collect();
                nbrs.sort_unstable();
                nbrs
            })
            .collect();
        Ok(View {
            radius,
            labels: order.iter().map(|&(_, l, _)| l).collect(),
            dist: order.iter().map(|&(d, _, _)| d).collect(),
            adjacency,
            degrees: order.iter().map(|&(_, _, i)| self.degrees[i]).collect(),
        })
    }

    /// Byte encoding of the canonical form; equal views encode identically.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.radius.to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for i in 0..self.len() {
            out.extend_from_slice(&self.labels[i].to_le_bytes());
            out.extend_from_slice(&self.dist[i].to_le_bytes());
            out.extend_from_slice(&self.degrees[i].to_le_bytes());
            out.extend_from_slice(&(self.adjacency[i].len() as u32).to_le_bytes());
            for &w in &self.adjacency[i] {
                out.extend_from_slice(&w.to_le_bytes());
            }
        }
        out
    }

    /// Lays out a view of a ring as a line of labels.
    ///
    /// Every node of a ring has degree 2. If the view shows every edge of every
    /// node, the whole ring is visible and the strip is cyclic; otherwise it is
    /// the path of nodes at distance at most `radius`, and nothing is known
    /// beyond its two ends. The root's smaller-labelled neighbour is placed to
    /// its left.
    pub fn ring_strip(&self) -> Result<RingStrip, ViewError> {
        if let Some(&d) = self.degrees.iter().find(|&&d| d != 2) {
            return Err(ViewError::NotARing(d));
        }
        let cyclic = self.adjacency.iter().all(|a| a.len() == 2);
        let walk = |first: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let (mut prev, mut cur) = (0usize, first);
            loop {
                if cur == 0 {
                    break;
                }
                out.push(cur);
                let next = self.adjacency[cur]
                    .iter()
                    .map(|&w| w as usize)
                    .find(|&w| w != prev);
                match next {
                    Some(w) => {
                        prev = cur;
                        cur = w;
                    }
                    None => break,
                }
            }
            out
        };
        let root_nbrs: Vec<usize> = self.adjacency[0].iter().map(|&w| w as usize).collect();
        // Canonical order puts the smaller-labelled neighbour first.
        let mut nbrs = root_nbrs.clone();
        nbrs.sort_by_key(|&w| self.labels[w]);
        if cyclic {
            let mut order = vec![0];
            order.extend(walk(nbrs[0]));
            return Ok(RingStrip {
                labels: order.iter().map(|&i| self.labels[i]).collect(),
                root: 0,
                cyclic: true,
            });
        }
        let left = nbrs.first().map(|&w| walk(w)).unwrap_or_default();
        let right = nbrs.get(1).map(|&w| walk(w)).unwrap_or_default();
        let mut labels: Vec<Label> = left.iter().rev().map(|&i| self.labels[i]).collect();
        let root = labels.len();
        labels.push(self.labels[0]);
        labels.extend(right.iter().map(|&i| self.labels[i]));
        Ok(RingStrip {
            labels,
            root,
            cyclic: false,
        })
    }
}

/// A view of a ring flattened to a sequence of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingStrip {
    pub labels: Vec<Label>,
    /// Position of the viewing node.
    pub root: usize,
    /// True when the whole ring is visible and the sequence wraps.
    pub cyclic: bool,
}

impl RingStrip {
    /// A strip covering a complete ring.
    pub fn whole_ring(labels: Vec<Label>) -> Self {
        RingStrip {
            labels,
            root: 0,
            cyclic: true,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// One step left (`forward = false`) or right, `None` past a path end.
    pub fn step(&self, i: usize, forward: bool) -> Option<usize> {
        let n = self.labels.len();
        match (forward, self.cyclic) {
            (true, true) => Some((i + 1) % n),
            (false, true) => Some((i + n - 1) % n),
            (true, false) => (i + 1 < n).then_some(i + 1),
            (false, false) => i.checked_sub(1),
        }
    }

    /// Hop distance between two positions along the ring.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let d = a.abs_diff(b);
        if self.cyclic {
            d.min(self.labels.len() - d)
        } else {
            d
        }
    }
}
