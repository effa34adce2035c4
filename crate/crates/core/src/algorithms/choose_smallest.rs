use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Label, View};
use crate::sim::{DecideError, NodeAlgorithm, NodeOutput};

/// Join iff your label is the smallest label seen by some node within
/// distance `r = floor(T/2)`.
///
/// Runs in `2r` rounds, outputs a `r`-dominating set, and the `r` nodes with
/// the largest labels never join, so the set has at most `n - r` nodes. Every
/// node also reports a path to the node holding its own minimum, which is
/// always a member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChooseSmallest {
    t: u32,
}

/// What a node has computed at the end of the algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChooseSmallestState {
    pub r: u32,
    /// Labels within distance `r`.
    pub seen: BTreeSet<Label>,
    /// Smallest of `seen`.
    pub min: Label,
    /// `min` values of all nodes within distance `r`.
    pub mins: BTreeSet<Label>,
}

impl ChooseSmallest {
    pub fn new(t: u32) -> Self {
        ChooseSmallest { t }
    }

    pub fn radius(&self) -> u32 {
        self.t / 2
    }

    /// Runs the two gathering phases on `view`.
    pub fn state(&self, view: &View) -> Result<ChooseSmallestState, DecideError> {
        let r = self.radius();
        if view.radius() < 2 * r {
            return Err(DecideError::ViewTooSmall {
                needed: 2 * r,
                got: view.radius(),
            });
        }
        let near = view.bfs(0, r);
        let seen: BTreeSet<Label> = near.iter().map(|&(i, _)| view.label(i)).collect();
        let min = *seen.first().expect("the root is always within distance r");
        let mins = near
            .iter()
            .map(|&(u, _)| {
                view.bfs(u, r)
                    .into_iter()
                    .map(|(w, _)| view.label(w))
                    .min()
                    .expect("non-empty ball")
            })
            .collect();
        Ok(ChooseSmallestState { r, seen, min, mins })
    }
}

impl NodeAlgorithm for ChooseSmallest {
    fn name(&self) -> &str {
        "choose-smallest"
    }

    fn parameters(&self) -> BTreeMap<String, i64> {
        BTreeMap::from([("T".to_string(), i64::from(self.t))])
    }

    fn rounds(&self) -> u32 {
        2 * self.radius()
    }

    fn decide(&self, view: &View) -> Result<NodeOutput, DecideError> {
        let state = self.state(view)?;
        let target = view
            .index_of(state.min)
            .expect("min was read from the view");
        let path = view.path_from_root(target);
        Ok(NodeOutput::with_path(
            state.mins.contains(&view.root_label()),
            path,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_ring, RingSpec};
    use crate::sim::execute;

    #[test]
    fn seven_ring_members() {
        let g = build_ring(vec![3, 1, 4, 5, 9, 2, 6], 9).unwrap();
        let res = execute(&ChooseSmallest::new(2), &g, 2).unwrap();
        assert_eq!(res.member_labels(&g), BTreeSet::from([1, 4, 2]));
        assert_eq!(res.rounds_used, 2);
    }

    #[test]
    fn state_of_node_five() {
        let g = build_ring(vec![3, 1, 4, 5, 9, 2, 6], 9).unwrap();
        let view = g.ball(3, 2).unwrap();
        let s = ChooseSmallest::new(2).state(&view).unwrap();
        assert_eq!(s.seen, BTreeSet::from([4, 5, 9]));
        assert_eq!(s.min, 4);
        assert_eq!(s.mins, BTreeSet::from([1, 4, 2]));
    }

    #[test]
    fn small_budgets_select_everyone() {
        let g = RingSpec::shuffled(13, 5).unwrap().to_graph(13).unwrap();
        for t in [0, 1] {
            let res = execute(&ChooseSmallest::new(t), &g, t).unwrap();
            assert_eq!(res.size(), 13);
            assert_eq!(res.rounds_used, 0);
        }
    }

    #[test]
    fn largest_labels_stay_out() {
        let n = 40;
        let g = RingSpec::identity(n).unwrap().to_graph(n as u64).unwrap();
        for t in 2..12 {
            let res = execute(&ChooseSmallest::new(t), &g, t).unwrap();
            let r = (t / 2) as u64;
            for label in (n as u64 - r + 1)..=(n as u64) {
                assert!(
                    !res.is_member(g.node_of(label).unwrap()),
                    "T={t} label={label}"
                );
            }
        }
    }

    #[test]
    fn odd_budget_uses_even_rounds() {
        let g = RingSpec::shuffled(25, 2).unwrap().to_graph(25).unwrap();
        let res = execute(&ChooseSmallest::new(7), &g, 7).unwrap();
        assert_eq!(res.rounds_used, 6);
    }

    #[test]
    fn too_small_view_is_an_error() {
        let g = RingSpec::identity(10).unwrap().to_graph(10).unwrap();
        let view = g.ball(0, 3).unwrap();
        assert!(matches!(
            ChooseSmallest::new(4).decide(&view),
            Err(DecideError::ViewTooSmall { needed: 4, got: 3 })
        ));
    }
}
