//! Deterministic symmetry breaking on (virtual) rings without orientation.
//!
//! Everything here computes node states position by position with `Option`
//! states: a state is `None` when the node's dependency cone leaves the part
//! of the ring that is visible. One call to [`round`] is one synchronous
//! round, so a value that survives `t` calls depends only on the `t`-hop
//! neighbourhood of its node.
//!
//! Three-colouring: orient every edge towards the larger label. A node's
//! first and second larger neighbours define two rooted forests; Cole–Vishkin
//! reduces each forest to 6 colours and shift-down to 3, the pair of colours
//! is a proper 9-colouring, and six greedy rounds bring it to 3 colours.

use crate::graph::{GraphError, Label, RingSpec, RingStrip};

/// A ring (or a virtual ring over a subset of positions) being simulated.
#[derive(Debug, Clone)]
pub(crate) struct LocalRing {
    pub labels: Vec<Label>,
    /// Distinct neighbours other than the node itself, `None` if unknown.
    pub nbrs: Vec<Option<Vec<usize>>>,
}

fn distinct_others(i: usize, cand: [usize; 2]) -> Vec<usize> {
    let mut v: Vec<usize> = cand.into_iter().filter(|&w| w != i).collect();
    v.dedup();
    v
}

impl LocalRing {
    /// The ring itself: every strip position is a node.
    pub fn from_strip(strip: &RingStrip) -> Self {
        let nbrs = (0..strip.len())
            .map(|p| match (strip.step(p, false), strip.step(p, true)) {
                (Some(a), Some(b)) => Some(distinct_others(p, [a, b])),
                _ => None,
            })
            .collect();
        LocalRing {
            labels: strip.labels.clone(),
            nbrs,
        }
    }

    /// The ring formed by the selected positions, consecutive selected
    /// positions being adjacent. Returns the node positions and the ring.
    pub fn virtual_over(strip: &RingStrip, selected: &[Option<bool>]) -> (Vec<usize>, Self) {
        let positions: Vec<usize> = (0..strip.len())
            .filter(|&p| selected[p] == Some(true))
            .collect();
        let mut index = vec![usize::MAX; strip.len()];
        for (i, &p) in positions.iter().enumerate() {
            index[p] = i;
        }
        let nbrs = positions
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let left = nearest_selected(strip, selected, p, false)?;
                let right = nearest_selected(strip, selected, p, true)?;
                Some(distinct_others(i, [index[left.0], index[right.0]]))
            })
            .collect();
        let labels = positions.iter().map(|&p| strip.labels[p]).collect();
        (positions, LocalRing { labels, nbrs })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
}

/// Nearest selected position strictly beyond `p` in one direction, with its
/// distance. On a cycle with `p` the only selected node, that is `p` itself.
pub(crate) fn nearest_selected(
    strip: &RingStrip,
    selected: &[Option<bool>],
    p: usize,
    forward: bool,
) -> Option<(usize, usize)> {
    let mut cur = p;
    for dist in 1..=strip.len() {
        cur = strip.step(cur, forward)?;
        match selected[cur]? {
            true => return Some((cur, dist)),
            false => continue,
        }
    }
    None
}

/// One synchronous round: each node with a known state and fully known
/// neighbourhood moves to `f(node, state, neighbour states)`.
fn round<S: Copy>(
    ring: &LocalRing,
    state: &[Option<S>],
    f: impl Fn(usize, S, &[(usize, S)]) -> S,
) -> Vec<Option<S>> {
    (0..ring.len())
        .map(|i| {
            let s = state[i]?;
            let nbrs = ring.nbrs[i].as_ref()?;
            let ns = nbrs
                .iter()
                .map(|&w| state[w].map(|sw| (w, sw)))
                .collect::<Option<Vec<_>>>()?;
            Some(f(i, s, &ns))
        })
        .collect()
}

/// Number of Cole–Vishkin steps that bring colours `0..=label_bound` down to
/// `0..6`.
pub fn cole_vishkin_steps(label_bound: Label) -> u32 {
    let mut colours: u128 = u128::from(label_bound) + 1;
    let mut steps = 0;
    while colours > 6 {
        let bits = 128 - (colours - 1).leading_zeros();
        colours = 2 * u128::from(bits);
        steps += 1;
    }
    steps
}

/// Rounds used by [`three_colour`] for labels in `1..=label_bound`.
pub fn colour_reduction_rounds(label_bound: Label) -> u32 {
    // Cole–Vishkin, three shift-down phases of two rounds, six greedy rounds.
    cole_vishkin_steps(label_bound) + 6 + 6
}

fn cv_step(c: u64, parent: Option<u64>) -> u64 {
    match parent {
        Some(p) => {
            let i = u64::from((c ^ p).trailing_zeros());
            2 * i + ((c >> i) & 1)
        }
        None => c & 1,
    }
}

fn smallest_free(used: &[u64]) -> u64 {
    (0..3)
        .find(|c| !used.contains(c))
        .expect("at most two colours are excluded")
}

/// Parent of node `i` in forest `f`: its `f`-th larger-labelled neighbour.
fn parent(ring: &LocalRing, i: usize, nbrs: &[(usize, u64)], forest: usize) -> Option<usize> {
    let mut larger: Vec<usize> = nbrs
        .iter()
        .map(|&(w, _)| w)
        .filter(|&w| ring.labels[w] > ring.labels[i])
        .collect();
    larger.sort_by_key(|&w| ring.labels[w]);
    larger.get(forest).copied()
}

fn colour_of(nbrs: &[(usize, u64)], w: usize) -> u64 {
    nbrs.iter()
        .find(|&&(x, _)| x == w)
        .expect("parent is a neighbour")
        .1
}

/// Proper 3-colouring (colours 0, 1, 2) after [`colour_reduction_rounds`] rounds.
pub(crate) fn three_colour(ring: &LocalRing, label_bound: Label) -> Vec<Option<u8>> {
    let steps = cole_vishkin_steps(label_bound);
    let mut forests: Vec<Vec<Option<u64>>> = Vec::with_capacity(2);
    for f in 0..2 {
        let mut c: Vec<Option<u64>> = ring.labels.iter().map(|&l| Some(l)).collect();
        for _ in 0..steps {
            c = round(ring, &c, |i, ci, ns| {
                cv_step(ci, parent(ring, i, ns, f).map(|p| colour_of(ns, p)))
            });
        }
        for target in [5u64, 4, 3] {
            // shift down: take the parent's colour, roots pick a fresh one
            let shifted = round(ring, &c, |i, ci, ns| match parent(ring, i, ns, f) {
                Some(p) => colour_of(ns, p),
                None => smallest_free(&[ci]),
            });
            // pair each shifted colour with the pre-shift one, which is what
            // every child of the node now holds
            let paired: Vec<Option<(u64, u64)>> = shifted
                .iter()
                .zip(&c)
                .map(|(s, o)| Some(((*s)?, (*o)?)))
                .collect();
            let next = round(ring, &paired, |i, (si, oi), ns| {
                if si != target {
                    return (si, oi);
                }
                let ns: Vec<(usize, u64)> = ns.iter().map(|&(w, (s, _))| (w, s)).collect();
                let mut used = vec![oi];
                if let Some(p) = parent(ring, i, &ns, f) {
                    used.push(colour_of(&ns, p));
                }
                (smallest_free(&used), oi)
            });
            c = next.into_iter().map(|s| s.map(|(x, _)| x)).collect();
        }
        forests.push(c);
    }
    let mut c: Vec<Option<u64>> = forests[0]
        .iter()
        .zip(&forests[1])
        .map(|(a, b)| Some(3 * (*a)? + (*b)?))
        .collect();
    for class in 3..9u64 {
        c = round(ring, &c, |_, ci, ns| {
            if ci != class {
                return ci;
            }
            let used: Vec<u64> = ns.iter().map(|&(_, s)| s).collect();
            smallest_free(&used)
        });
    }
    c.into_iter().map(|x| x.map(|v| v as u8)).collect()
}

/// Rounds used by [`maximal_independent_set`].
pub(crate) const MIS_ROUNDS: u32 = 3;

/// A node's status after the independent-set phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct MisState {
    pub joined: bool,
    /// A joined neighbour, for nodes that did not join.
    pub blocker: Option<usize>,
}

/// Maximal independent set from a proper 3-colouring: colour class `c` joins
/// in phase `c` unless a neighbour already has.
pub(crate) fn maximal_independent_set(
    ring: &LocalRing,
    colours: &[Option<u8>],
) -> Vec<Option<MisState>> {
    let mut st: Vec<Option<(u8, MisState)>> = colours
        .iter()
        .map(|c| {
            c.map(|c| {
                (
                    c,
                    MisState {
                        joined: false,
                        blocker: None,
                    },
                )
            })
        })
        .collect();
    for phase in 0..3u8 {
        st = round(ring, &st, |_, (c, s), ns| {
            if c != phase || s.joined || s.blocker.is_some() {
                return (c, s);
            }
            let blocker = ns
                .iter()
                .filter(|(_, (_, t))| t.joined)
                .map(|&(w, _)| w)
                .min_by_key(|&w| ring.labels[w]);
            (
                c,
                MisState {
                    joined: blocker.is_none(),
                    blocker,
                },
            )
        });
    }
    st.into_iter().map(|s| s.map(|(_, m)| m)).collect()
}

/// A proper 3-colouring of a whole ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeColouring {
    /// Colour in `1..=3` per ring position.
    pub colours: Vec<u8>,
    /// LOCAL rounds consumed.
    pub rounds: u32,
}

/// Colours a ring with labels in `1..=label_bound` using three colours.
pub fn cole_vishkin_three_colour(
    ring: &RingSpec,
    label_bound: Label,
) -> Result<ThreeColouring, GraphError> {
    if let Some(&l) = ring.labels().iter().find(|&&l| l > label_bound) {
        return Err(GraphError::LabelOutOfRange {
            label: l,
            bound: label_bound,
        });
    }
    let local = LocalRing::from_strip(&RingStrip::whole_ring(ring.labels().to_vec()));
    let colours = three_colour(&local, label_bound)
        .into_iter()
        .map(|c| c.expect("whole ring is visible") + 1)
        .collect();
    Ok(ThreeColouring {
        colours,
        rounds: colour_reduction_rounds(label_bound),
    })
}
