//! Constructive T-dominating-set algorithms and the iterated logarithm.

mod choose_smallest;
pub(crate) mod colour;
mod ruling_set;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Label, View};
use crate::sim::{AlgorithmFamily, DecideError, NodeAlgorithm, NodeOutput};

pub use choose_smallest::{ChooseSmallest, ChooseSmallestState};
pub use colour::{cole_vishkin_steps, cole_vishkin_three_colour, colour_reduction_rounds};
pub use ruling_set::{RulingParams, RulingSetDominator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("log* is undefined at 0")]
pub struct LogStarOfZero;

/// Iterated base-2 logarithm: the number of times `log2` must be applied to
/// `n` before the value drops to at most 1.
pub fn log_star(n: u64) -> Result<u32, LogStarOfZero> {
    if n == 0 {
        return Err(LogStarOfZero);
    }
    // x_i <= 1 after i applications iff n <= 2^^i (tower of i twos).
    let mut tower: u128 = 1;
    let mut i = 0;
    while u128::from(n) > tower {
        i += 1;
        tower = if tower >= 128 {
            u128::MAX
        } else {
            1u128 << tower
        };
    }
    Ok(i)
}

/// Every node outputs the same bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constant {
    bit: bool,
    name: &'static str,
}

impl Constant {
    pub fn new(bit: bool) -> Self {
        Constant {
            bit,
            name: if bit { "constant-1" } else { "constant-0" },
        }
    }
}

impl NodeAlgorithm for Constant {
    fn name(&self) -> &str {
        self.name
    }

    fn parameters(&self) -> BTreeMap<String, i64> {
        BTreeMap::from([("bit".to_string(), i64::from(self.bit))])
    }

    fn rounds(&self) -> u32 {
        0
    }

    fn decide(&self, view: &View) -> Result<NodeOutput, DecideError> {
        Ok(if self.bit {
            NodeOutput::with_path(true, vec![view.root_label()])
        } else {
            NodeOutput::member(false)
        })
    }
}

/// The algorithms addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NamedAlgorithm {
    ChooseSmallest,
    RulingSet,
    #[serde(rename = "constant-1")]
    ConstantOne,
    #[serde(rename = "constant-0")]
    ConstantZero,
}

impl NamedAlgorithm {
    pub const ALL: [NamedAlgorithm; 4] = [
        NamedAlgorithm::ChooseSmallest,
        NamedAlgorithm::RulingSet,
        NamedAlgorithm::ConstantOne,
        NamedAlgorithm::ConstantZero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedAlgorithm::ChooseSmallest => "choose-smallest",
            NamedAlgorithm::RulingSet => "ruling-set",
            NamedAlgorithm::ConstantOne => "constant-1",
            NamedAlgorithm::ConstantZero => "constant-0",
        }
    }
}

impl fmt::Display for NamedAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown algorithm `{0}` (expected choose-smallest, ruling-set, constant-1 or constant-0)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for NamedAlgorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedAlgorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}

impl AlgorithmFamily for NamedAlgorithm {
    fn name(&self) -> &str {
        self.as_str()
    }

    fn instantiate(&self, t: u32, label_bound: Label) -> Box<dyn NodeAlgorithm> {
        match self {
            NamedAlgorithm::ChooseSmallest => Box::new(ChooseSmallest::new(t)),
            NamedAlgorithm::RulingSet => Box::new(RulingSetDominator::new(t, label_bound)),
            NamedAlgorithm::ConstantOne => Box::new(Constant::new(true)),
            NamedAlgorithm::ConstantZero => Box::new(Constant::new(false)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct floating-point iteration of log2, fine for small arguments.
    fn log_star_by_iteration(n: u64) -> u32 {
        let mut x = n as f64;
        let mut i = 0;
        while x > 1.0 {
            x = x.log2();
            i += 1;
        }
        i
    }

    #[test]
    fn log_star_values() {
        assert_eq!(log_star(1), Ok(0));
        assert_eq!(log_star(2), Ok(1));
        assert_eq!(log_star(3), Ok(2));
        assert_eq!(log_star(4), Ok(2));
        assert_eq!(log_star(5), Ok(3));
        assert_eq!(log_star(16), Ok(3));
        assert_eq!(log_star(17), Ok(4));
        assert_eq!(log_star(65536), Ok(4));
        assert_eq!(log_star(65537), Ok(5));
        assert_eq!(log_star(u64::MAX), Ok(5));
        assert_eq!(log_star(0), Err(LogStarOfZero));
    }

    #[test]
    fn log_star_matches_iteration() {
        for n in (1..5000).chain([65535, 65536, 65537, 1 << 20]) {
            assert_eq!(log_star(n).unwrap(), log_star_by_iteration(n), "n = {n}");
        }
    }

    #[test]
    fn log_star_of_power_of_two() {
        for m in 1..64u32 {
            assert_eq!(
                log_star(1u64 << m).unwrap(),
                1 + log_star(u64::from(m)).unwrap()
            );
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in NamedAlgorithm::ALL {
            assert_eq!(a.as_str().parse::<NamedAlgorithm>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{}\"", a.as_str()));
        }
        assert!("greedy".parse::<NamedAlgorithm>().is_err());
    }
}
