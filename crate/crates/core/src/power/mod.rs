//! Shapley-Shubik power indices and the reward distribution built on them.
//!
//! A node's reward share is its power index in the quorum game. Indices are
//! computed exactly by enumerating coalitions of the top tier, or estimated
//! from seeded random permutations.

mod exact;
mod sampling;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::fbas::{Fbas, NodeId};
use crate::game::{CooperativeGame, GameError};
use crate::nodeset::NodeSet;
use crate::quorum::{find_minimal_quorums, quorum_intersection_of, top_tier_of, QuorumAnalysis};

pub use exact::{exact_power_indices, pivot_weights};
pub use sampling::{
    approx_power_indices, approx_power_indices_sharded, find_pivot, SAMPLE_BLOCK_SIZE,
};

/// Default bound on the number of players for exact enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 25;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PowerError {
    #[error("{players} players exceed the exact enumeration cap of {cap}; use sampling")]
    PlayerSetTooLarge { players: usize, cap: usize },
    #[error("the player set contains no winning coalition")]
    NoWinningCoalition,
    #[error("sample count must be at least 1")]
    ZeroSamples,
    #[error("the FBAS has no quorums")]
    NoQuorums,
    #[error("the FBAS lacks quorum intersection")]
    NoQuorumIntersection,
    #[error(transparent)]
    Game(GameError),
}

impl From<GameError> for PowerError {
    fn from(err: GameError) -> Self {
        match err {
            GameError::TooManyPlayers { players, cap } => {
                PowerError::PlayerSetTooLarge { players, cap }
            }
            other => PowerError::Game(other),
        }
    }
}

/// How power indices are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Approximate { samples: u64, seed: u64 },
}

/// Per-node index values, indexed by node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Indices {
    Exact(Vec<BigRational>),
    /// Pivot counts out of `samples` permutations.
    Sampled {
        pivots: Vec<u64>,
        samples: u64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerIndexReport {
    pub players: NodeSet,
    pub aliases: Vec<Option<String>>,
    pub indices: Indices,
}

impl PowerIndexReport {
    pub(crate) fn new(fbas: &Fbas, players: NodeSet, indices: Indices) -> Self {
        let aliases = fbas.nodes().iter().map(|n| n.alias.clone()).collect();
        Self {
            players,
            aliases,
            indices,
        }
    }

    pub fn len(&self) -> usize {
        self.aliases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aliases.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.indices, Indices::Exact(_))
    }

    pub fn method_name(&self) -> &'static str {
        match self.indices {
            Indices::Exact(_) => "exact",
            Indices::Sampled { .. } => "approx",
        }
    }

    pub fn samples(&self) -> Option<u64> {
        match self.indices {
            Indices::Exact(_) => None,
            Indices::Sampled { samples, .. } => Some(samples),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self.indices {
            Indices::Exact(_) => None,
            Indices::Sampled { seed, .. } => Some(seed),
        }
    }

    pub fn exact(&self, node: NodeId) -> Option<&BigRational> {
        match &self.indices {
            Indices::Exact(values) => Some(&values[node.0]),
            Indices::Sampled { .. } => None,
        }
    }

    pub fn value(&self, node: NodeId) -> f64 {
        match &self.indices {
            Indices::Exact(values) => values[node.0].to_f64().unwrap_or(f64::NAN),
            Indices::Sampled {
                pivots, samples, ..
            } => pivots[node.0] as f64 / *samples as f64,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(NodeId(i))).collect()
    }

    /// Exact sum of all indices.
    pub fn total(&self) -> BigRational {
        match &self.indices {
            Indices::Exact(values) => values.iter().fold(BigRational::zero(), |acc, v| acc + v),
            Indices::Sampled {
                pivots, samples, ..
            } => BigRational::new(pivots.iter().sum::<u64>().into(), (*samples).into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewardOptions {
    /// Compute shares even when two quorums may be disjoint.
    pub ignore_quorum_intersection: bool,
    pub enumeration_cap: usize,
}

impl Default for RewardOptions {
    fn default() -> Self {
        Self {
            ignore_quorum_intersection: false,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Reward share of every node: its power index in the game over the top
/// tier, zero for everyone else.
///
/// Refuses FBASs without quorum intersection unless told otherwise.
pub fn reward_distribution(
    fbas: &Fbas,
    method: Method,
    options: RewardOptions,
) -> Result<PowerIndexReport, PowerError> {
    let minimal_quorums = find_minimal_quorums(fbas);
    let analysis = QuorumAnalysis {
        node_count: fbas.len(),
        top_tier: top_tier_of(fbas, &minimal_quorums),
        quorum_intersection: quorum_intersection_of(fbas, &minimal_quorums),
        minimal_quorums,
    };
    reward_distribution_with(fbas, &analysis, method, options)
}

/// [`reward_distribution`] with the quorum structure already computed.
pub fn reward_distribution_with(
    fbas: &Fbas,
    analysis: &QuorumAnalysis,
    method: Method,
    options: RewardOptions,
) -> Result<PowerIndexReport, PowerError> {
    if analysis.minimal_quorums.is_empty() {
        return Err(PowerError::NoQuorums);
    }
    if !options.ignore_quorum_intersection && !analysis.quorum_intersection {
        return Err(PowerError::NoQuorumIntersection);
    }
    let game = CooperativeGame::with_players(fbas, analysis.top_tier.clone())?;
    match method {
        Method::Exact => exact_power_indices(&game, options.enumeration_cap),
        Method::Approximate { samples, seed } => approx_power_indices(&game, samples, seed),
    }
}
