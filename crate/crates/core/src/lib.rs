//! Quorum analysis and fair reward distribution for federated Byzantine
//! agreement systems (FBAS).
//!
//! An FBAS is cast as a simple cooperative game in which a coalition wins iff
//! it contains a quorum. Each node's reward share is its Shapley-Shubik power
//! index in that game. Only top-tier nodes (members of some minimal quorum)
//! can ever be pivotal, so games are played over the top tier and every other
//! node receives zero.
//!
//! ```
//! use fbas_reward::{generators, reward_distribution, Method, NodeId, RewardOptions};
//!
//! let fbas = generators::gen_symmetric(4);
//! let report = reward_distribution(&fbas, Method::Exact, RewardOptions::default()).unwrap();
//! assert_eq!(report.value(NodeId(0)), 0.25);
//! ```

pub mod experiments;
pub mod fbas;
pub mod game;
pub mod generators;
pub mod io;
pub mod nodeset;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod power;
pub mod quorum;

pub use fbas::{is_quorum_set_satisfied, Fbas, FbasError, Node, NodeId, QuorumSet};
pub use game::{CoalitionTable, CooperativeGame, GameError};
pub use nodeset::NodeSet;
pub use power::{
    approx_power_indices, approx_power_indices_sharded, exact_power_indices, reward_distribution,
    reward_distribution_with, Indices, Method, PowerError, PowerIndexReport, RewardOptions,
    DEFAULT_ENUMERATION_CAP,
};
pub use quorum::{
    find_minimal_quorums, greatest_quorum_within, has_quorum_intersection, is_quorum, top_tier,
    QuorumAnalysis,
};
