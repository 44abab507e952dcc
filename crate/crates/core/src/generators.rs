//! Synthetic FBAS families and small fixtures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::fbas::{Fbas, Node, NodeId, QuorumSet};

/// Byzantine-optimal threshold for `k` members: `k - floor((k - 1) / 3)`.
///
/// Panics if `k == 0`.
pub fn optimal_threshold(k: usize) -> usize {
    assert!(k >= 1, "threshold of an empty group");
    k - (k - 1) / 3
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Symmetric,
    Organizational,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::Symmetric => "symmetric",
            TopologyKind::Organizational => "organizational",
        })
    }
}

impl FromStr for TopologyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symmetric" => Ok(TopologyKind::Symmetric),
            "organizational" | "org" => Ok(TopologyKind::Organizational),
            other => Err(format!("unknown topology kind {other:?}")),
        }
    }
}

/// One synthetic topology. `size` is the node count for symmetric systems and
/// the organization count for organizational ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TopologySpec {
    pub kind: TopologyKind,
    pub size: usize,
}

impl TopologySpec {
    pub fn symmetric(n: usize) -> Self {
        Self {
            kind: TopologyKind::Symmetric,
            size: n,
        }
    }

    pub fn organizational(orgs: usize) -> Self {
        Self {
            kind: TopologyKind::Organizational,
            size: orgs,
        }
    }

    pub fn node_count(&self) -> usize {
        match self.kind {
            TopologyKind::Symmetric => self.size,
            TopologyKind::Organizational => 3 * self.size,
        }
    }

    /// Panics if `size == 0`.
    pub fn build(&self) -> Fbas {
        match self.kind {
            TopologyKind::Symmetric => gen_symmetric(self.size),
            TopologyKind::Organizational => gen_organizational(self.size),
        }
    }
}

/// `n` nodes that all use "any `optimal_threshold(n)` of all nodes".
///
/// Panics if `n == 0`.
pub fn gen_symmetric(n: usize) -> Fbas {
    assert!(n >= 1, "symmetric FBAS needs at least one node");
    let qset = QuorumSet::flat(optimal_threshold(n), 0..n);
    let nodes = (0..n)
        .map(|i| Node {
            id: NodeId(i),
            alias: Some(format!("n{i}")),
            quorum_set: qset.clone(),
        })
        .collect();
    Fbas::new(nodes).expect("generated symmetric FBAS is valid")
}

/// `orgs` organizations of three nodes each. Every organization is an inner
/// set "2 of its 3 nodes"; every node requires `optimal_threshold(orgs)` of
/// the organizations.
///
/// Panics if `orgs == 0`.
pub fn gen_organizational(orgs: usize) -> Fbas {
    assert!(
        orgs >= 1,
        "organizational FBAS needs at least one organization"
    );
    let inner: Vec<QuorumSet> = (0..orgs)
        .map(|j| QuorumSet::flat(2, 3 * j..3 * j + 3))
        .collect();
    let qset = QuorumSet::new(optimal_threshold(orgs), vec![], inner);
    let nodes = (0..3 * orgs)
        .map(|i| Node {
            id: NodeId(i),
            alias: Some(format!("org{}-n{}", i / 3, i % 3)),
            quorum_set: qset.clone(),
        })
        .collect();
    Fbas::new(nodes).expect("generated organizational FBAS is valid")
}

/// Five nodes: a hub `0` requiring any 3 of all five, and two clusters
/// `{0,1,2}` and `{0,3,4}` whose members require all 3 of their cluster.
///
/// Minimal quorums are `{0,1,2}` and `{0,3,4}`.
pub fn hub_example() -> Fbas {
    let qsets = [
        QuorumSet::flat(3, [0, 1, 2, 3, 4]),
        QuorumSet::flat(3, [0, 1, 2]),
        QuorumSet::flat(3, [0, 1, 2]),
        QuorumSet::flat(3, [0, 3, 4]),
        QuorumSet::flat(3, [0, 3, 4]),
    ];
    let nodes = qsets
        .into_iter()
        .enumerate()
        .map(|(i, quorum_set)| Node {
            id: NodeId(i),
            alias: Some(format!("n{i}")),
            quorum_set,
        })
        .collect();
    Fbas::new(nodes).expect("hub example is valid")
}

/// Appends `k` leaf nodes that copy node 0's quorum set. Nobody references a
/// leaf, so no leaf is ever part of a minimal quorum.
///
/// Panics on an empty FBAS.
pub fn with_leaves(fbas: &Fbas, k: usize) -> Fbas {
    assert!(!fbas.is_empty(), "leaves need an existing node to copy");
    let template = fbas.quorum_set(NodeId(0)).clone();
    let base = fbas.len();
    let extra = (0..k)
        .map(|j| {
            let alias = fbas.alias(NodeId(0)).map(|_| format!("leaf{}", base + j));
            (alias, template.clone())
        })
        .collect();
    fbas.extended(extra).expect("leaf extension is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        let expected = [(1, 1), (2, 2), (3, 3), (4, 3), (5, 4), (7, 5), (10, 7)];
        for (k, t) in expected {
            assert_eq!(optimal_threshold(k), t, "k = {k}");
        }
    }

    #[test]
    fn symmetric_four() {
        let fbas = gen_symmetric(4);
        for node in fbas.nodes() {
            assert_eq!(node.quorum_set, QuorumSet::flat(3, 0..4));
        }
        assert_eq!(fbas.alias(NodeId(2)), Some("n2"));
    }

    #[test]
    fn symmetric_one() {
        let fbas = gen_symmetric(1);
        assert_eq!(fbas.quorum_set(NodeId(0)), &QuorumSet::flat(1, [0]));
    }

    #[test]
    fn organizational_layout() {
        let fbas = gen_organizational(1);
        assert_eq!(fbas.len(), 3);
        let q = fbas.quorum_set(NodeId(0));
        assert_eq!(q.threshold, 1);
        assert_eq!(q.inner_sets, vec![QuorumSet::flat(2, [0, 1, 2])]);

        let fbas = gen_organizational(4);
        assert_eq!(fbas.len(), 12);
        assert_eq!(fbas.quorum_set(NodeId(11)).threshold, 3);
        assert_eq!(fbas.alias(NodeId(7)), Some("org2-n1"));
        assert_eq!(gen_organizational(2).quorum_set(NodeId(0)).threshold, 2);
    }

    #[test]
    fn topology_spec_round_trips_kind_names() {
        for kind in [TopologyKind::Symmetric, TopologyKind::Organizational] {
            assert_eq!(kind.to_string().parse::<TopologyKind>().unwrap(), kind);
        }
        assert_eq!(TopologySpec::organizational(5).node_count(), 15);
    }

    #[test]
    fn leaves_get_fresh_aliases() {
        let fbas = with_leaves(&hub_example(), 2);
        assert_eq!(fbas.len(), 7);
        assert_eq!(fbas.alias(NodeId(6)), Some("leaf6"));
    }
}
