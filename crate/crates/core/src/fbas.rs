//! The FBAS model: nodes, their quorum sets, and validation.
//!
//! Quorum sets are evaluated directly and never expanded into slices. A node
//! is always a member of every set it is evaluated against (quorum checks only
//! ever ask whether `Q(i)` is satisfied by a set containing `i`), which gives
//! the "node belongs to its own slices" rule without touching stored data.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::nodeset::NodeSet;

/// Dense node index, `0..n` within one [`Fbas`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i)
    }
}

/// Threshold structure "at least `threshold` of `validators` and `inner_sets`".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuorumSet {
    pub threshold: usize,
    pub validators: Vec<NodeId>,
    pub inner_sets: Vec<QuorumSet>,
}

impl QuorumSet {
    pub fn new(threshold: usize, validators: Vec<NodeId>, inner_sets: Vec<QuorumSet>) -> Self {
        Self {
            threshold,
            validators,
            inner_sets,
        }
    }

    /// Flat "any `threshold` of `validators`".
    pub fn flat<I>(threshold: usize, validators: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        Self::new(
            threshold,
            validators.into_iter().map(NodeId).collect(),
            vec![],
        )
    }

    /// Direct members: validators plus inner sets.
    pub fn member_count(&self) -> usize {
        self.validators.len() + self.inner_sets.len()
    }

    /// True when enough members exist for the threshold to be reachable, at
    /// every nesting level that matters.
    pub fn is_satisfiable(&self) -> bool {
        let reachable = self.validators.len()
            + self
                .inner_sets
                .iter()
                .filter(|q| q.is_satisfiable())
                .count();
        self.threshold <= reachable
    }

    /// At least `threshold` of the direct members are met by `set`: a
    /// validator is met when it is in `set`, an inner set when it is itself
    /// satisfied by `set`.
    pub fn is_satisfied_by(&self, set: &NodeSet) -> bool {
        let mut met = self
            .validators
            .iter()
            .filter(|v| set.contains(v.index()))
            .count();
        if met >= self.threshold {
            return true;
        }
        for inner in &self.inner_sets {
            if inner.is_satisfied_by(set) {
                met += 1;
                if met >= self.threshold {
                    return true;
                }
            }
        }
        false
    }

    /// Every validator referenced at any depth.
    pub fn all_validators(&self) -> Vec<NodeId> {
        let mut out = self.validators.clone();
        for inner in &self.inner_sets {
            out.extend(inner.all_validators());
        }
        out
    }
}

/// Free-function form of [`QuorumSet::is_satisfied_by`].
pub fn is_quorum_set_satisfied(qset: &QuorumSet, set: &NodeSet) -> bool {
    qset.is_satisfied_by(set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    pub alias: Option<String>,
    pub quorum_set: QuorumSet,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FbasError {
    #[error("node at position {position} has index {index}; indices must be 0..n in order")]
    NonContiguousIndex { position: usize, index: usize },
    #[error("alias {0:?} is used by more than one node")]
    DuplicateAlias(String),
    #[error("node {node} references unknown validator {validator}")]
    UnknownValidator { node: NodeId, validator: NodeId },
    #[error("node {node} lists validator {validator} more than once in one quorum set")]
    DuplicateValidator { node: NodeId, validator: NodeId },
    #[error("node {node} has a quorum set with threshold 0")]
    ZeroThreshold { node: NodeId },
}

/// Quorum set with its validators as a bitmask, for fast evaluation.
#[derive(Clone, Debug)]
struct CompiledQuorumSet {
    threshold: usize,
    validators: NodeSet,
    inner: Vec<CompiledQuorumSet>,
}

impl CompiledQuorumSet {
    fn compile(qset: &QuorumSet, universe: usize) -> Self {
        Self {
            threshold: qset.threshold,
            validators: NodeSet::from_indices(universe, qset.validators.iter().map(|v| v.0)),
            inner: qset
                .inner_sets
                .iter()
                .map(|q| Self::compile(q, universe))
                .collect(),
        }
    }

    fn is_satisfied_by(&self, set: &NodeSet) -> bool {
        let mut met = self.validators.intersection_count(set);
        if met >= self.threshold {
            return true;
        }
        for inner in &self.inner {
            if inner.is_satisfied_by(set) {
                met += 1;
                if met >= self.threshold {
                    return true;
                }
            }
        }
        false
    }
}

/// A federated Byzantine agreement system: nodes and their quorum sets.
///
/// Immutable once built; all analysis lives in [`crate::quorum`].
#[derive(Clone, Debug)]
pub struct Fbas {
    nodes: Vec<Node>,
    compiled: Vec<CompiledQuorumSet>,
}

impl PartialEq for Fbas {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

impl Eq for Fbas {}

impl Fbas {
    /// Validates and builds an FBAS.
    ///
    /// Quorum sets whose threshold exceeds their member count are accepted;
    /// such nodes never join a quorum.
    pub fn new(nodes: Vec<Node>) -> Result<Self, FbasError> {
        let n = nodes.len();
        let mut aliases = HashSet::new();
        for (position, node) in nodes.iter().enumerate() {
            if node.id.0 != position {
                return Err(FbasError::NonContiguousIndex {
                    position,
                    index: node.id.0,
                });
            }
            if let Some(alias) = &node.alias {
                if !aliases.insert(alias.as_str()) {
                    return Err(FbasError::DuplicateAlias(alias.clone()));
                }
            }
            validate_quorum_set(node.id, &node.quorum_set, n)?;
            if !node.quorum_set.is_satisfiable() {
                log::warn!("node {} has an unsatisfiable quorum set", node.id);
            }
        }
        let compiled = nodes
            .iter()
            .map(|node| CompiledQuorumSet::compile(&node.quorum_set, n))
            .collect();
        Ok(Self { nodes, compiled })
    }

    /// Builds an FBAS from bare quorum sets; node `i` gets `quorum_sets[i]`
    /// and no alias.
    pub fn from_quorum_sets(quorum_sets: Vec<QuorumSet>) -> Result<Self, FbasError> {
        Self::new(
            quorum_sets
                .into_iter()
                .enumerate()
                .map(|(i, quorum_set)| Node {
                    id: NodeId(i),
                    alias: None,
                    quorum_set,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn quorum_set(&self, id: NodeId) -> &QuorumSet {
        &self.nodes[id.0].quorum_set
    }

    pub fn alias(&self, id: NodeId) -> Option<&str> {
        self.nodes[id.0].alias.as_deref()
    }

    pub fn find_alias(&self, alias: &str) -> Option<NodeId> {
        self.nodes
            .iter()
            .find(|n| n.alias.as_deref() == Some(alias))
            .map(|n| n.id)
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.len())
    }

    pub fn empty_set(&self) -> NodeSet {
        NodeSet::empty(self.len())
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, indices: I) -> NodeSet {
        NodeSet::from_indices(self.len(), indices)
    }

    /// Whether node `id`'s quorum set is satisfied by `set`.
    pub fn is_satisfied_for(&self, id: usize, set: &NodeSet) -> bool {
        self.compiled[id].is_satisfied_by(set)
    }

    /// Returns a copy with extra nodes appended. The new nodes may reference
    /// each other and any existing node.
    pub fn extended(&self, extra: Vec<(Option<String>, QuorumSet)>) -> Result<Fbas, FbasError> {
        let mut nodes = self.nodes.clone();
        for (alias, quorum_set) in extra {
            nodes.push(Node {
                id: NodeId(nodes.len()),
                alias,
                quorum_set,
            });
        }
        Fbas::new(nodes)
    }
}

fn validate_quorum_set(node: NodeId, qset: &QuorumSet, n: usize) -> Result<(), FbasError> {
    if qset.threshold == 0 {
        return Err(FbasError::ZeroThreshold { node });
    }
    let mut seen = HashSet::new();
    for &validator in &qset.validators {
        if validator.0 >= n {
            return Err(FbasError::UnknownValidator { node, validator });
        }
        if !seen.insert(validator) {
            return Err(FbasError::DuplicateValidator { node, validator });
        }
    }
    for inner in &qset.inner_sets {
        validate_quorum_set(node, inner, n)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_threshold_counts_present_validators() {
        let q = QuorumSet::flat(3, [0, 1, 2]);
        assert!(q.is_satisfied_by(&NodeSet::from_indices(5, [0, 1, 2])));
        assert!(!q.is_satisfied_by(&NodeSet::from_indices(5, [0, 1])));
    }

    #[test]
    fn inner_sets_count_as_single_members() {
        let q = QuorumSet::new(
            2,
            vec![],
            vec![QuorumSet::flat(2, [0, 1, 2]), QuorumSet::flat(2, [3, 4, 5])],
        );
        assert!(q.is_satisfied_by(&NodeSet::from_indices(6, [0, 1, 3, 4])));
        assert!(!q.is_satisfied_by(&NodeSet::from_indices(6, [0, 1, 2, 3])));
    }

    #[test]
    fn validation_rejects_bad_references() {
        let err = Fbas::from_quorum_sets(vec![QuorumSet::flat(1, [1])]).unwrap_err();
        assert_eq!(
            err,
            FbasError::UnknownValidator {
                node: NodeId(0),
                validator: NodeId(1)
            }
        );
        let err = Fbas::from_quorum_sets(vec![QuorumSet::flat(1, [0, 0])]).unwrap_err();
        assert!(matches!(err, FbasError::DuplicateValidator { .. }));
        let err = Fbas::from_quorum_sets(vec![QuorumSet::flat(0, [0])]).unwrap_err();
        assert!(matches!(err, FbasError::ZeroThreshold { .. }));
    }

    #[test]
    fn validation_rejects_duplicate_aliases_and_gaps() {
        let node = |i, alias: &str| Node {
            id: NodeId(i),
            alias: Some(alias.to_string()),
            quorum_set: QuorumSet::flat(1, [0]),
        };
        assert_eq!(
            Fbas::new(vec![node(0, "a"), node(1, "a")]).unwrap_err(),
            FbasError::DuplicateAlias("a".into())
        );
        assert!(matches!(
            Fbas::new(vec![node(1, "a")]).unwrap_err(),
            FbasError::NonContiguousIndex { .. }
        ));
    }

    #[test]
    fn unsatisfiable_quorum_sets_are_accepted() {
        let fbas = Fbas::from_quorum_sets(vec![QuorumSet::flat(2, [0])]).unwrap();
        assert!(!fbas.quorum_set(NodeId(0)).is_satisfiable());
        assert!(!fbas.is_satisfied_for(0, &fbas.all_nodes()));
    }
}
