//! Quorums, minimal quorums, top tier and quorum intersection.

use std::collections::HashSet;

use crate::fbas::Fbas;
use crate::nodeset::{canonicalize, NodeSet};

/// `set` is non-empty and satisfies the quorum set of each of its members.
pub fn is_quorum(fbas: &Fbas, set: &NodeSet) -> bool {
    !set.is_empty() && set.iter().all(|i| fbas.is_satisfied_for(i, set))
}

/// The largest quorum contained in `candidates`, or the empty set.
///
/// Nodes whose quorum set is not satisfied by the current set are pruned
/// until nothing changes. Quorums are closed under union, so the fixed point
/// is the union of every quorum inside `candidates`.
pub fn greatest_quorum_within(fbas: &Fbas, candidates: &NodeSet) -> NodeSet {
    let mut current = candidates.clone();
    let mut members = current.to_vec();
    loop {
        let before = members.len();
        members.retain(|&i| {
            if fbas.is_satisfied_for(i, &current) {
                true
            } else {
                current.remove(i);
                false
            }
        });
        if members.len() == before || members.is_empty() {
            return current;
        }
    }
}

/// Whether `candidates` contains at least one quorum.
pub fn contains_quorum(fbas: &Fbas, candidates: &NodeSet) -> bool {
    !greatest_quorum_within(fbas, candidates).is_empty()
}

/// Shrinks a quorum until no proper subset of it is a quorum.
fn shrink_to_minimal(fbas: &Fbas, mut quorum: NodeSet) -> NodeSet {
    'restart: loop {
        for member in quorum.to_vec() {
            let mut reduced = quorum.clone();
            reduced.remove(member);
            let inner = greatest_quorum_within(fbas, &reduced);
            if !inner.is_empty() {
                quorum = inner;
                continue 'restart;
            }
        }
        return quorum;
    }
}

/// All minimal quorums in canonical order (size, then lexicographic).
///
/// Include/exclude search over nodes. A branch is cut as soon as the nodes
/// still available contain no quorum that covers the nodes already included.
/// Once the included nodes alone contain a quorum, that quorum is shrunk to a
/// minimal one and the branch ends.
pub fn find_minimal_quorums(fbas: &Fbas) -> Vec<NodeSet> {
    let mut found = HashSet::new();
    search(fbas, fbas.empty_set(), fbas.all_nodes(), &mut found);
    let mut out: Vec<NodeSet> = found.into_iter().collect();
    canonicalize(&mut out);
    out
}

fn search(fbas: &Fbas, included: NodeSet, available: NodeSet, found: &mut HashSet<NodeSet>) {
    // Every quorum inside `available` is inside `core`.
    let core = greatest_quorum_within(fbas, &available);
    if core.is_empty() || !included.is_subset(&core) {
        return;
    }
    if !included.is_empty() {
        let inner = greatest_quorum_within(fbas, &included);
        if !inner.is_empty() {
            found.insert(shrink_to_minimal(fbas, inner));
            return;
        }
    }
    let Some(pick) = core.difference(&included).iter().next() else {
        return;
    };

    let mut with = included.clone();
    with.insert(pick);
    search(fbas, with, core.clone(), found);

    let mut without = core;
    without.remove(pick);
    search(fbas, included, without, found);
}

/// Union of all minimal quorums.
pub fn top_tier(fbas: &Fbas) -> NodeSet {
    top_tier_of(fbas, &find_minimal_quorums(fbas))
}

pub fn top_tier_of(fbas: &Fbas, minimal_quorums: &[NodeSet]) -> NodeSet {
    let mut tier = fbas.empty_set();
    for q in minimal_quorums {
        tier.union_with(q);
    }
    tier
}

/// True iff there is at least one quorum and every two quorums intersect.
pub fn has_quorum_intersection(fbas: &Fbas) -> bool {
    quorum_intersection_of(fbas, &find_minimal_quorums(fbas))
}

/// Quorum intersection given the minimal quorums.
///
/// Two disjoint minimal quorums exist iff some minimal quorum leaves a quorum
/// in its complement, so one fixpoint per minimal quorum replaces the
/// pairwise comparison.
pub fn quorum_intersection_of(fbas: &Fbas, minimal_quorums: &[NodeSet]) -> bool {
    !minimal_quorums.is_empty()
        && minimal_quorums
            .iter()
            .all(|q| !contains_quorum(fbas, &q.complement()))
}

/// Structural summary of an FBAS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuorumAnalysis {
    pub node_count: usize,
    pub minimal_quorums: Vec<NodeSet>,
    pub top_tier: NodeSet,
    pub quorum_intersection: bool,
}

impl QuorumAnalysis {
    pub fn of(fbas: &Fbas) -> Self {
        let minimal_quorums = find_minimal_quorums(fbas);
        let top_tier = top_tier_of(fbas, &minimal_quorums);
        let quorum_intersection = quorum_intersection_of(fbas, &minimal_quorums);
        Self {
            node_count: fbas.len(),
            minimal_quorums,
            top_tier,
            quorum_intersection,
        }
    }
}
