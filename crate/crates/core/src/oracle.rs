//! Brute-force reference implementations for tests.
//!
//! Everything here works on plain `u32` masks over all nodes and evaluates
//! quorum sets with its own recursion, sharing no code with the library
//! paths it is used to check. Only for small systems (n ≤ 20).

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::fbas::{Fbas, QuorumSet};

pub const MAX_NODES: usize = 20;

fn satisfied(qset: &QuorumSet, mask: u32) -> bool {
    let validators = qset
        .validators
        .iter()
        .filter(|v| mask >> v.0 & 1 == 1)
        .count();
    let inner = qset
        .inner_sets
        .iter()
        .filter(|q| satisfied(q, mask))
        .count();
    validators + inner >= qset.threshold
}

pub fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn vec_to_mask(members: &[usize]) -> u32 {
    members.iter().fold(0, |m, &i| m | 1 << i)
}

fn check_size(fbas: &Fbas) -> usize {
    let n = fbas.len();
    assert!(n <= MAX_NODES, "oracle limited to {MAX_NODES} nodes");
    n
}

/// `quorum[mask]` for every subset of the nodes.
pub fn quorum_table(fbas: &Fbas) -> Vec<bool> {
    let n = check_size(fbas);
    (0..1u32 << n)
        .map(|mask| {
            mask != 0
                && mask_to_vec(mask)
                    .iter()
                    .all(|&i| satisfied(&fbas.nodes()[i].quorum_set, mask))
        })
        .collect()
}

/// `winning[mask]`: the subset contains some quorum.
pub fn winning_table(fbas: &Fbas) -> Vec<bool> {
    let quorum = quorum_table(fbas);
    let mut winning = quorum.clone();
    for mask in 0..winning.len() {
        if winning[mask] {
            continue;
        }
        winning[mask] = mask_to_vec(mask as u32)
            .iter()
            .any(|&i| winning[mask & !(1 << i)]);
    }
    winning
}

pub fn is_quorum(fbas: &Fbas, members: &[usize]) -> bool {
    quorum_table(fbas)[vec_to_mask(members) as usize]
}

/// Union of every quorum inside `within`.
pub fn greatest_quorum_within(fbas: &Fbas, within: &[usize]) -> Vec<usize> {
    let quorum = quorum_table(fbas);
    let within = vec_to_mask(within);
    let mut union = 0u32;
    for (mask, &q) in quorum.iter().enumerate() {
        let mask = mask as u32;
        if q && mask & !within == 0 {
            union |= mask;
        }
    }
    mask_to_vec(union)
}

/// Minimal quorums, ordered by size then lexicographically.
pub fn minimal_quorums(fbas: &Fbas) -> Vec<Vec<usize>> {
    let quorum = quorum_table(fbas);
    let quorums: Vec<u32> = (0..quorum.len() as u32)
        .filter(|&m| quorum[m as usize])
        .collect();
    let mut minimal: Vec<Vec<usize>> = quorums
        .iter()
        .filter(|&&q| !quorums.iter().any(|&p| p != q && p & !q == 0))
        .map(|&q| mask_to_vec(q))
        .collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    minimal
}

pub fn top_tier(fbas: &Fbas) -> Vec<usize> {
    let mask = minimal_quorums(fbas)
        .iter()
        .fold(0, |m, q| m | vec_to_mask(q));
    mask_to_vec(mask)
}

/// Every pair of quorums intersects, and at least one quorum exists.
pub fn has_quorum_intersection(fbas: &Fbas) -> bool {
    let quorum = quorum_table(fbas);
    let quorums: Vec<u32> = (0..quorum.len() as u32)
        .filter(|&m| quorum[m as usize])
        .collect();
    !quorums.is_empty() && quorums.iter().all(|&a| quorums.iter().all(|&b| a & b != 0))
}

fn next_permutation(items: &mut [usize]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

/// Power indices by walking all `n!` orderings of `players` and counting,
/// per player, the orderings in which it completes the first winning prefix.
/// Indexed by node; nodes outside `players` get zero.
pub fn permutation_power_indices(fbas: &Fbas, players: &[usize]) -> Vec<BigRational> {
    assert!(players.len() <= 10, "n! enumeration limited to 10 players");
    let winning = winning_table(fbas);
    let mut order = players.to_vec();
    order.sort_unstable();
    let mut pivots = vec![0u64; fbas.len()];
    let mut total = 0u64;
    loop {
        total += 1;
        let mut prefix = 0u32;
        for &p in &order {
            prefix |= 1 << p;
            if winning[prefix as usize] {
                pivots[p] += 1;
                break;
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    pivots
        .into_iter()
        .map(|c| BigRational::new(BigInt::from(c), BigInt::from(total)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_enumeration_counts_factorial() {
        let mut items = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut items) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
