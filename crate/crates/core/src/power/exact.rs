use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Indices, PowerError, PowerIndexReport};
use crate::game::{CoalitionTable, CooperativeGame};

/// `(s-1)! (n-s)! / n!` for `s = 1..=n`; entry 0 is zero.
pub fn pivot_weights(n: usize) -> Vec<BigRational> {
    let mut factorial = vec![BigInt::one()];
    for k in 1..=n {
        let next = &factorial[k - 1] * BigInt::from(k);
        factorial.push(next);
    }
    let mut weights = vec![BigRational::zero()];
    for s in 1..=n {
        weights.push(BigRational::new(
            &factorial[s - 1] * &factorial[n - s],
            factorial[n].clone(),
        ));
    }
    weights
}

/// Exact power indices by visiting every coalition of the player set.
///
/// For each coalition size `s`, counts the winning coalitions in which a
/// player is critical, then weights the counts by [`pivot_weights`]. Counts
/// are integers and weights exact rationals, so the indices over the player
/// set sum to exactly one whenever the grand coalition wins.
pub fn exact_power_indices(
    game: &CooperativeGame<'_>,
    cap: usize,
) -> Result<PowerIndexReport, PowerError> {
    let table = CoalitionTable::build(game, cap)?;
    let players = table.players();
    let n = players.len();

    // critical[k][s]: coalitions of size s in which player k is critical
    let mut critical = vec![vec![0u64; n + 1]; n];
    for mask in 1..(1usize << n) {
        if !table.is_winning(mask) {
            continue;
        }
        let size = mask.count_ones() as usize;
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if !table.is_winning(mask ^ (1 << k)) {
                critical[k][size] += 1;
            }
        }
    }

    let weights = pivot_weights(n);
    let mut values = vec![BigRational::zero(); game.fbas().len()];
    for (k, &node) in players.iter().enumerate() {
        let mut sigma = BigRational::zero();
        for (size, &count) in critical[k].iter().enumerate() {
            if count > 0 {
                sigma += &weights[size] * BigRational::from_integer(count.into());
            }
        }
        values[node] = sigma;
    }
    Ok(PowerIndexReport::new(
        game.fbas(),
        game.players().clone(),
        Indices::Exact(values),
    ))
}
