//! Permutation sampling estimator.
//!
//! Samples are cut into fixed-size blocks. Block `b` draws its permutations
//! from a ChaCha8 stream `b` keyed by the run seed, so the sequence of
//! permutations depends only on `(seed, samples)` and never on how blocks are
//! spread over threads.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Indices, PowerError, PowerIndexReport};
use crate::game::CooperativeGame;
use crate::nodeset::NodeSet;

pub const SAMPLE_BLOCK_SIZE: u64 = 4096;

/// The player whose arrival first makes the growing prefix of `order`
/// winning. Requires the whole of `order` to be winning.
///
/// Binary search over the prefix length; the game is monotone, so the
/// winning prefixes are exactly those at least as long as the pivot's.
pub fn find_pivot(game: &CooperativeGame<'_>, order: &[usize], scratch: &mut NodeSet) -> usize {
    let (mut lo, mut hi) = (1, order.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        scratch.clear();
        for &p in &order[..mid] {
            scratch.insert(p);
        }
        if game.is_winning(scratch) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    order[lo - 1]
}

/// Estimates power indices from `samples` uniformly random permutations of
/// the player set. Deterministic in `(seed, samples)` and the player set.
pub fn approx_power_indices(
    game: &CooperativeGame<'_>,
    samples: u64,
    seed: u64,
) -> Result<PowerIndexReport, PowerError> {
    approx_power_indices_sharded(game, samples, seed, 1)
}

/// Same estimate as [`approx_power_indices`], computed on `workers` threads.
pub fn approx_power_indices_sharded(
    game: &CooperativeGame<'_>,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<PowerIndexReport, PowerError> {
    if samples == 0 {
        return Err(PowerError::ZeroSamples);
    }
    let players = game.player_list();
    if players.is_empty() || !game.is_winning(game.players()) {
        return Err(PowerError::NoWinningCoalition);
    }

    let blocks = samples.div_ceil(SAMPLE_BLOCK_SIZE);
    let workers = (workers.max(1) as u64).min(blocks);
    let pivots = if workers == 1 {
        let mut pivots = vec![0u64; game.fbas().len()];
        for block in 0..blocks {
            run_block(game, &players, seed, block, samples, &mut pivots);
        }
        pivots
    } else {
        let partials: Vec<Vec<u64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let players = &players;
                    scope.spawn(move || {
                        let mut pivots = vec![0u64; game.fbas().len()];
                        let mut block = w;
                        while block < blocks {
                            run_block(game, players, seed, block, samples, &mut pivots);
                            block += workers;
                        }
                        pivots
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sampling worker panicked"))
                .collect()
        });
        let mut pivots = vec![0u64; game.fbas().len()];
        for partial in partials {
            for (total, count) in pivots.iter_mut().zip(partial) {
                *total += count;
            }
        }
        pivots
    };

    Ok(PowerIndexReport::new(
        game.fbas(),
        game.players().clone(),
        Indices::Sampled {
            pivots,
            samples,
            seed,
        },
    ))
}

fn run_block(
    game: &CooperativeGame<'_>,
    players: &[usize],
    seed: u64,
    block: u64,
    samples: u64,
    pivots: &mut [u64],
) {
    let start = block * SAMPLE_BLOCK_SIZE;
    let len = SAMPLE_BLOCK_SIZE.min(samples - start);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let mut order = players.to_vec();
    let mut scratch = game.fbas().empty_set();
    for _ in 0..len {
        order.shuffle(&mut rng);
        pivots[find_pivot(game, &order, &mut scratch)] += 1;
    }
}
