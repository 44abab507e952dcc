//! The FBAS as a simple cooperative game: a coalition wins iff it contains a
//! quorum.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::fbas::Fbas;
use crate::nodeset::NodeSet;
use crate::quorum::{contains_quorum, top_tier};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("player set spans {players} nodes but the FBAS has {nodes}")]
    UniverseMismatch { players: usize, nodes: usize },
    #[error("coalition table over {players} players exceeds the cap of {cap}")]
    TooManyPlayers { players: usize, cap: usize },
}

/// Simple game over a subset of an FBAS's nodes.
#[derive(Clone, Debug)]
pub struct CooperativeGame<'a> {
    fbas: &'a Fbas,
    players: NodeSet,
}

impl<'a> CooperativeGame<'a> {
    /// Game over the top tier. Nodes outside it are never critical, so this
    /// is the same game restricted to the players that matter.
    pub fn over_top_tier(fbas: &'a Fbas) -> Self {
        Self {
            fbas,
            players: top_tier(fbas),
        }
    }

    /// Game over every node of the FBAS.
    pub fn over_all_nodes(fbas: &'a Fbas) -> Self {
        Self {
            fbas,
            players: fbas.all_nodes(),
        }
    }

    pub fn with_players(fbas: &'a Fbas, players: NodeSet) -> Result<Self, GameError> {
        if players.universe() != fbas.len() {
            return Err(GameError::UniverseMismatch {
                players: players.universe(),
                nodes: fbas.len(),
            });
        }
        Ok(Self { fbas, players })
    }

    pub fn fbas(&self) -> &'a Fbas {
        self.fbas
    }

    pub fn players(&self) -> &NodeSet {
        &self.players
    }

    /// `v(c)`: 1 if `coalition` contains a quorum, else 0.
    pub fn characteristic_value(&self, coalition: &NodeSet) -> u8 {
        u8::from(self.is_winning(coalition))
    }

    pub fn is_winning(&self, coalition: &NodeSet) -> bool {
        debug_assert!(
            coalition.is_subset(&self.players),
            "coalition outside player set"
        );
        contains_quorum(self.fbas, coalition)
    }

    /// `player` turns `coalition \ {player}` from losing into winning.
    pub fn is_critical(&self, player: usize, coalition: &NodeSet) -> bool {
        if !coalition.contains(player) || !self.is_winning(coalition) {
            return false;
        }
        let mut without = coalition.clone();
        without.remove(player);
        !self.is_winning(&without)
    }

    /// Player indices in ascending order.
    pub fn player_list(&self) -> Vec<usize> {
        self.players.to_vec()
    }
}

/// Memo of `v` over every coalition of a small player set.
///
/// Bit `mask` holds `v` of the coalition `{ players[k] : bit k of mask set }`.
/// Not shared between threads; build one per worker.
pub struct CoalitionTable {
    players: Vec<usize>,
    winning: FixedBitSet,
}

impl CoalitionTable {
    pub fn build(game: &CooperativeGame<'_>, cap: usize) -> Result<Self, GameError> {
        let players = game.player_list();
        let n = players.len();
        if n > cap || n >= usize::BITS as usize {
            return Err(GameError::TooManyPlayers { players: n, cap });
        }
        let size = 1usize << n;
        let mut winning = FixedBitSet::with_capacity(size);
        let mut coalition = game.fbas().empty_set();
        for mask in 1..size {
            // Monotone: dropping the lowest member and still winning means
            // this coalition wins too.
            let lower = mask & (mask - 1);
            if winning.contains(lower) {
                winning.insert(mask);
                continue;
            }
            coalition.clear();
            for (k, &p) in players.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    coalition.insert(p);
                }
            }
            if contains_quorum(game.fbas(), &coalition) {
                winning.insert(mask);
            }
        }
        Ok(Self { players, winning })
    }

    pub fn players(&self) -> &[usize] {
        &self.players
    }

    pub fn is_winning(&self, mask: usize) -> bool {
        self.winning.contains(mask)
    }

    pub fn coalition_count(&self) -> usize {
        self.winning.len()
    }
}
