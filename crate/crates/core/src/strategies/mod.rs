//! Constructive Maker strategies, the connectivity Maker they delegate to,
//! adversarial Breakers, and the bias bounds each Maker is guaranteed against.

mod bounds;
mod breakers;
mod connectivity;
mod main1;
mod main2;
mod main3;

use crate::engine::{Player, Position};

pub use self::bounds::{bound_report, BoundReport};
pub use self::breakers::{BipartiteGuard, CutAttack, RandomBreaker};
pub use self::connectivity::ConnectivityMaker;
pub use self::main1::{Main1Maker, Main1Options};
pub use self::main2::{merge_components, Main2Maker, Main2Options, Main2Plan, MergeCase, MergeStep};
pub use self::main3::{Main3Case, Main3Maker, Main3Options};

/// A mutable copy of the ownership state used while filling one turn.
#[derive(Clone, Debug)]
pub(crate) struct View {
    pub owner: Vec<Option<Player>>,
    pub maker: Vec<usize>,
}

impl View {
    pub fn new(pos: &Position) -> Self {
        View { owner: (0..pos.board_size()).map(|e| pos.owner(e)).collect(), maker: pos.maker_claims().to_vec() }
    }

    pub fn is_free(&self, e: usize) -> bool {
        self.owner[e].is_none()
    }

    pub fn is_maker(&self, e: usize) -> bool {
        self.owner[e] == Some(Player::Maker)
    }

    pub fn take(&mut self, e: usize, player: Player) {
        debug_assert!(self.owner[e].is_none());
        self.owner[e] = Some(player);
        if player == Player::Maker {
            self.maker.push(e);
        }
    }

    pub fn first_free(&self) -> Option<usize> {
        self.owner.iter().position(Option::is_none)
    }

    pub fn free(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(i, _)| i)
    }
}

/// Union-find with path halving.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
