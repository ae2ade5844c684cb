//! The Maker-Breaker game state machine.
//!
//! A [`GameSpec`] fixes the host graph, the board (its edges or its
//! vertices), the biases, the move order and the winning predicate.
//! [`Position`] tracks who owns which board element. Strategies implement
//! [`Strategy`] and are driven by [`play`], which records every turn in a
//! [`Transcript`] that can be rendered to and parsed from the `game-v1`
//! text format.

mod evaluate;
mod play;
mod transcript;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

pub use self::evaluate::{evaluate, evaluate_claims, Outcome, Witness};
pub use self::play::{derive_seed, play, Forfeit, ForfeitRecord, GameResult, Strategy};
pub use self::transcript::Transcript;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
        }
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maker" => Ok(Player::Maker),
            "breaker" => Ok(Player::Breaker),
            _ => Err(Error::domain(format!("unknown player `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoardKind {
    Edge,
    Vertex,
}

impl BoardKind {
    pub fn name(self) -> &'static str {
        match self {
            BoardKind::Edge => "edge",
            BoardKind::Vertex => "vertex",
        }
    }

    /// Prefix used for board elements in transcripts.
    pub fn prefix(self) -> char {
        match self {
            BoardKind::Edge => 'e',
            BoardKind::Vertex => 'v',
        }
    }
}

impl FromStr for BoardKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(BoardKind::Edge),
            "vertex" => Ok(BoardKind::Vertex),
            _ => Err(Error::domain(format!("unknown board kind `{s}`"))),
        }
    }
}

/// The family of winning sets, described by a monotone predicate on
/// Maker's claims.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WinPredicate {
    /// Maker's graph contains an odd cycle.
    OddCycle,
    /// Maker's graph is not `k`-colorable.
    NonKColorable(usize),
    /// Maker's edges connect every host vertex.
    SpanningConnected,
    /// Maker's edges form a `k`-edge-connected spanning subgraph.
    Connectivity(usize),
    /// Auxiliary vertex game: `M` lies inside one component of
    /// `host[T ∪ M]`, or `host[T ∪ M]` contains a triangle, where `T` is
    /// Maker's vertex set.
    AuxGhm(VertexSet),
}

impl WinPredicate {
    /// Single-token form used by transcripts and the CLI, e.g.
    /// `odd-cycle`, `non-colorable:3`, `connectivity:2`, `aux-ghm:0,4,7`.
    pub fn label(&self) -> String {
        match self {
            WinPredicate::OddCycle => "odd-cycle".into(),
            WinPredicate::NonKColorable(k) => format!("non-colorable:{k}"),
            WinPredicate::SpanningConnected => "spanning-connected".into(),
            WinPredicate::Connectivity(k) => format!("connectivity:{k}"),
            WinPredicate::AuxGhm(m) => {
                let list: Vec<String> = m.iter().map(|v| v.to_string()).collect();
                format!("aux-ghm:{}", list.join(","))
            }
        }
    }

    /// Parses [`label`](Self::label) output; `n` is the host vertex count.
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let int = |a: Option<&str>| -> Result<usize> {
            a.ok_or_else(|| Error::domain(format!("objective `{name}` needs an argument")))?
                .parse()
                .map_err(|_| Error::domain(format!("bad objective argument in `{s}`")))
        };
        match name {
            "odd-cycle" if arg.is_none() => Ok(WinPredicate::OddCycle),
            "non-colorable" => Ok(WinPredicate::NonKColorable(int(arg)?)),
            "spanning-connected" if arg.is_none() => Ok(WinPredicate::SpanningConnected),
            "connectivity" => Ok(WinPredicate::Connectivity(int(arg)?)),
            "aux-ghm" => {
                let arg = arg.unwrap_or("");
                let members = arg
                    .split(',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| Error::domain(format!("bad vertex `{t}` in `{s}`"))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(WinPredicate::AuxGhm(VertexSet::new(n, members)?))
            }
            _ => Err(Error::domain(format!("unknown objective `{s}`"))),
        }
    }
}

impl fmt::Display for WinPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    pub host: Arc<Graph>,
    pub board: BoardKind,
    pub maker_bias: usize,
    pub breaker_bias: usize,
    pub first_player: Player,
    pub objective: WinPredicate,
}

impl GameSpec {
    /// A game with Maker moving first.
    pub fn new(
        host: impl Into<Arc<Graph>>,
        board: BoardKind,
        maker_bias: usize,
        breaker_bias: usize,
        objective: WinPredicate,
    ) -> Result<Self> {
        let spec = GameSpec {
            host: host.into(),
            board,
            maker_bias,
            breaker_bias,
            first_player: Player::Maker,
            objective,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_first_player(mut self, first: Player) -> Self {
        self.first_player = first;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.maker_bias == 0 || self.breaker_bias == 0 {
            return Err(Error::domain("biases must be positive"));
        }
        match (&self.objective, self.board) {
            (WinPredicate::NonKColorable(0), _) | (WinPredicate::Connectivity(0), _) => {
                Err(Error::domain("objective parameter must be positive"))
            }
            (WinPredicate::SpanningConnected | WinPredicate::Connectivity(_), BoardKind::Vertex) => {
                Err(Error::domain("connectivity objectives need an edge board"))
            }
            (WinPredicate::AuxGhm(_), BoardKind::Edge) => Err(Error::domain("aux-ghm objective needs a vertex board")),
            (WinPredicate::AuxGhm(m), _) if m.universe() != self.host.n() => {
                Err(Error::domain("aux-ghm set does not match the host"))
            }
            _ => Ok(()),
        }
    }

    pub fn board_size(&self) -> usize {
        match self.board {
            BoardKind::Edge => self.host.m(),
            BoardKind::Vertex => self.host.n(),
        }
    }

    pub fn bias(&self, player: Player) -> usize {
        match player {
            Player::Maker => self.maker_bias,
            Player::Breaker => self.breaker_bias,
        }
    }
}

/// One recorded turn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Turn {
    pub player: Player,
    pub elements: Vec<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    owner: Vec<Option<Player>>,
    maker: Vec<usize>,
    breaker: Vec<usize>,
    to_move: Player,
    log: Vec<Turn>,
}

impl Position {
    pub fn new(spec: &GameSpec) -> Self {
        Position {
            owner: vec![None; spec.board_size()],
            maker: Vec::new(),
            breaker: Vec::new(),
            to_move: spec.first_player,
            log: Vec::new(),
        }
    }

    pub fn owner(&self, element: usize) -> Option<Player> {
        self.owner[element]
    }

    /// Maker's claims in claim order.
    pub fn maker_claims(&self) -> &[usize] {
        &self.maker
    }

    pub fn breaker_claims(&self) -> &[usize] {
        &self.breaker
    }

    pub fn claims(&self, player: Player) -> &[usize] {
        match player {
            Player::Maker => &self.maker,
            Player::Breaker => &self.breaker,
        }
    }

    pub fn board_size(&self) -> usize {
        self.owner.len()
    }

    pub fn unclaimed_count(&self) -> usize {
        self.owner.len() - self.maker.len() - self.breaker.len()
    }

    pub fn is_unclaimed(&self, element: usize) -> bool {
        self.owner.get(element).is_some_and(Option::is_none)
    }

    pub fn unclaimed(&self) -> impl Iterator<Item = usize> + '_ {
        self.owner.iter().enumerate().filter(|(_, o)| o.is_none()).map(|(i, _)| i)
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn log(&self) -> &[Turn] {
        &self.log
    }

    /// Number of elements `player` must claim on their next turn.
    pub fn turn_size(&self, spec: &GameSpec, player: Player) -> usize {
        spec.bias(player).min(self.unclaimed_count())
    }

    fn check(&self, spec: &GameSpec) -> Result<()> {
        if self.owner.len() != spec.board_size() {
            return Err(Error::domain(format!(
                "position has {} elements, board has {}",
                self.owner.len(),
                spec.board_size()
            )));
        }
        Ok(())
    }

    /// Records a turn in place; see [`apply_moves`].
    pub fn claim(&mut self, spec: &GameSpec, player: Player, elements: &[usize], note: Option<String>) -> Result<()> {
        self.check(spec)?;
        if player != self.to_move {
            return Err(Error::illegal(None, format!("it is {}'s turn, not {}'s", self.to_move.name(), player.name())));
        }
        let expected = self.turn_size(spec, player);
        for (i, &e) in elements.iter().enumerate() {
            if e >= self.owner.len() {
                return Err(Error::illegal(Some(e), "element is not on the board"));
            }
            if let Some(p) = self.owner[e] {
                return Err(Error::illegal(Some(e), format!("element already claimed by {}", p.name())));
            }
            if elements[..i].contains(&e) {
                return Err(Error::illegal(Some(e), "element listed twice"));
            }
        }
        if elements.len() != expected {
            return Err(Error::illegal(
                None,
                format!("{} must claim {expected} elements, got {}", player.name(), elements.len()),
            ));
        }
        for &e in elements {
            self.owner[e] = Some(player);
        }
        match player {
            Player::Maker => self.maker.extend_from_slice(elements),
            Player::Breaker => self.breaker.extend_from_slice(elements),
        }
        self.log.push(Turn { player, elements: elements.to_vec(), note });
        self.to_move = player.other();
        Ok(())
    }
}

/// Unclaimed board elements in ascending order.
pub fn legal_moves(spec: &GameSpec, pos: &Position) -> Result<Vec<usize>> {
    pos.check(spec)?;
    Ok(pos.unclaimed().collect())
}

/// Applies one turn. The mover must claim exactly their bias in unclaimed
/// elements, or every remaining element when fewer are left.
pub fn apply_moves(spec: &GameSpec, pos: &Position, player: Player, elements: &[usize]) -> Result<Position> {
    let mut next = pos.clone();
    next.claim(spec, player, elements, None)?;
    Ok(next)
}
