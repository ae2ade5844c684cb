use serde::{Deserialize, Serialize};

use super::evaluate::{evaluate_claims, Witness};
use super::transcript::Transcript;
use super::{GameSpec, Player, Position};

/// A strategy's admission that it cannot follow its plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forfeit {
    pub reason: String,
}

impl Forfeit {
    pub fn new(reason: impl Into<String>) -> Self {
        Forfeit { reason: reason.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForfeitRecord {
    pub player: Player,
    /// Breaker forfeits extend the convention, which is stated for Maker only.
    pub extended: bool,
    pub reason: String,
}

impl ForfeitRecord {
    pub fn new(player: Player, reason: &str) -> Self {
        ForfeitRecord { player, extended: player == Player::Breaker, reason: single_line(reason) }
    }
}

pub(crate) fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A decision procedure for one side of a game.
///
/// Strategies see the whole position and keep whatever private state they
/// need between turns. `begin` is called once before the first move.
pub trait Strategy: Send + Sync {
    /// Stable identifier with parameters, e.g. `random(seed=3)`.
    fn id(&self) -> String;

    fn begin(&mut self, _spec: &GameSpec, _seed: u64) {}

    /// Picks exactly `count` unclaimed elements.
    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit>;

    /// Annotation attached to the turn just chosen.
    fn note(&self) -> Option<String> {
        None
    }

    /// Index of the plan stage the strategy is in; never decreases.
    fn stage(&self) -> usize {
        0
    }

    /// A witness the strategy would rather report than the engine's default.
    fn preferred_witness(&self, _spec: &GameSpec, _pos: &Position) -> Option<Witness> {
        None
    }

    fn box_clone(&self) -> Box<dyn Strategy>;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.box_clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameResult {
    pub winner: Player,
    pub transcript: Transcript,
    pub witness: Option<Witness>,
    /// Number of Maker turns played.
    pub rounds: usize,
    pub forfeit: Option<ForfeitRecord>,
    /// Maker's stage index after each of its turns.
    pub maker_stages: Vec<usize>,
}

impl GameResult {
    pub fn maker_won(&self) -> bool {
        self.winner == Player::Maker
    }
}

/// SplitMix64 over `seed` and a stream index.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Plays one game to completion.
///
/// Maker's win is checked after each individual claim, so the witness
/// reflects the earliest winning prefix. A strategy that forfeits or
/// proposes an illegal move loses immediately.
pub fn play(spec: &GameSpec, maker: &mut dyn Strategy, breaker: &mut dyn Strategy, seed: u64) -> GameResult {
    maker.begin(spec, derive_seed(seed, 0));
    breaker.begin(spec, derive_seed(seed, 1));
    let mut pos = Position::new(spec);
    let mut witness = evaluate_claims(spec, &[]);
    let mut forfeit = None;
    let mut rounds = 0;
    let mut maker_stages = Vec::new();

    while witness.is_none() && pos.unclaimed_count() > 0 {
        let player = pos.to_move();
        let count = pos.turn_size(spec, player);
        let strategy: &mut dyn Strategy = match player {
            Player::Maker => &mut *maker,
            Player::Breaker => &mut *breaker,
        };
        let elements = match strategy.choose(spec, &pos, count) {
            Ok(e) => e,
            Err(f) => {
                forfeit = Some(ForfeitRecord::new(player, &f.reason));
                break;
            }
        };
        let note = strategy.note().map(|s| single_line(&s));
        let stage = strategy.stage();
        let before = pos.maker_claims().len();
        if let Err(e) = pos.claim(spec, player, &elements, note) {
            forfeit = Some(ForfeitRecord::new(player, &format!("illegal move: {e}")));
            break;
        }
        if player == Player::Maker {
            rounds += 1;
            maker_stages.push(stage);
            for j in before + 1..=pos.maker_claims().len() {
                let prefix = &pos.maker_claims()[..j];
                if let Some(w) = evaluate_claims(spec, prefix) {
                    let preferred = maker.preferred_witness(spec, &pos).filter(|p| p.validate(spec, prefix));
                    witness = Some(preferred.unwrap_or(w));
                    break;
                }
            }
        }
    }

    let winner = match (&witness, &forfeit) {
        (Some(_), _) => Player::Maker,
        (None, Some(f)) => f.player.other(),
        (None, None) => Player::Breaker,
    };
    let transcript = Transcript::record(spec, &*maker, &*breaker, seed, &pos, winner, rounds, &forfeit, &witness);
    GameResult { winner, transcript, witness, rounds, forfeit, maker_stages }
}
