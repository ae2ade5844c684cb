use std::fmt::Write as _;

use super::evaluate::{evaluate_claims, Witness};
use super::play::{ForfeitRecord, Strategy};
use super::{BoardKind, GameSpec, Player, Position, Turn};
use crate::graph::OddCycleWitness;
use crate::{Error, Result};

const MAGIC: &str = "game-v1";

/// A complete game record in the `game-v1` line format.
///
/// ```text
/// game-v1
/// board edge
/// bias 1 2
/// first maker
/// objective odd-cycle
/// host <sha256> <n> <m>
/// maker <strategy id>
/// breaker <strategy id>
/// seed 7
/// M e3 # stage=1
/// B e7 e9
/// result maker 4
/// forfeit breaker extended <reason>
/// witness odd-cycle 0 1 2
/// end
/// ```
///
/// `result` carries the winner and Maker's turn count; `forfeit` and
/// `witness` lines are present only when applicable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub board: BoardKind,
    pub maker_bias: usize,
    pub breaker_bias: usize,
    pub first_player: Player,
    pub objective: String,
    pub host_hash: String,
    pub n: usize,
    pub m: usize,
    pub maker_id: String,
    pub breaker_id: String,
    pub seed: u64,
    pub turns: Vec<Turn>,
    pub winner: Player,
    pub rounds: usize,
    pub forfeit: Option<ForfeitRecord>,
    pub witness: Option<Witness>,
}

impl Transcript {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn record(
        spec: &GameSpec,
        maker: &dyn Strategy,
        breaker: &dyn Strategy,
        seed: u64,
        pos: &Position,
        winner: Player,
        rounds: usize,
        forfeit: &Option<ForfeitRecord>,
        witness: &Option<Witness>,
    ) -> Self {
        Transcript {
            board: spec.board,
            maker_bias: spec.maker_bias,
            breaker_bias: spec.breaker_bias,
            first_player: spec.first_player,
            objective: spec.objective.label(),
            host_hash: spec.host.content_hash(),
            n: spec.host.n(),
            m: spec.host.m(),
            maker_id: super::play::single_line(&maker.id()),
            breaker_id: super::play::single_line(&breaker.id()),
            seed,
            turns: pos.log().to_vec(),
            winner,
            rounds,
            forfeit: forfeit.clone(),
            witness: witness.clone(),
        }
    }

    pub fn render(&self) -> String {
        let p = self.board.prefix();
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "board {}", self.board.name());
        let _ = writeln!(s, "bias {} {}", self.maker_bias, self.breaker_bias);
        let _ = writeln!(s, "first {}", self.first_player.name());
        let _ = writeln!(s, "objective {}", self.objective);
        let _ = writeln!(s, "host {} {} {}", self.host_hash, self.n, self.m);
        let _ = writeln!(s, "maker {}", self.maker_id);
        let _ = writeln!(s, "breaker {}", self.breaker_id);
        let _ = writeln!(s, "seed {}", self.seed);
        for t in &self.turns {
            s.push(if t.player == Player::Maker { 'M' } else { 'B' });
            for e in &t.elements {
                let _ = write!(s, " {p}{e}");
            }
            if let Some(note) = &t.note {
                let _ = write!(s, " # {note}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "result {} {}", self.winner.name(), self.rounds);
        if let Some(f) = &self.forfeit {
            let kind = if f.extended { "extended" } else { "standard" };
            let _ = writeln!(s, "forfeit {} {kind} {}", f.player.name(), f.reason);
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(s, "witness {}", render_witness(w, p));
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
        let mut next = |key: &str| -> Result<(usize, String)> {
            let (no, line) = lines.next().ok_or_else(|| Error::parse(0, format!("missing `{key}` line")))?;
            let rest = if key == MAGIC {
                (line == MAGIC).then_some("")
            } else {
                line.strip_prefix(key).and_then(|r| r.strip_prefix(' '))
            };
            rest.map(|r| (no, r.to_string())).ok_or_else(|| Error::parse(no, format!("expected `{key}` line")))
        };
        next(MAGIC)?;
        let (no, board) = next("board")?;
        let board: BoardKind = board.parse().map_err(|_| Error::parse(no, "bad board kind"))?;
        let (no, bias) = next("bias")?;
        let bias = ints(&bias, no)?;
        let [maker_bias, breaker_bias] = bias[..] else { return Err(Error::parse(no, "bias needs two values")) };
        let (no, first) = next("first")?;
        let first_player: Player = first.parse().map_err(|_| Error::parse(no, "bad player"))?;
        let (_, objective) = next("objective")?;
        let (no, host) = next("host")?;
        let parts: Vec<&str> = host.split(' ').collect();
        let [hash, n, m] = parts[..] else { return Err(Error::parse(no, "host needs hash, n and m")) };
        let n = int(n, no)?;
        let m = int(m, no)?;
        let (_, maker_id) = next("maker")?;
        let (_, breaker_id) = next("breaker")?;
        let (no, seed) = next("seed")?;
        let seed: u64 = seed.parse().map_err(|_| Error::parse(no, "bad seed"))?;
        let prefix = board.prefix();

        let mut turns = Vec::new();
        let mut result = None;
        let mut forfeit = None;
        let mut witness = None;
        let mut ended = false;
        for (no, line) in lines.by_ref() {
            if ended {
                return Err(Error::parse(no, "content after `end`"));
            }
            if line == "end" {
                ended = true;
                continue;
            }
            if let Some(rest) = line.strip_prefix("M ").or_else(|| line.strip_prefix("B ")) {
                if result.is_some() {
                    return Err(Error::parse(no, "turn after result"));
                }
                let player = if line.starts_with('M') { Player::Maker } else { Player::Breaker };
                let (elems, note) = match rest.split_once(" # ") {
                    Some((e, n)) => (e, Some(n.to_string())),
                    None => (rest, None),
                };
                let elements = elems.split(' ').map(|t| element(t, prefix, no)).collect::<Result<Vec<_>>>()?;
                turns.push(Turn { player, elements, note });
            } else if let Some(rest) = line.strip_prefix("result ") {
                let (w, r) = rest.split_once(' ').ok_or_else(|| Error::parse(no, "result needs winner and rounds"))?;
                let winner: Player = w.parse().map_err(|_| Error::parse(no, "bad winner"))?;
                result = Some((winner, int(r, no)?));
            } else if let Some(rest) = line.strip_prefix("forfeit ") {
                let mut it = rest.splitn(3, ' ');
                let player: Player =
                    it.next().unwrap_or("").parse().map_err(|_| Error::parse(no, "bad forfeiting player"))?;
                let extended = match it.next() {
                    Some("extended") => true,
                    Some("standard") => false,
                    _ => return Err(Error::parse(no, "forfeit kind must be standard or extended")),
                };
                let reason = it.next().unwrap_or("").to_string();
                forfeit = Some(ForfeitRecord { player, extended, reason });
            } else if let Some(rest) = line.strip_prefix("witness ") {
                witness = Some(parse_witness(rest, prefix, no)?);
            } else {
                return Err(Error::parse(no, format!("unrecognized line `{line}`")));
            }
        }
        if !ended {
            return Err(Error::parse(0, "missing `end`"));
        }
        let (winner, rounds) = result.ok_or_else(|| Error::parse(0, "missing `result` line"))?;
        Ok(Transcript {
            board,
            maker_bias,
            breaker_bias,
            first_player,
            objective,
            host_hash: hash.to_string(),
            n,
            m,
            maker_id,
            breaker_id,
            seed,
            turns,
            winner,
            rounds,
            forfeit,
            witness,
        })
    }

    /// Replays the turns under `spec` and checks the recorded outcome.
    pub fn verify(&self, spec: &GameSpec) -> Result<Position> {
        let bad = |msg: &str| Err(Error::Domain(format!("transcript does not match: {msg}")));
        if self.board != spec.board
            || self.maker_bias != spec.maker_bias
            || self.breaker_bias != spec.breaker_bias
            || self.first_player != spec.first_player
            || self.objective != spec.objective.label()
            || self.n != spec.host.n()
            || self.m != spec.host.m()
            || self.host_hash != spec.host.content_hash()
        {
            return bad("header differs from the game spec");
        }
        let mut pos = Position::new(spec);
        let mut won_at = evaluate_claims(spec, &[]).map(|_| 0);
        let mut rounds = 0;
        for (i, t) in self.turns.iter().enumerate() {
            if won_at.is_some() {
                return bad("turns continue after Maker won");
            }
            let before = pos.maker_claims().len();
            pos.claim(spec, t.player, &t.elements, t.note.clone())?;
            if t.player == Player::Maker {
                rounds += 1;
                if (before + 1..=pos.maker_claims().len())
                    .any(|j| evaluate_claims(spec, &pos.maker_claims()[..j]).is_some())
                {
                    won_at = Some(i);
                }
            }
        }
        if rounds != self.rounds {
            return bad("round count");
        }
        match (won_at, &self.forfeit) {
            (Some(_), _) => {
                let valid = self.witness.as_ref().is_some_and(|w| w.validate(spec, pos.maker_claims()));
                if self.winner != Player::Maker || !valid {
                    return bad("Maker won but the result or witness disagrees");
                }
            }
            (None, Some(f)) => {
                if self.winner != f.player.other() || self.witness.is_some() {
                    return bad("forfeit result");
                }
            }
            (None, None) => {
                if pos.unclaimed_count() != 0 || self.winner != Player::Breaker || self.witness.is_some() {
                    return bad("game did not end with an exhausted board");
                }
            }
        }
        Ok(pos)
    }
}

fn render_witness(w: &Witness, p: char) -> String {
    let plain = |vs: &[usize]| vs.iter().map(|v| format!(" {v}")).collect::<String>();
    let elems = |vs: &[usize]| vs.iter().map(|v| format!(" {p}{v}")).collect::<String>();
    match w {
        Witness::OddCycle(c) => format!("odd-cycle{}", plain(&c.vertices)),
        Witness::NotColorable { k, elements } => format!("not-colorable {k}{}", elems(elements)),
        Witness::SpanningTree { edges } => format!("spanning-tree{}", elems(edges)),
        Witness::EdgeConnected { k, elements } => format!("edge-connected {k}{}", elems(elements)),
        Witness::Triangle { vertices } => format!("triangle{}", plain(vertices)),
        Witness::ConnectedSet { vertices } => format!("connected-set{}", plain(vertices)),
    }
}

fn parse_witness(s: &str, p: char, no: usize) -> Result<Witness> {
    let mut toks = s.split(' ');
    let kind = toks.next().unwrap_or("");
    let rest: Vec<&str> = toks.collect();
    let plain = |ts: &[&str]| ts.iter().map(|t| int(t, no)).collect::<Result<Vec<_>>>();
    let elems = |ts: &[&str]| ts.iter().map(|t| element(t, p, no)).collect::<Result<Vec<_>>>();
    let head = |ts: &[&str]| -> Result<usize> {
        int(ts.first().ok_or_else(|| Error::parse(no, "witness parameter missing"))?, no)
    };
    Ok(match kind {
        "odd-cycle" => Witness::OddCycle(OddCycleWitness { vertices: plain(&rest)? }),
        "not-colorable" => Witness::NotColorable { k: head(&rest)?, elements: elems(&rest[1..])? },
        "spanning-tree" => Witness::SpanningTree { edges: elems(&rest)? },
        "edge-connected" => Witness::EdgeConnected { k: head(&rest)?, elements: elems(&rest[1..])? },
        "triangle" => {
            let v = plain(&rest)?;
            let [a, b, c] = v[..] else { return Err(Error::parse(no, "triangle needs three vertices")) };
            Witness::Triangle { vertices: [a, b, c] }
        }
        "connected-set" => Witness::ConnectedSet { vertices: plain(&rest)? },
        _ => return Err(Error::parse(no, format!("unknown witness kind `{kind}`"))),
    })
}

fn int(s: &str, no: usize) -> Result<usize> {
    if s.is_empty() || (s.len() > 1 && s.starts_with('0')) || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(no, format!("bad integer `{s}`")));
    }
    s.parse().map_err(|_| Error::parse(no, format!("bad integer `{s}`")))
}

fn ints(s: &str, no: usize) -> Result<Vec<usize>> {
    s.split(' ').map(|t| int(t, no)).collect()
}

fn element(t: &str, p: char, no: usize) -> Result<usize> {
    let digits = t.strip_prefix(p).ok_or_else(|| Error::parse(no, format!("element `{t}` lacks prefix `{p}`")))?;
    int(digits, no)
}
