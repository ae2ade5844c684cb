//! Exhaustive game solving on small boards.
//!
//! [`solve`] computes the winner under optimal play by memoized minimax
//! over bitmask positions. [`solve_unmemoized`] is an independent
//! recursion over engine [`Position`]s used to cross-check it.
//! [`verify_maker_strategy`] plays a deterministic Maker strategy against
//! every Breaker reply sequence.

use std::sync::{Arc, Mutex};

use rustc_hash::FxHashMap;

use crate::engine::{
    derive_seed, evaluate, evaluate_claims, ForfeitRecord, GameSpec, Outcome, Player, Position, Strategy, Transcript,
    Turn,
};
use crate::{Error, Result};

pub const DEFAULT_BOARD_CAP: usize = 18;
const MAX_BOARD: usize = 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest board accepted.
    pub cap: usize,
    pub memoize: bool,
    /// Stop as soon as Maker's claims already win.
    pub maker_cutoff: bool,
    /// Stop as soon as Maker cannot win even with every unclaimed element.
    pub breaker_cutoff: bool,
    /// Explore each turn as a set of elements rather than every ordering.
    pub set_batches: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { cap: DEFAULT_BOARD_CAP, memoize: true, maker_cutoff: true, breaker_cutoff: true, set_batches: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveVerdict {
    pub winner: Player,
    /// One game in which both sides play optimally.
    pub principal_line: Vec<Turn>,
    pub nodes_expanded: u64,
}

pub fn solve(spec: &GameSpec) -> Result<SolveVerdict> {
    solve_with(spec, &SolveOptions::default())
}

pub fn solve_with(spec: &GameSpec, opts: &SolveOptions) -> Result<SolveVerdict> {
    let mut solver = Solver::new(spec.clone(), *opts)?;
    let winner = solver.winner(0, 0, spec.first_player);
    let nodes = solver.nodes;
    let principal_line = solver.principal_line();
    Ok(SolveVerdict { winner, principal_line, nodes_expanded: nodes })
}

#[derive(Clone, Debug)]
struct Solver {
    spec: GameSpec,
    opts: SolveOptions,
    full: u64,
    memo: FxHashMap<(u64, u64), bool>,
    wins: FxHashMap<u64, bool>,
    nodes: u64,
}

impl Solver {
    fn new(spec: GameSpec, opts: SolveOptions) -> Result<Self> {
        let size = spec.board_size();
        if size > opts.cap.min(MAX_BOARD) {
            return Err(Error::Resource(format!("board has {size} elements, cap is {}", opts.cap.min(MAX_BOARD))));
        }
        let full = if size == 0 { 0 } else { u64::MAX >> (64 - size) };
        Ok(Solver { spec, opts, full, memo: FxHashMap::default(), wins: FxHashMap::default(), nodes: 0 })
    }

    fn maker_wins(&mut self, mask: u64) -> bool {
        if let Some(&w) = self.wins.get(&mask) {
            return w;
        }
        let claims = bits(mask);
        let w = evaluate_claims(&self.spec, &claims).is_some();
        self.wins.insert(mask, w);
        w
    }

    fn winner(&mut self, maker: u64, breaker: u64, to_move: Player) -> Player {
        if self.value(maker, breaker, to_move) {
            Player::Maker
        } else {
            Player::Breaker
        }
    }

    /// Whether Maker wins from this position under optimal play.
    fn value(&mut self, maker: u64, breaker: u64, to_move: Player) -> bool {
        if self.opts.maker_cutoff && self.maker_wins(maker) {
            return true;
        }
        let remaining = self.full & !maker & !breaker;
        if remaining == 0 {
            return self.maker_wins(maker);
        }
        if self.opts.breaker_cutoff && !self.maker_wins(maker | remaining) {
            return false;
        }
        let key = (maker, breaker | u64::from(to_move == Player::Breaker) << 63);
        if self.opts.memoize {
            if let Some(&v) = self.memo.get(&key) {
                return v;
            }
        }
        self.nodes += 1;
        let count = self.spec.bias(to_move).min(remaining.count_ones() as usize);
        let want = to_move == Player::Maker;
        let mut result = !want;
        for batch in self.batches(remaining, count) {
            let v = match to_move {
                Player::Maker => self.value(maker | batch, breaker, Player::Breaker),
                Player::Breaker => self.value(maker, breaker | batch, Player::Maker),
            };
            if v == want {
                result = want;
                break;
            }
        }
        if self.opts.memoize {
            self.memo.insert(key, result);
        }
        result
    }

    fn batches(&self, remaining: u64, count: usize) -> Vec<u64> {
        let elems = bits(remaining);
        let mut out = Vec::new();
        if self.opts.set_batches {
            combinations(&elems, count, &mut |c| out.push(c.iter().fold(0u64, |m, &e| m | 1 << e)));
        } else {
            sequences(&elems, count, 0, &mut Vec::new(), &mut out);
        }
        out
    }

    /// A batch achieving the optimal value for the mover.
    fn best_move(&mut self, maker: u64, breaker: u64, to_move: Player) -> Vec<usize> {
        let remaining = self.full & !maker & !breaker;
        let count = self.spec.bias(to_move).min(remaining.count_ones() as usize);
        let want = to_move == Player::Maker;
        let batches = self.batches(remaining, count);
        let chosen = batches
            .iter()
            .copied()
            .find(|&batch| {
                let v = match to_move {
                    Player::Maker => self.value(maker | batch, breaker, Player::Breaker),
                    Player::Breaker => self.value(maker, breaker | batch, Player::Maker),
                };
                v == want
            })
            .unwrap_or(batches[0]);
        bits(chosen)
    }

    fn principal_line(&mut self) -> Vec<Turn> {
        let (mut maker, mut breaker, mut to_move) = (0u64, 0u64, self.spec.first_player);
        let mut line = Vec::new();
        while !self.maker_wins(maker) && self.full & !maker & !breaker != 0 {
            let elements = self.best_move(maker, breaker, to_move);
            let mask = elements.iter().fold(0u64, |m, &e| m | 1 << e);
            match to_move {
                Player::Maker => maker |= mask,
                Player::Breaker => breaker |= mask,
            }
            line.push(Turn { player: to_move, elements, note: None });
            to_move = to_move.other();
        }
        line
    }
}

fn bits(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Calls `f` with every `k`-subset of `items` in lexicographic order.
fn combinations<T: Copy>(items: &[T], k: usize, f: &mut impl FnMut(&[T])) {
    fn rec<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=items.len() - (k - cur.len()) {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), f);
    }
}

fn sequences(elems: &[usize], k: usize, used: u64, cur: &mut Vec<usize>, out: &mut Vec<u64>) {
    if cur.len() == k {
        out.push(used);
        return;
    }
    for &e in elems {
        if used >> e & 1 == 0 {
            cur.push(e);
            sequences(elems, k, used | 1 << e, cur, out);
            cur.pop();
        }
    }
}

/// Plain minimax over engine positions, without memoization or bitmasks.
pub fn solve_unmemoized(spec: &GameSpec) -> Result<Player> {
    let size = spec.board_size();
    if size > DEFAULT_BOARD_CAP {
        return Err(Error::Resource(format!("board has {size} elements, cap is {DEFAULT_BOARD_CAP}")));
    }
    fn rec(spec: &GameSpec, pos: &Position) -> bool {
        match evaluate(spec, pos) {
            Outcome::MakerWon(_) => return true,
            Outcome::BoardExhausted => return false,
            Outcome::Undecided => {}
        }
        let player = pos.to_move();
        let free: Vec<usize> = pos.unclaimed().collect();
        let count = pos.turn_size(spec, player);
        let want = player == Player::Maker;
        let mut found = false;
        combinations(&free, count, &mut |batch| {
            if found {
                return;
            }
            let mut next = pos.clone();
            next.claim(spec, player, batch, None).expect("enumerated move is legal");
            if rec(spec, &next) == want {
                found = true;
            }
        });
        if found {
            want
        } else {
            !want
        }
    }
    Ok(if rec(spec, &Position::new(spec)) { Player::Maker } else { Player::Breaker })
}

/// Outcome of checking a Maker strategy against every Breaker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyCheck {
    AlwaysWins { nodes: u64, lines: u64 },
    /// A game in which the strategy does not win.
    CounterTranscript(Box<Transcript>),
}

/// Plays `maker` against every possible Breaker and reports the first
/// losing line, if any. `budget` bounds the number of positions visited.
pub fn verify_maker_strategy(
    spec: &GameSpec,
    maker: &dyn Strategy,
    seed: u64,
    budget: u64,
) -> Result<StrategyCheck> {
    let mut m = maker.box_clone();
    m.begin(spec, derive_seed(seed, 0));
    let mut search = Verify { spec, seed, budget, nodes: 0, lines: 0 };
    match search.run(m, Position::new(spec))? {
        None => Ok(StrategyCheck::AlwaysWins { nodes: search.nodes, lines: search.lines }),
        Some(t) => Ok(StrategyCheck::CounterTranscript(Box::new(t))),
    }
}

struct Verify<'a> {
    spec: &'a GameSpec,
    seed: u64,
    budget: u64,
    nodes: u64,
    lines: u64,
}

impl Verify<'_> {
    fn run(&mut self, mut maker: Box<dyn Strategy>, pos: Position) -> Result<Option<Transcript>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Resource(format!(
                "node budget {} exhausted after {} complete lines",
                self.budget, self.lines
            )));
        }
        if evaluate_claims(self.spec, pos.maker_claims()).is_some() {
            self.lines += 1;
            return Ok(None);
        }
        if pos.unclaimed_count() == 0 {
            return Ok(Some(self.counter(&*maker, &pos, None)));
        }
        let player = pos.to_move();
        let count = pos.turn_size(self.spec, player);
        match player {
            Player::Maker => {
                let choice = maker.choose(self.spec, &pos, count);
                let note = maker.note();
                let mut next = pos.clone();
                let err = match choice {
                    Ok(elements) => match next.claim(self.spec, player, &elements, note) {
                        Ok(()) => return self.run(maker, next),
                        Err(e) => format!("illegal move: {e}"),
                    },
                    Err(f) => f.reason,
                };
                let f = ForfeitRecord::new(Player::Maker, &err);
                Ok(Some(self.counter(&*maker, &pos, Some(f))))
            }
            Player::Breaker => {
                let free: Vec<usize> = pos.unclaimed().collect();
                let mut replies = Vec::new();
                combinations(&free, count, &mut |c| replies.push(c.to_vec()));
                for reply in replies {
                    let mut next = pos.clone();
                    next.claim(self.spec, player, &reply, None)?;
                    if let Some(t) = self.run(maker.box_clone(), next)? {
                        return Ok(Some(t));
                    }
                }
                Ok(None)
            }
        }
    }

    fn counter(&self, maker: &dyn Strategy, pos: &Position, forfeit: Option<ForfeitRecord>) -> Transcript {
        let rounds = pos.log().iter().filter(|t| t.player == Player::Maker).count();
        Transcript::record(self.spec, maker, &Exhaustive, self.seed, pos, Player::Breaker, rounds, &forfeit, &None)
    }
}

/// Stands in for the enumerated Breaker in counter transcripts.
#[derive(Clone)]
struct Exhaustive;

impl Strategy for Exhaustive {
    fn id(&self) -> String {
        "exhaustive".into()
    }

    fn choose(&mut self, _: &GameSpec, _: &Position, _: usize) -> std::result::Result<Vec<usize>, crate::engine::Forfeit> {
        Err(crate::engine::Forfeit::new("placeholder strategy"))
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Plays optimally for one side using the memoized solver.
///
/// Clones share one memo table, so verifying this strategy over every
/// Breaker line does not copy the table per branch.
#[derive(Clone, Debug)]
pub struct OptimalStrategy {
    side: Player,
    opts: SolveOptions,
    solver: Option<Arc<Mutex<Solver>>>,
}

impl OptimalStrategy {
    pub fn new(side: Player) -> Self {
        OptimalStrategy { side, opts: SolveOptions::default(), solver: None }
    }
}

impl Strategy for OptimalStrategy {
    fn id(&self) -> String {
        format!("optimal({})", self.side.name())
    }

    fn begin(&mut self, spec: &GameSpec, _seed: u64) {
        self.solver = Solver::new(spec.clone(), self.opts).ok().map(|s| Arc::new(Mutex::new(s)));
    }

    fn choose(
        &mut self,
        spec: &GameSpec,
        pos: &Position,
        count: usize,
    ) -> std::result::Result<Vec<usize>, crate::engine::Forfeit> {
        let solver =
            self.solver.as_ref().ok_or_else(|| crate::engine::Forfeit::new("board too large for exhaustive play"))?;
        let mut solver = solver.lock().unwrap_or_else(|e| e.into_inner());
        let mask = |p: Player| pos.claims(p).iter().fold(0u64, |m, &e| m | 1 << e);
        let mv = solver.best_move(mask(Player::Maker), mask(Player::Breaker), self.side);
        debug_assert_eq!(mv.len(), count);
        let _ = spec;
        Ok(mv)
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, BoardKind, WinPredicate};
    use crate::graph::Graph;

    fn odd(g: Graph, a: usize, b: usize) -> GameSpec {
        GameSpec::new(g, BoardKind::Edge, a, b, WinPredicate::OddCycle).unwrap()
    }

    #[test]
    fn counting_fixtures() {
        assert_eq!(solve(&odd(Graph::complete(3), 1, 1)).unwrap().winner, Player::Breaker);
        assert_eq!(solve(&odd(Graph::cycle(5), 1, 1)).unwrap().winner, Player::Breaker);
        assert_eq!(solve(&odd(Graph::complete(3), 2, 1)).unwrap().winner, Player::Breaker);
        assert_eq!(solve(&odd(Graph::complete(3), 3, 1)).unwrap().winner, Player::Maker);
    }

    #[test]
    fn k5_agrees_with_unmemoized() {
        let spec = odd(Graph::complete(5), 1, 1);
        let v = solve(&spec).unwrap();
        assert_eq!(solve_unmemoized(&spec).unwrap(), v.winner);
        let mut pos = Position::new(&spec);
        for t in &v.principal_line {
            pos.claim(&spec, t.player, &t.elements, None).unwrap();
        }
        let won = matches!(evaluate(&spec, &pos), Outcome::MakerWon(_));
        assert_eq!(won, v.winner == Player::Maker);
    }

    #[test]
    fn option_variants_agree() {
        let spec = odd(Graph::complete(4), 1, 1);
        let base = solve(&spec).unwrap().winner;
        for (memoize, maker_cutoff, breaker_cutoff, set_batches) in
            [(false, true, true, true), (true, false, true, true), (true, true, false, false), (false, false, false, false)]
        {
            let opts = SolveOptions { memoize, maker_cutoff, breaker_cutoff, set_batches, ..SolveOptions::default() };
            assert_eq!(solve_with(&spec, &opts).unwrap().winner, base);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let spec = odd(Graph::complete(7), 1, 1);
        assert!(matches!(solve(&spec), Err(Error::Resource(_))));
    }

    #[test]
    fn optimal_players_match_verdict() {
        for b in [1, 2] {
            let spec = odd(Graph::complete(5), 1, b);
            let verdict = solve(&spec).unwrap().winner;
            let r = play(&spec, &mut OptimalStrategy::new(Player::Maker), &mut OptimalStrategy::new(Player::Breaker), 0);
            assert_eq!(r.winner, verdict);
            let check = verify_maker_strategy(&spec, &OptimalStrategy::new(Player::Maker), 0, 10_000_000).unwrap();
            assert_eq!(matches!(check, StrategyCheck::AlwaysWins { .. }), verdict == Player::Maker);
        }
    }

    #[test]
    fn combinations_enumerate_subsets() {
        let mut seen = Vec::new();
        combinations(&[1, 2, 3, 4], 2, &mut |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        let mut count = 0;
        combinations(&[1, 2], 0, &mut |_| count += 1);
        assert_eq!(count, 1);
    }
}
