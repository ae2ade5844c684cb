use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{induced_on, Graph};

/// Parts up to this size are searched exhaustively.
pub const EXACT_CUT_LIMIT: usize = 20;
pub const DEFAULT_RESTARTS: usize = 500;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutSearchConfig {
    pub exact_limit: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for CutSearchConfig {
    fn default() -> Self {
        Self { exact_limit: EXACT_CUT_LIMIT, restarts: DEFAULT_RESTARTS, seed: 0 }
    }
}

/// Outcome of a balanced sparse cut search inside one part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutSearch {
    /// The sparsest balanced cut seen: crossing edge count and one side
    /// (labels of the parent graph, ascending).
    pub best: Option<(usize, Vec<usize>)>,
    /// Whether `best` met the acceptance predicate.
    pub accepted: bool,
    /// Whether every balanced bipartition was examined.
    pub exhaustive: bool,
}

/// Looks for a bipartition of `part` with both sides of at least `min_side`
/// vertices whose crossing edge count satisfies `accept`.
///
/// Parts of at most `exact_limit` vertices are enumerated in Gray-code order
/// and the sparsest balanced cut is reported. Larger parts run
/// Fiduccia–Mattheyses passes from `restarts` random balanced starts,
/// stopping at the first accepted cut.
pub fn find_sparse_balanced_cut(
    g: &Graph,
    part: &[usize],
    min_side: usize,
    accept: impl Fn(usize) -> bool,
    cfg: &CutSearchConfig,
) -> CutSearch {
    let s = part.len();
    if min_side == 0 || s < 2 * min_side {
        return CutSearch { best: None, accepted: false, exhaustive: true };
    }
    let (sub, map) = induced_on(g, part);
    let (best, exhaustive) = if s <= cfg.exact_limit {
        (exact_min_cut(&sub, min_side), true)
    } else {
        (fm_search(&sub, min_side, &accept, cfg), false)
    };
    let best = best.map(|(cut, side)| {
        let mut side: Vec<usize> = side.into_iter().map(|i| map[i]).collect();
        side.sort_unstable();
        (cut, side)
    });
    let accepted = best.as_ref().is_some_and(|(c, _)| accept(*c));
    CutSearch { best, accepted, exhaustive }
}

fn exact_min_cut(sub: &Graph, min_side: usize) -> Option<(usize, Vec<usize>)> {
    let s = sub.n();
    let adj: Vec<u32> = (0..s).map(|v| sub.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    // Vertex 0 stays on side 0; Gray code walks the other s-1 bits.
    let mut side = 0u32;
    let mut size1 = 0usize;
    let mut cut = 0usize;
    let mut best: Option<(usize, u32)> = None;
    for step in 1u64..(1u64 << (s - 1)) {
        let i = step.trailing_zeros() as usize + 1;
        let bit = 1u32 << i;
        let deg = adj[i].count_ones() as usize;
        let same = if side & bit != 0 { (adj[i] & side).count_ones() } else { (adj[i] & !side).count_ones() } as usize;
        cut = cut + same - (deg - same);
        side ^= bit;
        if side & bit != 0 {
            size1 += 1;
        } else {
            size1 -= 1;
        }
        if size1 >= min_side && s - size1 >= min_side && best.is_none_or(|(c, _)| cut < c) {
            best = Some((cut, side));
        }
    }
    best.map(|(c, mask)| (c, (0..s).filter(|&v| mask >> v & 1 != 0).collect()))
}

fn fm_search(
    sub: &Graph,
    min_side: usize,
    accept: &impl Fn(usize) -> bool,
    cfg: &CutSearchConfig,
) -> Option<(usize, Vec<usize>)> {
    let s = sub.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..s).collect();
    let mut best: Option<(usize, Vec<bool>)> = None;
    for _ in 0..cfg.restarts {
        order.shuffle(&mut rng);
        let mut side = vec![false; s];
        for &v in &order[..s / 2] {
            side[v] = true;
        }
        let cut = fm_refine(sub, &mut side, min_side);
        if best.as_ref().is_none_or(|(c, _)| cut < *c) {
            best = Some((cut, side));
        }
        if best.as_ref().is_some_and(|(c, _)| accept(*c)) {
            break;
        }
    }
    best.map(|(c, side)| (c, (0..s).filter(|&v| side[v]).collect()))
}

/// Repeated FM passes with best-prefix rollback; returns the final cut.
fn fm_refine(sub: &Graph, side: &mut [bool], min_side: usize) -> usize {
    let s = sub.n();
    let mut cut = sub.edges().iter().filter(|&&(u, v)| side[u] != side[v]).count();
    loop {
        let mut gain: Vec<i64> = (0..s)
            .map(|v| sub.neighbors(v).iter().map(|&w| if side[w] != side[v] { 1 } else { -1 }).sum())
            .collect();
        let mut size1 = side.iter().filter(|&&b| b).count();
        let mut locked = vec![false; s];
        let mut moves = Vec::with_capacity(s);
        let start = cut;
        let mut cur = cut as i64;
        let mut best = (cut as i64, 0usize);
        for _ in 0..s {
            let mut pick: Option<usize> = None;
            for v in 0..s {
                if locked[v] {
                    continue;
                }
                let from = if side[v] { size1 } else { s - size1 };
                if from <= min_side {
                    continue;
                }
                if pick.is_none_or(|p| gain[v] > gain[p]) {
                    pick = Some(v);
                }
            }
            let Some(v) = pick else { break };
            cur -= gain[v];
            side[v] = !side[v];
            if side[v] {
                size1 += 1;
            } else {
                size1 -= 1;
            }
            locked[v] = true;
            gain[v] = -gain[v];
            for &w in sub.neighbors(v) {
                gain[w] += if side[w] == side[v] { -2 } else { 2 };
            }
            moves.push(v);
            if cur < best.0 {
                best = (cur, moves.len());
            }
        }
        for &v in &moves[best.1..] {
            side[v] = !side[v];
        }
        cut = best.0 as usize;
        if cut >= start {
            return cut;
        }
    }
}
