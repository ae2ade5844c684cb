use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::connectivity::ConnectivityMaker;
use super::View;
use crate::engine::{BoardKind, Forfeit, GameSpec, Player, Position, Strategy};
use crate::graph::{edge_connectivity, find_odd_cycle, Graph, VertexSet};
use crate::{Error, Result};

/// Hosts up to this size get an exhaustive bipartition search.
pub const EXACT_BIPARTITION_LIMIT: usize = 20;
/// Maximum number of edge-connectivity evaluations in the exact search.
const EXACT_FLOW_CAP: usize = 20_000;
const ANNEAL_RESTARTS: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Main3Options {
    /// Required connectivity of the spanning bipartite subgraph; when
    /// `None`, the best connectivity the search finds is used.
    pub k_prime: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Main3Case {
    /// A spanning bipartite subgraph `G'` with sides `side`/complement is
    /// `connectivity`-edge-connected.
    Bipartite { side: VertexSet, connectivity: usize },
    /// No suitable bipartite subgraph: play for `k`-edge-connectivity on
    /// all of `G`.
    Whole { k: usize },
}

/// Maker for the edge odd-cycle game on highly edge-connected graphs.
///
/// In the bipartite case Maker first claims an edge of `G` inside one side
/// of `G'`, then builds a connected spanning subgraph of `G'`. Otherwise
/// Maker plays the connectivity game on `G` directly.
#[derive(Clone, Debug)]
pub struct Main3Maker {
    b: usize,
    case: Main3Case,
    intra: Vec<usize>,
    connect: ConnectivityMaker,
    /// `100 log₂ n · b log₂ b`, recorded for reference.
    pub connectivity_threshold: f64,
    stage: usize,
    turn_stage: usize,
}

impl Main3Maker {
    pub fn new(g: &Graph, b: usize, opts: Main3Options) -> Result<Self> {
        if find_odd_cycle(g).is_bipartite() {
            return Err(Error::precondition("χ(G) < 3: the host is bipartite"));
        }
        let n = g.n();
        let found = best_bipartition(g, opts.k_prime, opts.seed);
        let threshold = 100.0 * (n as f64).log2() * b as f64 * (b.max(1) as f64).log2();
        let wanted = opts.k_prime.unwrap_or(1).max(1);
        match found {
            Some((side, lambda)) if lambda >= wanted => {
                let cross: Vec<usize> =
                    g.edges().iter().enumerate().filter(|(_, &(u, v))| side[u] != side[v]).map(|(i, _)| i).collect();
                let intra: Vec<usize> =
                    g.edges().iter().enumerate().filter(|(_, &(u, v))| side[u] == side[v]).map(|(i, _)| i).collect();
                let connect = ConnectivityMaker::new(g, Some(&cross), None, 1);
                let side = VertexSet::new(n, (0..n).filter(|&v| side[v]))?;
                Ok(Main3Maker {
                    b,
                    case: Main3Case::Bipartite { side, connectivity: lambda },
                    intra,
                    connect,
                    connectivity_threshold: threshold,
                    stage: 0,
                    turn_stage: 0,
                })
            }
            _ => {
                let k = match opts.k_prime {
                    Some(k) => k,
                    None => edge_connectivity(g)?.max(1),
                };
                Ok(Main3Maker {
                    b,
                    case: Main3Case::Whole { k },
                    intra: Vec::new(),
                    connect: ConnectivityMaker::new(g, None, None, k),
                    connectivity_threshold: threshold,
                    stage: 1,
                    turn_stage: 1,
                })
            }
        }
    }

    pub fn case(&self) -> &Main3Case {
        &self.case
    }
}

impl Strategy for Main3Maker {
    fn id(&self) -> String {
        match &self.case {
            Main3Case::Bipartite { connectivity, .. } => format!("main3(b={},case=1,k'={connectivity})", self.b),
            Main3Case::Whole { k } => format!("main3(b={},case=2,k'={k})", self.b),
        }
    }

    fn begin(&mut self, _spec: &GameSpec, _seed: u64) {
        self.stage = match self.case {
            Main3Case::Bipartite { .. } => 0,
            Main3Case::Whole { .. } => 1,
        };
    }

    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        if spec.board != BoardKind::Edge {
            return Err(Forfeit::new("main3 needs an edge board"));
        }
        self.turn_stage = self.stage;
        let mut view = View::new(pos);
        let mut picks = Vec::with_capacity(count);
        for _ in 0..count {
            if self.stage == 0 {
                self.stage = 1;
                if !self.intra.iter().any(|&e| view.is_maker(e)) {
                    let e = self
                        .intra
                        .iter()
                        .copied()
                        .find(|&e| view.is_free(e))
                        .ok_or_else(|| Forfeit::new("every edge inside a side is Breaker's"))?;
                    view.take(e, Player::Maker);
                    picks.push(e);
                    continue;
                }
            }
            let e = self
                .connect
                .next_claim(&spec.host, &view)
                .or_else(|| view.first_free())
                .ok_or_else(|| Forfeit::new("no unclaimed edge"))?;
            view.take(e, Player::Maker);
            picks.push(e);
        }
        Ok(picks)
    }

    fn note(&self) -> Option<String> {
        Some(if self.turn_stage == 0 { "stage=I" } else { "stage=II" }.into())
    }

    fn stage(&self) -> usize {
        self.stage
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

fn cross_graph(g: &Graph, side: &[bool]) -> Graph {
    g.filter_edges(|u, v| side[u] != side[v])
}

/// The bipartition whose cross graph has the largest edge connectivity
/// found, stopping early once `stop_at` is reached.
fn best_bipartition(g: &Graph, stop_at: Option<usize>, seed: u64) -> Option<(Vec<bool>, usize)> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    if n <= EXACT_BIPARTITION_LIMIT {
        exact_bipartition(g, stop_at)
    } else {
        annealed_bipartition(g, seed)
    }
}

fn exact_bipartition(g: &Graph, stop_at: Option<usize>) -> Option<(Vec<bool>, usize)> {
    let n = g.n();
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let full = (1u32 << n) - 1;
    let mut candidates: Vec<(u32, u32)> = Vec::new();
    for half in 1u32..1 << (n - 1) {
        let side = half << 1;
        let other = full & !side;
        let min_cross = (0..n)
            .map(|v| {
                let opposite = if side >> v & 1 == 1 { other } else { side };
                (adj[v] & opposite).count_ones()
            })
            .min()
            .unwrap_or(0);
        if min_cross > 0 {
            candidates.push((min_cross, side));
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut best: Option<(u32, usize)> = None;
    for &(min_cross, side) in candidates.iter().take(EXACT_FLOW_CAP) {
        if best.is_some_and(|(_, l)| min_cross as usize <= l) {
            break;
        }
        let mask: Vec<bool> = (0..n).map(|v| side >> v & 1 == 1).collect();
        let lambda = edge_connectivity(&cross_graph(g, &mask)).unwrap_or(0);
        if best.is_none_or(|(_, l)| lambda > l) {
            best = Some((side, lambda));
            if stop_at.is_some_and(|k| lambda >= k) {
                break;
            }
        }
    }
    best.map(|(side, l)| ((0..n).map(|v| side >> v & 1 == 1).collect(), l))
}

/// Simulated annealing on the cut size with the minimum cross degree as
/// primary objective, then an exact connectivity check per restart.
fn annealed_bipartition(g: &Graph, seed: u64) -> Option<(Vec<bool>, usize)> {
    let n = g.n();
    let m = g.m() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<bool>, usize)> = None;
    for _ in 0..ANNEAL_RESTARTS {
        let mut side: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let mut cross: Vec<i64> =
            (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| side[w] != side[v]).count() as i64).collect();
        let score = |cross: &[i64]| {
            let cut: i64 = cross.iter().sum::<i64>() / 2;
            cross.iter().copied().min().unwrap_or(0) * (m + 1) + cut
        };
        let mut current = score(&cross);
        let steps = 50 * n;
        for step in 0..steps {
            let temp = 2.0 * (1.0 - step as f64 / steps as f64) + 1e-3;
            let x = rng.gen_range(0..n);
            flip(g, &mut side, &mut cross, x);
            let next = score(&cross);
            let accept = next >= current || rng.gen::<f64>() < (((next - current) as f64) / temp).exp();
            if accept {
                current = next;
            } else {
                flip(g, &mut side, &mut cross, x);
            }
        }
        let lambda = edge_connectivity(&cross_graph(g, &side)).unwrap_or(0);
        if best.as_ref().is_none_or(|(_, l)| lambda > *l) {
            best = Some((side, lambda));
        }
    }
    best
}

fn flip(g: &Graph, side: &mut [bool], cross: &mut [i64], x: usize) {
    side[x] = !side[x];
    cross[x] = g.degree(x) as i64 - cross[x];
    for &w in g.neighbors(x) {
        cross[w] += if side[w] != side[x] { 1 } else { -1 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, WinPredicate};
    use crate::strategies::RandomBreaker;

    #[test]
    fn bipartite_host_is_rejected() {
        let g = Graph::cycle(6);
        assert!(matches!(Main3Maker::new(&g, 1, Main3Options::default()), Err(Error::Precondition(_))));
    }

    #[test]
    fn k5_finds_connected_bipartite_subgraph() {
        let g = Graph::complete(5);
        let maker = Main3Maker::new(&g, 1, Main3Options::default()).unwrap();
        match maker.case() {
            Main3Case::Bipartite { side, connectivity } => {
                assert_eq!(*connectivity, 2);
                assert!(side.len() == 2 || side.len() == 3);
            }
            other => panic!("unexpected case {other:?}"),
        }
    }

    #[test]
    fn whole_case_when_requirement_too_high() {
        let g = Graph::complete(5);
        let maker = Main3Maker::new(&g, 1, Main3Options { k_prime: Some(3), seed: 0 }).unwrap();
        assert_eq!(maker.case(), &Main3Case::Whole { k: 3 });
    }

    #[test]
    fn deterministic_replay() {
        let g = Graph::complete(5);
        let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, 1, WinPredicate::OddCycle).unwrap();
        let opts = Main3Options { k_prime: Some(2), seed: 3 };
        let a = play(&spec, &mut Main3Maker::new(&g, 1, opts).unwrap(), &mut RandomBreaker::new(1), 4);
        let b = play(&spec, &mut Main3Maker::new(&g, 1, opts).unwrap(), &mut RandomBreaker::new(1), 4);
        assert_eq!(a.transcript.render(), b.transcript.render());
    }

    #[test]
    fn annealing_on_larger_host() {
        let n = 24;
        let g = Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).filter(move |v| (v - u) % 5 != 0).map(move |v| (u, v))))
            .unwrap();
        let maker = Main3Maker::new(&g, 2, Main3Options { k_prime: None, seed: 1 }).unwrap();
        assert!(matches!(maker.case(), Main3Case::Bipartite { connectivity, .. } if *connectivity >= 5));
    }
}
