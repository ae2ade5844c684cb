use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Dsu, View};
use crate::engine::{derive_seed, BoardKind, Forfeit, GameSpec, Player, Position, Strategy};
use crate::graph::{min_edge_cut, Graph};

/// Claims uniformly random unclaimed elements.
#[derive(Clone, Debug)]
pub struct RandomBreaker {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomBreaker {
    pub fn new(seed: u64) -> Self {
        RandomBreaker { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy for RandomBreaker {
    fn id(&self) -> String {
        format!("random(seed={})", self.seed)
    }

    fn begin(&mut self, _spec: &GameSpec, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, seed));
    }

    fn choose(&mut self, _spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        let free: Vec<usize> = pos.unclaimed().collect();
        let mut picks: Vec<usize> = sample(&mut self.rng, free.len(), count).into_iter().map(|i| free[i]).collect();
        picks.sort_unstable();
        Ok(picks)
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Keeps Maker's graph bipartite for as long as possible: first claims
/// every element that would close an odd cycle for Maker, then the
/// elements most entangled with Maker's graph, then high-degree ones.
#[derive(Clone, Debug, Default)]
pub struct BipartiteGuard;

impl BipartiteGuard {
    pub fn new() -> Self {
        BipartiteGuard
    }
}

/// Maker components with 2-colour parities.
fn parity_components(host: &Graph, board: BoardKind, view: &View) -> (Vec<usize>, Vec<u8>, Vec<bool>) {
    let n = host.n();
    let mut in_maker = vec![false; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    match board {
        BoardKind::Edge => {
            for &e in &view.maker {
                let (u, v) = host.edge(e);
                in_maker[u] = true;
                in_maker[v] = true;
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        BoardKind::Vertex => {
            for &v in &view.maker {
                in_maker[v] = true;
            }
            for &v in &view.maker {
                adj[v] = host.neighbors(v).iter().copied().filter(|&w| in_maker[w]).collect();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut color = vec![0u8; n];
    for s in 0..n {
        if !in_maker[s] || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    color[w] = color[u] ^ 1;
                    stack.push(w);
                }
            }
        }
    }
    (comp, color, in_maker)
}

impl Strategy for BipartiteGuard {
    fn id(&self) -> String {
        "bipartite-guard".into()
    }

    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        let host = &*spec.host;
        let view = View::new(pos);
        let (comp, color, in_maker) = parity_components(host, spec.board, &view);
        // Higher keys are claimed first; ties go to the lower element.
        let mut scored: Vec<((u8, usize, usize), usize)> = match spec.board {
            BoardKind::Edge => view
                .free()
                .map(|e| {
                    let (u, v) = host.edge(e);
                    let threat = in_maker[u] && in_maker[v] && comp[u] == comp[v] && color[u] == color[v];
                    let touch = usize::from(in_maker[u]) + usize::from(in_maker[v]);
                    ((u8::from(threat), touch, host.degree(u) + host.degree(v)), e)
                })
                .collect(),
            BoardKind::Vertex => view
                .free()
                .map(|w| {
                    let mut seen: Vec<(usize, u8)> = host
                        .neighbors(w)
                        .iter()
                        .filter(|&&x| in_maker[x])
                        .map(|&x| (comp[x], color[x]))
                        .collect();
                    let touch = seen.len();
                    seen.sort_unstable();
                    seen.dedup();
                    let threat = seen.windows(2).any(|p| p[0].0 == p[1].0);
                    ((u8::from(threat), touch, host.degree(w)), w)
                })
                .collect(),
        };
        scored.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut picks: Vec<usize> = scored.into_iter().take(count).map(|(_, e)| e).collect();
        picks.sort_unstable();
        Ok(picks)
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Attacks the thinnest cut around Maker's structure.
///
/// On edge boards it claims unclaimed edges of a minimum edge cut of the
/// graph of edges still available to Maker. On vertex boards it claims the
/// unclaimed boundary of the Maker component with the smallest boundary.
#[derive(Clone, Debug, Default)]
pub struct CutAttack;

impl CutAttack {
    pub fn new() -> Self {
        CutAttack
    }
}

impl Strategy for CutAttack {
    fn id(&self) -> String {
        "cut-attack".into()
    }

    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        let host = &*spec.host;
        let mut view = View::new(pos);
        let mut picks = Vec::with_capacity(count);
        match spec.board {
            BoardKind::Edge => {
                let open = host.filter_edges(|u, v| {
                    let e = host.edge_id(u, v).expect("host edge");
                    view.owner[e] != Some(Player::Breaker)
                });
                if host.n() >= 2 && open.is_connected() {
                    if let Ok((_, side)) = min_edge_cut(&open) {
                        for (e, &(u, v)) in host.edges().iter().enumerate() {
                            if picks.len() < count && view.is_free(e) && side.contains(u) != side.contains(v) {
                                picks.push(e);
                            }
                        }
                    }
                }
            }
            BoardKind::Vertex => {
                let n = host.n();
                let mut dsu = Dsu::new(n);
                let in_maker: Vec<bool> = (0..n).map(|v| view.is_maker(v)).collect();
                for &v in &view.maker {
                    for &w in host.neighbors(v) {
                        if in_maker[w] {
                            dsu.union(v, w);
                        }
                    }
                }
                let mut boundary: Vec<(usize, Vec<usize>)> = Vec::new();
                let mut roots: Vec<usize> = view.maker.iter().map(|&v| dsu.find(v)).collect();
                roots.sort_unstable();
                roots.dedup();
                for r in roots {
                    let mut b: Vec<usize> = (0..n)
                        .filter(|&w| view.is_free(w))
                        .filter(|&w| host.neighbors(w).iter().any(|&x| in_maker[x] && dsu.find(x) == r))
                        .collect();
                    b.sort_by_key(|&w| (std::cmp::Reverse(host.degree(w)), w));
                    if !b.is_empty() {
                        boundary.push((b.len(), b));
                    }
                }
                boundary.sort();
                if let Some((_, b)) = boundary.into_iter().next() {
                    picks.extend(b.into_iter().take(count));
                }
            }
        }
        for &e in &picks {
            view.take(e, Player::Breaker);
        }
        while picks.len() < count {
            let best = view.free().max_by_key(|&e| (strength(host, spec.board, e), std::cmp::Reverse(e)));
            let e = best.expect("turn size never exceeds the unclaimed count");
            view.take(e, Player::Breaker);
            picks.push(e);
        }
        picks.sort_unstable();
        Ok(picks)
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

fn strength(host: &Graph, board: BoardKind, e: usize) -> usize {
    match board {
        BoardKind::Edge => {
            let (u, v) = host.edge(e);
            host.degree(u) + host.degree(v)
        }
        BoardKind::Vertex => host.degree(e),
    }
}
