use std::sync::Arc;

use super::{Dsu, View};
use crate::engine::{BoardKind, Forfeit, GameSpec, Position, Strategy};
use crate::graph::{edge_connectivity_at_least, induced_on, min_edge_cut, Graph, VertexSet};

/// Heuristic Maker for connectivity games on an edge board.
///
/// Maker's edges are viewed as a forest of components over a vertex set
/// `span`. Each claim goes to the most endangered component, the one with
/// the fewest claimable edges leaving it, along an edge towards the most
/// endangered neighbouring component. Once `span` is connected and the
/// target connectivity `k ≥ 2` is not yet reached, Maker claims an edge
/// across a minimum edge cut of its own graph. Edge choices are limited to
/// `allowed`; ties go to the lowest edge id.
#[derive(Clone, Debug)]
pub struct ConnectivityMaker {
    allowed: Arc<Vec<bool>>,
    span: Arc<Vec<bool>>,
    target: usize,
    label: String,
}

impl ConnectivityMaker {
    /// `allowed` are host edge ids Maker may use (all when `None`); `span`
    /// is the vertex set to connect (all when `None`).
    pub fn new(host: &Graph, allowed: Option<&[usize]>, span: Option<&VertexSet>, target: usize) -> Self {
        let allowed_mask = match allowed {
            Some(ids) => {
                let mut m = vec![false; host.m()];
                for &e in ids {
                    m[e] = true;
                }
                m
            }
            None => vec![true; host.m()],
        };
        let span_mask = span.map_or_else(|| vec![true; host.n()], VertexSet::mask);
        let restricted = allowed.is_some() || span.is_some();
        let label = if restricted { format!("connectivity(k={target},restricted)") } else { format!("connectivity(k={target})") };
        ConnectivityMaker { allowed: Arc::new(allowed_mask), span: Arc::new(span_mask), target: target.max(1), label }
    }

    /// Spanning connectivity on the whole host.
    pub fn spanning(host: &Graph) -> Self {
        Self::new(host, None, None, 1)
    }

    fn usable(&self, host: &Graph, e: usize) -> bool {
        let (u, v) = host.edge(e);
        self.allowed[e] && self.span[u] && self.span[v]
    }

    /// The next edge to claim, if any allowed edge is unclaimed.
    pub(crate) fn next_claim(&self, host: &Graph, view: &View) -> Option<usize> {
        let n = host.n();
        let mut dsu = Dsu::new(n);
        for &e in &view.maker {
            let (u, v) = host.edge(e);
            if self.span[u] && self.span[v] {
                dsu.union(u, v);
            }
        }
        let span_vertices: Vec<usize> = (0..n).filter(|&v| self.span[v]).collect();
        let mut roots: Vec<usize> = span_vertices.iter().map(|&v| dsu.find(v)).collect();
        roots.sort_unstable();
        roots.dedup();

        if roots.len() > 1 {
            let mut danger = vec![0usize; n];
            let mut crossing = Vec::new();
            for e in view.free() {
                if !self.usable(host, e) {
                    continue;
                }
                let (u, v) = host.edge(e);
                let (ru, rv) = (dsu.find(u), dsu.find(v));
                if ru != rv {
                    danger[ru] += 1;
                    danger[rv] += 1;
                    crossing.push((e, ru, rv));
                }
            }
            // Roots are the minimum vertex of their component, so ordering
            // by root breaks ties by lowest vertex label.
            let target = roots.iter().copied().filter(|&r| danger[r] > 0).min_by_key(|&r| (danger[r], r));
            if let Some(r) = target {
                return crossing
                    .iter()
                    .filter(|&&(_, a, b)| a == r || b == r)
                    .min_by_key(|&&(e, a, b)| (danger[if a == r { b } else { a }], e))
                    .map(|&(e, _, _)| e);
            }
        } else if self.target >= 2 && span_vertices.len() >= 2 {
            let (sub, map) = induced_on(&host.edge_subgraph(view.maker.iter().copied()), &span_vertices);
            if !edge_connectivity_at_least(&sub, self.target).unwrap_or(true) {
                if let Ok((_, side)) = min_edge_cut(&sub) {
                    let mut on_side = vec![false; n];
                    for i in side.iter() {
                        on_side[map[i]] = true;
                    }
                    let across = view.free().find(|&e| {
                        let (u, v) = host.edge(e);
                        self.usable(host, e) && on_side[u] != on_side[v]
                    });
                    if across.is_some() {
                        return across;
                    }
                }
            }
        }
        view.free().find(|&e| self.usable(host, e)).or_else(|| view.free().find(|&e| self.allowed[e]))
    }
}

impl Strategy for ConnectivityMaker {
    fn id(&self) -> String {
        self.label.clone()
    }

    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        if spec.board != BoardKind::Edge {
            return Err(Forfeit::new("connectivity Maker needs an edge board"));
        }
        let mut view = View::new(pos);
        let mut picks = Vec::with_capacity(count);
        for _ in 0..count {
            let e = self
                .next_claim(&spec.host, &view)
                .or_else(|| view.first_free())
                .ok_or_else(|| Forfeit::new("no unclaimed edge"))?;
            view.take(e, crate::engine::Player::Maker);
            picks.push(e);
        }
        Ok(picks)
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, Player, WinPredicate};
    use crate::solver::{solve, verify_maker_strategy, StrategyCheck};
    use crate::strategies::{CutAttack, RandomBreaker};

    #[test]
    fn k4_spanning_is_a_maker_win() {
        let g = Graph::complete(4);
        let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, 1, WinPredicate::SpanningConnected).unwrap();
        assert_eq!(solve(&spec).unwrap().winner, Player::Maker);
        let check = verify_maker_strategy(&spec, &ConnectivityMaker::spanning(&g), 0, 1_000_000).unwrap();
        assert!(matches!(check, StrategyCheck::AlwaysWins { .. }), "{check:?}");
    }

    #[test]
    fn tree_host_is_lost() {
        let g = Graph::path(5);
        let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, 1, WinPredicate::SpanningConnected).unwrap();
        let r = play(&spec, &mut ConnectivityMaker::spanning(&g), &mut CutAttack, 0);
        assert_eq!(r.winner, Player::Breaker);
        let r = play(&spec, &mut ConnectivityMaker::spanning(&g), &mut RandomBreaker::new(1), 0);
        assert_eq!(r.winner, Player::Breaker);
    }

    #[test]
    fn two_connectivity_on_k6() {
        let g = Graph::complete(6);
        let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, 1, WinPredicate::Connectivity(2)).unwrap();
        let r = play(&spec, &mut ConnectivityMaker::new(&g, None, None, 2), &mut RandomBreaker::new(0), 4);
        if r.maker_won() {
            assert!(r.witness.unwrap().validate(&spec, r.transcript.verify(&spec).unwrap().maker_claims()));
        }
    }
}
