use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{BoardKind, GameSpec, Position, WinPredicate};
use crate::graph::{
    edge_connectivity_at_least, find_odd_cycle, induced_on, is_k_colorable, Graph, OddCycleWitness,
};

/// Certificate that Maker's claims contain a winning set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A cycle of host vertices; on an edge board every cycle edge is
    /// Maker's, on a vertex board every cycle vertex is.
    OddCycle(OddCycleWitness),
    /// Maker's claims (sorted), which together are not `k`-colorable.
    NotColorable { k: usize, elements: Vec<usize> },
    /// Edge ids of a spanning tree of the host made of Maker's edges.
    SpanningTree { edges: Vec<usize> },
    /// Maker's edges (sorted), forming a `k`-edge-connected spanning graph.
    EdgeConnected { k: usize, elements: Vec<usize> },
    /// Three pairwise adjacent vertices of `host[T ∪ M]`.
    Triangle { vertices: [usize; 3] },
    /// The vertices of the component of `host[T ∪ M]` containing `M`.
    ConnectedSet { vertices: Vec<usize> },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::OddCycle(_) => "odd-cycle",
            Witness::NotColorable { .. } => "not-colorable",
            Witness::SpanningTree { .. } => "spanning-tree",
            Witness::EdgeConnected { .. } => "edge-connected",
            Witness::Triangle { .. } => "triangle",
            Witness::ConnectedSet { .. } => "connected-set",
        }
    }

    /// Cycle length for odd cycles, element count otherwise.
    pub fn size(&self) -> usize {
        match self {
            Witness::OddCycle(c) => c.len(),
            Witness::NotColorable { elements, .. } | Witness::EdgeConnected { elements, .. } => elements.len(),
            Witness::SpanningTree { edges } => edges.len(),
            Witness::Triangle { .. } => 3,
            Witness::ConnectedSet { vertices } => vertices.len(),
        }
    }

    /// Checks the witness against the `GameSpec` and Maker's claims alone.
    pub fn validate(&self, spec: &GameSpec, maker_claims: &[usize]) -> bool {
        let host = &*spec.host;
        let mut owned = vec![false; spec.board_size()];
        for &e in maker_claims {
            match owned.get_mut(e) {
                Some(slot) => *slot = true,
                None => return false,
            }
        }
        let objective_matches = matches!(
            (self, &spec.objective),
            (Witness::OddCycle(_), WinPredicate::OddCycle)
                | (Witness::NotColorable { .. }, WinPredicate::NonKColorable(_))
                | (Witness::SpanningTree { .. }, WinPredicate::SpanningConnected)
                | (Witness::EdgeConnected { .. }, WinPredicate::Connectivity(_))
                | (Witness::Triangle { .. } | Witness::ConnectedSet { .. }, WinPredicate::AuxGhm(_))
        ) || matches!((self, &spec.objective), (Witness::OddCycle(_), WinPredicate::NonKColorable(2)));
        if !objective_matches {
            return false;
        }
        match self {
            Witness::OddCycle(c) => {
                let vs = &c.vertices;
                if vs.len() < 3 || vs.len() % 2 == 0 {
                    return false;
                }
                let mut seen = vec![false; host.n()];
                for &v in vs {
                    if v >= host.n() || std::mem::replace(&mut seen[v], true) {
                        return false;
                    }
                }
                (0..vs.len()).all(|i| {
                    let (u, v) = (vs[i], vs[(i + 1) % vs.len()]);
                    match spec.board {
                        BoardKind::Edge => host.edge_id(u, v).is_some_and(|id| owned[id]),
                        BoardKind::Vertex => host.has_edge(u, v) && owned[u] && owned[v],
                    }
                })
            }
            Witness::NotColorable { k, elements } => {
                let WinPredicate::NonKColorable(target) = spec.objective else { return false };
                *k == target
                    && elements.iter().all(|&e| e < owned.len() && owned[e])
                    && is_k_colorable(&maker_graph(spec, elements), *k).is_none()
            }
            Witness::SpanningTree { edges } => {
                if edges.len() + 1 != host.n().max(1) || !edges.iter().all(|&e| e < owned.len() && owned[e]) {
                    return false;
                }
                let mut dsu: Vec<usize> = (0..host.n()).collect();
                edges.iter().all(|&e| {
                    let (u, v) = host.edge(e);
                    let (ru, rv) = (find(&mut dsu, u), find(&mut dsu, v));
                    dsu[ru] = rv;
                    ru != rv
                })
            }
            Witness::EdgeConnected { k, elements } => {
                let WinPredicate::Connectivity(target) = spec.objective else { return false };
                *k == target
                    && elements.iter().all(|&e| e < owned.len() && owned[e])
                    && host.n() >= 2
                    && edge_connectivity_at_least(&host.edge_subgraph(elements.iter().copied()), *k).unwrap_or(false)
            }
            Witness::Triangle { vertices: [a, b, c] } => {
                let WinPredicate::AuxGhm(m) = &spec.objective else { return false };
                let inside = |v: usize| v < host.n() && (owned[v] || m.contains(v));
                a != b
                    && b != c
                    && a != c
                    && [a, b, c].iter().all(|&&v| inside(v))
                    && host.has_edge(*a, *b)
                    && host.has_edge(*b, *c)
                    && host.has_edge(*a, *c)
            }
            Witness::ConnectedSet { vertices } => {
                let WinPredicate::AuxGhm(m) = &spec.objective else { return false };
                if vertices.is_empty() || !vertices.iter().all(|&v| v < host.n() && (owned[v] || m.contains(v))) {
                    return false;
                }
                let mut inside = vec![false; host.n()];
                for &v in vertices {
                    inside[v] = true;
                }
                if !m.iter().all(|v| inside[v]) {
                    return false;
                }
                let mut seen = vec![false; host.n()];
                let mut queue = VecDeque::from([vertices[0]]);
                seen[vertices[0]] = true;
                let mut reached = 1;
                while let Some(u) = queue.pop_front() {
                    for &w in host.neighbors(u) {
                        if inside[w] && !seen[w] {
                            seen[w] = true;
                            reached += 1;
                            queue.push_back(w);
                        }
                    }
                }
                reached == vertices.len()
            }
        }
    }
}

fn find(dsu: &mut [usize], mut v: usize) -> usize {
    while dsu[v] != v {
        dsu[v] = dsu[dsu[v]];
        v = dsu[v];
    }
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    MakerWon(Witness),
    Undecided,
    /// Every element is claimed and Maker has not won: Breaker wins.
    BoardExhausted,
}

pub fn evaluate(spec: &GameSpec, pos: &Position) -> Outcome {
    match evaluate_claims(spec, pos.maker_claims()) {
        Some(w) => Outcome::MakerWon(w),
        None if pos.unclaimed_count() == 0 => Outcome::BoardExhausted,
        None => Outcome::Undecided,
    }
}

/// Maker's graph on the host's vertex labels: claimed edges, or the host
/// edges induced by claimed vertices.
fn maker_graph(spec: &GameSpec, claims: &[usize]) -> Graph {
    match spec.board {
        BoardKind::Edge => spec.host.edge_subgraph(claims.iter().copied()),
        BoardKind::Vertex => {
            let mut inside = vec![false; spec.host.n()];
            for &v in claims {
                inside[v] = true;
            }
            spec.host.filter_edges(|u, v| inside[u] && inside[v])
        }
    }
}

/// A witness if `claims` (Maker's elements) contain a winning set.
pub fn evaluate_claims(spec: &GameSpec, claims: &[usize]) -> Option<Witness> {
    let host = &*spec.host;
    let sorted = || {
        let mut s = claims.to_vec();
        s.sort_unstable();
        s
    };
    match &spec.objective {
        WinPredicate::OddCycle => {
            let g = match spec.board {
                BoardKind::Edge => maker_graph(spec, claims),
                BoardKind::Vertex => {
                    let s = sorted();
                    let (sub, map) = induced_on(host, &s);
                    let c = find_odd_cycle(&sub).witness()?;
                    return Some(Witness::OddCycle(OddCycleWitness {
                        vertices: c.vertices.into_iter().map(|v| map[v]).collect(),
                    }));
                }
            };
            find_odd_cycle(&g).witness().map(Witness::OddCycle)
        }
        WinPredicate::NonKColorable(k) => {
            let g = maker_graph(spec, claims);
            is_k_colorable(&g, *k).is_none().then(|| Witness::NotColorable { k: *k, elements: sorted() })
        }
        WinPredicate::SpanningConnected => {
            let mut dsu: Vec<usize> = (0..host.n()).collect();
            let mut tree = Vec::new();
            for e in sorted() {
                let (u, v) = host.edge(e);
                let (ru, rv) = (find(&mut dsu, u), find(&mut dsu, v));
                if ru != rv {
                    dsu[ru] = rv;
                    tree.push(e);
                }
            }
            (tree.len() + 1 == host.n().max(1)).then_some(Witness::SpanningTree { edges: tree })
        }
        WinPredicate::Connectivity(k) => {
            if host.n() < 2 || claims.len() + 1 < host.n() {
                return None;
            }
            let g = maker_graph(spec, claims);
            edge_connectivity_at_least(&g, *k)
                .unwrap_or(false)
                .then(|| Witness::EdgeConnected { k: *k, elements: sorted() })
        }
        WinPredicate::AuxGhm(m) => aux_ghm(host, m.members(), claims),
    }
}

fn aux_ghm(host: &Graph, m: &[usize], claims: &[usize]) -> Option<Witness> {
    let n = host.n();
    let mut inside = vec![false; n];
    for &v in m.iter().chain(claims) {
        inside[v] = true;
    }
    let start = m.first().copied().or_else(|| claims.iter().copied().min())?;
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut comp = vec![start];
    while let Some(u) = queue.pop_front() {
        for &w in host.neighbors(u) {
            if inside[w] && !seen[w] {
                seen[w] = true;
                comp.push(w);
                queue.push_back(w);
            }
        }
    }
    if m.iter().all(|&v| seen[v]) {
        comp.sort_unstable();
        return Some(Witness::ConnectedSet { vertices: comp });
    }
    for &(u, v) in host.edges() {
        if !inside[u] || !inside[v] {
            continue;
        }
        if let Some(&w) = host.neighbors(u).iter().find(|&&w| w > v && inside[w] && host.has_edge(v, w)) {
            return Some(Witness::Triangle { vertices: [u, v, w] });
        }
    }
    None
}
