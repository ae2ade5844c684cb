//! Edge and vertex connectivity via unit-capacity augmenting paths.

use std::collections::VecDeque;

use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

struct FlowNet {
    out: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet { out: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    /// Arc `u -> v` with capacity `forward`; its partner `v -> u` gets
    /// `backward` (0 for a directed arc, `forward` for an undirected edge).
    fn add(&mut self, u: usize, v: usize, forward: u32, backward: u32) {
        let id = self.to.len();
        self.to.extend([v, u]);
        self.cap.extend([forward, backward]);
        self.out[u].push(id);
        self.out[v].push(id + 1);
    }

    /// Augments from `s` to `t` until no path remains or `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut flow = 0;
        let mut via = vec![usize::MAX; self.out.len()];
        while flow < limit {
            via.iter_mut().for_each(|x| *x = usize::MAX);
            via[s] = usize::MAX - 1;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(x) = queue.pop_front() {
                for &arc in &self.out[x] {
                    let y = self.to[arc];
                    if self.cap[arc] > 0 && via[y] == usize::MAX {
                        via[y] = arc;
                        if y == t {
                            break 'bfs;
                        }
                        queue.push_back(y);
                    }
                }
            }
            if via[t] == usize::MAX {
                break;
            }
            let mut bottleneck = u32::MAX;
            let mut y = t;
            while y != s {
                let arc = via[y];
                bottleneck = bottleneck.min(self.cap[arc]);
                y = self.to[arc ^ 1];
            }
            let push = (bottleneck as usize).min(limit - flow) as u32;
            let mut y = t;
            while y != s {
                let arc = via[y];
                self.cap[arc] -= push;
                self.cap[arc ^ 1] += push;
                y = self.to[arc ^ 1];
            }
            flow += push as usize;
        }
        flow
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &arc in &self.out[x] {
                let y = self.to[arc];
                if self.cap[arc] > 0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }
}

fn edge_flow_net(g: &Graph) -> FlowNet {
    let mut net = FlowNet::new(g.n());
    for &(u, v) in g.edges() {
        net.add(u, v, 1, 1);
    }
    net
}

/// Minimum number of internally vertex-disjoint `s`-`t` paths (capped at
/// `limit`), with the separating vertex set when the flow stays below it.
fn local_vertex_cut(g: &Graph, s: usize, t: usize, limit: usize) -> (usize, Vec<usize>) {
    let n = g.n();
    let big = n as u32 + 1;
    // v_in = 2v, v_out = 2v + 1
    let mut net = FlowNet::new(2 * n);
    for v in 0..n {
        if v != s && v != t {
            net.add(2 * v, 2 * v + 1, 1, 0);
        }
    }
    for &(u, v) in g.edges() {
        net.add(2 * u + 1, 2 * v, big, 0);
        net.add(2 * v + 1, 2 * u, big, 0);
    }
    let flow = net.max_flow(2 * s + 1, 2 * t, limit);
    if flow >= limit {
        return (flow, Vec::new());
    }
    let seen = net.reachable(2 * s + 1);
    let cut = (0..n).filter(|&v| v != s && v != t && seen[2 * v] && !seen[2 * v + 1]).collect();
    (flow, cut)
}

/// Even's scheme: a minimum separator misses one of the first κ+1 vertices,
/// so pairs `(v_i, v_j)` with `i ≤ κ` suffice. Returns `(k, cut)` where `k`
/// is exact when it is below `stop_at` (and `stop_at` otherwise); `cut` is a
/// separator of size `k` when one was found.
fn vertex_connectivity_search(g: &Graph, stop_at: usize) -> (usize, Option<Vec<usize>>) {
    let n = g.n();
    let comps = g.components();
    if comps.len() > 1 {
        return (0, Some(Vec::new()));
    }
    if g.m() == n * (n - 1) / 2 {
        return ((n - 1).min(stop_at), None);
    }
    // A minimum-degree vertex that is not universal is separated by its
    // neighborhood.
    let w = (0..n).min_by_key(|&v| (g.degree(v), v)).expect("n >= 2");
    let mut best = g.degree(w);
    let mut cut = Some(g.neighbors(w).to_vec());
    if best >= stop_at {
        best = stop_at;
        cut = None;
    }
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let (flow, sep) = local_vertex_cut(g, i, j, best);
            if flow < best {
                best = flow;
                cut = Some(sep);
            }
        }
        i += 1;
    }
    (best, cut)
}

fn check_two(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::domain("connectivity needs at least 2 vertices"));
    }
    Ok(())
}

/// κ(G), with κ(K_m) = m − 1.
pub fn vertex_connectivity(g: &Graph) -> Result<usize> {
    check_two(g)?;
    Ok(vertex_connectivity_search(g, usize::MAX).0)
}

/// κ(G) ≥ k, stopping as soon as the answer is known.
pub fn vertex_connectivity_at_least(g: &Graph, k: usize) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    check_two(g)?;
    Ok(vertex_connectivity_search(g, k).0 >= k)
}

/// A minimum vertex separator; `None` for complete graphs, which have none.
pub fn min_vertex_cut(g: &Graph) -> Result<Option<Vec<usize>>> {
    check_two(g)?;
    Ok(vertex_connectivity_search(g, usize::MAX).1)
}

/// Minimum vertex separator of size below `limit`, if any.
pub(crate) fn vertex_cut_below(g: &Graph, limit: usize) -> Option<Vec<usize>> {
    if limit == 0 || g.n() < 2 {
        return None;
    }
    match vertex_connectivity_search(g, limit) {
        (k, Some(cut)) if k < limit => Some(cut),
        _ => None,
    }
}

fn edge_connectivity_search(g: &Graph, stop_at: usize) -> (usize, Vec<bool>) {
    let n = g.n();
    let w = (0..n).min_by_key(|&v| (g.degree(v), v)).expect("n >= 2");
    let mut best = g.degree(w).min(stop_at);
    // Side containing vertex 0 of the trivial cut around `w`.
    let mut side = vec![w != 0; n];
    side[0] = true;
    if w != 0 {
        side[w] = false;
    }
    for t in 1..n {
        if best == 0 {
            break;
        }
        let mut net = edge_flow_net(g);
        let flow = net.max_flow(0, t, best);
        if flow < best {
            best = flow;
            side = net.reachable(0);
        }
    }
    (best, side)
}

/// λ(G): the global minimum edge cut, from max-flows between vertex 0 and
/// every other vertex.
pub fn edge_connectivity(g: &Graph) -> Result<usize> {
    check_two(g)?;
    Ok(edge_connectivity_search(g, usize::MAX).0)
}

pub fn edge_connectivity_at_least(g: &Graph, k: usize) -> Result<bool> {
    if k == 0 {
        return Ok(true);
    }
    check_two(g)?;
    Ok(edge_connectivity_search(g, k).0 >= k)
}

/// λ(G) together with the side of a minimum edge cut that contains vertex 0.
pub fn min_edge_cut(g: &Graph) -> Result<(usize, VertexSet)> {
    check_two(g)?;
    let (value, side) = edge_connectivity_search(g, usize::MAX);
    Ok((value, VertexSet::from_mask(&side)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles_sharing_vertex() -> Graph {
        Graph::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
    }

    #[test]
    fn edge_connectivity_examples() {
        assert_eq!(edge_connectivity(&Graph::complete(4)).unwrap(), 3);
        assert_eq!(edge_connectivity(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(edge_connectivity(&Graph::path(4)).unwrap(), 1);
        assert!(edge_connectivity(&Graph::empty(1)).is_err());
        assert_eq!(edge_connectivity(&Graph::empty(3)).unwrap(), 0);
    }

    #[test]
    fn vertex_connectivity_examples() {
        assert_eq!(vertex_connectivity(&Graph::complete(5)).unwrap(), 4);
        assert_eq!(vertex_connectivity(&Graph::cycle(5)).unwrap(), 2);
        assert_eq!(vertex_connectivity(&two_triangles_sharing_vertex()).unwrap(), 1);
        assert_eq!(min_vertex_cut(&two_triangles_sharing_vertex()).unwrap(), Some(vec![2]));
        assert_eq!(min_vertex_cut(&Graph::complete(4)).unwrap(), None);
        assert!(vertex_connectivity(&Graph::empty(1)).is_err());
    }

    #[test]
    fn at_least_agrees_with_exact() {
        for g in [Graph::complete(6), Graph::cycle(7), two_triangles_sharing_vertex(), Graph::path(5)] {
            let k = vertex_connectivity(&g).unwrap();
            let l = edge_connectivity(&g).unwrap();
            for t in 0..7 {
                assert_eq!(vertex_connectivity_at_least(&g, t).unwrap(), k >= t);
                assert_eq!(edge_connectivity_at_least(&g, t).unwrap(), l >= t);
            }
        }
    }

    #[test]
    fn min_edge_cut_side_is_a_real_cut() {
        let g = two_triangles_sharing_vertex();
        let (value, side) = min_edge_cut(&g).unwrap();
        assert_eq!(value, 2);
        let other = side.complement();
        assert_eq!(crate::graph::cut_edges(&g, &side, &other).unwrap().len(), value);
    }
}
