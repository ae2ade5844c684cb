use std::collections::HashSet;

use crate::graph::connectivity::{vertex_connectivity_at_least, vertex_cut_below};
use crate::graph::{induced_on, Graph, VertexSet};
use crate::rational::{self, Rational};

/// Searches for a vertex set whose induced subgraph is ⌈k/4⌉-vertex-connected.
///
/// Any graph of average degree at least `k` contains one. The search peels
/// the ⌈k/4⌉-core, then repeatedly splits along a separator smaller than the
/// target, descending into the side with the highest average degree (ties:
/// larger side, then lower minimum label) and backtracking into the other
/// sides. The result is re-checked with [`vertex_connectivity_at_least`].
pub fn mader_subgraph(g: &Graph, k: Rational) -> Option<VertexSet> {
    if k <= Rational::from_integer(0) {
        return None;
    }
    let target = rational::ceil(&(k / 4)).max(1) as usize;
    let mut visited = HashSet::new();
    let found = search(g, (0..g.n()).collect(), target, &mut visited)?;
    let (sub, _) = induced_on(g, &found);
    if !vertex_connectivity_at_least(&sub, target).unwrap_or(false) {
        return None;
    }
    Some(VertexSet::new(g.n(), found).expect("labels come from g"))
}

/// Removes vertices with fewer than `t` neighbors inside the set until none
/// remain.
fn peel_core(g: &Graph, set: &[usize], t: usize) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    for &v in set {
        inside[v] = true;
    }
    let mut deg: Vec<usize> = vec![0; g.n()];
    let mut stack = Vec::new();
    for &v in set {
        deg[v] = g.degree_into(v, &inside);
        if deg[v] < t {
            stack.push(v);
            inside[v] = false;
        }
    }
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if inside[w] {
                deg[w] -= 1;
                if deg[w] < t {
                    inside[w] = false;
                    stack.push(w);
                }
            }
        }
    }
    set.iter().copied().filter(|&v| inside[v]).collect()
}

fn search(g: &Graph, set: Vec<usize>, t: usize, visited: &mut HashSet<Vec<usize>>) -> Option<Vec<usize>> {
    let set = peel_core(g, &set, t);
    if set.len() <= t || !visited.insert(set.clone()) {
        return None;
    }
    let (sub, map) = induced_on(g, &set);
    let Some(cut) = vertex_cut_below(&sub, t) else {
        return Some(set);
    };
    let mut removed = vec![false; sub.n()];
    for &c in &cut {
        removed[c] = true;
    }
    let rest = sub.filter_edges(|u, v| !removed[u] && !removed[v]);
    let mut sides: Vec<(Vec<usize>, usize)> = rest
        .components()
        .into_iter()
        .filter(|comp| !removed[comp[0]])
        .map(|comp| {
            let mut side: Vec<usize> = comp.iter().chain(cut.iter()).map(|&i| map[i]).collect();
            side.sort_unstable();
            let (h, _) = induced_on(g, &side);
            (side, h.m())
        })
        .collect();
    // Denser side first: compare 2m/|S| by cross-multiplication.
    sides.sort_by(|(a, ma), (b, mb)| {
        let dens = (mb * a.len()).cmp(&(ma * b.len()));
        dens.then(b.len().cmp(&a.len())).then(a[0].cmp(&b[0]))
    });
    for (side, _) in sides {
        if side.len() > t && side.len() < set.len() {
            if let Some(found) = search(g, side, t, visited) {
                return Some(found);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vertex_connectivity;

    #[test]
    fn complete_graph_returns_itself() {
        let s = mader_subgraph(&Graph::complete(8), Rational::from_integer(4)).unwrap();
        assert_eq!(s.len(), 8);
    }

    #[test]
    fn edgeless_graph_has_none() {
        assert!(mader_subgraph(&Graph::empty(6), Rational::from_integer(1)).is_none());
    }

    #[test]
    fn two_disjoint_k5_returns_one_clique() {
        let edges = (0..5).flat_map(|u| (u + 1..5).flat_map(move |v| [(u, v), (u + 5, v + 5)]));
        let g = Graph::from_edges(10, edges).unwrap();
        let s = mader_subgraph(&g, Rational::from_integer(4)).unwrap();
        let (h, _) = crate::graph::induced_subgraph(&g, &s).unwrap();
        assert!(vertex_connectivity(&h).unwrap() >= 1);
        assert!(s.members() == [0, 1, 2, 3, 4] || s.members() == [5, 6, 7, 8, 9]);
    }

    #[test]
    fn finds_dense_block_behind_a_cut_vertex() {
        // K6 on 0..6 hanging off a path 6-7-8 through vertex 5.
        let mut e: Vec<(usize, usize)> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).collect();
        e.extend([(5, 6), (6, 7), (7, 8)]);
        let g = Graph::from_edges(9, e).unwrap();
        let s = mader_subgraph(&g, Rational::from_integer(12)).unwrap();
        assert_eq!(s.members(), &[0, 1, 2, 3, 4, 5]);
    }
}
