//! Simple undirected graphs on dense vertex labels `0..n` and the exact
//! primitives the rest of the crate is built on.

mod coloring;
mod connectivity;
mod mader;

use std::collections::VecDeque;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub use coloring::{
    chromatic_number, chromatic_number_with_cap, find_odd_cycle, greedy_clique, is_k_colorable,
    is_k_colorable_budgeted, unfriendly_partition, OddCycleResult, DEFAULT_CHROMATIC_CAP,
};
pub use connectivity::{
    edge_connectivity, edge_connectivity_at_least, min_edge_cut, min_vertex_cut, vertex_connectivity,
    vertex_connectivity_at_least,
};
pub use mader::mader_subgraph;

/// An immutable simple undirected graph.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted; the position of an
/// edge in [`Graph::edges`] is its stable *edge id*, which is how edge boards
/// name their elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edges.len())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range
    /// endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::domain(format!("edge ({u},{v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::domain(format!("loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::domain(format!("duplicate edge ({},{})", w[0].0, w[0].1)));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    /// Like [`Graph::from_edges`] but silently merges duplicates.
    pub fn from_edges_dedup(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::domain(format!("invalid edge ({u},{v}) for n={n}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_sorted_unique(n, list))
    }

    fn from_sorted_unique(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted_unique(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are simple")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of neighbors of `v` inside the set described by `mask`.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&w| mask[w]).count()
    }

    /// The spanning subgraph keeping only the edges for which `keep` holds.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let edges = self.edges.iter().copied().filter(|&(u, v)| keep(u, v)).collect();
        Self::from_sorted_unique(self.n, edges)
    }

    /// The spanning subgraph on the given edge ids.
    pub fn edge_subgraph(&self, ids: impl IntoIterator<Item = usize>) -> Graph {
        let mut edges: Vec<_> = ids.into_iter().map(|id| self.edges[id]).collect();
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unique(self.n, edges)
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Canonical text form: `p <n> <m>` then one `e <u> <v>` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("e {u} {v}\n"));
        }
        s
    }

    /// Parses the text format. Duplicate edges, loops, a wrong edge count and
    /// unknown line kinds are errors; blank lines are ignored.
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let kind = parts.next().unwrap_or("");
            let nums: Vec<&str> = parts.collect();
            let parse_two = || -> Result<(usize, usize)> {
                if nums.len() != 2 {
                    return Err(Error::parse(line_no, "expected two integers"));
                }
                let a = nums[0].parse().map_err(|_| Error::parse(line_no, "bad integer"))?;
                let b = nums[1].parse().map_err(|_| Error::parse(line_no, "bad integer"))?;
                Ok((a, b))
            };
            match kind {
                "p" => {
                    if header.is_some() {
                        return Err(Error::parse(line_no, "duplicate header"));
                    }
                    header = Some(parse_two()?);
                }
                "e" => {
                    let (n, _) = header.ok_or_else(|| Error::parse(line_no, "edge before header"))?;
                    let (u, v) = parse_two()?;
                    if u >= n || v >= n {
                        return Err(Error::parse(line_no, format!("endpoint out of range 0..{n}")));
                    }
                    if u == v {
                        return Err(Error::parse(line_no, "loop"));
                    }
                    if !seen.insert((u.min(v), u.max(v))) {
                        return Err(Error::parse(line_no, format!("duplicate edge {u} {v}")));
                    }
                    edges.push((u, v));
                }
                _ => return Err(Error::parse(line_no, format!("unknown line kind {kind:?}"))),
            }
        }
        let (n, m) = header.ok_or_else(|| Error::parse(0, "missing header"))?;
        if edges.len() != m {
            return Err(Error::parse(0, format!("header declares {m} edges, found {}", edges.len())));
        }
        Graph::from_edges(n, edges)
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

/// A set of vertices of a graph with `universe` vertices. Members are kept
/// sorted and unique.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(universe: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| v >= universe) {
            return Err(Error::domain(format!("vertex {v} outside 0..{universe}")));
        }
        members.sort_unstable();
        members.dedup();
        Ok(VertexSet { universe, members })
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { universe, members: (0..universe).collect() }
    }

    pub fn empty(universe: usize) -> Self {
        VertexSet { universe, members: Vec::new() }
    }

    pub(crate) fn from_mask(mask: &[bool]) -> Self {
        VertexSet { universe: mask.len(), members: (0..mask.len()).filter(|&v| mask[v]).collect() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.universe];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }

    pub fn complement(&self) -> VertexSet {
        let mask = self.mask();
        VertexSet { universe: self.universe, members: (0..self.universe).filter(|&v| !mask[v]).collect() }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.members.len() && j < other.members.len() {
            match self.members[i].cmp(&other.members[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        VertexSet { universe: self.universe.max(other.universe), members }
    }

    fn check_for(&self, g: &Graph) -> Result<()> {
        match self.members.last() {
            Some(&v) if v >= g.n() => Err(Error::domain(format!("vertex {v} outside 0..{}", g.n()))),
            _ => Ok(()),
        }
    }
}

/// An odd cycle, as a cyclic vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct OddCycleWitness {
    pub vertices: Vec<usize>,
}

impl OddCycleWitness {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// The witness's edges, as `(u, v)` pairs in cycle order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| (self.vertices[i], self.vertices[(i + 1) % k]))
    }

    /// Odd length at least 3, distinct vertices, consecutive pairs adjacent
    /// in `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        let k = self.vertices.len();
        if k < 3 || k % 2 == 0 {
            return false;
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == k && self.edges().all(|(u, v)| g.has_edge(u, v))
    }
}

/// δ(G). Errors on the empty graph.
pub fn min_degree(g: &Graph) -> Result<usize> {
    (0..g.n()).map(|v| g.degree(v)).min().ok_or_else(|| Error::domain("minimum degree of an empty graph"))
}

/// G[U], plus the map from new labels to labels of `g` (`map[i]` is the
/// parent vertex of new vertex `i`).
pub fn induced_subgraph(g: &Graph, u: &VertexSet) -> Result<(Graph, Vec<usize>)> {
    u.check_for(g)?;
    Ok(induced_on(g, u.members()))
}

/// Unchecked variant of [`induced_subgraph`] for sorted, in-range vertex
/// lists.
pub(crate) fn induced_on(g: &Graph, vertices: &[usize]) -> (Graph, Vec<usize>) {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = i;
    }
    let mut edges = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        for &w in g.neighbors(v) {
            let j = index[w];
            if j != usize::MAX && i < j {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    (Graph::from_sorted_unique(vertices.len(), edges), vertices.to_vec())
}

/// E_G(A, B).
pub fn cut_edges(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Vec<(usize, usize)>> {
    a.check_for(g)?;
    b.check_for(g)?;
    if !a.is_disjoint(b) {
        return Err(Error::domain("cut sides overlap"));
    }
    let (ma, mb) = (a.mask(), b.mask());
    let (ma, mb) = (&ma, &mb);
    let inside = |v: usize, m: &Vec<bool>| v < m.len() && m[v];
    Ok(g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| (inside(u, ma) && inside(v, mb)) || (inside(u, mb) && inside(v, ma)))
        .collect())
}

/// BFS shortest path from `u` to `v`, endpoints included. `None` when `v` is
/// unreachable.
pub fn shortest_path(g: &Graph, u: usize, v: usize) -> Result<Option<Vec<usize>>> {
    if u >= g.n() || v >= g.n() {
        return Err(Error::domain(format!("vertex outside 0..{}", g.n())));
    }
    Ok(bfs_path(g.n(), |x| g.neighbors(x).iter().copied(), u, v))
}

/// BFS over an implicit graph given by a neighbor function.
pub(crate) fn bfs_path<I: Iterator<Item = usize>>(
    n: usize,
    mut neighbors: impl FnMut(usize) -> I,
    u: usize,
    v: usize,
) -> Option<Vec<usize>> {
    if u == v {
        return Some(vec![u]);
    }
    let mut parent = vec![usize::MAX; n];
    parent[u] = u;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        for w in neighbors(x) {
            if parent[w] == usize::MAX {
                parent[w] = x;
                if w == v {
                    let mut path = vec![v];
                    let mut cur = v;
                    while cur != u {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
    }
    None
}
