use crate::graph::{Graph, OddCycleWitness, VertexSet};
use crate::{Error, Result};

/// Default vertex cap for [`chromatic_number`].
pub const DEFAULT_CHROMATIC_CAP: usize = 64;

/// Outcome of [`find_odd_cycle`]: an odd cycle, or a proper 2-coloring of
/// every component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OddCycleResult {
    OddCycle(OddCycleWitness),
    Bipartite(Vec<u8>),
}

impl OddCycleResult {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, OddCycleResult::Bipartite(_))
    }

    pub fn witness(self) -> Option<OddCycleWitness> {
        match self {
            OddCycleResult::OddCycle(w) => Some(w),
            OddCycleResult::Bipartite(_) => None,
        }
    }
}

/// BFS 2-coloring. The first monochromatic edge `xy` closes an odd cycle
/// through the lowest common BFS ancestor of `x` and `y`.
pub fn find_odd_cycle(g: &Graph) -> OddCycleResult {
    let n = g.n();
    let mut color = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if color[root] != u8::MAX {
            continue;
        }
        color[root] = 0;
        parent[root] = root;
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if color[y] == u8::MAX {
                    color[y] = 1 - color[x];
                    parent[y] = x;
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                } else if color[y] == color[x] {
                    return OddCycleResult::OddCycle(close_cycle(x, y, &parent, &depth));
                }
            }
        }
    }
    OddCycleResult::Bipartite(color)
}

fn close_cycle(x: usize, y: usize, parent: &[usize], depth: &[usize]) -> OddCycleWitness {
    let (mut a, mut b) = (x, y);
    let mut left = vec![a];
    let mut right = vec![b];
    while depth[a] > depth[b] {
        a = parent[a];
        left.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b];
        right.push(b);
    }
    while a != b {
        a = parent[a];
        b = parent[b];
        left.push(a);
        right.push(b);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    OddCycleWitness { vertices: left }
}

/// A maximal clique grown greedily from every vertex; the largest one found.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for &start in &order {
        if g.degree(start) < best.len() {
            continue;
        }
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = g.neighbors(start).to_vec();
        while !candidates.is_empty() {
            let &pick = candidates
                .iter()
                .max_by_key(|&&c| (candidates.iter().filter(|&&d| g.has_edge(c, d)).count(), std::cmp::Reverse(c)))
                .expect("non-empty");
            clique.push(pick);
            candidates.retain(|&c| c != pick && g.has_edge(c, pick));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

/// Whether `g` has a proper `k`-coloring, returning one if so.
pub fn is_k_colorable(g: &Graph, k: usize) -> Option<Vec<usize>> {
    is_k_colorable_budgeted(g, k, None).expect("unbudgeted search cannot run out")
}

/// [`is_k_colorable`] with an optional cap on backtracking nodes.
pub fn is_k_colorable_budgeted(g: &Graph, k: usize, budget: Option<u64>) -> Result<Option<Vec<usize>>> {
    let n = g.n();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    if k >= n {
        return Ok(Some((0..n).collect()));
    }
    if k == 1 {
        return Ok((g.m() == 0).then(|| vec![0; n]));
    }
    if k == 2 {
        return Ok(match find_odd_cycle(g) {
            OddCycleResult::Bipartite(c) => Some(c.into_iter().map(usize::from).collect()),
            OddCycleResult::OddCycle(_) => None,
        });
    }
    let clique = greedy_clique(g);
    if clique.len() > k {
        return Ok(None);
    }
    let mut search = Dsatur::new(g, k, budget);
    for (c, &v) in clique.iter().enumerate() {
        search.assign(v, c);
    }
    search.max_used = clique.len();
    if search.solve()? {
        Ok(Some(search.color.iter().map(|&c| c as usize).collect()))
    } else {
        Ok(None)
    }
}

struct Dsatur<'a> {
    g: &'a Graph,
    k: usize,
    color: Vec<u32>,
    /// `forbid[v * k + c]` counts colored neighbors of `v` with color `c`.
    forbid: Vec<u32>,
    saturation: Vec<usize>,
    uncolored: usize,
    max_used: usize,
    nodes: u64,
    budget: Option<u64>,
}

const UNCOLORED: u32 = u32::MAX;

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, k: usize, budget: Option<u64>) -> Self {
        Dsatur {
            g,
            k,
            color: vec![UNCOLORED; g.n()],
            forbid: vec![0; g.n() * k],
            saturation: vec![0; g.n()],
            uncolored: g.n(),
            max_used: 0,
            nodes: 0,
            budget,
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c as u32;
        self.uncolored -= 1;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbid[w * self.k + c];
            *slot += 1;
            if *slot == 1 {
                self.saturation[w] += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v] as usize;
        self.color[v] = UNCOLORED;
        self.uncolored += 1;
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbid[w * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let mut key = (0usize, 0usize);
        for v in 0..self.g.n() {
            if self.color[v] != UNCOLORED {
                continue;
            }
            let cand = (self.saturation[v], self.g.degree(v));
            if best == usize::MAX || cand > key {
                best = v;
                key = cand;
            }
        }
        best
    }

    fn solve(&mut self) -> Result<bool> {
        if self.uncolored == 0 {
            return Ok(true);
        }
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::Resource(format!("coloring search exceeded {b} nodes")));
            }
        }
        let v = self.pick();
        if self.saturation[v] >= self.k {
            return Ok(false);
        }
        let limit = (self.max_used + 1).min(self.k);
        for c in 0..limit {
            if self.forbid[v * self.k + c] > 0 {
                continue;
            }
            let saved = self.max_used;
            self.max_used = self.max_used.max(c + 1);
            self.assign(v, c);
            if self.solve()? {
                return Ok(true);
            }
            self.unassign(v);
            self.max_used = saved;
        }
        Ok(false)
    }
}

/// Greedy DSATUR coloring; returns the number of colors used.
fn dsatur_upper_bound(g: &Graph) -> usize {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| {
                let mut seen: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).filter(|&c| c != usize::MAX).collect();
                seen.sort_unstable();
                seen.dedup();
                (seen.len(), g.degree(v), std::cmp::Reverse(v))
            })
            .expect("uncolored vertex remains");
        let taken: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
        let c = (0..).find(|c| !taken.contains(c)).expect("some color is free");
        color[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// χ(G) for graphs with at most [`DEFAULT_CHROMATIC_CAP`] vertices. The
/// empty graph has χ = 0.
pub fn chromatic_number(g: &Graph) -> Result<usize> {
    chromatic_number_with_cap(g, DEFAULT_CHROMATIC_CAP)
}

pub fn chromatic_number_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    if g.n() > cap {
        return Err(Error::Resource(format!("chromatic number capped at {cap} vertices, graph has {}", g.n())));
    }
    if g.n() == 0 {
        return Ok(0);
    }
    let lower = greedy_clique(g).len().max(1);
    let upper = dsatur_upper_bound(g);
    for k in lower..upper {
        if is_k_colorable(g, k).is_some() {
            return Ok(k);
        }
    }
    Ok(upper)
}

/// A bipartition in which every vertex has at least half of its neighbors on
/// the other side. Local search from the parity split; every flip strictly
/// grows the cut, so it terminates.
pub fn unfriendly_partition(g: &Graph) -> (VertexSet, VertexSet) {
    let n = g.n();
    let mut side: Vec<bool> = (0..n).map(|v| v % 2 == 1).collect();
    let mut cross: Vec<usize> = (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| side[w] != side[v]).count()).collect();
    loop {
        let mut changed = false;
        for v in 0..n {
            if 2 * cross[v] < g.degree(v) {
                side[v] = !side[v];
                cross[v] = g.degree(v) - cross[v];
                for &w in g.neighbors(v) {
                    if side[w] == side[v] {
                        cross[w] -= 1;
                    } else {
                        cross[w] += 1;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let left = VertexSet::from_mask(&side.iter().map(|&s| !s).collect::<Vec<_>>());
    let right = VertexSet::from_mask(&side);
    (left, right)
}
