use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dsu, View};
use crate::decompose::{key2_extract_with, BipartiteCore, CoreOptions};
use crate::engine::{derive_seed, BoardKind, Forfeit, GameSpec, Player, Position, Strategy, Witness};
use crate::graph::{Graph, OddCycleWitness};
use crate::rational::{self, format_rational, Rational};
use crate::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Main2Options {
    /// Skip the `χ(G) > 2(b+1)/δ` hypothesis check; also accepts a core
    /// whose `A` side is not certified non-`(b+1)`-colorable.
    pub force: bool,
    pub seed: u64,
    /// Stage II budget; defaults to `⌈100 ln n/δ²⌉`.
    pub dominating_budget: Option<usize>,
}

/// Everything the Maker precomputes from the host; shared between clones.
#[derive(Clone, Debug)]
pub struct Main2Plan {
    pub delta: Rational,
    pub b: usize,
    pub core: BipartiteCore,
    pub host: Arc<Graph>,
    /// The bipartite core `H` as a spanning subgraph of the host.
    pub h: Graph,
    pub in_h: Vec<bool>,
    pub h_vertices: Vec<usize>,
    /// Center of a star in `G[A]` with at least `b+1` leaves, and its leaves.
    pub star: Option<(usize, Vec<usize>)>,
    pub dominating_budget: usize,
    /// Stage III degree floor in `H` (clamped at 0).
    pub degree_floor: f64,
    /// Common-neighbourhood size that triggers the triangle shortcut, `δ²n/4`.
    pub triangle_threshold: Rational,
    /// `|U^c|` at or above which Case 1 applies, `δn/2`.
    pub case1_size: Rational,
    /// Minimum `d(z, U^c)` for the Case 1 vertex, `√n/4`.
    pub z_threshold: f64,
}

impl Main2Plan {
    pub fn new(g: &Graph, delta: Rational, b: usize, opts: &Main2Options) -> Result<Self> {
        let core = key2_extract_with(
            g,
            delta,
            b,
            &CoreOptions { force: opts.force, seed: opts.seed, allow_uncertified: opts.force, ..CoreOptions::default() },
        )?;
        let n = g.n();
        let h = core.bipartite_graph(g);
        let in_h = core.vertices().mask();
        let h_vertices = core.vertices().members().to_vec();
        let star = core
            .a
            .iter()
            .map(|c| (c, g.neighbors(c).iter().copied().filter(|&w| core.a.contains(w)).collect::<Vec<_>>()))
            .max_by(|x, y| x.1.len().cmp(&y.1.len()).then(y.0.cmp(&x.0)))
            .filter(|(_, leaves)| leaves.len() > b);
        let d = rational::to_f64(&delta);
        let budget = opts.dominating_budget.unwrap_or(((100.0 * (n as f64).ln()) / (d * d)).ceil() as usize);
        let floor = core.key2.as_ref().map_or(0.0, |k| k.degree_floor.max(0.0));
        let nn = Rational::from_integer(n as i64);
        Ok(Main2Plan {
            delta,
            b,
            h,
            in_h,
            h_vertices,
            star,
            dominating_budget: budget,
            degree_floor: floor,
            triangle_threshold: delta * delta * nn / Rational::from_integer(4),
            case1_size: delta * nn / Rational::from_integer(2),
            z_threshold: (n as f64).sqrt() / 4.0,
            core,
            host: Arc::new(g.clone()),
        })
    }

    /// Whether `d` dominates `H`.
    pub fn dominates(&self, d: &[usize]) -> bool {
        let mut mark = vec![false; self.in_h.len()];
        for &x in d {
            mark[x] = true;
            for &w in self.h.neighbors(x) {
                mark[w] = true;
            }
        }
        self.h_vertices.iter().all(|&v| mark[v])
    }
}

/// How a Stage IV claim reduces the number of Maker components.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeCase {
    /// The vertex is adjacent to two or more Maker components.
    Direct,
    /// Closes a triangle in `G` with an anchor edge of a component.
    Triangle,
    /// A neighbour of the first component with many neighbours outside
    /// `U = C ∪ N(C)`; the next claim merges directly.
    Expand,
    /// Closes a triangle at a component far from the first one.
    FarTriangle,
}

impl MergeCase {
    pub fn name(self) -> &'static str {
        match self {
            MergeCase::Direct => "direct",
            MergeCase::Triangle => "triangle",
            MergeCase::Expand => "case1",
            MergeCase::FarTriangle => "case2-triangle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergeStep {
    /// `H[M]` has at most one component.
    Connected,
    Claim { vertex: usize, case: MergeCase },
    /// No qualifying unclaimed vertex.
    Blocked(String),
}

/// The next Stage IV claim for the Maker vertices of `pos`.
pub fn merge_components(plan: &Main2Plan, pos: &Position) -> MergeStep {
    merge_step(plan, &View::new(pos))
}

fn merge_step(plan: &Main2Plan, view: &View) -> MergeStep {
    let n = plan.in_h.len();
    let h = &plan.h;
    let maker: Vec<usize> = view.maker.iter().copied().filter(|&x| plan.in_h[x]).collect();
    let mut dsu = Dsu::new(n);
    for &x in &maker {
        for &w in h.neighbors(x) {
            if view.is_maker(w) {
                dsu.union(x, w);
            }
        }
    }
    let mut roots: Vec<usize> = maker.iter().map(|&x| dsu.find(x)).collect();
    roots.sort_unstable();
    roots.dedup();
    if roots.len() <= 1 {
        return MergeStep::Connected;
    }
    let mut comp = vec![usize::MAX; n];
    for &x in &maker {
        comp[x] = roots.binary_search(&dsu.find(x)).expect("root listed");
    }
    let free_h = || plan.h_vertices.iter().copied().filter(|&x| view.is_free(x));

    let mut best: Option<(usize, usize)> = None;
    for x in free_h() {
        let mut seen: Vec<usize> = h.neighbors(x).iter().filter(|&&w| comp[w] != usize::MAX).map(|&w| comp[w]).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() >= 2 && best.is_none_or(|(c, _)| seen.len() > c) {
            best = Some((seen.len(), x));
        }
    }
    if let Some((_, x)) = best {
        return MergeStep::Claim { vertex: x, case: MergeCase::Direct };
    }

    let comp = &comp;
    let maker = &maker;
    let members = move |c: usize| maker.iter().copied().filter(move |&x| comp[x] == c);
    let anchor_triangle = |c: usize, need: &Rational| -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for x in members(c) {
            for &y in plan.host.neighbors(x) {
                if y <= x || comp[y] != c {
                    continue;
                }
                let common: Vec<usize> = plan
                    .host
                    .neighbors(x)
                    .iter()
                    .copied()
                    .filter(|&z| view.is_free(z) && plan.host.has_edge(y, z))
                    .collect();
                if rational::at_least(common.len(), need) && best.is_none_or(|(k, _)| common.len() > k) {
                    best = Some((common.len(), common[0]));
                }
            }
        }
        best.map(|(_, z)| z)
    };
    for c in 0..roots.len() {
        if let Some(z) = anchor_triangle(c, &plan.triangle_threshold) {
            return MergeStep::Claim { vertex: z, case: MergeCase::Triangle };
        }
    }

    let mut in_u = vec![false; n];
    for x in members(0) {
        in_u[x] = true;
        for &w in h.neighbors(x) {
            in_u[w] = true;
        }
    }
    let outside: usize = plan.h_vertices.iter().filter(|&&x| !in_u[x]).count();
    if rational::at_least(outside, &plan.case1_size) {
        let mut best: Option<(usize, usize)> = None;
        for z in free_h().filter(|&z| in_u[z]) {
            let reach = h.neighbors(z).iter().filter(|&&w| !in_u[w] && view.is_free(w)).count();
            if reach as f64 >= plan.z_threshold && best.is_none_or(|(k, _)| reach > k) {
                best = Some((reach, z));
            }
        }
        if let Some((_, z)) = best {
            return MergeStep::Claim { vertex: z, case: MergeCase::Expand };
        }
    }
    let one = Rational::from_integer(1);
    for c in 1..roots.len() {
        if let Some(z) = anchor_triangle(c, &one) {
            return MergeStep::Claim { vertex: z, case: MergeCase::FarTriangle };
        }
    }
    MergeStep::Blocked("no unclaimed vertex merges two Maker components".into())
}

const STAGE_NAMES: [&str; 4] = ["I", "II", "III", "IV"];

/// Maker for the vertex odd-cycle game on dense graphs of large chromatic
/// number.
///
/// Stage I claims two adjacent vertices `u`, `v` of `A`. Stage II claims
/// random vertices until they dominate `H`. Stage III gives every vertex of
/// `D' = {u, v} ∪ D` a private high-degree neighbour. Stage IV merges the
/// components of `H[M]`; once `u` and `v` are joined by an even path in
/// `H`, the edge `uv` closes an odd cycle.
#[derive(Clone, Debug)]
pub struct Main2Maker {
    plan: Arc<Main2Plan>,
    seed: u64,
    rng: ChaCha8Rng,
    stage: usize,
    u: Option<usize>,
    v: Option<usize>,
    dominating: Vec<usize>,
    secured: Vec<usize>,
    next_secure: usize,
    note: String,
}

impl Main2Maker {
    pub fn new(g: &Graph, delta: Rational, b: usize, opts: Main2Options) -> Result<Self> {
        Ok(Self::from_plan(Arc::new(Main2Plan::new(g, delta, b, &opts)?), opts.seed))
    }

    pub fn from_plan(plan: Arc<Main2Plan>, seed: u64) -> Self {
        Main2Maker {
            plan,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            stage: 0,
            u: None,
            v: None,
            dominating: Vec::new(),
            secured: Vec::new(),
            next_secure: 0,
            note: String::new(),
        }
    }

    pub fn plan(&self) -> &Arc<Main2Plan> {
        &self.plan
    }

    /// The Stage II set claimed so far.
    pub fn dominating_set(&self) -> &[usize] {
        &self.dominating
    }

    fn pick(&mut self, view: &View) -> Result<usize, Forfeit> {
        loop {
            match self.stage {
                0 => {
                    let (center, leaves) =
                        self.plan.star.as_ref().ok_or_else(|| Forfeit::new("G[A] has no star with b+1 leaves"))?;
                    if self.u.is_none() {
                        if !view.is_free(*center) {
                            return Err(Forfeit::new("star center already claimed by Breaker"));
                        }
                        self.u = Some(*center);
                        return Ok(*center);
                    }
                    let leaf = leaves
                        .iter()
                        .copied()
                        .find(|&l| view.is_free(l))
                        .ok_or_else(|| Forfeit::new("every star leaf claimed by Breaker"))?;
                    self.v = Some(leaf);
                    self.stage = 1;
                    return Ok(leaf);
                }
                1 => {
                    if self.plan.dominates(&self.dominating) {
                        self.stage = 2;
                        continue;
                    }
                    if self.dominating.len() >= self.plan.dominating_budget {
                        return Err(Forfeit::new(format!(
                            "Stage II budget {} exhausted before D dominates H",
                            self.plan.dominating_budget
                        )));
                    }
                    let free: Vec<usize> = self.plan.h_vertices.iter().copied().filter(|&x| view.is_free(x)).collect();
                    if free.is_empty() {
                        return Err(Forfeit::new("no unclaimed vertex of H left for Stage II"));
                    }
                    // Uniform over H, resampling claimed vertices.
                    let x = loop {
                        let x = self.plan.h_vertices[self.rng.gen_range(0..self.plan.h_vertices.len())];
                        if view.is_free(x) {
                            break x;
                        }
                    };
                    self.dominating.push(x);
                    return Ok(x);
                }
                2 => {
                    let mut d_prime: Vec<usize> = vec![self.u.expect("stage I done"), self.v.expect("stage I done")];
                    d_prime.extend(self.dominating.iter().copied());
                    let Some(&w) = d_prime.get(self.next_secure) else {
                        self.stage = 3;
                        continue;
                    };
                    let h = &self.plan.h;
                    let z = h
                        .neighbors(w)
                        .iter()
                        .copied()
                        .filter(|z| view.is_free(*z) && !d_prime.contains(z) && !self.secured.contains(z))
                        .filter(|&z| h.degree(z) as f64 >= self.plan.degree_floor)
                        .max_by(|&x, &y| h.degree(x).cmp(&h.degree(y)).then(y.cmp(&x)))
                        .ok_or_else(|| Forfeit::new(format!("no unclaimed high-degree neighbour left for {w}")))?;
                    self.secured.push(z);
                    self.next_secure += 1;
                    return Ok(z);
                }
                _ => {
                    return match merge_step(&self.plan, view) {
                        MergeStep::Claim { vertex, case } => {
                            self.note = format!("stage=IV merge={}", case.name());
                            Ok(vertex)
                        }
                        MergeStep::Connected => view.first_free().ok_or_else(|| Forfeit::new("no unclaimed vertex")),
                        MergeStep::Blocked(reason) => Err(Forfeit::new(reason)),
                    };
                }
            }
        }
    }
}

impl Strategy for Main2Maker {
    fn id(&self) -> String {
        format!("main2(b={},delta={},seed={})", self.plan.b, format_rational(&self.plan.delta), self.seed)
    }

    fn begin(&mut self, _spec: &GameSpec, seed: u64) {
        *self = Self::from_plan(self.plan.clone(), self.seed);
        self.rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, seed));
    }

    fn choose(&mut self, spec: &GameSpec, pos: &Position, count: usize) -> Result<Vec<usize>, Forfeit> {
        if spec.board != BoardKind::Vertex {
            return Err(Forfeit::new("main2 needs a vertex board"));
        }
        let mut view = View::new(pos);
        let mut picks = Vec::with_capacity(count);
        for _ in 0..count {
            self.note = format!("stage={}", STAGE_NAMES[self.stage]);
            let x = self.pick(&view)?;
            view.take(x, Player::Maker);
            picks.push(x);
        }
        Ok(picks)
    }

    fn note(&self) -> Option<String> {
        Some(self.note.clone())
    }

    fn stage(&self) -> usize {
        self.stage
    }

    /// A Maker triangle of `G` if one exists, else a shortest Maker path
    /// from `u` to `v` in `H` closed by the edge `uv`.
    fn preferred_witness(&self, spec: &GameSpec, pos: &Position) -> Option<Witness> {
        let g = &spec.host;
        let mut mine = vec![false; g.n()];
        for &x in pos.maker_claims() {
            mine[x] = true;
        }
        let mut claims = pos.maker_claims().to_vec();
        claims.sort_unstable();
        for &x in &claims {
            for &y in g.neighbors(x).iter().filter(|&&y| y > x && mine[y]) {
                if let Some(&z) = g.neighbors(y).iter().find(|&&z| z > y && mine[z] && g.has_edge(x, z)) {
                    return Some(Witness::OddCycle(OddCycleWitness { vertices: vec![x, y, z] }));
                }
            }
        }
        let (u, v) = (self.u?, self.v?);
        if !mine[u] || !mine[v] {
            return None;
        }
        let path = maker_path(&self.plan.h, &mine, u, v)?;
        (path.len() % 2 == 1).then(|| Witness::OddCycle(OddCycleWitness { vertices: path }))
    }

    fn box_clone(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

/// Breadth-first shortest path from `u` to `v` through Maker vertices.
fn maker_path(h: &Graph, mine: &[bool], u: usize, v: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; h.n()];
    prev[u] = u;
    let mut queue = std::collections::VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            let mut path = vec![v];
            let mut cur = v;
            while cur != u {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in h.neighbors(x) {
            if mine[w] && prev[w] == usize::MAX {
                prev[w] = x;
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, WinPredicate};
    use crate::strategies::RandomBreaker;

    fn multipartite(m: usize, r: usize) -> Graph {
        let n = m * r;
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).filter(move |&v| u / m != v / m).map(move |v| (u, v))))
            .unwrap()
    }

    #[test]
    fn wins_on_complete_multipartite() {
        let g = multipartite(6, 8);
        let opts = Main2Options { force: true, seed: 1, dominating_budget: None };
        let maker = Main2Maker::new(&g, Rational::new(7, 8), 1, opts).unwrap();
        let spec = GameSpec::new(g, BoardKind::Vertex, 1, 1, WinPredicate::OddCycle).unwrap();
        for seed in 0..10 {
            let r = play(&spec, &mut maker.clone(), &mut RandomBreaker::new(seed), seed);
            assert!(r.maker_won(), "seed {seed}: {:?}", r.forfeit);
            let end = r.transcript.verify(&spec).unwrap();
            assert!(r.witness.as_ref().unwrap().validate(&spec, end.maker_claims()));
        }
    }

    #[test]
    fn merge_of_two_singletons_takes_common_neighbour() {
        let g = multipartite(6, 8);
        let opts = Main2Options { force: true, seed: 1, dominating_budget: None };
        let plan = Main2Plan::new(&g, Rational::new(7, 8), 1, &opts).unwrap();
        let spec = GameSpec::new(plan.h.clone(), BoardKind::Vertex, 1, 1, WinPredicate::OddCycle).unwrap();
        let (x, y) = {
            let a = plan.core.a.members()[0];
            (a, plan.core.a.members()[1])
        };
        let mut pos = Position::new(&spec);
        pos.claim(&spec, Player::Maker, &[x], None).unwrap();
        let free = (0..g.n()).find(|&w| w != x && w != y).unwrap();
        pos.claim(&spec, Player::Breaker, &[free], None).unwrap();
        pos.claim(&spec, Player::Maker, &[y], None).unwrap();
        match merge_components(&plan, &pos) {
            MergeStep::Claim { vertex, case: MergeCase::Direct } => {
                assert!(plan.h.has_edge(x, vertex) && plan.h.has_edge(y, vertex));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn connected_maker_set_is_a_no_op() {
        let g = multipartite(6, 8);
        let opts = Main2Options { force: true, seed: 1, dominating_budget: None };
        let plan = Main2Plan::new(&g, Rational::new(7, 8), 1, &opts).unwrap();
        let spec = GameSpec::new(plan.h.clone(), BoardKind::Vertex, 1, 1, WinPredicate::OddCycle).unwrap();
        let mut pos = Position::new(&spec);
        pos.claim(&spec, Player::Maker, &[plan.core.a.members()[0]], None).unwrap();
        assert_eq!(merge_components(&plan, &pos), MergeStep::Connected);
    }

    #[test]
    fn bipartite_host_with_force_forfeits() {
        let g = Graph::from_edges(24, (0..12).flat_map(|u| (12..24).map(move |v| (u, v)))).unwrap();
        let opts = Main2Options { force: true, seed: 0, dominating_budget: None };
        match Main2Maker::new(&g, Rational::new(1, 2), 1, opts) {
            Err(_) => {}
            Ok(maker) => {
                let spec = GameSpec::new(g, BoardKind::Vertex, 1, 1, WinPredicate::OddCycle).unwrap();
                let r = play(&spec, &mut maker.clone(), &mut RandomBreaker::new(0), 0);
                assert!(!r.maker_won());
                assert!(r.forfeit.is_some());
            }
        }
    }
}
