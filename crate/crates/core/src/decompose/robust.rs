use super::cutsearch::{find_sparse_balanced_cut, CutSearch, CutSearchConfig};
use crate::graph::{min_degree, Graph, VertexSet};
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PartStats {
    pub size: usize,
    pub min_internal_degree: usize,
    /// Vertices whose degree inside the part is below `degree_floor`.
    pub low_degree_count: usize,
    /// Sparsest balanced cut seen by the last search on this part.
    pub sparsest_balanced_cut: Option<usize>,
    pub cut_search_exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustStats {
    pub splits: usize,
    /// `⌈1/δ⌉`.
    pub split_bound: usize,
    /// Vertices of `U` that changed part during relocation.
    pub relocations: usize,
    /// Further moves needed after relocation to restore `d(v, part) ≥ δ²n`.
    pub repairs: usize,
    /// `2n^{3/4}/δ`.
    pub exception_budget: f64,
    /// `δn − ⌈1/δ⌉·n^{3/4}`.
    pub degree_floor: f64,
    pub parts: Vec<PartStats>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustPartition {
    pub parts: Vec<VertexSet>,
    /// Vertices that lost more than `n^{3/4}` of their degree in a split.
    pub moved_vertices: VertexSet,
    pub stats: RobustStats,
}

impl RobustPartition {
    pub fn part_of(&self) -> Vec<usize> {
        let mut owner = vec![usize::MAX; self.moved_vertices.universe()];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                owner[v] = i;
            }
        }
        owner
    }
}

pub fn robust_partition(g: &Graph, delta: Rational, seed: u64) -> Result<RobustPartition> {
    robust_partition_with(g, delta, &CutSearchConfig { seed, ..CutSearchConfig::default() })
}

/// Splits `V(g)` along balanced sparse cuts until none is found.
///
/// A cut of part `V_i` is balanced when both sides have at least `δn`
/// vertices and sparse when it has fewer than `n^{3/2}` crossing edges.
/// Vertices whose degree drops by more than `n^{3/4}` in a split join `U`.
/// Once no part splits, each vertex of `U` moves to the lowest-index part
/// where it has at least `δ²n` neighbors; any vertex still short of that
/// bound is moved the same way until every vertex satisfies it.
pub fn robust_partition_with(g: &Graph, delta: Rational, cfg: &CutSearchConfig) -> Result<RobustPartition> {
    rational::check_unit_interval(&delta)?;
    let n = g.n();
    let dmin = min_degree(g)?;
    let delta_n = delta * Rational::from_integer(n as i64);
    if Rational::from_integer(dmin as i64) < delta_n {
        return Err(Error::precondition(format!("minimum degree {dmin} is below δn = {delta_n}")));
    }
    let min_side = rational::ceil(&delta_n) as usize;
    let sq_bound = delta * delta * Rational::from_integer(n as i64);

    let mut parts: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut searched: Vec<Option<CutSearch>> = vec![None];
    let mut in_u = vec![false; n];
    let mut splits = 0usize;
    let mut owner = vec![0usize; n];

    'outer: loop {
        for i in 0..parts.len() {
            if searched[i].is_some() {
                continue;
            }
            let part_cfg = CutSearchConfig { seed: mix(cfg.seed, splits as u64, i as u64), ..*cfg };
            let found =
                find_sparse_balanced_cut(g, &parts[i], min_side, |c| rational::below_n_three_halves(c, n), &part_cfg);
            if !found.accepted {
                searched[i] = Some(found);
                continue;
            }
            let (_, side) = found.best.expect("accepted cut has a side");
            let mut in_side = vec![false; n];
            for &v in &side {
                in_side[v] = true;
            }
            let (mut a, mut b): (Vec<usize>, Vec<usize>) = parts[i].iter().partition(|&&v| in_side[v]);
            if a[0] > b[0] {
                std::mem::swap(&mut a, &mut b);
            }
            let mut in_part = vec![false; n];
            for &v in &parts[i] {
                in_part[v] = true;
            }
            for &v in &parts[i] {
                let whole = g.degree_into(v, &in_part);
                let kept = g.neighbors(v).iter().filter(|&&w| in_part[w] && in_side[w] == in_side[v]).count();
                if rational::above_n_three_quarters(whole - kept, n) {
                    in_u[v] = true;
                }
            }
            parts[i] = a;
            parts.insert(i + 1, b);
            searched[i] = None;
            searched.insert(i + 1, None);
            splits += 1;
            continue 'outer;
        }
        break;
    }

    for (i, p) in parts.iter().enumerate() {
        for &v in p {
            owner[v] = i;
        }
    }
    let t = parts.len();
    let counts = |v: usize, owner: &[usize]| {
        let mut c = vec![0usize; t];
        for &w in g.neighbors(v) {
            c[owner[w]] += 1;
        }
        c
    };
    let target = |c: &[usize]| c.iter().position(|&d| rational::at_least(d, &sq_bound));

    let mut relocations = 0;
    for v in 0..n {
        if !in_u[v] {
            continue;
        }
        let c = counts(v, &owner);
        let j = target(&c).ok_or_else(|| {
            Error::precondition(format!("vertex {v} has fewer than δ²n neighbors in every part"))
        })?;
        if j != owner[v] {
            owner[v] = j;
            relocations += 1;
        }
    }
    let mut repairs = 0;
    loop {
        let mut moved = false;
        for v in 0..n {
            let c = counts(v, &owner);
            if rational::at_least(c[owner[v]], &sq_bound) {
                continue;
            }
            let j = target(&c).ok_or_else(|| {
                Error::precondition(format!("vertex {v} has fewer than δ²n neighbors in every part"))
            })?;
            owner[v] = j;
            repairs += 1;
            moved = true;
        }
        if !moved {
            break;
        }
    }

    let n34 = (n as f64).powf(0.75);
    let inv = rational::ceil(&delta.recip()) as usize;
    let degree_floor = rational::to_f64(&delta_n) - inv as f64 * n34;
    let exception_budget = 2.0 * n34 / rational::to_f64(&delta);
    let mut out_parts = Vec::new();
    let mut stats = Vec::new();
    for (i, search) in searched.into_iter().enumerate() {
        let members: Vec<usize> = (0..n).filter(|&v| owner[v] == i).collect();
        if members.is_empty() {
            continue;
        }
        let mask: Vec<bool> = (0..n).map(|v| owner[v] == i).collect();
        let degs: Vec<usize> = members.iter().map(|&v| g.degree_into(v, &mask)).collect();
        let search = search.unwrap_or_default();
        stats.push(PartStats {
            size: members.len(),
            min_internal_degree: degs.iter().copied().min().unwrap_or(0),
            low_degree_count: degs.iter().filter(|&&d| (d as f64) < degree_floor).count(),
            sparsest_balanced_cut: search.best.map(|b| b.0),
            cut_search_exhaustive: search.exhaustive,
        });
        out_parts.push(VertexSet::new(n, members)?);
    }

    for (p, s) in out_parts.iter().zip(&stats) {
        if !rational::at_least(s.min_internal_degree, &sq_bound) {
            return Err(Error::Internal(format!("part {:?} has internal minimum degree below δ²n", p.members())));
        }
    }
    Ok(RobustPartition {
        parts: out_parts,
        moved_vertices: VertexSet::new(n, (0..n).filter(|&v| in_u[v]))?,
        stats: RobustStats {
            splits,
            split_bound: inv,
            relocations,
            repairs,
            exception_budget,
            degree_floor,
            parts: stats,
        },
    })
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_cliques(m: usize) -> Graph {
        let edges = (0..m).flat_map(|u| (u + 1..m).flat_map(move |v| [(u, v), (u + m, v + m)]));
        Graph::from_edges(2 * m, edges).unwrap()
    }

    #[test]
    fn complete_graph_with_only_even_bisections_stays_whole() {
        // With sides of at least 8 the only balanced cut of K16 is 8/8 with 64 = 16^{3/2} edges.
        let r = robust_partition(&Graph::complete(16), Rational::new(1, 2), 0).unwrap();
        assert_eq!(r.parts.len(), 1);
        assert_eq!(r.stats.splits, 0);
        assert_eq!(r.stats.parts[0].sparsest_balanced_cut, Some(64));
    }

    #[test]
    fn complete_graph_with_small_sides_splits() {
        // Sides of 4 allow a 4/12 cut with 48 < 64 crossing edges.
        let r = robust_partition(&Graph::complete(16), Rational::new(1, 4), 0).unwrap();
        assert!(r.stats.splits >= 1 && r.stats.splits <= 4);
    }

    #[test]
    fn two_cliques_separate() {
        let g = two_cliques(12);
        let r = robust_partition(&g, Rational::new(1, 3), 0).unwrap();
        let sets: Vec<Vec<usize>> = r.parts.iter().map(|p| p.members().to_vec()).collect();
        assert_eq!(sets, vec![(0..12).collect::<Vec<_>>(), (12..24).collect()]);
        assert_eq!(r.stats.splits, 1);
        assert!(r.moved_vertices.is_empty());
    }

    #[test]
    fn below_sixteen_every_balanced_cut_is_sparse() {
        // n^{3/2} > n²/4 here, so any part with room for two balanced sides splits.
        let g = Graph::cycle(10);
        let r = robust_partition(&g, Rational::new(1, 5), 0).unwrap();
        assert!(r.stats.splits >= 1 && r.stats.splits <= r.stats.split_bound);
        let owner = r.part_of();
        for v in g.vertices() {
            assert!(g.neighbors(v).iter().any(|&w| owner[w] == owner[v]));
        }
    }

    #[test]
    fn too_few_vertices_for_two_sides() {
        let r = robust_partition(&Graph::complete(5), Rational::new(1, 2), 0).unwrap();
        assert_eq!(r.parts.len(), 1);
        assert_eq!(r.stats.parts[0].sparsest_balanced_cut, None);
    }

    #[test]
    fn rejects_low_min_degree() {
        assert!(matches!(
            robust_partition(&Graph::path(6), Rational::new(1, 2), 0),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(robust_partition(&Graph::complete(4), Rational::new(3, 2), 0), Err(Error::Domain(_))));
    }
}
