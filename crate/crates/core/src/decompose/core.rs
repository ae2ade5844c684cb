use super::bfkm::bfkm_partition;
use super::cutsearch::CutSearchConfig;
use super::robust::robust_partition_with;
use crate::graph::{
    find_odd_cycle, induced_on, is_k_colorable_budgeted, min_degree, unfriendly_partition, Graph, VertexSet,
};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Node budget for the exact colorability checks run on hypotheses.
pub const DEFAULT_COLOR_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoreOptions {
    /// Skip the chromatic-number hypothesis check.
    pub force: bool,
    pub seed: u64,
    pub color_budget: Option<u64>,
    /// For [`key2_extract_with`]: when no part has a side that is not
    /// `(b+1)`-colorable, return the first part uncertified instead of failing.
    pub allow_uncertified: bool,
}

impl Default for CoreOptions {
    fn default() -> Self {
        Self { force: false, seed: 0, color_budget: Some(DEFAULT_COLOR_BUDGET), allow_uncertified: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Key2Stats {
    pub min_degree_h: usize,
    /// `(δ/2)²n`, the certified lower bound on `δ(H)`.
    pub min_degree_bound: Rational,
    pub low_degree_count: usize,
    pub low_degree_budget: f64,
    pub degree_floor: f64,
    pub sparsest_balanced_cut: Option<usize>,
    pub cut_search_exhaustive: bool,
}

/// Disjoint `A`, `B` whose cross edges form a highly connected bipartite
/// graph `H`, with either an edge inside `A` or `χ(G[A])` certified large.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteCore {
    pub a: VertexSet,
    pub b: VertexSet,
    /// An edge of the host with both ends in `a`, lowest first.
    pub witness_edge: Option<(usize, usize)>,
    /// Verified lower bound on the vertex connectivity of `H`.
    pub certified_connectivity: usize,
    /// The connectivity bound the construction promises.
    pub connectivity_target: usize,
    /// When set, `χ(G[A])` is verified to exceed this value.
    pub chromatic_lower_bound: Option<usize>,
    pub key2: Option<Key2Stats>,
}

impl BipartiteCore {
    pub fn vertices(&self) -> VertexSet {
        self.a.union(&self.b)
    }

    /// `H = (A ∪ B, E_G(A, B))` as a spanning subgraph of `g`.
    pub fn bipartite_graph(&self, g: &Graph) -> Graph {
        g.filter_edges(|u, v| {
            (self.a.contains(u) && self.b.contains(v)) || (self.b.contains(u) && self.a.contains(v))
        })
    }
}

pub fn extract_bipartite_core(g: &Graph, delta: Rational, force: bool) -> Result<BipartiteCore> {
    extract_bipartite_core_with(g, delta, &CoreOptions { force, ..CoreOptions::default() })
}

/// Finds a bipartite core with a witness edge inside `A`.
///
/// Requires `δ(g) ≥ δn` and, unless `force`, `χ(g) > 32/δ`. Takes an
/// unfriendly partition, drops the edges inside its sides, partitions the
/// remainder with [`bfkm_partition`] at `k = ⌈δn/2⌉`, and returns the first
/// part that is not 2-colorable in `g`, oriented so that `A` spans an edge.
pub fn extract_bipartite_core_with(g: &Graph, delta: Rational, opts: &CoreOptions) -> Result<BipartiteCore> {
    rational::check_unit_interval(&delta)?;
    let n = g.n();
    let delta_n = delta * Rational::from_integer(n as i64);
    check_min_degree(g, delta_n)?;
    if !opts.force {
        let threshold = Rational::from_integer(32) / delta;
        if !chi_exceeds(g, threshold, opts.color_budget)? {
            return Err(Error::precondition(format!(
                "χ(G) ≤ 32/δ = {}",
                rational::format_rational(&threshold)
            )));
        }
    }
    let (x1, _) = unfriendly_partition(g);
    let reduced = g.filter_edges(|u, v| x1.contains(u) != x1.contains(v));
    let k = rational::ceil(&(delta_n / Rational::from_integer(2))) as usize;
    let partition = bfkm_partition(&reduced, k)?;
    let target = rational::ceil(&(delta * delta_n / Rational::from_integer(64))) as usize;

    for (part, cert) in partition.parts.iter().zip(&partition.certificates) {
        let (sub, _) = induced_on(g, part.members());
        if find_odd_cycle(&sub).is_bipartite() {
            continue;
        }
        let (side1, side2): (Vec<usize>, Vec<usize>) = part.iter().partition(|&v| x1.contains(v));
        let inside = |side: &[usize]| {
            side.iter()
                .flat_map(|&u| g.neighbors(u).iter().map(move |&w| (u, w)))
                .filter(|&(u, w)| u < w && side.binary_search(&w).is_ok())
                .min()
        };
        let (a, b, e) = match inside(&side1) {
            Some(e) => (side1, side2, e),
            None => {
                let e = inside(&side2).ok_or_else(|| Error::Internal("odd cycle without an intra-side edge".into()))?;
                (side2, side1, e)
            }
        };
        if cert.certified_connectivity < target {
            return Err(Error::Internal(format!(
                "core connectivity {} below δ²n/64 = {target}",
                cert.certified_connectivity
            )));
        }
        return Ok(BipartiteCore {
            a: VertexSet::new(n, a)?,
            b: VertexSet::new(n, b)?,
            witness_edge: Some(e),
            certified_connectivity: cert.certified_connectivity,
            connectivity_target: target,
            chromatic_lower_bound: Some(2),
            key2: None,
        });
    }
    Err(Error::precondition("no non-2-colorable part"))
}

pub fn key2_extract(g: &Graph, delta: Rational, b: usize, force: bool, seed: u64) -> Result<BipartiteCore> {
    key2_extract_with(g, delta, b, &CoreOptions { force, seed, ..CoreOptions::default() })
}

/// Finds a bipartite core whose `A` side is not `(b+1)`-colorable.
///
/// Requires `δ(g) ≥ δn`, `2(b+1)/δ < n` and, unless `force`,
/// `χ(g) > 2(b+1)/δ`. Takes an unfriendly partition, drops the edges inside
/// its sides, runs [`robust_partition`](super::robust_partition) on the
/// remainder with `δ/2`, and returns the first part with a side that is not
/// `(b+1)`-colorable in `g` (first side of the unfriendly partition tried
/// first). The minimum degree of `H` is certified against `(δ/2)²n`.
pub fn key2_extract_with(g: &Graph, delta: Rational, b: usize, opts: &CoreOptions) -> Result<BipartiteCore> {
    rational::check_unit_interval(&delta)?;
    if b == 0 {
        return Err(Error::domain("bias b must be positive"));
    }
    let n = g.n();
    let delta_n = delta * Rational::from_integer(n as i64);
    check_min_degree(g, delta_n)?;
    let threshold = Rational::from_integer(2 * (b as i64 + 1)) / delta;
    if threshold >= Rational::from_integer(n as i64) {
        return Err(Error::precondition(format!(
            "2(b+1)/δ = {} is not below n = {n}",
            rational::format_rational(&threshold)
        )));
    }
    if !opts.force && !chi_exceeds(g, threshold, opts.color_budget)? {
        return Err(Error::precondition(format!("χ(G) ≤ 2(b+1)/δ = {}", rational::format_rational(&threshold))));
    }
    let (x1, _) = unfriendly_partition(g);
    let reduced = g.filter_edges(|u, v| x1.contains(u) != x1.contains(v));
    let half = delta / Rational::from_integer(2);
    let cfg = CutSearchConfig { seed: opts.seed, ..CutSearchConfig::default() };
    let robust = robust_partition_with(&reduced, half, &cfg)?;

    let mut chosen = None;
    'parts: for (i, part) in robust.parts.iter().enumerate() {
        let (s1, s2): (Vec<usize>, Vec<usize>) = part.iter().partition(|&v| x1.contains(v));
        for (a, bb) in [(&s1, &s2), (&s2, &s1)] {
            let (sub, _) = induced_on(g, a);
            if is_k_colorable_budgeted(&sub, b + 1, opts.color_budget)?.is_none() {
                chosen = Some((i, a.clone(), bb.clone(), Some(b + 1)));
                break 'parts;
            }
        }
    }
    if chosen.is_none() && opts.allow_uncertified {
        if let Some(part) = robust.parts.first() {
            let (s1, s2): (Vec<usize>, Vec<usize>) = part.iter().partition(|&v| x1.contains(v));
            chosen = Some((0, s1, s2, None));
        }
    }
    let (i, a, bb, chi) = chosen.ok_or_else(|| Error::precondition("no part has a side that is not (b+1)-colorable"))?;

    let part = &robust.parts[i];
    let pstats = &robust.stats.parts[i];
    let (h, _) = induced_on(&reduced, part.members());
    let min_degree_h = if h.n() == 0 { 0 } else { min_degree(&h)? };
    let bound = half * half * Rational::from_integer(n as i64);
    if !rational::at_least(min_degree_h, &bound) {
        return Err(Error::Internal(format!("δ(H) = {min_degree_h} below (δ/2)²n")));
    }
    let a = VertexSet::new(n, a)?;
    let witness_edge = g.edges().iter().copied().find(|&(u, v)| a.contains(u) && a.contains(v));
    Ok(BipartiteCore {
        a,
        b: VertexSet::new(n, bb)?,
        witness_edge,
        certified_connectivity: usize::from(h.n() >= 2 && h.is_connected()),
        connectivity_target: 1,
        chromatic_lower_bound: chi,
        key2: Some(Key2Stats {
            min_degree_h,
            min_degree_bound: bound,
            low_degree_count: pstats.low_degree_count,
            low_degree_budget: robust.stats.exception_budget,
            degree_floor: robust.stats.degree_floor,
            sparsest_balanced_cut: pstats.sparsest_balanced_cut,
            cut_search_exhaustive: pstats.cut_search_exhaustive,
        }),
    })
}

fn check_min_degree(g: &Graph, delta_n: Rational) -> Result<()> {
    let d = min_degree(g)?;
    if Rational::from_integer(d as i64) < delta_n {
        return Err(Error::precondition(format!(
            "minimum degree {d} is below δn = {}",
            rational::format_rational(&delta_n)
        )));
    }
    Ok(())
}

/// Whether `χ(g) > threshold`, i.e. `g` is not `⌊threshold⌋`-colorable.
fn chi_exceeds(g: &Graph, threshold: Rational, budget: Option<u64>) -> Result<bool> {
    let k = rational::floor(&threshold).max(0) as usize;
    if k >= g.n() {
        return Ok(false);
    }
    match is_k_colorable_budgeted(g, k, budget) {
        Ok(c) => Ok(c.is_none()),
        Err(Error::Resource(msg)) => {
            Err(Error::Resource(format!("cannot decide χ(G) > {}: {msg}", rational::format_rational(&threshold))))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn multipartite(m: usize, r: usize) -> Graph {
        let n = m * r;
        let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| u / m != v / m).map(move |v| (u, v)));
        Graph::from_edges(n, edges).unwrap()
    }

    fn c5_blowup(m: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            let j = (i + 1) % 5;
            for x in 0..m {
                for y in 0..m {
                    edges.push((i * m + x, j * m + y));
                }
            }
        }
        Graph::from_edges_dedup(5 * m, edges).unwrap()
    }

    #[test]
    fn low_chromatic_number_is_rejected() {
        let g = c5_blowup(4);
        let r = extract_bipartite_core(&g, Rational::new(2, 5), false);
        assert!(matches!(r, Err(Error::Precondition(_))), "{r:?}");
    }

    #[test]
    fn tripartite_core_with_force() {
        let g = multipartite(6, 3);
        let core = extract_bipartite_core(&g, Rational::new(2, 3), true).unwrap();
        assert!(core.a.is_disjoint(&core.b));
        let (u, v) = core.witness_edge.unwrap();
        assert!(g.has_edge(u, v) && core.a.contains(u) && core.a.contains(v));
        let h = core.bipartite_graph(&g);
        assert!(find_odd_cycle(&h).is_bipartite());
        assert!(core.certified_connectivity >= core.connectivity_target);
    }

    #[test]
    fn bipartite_host_has_no_core() {
        let g = multipartite(6, 2);
        let r = extract_bipartite_core(&g, Rational::new(1, 2), true);
        assert!(matches!(r, Err(Error::Precondition(ref m)) if m.contains("non-2-colorable")), "{r:?}");
        let r = key2_extract(&g, Rational::new(1, 2), 1, true, 0);
        assert!(matches!(r, Err(Error::Precondition(_))), "{r:?}");
    }

    #[test]
    fn key2_on_multipartite() {
        let g = multipartite(5, 8);
        let delta = Rational::new(7, 8);
        let core = key2_extract(&g, delta, 1, false, 1).unwrap();
        let (sub, _) = induced_on(&g, core.a.members());
        assert!(is_k_colorable_budgeted(&sub, 2, None).unwrap().is_none());
        assert_eq!(core.chromatic_lower_bound, Some(2));
        let stats = core.key2.unwrap();
        assert!(rational::at_least(stats.min_degree_h, &stats.min_degree_bound));
    }

    #[test]
    fn key2_threshold_at_n_is_rejected() {
        let g = Graph::complete(6);
        let r = key2_extract(&g, Rational::new(1, 2), 1, true, 0);
        assert!(matches!(r, Err(Error::Precondition(ref m)) if m.contains("not below n")), "{r:?}");
    }
}
