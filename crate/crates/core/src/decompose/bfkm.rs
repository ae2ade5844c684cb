use crate::graph::{
    induced_on, mader_subgraph, min_degree, vertex_connectivity, vertex_connectivity_at_least, Graph, VertexSet,
};
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Parts up to this size get their exact connectivity recorded.
pub const EXACT_KAPPA_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartCertificate {
    pub size: usize,
    /// `|V_i| ≥ k/8`, checked exactly.
    pub size_bound_met: bool,
    /// Verified lower bound on the vertex connectivity of the induced part;
    /// exact for parts of at most [`EXACT_KAPPA_LIMIT`] vertices.
    pub certified_connectivity: usize,
}

/// A partition of `V(H)` into highly connected parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub parts: Vec<VertexSet>,
    pub certificates: Vec<PartCertificate>,
    /// The minimum-degree parameter the partition was built for.
    pub k: usize,
    /// `⌈k²/16n⌉`, the connectivity every part is certified against.
    pub connectivity_target: usize,
}

impl Partition {
    pub fn part_of(&self) -> Vec<usize> {
        let n = self.parts.first().map_or(0, VertexSet::universe);
        let mut owner = vec![usize::MAX; n];
        for (i, p) in self.parts.iter().enumerate() {
            for v in p.iter() {
                owner[v] = i;
            }
        }
        owner
    }
}

/// Partitions `h` (with `δ(h) ≥ k > 0`) into parts of at least `k/8`
/// vertices, each inducing a `⌈k²/16n⌉`-vertex-connected subgraph.
///
/// Two phases: grow a maximal family of disjoint `⌈k/8⌉`-connected cores
/// with [`mader_subgraph`], then absorb every outside vertex with at least
/// `k²/16n` neighbors in some part (lowest part first). When absorption
/// stalls, the leftover vertices have minimum degree above `k/2` among
/// themselves, so a fresh core is seeded from them.
pub fn bfkm_partition(h: &Graph, k: usize) -> Result<Partition> {
    let n = h.n();
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let delta_h = min_degree(h)?;
    if delta_h < k {
        return Err(Error::domain(format!("minimum degree {delta_h} is below k = {k}")));
    }
    let absorb_bound = Rational::new((k * k) as i64, (16 * n) as i64);
    let target = rational::ceil(&absorb_bound).max(1) as usize;
    let core_degree = Rational::new(k as i64, 2);

    let mut owner = vec![usize::MAX; n];
    let mut parts: Vec<Vec<usize>> = Vec::new();

    // Phase 1: disjoint cores.
    loop {
        let rest: Vec<usize> = (0..n).filter(|&v| owner[v] == usize::MAX).collect();
        match find_core(h, &rest, core_degree, target, k) {
            Some(core) => {
                for &v in &core {
                    owner[v] = parts.len();
                }
                parts.push(core);
            }
            None => break,
        }
    }

    // Phase 2: absorb, re-seeding when stalled.
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if owner[v] != usize::MAX {
                    continue;
                }
                let mut counts = vec![0usize; parts.len()];
                for &w in h.neighbors(v) {
                    if owner[w] != usize::MAX {
                        counts[owner[w]] += 1;
                    }
                }
                if let Some(i) = counts.iter().position(|&c| c >= target) {
                    owner[v] = i;
                    parts[i].push(v);
                    changed = true;
                }
            }
        }
        let rest: Vec<usize> = (0..n).filter(|&v| owner[v] == usize::MAX).collect();
        if rest.is_empty() {
            break;
        }
        let core = find_core(h, &rest, core_degree, target, k).ok_or_else(|| {
            Error::Internal(format!("{} vertices left unabsorbed and no core found among them", rest.len()))
        })?;
        for &v in &core {
            owner[v] = parts.len();
        }
        parts.push(core);
    }

    let mut out = Partition { parts: Vec::new(), certificates: Vec::new(), k, connectivity_target: target };
    for mut part in parts {
        part.sort_unstable();
        let size_bound_met = 8 * part.len() >= k;
        let (sub, _) = induced_on(h, &part);
        let kappa = if sub.n() < 2 {
            0
        } else if sub.n() <= EXACT_KAPPA_LIMIT {
            vertex_connectivity(&sub)?
        } else if vertex_connectivity_at_least(&sub, target)? {
            target
        } else {
            0
        };
        if !size_bound_met || kappa < target {
            return Err(Error::Internal(format!(
                "part of size {} failed certification (κ = {kappa}, target {target})",
                part.len()
            )));
        }
        out.certificates.push(PartCertificate { size: part.len(), size_bound_met, certified_connectivity: kappa });
        out.parts.push(VertexSet::new(n, part)?);
    }
    Ok(out)
}

/// A `⌈k/8⌉`-connected set among `rest`; failing that, any `target`-connected
/// set with at least `k/8` vertices.
fn find_core(h: &Graph, rest: &[usize], core_degree: Rational, target: usize, k: usize) -> Option<Vec<usize>> {
    if rest.is_empty() {
        return None;
    }
    let (sub, map) = induced_on(h, rest);
    if let Some(s) = mader_subgraph(&sub, core_degree) {
        return Some(s.iter().map(|i| map[i]).collect());
    }
    let s = mader_subgraph(&sub, Rational::from_integer(4 * target as i64))?;
    (8 * s.len() >= k).then(|| s.iter().map(|i| map[i]).collect())
}
