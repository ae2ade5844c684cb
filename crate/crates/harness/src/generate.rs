//! Host graph families and a small textual syntax for them.
//!
//! ```text
//! gnp(40,1/2)                 G(n, p)
//! multipartite(40x7)          K(40,…,40) with 7 parts
//! multipartite(3,4,5)         K(3,4,5)
//! blowup(5,20)                C5 with every vertex replaced by 20 independent copies
//! regular(30,6)               random 6-regular graph on 30 vertices
//! complete(6) cycle(5) path(4)
//! union(A;B) join(A;B)        disjoint union, and union plus all cross edges
//! ```

use std::fmt;

use mb_core::graph::min_degree;
use mb_core::rational::{format_rational, parse_rational, to_f64};
use mb_core::{Graph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config, Result};

const REGULAR_ATTEMPTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Gnp { n: usize, p: Rational },
    Multipartite { sizes: Vec<usize> },
    OddCycleBlowup { cycle: usize, m: usize },
    RandomRegular { n: usize, d: usize },
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Union(Box<Family>, Box<Family>),
    Join(Box<Family>, Box<Family>),
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| config(format!("generator `{s}` is missing `(`")))?;
        if !s.ends_with(')') {
            return Err(config(format!("generator `{s}` is missing `)`")));
        }
        let name = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let ints = |want: usize| -> Result<Vec<usize>> {
            let vals: Vec<usize> = body
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| config(format!("`{t}` is not a count in `{s}`"))))
                .collect::<Result<_>>()?;
            if vals.len() != want {
                return Err(config(format!("`{name}` takes {want} argument(s), got {}", vals.len())));
            }
            Ok(vals)
        };
        match name {
            "gnp" => {
                let (n, p) = body.split_once(',').ok_or_else(|| config("gnp takes n and p"))?;
                let n = n.trim().parse().map_err(|_| config(format!("bad n in `{s}`")))?;
                let p = parse_rational(p.trim())?;
                Ok(Family::Gnp { n, p })
            }
            "multipartite" => {
                let sizes = if let Some((m, r)) = body.split_once('x') {
                    let m: usize = m.trim().parse().map_err(|_| config(format!("bad part size in `{s}`")))?;
                    let r: usize = r.trim().parse().map_err(|_| config(format!("bad part count in `{s}`")))?;
                    vec![m; r]
                } else {
                    let k = body.split(',').count();
                    ints(k)?
                };
                Ok(Family::Multipartite { sizes })
            }
            "blowup" => {
                let v = ints(2)?;
                Ok(Family::OddCycleBlowup { cycle: v[0], m: v[1] })
            }
            "regular" => {
                let v = ints(2)?;
                Ok(Family::RandomRegular { n: v[0], d: v[1] })
            }
            "complete" => Ok(Family::Complete(ints(1)?[0])),
            "cycle" => Ok(Family::Cycle(ints(1)?[0])),
            "path" => Ok(Family::Path(ints(1)?[0])),
            "union" | "join" => {
                let (a, b) = split_top_level(body).ok_or_else(|| config(format!("`{name}` takes two graphs: `{s}`")))?;
                let (a, b) = (Box::new(Family::parse(a)?), Box::new(Family::parse(b)?));
                Ok(if name == "union" { Family::Union(a, b) } else { Family::Join(a, b) })
            }
            other => Err(config(format!("unknown graph family `{other}`"))),
        }
    }

    pub fn is_random(&self) -> bool {
        match self {
            Family::Gnp { .. } | Family::RandomRegular { .. } => true,
            Family::Union(a, b) | Family::Join(a, b) => a.is_random() || b.is_random(),
            _ => false,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gnp { n, p } => write!(f, "gnp({n},{})", format_rational(p)),
            Family::Multipartite { sizes } => {
                write!(f, "multipartite({})", sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","))
            }
            Family::OddCycleBlowup { cycle, m } => write!(f, "blowup({cycle},{m})"),
            Family::RandomRegular { n, d } => write!(f, "regular({n},{d})"),
            Family::Complete(n) => write!(f, "complete({n})"),
            Family::Cycle(n) => write!(f, "cycle({n})"),
            Family::Path(n) => write!(f, "path({n})"),
            Family::Union(a, b) => write!(f, "union({a};{b})"),
            Family::Join(a, b) => write!(f, "join({a};{b})"),
        }
    }
}

fn split_top_level(body: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => return Some((&body[..i], &body[i + 1..])),
            _ => {}
        }
    }
    None
}

/// A generated host with the statistics recorded alongside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generated {
    pub family: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub min_degree: usize,
    pub hash: String,
    #[serde(skip)]
    pub graph: Option<Graph>,
}

impl Generated {
    pub fn graph(&self) -> &Graph {
        self.graph.as_ref().expect("generated graph present")
    }
}

pub fn generate(family: &Family, seed: u64) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = build(family, &mut rng)?;
    Ok(Generated {
        family: family.to_string(),
        seed,
        n: graph.n(),
        m: graph.m(),
        min_degree: if graph.n() == 0 { 0 } else { min_degree(&graph)? },
        hash: graph.content_hash(),
        graph: Some(graph),
    })
}

fn build(family: &Family, rng: &mut ChaCha8Rng) -> Result<Graph> {
    Ok(match family {
        Family::Gnp { n, p } => gnp(*n, p, rng)?,
        Family::Multipartite { sizes } => complete_multipartite(sizes)?,
        Family::OddCycleBlowup { cycle, m } => odd_cycle_blowup(*cycle, *m)?,
        Family::RandomRegular { n, d } => random_regular(*n, *d, rng)?,
        Family::Complete(n) => Graph::complete(*n),
        Family::Cycle(n) => {
            if *n < 3 {
                return Err(config("cycle needs at least 3 vertices"));
            }
            Graph::cycle(*n)
        }
        Family::Path(n) => Graph::path(*n),
        Family::Union(a, b) => compose(&build(a, rng)?, &build(b, rng)?, false)?,
        Family::Join(a, b) => compose(&build(a, rng)?, &build(b, rng)?, true)?,
    })
}

pub fn gnp(n: usize, p: &Rational, rng: &mut impl Rng) -> Result<Graph> {
    if *p < Rational::from_integer(0) || *p > Rational::from_integer(1) {
        return Err(config(format!("edge probability {} outside [0, 1]", format_rational(p))));
    }
    let p = to_f64(p);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

/// Parts are consecutive vertex ranges in the given order.
pub fn complete_multipartite(sizes: &[usize]) -> Result<Graph> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(config("multipartite needs at least one part and no empty parts"));
    }
    let part: Vec<usize> = sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect();
    let n = part.len();
    let part = &part;
    let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| part[u] != part[v]).map(move |v| (u, v)));
    Ok(Graph::from_edges(n, edges.collect::<Vec<_>>())?)
}

/// Vertex `i·m + j` is copy `j` of cycle vertex `i`.
pub fn odd_cycle_blowup(cycle: usize, m: usize) -> Result<Graph> {
    if cycle < 3 || cycle % 2 == 0 || m == 0 {
        return Err(config("blowup needs an odd cycle length ≥ 3 and m ≥ 1"));
    }
    let n = cycle * m;
    let edges = (0..cycle).flat_map(|i| {
        let k = (i + 1) % cycle;
        (0..m).flat_map(move |a| (0..m).map(move |b| (i * m + a, k * m + b)))
    });
    Ok(Graph::from_edges(n, edges.collect::<Vec<_>>())?)
}

/// Pairs random stubs, accepting only pairs that keep the graph simple,
/// and restarts when no suitable pair is left.
pub fn random_regular(n: usize, d: usize, rng: &mut impl Rng) -> Result<Graph> {
    if d >= n.max(1) || (n * d) % 2 == 1 {
        return Err(config(format!("no {d}-regular graph on {n} vertices")));
    }
    'attempt: for _ in 0..REGULAR_ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut adj = vec![vec![false; n]; n];
        let mut edges = Vec::with_capacity(n * d / 2);
        while !stubs.is_empty() {
            let ok = |u: usize, v: usize, adj: &[Vec<bool>]| u != v && !adj[u][v];
            let (i, j) = (rng.gen_range(0..stubs.len()), rng.gen_range(0..stubs.len()));
            if !ok(stubs[i], stubs[j], &adj) {
                let any = (0..stubs.len()).any(|x| (x + 1..stubs.len()).any(|y| ok(stubs[x], stubs[y], &adj)));
                if !any {
                    continue 'attempt;
                }
                continue;
            }
            let (u, v) = (stubs[i], stubs[j]);
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u, v));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
        }
        return Ok(Graph::from_edges(n, edges)?);
    }
    Err(config(format!("no simple {d}-regular pairing found on {n} vertices after {REGULAR_ATTEMPTS} attempts")))
}

/// `b`'s vertices are shifted past `a`'s; `join` adds every cross edge.
pub fn compose(a: &Graph, b: &Graph, join: bool) -> Result<Graph> {
    let off = a.n();
    let mut edges: Vec<(usize, usize)> = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(u, v)| (u + off, v + off)));
    if join {
        edges.extend((0..off).flat_map(|u| (0..b.n()).map(move |v| (u, v + off))));
    }
    Ok(Graph::from_edges(off + b.n(), edges)?)
}
