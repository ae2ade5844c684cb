//! The nine acceptance criteria, each reported as one PASS/FAIL line.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use mb_core::decompose::{bfkm_partition, robust_partition};
use mb_core::engine::{play, BoardKind, GameSpec, Player, Strategy, WinPredicate};
use mb_core::graph::{induced_subgraph, min_degree};
use mb_core::solver::{solve, solve_unmemoized, verify_maker_strategy, OptimalStrategy, StrategyCheck};
use mb_core::strategies::{bound_report, ConnectivityMaker, Main3Maker, Main3Options, RandomBreaker};
use mb_core::{Graph, Rational};
use mb_harness::{run_experiment, run_experiment_with, ExperimentConfig, ResultDocument};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Report {
    lines: Vec<(usize, bool, String)>,
    clock: Instant,
}

impl Report {
    fn record(&mut self, id: usize, pass: bool, detail: String) {
        let secs = self.clock.elapsed().as_secs_f64();
        self.clock = Instant::now();
        let line = format!("criterion {id}: {} {detail} [{secs:.1}s]\n", if pass { "PASS" } else { "FAIL" });
        // Bypasses the test harness's output capture.
        let _ = std::io::stderr().lock().write_all(line.as_bytes());
        self.lines.push((id, pass, detail));
    }
}

/// Every graph on five vertices up to isomorphism, as canonical edge masks.
fn five_vertex_classes() -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let mut perms = Vec::new();
    permutations(&mut (0..5).collect(), 0, &mut perms);
    let mut classes = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let canon = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0u32, |m, (_, &(u, v))| m | 1 << index(p[u], p[v]))
            })
            .min()
            .unwrap();
        classes.insert(canon);
    }
    classes
        .into_iter()
        .map(|m| Graph::from_edges(5, pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &e)| e)).unwrap())
        .collect()
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

fn corpus_specs() -> Vec<GameSpec> {
    five_vertex_classes()
        .into_iter()
        .flat_map(|g| {
            [1, 2].map(|b| GameSpec::new(g.clone(), BoardKind::Edge, 1, b, WinPredicate::OddCycle).unwrap())
        })
        .collect()
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let classes = five_vertex_classes();
    let mut disagreements = 0;
    for spec in corpus_specs() {
        if solve(&spec).unwrap().winner != solve_unmemoized(&spec).unwrap() {
            disagreements += 1;
        }
    }
    // Maker needs all three (five) edges of the only odd cycle but gets at
    // most two (three) of them.
    let k3 = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2)]).unwrap();
    let c5 = Graph::cycle(5);
    let fixtures_ok = [k3, c5].into_iter().all(|g| {
        [1, 2].into_iter().all(|b| {
            let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, b, WinPredicate::OddCycle).unwrap();
            solve(&spec).unwrap().winner == Player::Breaker
        })
    });
    let elapsed = start.elapsed();
    r.record(
        1,
        classes.len() == 34 && disagreements == 0 && fixtures_ok && elapsed < Duration::from_secs(60),
        format!(
            "{} classes x 2 biases, {disagreements} memo/plain disagreements, K3/C5 fixtures {}, {:.1}s",
            classes.len(),
            if fixtures_ok { "Breaker" } else { "WRONG" },
            elapsed.as_secs_f64()
        ),
    );
}

fn criterion_2(r: &mut Report) {
    let mut checked = 0;
    let mut always = 0;
    let mut violations = 0;
    let mut inconclusive = 0;
    let mut check = |spec: &GameSpec, maker: &dyn Strategy| {
        checked += 1;
        match verify_maker_strategy(spec, maker, 0, 5_000_000) {
            Ok(StrategyCheck::AlwaysWins { .. }) => {
                always += 1;
                if solve(spec).unwrap().winner != Player::Maker {
                    violations += 1;
                }
            }
            Ok(StrategyCheck::CounterTranscript(_)) => {}
            Err(_) => inconclusive += 1,
        }
    };
    for spec in corpus_specs() {
        check(&spec, &OptimalStrategy::new(Player::Maker));
        check(&spec, &RandomBreaker::new(5));
        if let Ok(m3) = Main3Maker::new(&spec.host, spec.breaker_bias, Main3Options::default()) {
            check(&spec, &m3);
        }
    }
    for n in [5, 6] {
        let g = Graph::complete(n);
        for b in [1, 2] {
            let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, b, WinPredicate::SpanningConnected).unwrap();
            check(&spec, &ConnectivityMaker::spanning(&g));
            check(&spec, &OptimalStrategy::new(Player::Maker));
        }
    }
    r.record(
        2,
        violations == 0 && always > 0,
        format!("{checked} checks, {always} always-win, {violations} violations, {inconclusive} over budget"),
    );
}

fn gnp_corpus() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    (0..50)
        .map(|_| {
            let n = rng.gen_range(24..=48);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect();
            Graph::from_edges(n, edges).unwrap()
        })
        .collect()
}

/// Whether removing any fewer than `t` vertices leaves `g` connected.
fn connected_after_removals(g: &Graph, t: usize) -> bool {
    fn connected_without(g: &Graph, gone: &[usize]) -> bool {
        let keep: Vec<usize> = g.vertices().filter(|v| !gone.contains(v)).collect();
        if keep.len() <= 1 {
            return true;
        }
        let mut seen = vec![false; g.n()];
        let mut stack = vec![keep[0]];
        seen[keep[0]] = true;
        while let Some(x) = stack.pop() {
            for &w in g.neighbors(x) {
                if !seen[w] && !gone.contains(&w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        keep.iter().all(|&v| seen[v])
    }
    fn rec(g: &Graph, t: usize, from: usize, gone: &mut Vec<usize>) -> bool {
        if !connected_without(g, gone) {
            return false;
        }
        if gone.len() + 1 >= t {
            return true;
        }
        for v in from..g.n() {
            gone.push(v);
            let ok = rec(g, t, v + 1, gone);
            gone.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    g.n() > t && rec(g, t, 0, &mut Vec::new())
}

fn criterion_3(r: &mut Report, corpus: &[Graph]) {
    let mut ok = 0;
    for g in corpus {
        let n = g.n();
        let k = min_degree(g).unwrap();
        let target = (k * k).div_ceil(16 * n).max(1);
        let pass = bfkm_partition(g, k).is_ok_and(|p| {
            p.parts.iter().all(|part| {
                let (sub, _) = induced_subgraph(g, part).unwrap();
                8 * part.len() >= k && connected_after_removals(&sub, target)
            })
        });
        ok += usize::from(pass);
    }
    r.record(3, ok == corpus.len(), format!("{ok}/{} partitions meet size k/8 and connectivity ⌈k²/16n⌉", corpus.len()));
}

fn criterion_4(r: &mut Report, corpus: &[Graph]) {
    let mut ok = 0;
    let mut max_splits = 0;
    for (i, g) in corpus.iter().enumerate() {
        let n = g.n();
        let delta = Rational::new(min_degree(g).unwrap() as i64, n as i64);
        let Ok(p) = robust_partition(g, delta, i as u64) else { continue };
        let floor = delta * delta * Rational::from_integer(n as i64);
        let bound = (Rational::from_integer(1) / delta).ceil().to_integer() as usize;
        let degrees_ok = p.parts.iter().all(|part| {
            part.iter().all(|v| {
                let inside = g.neighbors(v).iter().filter(|&&w| part.contains(w)).count();
                Rational::from_integer(inside as i64) >= floor
            })
        });
        let covered = p.parts.iter().map(|s| s.len()).sum::<usize>() == n;
        max_splits = max_splits.max(p.stats.splits);
        ok += usize::from(degrees_ok && covered && p.stats.splits <= bound);
    }
    r.record(
        4,
        ok == corpus.len(),
        format!("{ok}/{} partitions with d(v, part) ≥ δ²n and splits ≤ ⌈1/δ⌉ (max splits {max_splits})", corpus.len()),
    );
}

fn main2_config(breaker: &str) -> ExperimentConfig {
    ExperimentConfig {
        generator: "multipartite(40x7)".into(),
        generator_seed: 0,
        board: BoardKind::Vertex,
        maker_bias: 1,
        breaker_bias: 2,
        first: Player::Maker,
        objective: "odd-cycle".into(),
        maker: "main2:force,delta=6/7,seed=7".into(),
        breaker: breaker.into(),
        trials: 100,
        seed_base: 0,
        output: None,
    }
}

fn criterion_5(r: &mut Report, docs: &mut Vec<ResultDocument>) {
    let mut parts = Vec::new();
    let mut pass = true;
    for breaker in ["random:seed=11", "guard", "cut"] {
        let doc = run_experiment(&main2_config(breaker)).unwrap();
        let a = &doc.aggregate;
        let valid = doc.trials.iter().all(|t| t.winner != Some(Player::Maker) || t.witness_valid == Some(true));
        let max_len = a.max_witness_length.unwrap_or(0);
        pass &= a.win_rate >= 0.95 && valid && max_len <= 9 && a.errors == 0;
        parts.push(format!("{}: {}/{} wins, max witness {max_len}", doc.breaker_id, a.maker_wins, a.trials));
        docs.push(doc);
    }
    r.record(5, pass, parts.join("; "));
}

fn criterion_6(r: &mut Report) {
    // Independent recomputation: b_max = ⌊p²n/(q²·6400·log₂²n)⌋ in integers,
    // the union bound n·n^{-50} as an exponent, and ⌈100 ln n/δ²⌉ in f64.
    let mut pass = true;
    let rep = bound_report(1 << 30, Rational::new(4, 5), 1).unwrap();
    let b_max = (16u128 << 30) / (25 * 6400 * 30 * 30);
    pass &= rep.b_max as u128 == b_max && b_max == 119;
    for (n, d) in [(280u64, Rational::new(6, 7)), (500, Rational::new(1, 2)), (1 << 20, Rational::new(4, 5)), (97, Rational::new(1, 3))] {
        let rep = bound_report(n, d, 2).unwrap();
        let df = *d.numer() as f64 / *d.denom() as f64;
        pass &= rep.dominating_size == (100.0 * (n as f64).ln() / (df * df)).ceil() as u64;
        pass &= rep.failure_exponent == 1 - 50;
        pass &= rep.chi_threshold_vertex == Rational::from_integer(6) / d;
    }
    r.record(6, pass, format!("b_max(2^30, 4/5) = {}, failure exponent {}", rep.b_max, rep.failure_exponent));
}

fn criterion_7(r: &mut Report) {
    let n = 500;
    let delta = 0.5f64;
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let edges: Vec<(usize, usize)> =
        (0..250).flat_map(|u| (250..500).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.5)).collect();
    let h = Graph::from_edges(n, edges).unwrap();
    let core_ok = min_degree(&h).unwrap() as f64 >= (delta / 2.0).powi(2) * n as f64;
    let size = (100.0 * (n as f64).ln() / (delta * delta)).ceil() as usize;
    let mut dominated = 0;
    let mut margin_ok = 0;
    let mut min_margin = usize::MAX;
    for trial in 0..1000u64 {
        let mut s = ChaCha8Rng::seed_from_u64(trial);
        let mut in_d = vec![false; n];
        for _ in 0..size {
            in_d[s.gen_range(0..n)] = true;
        }
        let dom = (0..n).all(|v| in_d[v] || h.neighbors(v).iter().any(|&w| in_d[w]));
        let margin = (0..n).map(|v| h.neighbors(v).iter().filter(|&&w| in_d[w]).count()).min().unwrap();
        dominated += usize::from(dom);
        margin_ok += usize::from(margin >= 1);
        min_margin = min_margin.min(margin);
    }
    r.record(
        7,
        core_ok && dominated >= 990 && margin_ok >= 950,
        format!("{dominated}/1000 samples of {size} dominate H; min d(v, D) observed {min_margin}"),
    );
}

fn criterion_8(r: &mut Report, docs: &[ResultDocument]) {
    let mut pass = true;
    let spec = GameSpec::new(Graph::complete(6), BoardKind::Edge, 1, 1, WinPredicate::OddCycle).unwrap();
    for seed in 0..20 {
        let a = play(&spec, &mut RandomBreaker::new(1), &mut RandomBreaker::new(2), seed);
        let b = play(&spec, &mut RandomBreaker::new(1), &mut RandomBreaker::new(2), seed);
        pass &= a.transcript.render() == b.transcript.render();
    }
    let small = GameSpec::new(Graph::complete(5), BoardKind::Edge, 1, 1, WinPredicate::OddCycle).unwrap();
    pass &= solve(&small).unwrap() == solve(&small).unwrap();
    let mut cfg = main2_config("cut");
    cfg.trials = 20;
    let serial = run_experiment_with(&cfg, false).unwrap().canonical_json().unwrap();
    let parallel = run_experiment_with(&cfg, true).unwrap().canonical_json().unwrap();
    pass &= serial == parallel;
    let rerun = run_experiment(&docs[0].config).unwrap();
    pass &= rerun.canonical_json().unwrap() == docs[0].canonical_json().unwrap();
    r.record(8, pass, "plays, solves and experiment documents repeat byte-identically".into());
}

fn criterion_9(r: &mut Report, docs: &[ResultDocument]) {
    let wins: Vec<_> =
        docs.iter().flat_map(|d| d.trials.iter()).filter(|t| t.winner == Some(Player::Maker)).collect();
    let valid = wins.iter().filter(|t| t.witness_valid == Some(true)).count();
    r.record(9, valid == wins.len() && !wins.is_empty(), format!("{valid}/{} Maker wins carry valid witnesses", wins.len()));
}

#[test]
fn acceptance_criteria() {
    let mut r = Report { lines: Vec::new(), clock: Instant::now() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    let corpus = gnp_corpus();
    criterion_3(&mut r, &corpus);
    criterion_4(&mut r, &corpus);
    let mut docs = Vec::new();
    criterion_5(&mut r, &mut docs);
    criterion_6(&mut r);
    criterion_7(&mut r);
    let mut extra = main2_config("random:seed=3");
    extra.generator = "multipartite(6x3)".into();
    extra.board = BoardKind::Edge;
    extra.maker = "main1:force".into();
    docs.push(run_experiment(&extra).unwrap());
    criterion_8(&mut r, &docs);
    criterion_9(&mut r, &docs);
    let failed: Vec<usize> = r.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
