use mb_core::engine::{BoardKind, GameSpec, Player, WinPredicate};
use mb_core::solver::{solve, solve_unmemoized, solve_with, verify_maker_strategy, SolveOptions, StrategyCheck};
use mb_core::strategies::ConnectivityMaker;
use mb_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random games whose boards have at most ten elements.
fn instances() -> Vec<GameSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    while out.len() < 50 {
        let n = rng.gen_range(3..=6);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.6)).collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let board = if rng.gen_bool(0.3) { BoardKind::Vertex } else { BoardKind::Edge };
        let obj = match rng.gen_range(0..4) {
            0 => WinPredicate::OddCycle,
            1 => WinPredicate::SpanningConnected,
            2 => WinPredicate::Connectivity(2),
            _ => WinPredicate::NonKColorable(2),
        };
        let Ok(spec) = GameSpec::new(g, board, rng.gen_range(1..=2), rng.gen_range(1..=2), obj) else { continue };
        let spec = if rng.gen_bool(0.2) { spec.with_first_player(Player::Breaker) } else { spec };
        if spec.board_size() == 0 || spec.board_size() > 10 {
            continue;
        }
        out.push(spec);
    }
    out
}

#[test]
fn memoized_and_plain_search_agree() {
    for (i, spec) in instances().iter().enumerate() {
        let fast = solve(spec).unwrap().winner;
        assert_eq!(fast, solve_unmemoized(spec).unwrap(), "instance {i}");
        for (maker_cutoff, breaker_cutoff, set_batches) in [(false, false, false), (true, false, true), (false, true, false)] {
            let opts = SolveOptions { memoize: false, maker_cutoff, breaker_cutoff, set_batches, ..SolveOptions::default() };
            assert_eq!(solve_with(spec, &opts).unwrap().winner, fast, "instance {i} with {opts:?}");
        }
    }
}

#[test]
fn principal_line_is_legal() {
    for spec in instances() {
        let v = solve(&spec).unwrap();
        let mut pos = mb_core::engine::Position::new(&spec);
        for t in &v.principal_line {
            pos.claim(&spec, t.player, &t.elements, None).unwrap();
        }
        if v.winner == Player::Maker {
            assert!(mb_core::engine::evaluate_claims(&spec, pos.maker_claims()).is_some());
        }
    }
}

#[test]
fn verified_connectivity_strategy_implies_maker_win() {
    for n in [4, 5] {
        let g = Graph::complete(n);
        let spec = GameSpec::new(g.clone(), BoardKind::Edge, 1, 1, WinPredicate::SpanningConnected).unwrap();
        let check = verify_maker_strategy(&spec, &ConnectivityMaker::spanning(&g), 0, 5_000_000).unwrap();
        if matches!(check, StrategyCheck::AlwaysWins { .. }) {
            assert_eq!(solve(&spec).unwrap().winner, Player::Maker);
        }
    }
}

#[test]
fn oversized_board_is_a_resource_error() {
    let spec = GameSpec::new(Graph::complete(7), BoardKind::Edge, 1, 1, WinPredicate::OddCycle).unwrap();
    assert!(matches!(solve(&spec), Err(mb_core::Error::Resource(_))));
}
