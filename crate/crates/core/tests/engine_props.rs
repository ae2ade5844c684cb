use mb_core::engine::{evaluate_claims, play, BoardKind, GameSpec, Player, Position, Transcript, WinPredicate};
use mb_core::strategies::{BipartiteGuard, CutAttack, RandomBreaker};
use mb_core::Graph;
use proptest::prelude::*;

fn host(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let all = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::from_edges(n, all.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e)).unwrap()
        })
    })
}

fn objective() -> impl Strategy<Value = WinPredicate> {
    prop_oneof![
        Just(WinPredicate::OddCycle),
        Just(WinPredicate::NonKColorable(2)),
        Just(WinPredicate::NonKColorable(3)),
        Just(WinPredicate::SpanningConnected),
        Just(WinPredicate::Connectivity(2)),
    ]
}

proptest! {
    #[test]
    fn claims_partition_the_board_and_replay(
        g in host(7),
        obj in objective(),
        vertex in any::<bool>(),
        a in 1usize..3,
        b in 1usize..4,
        seed in any::<u64>(),
    ) {
        prop_assume!(g.m() > 0);
        let board = if vertex { BoardKind::Vertex } else { BoardKind::Edge };
        let spec = GameSpec::new(g, board, a, b, obj);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let r = play(&spec, &mut RandomBreaker::new(seed ^ 1), &mut RandomBreaker::new(seed), seed);
        let end = r.transcript.verify(&spec).unwrap();
        prop_assert_eq!(end.maker_claims().len() + end.breaker_claims().len() + end.unclaimed_count(), spec.board_size());

        // Maker's win status never flips back along the game.
        let mut pos = Position::new(&spec);
        let mut won = false;
        for t in &r.transcript.turns {
            pos.claim(&spec, t.player, &t.elements, t.note.clone()).unwrap();
            let now = evaluate_claims(&spec, pos.maker_claims()).is_some();
            prop_assert!(!won || now);
            won = now;
        }
        prop_assert_eq!(won, r.maker_won());
        if let Some(w) = &r.witness {
            prop_assert!(w.validate(&spec, end.maker_claims()));
        }

        let text = r.transcript.render();
        let back = Transcript::parse(&text).unwrap();
        prop_assert_eq!(back.render(), text.clone());
        let again = play(&spec, &mut RandomBreaker::new(seed ^ 1), &mut RandomBreaker::new(seed), seed);
        prop_assert_eq!(again.transcript.render(), text);
    }

    #[test]
    fn adding_claims_keeps_a_win(g in host(7), obj in objective(), mask in any::<u32>(), extra in any::<u32>()) {
        let spec = GameSpec::new(g, BoardKind::Edge, 1, 1, obj).unwrap();
        let m = spec.board_size();
        let pick = |bits: u32| (0..m).filter(|&e| e < 32 && bits >> e & 1 == 1).collect::<Vec<_>>();
        let small = pick(mask);
        let large = pick(mask | extra);
        if evaluate_claims(&spec, &small).is_some() {
            prop_assert!(evaluate_claims(&spec, &large).is_some());
        }
    }
}

#[test]
fn adversaries_are_legal_on_both_boards() {
    let g = Graph::complete(6);
    for board in [BoardKind::Edge, BoardKind::Vertex] {
        let spec = GameSpec::new(g.clone(), board, 1, 2, WinPredicate::OddCycle).unwrap();
        for seed in 0..5 {
            let r1 = play(&spec, &mut RandomBreaker::new(seed), &mut BipartiteGuard::new(), seed);
            let r2 = play(&spec, &mut RandomBreaker::new(seed), &mut CutAttack::new(), seed);
            for r in [r1, r2] {
                assert!(r.forfeit.is_none());
                r.transcript.verify(&spec).unwrap();
            }
        }
    }
}

#[test]
fn breaker_first_games_start_with_breaker() {
    let spec = GameSpec::new(Graph::complete(5), BoardKind::Edge, 1, 1, WinPredicate::OddCycle)
        .unwrap()
        .with_first_player(Player::Breaker);
    let r = play(&spec, &mut RandomBreaker::new(0), &mut RandomBreaker::new(1), 9);
    assert_eq!(r.transcript.turns[0].player, Player::Breaker);
}
