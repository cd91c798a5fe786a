use rank3::classifier::classify_position;
use rank3::oracle::{enumerate_hot_paths, full_minimax, hot_path_exists};
use rank3::solver::{best_move, evaluate_children, solve};
use rank3::{
    classify, find_hot_path, Depth, Edge, EndgameTag, Error, Game, Hypergraph, Player, VertexId,
};

fn hypergraph(edges: &[&[u32]]) -> Hypergraph {
    Hypergraph::from_edges(edges.iter().map(|e| Edge::of(e)))
}

fn game(edges: &[&[u32]], p: Player) -> Game {
    Game::new(hypergraph(edges), p)
}

#[test]
fn empty_game_is_lost_for_maker() {
    let r = solve(&Game::new(Hypergraph::default(), Player::Maker));
    assert_eq!((r.winner, r.sdepth), (Player::Breaker, Depth::Infinite));
    assert_eq!(
        best_move(&Game::new(Hypergraph::default(), Player::Maker)),
        Err(Error::Terminal)
    );
}

#[test]
fn v_shape_is_an_immediate_win() {
    let g = game(&[&[0, 1], &[0, 2]], Player::Maker);
    let r = solve(&g);
    assert_eq!(
        (r.winner, r.sdepth, r.class),
        (Player::Maker, Depth::ZERO, EndgameTag::Fam1)
    );
    assert_eq!(full_minimax(&g).unwrap().dep, Depth::Finite(3));
}

#[test]
fn paired_triples_are_a_breaker_win() {
    // {w1,y,x}, {w2,y,x}: Breaker answers x with y and y with x
    let g = game(&[&[0, 2, 3], &[1, 2, 3]], Player::Maker);
    assert_eq!(classify(&g).tag, EndgameTag::NotEndgame);
    let m = best_move(&g).unwrap();
    assert_eq!(m.sdepth, Depth::Infinite);
    assert!(m.nonstrategic);
    assert_eq!(full_minimax(&g).unwrap().winner, Player::Breaker);
}

#[test]
fn depth_one_witness_moves_into_a_breaker_endgame() {
    // the smallest mined game of shortened depth 1
    let g = game(
        &[&[0, 1, 2], &[0, 2, 4], &[1, 2, 3], &[3, 4]],
        Player::Maker,
    );
    let m = best_move(&g).unwrap();
    assert_eq!(m.sdepth, Depth::Finite(1));
    let after = g.play(m.vertex).unwrap();
    assert_eq!(classify(&after).tag, EndgameTag::Fam2);
    let kids = evaluate_children(&g).unwrap();
    assert_eq!(kids[&m.vertex], Depth::ZERO);
    assert_eq!(kids.values().min(), Some(&Depth::ZERO));
    // smallest vertex among the optimal moves
    assert_eq!(
        kids.iter()
            .find(|(_, d)| **d == Depth::ZERO)
            .map(|(v, _)| *v),
        Some(m.vertex)
    );
}

#[test]
fn children_of_two_disjoint_v_shapes() {
    let g = game(&[&[0, 1], &[1, 2], &[3, 4], &[4, 5]], Player::Breaker);
    let kids = evaluate_children(&g).unwrap();
    assert_eq!(kids.len(), 6);
    assert!(kids.values().all(|&d| d == Depth::ZERO));
}

#[test]
fn children_map_has_one_entry_per_vertex() {
    let g = game(&[&[0, 1], &[1, 2]], Player::Breaker);
    let kids = evaluate_children(&g).unwrap();
    assert_eq!(
        kids.keys().copied().collect::<Vec<_>>(),
        vec![VertexId(0), VertexId(1), VertexId(2)]
    );
    // Breaker wins with any move: one edge left for Maker to move is lost
    assert!(kids.values().all(|&d| d == Depth::Infinite));
}

#[test]
fn extremal_four_is_a_breaker_win_for_both() {
    let edges: &[&[u32]] = &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 0], &[2, 3, 1]];
    for p in [Player::Maker, Player::Breaker] {
        let g = game(edges, p);
        assert_eq!(solve(&g).winner, Player::Breaker);
        assert_eq!(full_minimax(&g).unwrap().winner, Player::Breaker);
    }
}

#[test]
fn hot_path_with_one_intermediate() {
    let h = hypergraph(&[&[0, 1], &[1, 2, 3], &[3, 4]]);
    let w = find_hot_path(&h).unwrap();
    assert_eq!(w.intermediates, vec![Edge::of(&[1, 2, 3])]);
    assert_eq!(enumerate_hot_paths(&h, 5).unwrap().len(), 1);
    assert_eq!(
        solve(&Game::new(h, Player::Maker)).best_move,
        Some(VertexId(1))
    );
}

#[test]
fn virtual_ends_with_a_shared_generator_are_not_a_hot_path() {
    // both virtual pairs lean on the same third vertex, and Breaker wins
    let h = hypergraph(&[&[0, 2, 3], &[0, 2, 4], &[1, 2, 3], &[1, 2, 5]]);
    assert!(find_hot_path(&h).is_none());
    assert!(!hot_path_exists(&h));
    assert_eq!(
        full_minimax(&Game::new(h, Player::Maker)).unwrap().winner,
        Player::Breaker
    );
}

/// The regular search only walks regular 3-edges. Here the only hot path runs
/// through two 3-edges that overlap a third one, so it is not found, although
/// Maker wins by following it.
#[test]
fn regular_search_misses_paths_through_overlapping_edges() {
    let h = hypergraph(&[
        &[0, 9],
        &[0, 6, 7],
        &[3, 4, 7],
        &[2, 3, 8],
        &[1, 8],
        &[2, 3, 4],
    ]);
    assert!(find_hot_path(&h).is_none());
    let all = enumerate_hot_paths(&h, 6).unwrap();
    assert_eq!(all.len(), 1);
    assert_eq!(all[0].intermediates.len(), 3);
    assert!(all[0].verify(&h).is_ok());
    assert!(all[0].verify_regular(&h).is_err());

    let g = Game::new(h, Player::Maker);
    assert_eq!(classify(&g).tag, EndgameTag::NotEndgame);
    // the search still finds the win one ply deeper
    let r = solve(&g);
    assert_eq!(r.sdepth, Depth::Finite(1));
    assert_eq!(full_minimax(&g).unwrap().winner, Player::Maker);
    let end = r
        .principal_variation
        .unwrap()
        .iter()
        .fold(g.clone(), |cur, &v| {
            cur.play(cur.current_id(g.root_id(v)).unwrap()).unwrap()
        });
    assert_eq!(
        classify_position(end.hypergraph(), end.to_move()).tag,
        EndgameTag::Fam2
    );
}
