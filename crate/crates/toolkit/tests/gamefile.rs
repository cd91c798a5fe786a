use proptest::prelude::*;
use rank3::Player;
use rank3_toolkit::gamefile::{game_from_labels, parse_game, write_game, ParseError};

fn label() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,3}"
}

fn edges() -> impl Strategy<Value = Vec<Vec<String>>> {
    prop::collection::vec(prop::collection::btree_set(label(), 1..=3), 0..10)
        .prop_map(|es| es.into_iter().map(|e| e.into_iter().collect()).collect())
}

proptest! {
    #[test]
    fn writing_then_parsing_is_the_identity(es in edges(), maker in any::<bool>()) {
        let p = if maker { Player::Maker } else { Player::Breaker };
        let g = game_from_labels(&es, p).unwrap().game;
        let text = write_game(&g);
        let back = parse_game(&text).unwrap();
        prop_assert!(back.warnings.is_empty());
        prop_assert_eq!(write_game(&back.game), text);
        prop_assert_eq!(back.game.hypergraph(), g.hypergraph());
    }

    #[test]
    fn parsing_never_panics(text in "(player [MBX]|edge( [a-z]{1,2}){0,4}|# .*|junk)?(\n(player [MB]|edge( [a-z]){0,4}))*") {
        let _ = parse_game(&text);
    }
}

#[test]
fn errors_carry_line_numbers() {
    assert_eq!(
        parse_game("player M\nedge a b c d\n").unwrap_err(),
        ParseError::Rank { line: 2, arity: 4 }
    );
    assert_eq!(
        parse_game("edge a\n").unwrap_err(),
        ParseError::MissingPlayer
    );
    assert!(matches!(
        parse_game("player M\nvertex a\n"),
        Err(ParseError::Malformed { line: 2, .. })
    ));
}

#[test]
fn supersets_are_dropped_with_a_warning() {
    let parsed = parse_game("player M\nedge a b\nedge a b c\n").unwrap();
    assert_eq!(parsed.game.hypergraph().edge_count(), 1);
    assert_eq!(parsed.warnings.len(), 1);
}
