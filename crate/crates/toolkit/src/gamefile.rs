//! Line-oriented game files.
//!
//! ```text
//! # a v-shape
//! player M
//! edge a b
//! edge b c
//! ```
//!
//! A bare `edge` line is the empty edge. Labels are `[A-Za-z0-9_]+`; vertex
//! ids are assigned in sorted label order, so the smallest id is also the
//! smallest label.

use std::collections::{BTreeSet, HashSet};

use rank3::{Edge, Game, Hypergraph, Player, VertexId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: edge has {arity} vertices, at most 3 allowed")]
    Rank { line: usize, arity: usize },
    #[error("missing `player` line")]
    MissingPlayer,
}

#[derive(Debug, Clone)]
pub struct ParsedGame {
    pub game: Game,
    /// Edges dropped while normalizing, as label lists.
    pub warnings: Vec<String>,
}

pub fn parse_game(text: &str) -> Result<ParsedGame, ParseError> {
    let mut player = None;
    let mut raw: Vec<(usize, Vec<&str>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let malformed = |message: String| ParseError::Malformed {
            line: line_no,
            message,
        };
        let body = line.split('#').next().unwrap_or("").trim();
        let mut words = body.split_whitespace();
        let Some(directive) = words.next() else {
            continue;
        };
        let args: Vec<&str> = words.collect();
        match directive {
            "player" => {
                if player.is_some() {
                    return Err(malformed("second `player` line".into()));
                }
                player = Some(match args.as_slice() {
                    ["M"] => Player::Maker,
                    ["B"] => Player::Breaker,
                    _ => return Err(malformed("expected `player M` or `player B`".into())),
                });
            }
            "edge" => {
                check_edge(line_no, &args)?;
                raw.push((line_no, args));
            }
            other => return Err(malformed(format!("unknown directive `{other}`"))),
        }
    }
    let player = player.ok_or(ParseError::MissingPlayer)?;
    build(&raw, player)
}

/// Builds a game from edges given as label lists, as if read from a file.
/// Errors number the edges from 1 in place of lines.
pub fn game_from_labels(edges: &[Vec<String>], player: Player) -> Result<ParsedGame, ParseError> {
    let mut raw = Vec::with_capacity(edges.len());
    for (i, e) in edges.iter().enumerate() {
        let e: Vec<&str> = e.iter().map(String::as_str).collect();
        check_edge(i + 1, &e)?;
        raw.push((i + 1, e));
    }
    build(&raw, player)
}

fn build(raw: &[(usize, Vec<&str>)], player: Player) -> Result<ParsedGame, ParseError> {
    let labels: Vec<String> = raw
        .iter()
        .flat_map(|(_, e)| e.iter().map(|l| l.to_string()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let id = |l: &str| VertexId::from(labels.binary_search_by(|x| x.as_str().cmp(l)).unwrap());

    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (line, e) in raw {
        let ids: Vec<VertexId> = e.iter().map(|l| id(l)).collect();
        let edge = Edge::new(&ids).expect("arity and repeats checked before");
        if !seen.insert(edge) {
            warnings.push(format!(
                "line {line}: duplicate edge {{{}}} dropped",
                e.join(" ")
            ));
            continue;
        }
        edges.push(edge);
    }
    let h = Hypergraph::new(labels.len(), edges).expect("ids are in range");
    let (_, removed) = h.normalize_with_removed();
    for e in removed {
        let names: Vec<&str> = e
            .vertices()
            .iter()
            .map(|v| labels[v.index()].as_str())
            .collect();
        warnings.push(format!(
            "edge {{{}}} contains another edge, dropped",
            names.join(" ")
        ));
    }
    let game = Game::new(h, player)
        .with_labels(labels)
        .expect("labels are distinct and cover every vertex");
    Ok(ParsedGame { game, warnings })
}

fn check_edge(line: usize, labels: &[&str]) -> Result<(), ParseError> {
    let malformed = |message: String| ParseError::Malformed { line, message };
    if labels.len() > 3 {
        return Err(ParseError::Rank {
            line,
            arity: labels.len(),
        });
    }
    if let Some(bad) = labels.iter().find(|l| !valid_label(l)) {
        return Err(malformed(format!("invalid label `{bad}`")));
    }
    if labels.iter().collect::<HashSet<_>>().len() != labels.len() {
        return Err(malformed("repeated vertex in edge".into()));
    }
    Ok(())
}

fn valid_label(l: &str) -> bool {
    !l.is_empty() && l.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Canonical text: `player` line first, labels sorted within each edge,
/// edges sorted.
pub fn write_game(g: &Game) -> String {
    let mut edges: Vec<Vec<String>> = g
        .hypergraph()
        .edges()
        .iter()
        .map(|e| {
            let mut names: Vec<String> = e.vertices().iter().map(|&v| g.label(v)).collect();
            names.sort();
            names
        })
        .collect();
    edges.sort();
    let mut out = format!("player {}\n", g.to_move().code());
    for e in edges {
        out.push_str("edge");
        for l in e {
            out.push(' ');
            out.push_str(&l);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_shape() {
        let p = parse_game("player M\nedge a b\nedge b c\n").unwrap();
        assert_eq!(p.game.to_move(), Player::Maker);
        assert_eq!(
            p.game.hypergraph().edges(),
            &[Edge::of(&[0, 1]), Edge::of(&[1, 2])]
        );
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn bare_edge_is_empty() {
        let p = parse_game("player B\nedge\n").unwrap();
        assert_eq!(p.game.hypergraph().edges(), &[Edge::EMPTY]);
    }

    #[test]
    fn superset_is_dropped_with_warning() {
        let p = parse_game("player M\nedge a b\nedge a b c\n").unwrap();
        assert_eq!(p.game.hypergraph().edges(), &[Edge::of(&[0, 1])]);
        assert_eq!(p.warnings.len(), 1);
        assert_eq!(write_game(&p.game), "player M\nedge a b\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_game("player M\n\nedge a b c d\n").unwrap_err(),
            ParseError::Rank { line: 3, arity: 4 }
        );
        assert!(matches!(
            parse_game("player M\nvertex a\n"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_game("edge a\n"),
            Err(ParseError::MissingPlayer)
        ));
        assert!(parse_game("player M\nedge a-b\n").is_err());
        assert!(parse_game("player M\nedge a a\n").is_err());
        assert!(parse_game("player X\n").is_err());
    }

    #[test]
    fn comments_and_order_do_not_matter() {
        let a = parse_game("# hi\nedge c b # trailing\nplayer B\nedge a b\n").unwrap();
        let b = parse_game("player B\nedge a b\nedge b c\n").unwrap();
        assert_eq!(write_game(&a.game), write_game(&b.game));
    }
}
