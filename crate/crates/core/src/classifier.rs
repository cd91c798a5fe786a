//! Membership in the shortened winning endgames.
//!
//! * `Fam0`: Breaker to move and the empty edge is present.
//! * `Fam1`: Maker to move with a singleton edge or a hot path.
//! * `Fam2`: Breaker to move, not `Fam0`, and every Breaker reply is `Fam1`.

use serde::Serialize;

use crate::hotpath::{find_hot_path, has_singleton, HotPathWitness};
use crate::hypergraph::{Game, Hypergraph, Player, VertexId};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum EndgameTag {
    Fam0,
    Fam1,
    Fam2,
    NotEndgame,
}

/// Why a Maker-to-move position is `Fam1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Fam1Certificate {
    Singleton(VertexId),
    HotPath(HotPathWitness),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum Certificate {
    EmptyEdge,
    Fam1(Fam1Certificate),
    /// One `Fam1` certificate per Breaker reply, in vertex order. Vertex ids
    /// inside each certificate refer to the position after that reply.
    BreakerReplies(Vec<(VertexId, Fam1Certificate)>),
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct EndgameClass {
    pub tag: EndgameTag,
    pub certificate: Option<Certificate>,
}

impl EndgameClass {
    pub const NOT_ENDGAME: EndgameClass = EndgameClass {
        tag: EndgameTag::NotEndgame,
        certificate: None,
    };

    pub fn is_endgame(&self) -> bool {
        self.tag != EndgameTag::NotEndgame
    }

    /// Re-checks the certificate against the position it was issued for.
    pub fn verify(&self, h: &Hypergraph, to_move: Player) -> bool {
        match (self.tag, &self.certificate, to_move) {
            (EndgameTag::NotEndgame, None, _) => true,
            (EndgameTag::Fam0, Some(Certificate::EmptyEdge), Player::Breaker) => h.has_empty_edge(),
            (EndgameTag::Fam1, Some(Certificate::Fam1(c)), Player::Maker) => c.verify(h),
            (EndgameTag::Fam2, Some(Certificate::BreakerReplies(replies)), Player::Breaker) => {
                !h.has_empty_edge()
                    && h.vertex_count() > 0
                    && replies.len() == h.vertex_count()
                    && replies
                        .iter()
                        .zip(h.vertices())
                        .all(|((y, c), v)| *y == v && c.verify(&h.delete(v)))
            }
            _ => false,
        }
    }
}

impl Fam1Certificate {
    pub fn verify(&self, h: &Hypergraph) -> bool {
        match self {
            Fam1Certificate::Singleton(v) => {
                crate::hypergraph::Edge::new(&[*v]).is_ok_and(|e| h.contains_edge(&e))
            }
            Fam1Certificate::HotPath(w) => w.verify(h).is_ok(),
        }
    }
}

/// Singleton first, then a hot path.
pub fn fam1_certificate(h: &Hypergraph) -> Option<Fam1Certificate> {
    if let Some(v) = has_singleton(h) {
        return Some(Fam1Certificate::Singleton(v));
    }
    find_hot_path(h).map(Fam1Certificate::HotPath)
}

/// Cheap yes/no form of [`fam1_certificate`].
pub fn is_fam1(h: &Hypergraph) -> bool {
    has_singleton(h).is_some() || find_hot_path(h).is_some()
}

pub fn classify(g: &Game) -> EndgameClass {
    classify_position(g.hypergraph(), g.to_move())
}

/// Classification of a normalized hypergraph with `to_move` to play.
pub fn classify_position(h: &Hypergraph, to_move: Player) -> EndgameClass {
    match to_move {
        Player::Breaker if h.has_empty_edge() => EndgameClass {
            tag: EndgameTag::Fam0,
            certificate: Some(Certificate::EmptyEdge),
        },
        // with Maker to move these are terminal, not shortened endgames
        Player::Maker if h.has_empty_edge() || h.edge_count() == 0 => EndgameClass::NOT_ENDGAME,
        Player::Maker => match fam1_certificate(h) {
            Some(c) => EndgameClass {
                tag: EndgameTag::Fam1,
                certificate: Some(Certificate::Fam1(c)),
            },
            None => EndgameClass::NOT_ENDGAME,
        },
        Player::Breaker => {
            if h.vertex_count() == 0 || h.edge_count() == 0 {
                return EndgameClass::NOT_ENDGAME;
            }
            let mut replies = Vec::with_capacity(h.vertex_count());
            for y in h.vertices() {
                match fam1_certificate(&h.delete(y)) {
                    Some(c) => replies.push((y, c)),
                    None => return EndgameClass::NOT_ENDGAME,
                }
            }
            EndgameClass {
                tag: EndgameTag::Fam2,
                certificate: Some(Certificate::BreakerReplies(replies)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;

    fn game(edges: &[&[u32]], p: Player) -> Game {
        Game::new(Hypergraph::from_edges(edges.iter().map(|e| Edge::of(e))), p)
    }

    #[test]
    fn empty_edge_with_breaker_to_move() {
        let g = Game::new(Hypergraph::new(0, [Edge::EMPTY]).unwrap(), Player::Breaker);
        let c = classify(&g);
        assert_eq!(c.tag, EndgameTag::Fam0);
        assert!(c.verify(g.hypergraph(), g.to_move()));
    }

    #[test]
    fn v_shape_is_fam1() {
        let g = game(&[&[0, 1], &[1, 2]], Player::Maker);
        let c = classify(&g);
        assert_eq!(c.tag, EndgameTag::Fam1);
        assert!(matches!(
            c.certificate,
            Some(Certificate::Fam1(Fam1Certificate::HotPath(_)))
        ));
        assert!(c.verify(g.hypergraph(), g.to_move()));
    }

    #[test]
    fn two_v_shapes_breaker_to_move_is_fam2() {
        let g = game(&[&[0, 1], &[1, 2], &[3, 4], &[4, 5]], Player::Breaker);
        let c = classify(&g);
        assert_eq!(c.tag, EndgameTag::Fam2);
        match &c.certificate {
            Some(Certificate::BreakerReplies(r)) => assert_eq!(r.len(), 6),
            other => panic!("unexpected certificate {other:?}"),
        }
        assert!(c.verify(g.hypergraph(), g.to_move()));
    }

    #[test]
    fn terminal_positions_are_not_shortened_endgames() {
        let empty = Hypergraph::default();
        assert_eq!(
            classify_position(&empty, Player::Maker).tag,
            EndgameTag::NotEndgame
        );
        assert_eq!(
            classify_position(&empty, Player::Breaker).tag,
            EndgameTag::NotEndgame
        );
        // one v-shape: Breaker can take its center
        let g = game(&[&[0, 1], &[1, 2]], Player::Breaker);
        assert_eq!(classify(&g).tag, EndgameTag::NotEndgame);
    }

    #[test]
    fn tampered_certificate_fails() {
        let g = game(&[&[0, 1], &[1, 2]], Player::Maker);
        let c = classify(&g);
        assert!(!c.verify(g.hypergraph(), Player::Breaker));
        let other = game(&[&[0, 1], &[2, 3]], Player::Maker);
        assert!(!c.verify(other.hypergraph(), Player::Maker));
    }
}
