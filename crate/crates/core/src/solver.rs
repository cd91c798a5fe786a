//! Depth-capped minimax over the shortened game.
//!
//! Every node is classified before it is expanded, so shortened endgames are
//! leaves with value 0. Below the cap a node that is not an endgame is worth
//! `Infinite`. A node searched with `r` plies to spare therefore gets its
//! exact shortened depth when that depth is at most `r`, and `Infinite`
//! otherwise. The root is searched with four plies, which is enough for every
//! game Maker can win.
//!
//! Node counts include every position constructed, also the Breaker replies
//! built only to test a `Fam2` candidate.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{
    classify_position, fam1_certificate, is_fam1, EndgameTag, Fam1Certificate,
};
use crate::depth::{Depth, SDepth};
use crate::error::{Error, Result};
use crate::hotpath::HotPathWitness;
use crate::hypergraph::{Game, Hypergraph, Player, VertexId};

pub const DEPTH_CAP: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Stop scanning children once the side to move cannot do better.
    /// Changes `nodes_visited` but never the value.
    pub pruned: bool,
    /// Search root children on the rayon pool. Ignored in pruned mode.
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pruned: false,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub winner: Player,
    pub sdepth: SDepth,
    /// Classification of the root position.
    pub class: EndgameTag,
    /// In the ids of the solved game. `None` once the game is decided.
    pub best_move: Option<VertexId>,
    /// Set when `best_move` comes from a position Maker has already lost.
    pub nonstrategic: bool,
    /// Moves from the root down to a shortened endgame, in root ids.
    /// Only for positions Maker wins.
    pub principal_variation: Option<Vec<VertexId>>,
    pub nodes_visited: u64,
    pub wall_time: Duration,
}

/// A chosen move together with the value of the position it was chosen in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MoveChoice {
    pub vertex: VertexId,
    pub sdepth: SDepth,
    pub nonstrategic: bool,
}

pub fn solve(g: &Game) -> SolveResult {
    solve_with(g, SolveOptions::default())
}

pub fn solve_with(g: &Game, opts: SolveOptions) -> SolveResult {
    let start = Instant::now();
    let h = g.hypergraph();
    let p = g.to_move();
    let class = classify_position(h, p).tag;
    let mut search = Search { opts, nodes: 1 };

    let (sdepth, best_move, nonstrategic) = if g.outcome().is_some() {
        let d = if h.has_empty_edge() {
            Depth::ZERO
        } else {
            Depth::Infinite
        };
        (d, None, false)
    } else if class != EndgameTag::NotEndgame {
        let v = match p {
            Player::Maker => fam1_move(h),
            // every reply leaves Maker a won position
            Player::Breaker => h.vertices().next(),
        };
        (Depth::ZERO, v, false)
    } else {
        let values = search.root_children(h, p);
        let value = match p {
            Player::Maker => values.iter().min(),
            Player::Breaker => values.iter().max(),
        }
        .expect("undecided position has a move")
        .succ();
        let lost = p == Player::Maker && !value.is_finite();
        let v = if lost {
            most_threatening(h)
        } else {
            values
                .iter()
                .position(|&d| d.succ() == value)
                .map(VertexId::from)
        };
        (value, v, lost)
    };

    let principal_variation = sdepth
        .is_finite()
        .then(|| principal_variation(h, p, best_move, sdepth));
    SolveResult {
        winner: if sdepth.is_finite() {
            Player::Maker
        } else {
            Player::Breaker
        },
        sdepth,
        class,
        best_move,
        nonstrategic,
        principal_variation,
        nodes_visited: search.nodes,
        wall_time: start.elapsed(),
    }
}

/// The move `solve` recommends.
pub fn best_move(g: &Game) -> Result<MoveChoice> {
    if g.outcome().is_some() {
        return Err(Error::Terminal);
    }
    let r = solve(g);
    let vertex = r.best_move.ok_or(Error::Terminal)?;
    Ok(MoveChoice {
        vertex,
        sdepth: r.sdepth,
        nonstrategic: r.nonstrategic,
    })
}

/// Exact shortened depth after each legal move, each child solved on its own.
pub fn evaluate_children(g: &Game) -> Result<BTreeMap<VertexId, SDepth>> {
    if g.outcome().is_some() {
        return Err(Error::Terminal);
    }
    let children: Vec<VertexId> = g.hypergraph().vertices().collect();
    children
        .into_par_iter()
        .map(|v| Ok((v, solve(&g.play(v)?).sdepth)))
        .collect()
}

/// Whether a finite value at a root with `to_move` to play has the parity
/// every shortened depth must have: even for Breaker, 0 or odd for Maker.
pub fn parity_holds(to_move: Player, d: SDepth) -> bool {
    match (to_move, d) {
        (_, Depth::Infinite) => true,
        (Player::Breaker, Depth::Finite(v)) => v % 2 == 0,
        (Player::Maker, Depth::Finite(v)) => v == 0 || v % 2 == 1,
    }
}

struct Search {
    opts: SolveOptions,
    nodes: u64,
}

impl Search {
    /// Capped values of the root's children, in vertex order.
    fn root_children(&mut self, h: &Hypergraph, p: Player) -> Vec<Depth> {
        let child = |h: &Hypergraph, v: VertexId| match p {
            Player::Maker => h.withdraw(v),
            Player::Breaker => h.delete(v),
        };
        let vertices: Vec<VertexId> = h.vertices().collect();
        if self.opts.parallel && !self.opts.pruned {
            let opts = self.opts;
            let results: Vec<(Depth, u64)> = vertices
                .par_iter()
                .map(|&v| {
                    let mut s = Search { opts, nodes: 1 };
                    let c = child(h, v);
                    let d = s.value(&c, p.opponent(), DEPTH_CAP - 1, None);
                    (d, s.nodes)
                })
                .collect();
            self.nodes += results.iter().map(|r| r.1).sum::<u64>();
            return results.into_iter().map(|r| r.0).collect();
        }
        let mut values = Vec::with_capacity(vertices.len());
        for v in vertices {
            self.nodes += 1;
            let d = self.value(&child(h, v), p.opponent(), DEPTH_CAP - 1, None);
            values.push(d);
            if self.opts.pruned && cannot_improve(p, d) {
                break;
            }
        }
        values
    }

    /// Capped shortened depth of `h` with `p` to move and `r` plies left.
    /// `fam1` carries an already computed endgame test for Maker nodes.
    fn value(&mut self, h: &Hypergraph, p: Player, r: u32, fam1: Option<bool>) -> Depth {
        if h.has_empty_edge() {
            return Depth::ZERO;
        }
        if h.edge_count() == 0 {
            return Depth::Infinite;
        }
        match p {
            Player::Maker => {
                if fam1.unwrap_or_else(|| is_fam1(h)) {
                    return Depth::ZERO;
                }
                if r == 0 {
                    return Depth::Infinite;
                }
                let mut best = Depth::Infinite;
                for x in h.vertices() {
                    self.nodes += 1;
                    let d = self.value(&h.withdraw(x), Player::Breaker, r - 1, None);
                    best = best.min(d);
                    if self.opts.pruned && cannot_improve(p, d) {
                        break;
                    }
                }
                best.succ()
            }
            Player::Breaker => {
                if r == 0 {
                    // only a Fam2 test is left; it fails at the first bad reply
                    for y in h.vertices() {
                        self.nodes += 1;
                        if !is_fam1(&h.delete(y)) {
                            return Depth::Infinite;
                        }
                    }
                    return Depth::ZERO;
                }
                let children: Vec<(Hypergraph, bool)> = h
                    .vertices()
                    .map(|y| {
                        let c = h.delete(y);
                        let f = is_fam1(&c);
                        (c, f)
                    })
                    .collect();
                self.nodes += children.len() as u64;
                if children.iter().all(|c| c.1) {
                    return Depth::ZERO;
                }
                let mut worst = Depth::ZERO;
                for (c, f) in &children {
                    let d = self.value(c, Player::Maker, r - 1, Some(*f));
                    worst = worst.max(d);
                    if self.opts.pruned && cannot_improve(p, d) {
                        break;
                    }
                }
                worst.succ()
            }
        }
    }
}

fn cannot_improve(p: Player, d: Depth) -> bool {
    match p {
        Player::Maker => d == Depth::ZERO,
        Player::Breaker => d == Depth::Infinite,
    }
}

/// The opening move of the winning line behind a `Fam1` certificate: the
/// singleton, or the vertex where the path leaves its first end.
fn fam1_move(h: &Hypergraph) -> Option<VertexId> {
    match fam1_certificate(h)? {
        Fam1Certificate::Singleton(v) => Some(v),
        Fam1Certificate::HotPath(w) => Some(hot_path_move(&w)),
    }
}

fn hot_path_move(w: &HotPathWitness) -> VertexId {
    let next = w
        .intermediates
        .first()
        .copied()
        .unwrap_or_else(|| w.end.as_edge());
    *w.start
        .pair
        .iter()
        .find(|v| next.contains(**v))
        .expect("consecutive path edges meet")
}

/// For a lost Maker position: the move after which the most Breaker replies
/// would hand Maker a `Fam1` position. Ties go to the smallest vertex.
fn most_threatening(h: &Hypergraph) -> Option<VertexId> {
    h.vertices()
        .map(|x| {
            let c = h.withdraw(x);
            let threats = if c.has_empty_edge() {
                usize::MAX
            } else {
                c.vertices().filter(|&y| is_fam1(&c.delete(y))).count()
            };
            (x, threats)
        })
        .fold(None, |best: Option<(VertexId, usize)>, (x, t)| match best {
            Some((_, bt)) if bt >= t => best,
            _ => Some((x, t)),
        })
        .map(|(x, _)| x)
}

/// Follows optimal moves from a won root down to a shortened endgame.
fn principal_variation(
    h: &Hypergraph,
    p: Player,
    first: Option<VertexId>,
    value: Depth,
) -> Vec<VertexId> {
    let mut ids: Vec<VertexId> = h.vertices().collect();
    let mut pv = Vec::new();
    let (mut h, mut p, mut value) = (h.clone(), p, value);
    let mut next = first;
    let mut search = Search {
        opts: SolveOptions {
            pruned: true,
            parallel: false,
        },
        nodes: 0,
    };
    while let (Some(v), Depth::Finite(d)) = (next, value) {
        if d == 0 {
            break;
        }
        pv.push(ids.remove(v.index()));
        h = match p {
            Player::Maker => h.withdraw(v),
            Player::Breaker => h.delete(v),
        };
        p = p.opponent();
        value = Depth::Finite(d - 1);
        if d == 1 {
            break;
        }
        // the child's value is exact, so some grandchild attains value - 1
        let target = Depth::Finite(d - 2);
        next = h.vertices().find(|&u| {
            let c = match p {
                Player::Maker => h.withdraw(u),
                Player::Breaker => h.delete(u),
            };
            search.value(&c, p.opponent(), d - 2, None) == target
        });
    }
    pv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;

    fn game(edges: &[&[u32]], p: Player) -> Game {
        Game::new(Hypergraph::from_edges(edges.iter().map(|e| Edge::of(e))), p)
    }

    #[test]
    fn no_edges_is_lost() {
        let r = solve(&Game::new(Hypergraph::default(), Player::Maker));
        assert_eq!(r.winner, Player::Breaker);
        assert_eq!(r.sdepth, Depth::Infinite);
        assert_eq!(r.best_move, None);
    }

    #[test]
    fn v_shape() {
        let r = solve(&game(&[&[0, 1], &[0, 2]], Player::Maker));
        assert_eq!(r.sdepth, Depth::ZERO);
        assert_eq!(r.winner, Player::Maker);
        assert_eq!(r.best_move, Some(VertexId(0)));
        assert_eq!(r.principal_variation, Some(vec![]));
    }

    #[test]
    fn extremal_four_is_lost_for_both() {
        let edges: &[&[u32]] = &[&[0, 1, 2], &[0, 1, 3], &[2, 3, 0], &[2, 3, 1]];
        for p in [Player::Maker, Player::Breaker] {
            let r = solve(&game(edges, p));
            assert_eq!(r.winner, Player::Breaker, "{p:?}");
            assert_eq!(r.nonstrategic, p == Player::Maker);
            assert!(r.best_move.is_some());
        }
    }

    #[test]
    fn pruning_keeps_values() {
        let g = game(
            &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0], &[1, 3, 5]],
            Player::Maker,
        );
        let a = solve_with(&g, SolveOptions::default());
        let b = solve_with(
            &g,
            SolveOptions {
                pruned: true,
                parallel: false,
            },
        );
        let c = solve_with(
            &g,
            SolveOptions {
                pruned: false,
                parallel: false,
            },
        );
        assert_eq!(a.sdepth, b.sdepth);
        assert_eq!(a.best_move, b.best_move);
        assert_eq!(a.nodes_visited, c.nodes_visited);
        assert!(b.nodes_visited <= c.nodes_visited);
    }

    #[test]
    fn terminal_positions_have_no_move() {
        let won = Game::new(Hypergraph::new(0, [Edge::EMPTY]).unwrap(), Player::Breaker);
        assert_eq!(best_move(&won), Err(Error::Terminal));
        assert_eq!(solve(&won).sdepth, Depth::ZERO);
        assert_eq!(evaluate_children(&won), Err(Error::Terminal));
    }

    #[test]
    fn children_of_two_v_shapes() {
        let g = game(&[&[0, 1], &[1, 2], &[3, 4], &[4, 5]], Player::Breaker);
        assert_eq!(solve(&g).sdepth, Depth::ZERO);
        let children = evaluate_children(&g).unwrap();
        assert_eq!(children.len(), 6);
        assert!(children.values().all(|&d| d == Depth::ZERO));
    }

    #[test]
    fn parity_rule() {
        assert!(parity_holds(Player::Maker, Depth::Finite(3)));
        assert!(parity_holds(Player::Maker, Depth::ZERO));
        assert!(!parity_holds(Player::Maker, Depth::Finite(2)));
        assert!(!parity_holds(Player::Breaker, Depth::Finite(1)));
    }
}
