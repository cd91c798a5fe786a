//! Game generators.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rank3::{Edge, Game, Hypergraph, Player};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("the construction needs n >= 3, got {0}")]
    TooFewVertices(usize),
    #[error("{requested} distinct edges requested but only {available} exist")]
    Infeasible { requested: usize, available: usize },
    #[error("size weights must not all be zero")]
    NoSizes,
}

/// Vertices u1..un and the edges {u_{2k-1}, u_{2k}, u} for every k and every
/// other vertex u: (n-2)*floor(n/2) edges. Breaker wins it whoever starts.
pub fn gen_extremal(n: usize, to_move: Player) -> Result<Game, GenError> {
    if n < 3 {
        return Err(GenError::TooFewVertices(n));
    }
    let mut edges = Vec::with_capacity((n - 2) * (n / 2));
    for k in 0..n / 2 {
        let (a, b) = (2 * k, 2 * k + 1);
        for u in (0..n).filter(|&u| u != a && u != b) {
            edges.push(Edge::of(&[a as u32, b as u32, u as u32]));
        }
    }
    let labels = (1..=n).map(|i| format!("u{i}")).collect();
    let h = Hypergraph::new(n, edges).expect("ids are in range");
    Ok(Game::new(h, to_move)
        .with_labels(labels)
        .expect("distinct labels"))
}

/// Relative frequencies of edge sizes 1, 2 and 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeWeights(pub [f64; 3]);

impl Default for SizeWeights {
    fn default() -> Self {
        SizeWeights([0.0, 1.0, 4.0])
    }
}

#[derive(Clone, Debug)]
pub struct RandomGame {
    pub game: Game,
    pub requested: usize,
    /// Edge count after normalization.
    pub realized: usize,
}

pub fn gen_random(n: usize, m: usize, seed: u64, to_move: Player) -> Result<RandomGame, GenError> {
    gen_random_with(n, m, seed, to_move, SizeWeights::default())
}

/// `m` distinct edges drawn without replacement, sizes chosen by `weights`,
/// then normalized. Isolated vertices are kept.
pub fn gen_random_with(
    n: usize,
    m: usize,
    seed: u64,
    to_move: Player,
    weights: SizeWeights,
) -> Result<RandomGame, GenError> {
    if weights.0.iter().all(|&w| w <= 0.0) {
        return Err(GenError::NoSizes);
    }
    let capacity: Vec<usize> = (1..=3)
        .map(|k| {
            if weights.0[k - 1] > 0.0 {
                binomial(n, k)
            } else {
                0
            }
        })
        .collect();
    let available = capacity.iter().sum();
    if m > available {
        return Err(GenError::Infeasible {
            requested: m,
            available,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: HashSet<Edge> = HashSet::with_capacity(m);
    let mut used = [0usize; 3];
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let open: Vec<f64> = (0..3)
            .map(|i| {
                if used[i] < capacity[i] {
                    weights.0[i].max(0.0)
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = open.iter().sum();
        let mut pick = rng.gen_range(0.0..total);
        let mut size = 0;
        while size < 2 && (pick >= open[size] || open[size] == 0.0) {
            pick -= open[size];
            size += 1;
        }
        let k = size + 1;
        let edge = if used[size] * 2 < capacity[size] {
            loop {
                let vs: Vec<u32> = sample(&mut rng, n, k).iter().map(|v| v as u32).collect();
                let e = Edge::of(&vs);
                if !chosen.contains(&e) {
                    break e;
                }
            }
        } else {
            let rest: Vec<Edge> = subsets(n, k)
                .into_iter()
                .filter(|e| !chosen.contains(e))
                .collect();
            rest[rng.gen_range(0..rest.len())]
        };
        chosen.insert(edge);
        used[size] += 1;
        edges.push(edge);
    }
    let h = Hypergraph::new(n, edges).expect("ids are in range");
    let game = Game::with_isolated(h, to_move);
    let realized = game.hypergraph().edge_count();
    Ok(RandomGame {
        game,
        requested: m,
        realized,
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn subsets(n: usize, k: usize) -> Vec<Edge> {
    let n = n as u32;
    let mut out = Vec::new();
    for a in 0..n {
        if k == 1 {
            out.push(Edge::of(&[a]));
            continue;
        }
        for b in a + 1..n {
            if k == 2 {
                out.push(Edge::of(&[a, b]));
                continue;
            }
            out.extend((b + 1..n).map(|c| Edge::of(&[a, b, c])));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremal_counts() {
        assert_eq!(
            gen_extremal(4, Player::Maker)
                .unwrap()
                .hypergraph()
                .edge_count(),
            4
        );
        assert_eq!(
            gen_extremal(5, Player::Maker)
                .unwrap()
                .hypergraph()
                .edge_count(),
            6
        );
        assert_eq!(
            gen_extremal(6, Player::Maker)
                .unwrap()
                .hypergraph()
                .edge_count(),
            12
        );
        assert_eq!(
            gen_extremal(2, Player::Maker).unwrap_err(),
            GenError::TooFewVertices(2)
        );
    }

    #[test]
    fn extremal_four_matches_the_listing() {
        let g = gen_extremal(4, Player::Maker).unwrap();
        let e = |v: &[u32]| Edge::of(v);
        assert_eq!(
            g.hypergraph().edges(),
            &[e(&[0, 1, 2]), e(&[0, 1, 3]), e(&[0, 2, 3]), e(&[1, 2, 3])]
        );
        assert_eq!(g.label(rank3::VertexId(0)), "u1");
    }

    #[test]
    fn subsets_are_complete() {
        for n in 0..7 {
            for k in 1..=3 {
                let all: HashSet<Edge> = subsets(n, k).into_iter().collect();
                assert_eq!(all.len(), binomial(n, k), "n={n} k={k}");
                assert!(all.iter().all(|e| e.len() == k));
            }
        }
    }

    #[test]
    fn random_is_deterministic() {
        let a = gen_random(3, 3, 11, Player::Maker).unwrap();
        let b = gen_random(3, 3, 11, Player::Maker).unwrap();
        assert_eq!(a.game, b.game);
        assert_eq!(a.requested, 3);
    }

    #[test]
    fn infeasible_request() {
        let only_singletons = SizeWeights([1.0, 0.0, 0.0]);
        assert_eq!(
            gen_random_with(1, 2, 0, Player::Maker, only_singletons).unwrap_err(),
            GenError::Infeasible {
                requested: 2,
                available: 1
            }
        );
    }

    #[test]
    fn every_edge_can_be_drawn() {
        let r = gen_random(5, 20, 3, Player::Breaker).unwrap();
        assert_eq!(r.game.vertex_count(), 5);
        // all ten pairs are drawn, so every triple is normalized away
        assert_eq!(r.realized, 10);
    }
}
