//! Exhaustive reference searches.
//!
//! Everything here works by brute force on small positions and shares no
//! search code with [`crate::solver`] or [`crate::hotpath::find_hot_path`]:
//! positions are bitmasks of the vertices taken by each side, and hot paths
//! are found by backtracking over every edge sequence.

use std::collections::{BTreeMap, HashMap};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::depth::Depth;
use crate::error::{Error, Result};
use crate::hotpath::{is_linear, EndKind, HotPathWitness, TwoEdgeEnd};
use crate::hypergraph::{Edge, Game, Hypergraph, Player, VertexId};

pub const DEFAULT_MAX_VERTICES: usize = 12;
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct OracleResult {
    pub winner: Player,
    /// Moves to a completed edge under optimal play in the unshortened game.
    pub dep: Depth,
    pub transposition_entries: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub max_vertices: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

pub fn full_minimax(g: &Game) -> Result<OracleResult> {
    Oracle::default().full_minimax(g)
}

pub fn shortened_minimax_uncapped(g: &Game) -> Result<Depth> {
    Oracle::default().shortened_minimax_uncapped(g)
}

impl Oracle {
    pub fn new(max_vertices: usize) -> Self {
        Oracle { max_vertices }
    }

    fn guard(&self, vertices: usize) -> Result<()> {
        let bound = self.max_vertices.min(63);
        if vertices > bound {
            return Err(Error::BoundExceeded { vertices, bound });
        }
        Ok(())
    }

    /// Exact winner and depth of the original game.
    pub fn full_minimax(&self, g: &Game) -> Result<OracleResult> {
        self.guard(g.vertex_count())?;
        self.minimax(Board::new(g))
    }

    /// Like [`Oracle::full_minimax`], but plays on `h` exactly as given,
    /// without normalizing it first.
    pub fn full_minimax_raw(&self, h: &Hypergraph, to_move: Player) -> Result<OracleResult> {
        self.guard(h.vertex_count())?;
        self.minimax(Board::from_parts(h, to_move))
    }

    fn minimax(&self, board: Board) -> Result<OracleResult> {
        let mut memo = HashMap::new();
        let dep = board.dep(0, 0, &mut memo);
        Ok(OracleResult {
            winner: if dep.is_finite() {
                Player::Maker
            } else {
                Player::Breaker
            },
            dep,
            transposition_entries: memo.len(),
        })
    }

    /// Exact shortened depth with no depth cap. Endgame membership is decided
    /// with [`hot_path_exists`].
    pub fn shortened_minimax_uncapped(&self, g: &Game) -> Result<Depth> {
        self.shortened_minimax_with(g, hot_path_exists)
    }

    /// Uncapped shortened minimax where `hot` decides whether a position
    /// (normalized, Maker to move, no singleton) holds a hot path.
    pub fn shortened_minimax_with(&self, g: &Game, hot: fn(&Hypergraph) -> bool) -> Result<Depth> {
        self.guard(g.vertex_count())?;
        let mut search = Shortened {
            board: Board::new(g),
            root: g.hypergraph().clone(),
            memo: HashMap::new(),
            fam1: HashMap::new(),
            hot,
        };
        Ok(search.sdep(0, 0))
    }

    /// Exact shortened depth of every legal move, keyed by current vertex id.
    pub fn shortened_children(&self, g: &Game) -> Result<Vec<(VertexId, Depth)>> {
        self.guard(g.vertex_count())?;
        g.hypergraph()
            .vertices()
            .map(|v| Ok((v, self.shortened_minimax_uncapped(&g.play(v)?)?)))
            .collect()
    }
}

/// A position as the masks of vertices taken by Maker and by Breaker.
struct Board {
    edges: Vec<u64>,
    all: u64,
    root: Player,
}

enum Status {
    Won,
    Lost,
    Open,
}

impl Board {
    fn new(g: &Game) -> Board {
        Board::from_parts(g.hypergraph(), g.to_move())
    }

    fn from_parts(h: &Hypergraph, to_move: Player) -> Board {
        let edges = h
            .edges()
            .iter()
            .map(|e| e.vertices().iter().fold(0u64, |m, v| m | 1 << v.0))
            .collect();
        let n = h.vertex_count();
        Board {
            edges,
            all: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
            root: to_move,
        }
    }

    fn to_move(&self, maker: u64, breaker: u64) -> Player {
        if (maker | breaker).count_ones().is_multiple_of(2) {
            self.root
        } else {
            self.root.opponent()
        }
    }

    fn status(&self, maker: u64, breaker: u64) -> Status {
        let mut alive = false;
        for &e in &self.edges {
            if e & breaker != 0 {
                continue;
            }
            if e & !maker == 0 {
                return Status::Won;
            }
            alive = true;
        }
        if alive {
            Status::Open
        } else {
            Status::Lost
        }
    }

    fn free(&self, maker: u64, breaker: u64) -> impl Iterator<Item = u64> {
        let mut rest = self.all & !(maker | breaker);
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let bit = rest & rest.wrapping_neg();
                rest &= !bit;
                bit
            })
        })
    }

    fn dep(&self, maker: u64, breaker: u64, memo: &mut HashMap<(u64, u64), Depth>) -> Depth {
        match self.status(maker, breaker) {
            Status::Won => return Depth::ZERO,
            Status::Lost => return Depth::Infinite,
            Status::Open => {}
        }
        if let Some(&d) = memo.get(&(maker, breaker)) {
            return d;
        }
        let d = match self.to_move(maker, breaker) {
            Player::Maker => self
                .free(maker, breaker)
                .map(|x| self.dep(maker | x, breaker, memo))
                .min(),
            Player::Breaker => self
                .free(maker, breaker)
                .map(|y| self.dep(maker, breaker | y, memo))
                .max(),
        }
        .expect("an open position has a free vertex")
        .succ();
        memo.insert((maker, breaker), d);
        d
    }

    /// The position as a hypergraph over the free vertices, normalized.
    fn position(&self, root: &Hypergraph, maker: u64, breaker: u64) -> Hypergraph {
        let ids = |m: u64| -> Vec<VertexId> {
            (0..64)
                .filter(|i| m & (1 << i) != 0)
                .map(VertexId)
                .collect()
        };
        root.restrict(&ids(maker), &ids(breaker))
            .expect("disjoint move sets")
            .0
            .normalize()
    }
}

struct Shortened {
    board: Board,
    root: Hypergraph,
    memo: HashMap<(u64, u64), Depth>,
    fam1: HashMap<(u64, u64), bool>,
    hot: fn(&Hypergraph) -> bool,
}

impl Shortened {
    fn is_fam1(&mut self, maker: u64, breaker: u64) -> bool {
        if let Some(&f) = self.fam1.get(&(maker, breaker)) {
            return f;
        }
        let h = self.board.position(&self.root, maker, breaker);
        let f = !h.has_empty_edge() && (h.edges().iter().any(|e| e.len() == 1) || (self.hot)(&h));
        self.fam1.insert((maker, breaker), f);
        f
    }

    fn sdep(&mut self, maker: u64, breaker: u64) -> Depth {
        match self.board.status(maker, breaker) {
            Status::Won => return Depth::ZERO,
            Status::Lost => return Depth::Infinite,
            Status::Open => {}
        }
        if let Some(&d) = self.memo.get(&(maker, breaker)) {
            return d;
        }
        let free: Vec<u64> = self.board.free(maker, breaker).collect();
        let to_move = self.board.to_move(maker, breaker);
        let endgame = match to_move {
            Player::Maker => self.is_fam1(maker, breaker),
            Player::Breaker => free.iter().all(|&y| self.is_fam1(maker, breaker | y)),
        };
        let d = if endgame {
            Depth::ZERO
        } else {
            let children = free.iter().map(|&v| match to_move {
                Player::Maker => (maker | v, breaker),
                Player::Breaker => (maker, breaker | v),
            });
            let values: Vec<Depth> = children
                .collect::<Vec<_>>()
                .into_iter()
                .map(|(m, b)| self.sdep(m, b))
                .collect();
            let best = match to_move {
                Player::Maker => values.into_iter().min(),
                Player::Breaker => values.into_iter().max(),
            };
            best.expect("an open position has a free vertex").succ()
        };
        self.memo.insert((maker, breaker), d);
        d
    }
}

/// Every hot path with at most `length_cap` intermediates, each listed once
/// (oriented so that `start.pair < end.pair`) with the first admissible
/// generator choice.
pub fn enumerate_hot_paths(h: &Hypergraph, length_cap: usize) -> Result<Vec<HotPathWitness>> {
    if h.vertex_count() > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            vertices: h.vertex_count(),
            bound: DEFAULT_ENUMERATION_BOUND,
        });
    }
    let mut e = Enumerator::new(h, length_cap, false);
    e.run();
    Ok(e.found)
}

/// Whether any hot path exists, by exhaustive backtracking. No size guard.
pub fn hot_path_exists(h: &Hypergraph) -> bool {
    let mut e = Enumerator::new(h, usize::MAX, true);
    e.run();
    !e.found.is_empty()
}

struct Enumerator {
    ends: Vec<TwoEdgeEnd>,
    triples: Vec<Edge>,
    cap: usize,
    first_only: bool,
    found: Vec<HotPathWitness>,
}

impl Enumerator {
    fn new(h: &Hypergraph, cap: usize, first_only: bool) -> Self {
        let triples: Vec<Edge> = h.edges().iter().filter(|e| e.len() == 3).copied().collect();
        let mut ends = Vec::new();
        let n = h.vertex_count() as u32;
        for a in 0..n {
            for b in a + 1..n {
                let pair = [VertexId(a), VertexId(b)];
                let proper = h.edges().iter().any(|e| e.vertices() == pair);
                let generators: Vec<VertexId> = triples
                    .iter()
                    .filter(|t| t.contains(pair[0]) && t.contains(pair[1]))
                    .flat_map(|t| t.vertices().iter().copied().filter(|v| !pair.contains(v)))
                    .collect();
                if proper {
                    ends.push(TwoEdgeEnd {
                        pair,
                        kind: EndKind::Proper,
                        generators: Vec::new(),
                    });
                } else if generators.len() >= 2 {
                    ends.push(TwoEdgeEnd {
                        pair,
                        kind: EndKind::Virtual,
                        generators,
                    });
                }
            }
        }
        Enumerator {
            ends,
            triples,
            cap,
            first_only,
            found: Vec::new(),
        }
    }

    fn done(&self) -> bool {
        self.first_only && !self.found.is_empty()
    }

    fn run(&mut self) {
        for a in 0..self.ends.len() {
            let mut seq = vec![self.ends[a].as_edge()];
            self.extend(a, &mut seq);
            if self.done() {
                return;
            }
        }
    }

    fn fits(seq: &[Edge], next: &Edge) -> bool {
        let (last, before) = seq.split_last().expect("non-empty sequence");
        last.intersection_len(next) == 1 && before.iter().all(|e| !e.meets(next))
    }

    fn extend(&mut self, a: usize, seq: &mut Vec<Edge>) {
        for b in a + 1..self.ends.len() {
            let close = self.ends[b].as_edge();
            if !Self::fits(seq, &close) {
                continue;
            }
            seq.push(close);
            if let Some(w) = self.admissible(a, b, seq) {
                debug_assert!(is_linear(seq));
                self.found.push(w);
            }
            seq.pop();
            if self.done() {
                return;
            }
        }
        if seq.len() > self.cap {
            return;
        }
        for t in 0..self.triples.len() {
            let next = self.triples[t];
            if Self::fits(seq, &next) {
                seq.push(next);
                self.extend(a, seq);
                seq.pop();
                if self.done() {
                    return;
                }
            }
        }
    }

    /// First generator choice keeping both virtual ends backed off-path.
    fn admissible(&self, a: usize, b: usize, seq: &[Edge]) -> Option<HotPathWitness> {
        let on_path = |g: &VertexId| seq.iter().any(|e| e.contains(*g));
        let options = |end: &TwoEdgeEnd| -> Vec<Option<[VertexId; 2]>> {
            if end.kind == EndKind::Proper {
                return vec![None];
            }
            let mut out = Vec::new();
            for (i, g1) in end.generators.iter().enumerate() {
                for g2 in &end.generators[i + 1..] {
                    if !on_path(g1) && !on_path(g2) {
                        out.push(Some([*g1, *g2]));
                    }
                }
            }
            out
        };
        let (sa, sb) = (&self.ends[a], &self.ends[b]);
        for ga in options(sa) {
            for gb in options(sb) {
                let clash = match (ga, gb) {
                    (Some(x), Some(y)) => x.iter().any(|g| y.contains(g)),
                    _ => false,
                };
                if !clash {
                    return Some(HotPathWitness {
                        start: sa.clone(),
                        end: sb.clone(),
                        intermediates: seq[1..seq.len() - 1].to_vec(),
                        start_generators: ga,
                        end_generators: gb,
                    });
                }
            }
        }
        None
    }
}

/// Every normalized game on `n` labeled vertices: each antichain of nonempty
/// edges of size at most 3 (the empty family included), isolated vertices
/// dropped. Only for `n <= 4`, where there are 2^14 edge subsets to filter.
pub fn antichains(n: usize) -> Result<Vec<Hypergraph>> {
    if n > 4 {
        return Err(Error::BoundExceeded {
            vertices: n,
            bound: 4,
        });
    }
    let all: Vec<Edge> = (1u32..1 << n)
        .filter(|s| s.count_ones() <= 3)
        .map(|s| {
            Edge::of(
                &(0..n as u32)
                    .filter(|i| s & (1 << i) != 0)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut out = Vec::new();
    for subset in 0u32..1 << all.len() {
        let edges: Vec<Edge> = (0..all.len())
            .filter(|i| subset & (1 << i) != 0)
            .map(|i| all[i])
            .collect();
        let antichain = edges
            .iter()
            .all(|e| edges.iter().all(|f| f == e || !f.is_subset(e)));
        if antichain {
            out.push(Hypergraph::new(n, edges).expect("ids are in range"));
        }
    }
    Ok(out)
}

/// A random normalized game on `n` vertices: between 1 and `2n` edges, each a
/// pair with a probability drawn per game from [0, 0.4], otherwise a triple.
pub fn sample_game<R: Rng>(rng: &mut R, n: usize, to_move: Player) -> Game {
    let m = rng.gen_range(1..=2 * n.max(1));
    let pairs = rng.gen_range(0.0..0.4);
    let edges: Vec<Edge> = (0..m)
        .filter_map(|_| {
            let k = if rng.gen_bool(pairs) { 2 } else { 3 };
            (k <= n).then(|| {
                let vs: Vec<u32> = sample(rng, n, k).iter().map(|v| v as u32).collect();
                Edge::of(&vs)
            })
        })
        .collect();
    Game::new(
        Hypergraph::new(n, edges).expect("ids are in range"),
        to_move,
    )
}

#[derive(Clone, Copy, Debug)]
pub struct MineOptions {
    pub max_vertices: usize,
    /// Random games per vertex count above 4.
    pub samples_per_size: usize,
    pub seed: u64,
}

impl Default for MineOptions {
    fn default() -> Self {
        MineOptions {
            max_vertices: 7,
            samples_per_size: 20_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct MineReport {
    /// Smallest game found for each (player to move, uncapped shortened
    /// depth), smallest meaning fewest vertices, then fewest edges.
    pub witnesses: BTreeMap<(Player, u32), Game>,
    /// Winning games whose uncapped shortened depth exceeds the cap for
    /// their starting player (3 for Maker, 4 for Breaker).
    pub over_cap: Vec<Game>,
    /// Most edges in a Breaker win, per vertex count.
    pub max_breaker_win_edges: BTreeMap<usize, usize>,
    pub games_examined: usize,
}

pub fn depth_bound(to_move: Player) -> u32 {
    match to_move {
        Player::Maker => 3,
        Player::Breaker => 4,
    }
}

/// Searches the game universe for small witnesses of every shortened depth:
/// exhaustively up to 4 vertices, by seeded sampling above that.
pub fn mine_witnesses(opts: MineOptions) -> Result<MineReport> {
    if opts.max_vertices > 8 {
        return Err(Error::BoundExceeded {
            vertices: opts.max_vertices,
            bound: 8,
        });
    }
    let mut games = Vec::new();
    for h in antichains(opts.max_vertices.min(4))? {
        for p in [Player::Maker, Player::Breaker] {
            games.push(Game::new(h.clone(), p));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for n in 5..=opts.max_vertices {
        for _ in 0..opts.samples_per_size {
            let p = if rng.gen() {
                Player::Maker
            } else {
                Player::Breaker
            };
            games.push(sample_game(&mut rng, n, p));
        }
    }
    let scored: Vec<(Game, Depth)> = games
        .into_par_iter()
        .map(|g| {
            let d = shortened_minimax_uncapped(&g)?;
            Ok((g, d))
        })
        .collect::<Result<_>>()?;

    let mut report = MineReport {
        games_examined: scored.len(),
        ..MineReport::default()
    };
    let size = |g: &Game| (g.vertex_count(), g.hypergraph().edge_count());
    for (g, d) in scored {
        match d {
            Depth::Infinite => {
                let best = report
                    .max_breaker_win_edges
                    .entry(g.vertex_count())
                    .or_insert(0);
                *best = (*best).max(g.hypergraph().edge_count());
            }
            Depth::Finite(v) => {
                if v > depth_bound(g.to_move()) {
                    report.over_cap.push(g.clone());
                }
                let slot = report.witnesses.entry((g.to_move(), v));
                match slot {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(g);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        if size(&g) < size(e.get()) {
                            e.insert(g);
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
