//! Solver-against-oracle sweeps.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rank3::hotpath::find_hot_path;
use rank3::oracle::{
    antichains, depth_bound, full_minimax, sample_game, shortened_minimax_uncapped, Oracle,
};
use rank3::solver::{parity_holds, solve};
use rank3::{Depth, Game, Player};
use rayon::prelude::*;
use serde::Serialize;

use crate::gamefile::write_game;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub exhaustive_n: usize,
    pub sample: usize,
    pub n_range: (usize, usize),
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive_n: 4,
            sample: 10_000,
            n_range: (5, 9),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Check {
    /// Solver, full minimax and uncapped shortened minimax name one winner.
    Winner,
    /// Uncapped shortened depth of a won game is at most 3 (Maker first) or
    /// 4 (Breaker first).
    DepthBound,
    /// Every finite value has the parity of its starting player.
    Parity,
    /// The solver's root equals uncapped shortened minimax run with the same
    /// endgame test.
    RootExact,
    /// A recommended move for Maker in a won game keeps the game won.
    WinningMove,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: Check,
    pub game: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckOutcome {
    pub games: usize,
    pub violations: Vec<Violation>,
    /// Games per (player to move, solver sdepth); `None` for Breaker wins.
    pub sdepth_histogram: BTreeMap<String, usize>,
}

impl CheckOutcome {
    pub fn count(&self, check: Check) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }

    fn merge(mut self, other: CheckOutcome) -> CheckOutcome {
        self.games += other.games;
        self.violations.extend(other.violations);
        for (k, v) in other.sdepth_histogram {
            *self.sdepth_histogram.entry(k).or_default() += v;
        }
        self
    }
}

/// Runs every check on one game.
pub fn check_game(g: &Game) -> CheckOutcome {
    let full = full_minimax(g).expect("game within oracle bound");
    let short = shortened_minimax_uncapped(g).expect("game within oracle bound");
    let same_test = Oracle::default()
        .shortened_minimax_with(g, |h| find_hot_path(h).is_some())
        .expect("game within oracle bound");
    let r = solve(g);
    let p = g.to_move();
    let mut out = CheckOutcome {
        games: 1,
        ..CheckOutcome::default()
    };
    let mut fail = |check, detail: String| {
        out.violations.push(Violation {
            check,
            game: write_game(g),
            detail,
        })
    };
    let values = format!("dep={} sdep={} solver={}", full.dep, short, r.sdepth);
    if r.winner != full.winner || short.is_finite() != full.dep.is_finite() {
        fail(Check::Winner, values.clone());
    }
    if short.value().is_some_and(|v| v > depth_bound(p)) {
        fail(Check::DepthBound, values.clone());
    }
    if ![full.dep, short, r.sdepth]
        .iter()
        .all(|&d| parity_holds(p, d))
    {
        fail(Check::Parity, values.clone());
    }
    let capped = match same_test {
        Depth::Finite(v) if v <= rank3::solver::DEPTH_CAP => same_test,
        _ => Depth::Infinite,
    };
    if capped != r.sdepth {
        fail(Check::RootExact, format!("{values} same-test={same_test}"));
    }
    if let (Player::Maker, true, Some(v)) = (p, full.dep.is_finite(), r.best_move) {
        let after = g.play(v).expect("recommended move is legal");
        if !full_minimax(&after).expect("smaller game").dep.is_finite() {
            fail(Check::WinningMove, format!("{values} move={}", g.label(v)));
        }
    }
    let key = format!("{}:{}", p.code(), r.sdepth);
    out.sdepth_histogram.insert(key, 1);
    out
}

/// Every normalized game on at most `n <= 4` vertices, both players to move.
pub fn exhaustive_universe(n: usize) -> Vec<Game> {
    antichains(n)
        .expect("n <= 4")
        .into_iter()
        .flat_map(|h| [Player::Maker, Player::Breaker].map(|p| Game::new(h.clone(), p)))
        .collect()
}

/// Seeded random games with vertex counts in `range`, inclusive.
pub fn sampled_universe(count: usize, range: (usize, usize), seed: u64) -> Vec<Game> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(range.0..=range.1);
            let p = if rng.gen() {
                Player::Maker
            } else {
                Player::Breaker
            };
            sample_game(&mut rng, n, p)
        })
        .collect()
}

pub fn check_all(games: &[Game]) -> CheckOutcome {
    games
        .par_iter()
        .map(check_game)
        .reduce(CheckOutcome::default, CheckOutcome::merge)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub exhaustive: CheckOutcome,
    pub sampled: CheckOutcome,
}

pub fn verify(opts: VerifyOptions) -> VerifyReport {
    VerifyReport {
        exhaustive: check_all(&exhaustive_universe(opts.exhaustive_n)),
        sampled: check_all(&sampled_universe(opts.sample, opts.n_range, opts.seed)),
    }
}
