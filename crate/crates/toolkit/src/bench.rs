//! Node-count and timing benchmark for the solver.

use std::io::Write;
use std::path::Path;

use rank3::solver::{solve_with, SolveOptions};
use rank3::{Depth, Player};
use serde::Serialize;

use crate::generators::{gen_random_with, GenError, SizeWeights};

/// Triples only: sparse 3-uniform games rarely reach an endgame early, so the
/// search tree is expanded close to its full width.
pub const BENCH_WEIGHTS: SizeWeights = SizeWeights([0.0, 0.0, 1.0]);

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub m: usize,
    pub player: char,
    pub seed: u64,
    pub edges: usize,
    pub sdepth: Depth,
    pub nodes_visited: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub player: Player,
    pub records: Vec<BenchRecord>,
    /// Least-squares slope of log(mean nodes) against log(n).
    pub node_slope: f64,
    pub time_slope: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("sizes must be strictly increasing in n")]
    Unordered,
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Solves `trials` fresh random games for every `(n, m)`, sequentially and
/// single-threaded so times are comparable.
pub fn bench(
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
    player: Player,
) -> Result<BenchReport, BenchError> {
    if sizes.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(BenchError::Unordered);
    }
    let opts = SolveOptions {
        pruned: false,
        parallel: false,
    };
    let mut records = Vec::with_capacity(sizes.len() * trials);
    for &(n, m) in sizes {
        for t in 0..trials {
            let s = seed
                .wrapping_mul(1_000_003)
                .wrapping_add((n * 1000 + t) as u64);
            let g = gen_random_with(n, m, s, player, BENCH_WEIGHTS)?.game;
            let r = solve_with(&g, opts);
            records.push(BenchRecord {
                n,
                m,
                player: player.code(),
                seed: s,
                edges: g.hypergraph().edge_count(),
                sdepth: r.sdepth,
                nodes_visited: r.nodes_visited,
                wall_time_s: r.wall_time.as_secs_f64(),
            });
        }
    }
    let mean = |f: &dyn Fn(&BenchRecord) -> f64| -> Vec<(f64, f64)> {
        sizes
            .iter()
            .map(|&(n, _)| {
                let rs: Vec<f64> = records.iter().filter(|r| r.n == n).map(f).collect();
                (n as f64, rs.iter().sum::<f64>() / rs.len().max(1) as f64)
            })
            .collect()
    };
    let node_slope = loglog_slope(&mean(&|r| r.nodes_visited as f64));
    let time_slope = loglog_slope(&mean(&|r| r.wall_time_s));
    Ok(BenchReport {
        player,
        records,
        node_slope,
        time_slope,
    })
}

/// Slope of the least-squares line through `(ln x, ln y)`; NaN with fewer
/// than two usable points.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let cov: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if pts.len() < 2 || var == 0.0 {
        f64::NAN
    } else {
        cov / var
    }
}

pub fn write_csv(reports: &[BenchReport], path: &Path) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in reports.iter().flat_map(|r| &r.records) {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text summary, one line per record plus the fitted slopes.
pub fn write_summary(reports: &[BenchReport], out: &mut impl Write) -> std::io::Result<()> {
    for rep in reports {
        for r in &rep.records {
            writeln!(
                out,
                "{} n={:>3} m={:>4} edges={:>4} sdepth={:>3} nodes={:>10} time={:.4}s",
                r.player, r.n, r.m, r.edges, r.sdepth, r.nodes_visited, r.wall_time_s
            )?;
        }
        writeln!(
            out,
            "{}: node slope {:.2}, time slope {:.2}",
            rep.player, rep.node_slope, rep.time_slope
        )?;
    }
    Ok(())
}
