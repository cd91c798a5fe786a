use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rank3::oracle::{mine_witnesses, MineOptions, Oracle};
use rank3::solver::{solve_with, SolveOptions};
use rank3::{Game, Player};
use rank3_toolkit::bench::{bench, write_csv, write_summary};
use rank3_toolkit::gamefile::{parse_game, write_game};
use rank3_toolkit::generators::{gen_extremal, gen_random};
use rank3_toolkit::service::{children_view, serve};
use rank3_toolkit::verify::{verify, Check, CheckOutcome, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "rank3",
    version,
    about = "Rank-3 Maker-Breaker solver and tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    M,
    B,
}

impl From<Side> for Player {
    fn from(s: Side) -> Player {
        match s {
            Side::M => Player::Maker,
            Side::B => Player::Breaker,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchSide {
    M,
    B,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a game file.
    Solve {
        file: PathBuf,
        #[arg(long)]
        best_move: bool,
        /// Exact value of every move.
        #[arg(long)]
        children: bool,
        #[arg(long)]
        json: bool,
        /// Skip children that cannot change a node's value.
        #[arg(long)]
        pruned: bool,
    },
    /// Exhaustive minimax on a small game file.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = rank3::oracle::DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
    /// Compare the solver with the oracle on small games.
    Verify {
        #[arg(long, default_value_t = 4)]
        exhaustive_n: usize,
        #[arg(long, default_value_t = 10_000)]
        sample: usize,
        #[arg(long, default_value = "5:9", value_parser = parse_range)]
        n_range: (usize, usize),
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find the smallest game for every shortened depth.
    Mine {
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write one game file per witness here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a generated game file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Time the solver on random 3-uniform games.
    Bench {
        /// Comma-separated `n:m` pairs; a bare `n` means m = n/2.
        #[arg(long, value_parser = parse_sizes)]
        sizes: Sizes,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "both")]
        player: BenchSide,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the JSON game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "m")]
        player: Side,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "m")]
        player: Side,
    },
}

#[derive(Clone)]
struct Sizes(Vec<(usize, usize)>);

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = a.parse().map_err(|e| format!("{e}"))?;
    let hi = b.parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("LO must not exceed HI".into());
    }
    Ok((lo, hi))
}

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    s.split(',')
        .map(|item| {
            let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
            match item.split_once(':') {
                Some((n, m)) => Ok((num(n)?, num(m)?)),
                None => {
                    let n = num(item)?;
                    Ok((n, n / 2))
                }
            }
        })
        .collect::<Result<_, _>>()
        .map(Sizes)
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

type Outcome = Result<ExitCode, Box<dyn std::error::Error>>;

fn load(path: &Path) -> Result<Game, Box<dyn std::error::Error>> {
    let parsed = parse_game(&fs::read_to_string(path)?)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.game)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Solve {
            file,
            best_move,
            children,
            json,
            pruned,
        } => solve_cmd(&load(&file)?, best_move, children, json, pruned),
        Command::Oracle { file, max_vertices } => {
            let g = load(&file)?;
            let oracle = Oracle::new(max_vertices);
            let full = oracle.full_minimax(&g)?;
            let short = oracle.shortened_minimax_uncapped(&g)?;
            println!("winner {}", full.winner);
            println!("dep {}", full.dep);
            println!("sdep {short}");
            println!("positions {}", full.transposition_entries);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            exhaustive_n,
            sample,
            n_range,
            seed,
        } => {
            let report = verify(VerifyOptions {
                exhaustive_n,
                sample,
                n_range,
                seed,
            });
            let mut clean = true;
            for (name, o) in [
                ("exhaustive", &report.exhaustive),
                ("sampled", &report.sampled),
            ] {
                clean &= print_outcome(name, o);
            }
            Ok(if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Mine {
            max_vertices,
            samples,
            seed,
            out,
        } => {
            let report = mine_witnesses(MineOptions {
                max_vertices,
                samples_per_size: samples,
                seed,
            })?;
            println!("games examined {}", report.games_examined);
            for ((p, v), g) in &report.witnesses {
                println!(
                    "{} sdep {v}: {} vertices, {} edges",
                    p.code(),
                    g.vertex_count(),
                    g.hypergraph().edge_count()
                );
                if let Some(dir) = &out {
                    fs::create_dir_all(dir)?;
                    let text = format!(
                        "# smallest mined game with shortened depth {v}, {p} to move\n{}",
                        write_game(g)
                    );
                    fs::write(dir.join(format!("sdep{v}_{}.game", p.code())), text)?;
                }
            }
            for (n, m) in &report.max_breaker_win_edges {
                println!("most edges in a Breaker win on {n} vertices: {m}");
            }
            println!("over the depth bound: {}", report.over_cap.len());
            for g in &report.over_cap {
                print!("{}", write_game(g));
            }
            Ok(if report.over_cap.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Gen { kind } => {
            let g = match kind {
                GenKind::Extremal { n, player } => gen_extremal(n, player.into())?,
                GenKind::Random { n, m, seed, player } => {
                    let r = gen_random(n, m, seed, player.into())?;
                    eprintln!(
                        "{} of {} edges left after normalizing",
                        r.realized, r.requested
                    );
                    r.game
                }
            };
            print!("{}", write_game(&g));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            sizes,
            trials,
            seed,
            player,
            csv,
        } => {
            let sides = match player {
                BenchSide::M => vec![Player::Maker],
                BenchSide::B => vec![Player::Breaker],
                BenchSide::Both => vec![Player::Maker, Player::Breaker],
            };
            let reports = sides
                .into_iter()
                .map(|p| bench(&sizes.0, trials, seed, p))
                .collect::<Result<Vec<_>, _>>()?;
            write_summary(&reports, &mut std::io::stdout())?;
            if let Some(path) = csv {
                write_csv(&reports, &path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { port, static_dir } => {
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://127.0.0.1:{port}");
            rt.block_on(serve(port, static_dir))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn solve_cmd(g: &Game, best_move: bool, children: bool, json: bool, pruned: bool) -> Outcome {
    let r = solve_with(
        g,
        SolveOptions {
            pruned,
            ..SolveOptions::default()
        },
    );
    let label = |v| g.label(v);
    let kids = children.then(|| children_view(g));
    if json {
        let mut out = serde_json::json!({
            "winner": r.winner,
            "sdepth": r.sdepth,
            "class": r.class,
            "nodes_visited": r.nodes_visited,
            "wall_time_s": r.wall_time.as_secs_f64(),
            "principal_variation": r.principal_variation.as_ref()
                .map(|pv| pv.iter().map(|&v| label(v)).collect::<Vec<_>>()),
        });
        if best_move {
            out["best_move"] = serde_json::json!(r.best_move.map(label));
            out["nonstrategic"] = serde_json::json!(r.nonstrategic);
        }
        if let Some(k) = kids {
            out["children"] = serde_json::to_value(k)?;
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ExitCode::SUCCESS);
    }
    println!("winner {}", r.winner);
    println!("sdepth {}", r.sdepth);
    println!("class {:?}", r.class);
    if let Some(pv) = &r.principal_variation {
        let moves: Vec<String> = pv.iter().map(|&v| label(v)).collect();
        println!("line {}", moves.join(" "));
    }
    println!("nodes {}", r.nodes_visited);
    println!("time {:.3}s", r.wall_time.as_secs_f64());
    if best_move {
        match r.best_move {
            Some(v) if r.nonstrategic => println!("best_move {} (nonstrategic)", label(v)),
            Some(v) => println!("best_move {}", label(v)),
            None => println!("best_move none"),
        }
    }
    for (v, d) in kids.into_iter().flatten() {
        match d {
            Some(d) => println!("child {v} {d}"),
            None => println!("child {v} inf"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_outcome(name: &str, o: &CheckOutcome) -> bool {
    println!("{name}: {} games", o.games);
    for check in [
        Check::Winner,
        Check::DepthBound,
        Check::Parity,
        Check::RootExact,
        Check::WinningMove,
    ] {
        println!("  {check:?}: {} violations", o.count(check));
    }
    for (k, v) in &o.sdepth_histogram {
        println!("  sdepth {k}: {v}");
    }
    for v in o.violations.iter().take(5) {
        println!("  {:?} {}\n{}", v.check, v.detail, v.game);
    }
    o.violations.is_empty()
}
