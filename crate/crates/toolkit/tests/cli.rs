use std::path::PathBuf;
use std::process::Command;

use rank3_toolkit::gamefile::parse_game;
use rank3_toolkit::service::children_view;

fn rank3(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rank3"))
        .args(args)
        .output()
        .unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap())
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/mined")
        .join(name)
}

#[test]
fn solve_children_json_matches_the_library() {
    let path = fixture("sdep3_M.game");
    let (ok, out) = rank3(&[
        "solve",
        path.to_str().unwrap(),
        "--children",
        "--best-move",
        "--json",
    ]);
    assert!(ok);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let g = parse_game(&std::fs::read_to_string(&path).unwrap())
        .unwrap()
        .game;
    assert_eq!(
        v["children"],
        serde_json::to_value(children_view(&g)).unwrap()
    );
    assert_eq!(v["sdepth"], 3);
    assert_eq!(v["principal_variation"].as_array().unwrap().len(), 3);
    assert_eq!(v["nonstrategic"], false);
}

#[test]
fn solve_and_oracle_agree_on_fixtures() {
    for name in ["sdep0_M.game", "sdep2_B.game", "sdep4_B.game"] {
        let path = fixture(name);
        let (ok, solved) = rank3(&["solve", path.to_str().unwrap()]);
        assert!(ok);
        let (ok, oracle) = rank3(&["oracle", path.to_str().unwrap()]);
        assert!(ok);
        let line = |text: &str, key: &str| {
            text.lines()
                .find(|l| l.starts_with(key))
                .unwrap()
                .to_string()
        };
        assert_eq!(line(&solved, "winner"), line(&oracle, "winner"));
        assert_eq!(
            line(&solved, "sdepth").replace("sdepth", "sdep"),
            line(&oracle, "sdep ")
        );
    }
}

#[test]
fn generated_games_parse_back() {
    let (ok, out) = rank3(&["gen", "extremal", "--n", "7", "--player", "b"]);
    assert!(ok);
    let g = parse_game(&out).unwrap().game;
    assert_eq!(g.hypergraph().edge_count(), 15);
    let (ok, out) = rank3(&["gen", "random", "--n", "12", "--m", "20", "--seed", "3"]);
    assert!(ok);
    assert!(parse_game(&out).is_ok());
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = std::env::temp_dir().join(format!("rank3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.game");
    std::fs::write(&bad, "player M\nedge a b c d\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rank3"))
        .args(["solve", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn small_verify_run_is_clean() {
    let (ok, out) = rank3(&[
        "verify",
        "--exhaustive-n",
        "3",
        "--sample",
        "200",
        "--n-range",
        "5:6",
    ]);
    assert!(ok, "{out}");
    assert!(out.contains("Winner: 0 violations"));
}
