use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const FILES: [&str; 6] = ["inventories.csv", "prices.csv", "nlp.csv", "trades.csv", "flow.txt", "cycle.txt"];

fn mmsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmsim")).args(args).output().unwrap()
}

fn run_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["run", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    mmsim(&args)
}

#[test]
fn table1_run_writes_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_into(dir.path(), &["--preset", "table1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    assert!(stdout.contains("cycle=period 12"), "{stdout}");
    for f in FILES {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let cycle = fs::read_to_string(dir.path().join("cycle.txt")).unwrap();
    assert!(cycle.contains("period=12"));
    let inv = fs::read_to_string(dir.path().join("inventories.csv")).unwrap();
    assert_eq!(inv.lines().next(), Some("t,inv_1,inv_2"));
    assert_eq!(inv.lines().nth(1), Some("0,-8,18"));
}

#[test]
fn csvs_have_one_row_per_step_plus_the_final_state() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["--preset", "paired5", "--steps", "37"]).status.success());
    for f in ["inventories.csv", "prices.csv", "nlp.csv"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert_eq!(text.lines().count(), 1 + 38, "{f}");
    }
    let prices = fs::read_to_string(dir.path().join("prices.csv")).unwrap();
    assert_eq!(prices.lines().next(), Some("t,last_price,best_bid,best_ask"));
}

#[test]
fn zero_steps_writes_headers_only() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_into(dir.path(), &["--preset", "table1", "--steps", "0"]).status.success());
    for f in ["inventories.csv", "prices.csv", "nlp.csv", "trades.csv"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert_eq!(text.lines().count(), 1, "{f}");
    }
}

#[test]
fn same_config_gives_identical_directories() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert!(run_into(d.path(), &["--preset", "hetero5-up", "--seed", "3", "--steps", "120"]).status.success());
    }
    for f in FILES {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn config_file_and_flow_window() {
    let dir = tempfile::tempdir().unwrap();
    let preset = mmsim(&["preset", "single-mm-delay"]);
    assert!(preset.status.success());
    let path = dir.path().join("scenario.toml");
    fs::write(&path, preset.stdout).unwrap();
    let out_dir = dir.path().join("out");
    let out = run_into(&out_dir, &["--config", path.to_str().unwrap(), "--flow-window", "2:5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let flow = fs::read_to_string(out_dir.join("flow.txt")).unwrap();
    assert_eq!(flow.lines().count(), 1 + 4);
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "steps = 10\ninitial_best_bid = 99\ninitial_best_ask = 101\nwhat = 1\n").unwrap();
    let out = run_into(&dir.path().join("out"), &["--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("what"));

    let out = run_into(dir.path(), &["--preset", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = run_into(&blocker.join("sub"), &["--preset", "table1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn lists_presets() {
    let out = mmsim(&["presets"]);
    let names = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        names.lines().collect::<Vec<_>>(),
        ["table1", "single-mm-delay", "paired5", "hetero5-up", "hetero5-down"]
    );
}
