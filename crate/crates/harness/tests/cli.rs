use std::fs;
use std::path::Path;

use encdec_harness::cli::main_with_args;
use encdec_harness::HarnessError;

fn run(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("encdec").chain(args.iter().copied()))
}

fn out(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn theory_export_writes_rows() {
    let dir = tempfile::tempdir().unwrap();
    let d = out(dir.path());
    let code = run(&[
        "theory", "--n", "8,12", "--grid", "0:1.5:4", "--q", "2,3", "--quantity", "fidelity,slope_entanglement,critical",
        "--out", &d, "--id", "th",
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(dir.path().join("th_theory.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kind,N,k,r,q,strength,value"));
    // 2 sizes x 4 points, 2 q x 4 points, critical + printed critical
    assert_eq!(lines.count(), 8 + 8 + 2);
}

#[test]
fn run_then_collapse_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = out(dir.path());
    let code = run(&["run", "--n", "4,6,8", "--grid", "0.8:1.5:8", "--realizations", "20", "--out", &d, "--id", "mc"]);
    assert_eq!(code, 0);
    for f in ["mc_raw.csv", "mc_aggregated.csv", "mc_manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let input = dir.path().join("mc_aggregated.csv");
    let code = run(&[
        "collapse", "--input", input.to_str().unwrap(), "--bootstrap", "5", "--n", "4,6,8", "--out", &d, "--id", "mc",
    ]);
    assert_eq!(code, 0);
    assert!(dir.path().join("mc_collapse.json").exists());
}

#[test]
fn json_format_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "experiment_id = \"cfg\"\nmodel = \"depolarizing\"\nbackend = \"density\"\nsizes = [4]\ngrid = [0.2, 0.6]\nrealizations = 4\n",
    )
    .unwrap();
    let d = out(dir.path());
    let code = run(&["run", "--config", cfg.to_str().unwrap(), "--format", "json", "--out", &d]);
    assert_eq!(code, 0);
    assert!(dir.path().join("cfg_aggregated.json").exists());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = out(dir.path());
    assert_eq!(run(&["run", "--n", "7", "--grid", "0:1:3", "--out", &d]), 2);
    assert_eq!(run(&["run", "--n", "4", "--grid", "0:1:3", "--model", "depolarizing", "--backend", "pure", "--out", &d]), 2);
    assert_eq!(run(&["run", "--n", "12", "--grid", "0:1:3", "--backend", "density", "--out", &d]), 2);
    assert_eq!(run(&["selfavg", "--n", "4,6", "--grid", "1.0:1.0:1", "--out", &d]), 2);
    assert_eq!(run(&["noisy", "--n", "4", "--grid", "0.5:1:2", "--epsilon", "2", "--out", &d]), 2);
    assert_eq!(run(&["frobnicate"]), 2);
}

#[test]
fn unwritable_output_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    assert_eq!(run(&["run", "--n", "4", "--grid", "0:1:2", "--realizations", "2", "--out", target.to_str().unwrap()]), 4);
}

#[test]
fn degenerate_abort_maps_to_three() {
    let e = HarnessError::DegenerateAbort { n: 8, strength: 1.0, excluded: 20, total: 100 };
    assert_eq!(e.exit_code(), 3);
}
