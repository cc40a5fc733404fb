use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdmm::records::parse_records;
use sdmm::schemes::{SchemeConfig, SchemeKind};
use sdmm::{Field, FieldMatrix};

fn sdmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdmm"))
        .args(args)
        .env_remove("SDMM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_examples_from_the_command_reference() {
    let ok = sdmm(&["run", "--scheme", "flex", "--q", "7", "--P", "2", "--X", "1", "--random", "2", "4", "3", "--seed", "1", "--verify"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));

    let dft = sdmm(&["run", "--scheme", "dft", "--q", "7", "--P", "2", "--X", "1", "--random", "2", "4", "3"]);
    assert_eq!(dft.status.code(), Some(2));
    assert!(stderr(&dft).contains("N=4 does not divide q-1=6"));

    let binary = sdmm(&["run", "--scheme", "binary", "--P", "3", "--X", "1", "--random", "1", "3", "1"]);
    assert_eq!(binary.status.code(), Some(2));
    assert!(stderr(&binary).contains("P must be even"));
}

#[test]
fn decode_failure_exits_one_with_diagnostics() {
    let out = sdmm(&[
        "run", "--scheme", "flex-redundant", "--P", "1", "--X", "1", "--S", "1", "--random", "1", "1", "1",
        "--stragglers", "1,2", "--format", "records",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let records = parse_records(&stdout(&out)).unwrap();
    assert_eq!(records[0].get("success"), Some("false"));
    assert!(records[0].get("failure").unwrap().contains("received 2 < 2P+2X-1 = 3"));
}

#[test]
fn matrix_and_config_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = Field::with_order(11).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = FieldMatrix::random(&f, 3, 4, &mut rng);
    let b = FieldMatrix::random(&f, 4, 2, &mut rng);
    let (pa, pb, pc, pout) = (
        dir.path().join("a.txt"),
        dir.path().join("b.txt"),
        dir.path().join("scheme.conf"),
        dir.path().join("product.txt"),
    );
    std::fs::write(&pa, a.to_string()).unwrap();
    std::fs::write(&pb, b.to_string()).unwrap();
    SchemeConfig::new(SchemeKind::FlexRedundant, 2, 1, 2)
        .with_field(f.clone())
        .with_seed(3)
        .save(&pc)
        .unwrap();
    let out = sdmm(&[
        "run", "--config", pc.to_str().unwrap(), "--a", pa.to_str().unwrap(), "--b", pb.to_str().unwrap(),
        "--stragglers", "0,6", "--verify", "--out", pout.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("interpolation"));
    let product = FieldMatrix::parse(&std::fs::read_to_string(&pout).unwrap()).unwrap();
    assert_eq!(product, a.mul(&b).unwrap());

    // Matrices over a different field than the config.
    let g = Field::with_order(13).unwrap();
    std::fs::write(&pa, FieldMatrix::zeros(&g, 3, 4).to_string()).unwrap();
    std::fs::write(&pb, FieldMatrix::zeros(&g, 4, 2).to_string()).unwrap();
    let bad = sdmm(&["run", "--config", pc.to_str().unwrap(), "--a", pa.to_str().unwrap(), "--b", pb.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));

    let missing = sdmm(&["run", "--config", dir.path().join("nope.conf").to_str().unwrap(), "--random", "1", "2", "1"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn seed_environment_variable() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_sdmm"));
        cmd.args(["run", "--scheme", "flex", "--P", "2", "--X", "1", "--random", "2", "2", "2", "--format", "records"]);
        cmd.args(extra);
        cmd.env_remove("SDMM_SEED");
        if let Some(v) = env {
            cmd.env("SDMM_SEED", v);
        }
        let out = cmd.output().unwrap();
        parse_records(&stdout(&out)).unwrap()[0].get("seed").unwrap().to_string()
    };
    assert_eq!(run(None, &[]), "0");
    assert_eq!(run(Some("41"), &[]), "41");
    assert_eq!(run(Some("41"), &["--seed", "7"]), "7");
}

#[test]
fn audit_exit_codes() {
    let ok = sdmm(&["audit", "--scheme", "flex", "--q", "3", "--P", "1", "--X", "1", "--exhaustive"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let broken = sdmm(&["audit", "--scheme", "flex", "--q", "3", "--P", "1", "--X", "1", "--exhaustive", "--sabotage"]);
    assert_eq!(broken.status.code(), Some(1));
    let big = sdmm(&["audit", "--scheme", "flex", "--q", "251", "--P", "1", "--X", "1", "--exhaustive"]);
    assert_eq!(big.status.code(), Some(2));
    assert!(stderr(&big).contains("state space"), "{}", stderr(&big));
}

#[test]
fn compare_is_byte_stable() {
    let a = sdmm(&["compare", "--P", "3", "--X", "2", "--S", "2", "--format", "records"]);
    let b = sdmm(&["compare", "--P", "3", "--X", "2", "--S", "2", "--format", "records"]);
    assert_eq!(a.stdout, b.stdout);
    let rows = parse_records(&stdout(&a)).unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[1].get("workers"), Some("11"));
    assert_eq!(rows[1].get("recovery_threshold"), Some("9"));
    assert_eq!(rows[2].get("status"), Some("reference only"));
}

#[test]
fn bounds_reports() {
    let ten = stdout(&sdmm(&["bounds", "--N", "10", "--X", "2"]));
    assert!(ten.contains("conjectural minimum q: 9; this construction: q \u{2265} 10"));
    assert!(stdout(&sdmm(&["bounds", "--N", "6", "--X", "1"])).contains("repetition code"));
    assert!(stdout(&sdmm(&["bounds", "--N", "5", "--X", "3"])).contains("X <= q"));
}

#[test]
fn sweep_modes() {
    let grid = sdmm(&["sweep", "--P", "1,2", "--X", "1,2", "--trials", "2", "--format", "records"]);
    assert_eq!(grid.status.code(), Some(0), "{}", stdout(&grid));
    let records = parse_records(&stdout(&grid)).unwrap();
    let summary = records.last().unwrap();
    assert_eq!(summary.get("failed"), Some("0"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.conf");
    SchemeConfig::new(SchemeKind::FlexRedundant, 1, 1, 2).save(&path).unwrap();
    let all = sdmm(&["sweep", "--config", path.to_str().unwrap(), "--all-straggler-sets", "--trials", "1"]);
    assert_eq!(all.status.code(), Some(0));
    // N = 5: 1 + 5 + 10 straggler sets.
    assert!(stdout(&all).contains("16/16 passed"));
}
