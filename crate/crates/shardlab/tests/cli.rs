//! End-to-end tests of the shardlab binary: exit codes, determinism of the
//! written artifacts, and the export surfaces.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shardlab"))
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn build_a3_summary_and_determinism() {
    let tmp = std::env::temp_dir().join(format!("shardlab-test-{}", std::process::id()));
    let d1 = tmp.join("run1");
    let d2 = tmp.join("run2");
    for d in [&d1, &d2] {
        let out = bin()
            .args([
                "build",
                "--type",
                "A3",
                "--coxeter-element",
                "s1,s3,s2",
                "--contract",
                "s2,s1",
                "--out",
            ])
            .arg(d)
            .output()
            .unwrap();
        assert!(out.status.success());
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(stdout.contains("order = 24"));
        assert!(stdout.contains("shards = 11"));
        assert!(stdout.contains("sortables = 14"));
    }
    // byte-identical artifacts across runs
    assert_eq!(read_dir_sorted(&d1), read_dir_sorted(&d2));
    let names: Vec<String> = read_dir_sorted(&d1).into_iter().map(|(n, _)| n).collect();
    for expected in [
        "cambrian.json",
        "congruence.json",
        "digraph.dot",
        "group.json",
        "nc.json",
        "shard_order.json",
        "shards.json",
        "weak.dot",
    ] {
        assert!(names.contains(&expected.to_string()), "missing {expected}");
    }
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn build_i25() {
    let out = bin().args(["build", "--type", "I2(5)"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("shards = 8"));
    assert!(stdout.contains("psi_size = 10"));
}

#[test]
fn export_examples() {
    // digraph of A3: 11 nodes
    let out = bin()
        .args(["export", "--type", "A3", "--what", "digraph"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("label=\"Σ(").count(), 11);

    // noncrossing lattice of A2: 5 nodes
    let out = bin()
        .args(["export", "--type", "A2", "--what", "nc"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches("\n  n").count() - dot.matches(" -> ").count(), 5);

    // weak order of A1: 2 nodes, one edge
    let out = bin()
        .args(["export", "--type", "A1", "--what", "weak"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = String::from_utf8(out.stdout).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 1);

    // triangulation of the A2 Cambrian quotient as OFF-like text
    let out = bin()
        .args([
            "export",
            "--type",
            "A2",
            "--what",
            "triangulation",
            "--contract",
            "s2,s1",
            "--format",
            "off",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let off = String::from_utf8(out.stdout).unwrap();
    assert!(off.starts_with("# OFF-like"));
    assert_eq!(off.lines().filter(|l| l.starts_with("f ")).count(), 3);
}

#[test]
fn verify_passes_and_fails_properly() {
    let out = bin()
        .args(["verify", "--type", "A1xA1", "--jobs", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("0 failed"));
    assert!(!stdout.contains("FAIL"));

    // malformed type: usage error, exit code 2
    let out = bin().args(["verify", "--type", "Q7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed contraction word
    let out = bin()
        .args(["verify", "--type", "A2", "--contract", "s9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // a non-join-irreducible generator is a config error
    let out = bin()
        .args(["verify", "--type", "A2", "--contract", "s1,s2,s1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("join-irreducible"));
}

#[test]
fn ingest_arrangement_file() {
    let tmp = std::env::temp_dir().join(format!("shardlab-arr-{}.txt", std::process::id()));
    std::fs::write(
        &tmp,
        "# near-pencil\n-1 5 1\n1 0 0\n0 1 0\n1 -1 0\n1 2 0\n0 0 1\n",
    )
    .unwrap();
    let out = bin()
        .args(["build", "--arrangement"])
        .arg(&tmp)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("regions = 16"));
    assert!(stdout.contains("digraph_acyclic = true"));
    std::fs::remove_file(&tmp).ok();

    // a non-simplicial arrangement is rejected with a witness
    let tmp2 = std::env::temp_dir().join(format!("shardlab-bad-{}.txt", std::process::id()));
    std::fs::write(&tmp2, "0 0 1\n1 0 1\n0 1 1\n-1 0 1\n0 -1 1\n").unwrap();
    let out = bin()
        .args(["build", "--arrangement"])
        .arg(&tmp2)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not simplicial"));
    std::fs::remove_file(&tmp2).ok();
}
