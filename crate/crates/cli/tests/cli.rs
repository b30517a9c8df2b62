use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sslce::oracle::naive_lce;
use sslce::Text;

fn sslce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sslce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen(dir: &Path, family: &str, n: usize) -> std::path::PathBuf {
    let path = dir.join(format!("{family}-{n}.txt"));
    let o = sslce(&[
        "gen",
        "--family",
        family,
        "--n",
        &n.to_string(),
        "--sigma",
        "3",
        "--seed",
        "7",
        "--out",
        p(&path),
    ]);
    assert!(o.status.success());
    path
}

#[test]
fn build_then_query_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "fibonacci", 3000);
    let text = Text::new(std::fs::read(&input).unwrap());
    for mode in ["rand", "rand-whp", "det", "dcover"] {
        let idx = dir.path().join(format!("{mode}.idx"));
        let o = sslce(&[
            "build",
            "--input",
            p(&input),
            "--tau",
            "16",
            "--mode",
            mode,
            "--seed",
            "3",
            "--out",
            p(&idx),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let summary: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(summary["n"], 3000);
        assert_eq!(summary["mode"], mode);
        assert!(summary["set_size"].as_u64().unwrap() > 0);

        let o = sslce(&[
            "query",
            "--index",
            p(&idx),
            "--random",
            "300",
            "--seed",
            "1",
        ]);
        assert!(o.status.success());
        let lines: Vec<Value> = stdout(&o)
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 300);
        for v in &lines {
            let (i, j) = (
                v["i"].as_u64().unwrap() as usize,
                v["j"].as_u64().unwrap() as usize,
            );
            assert_eq!(
                v["lce"].as_u64().unwrap() as usize,
                naive_lce(&text, i, j),
                "{mode} {i} {j}"
            );
        }
    }
}

#[test]
fn pairs_file_and_identical_positions() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("t.txt");
    std::fs::write(&input, "abaababa").unwrap();
    let idx = dir.path().join("t.idx");
    assert!(sslce(&[
        "build",
        "--input",
        p(&input),
        "--tau",
        "2",
        "--mode",
        "det",
        "--out",
        p(&idx)
    ])
    .status
    .success());
    let pairs = dir.path().join("pairs");
    std::fs::write(&pairs, "1 4\n3 3\n\n2 7\n").unwrap();
    let o = sslce(&["query", "--index", p(&idx), "--pairs", p(&pairs)]);
    assert!(o.status.success());
    let got: Vec<u64> = stdout(&o)
        .lines()
        .map(|l| {
            serde_json::from_str::<Value>(l).unwrap()["lce"]
                .as_u64()
                .unwrap()
        })
        .collect();
    assert_eq!(got, vec![3, 6, 2]);
}

#[test]
fn tau_one_keeps_every_position() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "random", 500);
    for mode in ["rand", "det"] {
        let o = sslce(&[
            "build",
            "--input",
            p(&input),
            "--tau",
            "1",
            "--mode",
            mode,
            "--out",
            p(&dir.path().join("x")),
        ]);
        let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["set_size"], 500, "{mode}");
    }
}

#[test]
fn identical_invocations_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "random", 5000);
    for mode in ["rand", "rand-whp", "det", "dcover"] {
        let (a, b) = (dir.path().join("a"), dir.path().join("b"));
        for out in [&a, &b] {
            assert!(sslce(&[
                "build",
                "--input",
                p(&input),
                "--tau",
                "32",
                "--mode",
                mode,
                "--seed",
                "9",
                "--out",
                p(out)
            ])
            .status
            .success());
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{mode}"
        );
        let qa = sslce(&["query", "--index", p(&a), "--random", "500", "--seed", "4"]);
        let qb = sslce(&["query", "--index", p(&b), "--random", "500", "--seed", "4"]);
        assert_eq!(qa.stdout, qb.stdout);
    }
    let g1 = sslce(&["gen", "--family", "periodic", "--n", "100", "--seed", "2"]);
    let g2 = sslce(&["gen", "--family", "periodic", "--n", "100", "--seed", "2"]);
    assert_eq!(g1.stdout, g2.stdout);
    assert_eq!(g1.stdout.len(), 100);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing");
    let o = sslce(&[
        "build",
        "--input",
        p(&missing),
        "--tau",
        "4",
        "--mode",
        "det",
        "--out",
        p(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let input = gen(dir.path(), "thue-morse", 200);
    let o = sslce(&[
        "build",
        "--input",
        p(&input),
        "--tau",
        "201",
        "--mode",
        "det",
        "--out",
        p(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = sslce(&[
        "build",
        "--input",
        p(&input),
        "--tau",
        "4",
        "--mode",
        "fast",
        "--out",
        p(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.idx");
    std::fs::write(&bad, b"SSLCE0 not an index").unwrap();
    assert_eq!(
        sslce(&["query", "--index", p(&bad), "--random", "1"])
            .status
            .code(),
        Some(3)
    );

    let idx = dir.path().join("ok.idx");
    assert!(sslce(&[
        "build",
        "--input",
        p(&input),
        "--tau",
        "4",
        "--mode",
        "rand",
        "--out",
        p(&idx)
    ])
    .status
    .success());
    let mut bytes = std::fs::read(&idx).unwrap();
    bytes.truncate(bytes.len() - 3);
    std::fs::write(&bad, &bytes).unwrap();
    assert_eq!(
        sslce(&["query", "--index", p(&bad), "--random", "1"])
            .status
            .code(),
        Some(3)
    );

    let pairs = dir.path().join("pairs");
    std::fs::write(&pairs, "1 2\n3 four\n").unwrap();
    let o = sslce(&["query", "--index", p(&idx), "--pairs", p(&pairs)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = sslce(&["bench", "--input", p(&input), "--tau-list", ""]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_catches_an_injected_fault() {
    for mode in ["rand", "rand-whp", "det", "dcover"] {
        let o = sslce(&[
            "verify", "--gen", "periodic", "--n", "3000", "--tau", "24", "--mode", mode,
            "--trials", "2",
        ]);
        assert!(o.status.success(), "{mode}: {}", stdout(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["checks"]["lce"]["run"], 2000);
    }
    let o = sslce(&[
        "verify",
        "--gen",
        "random",
        "--n",
        "2000",
        "--tau",
        "8",
        "--mode",
        "det",
        "--trials",
        "1",
        "--inject-fault",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("LCE(") && err.contains("S["), "{err}");

    let o = sslce(&[
        "verify", "--gen", "random", "--n", "100", "--tau", "8", "--mode", "det", "--trials", "0",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("nothing is checked"));
}

#[test]
fn bench_writes_one_row_per_cell() {
    let o = sslce(&[
        "bench",
        "--gen",
        "fibonacci",
        "--n",
        "4000",
        "--tau-list",
        "8,32",
        "--modes",
        "rand,det,dcover",
        "--queries",
        "500",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mode,tau,n,set_size,build_ms,avg_comparisons,max_comparisons,peak_aux_words,kappa"
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for r in &rows {
        assert_eq!(r[2], "4000");
        assert!(r[8].parse::<f64>().unwrap() < 64.0);
    }
}
