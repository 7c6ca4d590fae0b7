use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn covers() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/covers")
}

fn cover(name: &str) -> String {
    covers().join(format!("{name}.cover")).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramiforge"))
        .args(args)
        .env_remove("RAMIFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn divisors_of_gaussian_cover() {
    let r = json(&["divisors", &cover("quad_t2p1"), "--up-to", "30"]);
    assert_eq!(r["schema"], "ramiforge.report/1");
    assert_eq!(r["command"], "divisors");
    assert_eq!(r["result"]["primes"], serde_json::json!([2, 5, 13, 17, 29]));
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn prescribe_gaussian_recipe() {
    let r = json(&[
        "prescribe",
        &cover("quad_t2p1"),
        "--ramified",
        "5:0:1",
        "--ramified",
        "13:0:1",
    ]);
    assert_eq!(r["result"]["theta"], "2202");
    assert_eq!(r["result"]["modulus"], "4225");
    assert_eq!(r["result"]["seed"], 0);
}

#[test]
fn predict_trinomial() {
    let r = json(&["predict", &cover("trinomial_3_1_2_1"), "--prime", "5", "--point", "1/5"]);
    let p = &r["result"]["prediction"];
    assert_eq!(p["verdict"], "ramified");
    assert_eq!(p["class_label"], "[3^1]");
    assert_eq!(p["e"], 3);
    let r = json(&["predict", "quad_t2p1", "--prime", "7", "--point", "inf"]);
    assert_eq!(r["result"]["prediction"]["verdict"], "unramified");
    // infinity is a branch point of the trinomial cover
    assert_eq!(run(&["predict", "trinomial_3_1_2_1", "--prime", "7", "--point", "inf"]).status.code(), Some(2));
}

#[test]
fn prescribe_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[(&str, &[&str])] = &[
        ("quad_t2p1", &["5:0:1", "13:0:1"]),
        ("quad_t2p1", &["5:0:2"]),
        ("quad_t", &["3:0:1", "7:1:2"]),
        ("trinomial_3_1_2_1", &["7:2:1"]),
        ("trinomial_3_1_2_1", &["5:1:1"]),
    ];
    for (i, (name, ram)) in cases.iter().enumerate() {
        let mut args = vec!["prescribe", name];
        for r in *ram {
            args.extend(["--ramified", r]);
        }
        let out = run(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let path = dir.path().join(format!("recipe{i}.json"));
        std::fs::write(&path, &out.stdout).unwrap();
        let t = json(&["verify", &cover(name), "--recipe", path.to_str().unwrap(), "--samples", "10"]);
        let table = &t["result"];
        assert_eq!(table["mismatched"], 0, "{name} {ram:?}");
        assert_eq!(table["inconclusive"], 0, "{name} {ram:?}");
        assert!(table["matched"].as_u64().unwrap() >= 10);
        assert_eq!(t["inputs"][1]["role"], "recipe");
    }
}

#[test]
fn verify_reports_mismatch_with_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["prescribe", "quad_t2p1", "--ramified", "5:0:1"]);
    let mut report: Value = serde_json::from_slice(&out.stdout).unwrap();
    // claim ramification at 5 for a progression that is unramified there
    report["result"]["theta"] = "1".into();
    report["result"]["modulus"] = "5".into();
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_vec(&report).unwrap()).unwrap();
    let out = run(&["verify", "quad_t2p1", "--recipe", path.to_str().unwrap(), "--samples", "5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["prescribe", "quad_t2p1", "--ramified", "2:0:1"],
        vec!["prescribe", "quad_t2p1", "--ramified", "5:0:1", "--ramified", "5:0:2"],
        vec!["prescribe", "quad_t2p1", "--ramified", "5:0"],
        vec!["divisors", "no_such_cover"],
        vec!["predict", "quad_t2p1", "--prime", "5", "--point", "x/y"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let diag: Value = serde_json::from_slice(&out.stderr).expect("structured diagnostic");
        assert_eq!(diag["error"]["kind"], "input");
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.cover");
    std::fs::write(&path, "{ \"name\": 3 }").unwrap();
    assert_eq!(run(&["classify-primes", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let args = ["prescribe", "trinomial_3_1_2_1", "--ramified", "7:2:1", "--frobenius", "11:[3^1]"];
    let out = Command::new(env!("CARGO_BIN_EXE_ramiforge"))
        .args(args)
        .env("RAMIFORGE_SEED", "17")
        .output()
        .unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["result"]["seed"], 17);
    let again = json(&[&args[..], &["--seed", "17"]].concat());
    assert_eq!(r["result"], again["result"]);
}

#[test]
fn parametricity_pairs() {
    let r = json(&["parametricity", "quad_t", "quad_t2p1_t2m2", "--window", "200"]);
    let bph = &r["result"]["bph"];
    assert_eq!(bph["holds"], true);
    assert_eq!(bph["exact"], true);
    assert_eq!(bph["witness_congruences"]["modulus"], 8);
    assert_eq!(bph["witness_congruences"]["residues"], serde_json::json!([3]));

    let r = json(&["parametricity", "trinomial_5_2_2_1", "trinomial_5_1_4_3", "--window", "50"]);
    assert_eq!(r["result"]["ih"]["witness_classes"], serde_json::json!(["[2^1 3^1]"]));
    assert_eq!(r["result"]["ih_witness_recipe"]["request"]["ramified"][0]["p"], 7);

    // different groups: the branch point comparison still runs
    let r = json(&["parametricity", "quad_t", "trinomial_3_1_2_1", "--window", "50"]);
    assert!(r["result"]["ih"].is_null());
    assert!(r["caveats"].as_array().unwrap().iter().any(|c| c.as_str().unwrap().contains("same group")));
}

#[test]
fn tsv_columns_are_fixed() {
    let out = run(&["--format", "tsv", "classify-primes", "trinomial_3_1_2_1", "--up-to", "20"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p\tstatus\treasons"));
    let rows: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows[0].starts_with("2\tbad"));
    assert!(rows[2].starts_with("5\tgood"));
}

#[test]
fn group_certify() {
    let r = json(&["group-certify", "trinomial_3_1_2_1", "--point", "38", "--budget", "200"]);
    assert_eq!(r["result"]["certification"]["status"], "certified");
    let r = json(&["group-certify", "trinomial_3_1_2_1", "--point", "1/7", "--budget", "200"]);
    assert_eq!(r["result"]["certification"]["status"], "inconclusive");
}

#[test]
fn caveats_reach_the_report() {
    let r = json(&["classify-primes", "quad_t2p1", "--up-to", "10"]);
    let caveats = r["caveats"].as_array().unwrap();
    assert!(caveats.iter().any(|c| c.as_str().unwrap().contains("vertical ramification")));
    let r = json(&["parametricity", "trinomial_3_1_2_1", "mestre_a5", "--window", "50"]);
    let caveats = r["caveats"].as_array().unwrap();
    assert_eq!(r["result"]["bph"]["exact"], false);
    assert!(caveats.iter().any(|c| c.as_str().unwrap().contains("empirically")));
}
