use std::path::Path;
use std::process::{Command, Output};

fn divcorr(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divcorr"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn divcorr")
}

fn error_json(o: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.lines().last().unwrap()).expect("json error line")
}

#[test]
fn hand_example_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = divcorr(
        &["correlate", "--n", "10", "--system", "1,0;1,1", "--body-lo", "1", "--body-hi", "4", "--weight", "tau"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("correlate.csv")).unwrap();
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let raw = r.headers().unwrap().iter().position(|h| h == "raw").unwrap();
    let row = r.records().next().unwrap().unwrap();
    assert_eq!(&row[raw], "18");

    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "correlate");
    assert_eq!(m["report"], "correlate.csv");
    assert_eq!(m["config"]["n"], 10);
    assert_eq!(m["config"]["gamma"], "1/4");
    assert!(m["wall_clock_secs"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exit_codes_by_category() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], i32, &str); 4] = [
        (&["correlate", "--n", "100"], 2, "config"),
        (&["correlate", "--n", "100", "--system", "1,0;1,1", "--body-lo", "1", "--body-hi", "200"], 3, "range"),
        (&["correlate", "--n", "100", "--system", "1,0;2,0"], 5, "math-degeneracy"),
        (&["correlate", "--n", "100", "--system", "1,0;1,1", "--gamma", "2/5"], 2, "config"),
    ];
    for (args, code, category) in cases {
        let o = divcorr(args, dir.path());
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert_eq!(error_json(&o)["error"], category, "{args:?}");
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 1000\nsystem = [[1, 0], [1, 1]]\nweight = \"tau\"\n[body]\nlo = [1]\nhi = [4]\n").unwrap();
    let o = divcorr(&["correlate", "--config", cfg.to_str().unwrap(), "--n", "10"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["n"], 10);

    std::fs::write(&cfg, "n = 10\nbogus = 3\n").unwrap();
    let o = divcorr(&["correlate", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify-main-theorem", "--grid", "1000,10000", "--system", "1,0;1,1", "--pmax", "1000"];
    assert!(divcorr(&[&args[..], &["--workers", "1"]].concat(), a.path()).status.success());
    assert!(divcorr(&[&args[..], &["--workers", "3"]].concat(), b.path()).status.success());
    let read = |d: &Path| std::fs::read(d.join("verify-main-theorem.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}
