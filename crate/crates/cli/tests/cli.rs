use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwembed")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--machine"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&run(&full))).expect("machine output is JSON")
}

/// Every integer token in `text`.
fn numbers(text: &str) -> Vec<i64> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_digit() || (c == '-' && cur.is_empty()) {
            cur.push(c);
        } else {
            if let Ok(n) = cur.parse() {
                out.push(n);
            }
            cur.clear();
        }
    }
    out
}

fn collect(v: &serde_json::Value, out: &mut Vec<i64>) {
    match v {
        serde_json::Value::Number(n) => out.push(n.as_i64().unwrap()),
        serde_json::Value::String(s) => out.extend(numbers(s)),
        serde_json::Value::Array(a) => a.iter().for_each(|x| collect(x, out)),
        serde_json::Value::Object(m) => m.values().for_each(|x| collect(x, out)),
        _ => {}
    }
}

#[test]
fn simples_of_s3_in_characteristic_3() {
    let v = json(&["simples", "S3", "3"]);
    let dims: Vec<u64> = v["simples"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1]);
}

#[test]
fn simples_of_c3_in_characteristic_2() {
    let v = json(&["simples", "C3", "2"]);
    assert_eq!(v["field"], "2^2");
    let rational: Vec<(u64, u64)> = v["rational"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["dim"].as_u64().unwrap(), r["deg"].as_u64().unwrap()))
        .collect();
    assert_eq!(rational, vec![(1, 1), (2, 2)]);
    assert_eq!(v["simples"].as_array().unwrap().len(), 3);
}

#[test]
fn cohomology_reports() {
    let v = json(&["cohom", "C3", "3", "trivial"]);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64(), v["h2"].as_u64()), (Some(1), Some(1), Some(1)));
    let v = json(&["cohom", "S3", "5", "sign"]);
    assert_eq!((v["h1"].as_u64(), v["h2"].as_u64()), (Some(0), Some(0)));
    let v = json(&["cohom", "1", "2", "regular"]);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(1), Some(0)));
}

#[test]
fn decide_exit_codes() {
    for (file, code) in [
        ("rank2_gamma2.hw", 0),
        ("rank3_gamma2.hw", 1),
        ("identity.hw", 0),
        ("z4_elliptic.hw", 0),
        ("c2_split_zero.hw", 1),
        ("a4_over_c3.hw", 0),
    ] {
        let o = run(&["decide", problem(file).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(code), "{file}");
    }
}

#[test]
fn malformed_file_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.hw");
    std::fs::write(&path, "group H = C2\ncover { group = H; p = 4; g_X = 1; delta = ordinary }\n").unwrap();
    let o = run(&["decide", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let file = problem("a4_over_c3.hw");
    let args = ["--trace", "decide", file.to_str().unwrap()];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
    let m = ["--machine", "--seed", "5", "decide", file.to_str().unwrap()];
    assert_eq!(stdout(&run(&m)), stdout(&run(&m)));
}

#[test]
fn human_numbers_appear_in_machine_report() {
    let files = ["a4_over_c3.hw", "rank3_gamma2.hw", "z4_elliptic.hw"];
    let mut cases: Vec<Vec<String>> = files
        .iter()
        .flat_map(|f| {
            let p = problem(f).to_str().unwrap().to_string();
            [vec!["--trace".to_string(), "decide".into(), p.clone()], vec!["reduce".into(), p]]
        })
        .collect();
    cases.push(vec!["simples".into(), "A4".into(), "2".into()]);
    cases.push(vec!["cohom".into(), "V4".into(), "2".into(), "trivial".into()]);
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let human = stdout(&run(&args));
        let mut machine = Vec::new();
        let machine_args: Vec<&str> = args.iter().copied().filter(|a| *a != "--trace").collect();
        collect(&json(&machine_args), &mut machine);
        // h0/h1/h2 are column names, not values
        let human = human.replace("h0", "").replace("h1", "").replace("h2", "");
        for n in numbers(&human) {
            assert!(machine.contains(&n), "{args:?}: {n} missing from machine report");
        }
    }
}

#[test]
fn reduce_prints_trace() {
    let v = json(&["reduce", problem("rank3_gamma2.hw").to_str().unwrap()]);
    assert_eq!(v["trace"].as_array().unwrap().len(), 2);
}

#[test]
fn selftest_passes() {
    let o = run(&["--machine", "selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 9);
    assert!(reports.iter().all(|r| r["passed"] == true));
}
