use std::path::PathBuf;
use std::process::{Command, Output};

use deldyn::diagram_file::{read_diagram, InstanceFile};
use deldyn::gaction::ComponentMap;
use deldyn::localglobal::Instance;
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deldyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn table_has_the_c3_row() {
    let rows = json(&["table", "--max-rank", "3"]);
    let c3 = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["type"] == "C3")
        .expect("C3 row");
    assert_eq!(c3["labels"], serde_json::json!(["1/2", "1", "3/2"]));
    assert_eq!(c3["special"], 3);
    assert_eq!(c3["symplectic"], serde_json::json!([1]));
}

#[test]
fn classify_examples() {
    let v = json(&["classify", &data("d4_d3.json")]);
    assert_eq!(v["type"], "NOT_SYMPLECTIC");
    assert_eq!(v["symplectic"], false);
    let v = json(&["classify", &data("d4_pair.json")]);
    assert_eq!(v["type"], "D4^R");
    assert_eq!(v["aut_id"], 2);
    assert_eq!(v["expected_aut_id"], 2);
    let text = run(&["classify", &data("d4_d2.json")]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("D4^H"));
}

#[test]
fn malformed_input_exits_2_with_a_line() {
    let out = run(&["classify", &data("bad_mu.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
    let out = run(&["classify", &data("missing.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["special", "Q", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rootsys_queries() {
    assert_eq!(json(&["special", "D", "5"])["special"], serde_json::json!([1, 4, 5]));
    assert_eq!(json(&["special", "E", "8"])["special"], serde_json::json!([]));
    let v = json(&["oppinv", "A", "4", "--oracle"]);
    assert_eq!(v["images"], serde_json::json!([4, 3, 2, 1]));
    assert_eq!(v["images"], v["oracle"]);
    assert_eq!(
        json(&["oppinv", "D", "5"])["images"],
        serde_json::json!([1, 2, 3, 5, 4])
    );
    assert_eq!(run(&["oppinv", "D", "5", "--oracle"]).status.code(), Some(2));
    assert_eq!(json(&["oppinv", "B", "4"])["trivial"], true);
}

#[test]
fn isom_prints_witnesses() {
    let f = data("d4_pair.json");
    let v = json(&["isom", &f, &f, "--all-locals"]);
    assert_eq!(v["joint_group_order"], 2);
    let maps = v["maps"].as_array().unwrap();
    assert_eq!(maps.len(), 2);
    assert_eq!(maps[0]["global"], "()");
    assert_eq!(maps[0]["local_global"]["verdict"], "PASS");
    assert_eq!(maps[0]["locals"].as_array().unwrap().len(), 2);
    assert!(maps[1]["global"].is_null());
    let out = run(&["isom", &f, &f, "--local", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn small_campaign_exits_0() {
    let out = run(&["verify-local-global", "--max-order", "6", "--max-rank", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("COUNTEREXAMPLE       0"), "{text}");
    assert!(!out.stderr.is_empty());
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "--format",
        "json",
        "verify-local-global",
        "--max-order",
        "4",
        "--max-rank",
        "2",
        "--types",
        "A,B",
    ];
    let a = run(&args);
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "3"]);
    let b = run(&with_jobs);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let g1 = run(&["--format", "json", "goursat", "--max-order", "6"]);
    let g2 = run(&["--format", "json", "goursat", "--max-order", "6"]);
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn deligne_report() {
    let v = json(&["deligne", &data("a3_pair.json")]);
    assert_eq!(v["type"], "A3");
    assert_eq!(v["dim_v_prime"], 32);
    let bidegrees: Vec<(String, String)> = v["v_prime"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["p"].as_str().unwrap().to_string(),
                e["q"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(bidegrees, vec![("0".into(), "1".into()), ("1".into(), "0".into())]);
    let out = run(&["deligne", &data("d4_d3.json")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hyperadjoint_of_d4() {
    let v = json(&["hyperadjoint", "D4"]);
    let chain = v["chain"].as_array().unwrap();
    assert_eq!(chain.last().unwrap()["dim"], 28);
    assert_eq!(v["index"], 1);
    assert_eq!(json(&["hyperadjoint", "A2+T1"])["index"], 2);
}

#[test]
fn goursat_small() {
    let v = json(&["goursat", "--max-order", "4"]);
    assert_eq!(v["failures"], 0);
    assert!(v["subdirect"].as_u64().unwrap() > 0);
}

#[test]
fn replay_a_dumped_instance() {
    let text = std::fs::read_to_string(data("d4_pair.json")).unwrap();
    let (_, d) = read_diagram(&text).unwrap();
    let inst = Instance::new("d4-pair", d.clone(), d, ComponentMap::new(vec![0, 1]).unwrap()).unwrap();
    let dump = InstanceFile::from_instance(&inst, None);
    let path: PathBuf = std::env::temp_dir().join(format!("deldyn-replay-{}.json", std::process::id()));
    std::fs::write(&path, dump.to_json()).unwrap();
    let v = json(&["replay", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v["verdict"]["verdict"], "PASS");
    assert_eq!(
        InstanceFile::from_json(&dump.to_json()).unwrap().to_json(),
        dump.to_json()
    );
}
