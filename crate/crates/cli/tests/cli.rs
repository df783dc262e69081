use std::io::Write;
use std::process::{Command, Output};

fn mvms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 output")
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("mvms-cli-test-{name}"));
    let mut file = std::fs::File::create(&path).expect("temp file");
    file.write_all(contents.as_bytes()).expect("write");
    path
}

const D2: &str = r#"{"points":[{"id":"0","denominator":{"default":0}},{"id":"1","denominator":{"default":0,"exceptions":{"2":1}}}]}"#;
const D6: &str = r#"{"points":[{"id":"0","denominator":{"default":0}},{"id":"1","denominator":{"default":0,"exceptions":{"2":1,"3":1}}}]}"#;

#[test]
fn sn_join_of_naturals() {
    let out = mvms(&["sn", "join", "4", "6"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(
        value,
        serde_json::json!({"default": 0, "exceptions": {"2": 2, "3": 1}})
    );
}

#[test]
fn sn_meet_and_leq_and_decompose() {
    let out = mvms(&["sn", "meet", "4", "6"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains(r#""2":1"#));

    let out = mvms(&["sn", "leq", "2", "6"]);
    assert_eq!(stdout(&out).trim(), "true");

    let out = mvms(&["sn", "decompose", "12"]);
    assert_eq!(stdout(&out).trim(), "[[2,2],[3,1]]");

    let out = mvms(&["sn", "topology-member", "--family", "t5", "--n", "2", "3"]);
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn homs_between_files_list_one_arrow() {
    let x = write_temp("d2.json", D2);
    let y = write_temp("d6.json", D6);
    let out = mvms(&["homs", x.to_str().unwrap(), y.to_str().unwrap()]);
    assert!(out.status.success());
    let arrows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(arrows.as_array().unwrap().len(), 1);

    // identical invocations produce identical bytes
    let again = mvms(&["homs", x.to_str().unwrap(), y.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn classify_inline_arrow() {
    let arrow = format!(r#"{{"dom":{D6},"cod":{D2},"map":{{"0":"0","1":"1"}}}}"#);
    let out = mvms(&["classify", "--inline", &arrow]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["class"]["epic"], serde_json::json!(true));
    assert_eq!(value["class"]["regular_epic"], serde_json::json!(false));
}

#[test]
fn constructions_run_inline() {
    let out = mvms(&["product", "--inline", D2, D6]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["object"]["points"].as_array().unwrap().len(), 4);

    let out = mvms(&["coproduct", "--inline", D2, D6]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["object"]["points"].as_array().unwrap().len(), 4);

    let id = format!(r#"{{"dom":{D2},"cod":{D2},"map":{{"0":"0","1":"1"}}}}"#);
    let swap_free = format!(r#"{{"dom":{D2},"cod":{D2},"map":{{"0":"0","1":"0"}}}}"#);
    let out = mvms(&["equalizer", "--inline", &id, &swap_free]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["object"]["points"].as_array().unwrap().len(), 1);

    let out = mvms(&["coequalizer", "--inline", &id, &swap_free]);
    assert!(out.status.success());

    let out = mvms(&["kernel-pair", "--inline", &swap_free]);
    assert!(out.status.success());

    let unit = r#"{"points":[{"id":"0","denominator":{"default":0}}]}"#;
    let incl = format!(r#"{{"dom":{unit},"cod":{D2},"map":{{"0":"0"}}}}"#);
    let out = mvms(&["cokernel-pair", "--inline", &incl]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["object"]["points"].as_array().unwrap().len(), 3);

    let out = mvms(&["extend", "--inline", &incl, &incl]);
    assert!(out.status.success());

    let out = mvms(&["canonical", "--inline", D2, "--family", D2]);
    assert!(out.status.success());
}

#[test]
fn dual_of_object_and_arrow() {
    let out = mvms(&["dual", "--inline", D6]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["size"], serde_json::json!(14));

    let arrow = format!(r#"{{"dom":{D6},"cod":{D2},"map":{{"0":"0","1":"1"}}}}"#);
    let out = mvms(&["dual", "--inline", &arrow]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(!value["table"].as_array().unwrap().is_empty());
}

#[test]
fn quotients_inline() {
    let out = mvms(&["quotients", "--inline", D2]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value.as_array().unwrap().len(), 3);
}

#[test]
fn check_passes_and_reports() {
    let out = mvms(&[
        "check",
        "L-DUALITY",
        "--bounds",
        "max_points=2",
        "--bounds",
        "divisor_base=6",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["verdict"], serde_json::json!("pass"));

    let out = mvms(&["check", "list"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("L-DUALITY"));

    let out = mvms(&["check", "L-NOPE"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn export_dot_renders() {
    let diagram = format!(
        r#"{{"objects":{{"X":{D6},"Y":{D2}}},"arrows":[{{"name":"f","dom":"X","cod":"Y","map":{{"0":"0","1":"1"}}}}]}}"#
    );
    let out = mvms(&["export-dot", "--inline", &diagram]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("2·3"));
    assert!(dot.contains("monic,epic"));
}

#[test]
fn exit_codes() {
    // domain error: empty meet
    let out = mvms(&["sn", "meet"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    // domain error: denominator-increasing arrow rejected
    let bad = format!(r#"{{"dom":{D2},"cod":{D6},"map":{{"0":"0","1":"1"}}}}"#);
    let out = mvms(&["classify", "--inline", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("DENOM_VIOLATION"));

    // usage error
    let out = mvms(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}
