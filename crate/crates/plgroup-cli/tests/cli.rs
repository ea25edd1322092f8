use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_plgroup"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const F0: &str = r#"{"points": [["0","0"],["1/2","1/4"],["3/4","1/2"],["1","1"]]}"#;
const ID: &str = r#"{"vertices": [], "left": {"slope":"1","offset":"0"}, "right": {"slope":"1","offset":"0"}}"#;

#[test]
fn member_f0() {
    let o = run(&["member", "--in", "-"], F0);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["member"], Value::Bool(true));
}

#[test]
fn congruence_violation_exits_2() {
    let o = run(&["construct", "map-interval", "--p", "65,97", "--a", "0", "--c", "1", "--a2", "0", "--c2", "2"], "");
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["error"], "CongruenceViolated");
    assert_eq!(v["delta"], 32);
}

#[test]
fn identity_diagram() {
    let o = run(&["render-svg", "--in", "-"], ID);
    assert_eq!(o.status.code(), Some(0));
    let svg = String::from_utf8(o.stdout).unwrap();
    let xs = |class: &str| -> Vec<String> {
        svg.lines()
            .filter(|l| l.contains(&format!("class=\"{class}\"")))
            .map(|l| l.split("x1=\"").nth(1).unwrap().split('"').next().unwrap().to_string())
            .collect()
    };
    assert_eq!(xs("tick domain"), xs("tick range"));
    assert_eq!(xs("tick domain").len(), 2);
    for l in svg.lines().filter(|l| l.contains("class=\"connector\"")) {
        let attr = |k: &str| l.split(&format!("{k}=\"")).nth(1).unwrap().split('"').next().unwrap().to_string();
        assert_eq!(attr("x1"), attr("x2"));
    }
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["member", "--bogus"], "").status.code(), Some(1));
    assert_eq!(run(&["member", "--in", "-"], "{not json").status.code(), Some(1));
}

#[test]
fn verify_half_line_presentation() {
    let o = run(&["verify-presentation", "--pres", "ghalf", "--p", "3"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["total"], 6);
}

#[test]
fn word_problem_on_a_relator() {
    let o = run(&["wordproblem", "--pres", "f", "--word", "x1 x0 x1 x0^-1 x1^-1 x0 x0 x1^-1 x0^-2"], "");
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["trivial"], Value::Bool(true));
}
