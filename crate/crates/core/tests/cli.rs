use planebranch::cli::{run_command, CommandOutput};
use serde_json::Value;

fn run(args: &[&str]) -> CommandOutput {
    run_command(std::iter::once("planebranch").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_str(out.stdout.trim()).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", out.stdout);
    });
    (out.code, v)
}

#[test]
fn invariants_report() {
    let (code, v) = json(&["invariants", "x = t^8; y = t^12+t^14+t^15"]);
    assert_eq!(code, 0);
    assert_eq!(v["semigroup"]["generators"], serde_json::json!([8, 12, 26, 53]));
    assert_eq!(v["semigroup"]["conductor"], 84);
    assert_eq!(v["semigroup"]["genus"], 42);
    assert_eq!(v["hironaka_sum"], 84);
    assert_eq!(v["apery"]["values"], serde_json::json!([0, 12, 26, 38, 53, 65, 79, 91]));
    assert_eq!(v["conductor_degrees"], serde_json::json!([84, 28, 16, 4, 2, 0]));
}

#[test]
fn json_flag_after_subcommand() {
    let out = run(&["invariants", "x = t^2; y = t^3", "--json"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with('{'));
}

#[test]
fn check_plane_verdicts() {
    let out = run(&["check-plane", "<6,10,29>"]);
    assert_eq!(out.code, 1);
    assert!(out
        .stdout
        .contains("reason: multiplicity sequence 6,4,2 not plane-admissible"));
    let (code, v) = json(&["check-plane", "<6,10,29>"]);
    assert_eq!(code, 1);
    assert_eq!(v["reason"], "multiplicity sequence 6,4,2 not plane-admissible");
    assert_eq!(v["iterative_criterion"]["reached_naturals"], true);
    let (code, v) = json(&["check-plane", "<8,12,26,53>"]);
    assert_eq!(code, 0);
    assert_eq!(v["plane"], true);
    assert_eq!(v["iterative_criterion"]["chain"], serde_json::json!([8, 4, 4, 2, 2]));
}

#[test]
fn equiv_shows_both_sequences() {
    let out = run(&["equiv", "x=t^4;y=t^5", "x=t^3;y=t^7"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("not equivalent"));
    assert!(out.stdout.contains("conductor degrees: 12,0 | 12,6,0"));
    let out = run(&["equiv", "x=t^8; y=t^12+t^14+t^15", "x = t^8; y = t^12 + t^14 + t^53"]);
    assert_eq!(out.code, 1);
    let realized = run(&["realize", "<8,12,26,53>"]);
    let first = realized.stdout.lines().next().unwrap().to_string();
    let out = run(&["equiv", "x=t^8; y=t^12+t^14+t^15", &first]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

#[test]
fn realize_output_parses_back() {
    let (code, v) = json(&["realize", "<30,42,280,855>"]);
    assert_eq!(code, 0);
    assert_eq!(v["branch"], "x = t^30; y = t^42 + t^112 + t^127");
    assert_eq!(v["precision"], 1554 + 60);
    let out = run(&["realize", "<4,5,6>"]);
    assert_eq!(out.code, 1);
}

#[test]
fn multseq_admissibility() {
    let (code, v) = json(&["multseq", "6,4,2^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["plane_admissible"], true);
    assert_eq!(v["blocks"], serde_json::json!([[6, 10], [2, 1]]));
    let (code, v) = json(&["multseq", "4,3,2"]);
    assert_eq!(code, 1);
    assert_eq!(v["branch_admissible"], false);
    assert_eq!(run(&["multseq", "2,3"]).code, 2);
}

#[test]
fn presentation_and_generating_function() {
    let out = run(&["present", "<8,12,26,53>"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("Y3^2 = Y0^10*Y2"));
    let out = run(&["genfun", "<30,42,280,855>"]);
    assert_eq!(
        out.stdout.trim(),
        "(1-t^210)(1-t^840)(1-t^1710)/((1-t^30)(1-t^42)(1-t^280)(1-t^855))"
    );
    let (code, v) = json(&["genfun", "<2,3>", "--expand", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["expansion"], serde_json::json!([1, 0, 1, 1, 1, 1, 1]));
}

#[test]
fn verify_and_descend() {
    let (code, v) = json(&["verify", "x = t^4 + t^5; y = t^6 + t^7", "--bound", "30"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["agree"], true);
    let (code, v) = json(&["descend", "<4,5,6>"]);
    assert_eq!(code, 1);
    assert_eq!(v["trace"][0]["outcome"]["failure"], "NegativeValue");
    assert_eq!(run(&["descend", "<4,6,13>"]).code, 0);
}

#[test]
fn error_exit_codes() {
    let out = run(&["invariants", "x = t^2; y = t^"]);
    assert_eq!(out.code, 2);
    assert_eq!(out.stderr.lines().count(), 1);
    let (code, v) = json(&["invariants", "x = t^2; y = t^4"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "GcdNotOne");
    let (code, v) = json(&["verify", "x = t^4; y = t^6 + t^7; prec = 8"]);
    assert_eq!(code, 3, "{v}");
    assert_eq!(v["error"], "InsufficientPrecision");
    assert_eq!(run(&["check-plane", "<4,6>"]).code, 2);
    assert_eq!(run(&["no-such-command"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn catalog_to_stdout_and_file() {
    let out = run(&["catalog", "6"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().count(), 4);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let out = run(&["catalog", "6", "--out", path.to_str().unwrap(), "--include-regular"]);
    assert_eq!(out.code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("{\"conductor\":0"));
}
