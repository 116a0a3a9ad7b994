//! Browser bindings: each call takes the same text the CLI accepts and
//! returns the CLI's JSON output, a report or `{"error": kind, "reason": ...}`.

use wasm_bindgen::prelude::*;

use planebranch::cli::run_command;

fn run_json(command: &str, arg: &str) -> String {
    let out = run_command(["planebranch", "--json", command, arg]);
    if out.stdout.is_empty() {
        // clap rejected the argument itself, e.g. text starting with "-"
        let reason = out.stderr.lines().next().unwrap_or("invalid input");
        return serde_json::json!({"error": "UsageError", "reason": reason}).to_string();
    }
    out.stdout.trim_end().to_string()
}

#[wasm_bindgen]
pub fn invariants(branch: &str) -> String {
    run_json("invariants", branch)
}

#[wasm_bindgen]
pub fn check_plane(semigroup: &str) -> String {
    run_json("check-plane", semigroup)
}

#[wasm_bindgen]
pub fn multseq(sequence: &str) -> String {
    run_json("multseq", sequence)
}
