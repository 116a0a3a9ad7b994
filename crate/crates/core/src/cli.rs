//! The `planebranch` command line: argument handling, reports and exit codes.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 insufficient
//! precision, 4 internal inconsistency.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::branch::{self, BranchError, PlaneBranch};
use crate::catalog;
use crate::multseq;
use crate::oracle::{self, OracleError};
use crate::parser::{
    apery_json, char_exponents_json, json_i64, json_u64, json_u64s, multseq_json, parse_branch,
    parse_multseq, parse_semigroup, render_branch, render_json, semigroup_json, series_json,
    ParseError,
};
use crate::presentation::{self, PresentationError};
use crate::semigroup::{self, NumericalSemigroup, SemigroupError};

#[derive(Parser, Debug)]
#[command(name = "planebranch", version, about = "Invariants of plane algebroid branches")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full invariant report for a branch, e.g. "x = t^8; y = t^12 + t^14 + t^15"
    Invariants { branch: String },
    /// Plane-branch test for a semigroup, by generators and by descent
    CheckPlane { semigroup: String },
    /// Canonical branch with the given value semigroup
    Realize { semigroup: String },
    /// Formal equivalence of two branches
    Equiv { first: String, second: String },
    /// Branch and plane admissibility of a multiplicity sequence
    Multseq { sequence: String },
    /// Complete-intersection relations of the semigroup ring
    Present { semigroup: String },
    /// Generating function of a plane semigroup
    Genfun {
        semigroup: String,
        /// Also expand to this degree and compare with membership
        #[arg(long)]
        expand: Option<u64>,
    },
    /// Cross-check the value semigroup against the row-reduction oracle
    Verify {
        branch: String,
        /// Largest value checked (default: conductor + 20)
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Descent trace of a semigroup down to ℕ
    Descend { semigroup: String },
    /// Write all plane semigroups with conductor at most N as JSON lines
    Catalog {
        max_conductor: u64,
        /// Output file (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also list ℕ, the smooth branch
        #[arg(long)]
        include_regular: bool,
    },
}

/// What a command printed and how it exited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(kind: &'static str, message: impl ToString) -> Self {
        Self {
            code: 2,
            kind,
            message: message.to_string(),
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        let kind = match &e {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::DuplicateVariable { .. } => "DuplicateVariable",
            ParseError::MissingVariable(_) => "MissingVariable",
            ParseError::NonPositiveExponent { .. } => "NonPositiveExponent",
            ParseError::TermBeyondPrecision { .. } => "TermBeyondPrecision",
            ParseError::NotNumericalSemigroup(_) => "NotNumericalSemigroup",
            ParseError::NotNonIncreasing { .. } => "NotNonIncreasing",
            ParseError::InvalidBranch(b) => return Failure::from(b.clone()),
        };
        Failure::input(kind, e)
    }
}

impl From<BranchError> for Failure {
    fn from(e: BranchError) -> Self {
        let (code, kind) = match &e {
            BranchError::InsufficientPrecision { .. } => (3, "InsufficientPrecision"),
            BranchError::InternalMismatch(_) => (4, "InternalMismatch"),
            BranchError::GcdNotOne { .. } => (2, "GcdNotOne"),
            BranchError::NonMonic(_) => (2, "NonMonic"),
            BranchError::ZeroParametrization => (2, "ZeroParametrization"),
            BranchError::ConstantTerm(_) => (2, "ConstantTerm"),
            BranchError::NotStandard => (2, "NotStandard"),
            BranchError::InvalidCharExponents(_) => (2, "InvalidCharExponents"),
            BranchError::Series(_) => (2, "SeriesError"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<SemigroupError> for Failure {
    fn from(e: SemigroupError) -> Self {
        let (code, kind) = match &e {
            SemigroupError::NotNumericalSemigroup(_) => (2, "NotNumericalSemigroup"),
            SemigroupError::BaseNotInSemigroup { .. } => (1, "BaseNotInSemigroup"),
            SemigroupError::LiftNotSemigroup { .. } => (1, "LiftNotSemigroup"),
            SemigroupError::NotPlane(_) => (1, "NotPlane"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<PresentationError> for Failure {
    fn from(e: PresentationError) -> Self {
        let kind = match &e {
            PresentationError::NotMember { .. } => "NotMember",
            PresentationError::NotPlane(_) => "NotPlane",
            PresentationError::NoPresentation(_) => "NoPresentation",
        };
        Self {
            code: 1,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let (code, kind) = match &e {
            OracleError::InsufficientPrecision { .. } => (3, "InsufficientPrecision"),
            _ => (2, "OracleError"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

/// A finished report: exit code, text rendering and JSON rendering.
struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Self { code: 0, text, json }
    }

    fn verdict(pass: bool, text: String, json: Value) -> Self {
        Self {
            code: if pass { 0 } else { 1 },
            text,
            json,
        }
    }
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match dispatch(&cli.command) {
        Ok(r) => CommandOutput {
            code: r.code,
            stdout: if cli.json {
                render_json(&r.json) + "\n"
            } else {
                r.text
            },
            stderr: String::new(),
        },
        Err(f) => {
            let line = format!("error: {}: {}\n", f.kind, f.message);
            if cli.json {
                CommandOutput {
                    code: f.code,
                    stdout: render_json(&json!({"error": f.kind, "reason": f.message})) + "\n",
                    stderr: line,
                }
            } else {
                CommandOutput {
                    code: f.code,
                    stdout: String::new(),
                    stderr: line,
                }
            }
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Invariants { branch } => invariants(branch),
        Command::CheckPlane { semigroup } => check_plane(semigroup),
        Command::Realize { semigroup } => realize(semigroup),
        Command::Equiv { first, second } => equiv(first, second),
        Command::Multseq { sequence } => multseq_cmd(sequence),
        Command::Present { semigroup } => present(semigroup),
        Command::Genfun { semigroup, expand } => genfun(semigroup, *expand),
        Command::Verify { branch, bound } => verify(branch, *bound),
        Command::Descend { semigroup } => descend(semigroup),
        Command::Catalog {
            max_conductor,
            out,
            include_regular,
        } => catalog_cmd(*max_conductor, out.as_deref(), *include_regular),
    }
}

fn read_semigroup(text: &str) -> Result<NumericalSemigroup, Failure> {
    let gens = parse_semigroup(text)?;
    Ok(NumericalSemigroup::from_generators(&gens)?)
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn internal(message: String) -> Failure {
    Failure {
        code: 4,
        kind: "InternalMismatch",
        message,
    }
}

/// Everything the library computes about one branch, cross-checked.
pub fn invariants_report(b: &PlaneBranch) -> Result<Value, String> {
    build_invariants(b).map(|(_, j)| j).map_err(|f| format!("{}: {}", f.kind, f.message))
}

fn build_invariants(b: &PlaneBranch) -> Result<(String, Value), Failure> {
    let prep = branch::prepare(b, |e| e.delta.last().unwrap() + 1)?;
    let exps = prep.exps.clone();
    let s = branch::value_semigroup(b)?;
    let seq = branch::multiplicity_sequence(b)?;
    let inv = branch::singularity_invariants(b)?;
    let m = exps.multiplicity();
    let apery = s.apery_set(m).expect("multiplicity is a member");
    if s.genus() * 2 != inv.hironaka_sum || s.conductor() != inv.hironaka_sum {
        return Err(internal(format!(
            "gaps {} and conductor {} do not match Σe(e-1) = {}",
            s.genus(),
            s.conductor(),
            inv.hironaka_sum
        )));
    }
    let forms = semigroup::conductor_closed_forms(&s, &exps)?;
    let pres = presentation::relations(&s)?;
    let gf = presentation::generating_function(&s)?;
    let relations: Vec<String> = pres.relations.iter().map(|r| r.to_string()).collect();

    let mut text = String::new();
    text += &format!("branch: {b}\n");
    text += &format!("characteristic exponents: {exps}\n");
    text += &format!("semigroup: {s}\n");
    text += &format!(
        "conductor: {}  frobenius: {}  gaps: {}\n",
        s.conductor(),
        s.frobenius(),
        s.genus()
    );
    text += &format!("apery set wrt {m}: {apery}\n");
    text += &format!("multiplicity sequence: {seq}\n");
    text += &format!("conductor degrees: {}\n", join(&inv.conductor_degrees));
    text += &format!("singularity degrees: {}\n", join(&inv.singularity_degrees));
    text += &format!("hironaka sum: {}\n", inv.hironaka_sum);
    for r in &relations {
        text += &format!("relation: {r}\n");
    }
    text += &format!("generating function: {gf}\n");

    let json = json!({
        "input": render_branch(b),
        "characteristic_exponents": char_exponents_json(&exps),
        "semigroup": semigroup_json(&s),
        "apery": apery_json(&apery),
        "multiplicity_sequence": multseq_json(&seq),
        "conductor_degrees": json_u64s(&inv.conductor_degrees),
        "singularity_degrees": json_u64s(&inv.singularity_degrees),
        "hironaka_sum": json_u64(inv.hironaka_sum),
        "d_conductors": forms.d_conductors.iter()
            .map(|&(d, c)| json!([json_u64(d), json_u64(c)]))
            .collect::<Vec<_>>(),
        "presentation": {
            "relations": relations,
            "best_effort": pres.best_effort,
        },
        "generating_function": gf_json(&gf),
    });
    Ok((text, json))
}

fn gf_json(gf: &presentation::GeneratingFunction) -> Value {
    json!({
        "numerator": json_u64s(&gf.numerator),
        "denominator": json_u64s(&gf.denominator),
        "text": gf.to_string(),
    })
}

fn invariants(text: &str) -> Result<Report, Failure> {
    let b = parse_branch(text)?;
    let (t, j) = build_invariants(&b)?;
    Ok(Report::ok(t, j))
}

/// Both plane criteria, with the descent trace.
pub fn check_plane_report(s: &NumericalSemigroup) -> (bool, String, Value) {
    let direct = semigroup::is_plane(s);
    let iter = semigroup::is_plane_iterative(s);
    let reason = iter
        .reason
        .clone()
        .or_else(|| direct.violation.as_ref().map(|v| v.to_string()));
    let mut text = format!("semigroup: {s}\n");
    text += &format!("symmetric: {}\n", s.is_symmetric());
    match &direct.violation {
        None => text += "generator criterion: plane\n",
        Some(v) => text += &format!("generator criterion: not plane ({v})\n"),
    }
    text += &format!(
        "iterative criterion: {}\n",
        if iter.plane { "plane" } else { "not plane" }
    );
    text += &trace_text(&iter.steps);
    text += &format!("multiplicity chain: {}\n", join(&iter.chain));
    if let Some(r) = &reason {
        text += &format!("reason: {r}\n");
    }
    let json = json!({
        "semigroup": semigroup_json(s),
        "plane": direct.plane,
        "generator_criterion": {
            "plane": direct.plane,
            "violation": direct.violation.as_ref().map(|v| v.to_string()),
        },
        "iterative_criterion": {
            "plane": iter.plane,
            "chain": json_u64s(&iter.chain),
            "reached_naturals": iter.reached_naturals,
            "trace": trace_json(&iter.steps),
        },
        "reason": reason,
    });
    (direct.plane, text, json)
}

fn trace_text(steps: &[semigroup::DescentStep]) -> String {
    let mut text = String::new();
    for st in steps {
        match &st.outcome {
            Ok(a) => {
                text += &format!(
                    "  {} apery wrt {}: {} -> {}\n",
                    st.semigroup, st.apery.base, st.apery, a
                )
            }
            Err(f) => {
                text += &format!(
                    "  {} apery wrt {}: {} -> {} {:?}\n",
                    st.semigroup,
                    st.apery.base,
                    st.apery,
                    f.kind(),
                    f.candidate()
                )
            }
        }
    }
    text
}

fn trace_json(steps: &[semigroup::DescentStep]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|st| {
                let outcome = match &st.outcome {
                    Ok(a) => json!({"ok": apery_json(a)}),
                    Err(f) => json!({
                        "failure": f.kind(),
                        "candidate": f.candidate().iter().map(|&c| json_i64(c)).collect::<Vec<_>>(),
                    }),
                };
                json!({
                    "semigroup": json_u64s(st.semigroup.min_generators()),
                    "apery": apery_json(&st.apery),
                    "outcome": outcome,
                })
            })
            .collect(),
    )
}

fn check_plane(text: &str) -> Result<Report, Failure> {
    let s = read_semigroup(text)?;
    let (plane, t, j) = check_plane_report(&s);
    Ok(Report::verdict(plane, t, j))
}

fn realize(text: &str) -> Result<Report, Failure> {
    let s = read_semigroup(text)?;
    let b = semigroup::realize(&s)?;
    let back = branch::value_semigroup(&b)?;
    if back != s {
        return Err(internal(format!("realization has semigroup {back}, not {s}")));
    }
    let poly = format!("x = {}; y = {}", b.x(), b.y());
    let t = format!("{poly}\nprecision: {}\n", b.precision());
    let j = json!({
        "semigroup": json_u64s(s.min_generators()),
        "branch": poly,
        "x": series_json(b.x()),
        "y": series_json(b.y()),
        "precision": json_u64(b.precision()),
        "characteristic_exponents": json_u64s(&semigroup::realization_exponents(&s)?),
    });
    Ok(Report::ok(t, j))
}

fn equiv(first: &str, second: &str) -> Result<Report, Failure> {
    let b1 = parse_branch(first)?;
    let b2 = parse_branch(second)?;
    let ev = branch::formally_equivalent(&b1, &b2)?;
    let mut t = format!(
        "{}\n",
        if ev.equivalent {
            "equivalent"
        } else {
            "not equivalent"
        }
    );
    t += &format!("semigroups: {} | {}\n", ev.semigroups.0, ev.semigroups.1);
    t += &format!(
        "multiplicity sequences: {} | {}\n",
        ev.multiplicity_sequences.0, ev.multiplicity_sequences.1
    );
    t += &format!(
        "conductor degrees: {} | {}\n",
        join(&ev.conductor_degrees.0),
        join(&ev.conductor_degrees.1)
    );
    let j = json!({
        "equivalent": ev.equivalent,
        "semigroups": [semigroup_json(&ev.semigroups.0), semigroup_json(&ev.semigroups.1)],
        "multiplicity_sequences": [
            multseq_json(&ev.multiplicity_sequences.0),
            multseq_json(&ev.multiplicity_sequences.1)
        ],
        "conductor_degrees": [json_u64s(&ev.conductor_degrees.0), json_u64s(&ev.conductor_degrees.1)],
    });
    Ok(Report::verdict(ev.equivalent, t, j))
}

/// Admissibility verdicts for a multiplicity sequence.
pub fn multseq_report(e: &multseq::MultiplicitySequence) -> (bool, String, Value) {
    let branch_ok = multseq::is_branch_admissible(e);
    let plane = multseq::is_plane_admissible(e);
    let mut t = format!("sequence: {e}\n");
    t += &format!("branch admissible: {branch_ok}\n");
    t += &format!("plane admissible: {}\n", plane.admissible);
    if let Some(s) = &plane.semigroup {
        t += &format!("semigroup: {s}\n");
    }
    if plane.admissible {
        let blocks: Vec<String> = plane
            .blocks
            .iter()
            .map(|(m, n)| format!("M({m},{n})"))
            .collect();
        t += &format!("blocks: {}\n", blocks.join(" "));
    }
    if let Some(r) = &plane.reason {
        t += &format!("reason: {r}\n");
    }
    let j = json!({
        "sequence": multseq_json(e),
        "branch_admissible": branch_ok,
        "plane_admissible": plane.admissible,
        "semigroup": plane.semigroup.as_ref().map(|s| json_u64s(s.min_generators())),
        "blocks": plane.blocks.iter().map(|&(m, n)| json!([json_u64(m), json_u64(n)])).collect::<Vec<_>>(),
        "reason": plane.reason,
    });
    (plane.admissible, t, j)
}

fn multseq_cmd(text: &str) -> Result<Report, Failure> {
    let e = parse_multseq(text)?;
    let (ok, t, j) = multseq_report(&e);
    Ok(Report::verdict(ok, t, j))
}

fn present(text: &str) -> Result<Report, Failure> {
    let s = read_semigroup(text)?;
    let pres = presentation::relations(&s)?;
    let mut t = format!("semigroup: {s}\n");
    for r in &pres.relations {
        t += &format!("{r}\n");
    }
    let graded = if pres.best_effort {
        t += "best effort: semigroup is not plane\n";
        None
    } else {
        let g = presentation::graded_relations(&s)?;
        let forms: Vec<String> = g.iter().map(|(j, p)| format!("Y{j}^{p}")).collect();
        t += &format!("initial forms: {}\n", forms.join(", "));
        Some(g)
    };
    let j = json!({
        "generators": json_u64s(&pres.generators),
        "relations": pres.relations.iter().map(|r| json!({
            "index": r.index,
            "power": json_u64(r.power),
            "monomial": json_u64s(&r.monomial.0),
            "text": r.to_string(),
        })).collect::<Vec<_>>(),
        "graded": graded.map(|g| g.iter().map(|&(j, p)| json!([j, json_u64(p)])).collect::<Vec<_>>()),
        "best_effort": pres.best_effort,
    });
    Ok(Report::ok(t, j))
}

fn genfun(text: &str, expand: Option<u64>) -> Result<Report, Failure> {
    let s = read_semigroup(text)?;
    let gf = presentation::generating_function(&s)?;
    let mut t = format!("{gf}\n");
    let mut j = json!({
        "semigroup": json_u64s(s.min_generators()),
        "generating_function": gf_json(&gf),
    });
    if let Some(n) = expand {
        let coeffs = presentation::expand_gf(&gf, n);
        for (i, &c) in coeffs.iter().enumerate() {
            if c != i128::from(s.contains(i as u64)) {
                return Err(internal(format!("coefficient of t^{i} is {c}")));
            }
        }
        let digits: String = coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        t += &format!("expansion to t^{n}: {digits}\n");
        j["expansion"] = Value::Array(coeffs.iter().map(|&c| json!(c as i64)).collect());
    }
    Ok(Report::ok(t, j))
}

fn verify(text: &str, bound: Option<u64>) -> Result<Report, Failure> {
    let b = parse_branch(text)?;
    let s = branch::value_semigroup(&b)?;
    let bound = bound.unwrap_or(s.conductor() + 20);
    let table = oracle::valuation_oracle(&b, bound)?;
    let expected = oracle::brute_semigroup(s.min_generators(), bound)?;
    let mismatches: Vec<u64> = (0..=bound)
        .filter(|&v| table.attained[v as usize] != expected.attained[v as usize])
        .collect();
    let agree = mismatches.is_empty();
    let mut t = format!("semigroup: {s}\nbound: {bound}\n");
    if agree {
        t += "oracle agrees\n";
    } else {
        t += &format!("oracle disagrees at {}\n", join(&mismatches));
    }
    let j = json!({
        "semigroup": json_u64s(s.min_generators()),
        "bound": json_u64(bound),
        "agree": agree,
        "mismatches": json_u64s(&mismatches),
        "oracle_values": json_u64s(&table.values()),
    });
    Ok(Report::verdict(agree, t, j))
}

fn descend(text: &str) -> Result<Report, Failure> {
    let s = read_semigroup(text)?;
    let (steps, end) = semigroup::descent_trace(&s);
    let mut t = format!("semigroup: {s}\n");
    t += &trace_text(&steps);
    let reached = end.is_ok();
    t += if reached { "reached N\n" } else { "descent stopped\n" };
    let j = json!({
        "semigroup": json_u64s(s.min_generators()),
        "trace": trace_json(&steps),
        "reached_naturals": reached,
    });
    Ok(Report::verdict(reached, t, j))
}

fn catalog_cmd(
    max_conductor: u64,
    out: Option<&std::path::Path>,
    include_regular: bool,
) -> Result<Report, Failure> {
    match out {
        Some(path) => {
            let n = catalog::catalog_enumerate(max_conductor, path, include_regular).map_err(
                |e| Failure {
                    code: 2,
                    kind: "IoError",
                    message: format!("{}: {e}", path.display()),
                },
            )?;
            Ok(Report::ok(
                format!("{n} records written to {}\n", path.display()),
                json!({"records": n, "path": path.display().to_string()}),
            ))
        }
        None => {
            let records = catalog::enumerate(max_conductor, include_regular);
            let body = catalog::render_catalog(&records);
            let lines: Vec<Value> = records.iter().map(|r| r.to_json()).collect();
            Ok(Report::ok(body, Value::Array(lines)))
        }
    }
}
