//! Commands behind the `obinv` binary, the bundled corpus and the example library.

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::format::{parse, render, InputDocument, Item, ParseError};
use crate::kirby::{ContactSurgeryDiagram, GammaValue, KirbyError, SurgeryComponent};
use crate::manifold::{h1_via_monodromy, mmnk, monodromy_arcs_text, pi1_presentation, MonodromyEndomorphism};
use crate::mapping::{stabilize, Stabilization};
use crate::report::{invariant_report, InvariantReport, Subject};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub format: OutputFormat,
    pub strict: bool,
    pub filter: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Report,
    H1,
    Euler,
    D3,
    Gamma,
    Pi1,
    Stabilize { kind: Stabilization, feet: (usize, usize) },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDEFINED: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Kirby(#[from] KirbyError),
    #[error("{0}")]
    Input(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
}

fn emit(flags: &Flags, text: String, machine: Value) -> String {
    match flags.format {
        OutputFormat::Text => text,
        OutputFormat::Machine => format!("{}\n", serde_json::to_string_pretty(&machine).expect("json")),
    }
}

fn strict_code(flags: &Flags, undefined: bool) -> i32 {
    if flags.strict && undefined {
        EXIT_UNDEFINED
    } else {
        EXIT_OK
    }
}

pub fn run(command: &Command, doc: &InputDocument, flags: &Flags) -> Result<Outcome, CliError> {
    let built = doc.build()?;
    let subject = &built.subject;
    if let Command::Stabilize { kind, feet } = command {
        let Subject::OpenBook(ob) = subject else {
            return Err(CliError::Input("stabilize needs an open book".into()));
        };
        let new = stabilize(ob, *kind, *feet).map_err(|e| CliError::Input(e.to_string()))?;
        let mut out = doc.clone();
        out.items.push(Item::Stabilize { kind: *kind, b1: feet.0, b2: feet.1 });
        out.pos.push((0, 1));
        let text = render(&out);
        let p = new.page();
        let machine = json!({
            "document": text,
            "page": {"genus": p.genus(), "boundary_count": p.boundary_count()},
            "word": new.word().to_string(),
        });
        return Ok(Outcome::ok(emit(flags, text.clone(), machine)));
    }
    if *command == Command::Pi1 {
        let Subject::OpenBook(ob) = subject else {
            return Err(CliError::Input("pi1 needs an open book".into()));
        };
        let phi = built.phi.clone().unwrap_or_else(|| MonodromyEndomorphism::identity(ob));
        let p = pi1_presentation(ob, &phi).map_err(|e| CliError::Input(e.to_string()))?;
        let ab = p.abelianization();
        let rels: Vec<String> = p.relators.iter().map(|r| r.render(&p.generators)).collect();
        let text = format!("{p}\nabelianization: {ab}\n");
        let machine = json!({"generators": p.generators, "relators": rels, "abelianization": ab});
        return Ok(Outcome::ok(emit(flags, text, machine)));
    }

    let r = invariant_report(subject)?;
    Ok(match command {
        Command::Report => Outcome { stdout: emit(flags, r.to_text(), r.to_json()), code: strict_code(flags, r.is_inconclusive()) },
        Command::H1 => {
            let mut machine = json!({"h1": r.h1, "h1_monodromy": r.h1_monodromy});
            if let Subject::OpenBook(ob) = subject {
                machine["relation_matrix"] = json!(h1_via_monodromy(ob).1.to_string());
                machine["arc_corrections"] = json!(monodromy_arcs_text(ob));
            }
            Outcome::ok(emit(flags, format!("{}\n", r.h1), machine))
        }
        Command::Euler => {
            let text = format!("{} ({})\n", r.euler.element, if r.euler.torsion { "torsion" } else { "non-torsion" });
            Outcome::ok(emit(flags, text, json!({"element": r.euler.element.to_string(), "torsion": r.euler.torsion, "group": r.h1})))
        }
        Command::D3 => Outcome {
            stdout: emit(flags, format!("{}\n", r.d3), json!({"d3": r.d3.value().map(|q| q.to_string())})),
            code: strict_code(flags, r.d3.value().is_none()),
        },
        Command::Gamma => {
            let lines = r.lines();
            let text: String = lines
                .iter()
                .filter(|(k, _)| k.starts_with("Gamma") || k == "spin structures")
                .map(|(k, v)| format!("{k}: {v}\n"))
                .collect();
            let inconclusive = r.gamma.iter().any(|g| matches!(g.value, GammaValue::Inconclusive { .. }));
            Outcome { stdout: emit(flags, text, r.to_json()["gamma"].clone()), code: strict_code(flags, inconclusive) }
        }
        Command::Pi1 | Command::Stabilize { .. } => unreachable!("handled above"),
    })
}

pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! corpus {
    ($($name:literal),* $(,)?) => {
        &[$(CorpusEntry { name: $name, text: include_str!(concat!("../../../corpus/", $name, ".ob")) }),*]
    };
}

pub const CORPUS: &[CorpusEntry] = corpus![
    "disk",
    "elliptic_Sigma12",
    "L41",
    "L41_planar",
    "lens_ot_p1",
    "lens_ot_p1_negstab",
    "lens_ot_p1_posstab",
    "lens_ot_p2",
    "lens_ot_p3",
    "lens_ot_p4",
    "lens_ot_p5",
    "lens_ot_p6",
    "lens_ot_p7",
    "lens_ot_p8",
    "lens_tight_p1",
    "lens_tight_p2",
    "lens_tight_p3",
    "lens_tight_p4",
    "lens_tight_p5",
    "lens_tight_p6",
    "lens_tight_p7",
    "lens_tight_p8",
    "mmnk_0_1_1",
    "mmnk_0_2_1",
    "mmnk_0_2_2",
    "mmnk_0_4_1",
    "mmnk_1_0_m1",
    "mmnk_1_1_m1",
    "mmnk_1_2_m1",
    "mmnk_1_m1_m1",
    "mmnk_1_m2_m1",
    "mmnk_3_2_m1",
    "mmnk_m1_1_0",
    "mmnk_m1_m1_0",
    "mmnk_m2_m3_1",
    "sigma235",
    "torus_empty",
    "xi1",
    "xi2",
    "xi_p1",
    "xi_p2",
    "xi_p3",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub key: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct EntryResult {
    pub name: String,
    pub experimental: bool,
    pub checks: Vec<Check>,
    /// Set when the entry could not be evaluated at all.
    pub error: Option<String>,
    pub runtime: Duration,
}

impl EntryResult {
    pub fn pass(&self) -> bool {
        self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone)]
pub struct CorpusResult {
    pub entries: Vec<EntryResult>,
}

impl CorpusResult {
    /// Experimental entries are reported but never fail the run.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().filter(|e| !e.experimental).all(EntryResult::pass)
    }

    pub fn to_text(&self) -> String {
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        for e in &self.entries {
            let status = match (e.pass(), e.experimental) {
                (true, _) => "PASS",
                (false, true) => "XFAIL",
                (false, false) => "FAIL",
            };
            out.push_str(&format!("{status:<5} {:<width$}", e.name));
            if let Some(err) = &e.error {
                out.push_str(&format!("  error: {err}"));
            }
            let bad: Vec<String> = e
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}: expected {} got {}", c.key, c.expected, c.computed))
                .collect();
            if !bad.is_empty() {
                out.push_str(&format!("  {}", bad.join("; ")));
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        let counted: Vec<&EntryResult> = self.entries.iter().filter(|e| !e.experimental).collect();
        let passed = counted.iter().filter(|e| e.pass()).count();
        out.push_str(&format!("{passed}/{} passed", counted.len()));
        let exp = self.entries.len() - counted.len();
        if exp > 0 {
            out.push_str(&format!(", {exp} experimental"));
        }
        out.push('\n');
        out
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let checks: Vec<Value> = e
                    .checks
                    .iter()
                    .map(|c| json!({"key": c.key, "expected": c.expected, "computed": c.computed, "pass": c.pass}))
                    .collect();
                json!({"name": e.name, "experimental": e.experimental, "pass": e.pass(), "error": e.error, "checks": checks})
            })
            .collect();
        json!({"entries": entries, "all_pass": self.all_pass()})
    }
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn computed_value(key: &str, expected: &str, subject: &Subject, r: &InvariantReport) -> Result<(String, bool), String> {
    let plain = |s: String| {
        let ok = s == expected;
        (s, ok)
    };
    Ok(match key {
        "h1" => plain(r.h1.to_string()),
        // free generators have no preferred orientation, so "+-" accepts either sign
        "e" => {
            let s = r.euler.element.to_string();
            let ok = match expected.strip_prefix("+-") {
                Some(body) => s == body || s == format!("-{body}"),
                None => s == expected,
            };
            (s, ok)
        }
        "torsion" => plain(yes_no(r.euler.torsion)),
        "d3" => plain(r.d3.to_string()),
        "spin" => plain(r.gamma.len().to_string()),
        "gamma" => plain(match r.designated_gamma() {
            Some(GammaValue::Conclusive(g)) => g.to_string(),
            Some(GammaValue::Inconclusive { .. }) => "inconclusive".into(),
            None => "none".into(),
        }),
        "hyperelliptic" => plain(r.hyperelliptic.map_or("n/a".into(), yes_no)),
        "note" => {
            let hit = r.notes.iter().find(|n| n.contains(expected));
            (hit.cloned().unwrap_or_else(|| r.notes.join(" | ")), hit.is_some())
        }
        "arc" => match subject {
            Subject::OpenBook(ob) => {
                let arcs = monodromy_arcs_text(ob);
                let ok = arcs.first().is_some_and(|a| a == expected);
                (arcs.join(" "), ok)
            }
            Subject::Diagram(_) => return Err("arc needs an open book".into()),
        },
        other => return Err(format!("unknown expectation `{other}`")),
    })
}

pub fn evaluate_entry(name: &str, text: &str) -> EntryResult {
    let start = Instant::now();
    let experimental = text.lines().any(|l| l.trim() == "# experimental");
    let expects: Vec<(String, String)> = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix("# expect "))
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    let mut res = EntryResult { name: name.into(), experimental, checks: Vec::new(), error: None, runtime: Duration::ZERO };
    let evaluated = parse(text)
        .map_err(|e| e.to_string())
        .and_then(|d| d.build().map_err(|e| e.to_string()))
        .and_then(|b| invariant_report(&b.subject).map(|r| (b.subject, r)).map_err(|e| e.to_string()));
    match evaluated {
        Err(e) => res.error = Some(e),
        Ok((subject, r)) => {
            if expects.is_empty() {
                res.error = Some("no expected values".into());
            }
            for (key, expected) in expects {
                match computed_value(&key, &expected, &subject, &r) {
                    Ok((computed, pass)) => res.checks.push(Check { key, expected, computed, pass }),
                    Err(e) => res.error = Some(e),
                }
            }
        }
    }
    res.runtime = start.elapsed();
    res
}

pub fn run_corpus_entries(entries: &[(&str, &str)], filter: Option<&str>) -> CorpusResult {
    let entries = entries
        .iter()
        .filter(|(n, _)| filter.is_none_or(|f| n.contains(f)))
        .map(|(n, t)| evaluate_entry(n, t))
        .collect();
    CorpusResult { entries }
}

pub fn run_corpus(filter: Option<&str>) -> CorpusResult {
    let list: Vec<(&str, &str)> = CORPUS.iter().map(|e| (e.name, e.text)).collect();
    run_corpus_entries(&list, filter)
}

pub fn corpus_outcome(flags: &Flags) -> Outcome {
    let res = run_corpus(flags.filter.as_deref());
    let stdout = emit(flags, res.to_text(), res.to_json());
    Outcome { stdout, code: if res.all_pass() { EXIT_OK } else { EXIT_INPUT } }
}

fn params(name: &str, head: &str) -> Option<Vec<i64>> {
    let inner = name.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|x| x.trim().parse().ok()).collect()
}

/// Corpus entries by name, plus `lens(p)`, `mmnk(m,n,k)` and `xi_p(p)`.
pub fn example_library(name: &str) -> Result<Subject, CliError> {
    if let Some(e) = CORPUS.iter().find(|e| e.name == name) {
        return Ok(parse(e.text)?.build()?.subject);
    }
    if let Some(v) = params(name, "mmnk").filter(|v| v.len() == 3) {
        return Ok(Subject::OpenBook(mmnk(v[0], v[1], v[2])));
    }
    if let Some(v) = params(name, "lens").filter(|v| v.len() == 1 && v[0] != 0) {
        let sign = if v[0] > 0 { "+c " } else { "-c " };
        let page = crate::page::standard_page(0, 2).expect("annulus");
        let ob = crate::mapping::OpenBook::from_names(page, &sign.repeat(v[0].unsigned_abs() as usize)).expect("catalog curve");
        return Ok(Subject::OpenBook(ob));
    }
    if let Some(v) = params(name, "xi_p").filter(|v| v.len() == 1 && v[0] > 0) {
        return Ok(Subject::Diagram(xi_p_candidate(v[0])));
    }
    Err(CliError::UnknownExample(name.into()))
}

/// The experimental two-component reconstruction shipped as `xi_p*.ob`.
pub fn xi_p_candidate(p: i64) -> ContactSurgeryDiagram {
    use crate::kirby::coefficient;
    let mut d = ContactSurgeryDiagram::new();
    let a = d.push(SurgeryComponent::legendrian("K1", -2, 1, coefficient(1, 1)));
    let b = d.push(SurgeryComponent::legendrian("K2", -1, 0, coefficient(-1, p)));
    d.set_link(a, b, 1.into());
    d
}

/// Reads a document from a path, or from the example library when no such file exists.
pub fn load(input: &str) -> Result<InputDocument, CliError> {
    match std::fs::read_to_string(input) {
        Ok(text) => Ok(parse(&text)?),
        Err(io) => match CORPUS.iter().find(|e| e.name == input) {
            Some(e) => Ok(parse(e.text)?),
            None => Err(CliError::Input(format!("{input}: {io}"))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(name: &str) -> InputDocument {
        load(name).unwrap()
    }

    #[test]
    fn single_value_commands() {
        let f = Flags::default();
        assert_eq!(run(&Command::D3, &doc("xi1"), &f).unwrap().stdout, "1/2\n");
        assert_eq!(run(&Command::D3, &doc("xi2"), &f).unwrap().stdout, "1/2\n");
        assert_eq!(run(&Command::H1, &doc("mmnk_0_4_1"), &f).unwrap().stdout, "Z/4\n");
        let out = run(&Command::Report, &doc("elliptic_Sigma12"), &f).unwrap();
        assert!(out.stdout.contains("H1: Z\n"));
        assert!(out.stdout.contains("e: -2*g1 (non-torsion)\n") || out.stdout.contains("e: 2*g1 (non-torsion)\n"));
        assert!(out.stdout.contains("d3: undefined (non-torsion e)\n"));
        assert_eq!(out.code, EXIT_OK);
    }

    #[test]
    fn strict_exit_codes() {
        let f = Flags { strict: true, ..Flags::default() };
        assert_eq!(run(&Command::D3, &doc("elliptic_Sigma12"), &f).unwrap().code, EXIT_UNDEFINED);
        assert_eq!(run(&Command::Report, &doc("elliptic_Sigma12"), &f).unwrap().code, EXIT_UNDEFINED);
        assert_eq!(run(&Command::D3, &doc("xi1"), &f).unwrap().code, EXIT_OK);
    }

    #[test]
    fn machine_output_matches_text() {
        let f = Flags { format: OutputFormat::Machine, ..Flags::default() };
        let out = run(&Command::Report, &doc("lens_ot_p4"), &f).unwrap().stdout;
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["d3"], "-1/4");
        assert_eq!(v["h1"]["text"], "Z/4");
        assert_eq!(v["gamma"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn stabilize_appends_a_line() {
        let out = run(&Command::Stabilize { kind: Stabilization::Negative, feet: (1, 1) }, &doc("lens_ot_p1"), &Flags::default()).unwrap();
        assert!(out.stdout.ends_with("stabilize neg 1 1\n"));
        let again = parse(&out.stdout).unwrap();
        assert_eq!(run(&Command::D3, &again, &Flags::default()).unwrap().stdout, "3/2\n");
    }

    #[test]
    fn pi1_command() {
        let d = parse("page g=0 r=2\ncurve c class=[1] winding=1\ntwist +c\ntwist +c\nimage c c\narcimage 2 c^2\n").unwrap();
        let out = run(&Command::Pi1, &d, &Flags::default()).unwrap();
        assert_eq!(out.stdout, "< c | c^2 >\nabelianization: Z/2\n");
        let bad = parse("page g=1 r=1\ncurve b1 class=[0,1] winding=0\ntwist +b1\n").unwrap();
        assert!(matches!(run(&Command::Pi1, &bad, &Flags::default()), Err(CliError::Input(_))));
    }

    #[test]
    fn corrupted_expectation_fails() {
        let text = CORPUS.iter().find(|e| e.name == "lens_ot_p3").unwrap().text.replace("d3: 0", "d3: 7");
        let res = run_corpus_entries(&[("lens_ot_p3", &text)], None);
        assert!(!res.all_pass());
        assert!(res.to_text().starts_with("FAIL"));
    }

    #[test]
    fn library_names() {
        assert!(example_library("sigma235").is_ok());
        assert!(example_library("mmnk(0,4,1)").is_ok());
        assert!(example_library("lens(-3)").is_ok());
        assert!(example_library("xi_p(2)").is_ok());
        assert!(matches!(example_library("nope"), Err(CliError::UnknownExample(_))));
    }
}
