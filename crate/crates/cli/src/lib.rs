//! The `swaptwist` command line.
//!
//! Exit codes: 0 when the checked property holds (valid, entailed,
//! accepted), 1 when it fails (countermodel, rejected derivation), 2 for
//! usage and input errors.

pub mod report;
mod selftest;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use swaptwist::algebra::powerset_algebra;
use swaptwist::fo::{
    enumerate_swap_models, enumerate_twist_models, load_model, model_to_json, qlfi1_consequence, qlfi1_value,
    qmbc_consequence, qmbc_possible_values, EqualityKind, FOStructure, FOValuation, ModelShape, SwapStructure,
    DEFAULT_CLOSURE_CAP,
};
use swaptwist::hilbert::{check_derivation, parse_premises, parse_proof_script, DerivationVerdict, Logic};
use swaptwist::prop::{prop_consequence, PropValuation};
use swaptwist::swap::{full_swap, m5, SwapNmatrix, SwapOp};
use swaptwist::syntax::{
    free_vars_ordered, parse_formula, parse_formula_extending, Assignment, Formula, Signature,
};
use swaptwist::twist::{lfi1_consequence, lfi1_matrix, twist_matrix, TwistMatrix, TwistPair};
use swaptwist::Verdict;

use report::{
    AxiomsReport, Countermodel, CountermodelKind, Entry, EvalReport, OpTable, ParseReport, ProofReport, SchemaEntry,
    SearchReport, SelftestReport, TablesReport, Value, VerdictReport,
};

#[derive(Debug, Parser)]
#[command(name = "swaptwist", version, about = "Swap and twist structure semantics for LFIs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of sentences in a first-order ground closure.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_CAP)]
    closure_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableForm {
    Condensed,
    Full,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    Swap,
    Twist,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EqualityChoice {
    Classical,
    Mid,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it back with its free variables.
    Parse {
        formula: String,
        /// Comma-separated names to read as constants rather than variables.
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
    },
    /// Print the operation tables of a matrix.
    Tables {
        /// m5, lfi1, swap:N or twist:N.
        matrix: String,
        /// For swap matrices: D/ND classes, full output sets, or both.
        #[arg(long, value_enum, default_value_t = TableForm::Both)]
        form: TableForm,
    },
    /// Check that a propositional formula is valid in a matrix.
    CheckValid {
        #[arg(long, default_value = "m5")]
        matrix: String,
        formula: String,
    },
    /// Check a propositional consequence in a matrix.
    CheckConseq {
        #[arg(long, default_value = "m5")]
        matrix: String,
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        goal: String,
    },
    /// Evaluate a sentence in a first-order model file.
    FoEval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        sentence: String,
        /// `x=a` binds a free variable to a domain element (twist models).
        #[arg(long = "assign")]
        assignments: Vec<String>,
    },
    /// Check a first-order consequence in a model file.
    FoConseq {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        goal: String,
    },
    /// Check a proof script against a Hilbert calculus.
    ProveCheck {
        /// mbC, QmbC, LFI1o, QLFI1o or QmbCeq.
        #[arg(long)]
        logic: String,
        /// One premise per line; `#` starts a comment line.
        #[arg(long)]
        premises: Option<PathBuf>,
        /// JSON list of {"formula", "by"} steps.
        #[arg(long)]
        proof: PathBuf,
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
    },
    /// List the axiom schemas of a calculus.
    Axioms { logic: String },
    /// Check the built-in table fixtures and the bivaluation oracle.
    Selftest {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
    /// Look for a structure over the two-element algebra falsifying a
    /// first-order consequence, trying every structure up to a domain size.
    SearchModels {
        #[arg(long, value_enum)]
        semantics: Semantics,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        max_size: u8,
        #[arg(long = "premise")]
        premises: Vec<String>,
        #[arg(long)]
        goal: String,
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
        #[arg(long, value_enum, default_value_t = EqualityChoice::Classical)]
        equality: EqualityChoice,
    },
}

/// An input problem, reported on the error stream with exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

type Outcome = Result<(String, i32), Failure>;

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => {
            let _ = write!(out, "{text}");
            code
        }
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn emit<R: Serialize>(format: Format, report: &R, text: String) -> String {
    match format {
        Format::Text => text,
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize") + "\n",
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let f = cli.format;
    match &cli.command {
        Command::Parse { formula, constants } => parse_cmd(f, formula, constants),
        Command::Tables { matrix, form } => tables_cmd(f, matrix, *form),
        Command::CheckValid { matrix, formula } => conseq_cmd(f, matrix, &[], formula, true),
        Command::CheckConseq { matrix, premises, goal } => conseq_cmd(f, matrix, premises, goal, false),
        Command::FoEval { model, sentence, assignments } => fo_eval_cmd(f, model, sentence, assignments, cli.closure_cap),
        Command::FoConseq { model, premises, goal } => fo_conseq_cmd(f, model, premises, goal, cli.closure_cap),
        Command::ProveCheck { logic, premises, proof, constants } => {
            prove_cmd(f, logic, premises.as_deref(), proof, constants)
        }
        Command::Axioms { logic } => axioms_cmd(f, logic),
        Command::Selftest { seed, instances } => selftest_cmd(f, *seed, *instances),
        Command::SearchModels { semantics, max_size, premises, goal, constants, equality } => search_cmd(
            f,
            *semantics,
            *max_size as usize,
            premises,
            goal,
            constants,
            *equality,
            cli.closure_cap,
        ),
    }
}

fn signature_with(constants: &[String]) -> Signature {
    constants.iter().fold(Signature::new(), |s, c| s.with_constant(c.trim()))
}

fn parse_cmd(f: Format, text: &str, constants: &[String]) -> Outcome {
    let mut sig = signature_with(constants);
    let phi = parse_formula_extending(text, &mut sig)?;
    let report = ParseReport {
        formula: phi.to_string(),
        free_vars: free_vars_ordered(&phi),
        propositional: phi.is_propositional(),
        constants: sig.constants.iter().cloned().collect(),
        functions: sig.functions.clone(),
        predicates: sig.predicates.clone(),
        equality: sig.has_equality,
    };
    let mut t = format!("{}\n", report.formula);
    let _ = writeln!(t, "free variables: {}", list_or_none(&report.free_vars));
    if !report.propositional {
        let preds: Vec<String> = report.predicates.iter().map(|(p, n)| format!("{p}/{n}")).collect();
        let _ = writeln!(t, "predicates: {}", list_or_none(&preds));
        let funs: Vec<String> = report.functions.iter().map(|(p, n)| format!("{p}/{n}")).collect();
        let _ = writeln!(t, "functions: {}", list_or_none(&funs));
    }
    Ok((emit(f, &report, t), 0))
}

fn list_or_none(xs: &[String]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.join(", ")
    }
}

enum Matrix {
    Swap(SwapNmatrix),
    Twist(TwistMatrix),
}

fn matrix(spec: &str) -> Result<Matrix, Failure> {
    let spec = spec.trim().to_lowercase();
    let atoms = |s: &str| s.parse::<u32>().map_err(|_| Failure(format!("`{s}` is not a number of atoms")));
    Ok(match spec.split_once(':') {
        None if spec == "m5" => Matrix::Swap(m5()),
        None if spec == "lfi1" => Matrix::Twist(lfi1_matrix()),
        Some(("swap", n)) => Matrix::Swap(full_swap(&powerset_algebra(atoms(n)?)?)?),
        Some(("twist", n)) => Matrix::Twist(twist_matrix(&powerset_algebra(atoms(n)?)?)?),
        _ => return Err(Failure(format!("unknown matrix `{spec}` (expected m5, lfi1, swap:N or twist:N)"))),
    })
}

fn tables_cmd(f: Format, spec: &str, form: TableForm) -> Outcome {
    let report;
    let text;
    match matrix(spec)? {
        Matrix::Swap(m) => {
            let order = m.display_order();
            let values = order.iter().map(|&i| Value::swap(&m, &m.snapshot(i))).collect();
            let tables = SwapOp::ALL
                .iter()
                .map(|&op| {
                    let set = |outs: &[usize]| outs.iter().map(|&k| m.label(k)).collect::<Vec<_>>();
                    let cells = match op {
                        SwapOp::Bin(b) => {
                            order.iter().map(|&i| order.iter().map(|&j| set(m.binary(b, i, j))).collect()).collect()
                        }
                        SwapOp::Un(u) => order.iter().map(|&i| vec![set(m.unary(u, i))]).collect(),
                    };
                    OpTable { op: op.symbol().into(), cells }
                })
                .collect();
            report = TablesReport { matrix: spec.into(), values, tables };
            text = match form {
                TableForm::Condensed => m.render_tables(true),
                TableForm::Full => m.render_tables(false),
                TableForm::Both => format!("{}\n{}", m.render_tables(true), m.render_tables(false)),
            };
        }
        Matrix::Twist(m) => {
            let order = m.display_order();
            let values = order.iter().map(|p| Value::twist(&m, p)).collect();
            let tables = SwapOp::ALL
                .iter()
                .map(|&op| {
                    let cells = match op {
                        SwapOp::Bin(b) => order
                            .iter()
                            .map(|x| order.iter().map(|y| vec![m.label(&x.binary(b, *y))]).collect())
                            .collect(),
                        SwapOp::Un(u) => order.iter().map(|x| vec![vec![m.label(&x.unary(u))]]).collect(),
                    };
                    OpTable { op: op.symbol().into(), cells }
                })
                .collect();
            report = TablesReport { matrix: spec.into(), values, tables };
            text = m.render_tables();
        }
    }
    Ok((emit(f, &report, text), 0))
}

fn parse_props(texts: &[String], sig: &mut Signature) -> Result<Vec<Formula>, Failure> {
    let mut out = Vec::new();
    for t in texts {
        let phi = parse_formula_extending(t, sig).map_err(|e| Failure(format!("`{t}`: {e}")))?;
        if !phi.is_propositional() {
            return Err(Failure(format!("`{t}` is not propositional")));
        }
        out.push(phi);
    }
    Ok(out)
}

fn valuation_entries(m: &SwapNmatrix, v: &PropValuation) -> Vec<Entry> {
    v.entries.iter().map(|(g, s)| Entry { formula: g.to_string(), value: Value::swap(m, s) }).collect()
}

fn atom_entries(m: &TwistMatrix, map: &BTreeMap<String, TwistPair>) -> Vec<Entry> {
    map.iter().map(|(p, v)| Entry { formula: p.clone(), value: Value::twist(m, v) }).collect()
}

fn countermodel_text(cm: &Countermodel) -> String {
    let heading = match cm.kind {
        CountermodelKind::Valuation => "countermodel (valuation of the subformula closure):",
        CountermodelKind::AtomMap => "countermodel:",
        CountermodelKind::Assignment => "countermodel (assignment):",
        CountermodelKind::ClosureValuation => "closure countermodel (legal valuation of the ground closure):",
    };
    let mut t = format!("{heading}\n");
    for (x, a) in &cm.assignment {
        let _ = writeln!(t, "  {x} := {a}");
    }
    for e in &cm.entries {
        let _ = writeln!(t, "  {} ↦ {}", e.formula, e.value.text());
    }
    t
}

fn verdict_text(report: &VerdictReport, holds: &str, fails: &str) -> String {
    match &report.countermodel {
        None => format!("{holds}\n"),
        Some(cm) => format!("{fails}\n{}", countermodel_text(cm)),
    }
}

fn conseq_cmd(f: Format, spec: &str, premises: &[String], goal: &str, validity: bool) -> Outcome {
    let m = matrix(spec)?;
    let mut sig = Signature::new();
    let gamma = parse_props(premises, &mut sig)?;
    let phi = parse_props(&[goal.to_string()], &mut sig)?.remove(0);
    let countermodel = match &m {
        Matrix::Swap(m) => match prop_consequence(&gamma, &phi, m)? {
            Verdict::Holds => None,
            Verdict::Countermodel(v) => {
                Some(Countermodel { kind: CountermodelKind::Valuation, assignment: BTreeMap::new(), entries: valuation_entries(m, &v) })
            }
        },
        Matrix::Twist(m) => match lfi1_consequence(&gamma, &phi, m)? {
            Verdict::Holds => None,
            Verdict::Countermodel(map) => {
                Some(Countermodel { kind: CountermodelKind::AtomMap, assignment: BTreeMap::new(), entries: atom_entries(m, &map) })
            }
        },
    };
    let report = VerdictReport { holds: countermodel.is_none(), countermodel };
    let text = if validity { verdict_text(&report, "valid", "not valid") } else { verdict_text(&report, "holds", "does not hold") };
    let code = if report.holds { 0 } else { 1 };
    Ok((emit(f, &report, text), code))
}

fn load(path: &Path) -> Result<FOStructure, Failure> {
    load_model(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn parse_fo(texts: &[String], sig: &Signature) -> Result<Vec<Formula>, Failure> {
    texts.iter().map(|t| parse_formula(t, sig).map_err(|e| Failure(format!("`{t}`: {e}")))).collect()
}

fn assignment(domain: &[String], binds: &[String]) -> Result<Assignment, Failure> {
    let mut mu = Assignment::new();
    for b in binds {
        let (x, a) = b.split_once('=').ok_or_else(|| Failure(format!("`{b}` is not of the form x=a")))?;
        let k = domain
            .iter()
            .position(|d| d == a.trim())
            .ok_or_else(|| Failure(format!("`{}` is not a domain element", a.trim())))?;
        mu.insert(x.trim().to_string(), k);
    }
    Ok(mu)
}

fn fo_eval_cmd(f: Format, path: &Path, sentence: &str, binds: &[String], cap: usize) -> Outcome {
    let model = load(path)?;
    let phi = parse_fo(&[sentence.to_string()], &model.signature())?.remove(0);
    let values = match &model {
        FOStructure::Twist(s) => {
            let mu = assignment(&s.base.domain, binds)?;
            vec![Value::twist(&s.matrix, &qlfi1_value(s, &phi, &mu)?)]
        }
        FOStructure::Swap(s) => {
            if !binds.is_empty() {
                return Err(Failure("--assign applies to twist models only; use a sentence".into()));
            }
            qmbc_possible_values(s, &phi, cap)?.iter().map(|v| Value::swap(&s.matrix, v)).collect()
        }
    };
    let designated = values.iter().all(|v| v.designated);
    let report = EvalReport { sentence: phi.to_string(), values, designated };
    let labels: Vec<String> = report.values.iter().map(Value::text).collect();
    let text = match &model {
        FOStructure::Twist(_) => format!("{}\n", labels[0]),
        FOStructure::Swap(_) => format!("possible values: {}\n", labels.join(", ")),
    };
    Ok((emit(f, &report, text), if designated { 0 } else { 1 }))
}

fn fo_valuation_entries(s: &SwapStructure, v: &FOValuation) -> Vec<Entry> {
    v.entries.iter().map(|(g, x)| Entry { formula: g.to_string(), value: Value::swap(&s.matrix, x) }).collect()
}

fn fo_countermodel(model: &FOStructure, gamma: &[Formula], phi: &Formula, cap: usize) -> Result<Option<Countermodel>, Failure> {
    Ok(match model {
        FOStructure::Twist(s) => match qlfi1_consequence(gamma, phi, s)? {
            Verdict::Holds => None,
            Verdict::Countermodel(cm) => Some(Countermodel {
                kind: CountermodelKind::Assignment,
                assignment: cm.assignment.iter().map(|(x, &a)| (x.clone(), s.base.domain[a].clone())).collect(),
                entries: vec![Entry { formula: phi.to_string(), value: Value::twist(&s.matrix, &cm.value) }],
            }),
        },
        FOStructure::Swap(s) => match qmbc_consequence(gamma, phi, s, cap)? {
            Verdict::Holds => None,
            Verdict::Countermodel(v) => Some(Countermodel {
                kind: CountermodelKind::ClosureValuation,
                assignment: BTreeMap::new(),
                entries: fo_valuation_entries(s, &v),
            }),
        },
    })
}

fn fo_conseq_cmd(f: Format, path: &Path, premises: &[String], goal: &str, cap: usize) -> Outcome {
    let model = load(path)?;
    let sig = model.signature();
    let gamma = parse_fo(premises, &sig)?;
    let phi = parse_fo(&[goal.to_string()], &sig)?.remove(0);
    let countermodel = fo_countermodel(&model, &gamma, &phi, cap)?;
    let report = VerdictReport { holds: countermodel.is_none(), countermodel };
    let text = verdict_text(&report, "holds", "does not hold");
    let code = if report.holds { 0 } else { 1 };
    Ok((emit(f, &report, text), code))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn prove_cmd(f: Format, logic: &str, premises: Option<&Path>, proof: &Path, constants: &[String]) -> Outcome {
    let logic: Logic = logic.parse().map_err(Failure)?;
    let mut sig = signature_with(constants);
    let premises = match premises {
        Some(p) => parse_premises(&read(p)?, &mut sig)?,
        None => Vec::new(),
    };
    let d = parse_proof_script(logic, premises, &read(proof)?, &mut sig)?;
    let verdict = check_derivation(&d);
    let mut report = ProofReport {
        logic: logic.to_string(),
        valid: verdict.is_valid(),
        steps: d.steps.len(),
        conclusion: None,
        failed_step: None,
        error: None,
    };
    match &verdict {
        DerivationVerdict::Valid(c) => report.conclusion = Some(c.to_string()),
        DerivationVerdict::Invalid { step, error } => {
            report.failed_step = Some(step + 1);
            report.error = Some(error.to_string());
        }
        DerivationVerdict::Empty => report.error = Some("empty derivation".into()),
    }
    let text = match &verdict {
        DerivationVerdict::Valid(_) => format!("accepted: {verdict} in {logic} ({} steps)\n", d.steps.len()),
        _ => format!("rejected: {verdict}\n"),
    };
    Ok((emit(f, &report, text), if report.valid { 0 } else { 1 }))
}

fn axioms_cmd(f: Format, logic: &str) -> Outcome {
    let logic: Logic = logic.parse().map_err(Failure)?;
    let schemas: Vec<SchemaEntry> =
        logic.schemas().into_iter().map(|s| SchemaEntry { id: s.id().into(), schema: s.display().into() }).collect();
    let width = schemas.iter().map(|s| s.id.len()).max().unwrap_or(0);
    let mut text = format!("{logic}\n");
    for s in &schemas {
        let _ = writeln!(text, "  {:width$}  {}", s.id, s.schema);
    }
    if logic.is_first_order() {
        let _ = writeln!(text, "rules: MP, exists-in, forall-in");
    } else {
        let _ = writeln!(text, "rules: MP");
    }
    let report = AxiomsReport { logic: logic.to_string(), schemas };
    Ok((emit(f, &report, text), 0))
}

fn selftest_cmd(f: Format, seed: u64, instances: usize) -> Outcome {
    let checks = selftest::run(seed, instances);
    let mut text = String::new();
    for c in &checks {
        let _ = writeln!(text, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let ok = checks.iter().all(|c| c.passed);
    Ok((emit(f, &SelftestReport { checks }, text), if ok { 0 } else { 1 }))
}

#[allow(clippy::too_many_arguments)]
fn search_cmd(
    f: Format,
    semantics: Semantics,
    max_size: usize,
    premises: &[String],
    goal: &str,
    constants: &[String],
    equality: EqualityChoice,
    cap: usize,
) -> Outcome {
    let mut sig = signature_with(constants);
    let mut gamma = Vec::new();
    for t in premises {
        gamma.push(parse_formula_extending(t, &mut sig).map_err(|e| Failure(format!("`{t}`: {e}")))?);
    }
    let phi = parse_formula_extending(goal, &mut sig).map_err(|e| Failure(format!("`{goal}`: {e}")))?;
    let kind = match equality {
        EqualityChoice::Classical => EqualityKind::Classical,
        EqualityChoice::Mid => EqualityKind::Mid,
    };
    const LIMIT: usize = 100_000;
    let mut checked = 0;
    for size in 1..=max_size {
        let shape = ModelShape {
            size,
            constants: sig.constants.iter().cloned().collect(),
            functions: sig.functions.iter().map(|(k, &n)| (k.clone(), n)).collect(),
            predicates: sig.predicates.iter().map(|(k, &n)| (k.clone(), n)).collect(),
            equality: sig.has_equality.then_some(kind),
        };
        let models: Vec<FOStructure> = match semantics {
            Semantics::Swap => enumerate_swap_models(&m5(), &shape, LIMIT)?.into_iter().map(FOStructure::Swap).collect(),
            Semantics::Twist => {
                enumerate_twist_models(&lfi1_matrix(), &shape, LIMIT)?.into_iter().map(FOStructure::Twist).collect()
            }
        };
        for model in models {
            checked += 1;
            if let Some(cm) = fo_countermodel(&model, &gamma, &phi, cap)? {
                let json = model_to_json(&model);
                let report = SearchReport {
                    holds: false,
                    models_checked: checked,
                    model: Some(serde_json::from_str(&json)?),
                    countermodel: Some(cm),
                };
                let mut text = format!("falsified by structure {checked} (domain size {size}):\n{json}\n");
                text.push_str(&countermodel_text(report.countermodel.as_ref().expect("set above")));
                return Ok((emit(f, &report, text), 1));
            }
        }
    }
    let report = SearchReport { holds: true, models_checked: checked, model: None, countermodel: None };
    let text = format!("holds in all {checked} structures with domain size at most {max_size}\n");
    Ok((emit(f, &report, text), 0))
}
