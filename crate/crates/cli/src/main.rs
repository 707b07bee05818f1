//! `iel`: decide, certify and cross-check formulas of IEL and IEL⁻.
//!
//! Exit status: 0 valid (or check passed), 1 invalid (or check failed),
//! 2 on input errors and internal defects.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use iel_core::kripke::{check_frame, depth, forces, satisfies, to_dot, KripkeModel};
use iel_core::oracle::{crosscheck, Crosscheck, Verdict};
use iel_core::random::random_formulas;
use iel_core::{
    check_proof, check_refutation, decide, extract_model, parse, parse_corpus, pr, Formula,
    Logic, Outcome, PrOutcome, ProofTree, Refutation, Sequent,
};

const VALID: u8 = 0;
const INVALID: u8 = 1;
const ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "iel", version, about = "Decision procedures for intuitionistic epistemic logic")]
struct Cli {
    /// Logic to decide: iel or iel-.
    #[arg(long, global = true, default_value = "iel")]
    logic: Logic,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    /// Graphviz; only for commands that print a model.
    Dot,
}

#[derive(Args)]
struct Input {
    /// Formula text, e.g. "K a -> ~~a".
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    formula: Option<String>,
    /// Read the formula from a file instead.
    #[arg(long)]
    file: Option<PathBuf>,
}

impl Input {
    fn formula(&self) -> Result<Formula> {
        let text = match (&self.formula, &self.file) {
            (Some(text), _) => text.clone(),
            (None, Some(path)) => read(path)?,
            (None, None) => bail!("no formula given"),
        };
        parse(text.trim()).map_err(|e| anyhow!("cannot parse formula: {e}"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print a proof or a countermodel.
    Decide(Input),
    /// Print a proof; on failure print a countermodel only with --model.
    Prove {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        model: bool,
    },
    /// Print a proof, or a refutation together with its extracted model.
    Refute(Input),
    /// Check a proof tree in JSON.
    CheckProof { file: PathBuf },
    /// Check that a JSON model is a model of the logic refuting a formula.
    CheckModel {
        file: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Check a refutation tree in JSON.
    CheckRefutation { file: PathBuf },
    /// Compare the prover with brute-force model enumeration.
    Crosscheck {
        /// Formula to check; omit when using --random.
        formula: Option<String>,
        /// Largest number of worlds enumerated.
        #[arg(long, default_value_t = 3)]
        bound: usize,
        /// Check this many seeded random formulas instead.
        #[arg(long, conflicts_with = "formula")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide every record of a corpus file and report PASS/FAIL per record.
    Batch {
        #[arg(long)]
        corpus: PathBuf,
        /// Also cross-check each record against models up to this size.
        #[arg(long)]
        bound: Option<usize>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Reads a JSON file, unwrapping `key` when the document is an envelope
/// such as the output of `decide --format json`.
fn read_json<T: serde::de::DeserializeOwned>(path: &Path, key: &str) -> Result<T> {
    let mut value: Value = serde_json::from_str(&read(path)?)
        .with_context(|| format!("{} is not JSON", path.display()))?;
    if let Some(inner) = value.get_mut(key) {
        value = inner.take();
    }
    serde_json::from_value(value).with_context(|| format!("{} does not match the {key} schema", path.display()))
}

fn verify_proof(proof: &ProofTree, logic: Logic) -> Result<()> {
    check_proof(proof, logic).map_err(|defects| {
        anyhow!("internal error: emitted proof rejected: {}", defects[0])
    })
}

fn verify_model(model: &KripkeModel, logic: Logic, s: &Sequent) -> Result<()> {
    if let Some(v) = check_frame(model, logic).first() {
        bail!("internal error: emitted model is not a model: {v}");
    }
    if !satisfies(model, model.root(), s)? {
        bail!("internal error: emitted model does not refute {s}");
    }
    Ok(())
}

fn print_proof(proof: &ProofTree, logic: Logic, format: Format) -> Result<()> {
    match format {
        Format::Text => print!("valid in {logic}\n{}", proof.render_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&Outcome::Proof(proof.clone()))?),
        Format::Dot => bail!("the formula is valid; there is no model to render as dot"),
    }
    Ok(())
}

fn print_model(model: &KripkeModel, logic: Logic, format: Format) -> Result<()> {
    match format {
        Format::Text => println!("invalid in {logic}; countermodel of depth {}\n{model}", depth(model)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&Outcome::Countermodel(model.clone()))?),
        Format::Dot => print!("{}", to_dot(model)),
    }
    Ok(())
}

fn run_decide(input: &Input, logic: Logic, format: Format, show_model: bool) -> Result<u8> {
    let f = input.formula()?;
    match decide(&f, logic) {
        Outcome::Proof(proof) => {
            verify_proof(&proof, logic)?;
            print_proof(&proof, logic, format)?;
            Ok(VALID)
        }
        Outcome::Countermodel(model) => {
            verify_model(&model, logic, &Sequent::goal(f))?;
            if show_model {
                print_model(&model, logic, format)?;
            } else {
                eprintln!("not provable in {logic}; pass --model to see a countermodel");
            }
            Ok(INVALID)
        }
    }
}

fn run_refute(input: &Input, logic: Logic, format: Format) -> Result<u8> {
    let f = input.formula()?;
    let goal = Sequent::goal(f);
    match pr(&goal, logic) {
        PrOutcome::Valid { proof } => {
            verify_proof(&proof, logic)?;
            print_proof(&proof, logic, format)?;
            Ok(VALID)
        }
        PrOutcome::Invalid { refutation, model } => {
            check_refutation(&refutation, logic).map_err(|d| {
                anyhow!("internal error: emitted refutation rejected: {}", d[0])
            })?;
            if extract_model(&refutation, logic)? != model {
                bail!("internal error: refutation and model disagree");
            }
            verify_model(&model, logic, &goal)?;
            match format {
                Format::Text => print!(
                    "refuted in {logic}\n{}model of depth {}\n{model}\n",
                    refutation.render_text(),
                    depth(&model)
                ),
                Format::Json => {
                    let out = PrOutcome::Invalid { refutation, model };
                    println!("{}", serde_json::to_string_pretty(&out)?)
                }
                Format::Dot => print!("{}", to_dot(&model)),
            }
            Ok(INVALID)
        }
    }
}

fn report_check(ok: bool, what: &str, problems: &[String], format: Format) -> Result<u8> {
    match format {
        Format::Json => println!("{}", json!({ "ok": ok, "check": what, "problems": problems })),
        _ if ok => println!("{what}: ok"),
        _ => {
            println!("{what}: rejected");
            for p in problems {
                println!("  {p}");
            }
        }
    }
    Ok(if ok { VALID } else { INVALID })
}

fn run_check_model(file: &Path, formula: &str, logic: Logic, format: Format) -> Result<u8> {
    let model: KripkeModel = read_json(file, "model")?;
    let f = parse(formula).map_err(|e| anyhow!("cannot parse formula: {e}"))?;
    let mut problems: Vec<String> = check_frame(&model, logic).iter().map(|v| v.to_string()).collect();
    if problems.is_empty() && forces(&model, model.root(), &f)? {
        problems.push(format!("the root forces {f}"));
    }
    report_check(problems.is_empty(), "model", &problems, format)
}

fn print_crosscheck(c: &Crosscheck, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string(c)?),
        _ => {
            let prover = match c.prover_depth {
                None => "valid".to_string(),
                Some(d) => format!("invalid, depth {d}"),
            };
            let oracle = match c.oracle.min_depth_found {
                None => "no countermodel".to_string(),
                Some(d) => format!("countermodel, min depth {d}"),
            };
            let verdict = match c.verdict {
                Verdict::Consistent => "consistent",
                Verdict::Contradiction => "CONTRADICTION",
            };
            println!(
                "{verdict}: {} | prover {prover} | oracle {oracle} ({} models, bound {})",
                c.oracle.formula, c.oracle.models_enumerated, c.oracle.bound_worlds
            );
            for p in &c.problems {
                println!("  {p}");
            }
        }
    }
    Ok(())
}

fn run_crosscheck(formulas: Vec<Formula>, logic: Logic, bound: usize, format: Format) -> Result<u8> {
    if !(1..=iel_core::oracle::MAX_WORLDS).contains(&bound) {
        bail!("bound must lie in 1..={}", iel_core::oracle::MAX_WORLDS);
    }
    let results: Vec<Crosscheck> = formulas.par_iter().map(|f| crosscheck(f, logic, bound)).collect();
    for c in &results {
        print_crosscheck(c, format)?;
    }
    let bad = results.iter().filter(|c| c.verdict == Verdict::Contradiction).count();
    if results.len() > 1 && format == Format::Text {
        println!("{} formulas, {bad} contradictions", results.len());
    }
    Ok(if bad == 0 { VALID } else { ERROR })
}

struct Record {
    line: usize,
    text: String,
    problems: Vec<String>,
}

fn run_batch(corpus: &Path, bound: Option<usize>, format: Format) -> Result<u8> {
    let entries = parse_corpus(&read(corpus)?)?;
    let records: Vec<Record> = entries
        .par_iter()
        .map(|entry| {
            let mut problems = Vec::new();
            let outcome = decide(&entry.formula, entry.logic);
            let certified = match &outcome {
                Outcome::Proof(p) => verify_proof(p, entry.logic),
                Outcome::Countermodel(m) => {
                    verify_model(m, entry.logic, &Sequent::goal(entry.formula.clone()))
                }
            };
            if let Err(e) = certified {
                problems.push(e.to_string());
            }
            if outcome.is_valid() != entry.expected_valid {
                let got = if outcome.is_valid() { "valid" } else { "invalid" };
                problems.push(format!("decided {got}"));
            }
            if let Some(bound) = bound {
                problems.extend(crosscheck(&entry.formula, entry.logic, bound).problems);
            }
            Record {
                line: entry.line,
                text: entry.to_string(),
                problems,
            }
        })
        .collect();
    let failed = records.iter().filter(|r| !r.problems.is_empty()).count();
    match format {
        Format::Json => {
            let out: Vec<Value> = records
                .iter()
                .map(|r| json!({ "line": r.line, "record": r.text, "pass": r.problems.is_empty(), "problems": r.problems }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        _ => {
            for r in &records {
                if r.problems.is_empty() {
                    println!("PASS line {}: {}", r.line, r.text);
                } else {
                    println!("FAIL line {}: {} ({})", r.line, r.text, r.problems.join("; "));
                }
            }
            println!("{} records, {} passed, {failed} failed", records.len(), records.len() - failed);
        }
    }
    Ok(if failed == 0 { VALID } else { INVALID })
}

fn run(cli: Cli) -> Result<u8> {
    let (logic, format) = (cli.logic, cli.format);
    let model_output = matches!(
        cli.command,
        Command::Decide(_) | Command::Prove { .. } | Command::Refute(_)
    );
    if format == Format::Dot && !model_output {
        bail!("--format dot is only available for decide, prove and refute");
    }
    match cli.command {
        Command::Decide(input) => run_decide(&input, logic, format, true),
        Command::Prove { input, model } => run_decide(&input, logic, format, model),
        Command::Refute(input) => run_refute(&input, logic, format),
        Command::CheckProof { file } => {
            let proof: ProofTree = read_json(&file, "proof")?;
            let problems = match check_proof(&proof, logic) {
                Ok(()) => vec![],
                Err(defects) => defects.iter().map(|d| d.to_string()).collect(),
            };
            report_check(problems.is_empty(), "proof", &problems, format)
        }
        Command::CheckModel { file, formula } => run_check_model(&file, &formula, logic, format),
        Command::CheckRefutation { file } => {
            let refutation: Refutation = read_json(&file, "refutation")?;
            let problems = match check_refutation(&refutation, logic) {
                Ok(()) => vec![],
                Err(defects) => defects.iter().map(|d| d.to_string()).collect(),
            };
            report_check(problems.is_empty(), "refutation", &problems, format)
        }
        Command::Crosscheck { formula, bound, random, seed } => {
            let formulas = match (formula, random) {
                (_, Some(n)) => random_formulas(seed, n, 8),
                (Some(text), None) => {
                    vec![parse(&text).map_err(|e| anyhow!("cannot parse formula: {e}"))?]
                }
                (None, None) => bail!("give a formula or --random N"),
            };
            run_crosscheck(formulas, logic, bound, format)
        }
        Command::Batch { corpus, bound } => run_batch(&corpus, bound, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ERROR)
        }
    }
}
