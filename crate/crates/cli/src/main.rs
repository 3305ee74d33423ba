//! Command-line driver: evaluate formulas over frame files, check sequents,
//! analyze relation compatibility and axiom conditions, reproduce the
//! built-in case study, and dump concept lattices.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mvgraph::analysis::{check_condition, AxiomId};
use mvgraph::io::{self, FrameFile, LoadedFrame};
use mvgraph::logic::{frame_valid, FrameVerdict};
use mvgraph::parser::{parse_formula, parse_sequent};
use mvgraph::{casestudy, render, Error};

#[derive(Parser)]
#[command(
    name = "mvgraph",
    version,
    about = "Many-valued graph-based semantics for non-distributive modal logic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Output style for commands that print tables.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Aligned plain-text tables with printed value names
    Table,
    /// JSON with raw carrier indices (exact numerators on chains)
    Json,
}

/// Where a sequent is checked.
#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckMode {
    /// Under the frame file's own valuation
    Model,
    /// Under every assignment of concepts to the sequent's atoms
    Frame,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula in a frame file's model and print extent and intent
    Eval {
        /// Path to a JSON frame file
        frame: PathBuf,
        /// Formula, e.g. "[]_M psi"
        formula: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Close unstable valuation tables instead of rejecting them
        #[arg(long)]
        close: bool,
    },
    /// Check a sequent "phi |- psi" in the model or across the whole frame
    Check {
        /// Path to a JSON frame file
        frame: PathBuf,
        /// Sequent, e.g. "[]_M psi |- phi"
        sequent: String,
        #[arg(long, value_enum, default_value_t = CheckMode::Model)]
        mode: CheckMode,
        /// Step budget for the frame-validity search
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Close unstable valuation tables instead of rejecting them
        #[arg(long)]
        close: bool,
    },
    /// Report compatibility, E-reflexivity, and axiom conditions per label
    Analyze {
        /// Path to a JSON frame file
        frame: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Close unstable valuation tables instead of rejecting them
        #[arg(long)]
        close: bool,
    },
    /// Recompute the built-in case study and diff it against its frozen tables
    Casestudy {
        /// Also write the case-study frame file to this path
        #[arg(long)]
        emit_frame: Option<PathBuf>,
    },
    /// Enumerate the formal concepts of a frame's polarity
    Concepts {
        /// Path to a JSON frame file
        frame: PathBuf,
        /// Enumeration budget
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Close unstable valuation tables instead of rejecting them
        #[arg(long)]
        close: bool,
    },
}

fn main() -> ExitCode {
    // Die quietly when the reading end of a pipe closes (e.g. `| head`)
    // instead of panicking on the broken-pipe write error.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Eval {
            frame,
            formula,
            format,
            close,
        } => eval(&frame, &formula, format, close),
        Command::Check {
            frame,
            sequent,
            mode,
            budget,
            close,
        } => check(&frame, &sequent, mode, budget, close),
        Command::Analyze {
            frame,
            format,
            close,
        } => analyze(&frame, format, close),
        Command::Casestudy { emit_frame } => run_casestudy(emit_frame.as_deref()),
        Command::Concepts {
            frame,
            budget,
            format,
            close,
        } => concepts(&frame, budget, format, close),
    }
}

const PASS: ExitCode = ExitCode::SUCCESS;

fn fail() -> ExitCode {
    ExitCode::from(1)
}

/// Loads a frame file, honoring the --close flag. With `checked` false the
/// relation-compatibility gate is skipped so broken frames can be reported.
fn load(path: &Path, close: bool, checked: bool) -> Result<LoadedFrame, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut file: FrameFile = serde_json::from_str(&text)?;
    if close {
        file.close = true;
    }
    if checked {
        io::realize(file)
    } else {
        io::realize_unchecked(file)
    }
}

fn eval(path: &Path, formula: &str, format: Format, close: bool) -> Result<ExitCode, Error> {
    let loaded = load(path, close, true)?;
    let formula = parse_formula(formula)?;
    let concept = loaded.model.eval(&formula)?;
    let alg = loaded.frame.algebra();
    let nodes = loaded.frame.nodes();
    match format {
        Format::Table => {
            println!("extent of {formula}");
            print!("{}", render::extent_table(alg, nodes, concept.extent()));
            println!();
            println!("intent of {formula}");
            print!("{}", render::intent_table(alg, nodes, concept.intent()));
        }
        Format::Json => {
            let n = nodes.len();
            let extent: Vec<Vec<usize>> = (0..alg.len())
                .map(|r| {
                    (0..n)
                        .map(|c| concept.extent().get(r * n + c).index())
                        .collect()
                })
                .collect();
            let intent: Vec<usize> = (0..n).map(|z| concept.intent().get(z).index()).collect();
            let value = serde_json::json!({
                "formula": formula.to_string(),
                "extent": extent,
                "intent": intent,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("plain data"));
        }
    }
    Ok(PASS)
}

fn check(
    path: &Path,
    sequent: &str,
    mode: CheckMode,
    budget: u64,
    close: bool,
) -> Result<ExitCode, Error> {
    let loaded = load(path, close, true)?;
    let sequent = parse_sequent(sequent)?;
    match mode {
        CheckMode::Model => {
            let holds = loaded.model.sequent_true(&sequent)?;
            println!("{}", if holds { "true" } else { "false" });
            Ok(if holds { PASS } else { fail() })
        }
        CheckMode::Frame => match frame_valid(&loaded.frame, &sequent, budget)? {
            FrameVerdict::Valid => {
                println!("valid");
                Ok(PASS)
            }
            FrameVerdict::Invalid { assignment } => {
                println!("invalid");
                let alg = loaded.frame.algebra();
                for (atom, concept) in &assignment {
                    let cells: Vec<String> = concept
                        .extent()
                        .values()
                        .iter()
                        .map(|&v| alg.name(v).to_string())
                        .collect();
                    println!("  falsified with {atom} ↦ extent ({})", cells.join(" "));
                }
                Ok(fail())
            }
        },
    }
}

fn pass_fail(ok: bool) -> String {
    if ok { "pass" } else { "FAIL" }.to_string()
}

fn analyze(path: &Path, format: Format, close: bool) -> Result<ExitCode, Error> {
    let loaded = load(path, close, false)?;
    let frame = &loaded.frame;
    let alg = frame.algebra();

    let mut all_pass = true;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut notes: Vec<String> = Vec::new();
    let mut labels_json = serde_json::Map::new();
    for (label, compat) in frame.compatibility_reports()? {
        let compatible = compat.passed();
        let e_reflexive = frame.e_reflexive(&label)?;
        if !compatible {
            notes.push(format!("{label}: {compat}"));
        }
        all_pass &= compatible && e_reflexive;

        let mut cells = vec![
            label.clone(),
            pass_fail(compatible),
            pass_fail(e_reflexive),
        ];
        let mut conditions_json = serde_json::Map::new();
        for axiom in AxiomId::ALL {
            let verdict = check_condition(frame, &label, axiom)?;
            if let Some(witness) = &verdict.witness {
                notes.push(format!("{label}: condition for {axiom} fails {witness}"));
            }
            all_pass &= verdict.holds;
            cells.push(pass_fail(verdict.holds));
            conditions_json.insert(axiom.to_string(), serde_json::json!(verdict.holds));
        }
        rows.push(cells);
        labels_json.insert(
            label.clone(),
            serde_json::json!({
                "compatible": compatible,
                "e_reflexive": e_reflexive,
                "conditions": conditions_json,
            }),
        );
    }

    match format {
        Format::Table => {
            println!(
                "graph: {} nodes over an algebra of {} elements, {} labelled relation(s)",
                frame.nodes().len(),
                alg.len(),
                rows.len(),
            );
            if rows.is_empty() {
                println!("no labelled relations; only the edge matrix was checked (reflexive)");
            } else {
                let mut headers = vec![
                    "relation".to_string(),
                    "compatible".to_string(),
                    "E-reflexive".to_string(),
                ];
                headers.extend(AxiomId::ALL.iter().map(|a| a.to_string()));
                print!("{}", render::aligned_table(&headers, &rows));
                for note in &notes {
                    println!("{note}");
                }
            }
        }
        Format::Json => {
            let value = serde_json::json!({
                "nodes": frame.nodes().labels(),
                "algebra_size": alg.len(),
                "labels": labels_json,
                "all_pass": all_pass,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("plain data"));
        }
    }
    Ok(if all_pass { PASS } else { fail() })
}

fn run_casestudy(emit_frame: Option<&Path>) -> Result<ExitCode, Error> {
    if let Some(path) = emit_frame {
        std::fs::write(path, casestudy::json())?;
        println!("wrote {}", path.display());
    }
    let report = casestudy::verify()?;
    for check in report.checks() {
        println!(
            "{}: {}",
            check.name,
            if check.passed() { "ok" } else { "MISMATCH" }
        );
        for diff in &check.diffs {
            println!(
                "  at {}: expected {}, got {}",
                diff.cell, diff.expected, diff.actual
            );
        }
    }
    println!("{}", report.summary());
    Ok(if report.passed() { PASS } else { fail() })
}

fn concepts(path: &Path, budget: u64, format: Format, close: bool) -> Result<ExitCode, Error> {
    let loaded = load(path, close, true)?;
    let concepts = loaded.frame.polarity().enumerate_concepts(budget)?;
    let alg = loaded.frame.algebra();
    let names = |values: &[mvgraph::TruthValue]| -> Vec<String> {
        values.iter().map(|&v| alg.name(v).to_string()).collect()
    };
    match format {
        Format::Table => {
            println!("{} concepts", concepts.len());
            for (i, c) in concepts.iter().enumerate() {
                println!(
                    "{i:>4}  extent: {}  intent: {}",
                    names(c.extent().values()).join(" "),
                    names(c.intent().values()).join(" "),
                );
            }
        }
        Format::Json => {
            let list: Vec<serde_json::Value> = concepts
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "extent": c.extent().values().iter().map(|v| v.index()).collect::<Vec<_>>(),
                        "intent": c.intent().values().iter().map(|v| v.index()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let value = serde_json::json!({
                "count": concepts.len(),
                "concepts": list,
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("plain data"));
        }
    }
    Ok(PASS)
}
