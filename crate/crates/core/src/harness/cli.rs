//! The `ga` command.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::compare::{compare_languages, Acceptor, ComparisonReport, Decision, GAcceptor, GroupOracle, MachineAcceptor};
use super::conjecture::conjecture_check;
use super::document::{load_document, load_group, save_document, Document, MachineDocument};
use super::enumerate::enumerate_words;
use crate::error::{Error, Result};
use crate::gaut::{wp_automaton, GAutomaton, GDecider, MembershipVerdict, SearchBudget};
use crate::group::GroupSpec;
use crate::machine::{Decider, MachineClass, Verdict};
use crate::transfer::{product, wp_machine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ga", version, about = "Group-labeled automata and their machine compilations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassChoice {
    Auto,
    Fsa,
    Pda,
    Lba,
}

#[derive(Debug, clap::Args)]
struct BudgetArgs {
    /// Largest group-element norm kept during G-automaton search.
    #[arg(long)]
    budget_norm: Option<u64>,
    /// Consecutive ε-moves allowed at one input position.
    #[arg(long)]
    budget_eps: Option<usize>,
    /// Configurations explored before giving up.
    #[arg(long)]
    budget_configs: Option<usize>,
}

impl BudgetArgs {
    fn budget(&self) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            norm_cap: self.budget_norm,
            eps_cap: self.budget_eps,
            max_configurations: self.budget_configs.unwrap_or(d.max_configurations),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a document for structural problems.
    Validate { file: PathBuf },
    /// Decide one word.
    Run {
        file: PathBuf,
        /// Space-separated tokens.
        #[arg(long)]
        word: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
    },
    /// Emit the one-state word-problem automaton, or with --class a machine.
    Wp {
        /// finite:<file>, zn:<k> or free:<k>.
        #[arg(long)]
        group: String,
        #[arg(long, value_enum)]
        class: Option<ClassChoice>,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Compile a G-automaton with a word-problem machine.
    Product {
        gautomaton: PathBuf,
        machine: PathBuf,
        #[arg(short = 'o')]
        output: Option<PathBuf>,
    },
    /// Compare two languages on every word up to a length.
    Compare {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
    },
    /// List the accepted words up to a length.
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
    },
    /// Check the filtered Z^2 word problem against its explicit description.
    Conjecture {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
    },
}

/// Runs `ga` with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| Error::Io { path: "<stdout>".into(), source })
}

fn write_doc(doc: &Document, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => save_document(doc, p),
        None => emit(out, &doc.to_json()?),
    }
}

fn json_line(value: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn words_of(word: &str) -> Vec<&str> {
    word.split_whitespace().collect()
}

/// The automaton actually searched: weights are split into generator steps
/// first when needed.
fn searchable(a: GAutomaton) -> Result<GAutomaton> {
    if a.is_normalized() {
        Ok(a)
    } else {
        a.normalize()
    }
}

fn require_valid(doc: &Document) -> Result<()> {
    let d = doc.validate();
    if d.is_empty() {
        Ok(())
    } else {
        Err(Error::Invalid(d))
    }
}

fn parse_group(arg: &str) -> Result<GroupSpec> {
    let (family, rest) = arg
        .split_once(':')
        .ok_or_else(|| Error::Argument(format!("--group {arg:?}: expected finite:<file>, zn:<k> or free:<k>")))?;
    let rank = || rest.parse::<usize>().map_err(|_| Error::Argument(format!("--group {arg:?}: bad rank")));
    match family {
        "finite" => load_group(Path::new(rest)),
        "zn" => GroupSpec::free_abelian(rank()?),
        "free" => GroupSpec::free(rank()?),
        _ => Err(Error::Argument(format!("--group {arg:?}: unknown family {family:?}"))),
    }
}

enum Loaded {
    Group(GroupSpec),
    Automaton(GAutomaton),
    Machine(MachineDocument),
}

fn load_acceptor_source(path: &Path) -> Result<Loaded> {
    let doc = load_document(path)?;
    require_valid(&doc)?;
    Ok(match doc {
        Document::Group(g) => Loaded::Group(g),
        Document::Gautomaton(a) => Loaded::Automaton(searchable(a)?),
        Document::Machine(m) => Loaded::Machine(m),
        Document::Fixture(f) => match f.gautomaton {
            Some(a) => Loaded::Automaton(searchable(a)?),
            None => Loaded::Machine(MachineDocument::plain(
                f.machine.ok_or_else(|| Error::Argument(format!("{}: empty fixture", path.display())))?,
            )),
        },
    })
}

fn acceptor<'a>(src: &'a Loaded, budget: SearchBudget) -> Result<Box<dyn Acceptor + 'a>> {
    Ok(match src {
        Loaded::Group(g) => Box::new(GroupOracle { group: g }),
        Loaded::Automaton(a) => Box::new(GAcceptor::new(a, budget)?),
        Loaded::Machine(m) => Box::new(MachineAcceptor::new(&m.machine)?),
    })
}

fn alphabet_of(src: &Loaded) -> Vec<String> {
    match src {
        Loaded::Group(g) => g.generator_tokens(),
        Loaded::Automaton(a) => a.alphabet.clone(),
        Loaded::Machine(m) => m.machine.input_alphabet.clone(),
    }
}

fn comparison_exit(r: &ComparisonReport) -> i32 {
    if !r.disagreements.is_empty() {
        EXIT_INVALID
    } else if !r.budget_exhausted.is_empty() {
        EXIT_EXHAUSTED
    } else {
        EXIT_OK
    }
}

fn print_report(r: &ComparisonReport, format: ReportFormat, out: &mut dyn Write) -> Result<()> {
    match format {
        ReportFormat::Text => emit(out, &r.to_text()),
        ReportFormat::Json => emit(out, &json_line(&serde_json::to_value(r)?)?),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { file } => {
            let doc = load_document(&file)?;
            let diags = doc.validate();
            if diags.is_empty() {
                emit(out, &format!("ok: {} {}\n", doc.kind(), file.display()))?;
                Ok(EXIT_OK)
            } else {
                emit(out, &format!("invalid: {} {}\n", doc.kind(), file.display()))?;
                for d in diags {
                    emit(out, &format!("  {d}\n"))?;
                }
                Ok(EXIT_INVALID)
            }
        }
        Command::Run { file, word, budget, report } => {
            let word = words_of(&word);
            match load_acceptor_source(&file)? {
                Loaded::Group(g) => {
                    let accepted = g.is_identity(&g.evaluate_tokens(&word)?);
                    let verdict = if accepted { "accept" } else { "reject" };
                    match report {
                        ReportFormat::Text => emit(out, &format!("{verdict}\n"))?,
                        ReportFormat::Json => emit(out, &json_line(&json!({ "verdict": verdict }))?)?,
                    }
                    Ok(if accepted { EXIT_OK } else { EXIT_REJECT })
                }
                Loaded::Automaton(a) => {
                    let m = GDecider::new(&a)?.run(&word, &budget.budget())?;
                    match report {
                        ReportFormat::Text => {
                            let mut s = format!("{}\nconfigurations: {}\n", m.verdict, m.configurations);
                            if m.verdict == MembershipVerdict::RejectWithinBudget {
                                s.push_str(&format!("exact: {}\n", m.exact));
                            }
                            emit(out, &s)?;
                        }
                        ReportFormat::Json => emit(out, &json_line(&serde_json::to_value(&m)?)?)?,
                    }
                    Ok(match m.verdict {
                        MembershipVerdict::Accept => EXIT_OK,
                        MembershipVerdict::RejectWithinBudget => EXIT_REJECT,
                        MembershipVerdict::BudgetExhausted => EXIT_EXHAUSTED,
                    })
                }
                Loaded::Machine(doc) => {
                    let r = Decider::new(&doc.machine)?.run(&word)?;
                    match report {
                        ReportFormat::Text => {
                            let mut s = format!("{}\nconfigurations: {}\n", r.verdict, r.stats.configurations);
                            if let Some(c) = r.stats.max_cells {
                                s.push_str(&format!("max cells: {c}\n"));
                            }
                            if let Some(d) = r.stats.max_stack_depth {
                                s.push_str(&format!("max stack depth: {d}\n"));
                            }
                            emit(out, &s)?;
                        }
                        ReportFormat::Json => emit(out, &json_line(&serde_json::to_value(&r)?)?)?,
                    }
                    Ok(match r.verdict {
                        Verdict::Accept => EXIT_OK,
                        Verdict::Reject => EXIT_REJECT,
                        Verdict::ResourceExceeded => EXIT_EXHAUSTED,
                    })
                }
            }
        }
        Command::Wp { group, class, output } => {
            let spec = parse_group(&group)?;
            let doc = match class {
                None => Document::Gautomaton(wp_automaton(&spec)),
                Some(c) => {
                    let class = match c {
                        ClassChoice::Auto => None,
                        ClassChoice::Fsa => Some(MachineClass::Fsa),
                        ClassChoice::Pda => Some(MachineClass::Pda),
                        ClassChoice::Lba => Some(MachineClass::Lba),
                    };
                    Document::Machine(wp_machine(&spec, class)?.into())
                }
            };
            write_doc(&doc, output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Product { gautomaton, machine, output } => {
            let p = match load_acceptor_source(&gautomaton)? {
                Loaded::Automaton(a) => a,
                _ => return Err(Error::Argument(format!("{}: expected a G-automaton", gautomaton.display()))),
            };
            let n = match load_document(&machine)? {
                Document::Machine(m) => m.word_problem_machine().ok_or_else(|| {
                    Error::Argument(format!("{}: machine does not declare a word problem", machine.display()))
                })?,
                other => {
                    return Err(Error::Argument(format!("{}: expected a machine, found {}", machine.display(), other.kind())))
                }
            };
            let pm = product(&p, &n)?;
            let doc = Document::Machine(MachineDocument {
                machine: pm.machine,
                word_problem: None,
                provenance: Some(pm.provenance),
            });
            write_doc(&doc, output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Compare { left, right, max_len, budget, report } => {
            let (l, r) = (load_acceptor_source(&left)?, load_acceptor_source(&right)?);
            let b = budget.budget();
            let rep = compare_languages(acceptor(&l, b)?.as_ref(), acceptor(&r, b)?.as_ref(), &alphabet_of(&l), max_len)?;
            print_report(&rep, report, out)?;
            Ok(comparison_exit(&rep))
        }
        Command::Enumerate { file, max_len, budget, report } => {
            let src = load_acceptor_source(&file)?;
            let acc = acceptor(&src, budget.budget())?;
            let mut accepted = Vec::new();
            let mut exhausted = Vec::new();
            for w in enumerate_words(&alphabet_of(&src), max_len) {
                let word: Vec<&str> = w.iter().map(String::as_str).collect();
                match acc.decide(&word)? {
                    Decision::Accept => accepted.push(w.join(" ")),
                    Decision::Reject => {}
                    Decision::Exhausted => exhausted.push(w.join(" ")),
                }
            }
            match report {
                ReportFormat::Text => {
                    for w in &accepted {
                        emit(out, &format!("[{w}]\n"))?;
                    }
                    for w in &exhausted {
                        emit(out, &format!("exhausted: [{w}]\n"))?;
                    }
                }
                ReportFormat::Json => emit(
                    out,
                    &json_line(&json!({ "max_len": max_len, "words": accepted, "budget_exhausted": exhausted }))?,
                )?,
            }
            Ok(if exhausted.is_empty() { EXIT_OK } else { EXIT_EXHAUSTED })
        }
        Command::Conjecture { max_len, report } => {
            let rep = conjecture_check(max_len)?;
            print_report(&rep, report, out)?;
            Ok(comparison_exit(&rep))
        }
    }
}
