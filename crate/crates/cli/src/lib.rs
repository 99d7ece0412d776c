//! Command-line front end. [`run`] parses arguments, dispatches a
//! subcommand and returns the process exit code:
//!
//! - 0: success, provable, equivalent, all diagrams pass
//! - 1: not provable, not equivalent, invalid proof or model, a failed check
//! - 2: unknown (a search bound was exhausted)
//! - 3: input or usage error

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tlogic_core::algebra::{entails, theory_constraints, validate_model, MonoidModel};
use tlogic_core::category::coherence_sweep;
use tlogic_core::decision::{bounded_search, decide, Verdict};
use tlogic_core::kernel::{check, Mode, NodePath, Proof};
use tlogic_core::rewrite::{apply_transform_at, canonicalize, eliminate_cuts_traced, Direction, TransformName};
use tlogic_core::theory::{decide_in_theory, encode_conversion, EncodingStyle, Theory, TheoryVerdict};
use tlogic_core::{parse_inference, parse_proof, render_proof};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tlogic", version, about = "Proof checking, cut elimination and decision for the tensor logic of resources")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Calculus: `t` has exchange, `tprime` does not
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,
    /// Theory file adding available, disposable and conversion axioms
    #[arg(long, global = true)]
    theory: Option<PathBuf>,
    /// Largest total number of axiom uses tried by `theory decide`
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Node budget for bounded proof search
    #[arg(long, global = true, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: u64,
    /// Print a JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized sweeps
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    T,
    Tprime,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::T => Mode::T,
            ModeArg::Tprime => Mode::Tprime,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    NegativeFrom,
    NegativeTo,
}

impl From<StyleArg> for EncodingStyle {
    fn from(s: StyleArg) -> EncodingStyle {
        match s {
            StyleArg::NegativeFrom => EncodingStyle::NegativeFrom,
            StyleArg::NegativeTo => EncodingStyle::NegativeTo,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a proof file and print its conclusion
    Check { proof: PathBuf },
    /// Decide an inference by the normal-form criterion
    Decide {
        inference: String,
        /// Use bounded proof search instead (never answers not-provable)
        #[arg(long)]
        oracle: bool,
    },
    /// Print a cut-free proof of a provable inference
    Prove { inference: String },
    /// Eliminate cuts from a proof
    ElimCut { proof: PathBuf },
    /// Print the canonical proof of a proof's conclusion
    Canon { proof: PathBuf },
    /// Whether two proofs denote the same morphism
    Equiv { first: PathBuf, second: PathBuf },
    /// Apply one proof transformation at a node
    Rewrite {
        proof: PathBuf,
        transform: String,
        /// Node path as dot-separated premise indices, or `root`
        #[arg(long, default_value = "root")]
        at: String,
        #[arg(long)]
        inverse: bool,
        /// Antecedent position for introducing transformations
        #[arg(long)]
        site: Option<usize>,
    },
    /// Resource theories
    #[command(subcommand)]
    Theory(TheoryCommand),
    /// Ordered monoid models
    #[command(subcommand)]
    Model(ModelCommand),
    /// Monoidal coherence checks
    #[command(subcommand)]
    Coherence(CoherenceCommand),
}

#[derive(Debug, Subcommand)]
enum TheoryCommand {
    /// Decide an inference in the theory given by --theory
    Decide {
        inference: String,
        /// Replace conversions by fresh negative atoms first
        #[arg(long, value_enum)]
        encode: Option<StyleArg>,
    },
    /// Print the theory with conversions encoded
    Encode {
        #[arg(long, value_enum, default_value = "negative-from")]
        style: StyleArg,
    },
}

#[derive(Debug, Subcommand)]
enum ModelCommand {
    /// Validate a model file and optionally test an entailment in it
    Check { model: PathBuf, inference: Option<String> },
}

#[derive(Debug, Subcommand)]
enum CoherenceCommand {
    /// Check every diagram over small term tuples, plus random checks
    Sweep {
        #[arg(long, default_value_t = 2)]
        max_atoms: usize,
        /// Random proof pairs for the fullness check
        #[arg(long, default_value_t = 300)]
        pairs: usize,
    },
}

/// A command outcome: exit code, verdict word, optional proof, detail text.
struct Outcome {
    code: i32,
    verdict: &'static str,
    witness: Option<String>,
    detail: String,
}

impl Outcome {
    fn new(code: i32, verdict: &'static str, detail: impl Into<String>) -> Outcome {
        Outcome { code, verdict, witness: None, detail: detail.into() }
    }

    fn with_witness(mut self, p: &Proof) -> Outcome {
        self.witness = Some(render_proof(p));
        self
    }

    fn input(detail: impl Into<String>) -> Outcome {
        Outcome::new(EXIT_INPUT, "error", detail)
    }
}

/// Runs the tool on `argv` (including the program name), writing results
/// to `out` and diagnostics to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INPUT
                }
            };
        }
    };
    let outcome = dispatch(&cli);
    let result = if cli.global.json {
        let mut obj = json!({ "verdict": outcome.verdict, "detail": outcome.detail });
        if let Some(w) = &outcome.witness {
            obj["witness"] = Value::String(w.clone());
        }
        writeln!(out, "{obj}")
    } else if outcome.code == EXIT_INPUT {
        writeln!(err, "error: {}", outcome.detail)
    } else {
        let mut text = outcome.verdict.to_string();
        if !outcome.detail.is_empty() {
            text.push_str(&format!(": {}", outcome.detail));
        }
        if let Some(w) = &outcome.witness {
            text.push_str(&format!("\n{w}"));
        }
        writeln!(out, "{text}")
    };
    if result.is_err() {
        return EXIT_INPUT;
    }
    outcome.code
}

fn read(path: &Path) -> Result<String, Outcome> {
    std::fs::read_to_string(path).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn load_proof(path: &Path) -> Result<Proof, Outcome> {
    parse_proof(&read(path)?).map_err(|e| Outcome::input(format!("{}: {e}", path.display())))
}

fn load_theory(g: &Global) -> Result<Option<Theory>, Outcome> {
    match &g.theory {
        None => Ok(None),
        Some(p) => Theory::parse(&read(p)?).map(Some).map_err(|e| Outcome::input(format!("{}: {e}", p.display()))),
    }
}

fn inference(text: &str) -> Result<tlogic_core::Inference, Outcome> {
    parse_inference(text).map_err(|e| Outcome::input(format!("`{text}`: {e}")))
}

fn dispatch(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(o) | Err(o) => o,
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Outcome> {
    let g = &cli.global;
    let mode: Mode = g.mode.map(Mode::from).unwrap_or(Mode::T);
    let theory = load_theory(g)?;
    let axioms = theory.as_ref().map(|t| t as &dyn tlogic_core::kernel::AxiomSet);
    Ok(match &cli.command {
        Command::Check { proof } => {
            let p = load_proof(proof)?;
            match check(&p, mode, axioms) {
                Ok(inf) => Outcome::new(EXIT_OK, "valid", inf.to_string()),
                Err(e) => Outcome::new(EXIT_NO, "invalid", e.to_string()),
            }
        }
        Command::Decide { inference: text, oracle } => {
            let inf = inference(text)?;
            let verdict = if *oracle {
                bounded_search(&inf, mode, theory.as_ref(), g.max_nodes as usize)
            } else {
                if theory.is_some() {
                    return Err(Outcome::input("use `theory decide` for inferences in a theory"));
                }
                decide(&inf, mode)
            };
            match verdict {
                Verdict::Provable(p) => Outcome::new(EXIT_OK, "provable", inf.to_string()).with_witness(&p),
                Verdict::NotProvable(why) => Outcome::new(EXIT_NO, "not-provable", why),
                Verdict::Unknown(n) => Outcome::new(EXIT_UNKNOWN, "unknown", format!("no proof within {n} nodes")),
            }
        }
        Command::Prove { inference: text } => {
            let inf = inference(text)?;
            match decide(&inf, mode) {
                Verdict::Provable(p) => Outcome::new(EXIT_OK, "provable", inf.to_string()).with_witness(&p),
                Verdict::NotProvable(why) => Outcome::new(EXIT_NO, "not-provable", why),
                Verdict::Unknown(n) => Outcome::new(EXIT_UNKNOWN, "unknown", format!("bound {n}")),
            }
        }
        Command::ElimCut { proof } => {
            let p = load_proof(proof)?;
            match eliminate_cuts_traced(&p, mode, axioms) {
                Ok(r) if r.residual.is_empty() => {
                    let detail = format!("{} steps", r.steps.len());
                    Outcome::new(EXIT_OK, "cut-free", detail).with_witness(&r.proof)
                }
                Ok(r) => {
                    let at: Vec<String> = r.residual.iter().map(NodePath::to_string).collect();
                    let detail = format!("cuts against theory axioms remain at {}", at.join(", "));
                    Outcome::new(EXIT_NO, "residual-cuts", detail).with_witness(&r.proof)
                }
                Err(e) => Outcome::new(EXIT_NO, "invalid", e.to_string()),
            }
        }
        Command::Canon { proof } => {
            let p = load_proof(proof)?;
            match canonicalize(&p, mode) {
                Ok(c) => Outcome::new(EXIT_OK, "canonical", "").with_witness(&c),
                Err(e) => Outcome::new(EXIT_NO, "invalid", e.to_string()),
            }
        }
        Command::Equiv { first, second } => {
            let (a, b) = (load_proof(first)?, load_proof(second)?);
            match (canonicalize(&a, mode), canonicalize(&b, mode)) {
                (Ok(x), Ok(y)) if x == y => Outcome::new(EXIT_OK, "equivalent", "").with_witness(&x),
                (Ok(_), Ok(_)) => Outcome::new(EXIT_NO, "not-equivalent", "canonical forms differ"),
                (Err(e), _) | (_, Err(e)) => Outcome::new(EXIT_NO, "invalid", e.to_string()),
            }
        }
        Command::Rewrite { proof, transform, at, inverse, site } => {
            let p = load_proof(proof)?;
            let name: TransformName = transform.parse().map_err(Outcome::input)?;
            let path = parse_path(at).ok_or_else(|| Outcome::input(format!("bad node path `{at}`")))?;
            let dir = if *inverse { Direction::Inverse } else { Direction::Forward };
            match apply_transform_at(&p, &path, name, dir, mode, *site) {
                Ok(r) => Outcome::new(EXIT_OK, "rewritten", name.as_str()).with_witness(&r),
                Err(e) => Outcome::new(EXIT_NO, "no-match", e.to_string()),
            }
        }
        Command::Theory(TheoryCommand::Decide { inference: text, encode }) => {
            let theory = theory.ok_or_else(|| Outcome::input("`theory decide` needs --theory FILE"))?;
            let theory = match encode {
                Some(style) => encode_conversion(&theory, (*style).into()).map_err(|e| Outcome::input(e.to_string()))?,
                None => theory,
            };
            let inf = inference(text)?;
            match decide_in_theory(&theory, &inf, g.cap as usize).map_err(|e| Outcome::input(e.to_string()))? {
                TheoryVerdict::Provable { counts, witness } => {
                    let detail = format!(
                        "available {:?}, disposable {:?}, conversions {:?}",
                        counts.available, counts.disposable, counts.conversions
                    );
                    Outcome::new(EXIT_OK, "provable", detail).with_witness(&witness)
                }
                TheoryVerdict::NotProvable { reason } => Outcome::new(EXIT_NO, "not-provable", reason),
                TheoryVerdict::Unknown { cap, detail } => {
                    Outcome::new(EXIT_UNKNOWN, "unknown", format!("cap {cap}: {detail}"))
                }
            }
        }
        Command::Theory(TheoryCommand::Encode { style }) => {
            let theory = theory.ok_or_else(|| Outcome::input("`theory encode` needs --theory FILE"))?;
            let enc = encode_conversion(&theory, (*style).into()).map_err(|e| Outcome::input(e.to_string()))?;
            Outcome::new(EXIT_OK, "encoded", enc.render().trim_end().to_string())
        }
        Command::Model(ModelCommand::Check { model, inference: text }) => {
            let m = MonoidModel::parse(&read(model)?).map_err(|e| Outcome::input(format!("{}: {e}", model.display())))?;
            let mut problems: Vec<String> = validate_model(&m).iter().map(|v| v.to_string()).collect();
            if let Some(t) = &theory {
                problems.extend(theory_constraints(&m, t).map_err(|e| Outcome::input(e.to_string()))?);
            }
            if !problems.is_empty() {
                return Ok(Outcome::new(EXIT_NO, "invalid-model", problems.join("; ")));
            }
            match text {
                None => Outcome::new(EXIT_OK, "valid-model", format!("{} elements", m.size())),
                Some(text) => {
                    let inf = inference(text)?;
                    match entails(&m, &inf.antecedent, &inf.consequent) {
                        Ok(true) => Outcome::new(EXIT_OK, "entails", inf.to_string()),
                        Ok(false) => Outcome::new(EXIT_NO, "does-not-entail", inf.to_string()),
                        Err(e) => Outcome::input(e.to_string()),
                    }
                }
            }
        }
        Command::Coherence(CoherenceCommand::Sweep { max_atoms, pairs }) => {
            let modes = match g.mode {
                Some(m) => vec![m.into()],
                None => vec![Mode::T, Mode::Tprime],
            };
            let lines = coherence_sweep(*max_atoms, &modes, *pairs, g.seed);
            let failed = lines.iter().filter(|l| !l.passed()).count();
            let report: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
            let detail = format!("{} checks, {failed} failed\n{}", lines.len(), report.join("\n"));
            if failed == 0 {
                Outcome::new(EXIT_OK, "pass", detail)
            } else {
                Outcome::new(EXIT_NO, "fail", detail)
            }
        }
    })
}

fn parse_path(text: &str) -> Option<NodePath> {
    if text == "root" || text.is_empty() {
        return Some(NodePath::root());
    }
    text.split('.').map(|s| s.parse().ok()).collect::<Option<Vec<usize>>>().map(NodePath)
}
