//! `madic`: command-line access to the section calculus, the verification suites and the
//! generator-isolation engine.
//!
//! Exit status: 0 success, 1 failed verification, 2 usage or input error, 3 cap or budget
//! exhausted.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use madic::engine::{isolate_generators, make_prodense_seeds, replay, EngineBudget, Transcript};
use madic::geodesics::{enumerate_ball_with, verify_length_lemmas_on, LemmaReport, LengthLemmaOptions};
use madic::noise::NoiseGen;
use madic::projections::{normalize_to_permuted_product, rightmost_projection, Budget};
use madic::suites;
use madic::{Error, GroupParams, Limits, Vertex, Word, WordRecord};

#[derive(Parser, Debug)]
#[command(name = "madic", version, about = "Section calculus for generalised Basilica groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Maximum number of Cayley-ball elements.
    #[arg(long, global = true, env = "MADIC_BALL_CAP")]
    ball_cap: Option<usize>,

    /// Maximum number of vertices tabulated per level permutation or portrait.
    #[arg(long, global = true, env = "MADIC_LEVEL_CAP")]
    level_cap: Option<usize>,

    /// Maximum number of equality tests in a normalization search.
    #[arg(long, global = true, env = "MADIC_BUDGET_STEPS")]
    budget_steps: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args, Debug)]
struct Group {
    /// Tree arity.
    #[arg(long)]
    m: Option<usize>,
    /// Number of generators.
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Args, Debug)]
struct WordArg {
    /// A word as `[[index,exponent],...]`, a `{"m","s","word"}` record, text such as
    /// `a_1 a_0^-1`, or `@file` holding any of these.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Lengths,
    Congruence,
    Projection,
    Alignment,
    Transitivity,
    Recursions,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Section of a word at a vertex.
    Section {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        word: WordArg,
        /// Vertex as a digit string; empty for the root.
        #[arg(long, default_value = "")]
        vertex: String,
    },
    /// Section of `w^{m^j}` at the rightmost vertex of level `j`.
    Project {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        j: usize,
    },
    /// Geodesic length, searched up to radius `cap`.
    Wordlen {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Portrait of root-permutation exponents as a Graphviz graph.
    Portrait {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        group: Group,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Ball radius for `lengths`.
        #[arg(long, default_value_t = 4)]
        radius: usize,
        /// Deepest level for `congruence` (default s+1).
        #[arg(long)]
        j: Option<usize>,
        /// Deepest level for `transitivity`.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Check a single word with `congruence` instead of seeded inputs.
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        /// Seed for generated inputs.
        #[arg(long, default_value_t = 0)]
        seed_noise: u64,
    },
    /// Find a vertex where a power of the word has a permuted-product section.
    Normalize {
        #[command(flatten)]
        group: Group,
        #[command(flatten)]
        word: WordArg,
    },
    /// Isolate the generators starting from the standard seeds.
    Split {
        #[command(flatten)]
        group: Group,
        /// Seed for commutator noise on every seed word; omit for no noise.
        #[arg(long)]
        seed_noise: Option<u64>,
    },
    /// Re-verify a transcript written by `split --format structured`.
    Replay {
        /// Transcript file, or `-` for stdin.
        transcript: PathBuf,
    },
}

/// Exit status paired with a one-line diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceCap { .. } | Error::BudgetExhausted(_) | Error::NotFound(_) => 3,
            Error::Certification(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

struct Ctx {
    format: Format,
    out: Option<PathBuf>,
    limits: Limits,
    budget_steps: Option<usize>,
}

impl Ctx {
    fn emit(&self, text: &str, structured: &Value) -> CliResult<()> {
        let body = match self.format {
            Format::Text => text.to_string(),
            Format::Structured => structured.to_string(),
        };
        self.write(&body)
    }

    fn write(&self, body: &str) -> CliResult<()> {
        let mut body = body.to_string();
        if !body.ends_with('\n') {
            body.push('\n');
        }
        match &self.out {
            Some(path) => fs::write(path, body)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| usage(format!("cannot write output: {e}"))),
        }
    }

    fn budget(&self, params: GroupParams) -> Budget {
        let mut b = Budget::for_params(params);
        if let Some(n) = self.budget_steps {
            b.max_tests = n;
        }
        b
    }
}

fn read_source(arg: &str) -> CliResult<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

/// Parses a word argument; records carry their own parameters.
fn parse_word(arg: &str) -> CliResult<(Option<(usize, usize)>, Word)> {
    let text = read_source(arg)?;
    let text = text.trim();
    if text.starts_with('{') {
        let rec = WordRecord::from_json(text)?;
        Ok((Some((rec.m, rec.s)), rec.word))
    } else if text.starts_with('[') {
        let w: Word = serde_json::from_str(text).map_err(|e| usage(format!("malformed word: {e}")))?;
        Ok((None, w))
    } else {
        Ok((None, Word::parse_text(text)?))
    }
}

fn resolve(group: &Group, from_word: Option<(usize, usize)>) -> CliResult<GroupParams> {
    let (m, s) = match (group.m, group.s, from_word) {
        (Some(m), Some(s), Some((wm, ws))) if (m, s) != (wm, ws) => {
            return Err(usage(format!(
                "--m {m} --s {s} disagree with the word record (m={wm}, s={ws})"
            )))
        }
        (Some(m), Some(s), _) => (m, s),
        (None, None, Some(ms)) => ms,
        (Some(m), None, Some((wm, ws))) if m == wm => (m, ws),
        (None, Some(s), Some((wm, ws))) if s == ws => (wm, s),
        _ => return Err(usage("both --m and --s are required")),
    };
    Ok(GroupParams::new(m, s)?)
}

fn group_and_word(group: &Group, word: &str) -> CliResult<(GroupParams, Word)> {
    let (ms, w) = parse_word(word)?;
    let params = resolve(group, ms)?;
    params.check_word(&w)?;
    Ok((params, w))
}

fn word_output(ctx: &Ctx, params: GroupParams, w: Word) -> CliResult<()> {
    let text = w.to_string();
    ctx.emit(&text, &json!(WordRecord::new(params, w)))
}

fn report_text(r: &LemmaReport) -> String {
    let mut out = format!(
        "{}: {} instances, {} violations, {} unverified",
        r.lemma,
        r.instances_checked,
        r.violations.len(),
        r.unverified
    );
    for v in r.violations.iter().take(5) {
        out += &format!("\n  {}: {}", v.element, v.detail);
    }
    out
}

fn emit_reports(ctx: &Ctx, reports: &[LemmaReport]) -> CliResult<()> {
    let body = match ctx.format {
        Format::Text => reports.iter().map(report_text).collect::<Vec<_>>().join("\n"),
        Format::Structured => reports
            .iter()
            .map(|r| serde_json::to_string(r).expect("reports serialize"))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    ctx.write(&body)?;
    if reports.iter().all(LemmaReport::passed) {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "verification found violations".into(),
        })
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let defaults = Limits::default();
    let ctx = Ctx {
        format: cli.format,
        out: cli.out,
        limits: Limits {
            ball_cap: cli.ball_cap.unwrap_or(defaults.ball_cap),
            level_cap: cli.level_cap.unwrap_or(defaults.level_cap),
            portrait_cap: cli.level_cap.unwrap_or(defaults.portrait_cap),
            ..defaults
        },
        budget_steps: cli.budget_steps,
    };

    match cli.command {
        Command::Section {
            group,
            word,
            vertex,
        } => {
            let (params, w) = group_and_word(&group, &word.word)?;
            let u: Vertex = vertex.parse()?;
            let sec = params.section(&w, &u)?;
            word_output(&ctx, params, sec)
        }
        Command::Project { group, word, j } => {
            let (params, w) = group_and_word(&group, &word.word)?;
            let p = rightmost_projection(params, &w, j)?;
            word_output(&ctx, params, p)
        }
        Command::Wordlen { group, word, cap } => {
            let (params, w) = group_and_word(&group, &word.word)?;
            let ball = enumerate_ball_with(params, cap, &ctx.limits)?;
            match ball.length_of(&w) {
                Some(n) => ctx.emit(&n.to_string(), &json!({ "length": n, "cap": cap })),
                None => {
                    ctx.emit(&format!(">{cap}"), &json!({ "length": null, "cap": cap }))?;
                    Err(Failure {
                        code: 3,
                        message: format!("geodesic length exceeds cap {cap}"),
                    })
                }
            }
        }
        Command::Portrait { group, word, depth } => {
            let (params, w) = group_and_word(&group, &word.word)?;
            let p = params.portrait_capped(&w, depth, ctx.limits.portrait_cap)?;
            ctx.emit(&p.to_dot(), &json!(p))
        }
        Command::Verify {
            group,
            suite,
            radius,
            j,
            depth,
            word,
            seed_noise,
        } => {
            let params = resolve(&group, None)?;
            let reports = match suite {
                Suite::Lengths => {
                    let ball = enumerate_ball_with(params, radius, &ctx.limits)?;
                    verify_length_lemmas_on(&ball, LengthLemmaOptions::default())?
                }
                Suite::Congruence => {
                    let inputs = match word {
                        Some(arg) => {
                            let (ms, w) = parse_word(&arg)?;
                            if ms.is_some_and(|ms| ms != (params.m(), params.s())) {
                                return Err(usage("word record disagrees with --m/--s"));
                            }
                            params.check_word(&w)?;
                            vec![w]
                        }
                        None => suites::noisy_products(params, 200, seed_noise),
                    };
                    vec![suites::congruence_suite(params, &inputs, j.unwrap_or(params.s() + 1))?]
                }
                Suite::Projection => vec![suites::projection_suite(params)?],
                Suite::Alignment => vec![suites::alignment_suite(params)?],
                Suite::Transitivity => vec![suites::transitivity_suite(params, depth, &ctx.limits)?],
                Suite::Recursions => suites::recursion_suite(params)?,
            };
            emit_reports(&ctx, &reports)
        }
        Command::Normalize { group, word } => {
            let (params, w) = group_and_word(&group, &word.word)?;
            let wit = normalize_to_permuted_product(params, &w, ctx.budget(params))?;
            let text = format!(
                "vertex {:?} power m^{} product {} (pi {:?}, signs {:?}), certificate of length {}",
                wit.vertex.to_string(),
                wit.power_exponent,
                wit.result.word(),
                wit.result.pi,
                wit.result.signs,
                wit.certificate_word.len()
            );
            ctx.emit(&text, &json!(wit))
        }
        Command::Split { group, seed_noise } => {
            let params = resolve(&group, None)?;
            let s = params.s();
            let noise: Vec<Word> = match seed_noise {
                Some(seed) => {
                    let mut gen = NoiseGen::new(params, seed);
                    (0..=s).map(|_| gen.noise()).collect()
                }
                None => vec![Word::identity(); s + 1],
            };
            let seeds = make_prodense_seeds(params, &noise)?;
            let mut budget = EngineBudget::for_params(params);
            budget.normalization = ctx.budget(params);
            let t = isolate_generators(params, &seeds, budget)?;
            let body = match ctx.format {
                Format::Text => t.to_log(),
                Format::Structured => t.to_json(),
            };
            ctx.write(&body)?;
            if t.is_complete() {
                Ok(())
            } else {
                Err(Failure {
                    code: 3,
                    message: "generator isolation stopped before completion".into(),
                })
            }
        }
        Command::Replay { transcript } => {
            let text = if transcript.as_os_str() == "-" {
                let mut buf = String::new();
                io::stdin()
                    .read_to_string(&mut buf)
                    .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
                buf
            } else {
                fs::read_to_string(&transcript)
                    .map_err(|e| usage(format!("cannot read {}: {e}", transcript.display())))?
            };
            let t = Transcript::from_json(&text)?;
            let report = replay(&t)?;
            let text = if report.passed() {
                format!(
                    "replayed {} moves: all verified{}",
                    report.moves_checked,
                    if report.complete { ", generators isolated" } else { "" }
                )
            } else {
                format!(
                    "replayed {} moves: {} failure(s)\n{}",
                    report.moves_checked,
                    report.failures.len(),
                    report.failures.join("\n")
                )
            };
            ctx.emit(&text, &json!(report))?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure {
                    code: 1,
                    message: "transcript replay failed".into(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("madic: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
