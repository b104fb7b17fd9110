//! `catgram`: command-line front end to the Lambek prover and the semantic
//! pipeline.

use std::fs;
use std::io::{self, BufRead};
use std::process::ExitCode;

use catgram_core::bundled;
use catgram_core::category::{group_check, parse_category, Category};
use catgram_core::montague::{
    analyze_goal, audit_lexicon, load_lexicon, parse_sentence, AnalyzeError, EntryStatus, Lexicon,
};
use catgram_core::prover::{parse_sequent, prove, render, Derivation, OutputFormat, SearchConfig};
use catgram_core::system_f::{copredicate, fictive_motion, load_flexicon, FLexicon};
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Prove a sequent such as `a/b, b/c => a/c`.
    Prove,
    /// Derive the goal category from the words of a sentence.
    Parse,
    /// Compute the readings of a sentence.
    Semantics,
    /// Type-check every entry of the lexicon.
    CheckLexicon,
    /// Run the fictive-motion derivation, or a copredication `OBJECT P Q`.
    Fictive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Latex => OutputFormat::Latex,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "catgram", version, about = "Lambek-calculus parsing with compositional semantics")]
struct Cli {
    /// Lexicon file, or `builtin:NAME` for a bundled one (italian, sosta, fictive).
    #[arg(long, value_name = "PATH")]
    lexicon: Option<String>,

    #[arg(long, value_enum, default_value_t = Mode::Prove)]
    mode: Mode,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    output: Format,

    /// Derivations kept per subgoal during search.
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    max_derivations: u64,

    /// Largest category, in connectives, accepted as input.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
    max_category_size: u64,

    /// Allow derivations with empty antecedents.
    #[arg(long)]
    allow_empty: bool,

    /// Print every result rather than only the first.
    #[arg(long)]
    all: bool,

    /// Goal category for parse and semantics.
    #[arg(long, default_value = "S")]
    goal: String,

    /// Sequent or sentence. Without it, one input per line is read from
    /// standard input.
    input: Option<String>,
}

/// Outcome class of one command; the exit status depends on nothing else.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Success = 0,
    Negative = 1,
    InputError = 2,
}

struct Failure(Outcome, String);

type Run = Result<Outcome, Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(Outcome::InputError, msg.into())
}

struct Context {
    cli: Cli,
    cfg: SearchConfig,
    goal: Category,
}

impl Context {
    fn lexicon_text(&self) -> Result<String, Failure> {
        let Some(spec) = &self.cli.lexicon else {
            return Err(input_error("this mode needs --lexicon"));
        };
        read_lexicon(spec)
    }

    fn limit<T>(&self, items: Vec<T>) -> Vec<T> {
        if self.cli.all {
            items
        } else {
            items.into_iter().take(1).collect()
        }
    }

    fn render(&self, d: &Derivation, format: Format) -> Result<String, Failure> {
        render(d, format.into(), &self.cfg).map_err(|e| input_error(e.to_string()))
    }

    fn emit_derivations(&self, ds: &[Derivation]) -> Result<(), Failure> {
        match self.cli.output {
            Format::Json => println!("{}", serde_json::to_string_pretty(ds).expect("derivations serialize")),
            format => {
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    println!("{}", self.render(d, format)?);
                }
            }
        }
        Ok(())
    }
}

fn read_lexicon(spec: &str) -> Result<String, Failure> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return bundled::get(name)
            .map(str::to_string)
            .ok_or_else(|| input_error(format!("no bundled lexicon named `{name}`")));
    }
    fs::read_to_string(spec).map_err(|e| input_error(format!("cannot read {spec}: {e}")))
}

fn prove_cmd(ctx: &Context, input: &str) -> Run {
    let sequent = parse_sequent(input).map_err(|e| input_error(e.to_string()))?;
    let ds = prove(&sequent, &ctx.cfg).map_err(|e| input_error(e.to_string()))?;
    if ds.is_empty() {
        let verdict = if group_check(&sequent.antecedent, &sequent.goal) {
            "free-group check passed"
        } else {
            "free-group check failed"
        };
        let empty = if sequent.antecedent.is_empty() && !ctx.cfg.allow_empty_antecedent {
            " (empty antecedents need --allow-empty)"
        } else {
            ""
        };
        eprintln!("not derivable: {sequent}; {verdict}{empty}");
        return Ok(Outcome::Negative);
    }
    ctx.emit_derivations(&ctx.limit(ds))?;
    Ok(Outcome::Success)
}

fn words(input: &str) -> Vec<&str> {
    input.split_whitespace().collect()
}

fn analyze_failure(e: AnalyzeError) -> Failure {
    match e {
        AnalyzeError::UnknownWord(_) | AnalyzeError::MissingSemantics(_) | AnalyzeError::Prove(_) => {
            input_error(e.to_string())
        }
        other => Failure(Outcome::InputError, format!("lexicon error: {other}")),
    }
}

fn load(ctx: &Context) -> Result<Lexicon, Failure> {
    load_lexicon(&ctx.lexicon_text()?).map_err(|e| input_error(e.to_string()))
}

fn parse_cmd(ctx: &Context, lexicon: &Lexicon, input: &str) -> Run {
    let parses = parse_sentence(&words(input), &ctx.goal, lexicon, &ctx.cfg).map_err(analyze_failure)?;
    if parses.is_empty() {
        eprintln!("no parse of `{input}` as {}", ctx.goal);
        return Ok(Outcome::Negative);
    }
    let ds: Vec<Derivation> = ctx.limit(parses).into_iter().map(|p| p.derivation).collect();
    ctx.emit_derivations(&ds)?;
    Ok(Outcome::Success)
}

fn semantics_cmd(ctx: &Context, lexicon: &Lexicon, input: &str) -> Run {
    let readings = analyze_goal(&words(input), &ctx.goal, lexicon, &ctx.cfg).map_err(analyze_failure)?;
    if readings.is_empty() {
        eprintln!("no reading of `{input}` as {}", ctx.goal);
        return Ok(Outcome::Negative);
    }
    let readings = ctx.limit(readings);
    match ctx.cli.output {
        Format::Json => {
            let out: Vec<Value> = readings
                .iter()
                .map(|r| json!({ "derivation": r.derivation, "term": r.normal.to_string(), "formula": r.formula }))
                .collect();
            println!("{}", serde_json::to_string_pretty(&out).expect("readings serialize"));
        }
        Format::Text => {
            for r in &readings {
                match &r.formula {
                    Some(f) => println!("{f}"),
                    None => println!("{}", r.normal),
                }
            }
        }
        Format::Latex => {
            for r in &readings {
                println!("{}", ctx.render(&r.derivation, Format::Latex)?);
                match &r.formula {
                    Some(f) => println!("% {f}"),
                    None => println!("% {}", r.normal),
                }
            }
        }
    }
    Ok(Outcome::Success)
}

fn check_lexicon_cmd(ctx: &Context) -> Run {
    let text = ctx.lexicon_text()?;
    let audit = audit_lexicon(&text);
    let flex = if text.lines().any(|l| {
        let l = l.trim_start();
        ["sort ", "fconst ", "fword ", "coerce "].iter().any(|k| l.starts_with(k))
    }) {
        Some(load_flexicon(&text))
    } else {
        None
    };
    let flex_error = flex.as_ref().and_then(|r| r.as_ref().err());
    let ok = audit.is_ok() && flex_error.is_none();

    if ctx.cli.output == Format::Json {
        let entries: Vec<Value> = audit
            .entries
            .iter()
            .map(|e| {
                let (status, reason) = match &e.status {
                    EntryStatus::Ok => ("ok", None),
                    EntryStatus::SyntaxOnly => ("syntax-only", None),
                    EntryStatus::Fail(r) => ("fail", Some(r.clone())),
                };
                json!({
                    "line": e.line,
                    "word": e.word,
                    "category": e.category,
                    "expected": e.expected.as_ref().map(ToString::to_string),
                    "found": e.found.as_ref().map(ToString::to_string),
                    "status": status,
                    "reason": reason,
                })
            })
            .collect();
        let mut problems: Vec<String> = audit.problems.iter().map(ToString::to_string).collect();
        problems.extend(flex_error.map(ToString::to_string));
        let out = json!({ "ok": ok, "entries": entries, "problems": problems, "warnings": audit.warnings });
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    } else {
        for e in &audit.entries {
            let ty = |t: &Option<_>| {
                t.as_ref().map_or_else(|| "?".to_string(), |t: &catgram_core::lambda::SemType| t.to_string())
            };
            match &e.status {
                EntryStatus::Ok => println!("OK   line {}: {} :: {} : {}", e.line, e.word, e.category, ty(&e.expected)),
                EntryStatus::SyntaxOnly => {
                    println!("OK   line {}: {} :: {} (no semantics)", e.line, e.word, e.category)
                }
                EntryStatus::Fail(reason) => println!(
                    "FAIL line {}: {} :: {}: expected {}, found {} ({reason})",
                    e.line,
                    e.word,
                    e.category,
                    ty(&e.expected),
                    ty(&e.found)
                ),
            }
        }
        for p in &audit.problems {
            println!("FAIL {p}");
        }
        if let Some(e) = flex_error {
            println!("FAIL {e}");
        }
        if let Some(Ok(flex)) = &flex {
            println!("OK   {} System F words, {} coercions", flex.words().count(), flex.coercions.len());
        }
        let failed = audit.entries.iter().filter(|e| matches!(e.status, EntryStatus::Fail(_))).count()
            + audit.problems.len()
            + usize::from(flex_error.is_some());
        println!("{}: {} entries, {failed} failed", if ok { "OK" } else { "FAIL" }, audit.entries.len());
    }
    // a lexicon of System F words alone is not empty
    let has_f_words = matches!(&flex, Some(Ok(f)) if f.words().next().is_some());
    if !has_f_words {
        for w in &audit.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(if ok { Outcome::Success } else { Outcome::Negative })
}

fn fictive_cmd(ctx: &Context, lexicon: &FLexicon, input: Option<&str>) -> Run {
    if let Some(input) = input.filter(|s| !s.trim().is_empty()) {
        let ws = words(input);
        let [x, p, q] = ws.as_slice() else {
            return Err(input_error("copredication takes three words: OBJECT PREDICATE PREDICATE"));
        };
        let formulas = copredicate(x, p, q, lexicon).map_err(|e| input_error(e.to_string()))?;
        match ctx.cli.output {
            Format::Json => println!("{}", serde_json::to_string_pretty(&formulas).expect("formulas serialize")),
            _ => formulas.iter().for_each(|f| println!("{f}")),
        }
        return Ok(Outcome::Success);
    }
    let tr = fictive_motion(lexicon).map_err(|e| input_error(e.to_string()))?;
    let stages = [
        ("le chemin", tr.applied.to_string()),
        ("type beta", tr.after_type_beta.to_string()),
        ("normal", tr.le_chemin.to_string()),
        ("raised", tr.raised.to_string()),
        ("h (le chemin)", tr.h_applied.to_string()),
        ("normal", tr.h_normal.to_string()),
        ("(h (le chemin)) monte", tr.composed.to_string()),
        ("normal", tr.result.to_string()),
    ];
    match ctx.cli.output {
        Format::Json => {
            let stages: Vec<Value> = stages.iter().map(|(k, v)| json!({ "stage": k, "term": v })).collect();
            let out = json!({
                "stages": stages,
                "type": tr.composed_type.to_string(),
                "formula": tr.formula,
                "log": tr.log,
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("trace serializes"));
        }
        _ => {
            for (k, v) in &stages {
                println!("{k:>22}: {v}");
            }
            for l in &tr.log {
                println!("{:>22}: {l}", "log");
            }
            println!("{:>22}: {}", "formula", tr.formula);
        }
    }
    Ok(Outcome::Success)
}

fn run_one(ctx: &Context, lexicon: Option<&Lexicon>, flex: Option<&FLexicon>, input: &str) -> Run {
    match ctx.cli.mode {
        Mode::Prove => prove_cmd(ctx, input),
        Mode::Parse => parse_cmd(ctx, lexicon.expect("loaded"), input),
        Mode::Semantics => semantics_cmd(ctx, lexicon.expect("loaded"), input),
        Mode::Fictive => fictive_cmd(ctx, flex.expect("loaded"), Some(input)),
        Mode::CheckLexicon => check_lexicon_cmd(ctx),
    }
}

fn report(r: Run) -> Outcome {
    match r {
        Ok(o) => o,
        Err(Failure(o, msg)) => {
            eprintln!("error: {msg}");
            o
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = SearchConfig {
        max_category_size: cli.max_category_size as usize,
        max_derivations: cli.max_derivations as usize,
        allow_empty_antecedent: cli.allow_empty,
    };
    let goal = match parse_category(&cli.goal) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: --goal: {e}");
            return ExitCode::from(Outcome::InputError as u8);
        }
    };
    let ctx = Context { cli, cfg, goal };

    let setup = || -> Result<(Option<Lexicon>, Option<FLexicon>), Failure> {
        Ok(match ctx.cli.mode {
            Mode::Parse | Mode::Semantics => (Some(load(&ctx)?), None),
            Mode::Fictive => {
                let text = match &ctx.cli.lexicon {
                    Some(spec) => read_lexicon(spec)?,
                    None => bundled::FICTIVE.to_string(),
                };
                (None, Some(load_flexicon(&text).map_err(|e| input_error(e.to_string()))?))
            }
            Mode::Prove | Mode::CheckLexicon => (None, None),
        })
    };
    let (lexicon, flex) = match setup() {
        Ok(l) => l,
        Err(f) => return ExitCode::from(report(Err(f)) as u8),
    };

    let outcome = match (ctx.cli.mode, &ctx.cli.input) {
        (Mode::CheckLexicon, _) => report(check_lexicon_cmd(&ctx)),
        (Mode::Fictive, None) => report(fictive_cmd(&ctx, flex.as_ref().expect("loaded"), None)),
        (_, Some(input)) => report(run_one(&ctx, lexicon.as_ref(), flex.as_ref(), input)),
        (_, None) => {
            // batch mode: the worst outcome wins
            let mut worst = Outcome::Success;
            for line in io::stdin().lock().lines() {
                let line = match line {
                    Ok(l) => l,
                    Err(e) => {
                        eprintln!("error: reading standard input: {e}");
                        worst = Outcome::InputError;
                        break;
                    }
                };
                if line.trim().is_empty() {
                    continue;
                }
                worst = worst.max(report(run_one(&ctx, lexicon.as_ref(), flex.as_ref(), &line)));
            }
            worst
        }
    };
    ExitCode::from(outcome as u8)
}
