//! `am4rre` command-line front end.
//!
//! Every subcommand runs the same analysis pipeline and differs only in
//! what it prints. Exit codes: 0 when no diagnostic is an error, 1 when some
//! is, 2 for usage errors and unreadable files.

use std::fmt::Write as _;
use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use am4rre_core::{analyze, parse, serialize, Analysis, Diagnostic, Options, Report, Severity};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "am4rre", version, about = "Check and analyse .amr regulatory requirements specifications")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse only and report syntax errors.
    Parse(Common),
    /// Parse, resolve and validate; print diagnostics.
    Check(Common),
    /// Print which acts apply, with the matching evidence and priority order.
    Applicability(Common),
    /// Print derived duties, mapping suggestions and demand coverage.
    Trace(Common),
    /// Print the state of milestones M1 to M4 with blocking reasons.
    Milestones(Common),
    /// Write the full JSON report.
    Report {
        #[command(flatten)]
        common: Common,
        /// Output path for the report, or `-` for standard output.
        #[arg(long, value_name = "PATH")]
        json: PathBuf,
    },
    /// Print a file in canonical layout.
    Fmt {
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(required = true, value_name = "FILE")]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Do not derive duties along delegation chains.
    #[arg(long)]
    no_derived: bool,
    /// Treat warnings as errors.
    #[arg(long)]
    strict: bool,
    /// Add a `generated_at` field to JSON output.
    #[arg(long)]
    timestamps: bool,
}

/// Whether to emit ANSI colour, from `AM4RRE_COLOR=always|never|auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorChoice {
    Always,
    Never,
    Auto,
}

impl ColorChoice {
    /// Unset or unrecognised values mean `Auto`.
    pub fn from_env_value(value: Option<&str>) -> Self {
        match value.map(str::trim) {
            Some("always") => ColorChoice::Always,
            Some("never") => ColorChoice::Never,
            _ => ColorChoice::Auto,
        }
    }

    fn enabled(self, is_terminal: bool) -> bool {
        match self {
            ColorChoice::Always => true,
            ColorChoice::Never => false,
            ColorChoice::Auto => is_terminal,
        }
    }
}

/// Process-level settings that do not come from the argument list.
#[derive(Debug, Clone, Copy)]
pub struct Environment {
    pub color: bool,
    /// Seconds since the Unix epoch, used by `--timestamps`.
    pub now: u64,
}

impl Environment {
    pub fn detect() -> Self {
        let choice = ColorChoice::from_env_value(std::env::var("AM4RRE_COLOR").ok().as_deref());
        Environment {
            color: choice.enabled(std::io::stdout().is_terminal()),
            now: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }
}

pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock(), Environment::detect())
}

struct Usage(String);

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, env: Environment) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = if env.color { e.render().ansi().to_string() } else { e.render().to_string() };
            let (out, code): (&mut dyn Write, i32) = if e.use_stderr() { (stderr, 2) } else { (stdout, 0) };
            let _ = out.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli, stdout, stderr, env) {
        Ok(code) => code,
        Err(Usage(message)) => {
            let _ = writeln!(stderr, "am4rre: {message}");
            2
        }
    }
}

fn read_all(files: &[PathBuf]) -> Result<Vec<(String, String)>, Usage> {
    let mut out = Vec::with_capacity(files.len());
    let mut failures = Vec::new();
    for path in files {
        match std::fs::read_to_string(path) {
            Ok(text) => out.push((path.display().to_string(), text)),
            Err(e) => failures.push(format!("cannot read {}: {e}", path.display())),
        }
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(Usage(failures.join("\n")))
    }
}

/// Analyses files on scoped threads; results keep argument order.
fn analyze_all(sources: &[(String, String)], options: &Options) -> Vec<Analysis> {
    if sources.len() <= 1 {
        return sources.iter().map(|(name, text)| analyze(name, text, options)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = sources
            .iter()
            .map(|(name, text)| scope.spawn(move || analyze(name, text, options)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread panicked")).collect()
    })
}

fn promote_warnings(diagnostics: &mut [Diagnostic]) {
    for d in diagnostics {
        if d.severity == Severity::Warning {
            d.severity = Severity::Error;
        }
    }
}

fn exit_code<'a>(diagnostics: impl IntoIterator<Item = &'a Diagnostic>) -> i32 {
    i32::from(diagnostics.into_iter().any(Diagnostic::is_error))
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write, env: Environment) -> Result<i32, Usage> {
    let (view, common, json_path) = match cli.command {
        Command::Fmt { file } => return fmt(&file, stdout, stderr, env),
        Command::Parse(common) => return parse_only(common, stdout, stderr, env),
        Command::Check(c) => (View::Check, c, None),
        Command::Applicability(c) => (View::Applicability, c, None),
        Command::Trace(c) => (View::Trace, c, None),
        Command::Milestones(c) => (View::Milestones, c, None),
        Command::Report { common, json } => (View::Check, common, Some(json)),
    };
    if common.timestamps && common.format != Format::Json && json_path.is_none() {
        return Err(Usage("--timestamps only applies to JSON output".to_owned()));
    }

    let sources = read_all(&common.files)?;
    let options = Options {
        derive_delegations: !common.no_derived,
    };
    let mut analyses = analyze_all(&sources, &options);
    if common.strict {
        for a in &mut analyses {
            promote_warnings(&mut a.diagnostics);
        }
    }
    let code = exit_code(analyses.iter().flat_map(|a| &a.diagnostics));
    let timestamp = common.timestamps.then_some(env.now);

    if let Some(path) = json_path {
        let mut report = Report::new(&analyses);
        if let Some(t) = timestamp {
            report = report.with_timestamp(t);
        }
        let text = report.to_json();
        if path.as_os_str() == "-" {
            write_out(stdout, &text);
            return Ok(code);
        }
        std::fs::write(&path, text).map_err(|e| Usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let painter = Painter { color: env.color };
    match common.format {
        Format::Json => write_out(stdout, &json_view(view, &analyses, timestamp)),
        Format::Human => {
            let text = match view {
                View::Check => human_check(&analyses, &painter),
                View::Applicability => human_applicability(&analyses),
                View::Trace => human_trace(&analyses),
                View::Milestones => human_milestones(&analyses),
            };
            if view != View::Check {
                write_out(stderr, &human_check(&analyses, &painter));
            }
            write_out(stdout, &text);
            write_out(stderr, &summary(&analyses));
        }
    }
    Ok(code)
}

fn write_out(out: &mut dyn Write, text: &str) {
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn parse_only(common: Common, stdout: &mut dyn Write, stderr: &mut dyn Write, env: Environment) -> Result<i32, Usage> {
    if common.timestamps && common.format != Format::Json {
        return Err(Usage("--timestamps only applies to JSON output".to_owned()));
    }
    let sources = read_all(&common.files)?;
    let mut results: Vec<(String, Vec<Diagnostic>)> = sources
        .iter()
        .map(|(name, text)| (name.clone(), parse(name, text).diagnostics))
        .collect();
    if common.strict {
        for (_, diags) in &mut results {
            promote_warnings(diags);
        }
    }
    let code = exit_code(results.iter().flat_map(|(_, d)| d));
    match common.format {
        Format::Json => {
            let files: Vec<Value> = results
                .iter()
                .map(|(source, diagnostics)| json!({ "source": source, "diagnostics": diagnostics }))
                .collect();
            write_out(stdout, &to_pretty(wrap(files, common.timestamps.then_some(env.now))));
        }
        Format::Human => {
            let painter = Painter { color: env.color };
            let mut out = String::new();
            for (_, diags) in &results {
                for d in diags {
                    out.push_str(&painter.diagnostic(d));
                }
            }
            write_out(stdout, &out);
            let errors = results.iter().flat_map(|(_, d)| d).filter(|d| d.is_error()).count();
            write_out(stderr, &format!("{} file(s) parsed, {errors} error(s)\n", results.len()));
        }
    }
    Ok(code)
}

fn fmt(file: &PathBuf, stdout: &mut dyn Write, stderr: &mut dyn Write, env: Environment) -> Result<i32, Usage> {
    let sources = read_all(std::slice::from_ref(file))?;
    let (name, text) = &sources[0];
    let parsed = parse(name, text);
    if parsed.diagnostics.iter().any(Diagnostic::is_error) {
        let painter = Painter { color: env.color };
        for d in &parsed.diagnostics {
            write_out(stderr, &painter.diagnostic(d));
        }
        return Ok(1);
    }
    write_out(stdout, &serialize(&parsed.model));
    Ok(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum View {
    Check,
    Applicability,
    Trace,
    Milestones,
}

struct Painter {
    color: bool,
}

impl Painter {
    fn severity(&self, severity: Severity) -> String {
        let text = severity.to_string();
        if !self.color {
            return text;
        }
        let code = match severity {
            Severity::Error => "1;31",
            Severity::Warning => "1;33",
            Severity::Info => "1;36",
        };
        format!("\x1b[{code}m{text}\x1b[0m")
    }

    /// `file:line:col: severity[code]: message`, then one line per related span.
    fn diagnostic(&self, d: &Diagnostic) -> String {
        let mut out = format!("{}: {}[{}]: {}\n", d.span, self.severity(d.severity), d.code, d.message);
        for related in &d.related_spans {
            let _ = writeln!(out, "{related}: note: related location");
        }
        out
    }
}

fn human_check(analyses: &[Analysis], painter: &Painter) -> String {
    analyses
        .iter()
        .flat_map(|a| &a.diagnostics)
        .map(|d| painter.diagnostic(d))
        .collect()
}

fn summary(analyses: &[Analysis]) -> String {
    let errors = analyses.iter().flat_map(|a| &a.diagnostics).filter(|d| d.is_error()).count();
    let warnings = analyses
        .iter()
        .flat_map(|a| &a.diagnostics)
        .filter(|d| d.severity == Severity::Warning)
        .count();
    format!("{} file(s) checked: {errors} error(s), {warnings} warning(s)\n", analyses.len())
}

fn not_available(out: &mut String, a: &Analysis, what: &str) {
    let _ = writeln!(out, "  {what} unavailable: fix the errors reported for {} first", a.source_name);
}

fn human_applicability(analyses: &[Analysis]) -> String {
    let mut out = String::new();
    for a in analyses {
        let _ = writeln!(out, "{}", a.source_name);
        let Some(result) = &a.applicability else {
            not_available(&mut out, a, "applicability");
            continue;
        };
        if result.acts.is_empty() {
            let _ = writeln!(out, "  no regulatory acts declared");
        }
        for v in &result.acts {
            let kind = v.kind.map_or_else(|| "no kind".to_owned(), |k| k.keyword().to_owned());
            let verdict = if v.applicable { "applicable" } else { "not applicable" };
            let _ = writeln!(out, "  {} ({kind}): {verdict}", v.act);
            for e in &v.jurisdiction_evidence {
                let _ = writeln!(out, "    jurisdiction {} matches {} of {}", e.criterion, e.tag, e.instance);
            }
            for e in &v.field_evidence {
                let _ = writeln!(out, "    field of law {} matches {} of {}", e.criterion, e.tag, e.instance);
            }
        }
        let priority = if result.priority.is_empty() {
            "(none)".to_owned()
        } else {
            result.priority.join(" > ")
        };
        let _ = writeln!(out, "  priority: {priority}");
    }
    out
}

fn human_trace(analyses: &[Analysis]) -> String {
    let mut out = String::new();
    for a in analyses {
        let _ = writeln!(out, "{}", a.source_name);
        let Some(trace) = &a.trace else {
            not_available(&mut out, a, "trace");
            continue;
        };
        for duty in &trace.derived_relationships {
            let r = &duty.relationship;
            let _ = writeln!(
                out,
                "  derived: {} {} {} (from {}, {} hop(s))",
                r.source, r.kind, r.target, duty.delegator, duty.depth
            );
        }
        for s in &trace.mapping_suggestions {
            let _ = writeln!(out, "  suggestion: {} maps_to {}", s.subject, s.stakeholder);
        }
        if !trace.unmapped_subjects.is_empty() {
            let _ = writeln!(out, "  unmapped subjects: {}", trace.unmapped_subjects.join(", "));
        }
        let _ = writeln!(out, "  demand coverage: {:.2}", trace.demand_coverage);
        if !trace.uncovered_demands.is_empty() {
            let _ = writeln!(out, "  uncovered demands: {}", trace.uncovered_demands.join(", "));
        }
    }
    out
}

fn human_milestones(analyses: &[Analysis]) -> String {
    let mut out = String::new();
    for a in analyses {
        let _ = writeln!(out, "{}", a.source_name);
        let Some(status) = &a.milestones else {
            not_available(&mut out, a, "milestones");
            continue;
        };
        for m in &status.milestones {
            let _ = writeln!(out, "  {} {}: {}", m.milestone, m.milestone.description(), m.state);
            for reason in &m.blocking_reasons {
                match &reason.span {
                    Some(span) => {
                        let _ = writeln!(out, "    - {} ({span})", reason.message);
                    }
                    None => {
                        let _ = writeln!(out, "    - {}", reason.message);
                    }
                }
            }
        }
    }
    out
}

fn wrap(files: Vec<Value>, timestamp: Option<u64>) -> Value {
    let mut doc = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "files": files,
    });
    if let Some(t) = timestamp {
        doc["generated_at"] = json!(t);
    }
    doc
}

fn to_pretty(value: Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("JSON value serializes");
    text.push('\n');
    text
}

/// The per-file sections of the report relevant to one subcommand.
fn json_view(view: View, analyses: &[Analysis], timestamp: Option<u64>) -> String {
    let report = serde_json::to_value(Report::new(analyses)).expect("report serializes");
    let keys: &[&str] = match view {
        View::Check => &["source", "diagnostics"],
        View::Applicability => &["source", "diagnostics", "applicability"],
        View::Trace => &["source", "diagnostics", "trace"],
        View::Milestones => &["source", "diagnostics", "milestones"],
    };
    let files = report["files"]
        .as_array()
        .expect("files array")
        .iter()
        .map(|file| {
            let mut picked = serde_json::Map::new();
            for key in keys {
                picked.insert((*key).to_owned(), file[*key].clone());
            }
            Value::Object(picked)
        })
        .collect();
    to_pretty(wrap(files, timestamp))
}
