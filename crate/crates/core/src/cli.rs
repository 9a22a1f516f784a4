//! The `taut-rope` command line.
//!
//! Exit statuses: 0 success, 1 file or parse error, 2 usage error,
//! 3 condition violation (or oracle mismatch for `compare`).

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::engine::{RopeState, StepError, StepEvent};
use crate::geom::Point;
use crate::oracle::{paths_equal, TautBand};
use crate::scene_io::{parse_scene, render_svg, RenderOptions, SceneDocument};
use crate::session::{serve_lines, serve_websocket, SessionStore};
use crate::trace::{refine_trace, validate_trace, ValidationMode, Verdict, DEFAULT_MAX_DEPTH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Tolerance for engine/oracle agreement in `compare`.
pub const COMPARE_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "taut-rope", version, about = "Taut rope wrapping around line-segment obstacles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a trace against the free-space and single-crossing conditions.
    Validate {
        file: PathBuf,
        /// Also require at most one crossing over every endpoint's rays.
        #[arg(long)]
        strict: bool,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Replay a trace and print one record per step.
    Run {
        file: PathBuf,
        /// Split moves so each step triggers at most one event.
        #[arg(long)]
        refine: bool,
        /// One JSON object per line.
        #[arg(long)]
        jsonl: bool,
    },
    /// Render the rope after a given step as SVG.
    Render {
        file: PathBuf,
        /// Number of steps to apply first; defaults to the whole trace.
        #[arg(long)]
        step: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        #[arg(long)]
        refine: bool,
        #[arg(long)]
        no_gd: bool,
        #[arg(long)]
        no_unwrap_ray: bool,
    },
    /// Replay a trace and check every step against the rubber-band oracle.
    Compare {
        file: PathBuf,
        #[arg(long)]
        refine: bool,
    },
    /// Serve the session protocol over WebSocket, or over stdin/stdout.
    Serve {
        #[arg(long, conflicts_with = "stdio")]
        port: Option<u16>,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Newline-delimited JSON on standard input and output.
        #[arg(long)]
        stdio: bool,
    },
}

/// One replayed step.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub step: usize,
    pub a: Point,
    pub event: EventRecord,
    pub rope: Vec<Point>,
    pub predicate_calls: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EventRecord {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<&'static str>,
}

impl EventRecord {
    fn from_event(e: StepEvent) -> Self {
        EventRecord { kind: e.kind(), point: e.point(), error: None }
    }

    fn from_error(e: StepError) -> Self {
        EventRecord { kind: "error", point: None, error: Some(e.code()) }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure { code: EXIT_VIOLATION, message: message.into() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::input(e.to_string())
    }
}

/// Runs the command line `args` (including the program name), writing
/// normal output to `out` and diagnostics to `err`. Returns the exit status.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { file, strict, json } => validate(&load(&file)?, strict, json, out),
        Command::Run { file, refine, jsonl } => run(&load(&file)?, refine, jsonl, out),
        Command::Render { file, step, output, refine, no_gd, no_unwrap_ray } => {
            let options = RenderOptions { show_gd: !no_gd, show_unwrap_ray: !no_unwrap_ray, viewport: None };
            render(&load(&file)?, step, output.as_deref(), refine, &options, out)
        }
        Command::Compare { file, refine } => compare(&load(&file)?, refine, out),
        Command::Serve { port, host, stdio } => {
            let store = SessionStore::new();
            if stdio {
                let stdin = io::stdin();
                serve_lines(&store, stdin.lock(), io::stdout().lock())?;
                Ok(EXIT_OK)
            } else {
                let port =
                    port.ok_or_else(|| Failure { code: EXIT_USAGE, message: "serve needs --port or --stdio".into() })?;
                writeln!(out, "listening on ws://{host}:{port}")?;
                out.flush()?;
                serve_websocket(Arc::new(store), (host.as_str(), port))?;
                Ok(EXIT_OK)
            }
        }
    }
}

fn load(path: &Path) -> Result<SceneDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_scene(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn start(doc: &SceneDocument) -> Result<RopeState, Failure> {
    RopeState::new(doc.scene.clone(), doc.anchor, doc.trace[0]).map_err(|e| Failure::input(e.to_string()))
}

fn trace_for(doc: &SceneDocument, refine: bool) -> Result<Vec<Point>, Failure> {
    if refine {
        refine_trace(&doc.scene, doc.anchor, &doc.trace, DEFAULT_MAX_DEPTH)
            .map_err(|e| Failure::violation(e.to_string()))
    } else {
        Ok(doc.trace.clone())
    }
}

fn validate(doc: &SceneDocument, strict: bool, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let mode = if strict { ValidationMode::Strict } else { ValidationMode::Engine };
    let report = validate_trace(&doc.scene, doc.anchor, &doc.trace, mode).map_err(|e| Failure::input(e.to_string()))?;
    if json {
        writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes"))?;
    } else {
        writeln!(out, "step  visible  crossings  all-gds  followup  verdict")?;
        for s in &report.steps {
            let all = s.crossings_all_gds.map_or("-".to_string(), |n| n.to_string());
            let verdict = match s.verdict {
                Verdict::Pass => "pass".to_string(),
                Verdict::Skipped => "skipped".to_string(),
                Verdict::Fail => match s.error {
                    Some(e) => format!("FAIL ({})", e.code()),
                    None => "FAIL".to_string(),
                },
            };
            writeln!(
                out,
                "{:>4}  {:>7}  {:>9}  {:>7}  {:>8}  {}",
                s.index, s.small_update_ok, s.crossings_current_gd, all, s.followup_crossings, verdict
            )?;
        }
        writeln!(out, "{}", if report.passed() { "trace is valid" } else { "trace violates the conditions" })?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
}

/// Replays `trace`, returning the records and the first error (if any).
pub fn replay_records(doc: &SceneDocument, trace: &[Point]) -> Result<(Vec<RunRecord>, Option<StepError>), String> {
    let mut state = RopeState::new(doc.scene.clone(), doc.anchor, trace[0]).map_err(|e| e.to_string())?;
    let mut records = Vec::new();
    for (i, to) in trace.iter().enumerate().skip(1) {
        match state.step(*to) {
            Ok(step) => {
                state = step.state;
                records.push(RunRecord {
                    step: i,
                    a: state.a(),
                    event: EventRecord::from_event(step.event),
                    rope: state.polyline(),
                    predicate_calls: step.predicate_calls,
                });
            }
            Err(e) => {
                records.push(RunRecord {
                    step: i,
                    a: *to,
                    event: EventRecord::from_error(e),
                    rope: state.polyline(),
                    predicate_calls: 0,
                });
                return Ok((records, Some(e)));
            }
        }
    }
    Ok((records, None))
}

fn fmt_path(path: &[Point]) -> String {
    let parts: Vec<String> = path.iter().map(|p| format!("({}, {})", p.x, p.y)).collect();
    parts.join(" ")
}

fn run(doc: &SceneDocument, refine: bool, jsonl: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let trace = trace_for(doc, refine)?;
    let (records, failure) = replay_records(doc, &trace).map_err(Failure::input)?;
    if !jsonl {
        writeln!(out, "step  event                 calls  rope")?;
    }
    for r in &records {
        if jsonl {
            writeln!(out, "{}", serde_json::to_string(r).expect("record serializes"))?;
        } else {
            let event = match (r.event.point, r.event.error) {
                (Some(p), _) => format!("{} ({}, {})", r.event.kind, p.x, p.y),
                (None, Some(e)) => format!("error {e}"),
                (None, None) => r.event.kind.to_string(),
            };
            writeln!(out, "{:>4}  {:<20}  {:>5}  {}", r.step, event, r.predicate_calls, fmt_path(&r.rope))?;
        }
    }
    Ok(if failure.is_some() { EXIT_VIOLATION } else { EXIT_OK })
}

fn render(
    doc: &SceneDocument,
    step: Option<usize>,
    output: Option<&Path>,
    refine: bool,
    options: &RenderOptions,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let trace = trace_for(doc, refine)?;
    let k = step.unwrap_or(trace.len() - 1);
    if k >= trace.len() {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("step {k} is past the end of the trace ({} steps)", trace.len() - 1),
        });
    }
    let (state, _) = start(doc)?
        .replay(trace[1..=k].iter().copied())
        .map_err(|(i, e)| Failure::violation(format!("step {}: {e}", i + 1)))?;
    let svg = render_svg(&doc.scene, &state, options);
    match output {
        Some(path) => std::fs::write(path, svg).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => out.write_all(svg.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn compare(doc: &SceneDocument, refine: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let trace = trace_for(doc, refine)?;
    let mut state = start(doc)?;
    let mut band = TautBand::new(doc.anchor, trace[0]);
    let mut all_pass = true;
    for (i, to) in trace.iter().enumerate().skip(1) {
        let step = match state.step(*to) {
            Ok(step) => step,
            Err(e) => {
                writeln!(out, "step {i}: FAIL (engine: {})", e.code())?;
                return Ok(EXIT_VIOLATION);
            }
        };
        state = step.state;
        band.push(&doc.scene, *to).map_err(|e| Failure::violation(e.to_string()))?;
        let oracle = band.path();
        let engine = state.polyline();
        if paths_equal(&engine, &oracle, COMPARE_TOL) {
            writeln!(out, "step {i}: PASS")?;
        } else {
            all_pass = false;
            writeln!(out, "step {i}: FAIL engine {} oracle {}", fmt_path(&engine), fmt_path(&oracle))?;
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_VIOLATION })
}
