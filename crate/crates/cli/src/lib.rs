//! The `delpezzo` command line tool.

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use delpezzo_core::oracle::{run_identity, run_twisted_as, DEFAULT_BUDGET};
use delpezzo_core::weyl::embed_permutation;
use delpezzo_core::{
    count_by_trace, evaluate_class_count, existence_exceptions, surface_point_count, CycleType,
    OddPrimePower, POSSIBLE_TRACES,
};
use serde::Serialize;
use thiserror::Error;

pub mod context;
pub mod render;
pub mod verify;

use context::{default_cache_dir, Context};
use render::{csv, json, text_table, Exact, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] delpezzo_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 1;
    pub const VERIFICATION_FAILED: i32 = 2;
}

#[derive(Debug, Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Count Del Pezzo surfaces of degree 2 over F_q by Frobenius class and Picard trace"
)]
pub struct Cli {
    /// Recompute the class report instead of reading the on-disk cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Directory for the cached class report.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Number of worker threads.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum By {
    Class,
    Trace,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 60 conjugacy classes of W(E7) with their invariants.
    Classes,
    /// Number of surfaces with a given Frobenius class or trace.
    #[command(group(ArgGroup::new("what").required(true).args(["class", "trace"])))]
    Count {
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        trace: Option<i64>,
        #[arg(long)]
        q: u64,
    },
    /// All class or trace counts at q.
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "class")]
        by: By,
    },
    /// Number of F_q-points, q^2 + a q + 1, of a surface in the given class.
    Points {
        #[arg(long, allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        q: u64,
    },
    /// Classes and traces that no surface over F_q realizes.
    Existence {
        #[arg(long)]
        q: u64,
    },
    /// Brute-force count of point configurations, compared with the table.
    #[command(group(ArgGroup::new("kind").required(true).args(["identity", "cycle_type"])))]
    Oracle {
        /// Trivial Frobenius action, frame-normalized.
        #[arg(long)]
        identity: bool,
        /// Cycle type of the permutation of the seven points, e.g. 6,1.
        #[arg(long)]
        cycle_type: Option<String>,
        #[arg(long)]
        q: u64,
        /// Largest number of candidate tuples to enumerate.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Consistency checks; exits with status 2 if any fails.
    Verify {
        #[arg(value_enum, default_value = "all")]
        target: verify::Target,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
}

/// Runs a parsed command, writing its output to `out`; returns the exit
/// code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    if let Some(n) = cli.jobs {
        // Fails only if a pool already exists, e.g. when run twice in one
        // process; the existing pool is then used.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cache_dir = if cli.no_cache {
        None
    } else {
        cli.cache_dir.clone().or_else(default_cache_dir)
    };
    let ctx = Context::new(cache_dir)?;
    let fmt = cli.format;
    match cli.command {
        Command::Classes => classes(&ctx, fmt, out),
        Command::Count { class, trace, q } => count(&ctx, class, trace, q, fmt, out),
        Command::Table { q, by } => table(&ctx, q, by, fmt, out),
        Command::Points { class, q } => points(&ctx, &class, q, fmt, out),
        Command::Existence { q } => existence(&ctx, q, fmt, out),
        Command::Oracle {
            identity,
            cycle_type,
            q,
            budget,
        } => oracle(&ctx, identity, cycle_type, q, budget, fmt, out),
        Command::Verify { target, budget } => verify_cmd(&ctx, target, budget, fmt, out),
    }
}

fn prime_power(q: u64) -> Result<OddPrimePower, CliError> {
    Ok(OddPrimePower::new(q)?)
}

fn classes(ctx: &Context, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = ctx.report()?;
    let headers = ["class", "order", "size", "sign", "trace_std", "trace_pic"];
    let rows: Vec<Vec<String>> = report
        .classes
        .iter()
        .map(|c| {
            vec![
                c.name.clone(),
                c.order.to_string(),
                c.size.to_string(),
                c.sign.to_string(),
                c.trace_std.to_string(),
                c.trace_pic.to_string(),
            ]
        })
        .collect();
    let text = match fmt {
        Format::Json => json(report)?,
        Format::Csv => csv(&headers, &rows),
        Format::Table => text_table(&headers, &rows, &[false, true, true, true, true, true]),
    };
    out.write_all(text.as_bytes())?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct CountOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<i64>,
    q: u64,
    count: Exact,
}

fn count(
    ctx: &Context,
    class: Option<String>,
    trace: Option<i64>,
    q: u64,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let pq = prime_power(q)?;
    let value = match (&class, trace) {
        (Some(c), _) => evaluate_class_count(&ctx.data, c, pq)?,
        (None, Some(a)) => count_by_trace(&ctx.data, a, pq)?,
        (None, None) => return Err(CliError::Usage("one of --class or --trace is required".into())),
    };
    let row = CountOut {
        class,
        trace,
        q,
        count: Exact::from(&value),
    };
    let text = match fmt {
        Format::Json => json(&row)?,
        Format::Csv => {
            let (key, label) = match (&row.class, row.trace) {
                (Some(c), _) => ("class", c.clone()),
                (None, a) => ("trace", a.unwrap_or_default().to_string()),
            };
            csv(&[key, "q", "count"], &[vec![label, q.to_string(), value.to_string()]])
        }
        Format::Table => format!("{value}\n"),
    };
    out.write_all(text.as_bytes())?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct ClassRow {
    class: String,
    polynomial: String,
    count: Exact,
}

#[derive(Serialize)]
struct TraceRow {
    trace: i64,
    polynomial: String,
    count: Exact,
}

#[derive(Serialize)]
struct TableOut<R> {
    q: u64,
    by: &'static str,
    rows: Vec<R>,
}

fn table(ctx: &Context, q: u64, by: By, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let pq = prime_power(q)?;
    let (headers, rows, text_json) = match by {
        By::Class => {
            let rows = ctx
                .data
                .classes
                .iter()
                .map(|c| {
                    Ok(ClassRow {
                        class: format!("±{}", c.name),
                        polynomial: c.table1_poly.to_string(),
                        count: Exact::from(&evaluate_class_count(&ctx.data, &c.name, pq)?),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let cells = rows
                .iter()
                .map(|r| vec![r.class.clone(), r.polynomial.clone(), r.count.to_string()])
                .collect::<Vec<_>>();
            let j = json(&TableOut { q, by: "class", rows })?;
            (["class", "polynomial", "count"], cells, j)
        }
        By::Trace => {
            let rows = POSSIBLE_TRACES
                .iter()
                .map(|&a| {
                    Ok(TraceRow {
                        trace: a,
                        polynomial: ctx.data.trace_record(a)?.table2_poly.to_string(),
                        count: Exact::from(&count_by_trace(&ctx.data, a, pq)?),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let cells = rows
                .iter()
                .map(|r| vec![r.trace.to_string(), r.polynomial.clone(), r.count.to_string()])
                .collect::<Vec<_>>();
            let j = json(&TableOut { q, by: "trace", rows })?;
            (["trace", "polynomial", "count"], cells, j)
        }
    };
    let text = match fmt {
        Format::Json => text_json,
        Format::Csv => csv(&headers, &rows),
        Format::Table => text_table(&headers, &rows, &[by == By::Trace, false, true]),
    };
    out.write_all(text.as_bytes())?;
    Ok(exit::OK)
}

#[derive(Serialize)]
struct PointsOut {
    class: String,
    q: u64,
    trace: i64,
    points: Exact,
    surfaces: Exact,
}

fn points(ctx: &Context, class: &str, q: u64, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let pq = prime_power(q)?;
    let surfaces = evaluate_class_count(&ctx.data, class, pq)?;
    let label = if class.starts_with('-') {
        class.to_string()
    } else {
        class.trim_start_matches('+').to_string()
    };
    let report = ctx.report()?;
    let entry = report.by_name(&label).ok_or_else(|| {
        CliError::Usage(format!("unknown class label {class:?}; use a signed label such as 7A or -7A"))
    })?;
    let n = surface_point_count(entry.trace_pic, q);
    let row = PointsOut {
        class: label,
        q,
        trace: entry.trace_pic,
        points: Exact::from(&n),
        surfaces: Exact::from(&surfaces),
    };
    let text = match fmt {
        Format::Json => json(&row)?,
        Format::Csv => csv(
            &["class", "q", "trace", "points", "surfaces"],
            &[vec![row.class.clone(), q.to_string(), row.trace.to_string(), n.to_string(), surfaces.to_string()]],
        ),
        Format::Table => format!("{n}\n"),
    };
    out.write_all(text.as_bytes())?;
    Ok(exit::OK)
}

/// Collapses `X, -X` pairs to `±X` for display.
fn pair_labels(labels: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for l in labels {
        if let Some(pos) = l.strip_prefix('-') {
            if labels.iter().any(|m| m == pos) {
                continue;
            }
            out.push(l.clone());
        } else if labels.contains(&format!("-{l}")) {
            out.push(format!("±{l}"));
        } else {
            out.push(l.clone());
        }
    }
    out
}

fn existence(ctx: &Context, q: u64, fmt: Format, out: &mut dyn Write) -> Result<i32, CliError> {
    let e = existence_exceptions(&ctx.data, prime_power(q)?)?;
    let traces: Vec<String> = e.trace_exceptions.iter().map(i64::to_string).collect();
    let text = match fmt {
        Format::Json => json(&e)?,
        Format::Csv => {
            let mut rows: Vec<Vec<String>> =
                e.class_exceptions.iter().map(|c| vec!["class".into(), c.clone()]).collect();
            rows.extend(traces.iter().map(|a| vec!["trace".into(), a.clone()]));
            csv(&["kind", "label"], &rows)
        }
        Format::Table => {
            let none = |v: Vec<String>| if v.is_empty() { "none".to_string() } else { v.join(", ") };
            format!(
                "q = {q}\nclasses: {}\ntraces: {}\n",
                none(pair_labels(&e.class_exceptions)),
                none(traces)
            )
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(exit::OK)
}

fn oracle(
    ctx: &Context,
    identity: bool,
    cycle_type: Option<String>,
    q: u64,
    budget: u128,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let pq = prime_power(q)?;
    let run = if identity {
        run_identity(&ctx.data, pq, budget)?
    } else {
        let ct: CycleType = cycle_type
            .as_deref()
            .ok_or_else(|| CliError::Usage("--cycle-type or --identity is required".into()))?
            .parse()?;
        let name = ctx.identify(&embed_permutation(&ct.sigma())?)?;
        run_twisted_as(&ctx.data, name, &ct, pq, budget)?
    };
    let fields = [
        ("cycle_type", run.cycle_type.clone()),
        ("q", run.q.to_string()),
        ("class_name", run.class_name.clone()),
        ("raw_count", run.raw_count.to_string()),
        ("pgl3_order", run.pgl3_order.to_string()),
        ("orbit_count", run.orbit_count.to_string()),
        ("expected", run.expected.to_string()),
        ("match", run.matches.to_string()),
        ("wall_time", format!("{:.3}", run.wall_time)),
    ];
    let text = match fmt {
        Format::Json => json(&run)?,
        Format::Csv => csv(
            &fields.each_ref().map(|f| f.0),
            &[fields.iter().map(|f| f.1.clone()).collect()],
        ),
        Format::Table => fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
    };
    out.write_all(text.as_bytes())?;
    Ok(if run.matches { exit::OK } else { exit::VERIFICATION_FAILED })
}

fn verify_cmd(
    ctx: &Context,
    target: verify::Target,
    budget: u128,
    fmt: Format,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let checks = verify::run(ctx, target, budget)?;
    let text = match fmt {
        Format::Json => json(&checks)?,
        Format::Csv => csv(
            &["check", "passed", "detail"],
            &checks
                .iter()
                .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()])
                .collect::<Vec<_>>(),
        ),
        Format::Table => checks
            .iter()
            .map(|c| format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect(),
    };
    out.write_all(text.as_bytes())?;
    Ok(if checks.iter().all(|c| c.passed) {
        exit::OK
    } else {
        exit::VERIFICATION_FAILED
    })
}
