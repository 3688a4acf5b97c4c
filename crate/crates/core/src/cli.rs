//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::bench::{emit_plot_data, run_bench, BenchConfig, Status, Variant};
use crate::error::Error;
use crate::expand::{flatten_with, ExpandOptions, FlattenOptions, Flattened, Pipeline};
use crate::parser::{bind_params, parse_model, parse_params, Bindings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_EVAL: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_TIMEOUT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "unroll", version, about = "Unroll comprehensions and quantifiers into flat constraints")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the flattened model.
    Flatten {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Pipeline::SolverAidedFull)]
        pipeline: Pipeline,
        /// Expansion statistics as JSON on stderr.
        #[arg(long)]
        stats: bool,
        /// Print each generator model and its solutions.
        #[arg(long)]
        dump_generator: bool,
        /// Print each return-expression rewrite.
        #[arg(long)]
        dump_rewrite: bool,
    },
    /// Run all three pipelines and check that their output is identical.
    Compare {
        #[command(flatten)]
        input: Input,
    },
    /// Time the bundled triples models and write CSV.
    Bench {
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = Variant::ALL)]
        variants: Vec<Variant>,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = Pipeline::ALL)]
        pipelines: Vec<Pipeline>,
        /// Comma-separated, ascending; `10,20,...,200` fills in the progression.
        #[arg(long = "n", default_value = "10,20,50")]
        n: String,
        #[arg(long, default_value_t = 3600.0)]
        timeout: f64,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
        /// CSV destination; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Input {
    model: PathBuf,
    /// Parameter value, `NAME=INT`. Repeatable.
    #[arg(long = "let", value_name = "NAME=INT", value_parser = parse_let)]
    lets: Vec<(String, i64)>,
    /// File of `letting NAME be VALUE` lines.
    #[arg(long, conflicts_with = "lets")]
    param: Option<PathBuf>,
    /// Seconds before expansion is abandoned.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, hide = true)]
    test_break_simplifier: bool,
}

fn parse_let(s: &str) -> Result<(String, i64), String> {
    let (name, v) = s.split_once('=').ok_or("expected NAME=INT")?;
    let v = v.trim().parse().map_err(|e| format!("bad integer `{v}`: {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn parse_n_values(s: &str) -> Result<Vec<i64>, String> {
    let mut out: Vec<i64> = Vec::new();
    let mut fill = false;
    for tok in s.split(',').map(str::trim) {
        if tok == "..." {
            if out.len() < 2 {
                return Err("`...` needs two values before it".into());
            }
            fill = true;
            continue;
        }
        let v: i64 = tok.parse().map_err(|e| format!("bad n `{tok}`: {e}"))?;
        if fill {
            let step = out[out.len() - 1] - out[out.len() - 2];
            if step <= 0 {
                return Err("`...` needs an increasing progression".into());
            }
            let mut next = out[out.len() - 1] + step;
            while next < v {
                out.push(next);
                next += step;
            }
            fill = false;
        }
        out.push(v);
    }
    if fill {
        return Err("`...` needs an end value".into());
    }
    Ok(out)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Eval { .. } => EXIT_EVAL,
        Error::Timeout => EXIT_TIMEOUT,
        _ => EXIT_INPUT,
    }
}

fn diagnostic(path: &Path, e: &Error) -> String {
    match e.span() {
        Some(s) => format!("{}:{}:{}: error: {e}", path.display(), s.line, s.col),
        None => format!("{}: error: {e}", path.display()),
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn at(path: &Path, e: &Error) -> Self {
        Failure {
            code: exit_code(e),
            message: diagnostic(path, e),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: format!("{}: error: {e}", path.display()),
        }
    }
}

fn load(input: &Input) -> Result<crate::ast::Model, Failure> {
    let text = fs::read_to_string(&input.model).map_err(|e| Failure::io(&input.model, e))?;
    let model = parse_model(&text).map_err(|e| Failure::at(&input.model, &e))?;
    let bindings: Bindings = match &input.param {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::io(p, e))?;
            parse_params(&text, &model).map_err(|e| Failure::at(p, &e))?
        }
        None => input.lets.iter().cloned().collect(),
    };
    bind_params(&model, &bindings).map_err(|e| Failure::at(&input.model, &e))
}

fn run_pipeline(
    input: &Input,
    m: &crate::ast::Model,
    pipeline: Pipeline,
) -> Result<Flattened, Failure> {
    let opts = FlattenOptions {
        pipeline: Some(pipeline),
        expand: ExpandOptions {
            deadline: input
                .timeout
                .map(|s| Instant::now() + Duration::from_secs_f64(s.max(0.0))),
            skip_simplify: input.test_break_simplifier && pipeline == Pipeline::Naive,
        },
    };
    flatten_with(m, &opts).map_err(|e| Failure::at(&input.model, &e))
}

fn comment_block(out: &mut String, title: &str, body: &str) {
    out.push_str(&format!("$ {title}\n"));
    for line in body.lines() {
        out.push_str(&format!("$   {line}\n"));
    }
}

fn cmd_flatten(
    input: &Input,
    pipeline: Pipeline,
    stats: bool,
    dump_generator: bool,
    dump_rewrite: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let m = load(input)?;
    let f = run_pipeline(input, &m, pipeline)?;
    let mut text = String::new();
    for (k, g) in f.generators.iter().enumerate() {
        if dump_rewrite {
            match &g.rewrite {
                Some(rw) => comment_block(&mut text, &format!("rewrite {}", k + 1), &rw.to_string()),
                None => comment_block(&mut text, &format!("rewrite {}", k + 1), "none"),
            }
        }
        if dump_generator {
            let sols = crate::fdsolver::solve_all(g).map_err(|e| Failure::at(&input.model, &e))?;
            let mut body = g.to_string();
            body.push_str("solutions:\n");
            for s in &sols {
                body.push_str(&format!("  {s}\n"));
            }
            comment_block(&mut text, &format!("generator model {}", k + 1), &body);
        }
    }
    if (dump_generator || dump_rewrite) && f.generators.is_empty() {
        text.push_str("$ no generator models\n");
    }
    text.push_str(&f.flat.to_string());
    let _ = out.write_all(text.as_bytes());
    if stats {
        let _ = writeln!(err, "{}", f.stats.to_json(pipeline));
    }
    Ok(())
}

fn cmd_compare(input: &Input, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let m = load(input)?;
    let mut results = Vec::new();
    for p in Pipeline::ALL {
        results.push((p, run_pipeline(input, &m, p)));
    }
    // Identical failures are reported as the failure itself.
    if results.iter().all(|(_, r)| r.is_err()) {
        let first = results[0].1.as_ref().err().map(|f| (f.code, f.message.clone()));
        if results
            .iter()
            .all(|(_, r)| r.as_ref().err().map(|f| (f.code, f.message.clone())) == first)
        {
            let (_, r) = results.swap_remove(0);
            return Err(r.expect_err("checked"));
        }
    }
    let printed: Vec<(Pipeline, String)> = results
        .iter()
        .map(|(p, r)| {
            let s = match r {
                Ok(f) => f.flat.to_string(),
                Err(f) => format!("{}\n", f.message),
            };
            (*p, s)
        })
        .collect();
    let reference = &printed[0].1;
    if printed.iter().all(|(_, s)| s == reference) {
        let mut text = format!(
            "identical output from all pipelines ({} constraints)\n{:<22}{:>14}{:>10}{:>12}\n",
            results[0].1.as_ref().map(|f| f.flat.constraints.len()).unwrap_or(0),
            "pipeline",
            "combinations",
            "emitted",
            "discarded"
        );
        for (p, r) in &results {
            let s = &r.as_ref().ok().expect("all succeeded").stats;
            text.push_str(&format!(
                "{:<22}{:>14}{:>10}{:>12}\n",
                p.name(),
                s.combinations_considered,
                s.items_emitted,
                s.items_discarded_as_identity
            ));
        }
        let _ = out.write_all(text.as_bytes());
        for (p, r) in &results {
            if let Ok(f) = r {
                let _ = writeln!(err, "{}: {:.6}s", p.name(), f.stats.total_time.as_secs_f64());
            }
        }
        return Ok(EXIT_OK);
    }
    let mut text = String::from("pipelines disagree\n");
    for (p, s) in &printed[1..] {
        if s != reference {
            text.push_str(&diff(printed[0].0.name(), reference, p.name(), s));
        }
    }
    let _ = out.write_all(text.as_bytes());
    Ok(EXIT_MISMATCH)
}

/// Line-by-line diff of two printed models.
fn diff(a_name: &str, a: &str, b_name: &str, b: &str) -> String {
    let (al, bl): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
    let mut out = format!("--- {a_name}\n+++ {b_name}\n");
    for k in 0..al.len().max(bl.len()) {
        let (x, y) = (al.get(k), bl.get(k));
        if x != y {
            out.push_str(&format!("@@ line {} @@\n", k + 1));
            if let Some(x) = x {
                out.push_str(&format!("-{x}\n"));
            }
            if let Some(y) = y {
                out.push_str(&format!("+{y}\n"));
            }
        }
    }
    out
}

fn cmd_bench(
    cfg: BenchConfig,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let rows = run_bench(&cfg).map_err(|e| Failure {
        code: exit_code(&e),
        message: format!("error: {e}"),
    })?;
    for r in &rows {
        let time = r.wall_time.map(|t| format!("{:.4}s", t.as_secs_f64())).unwrap_or_default();
        let _ = write!(err, "{} {} n={} {} {}", r.variant, r.pipeline, r.n, r.status, time);
        if let Status::Error(m) = &r.status {
            let _ = write!(err, " ({m})");
        }
        let _ = writeln!(err);
    }
    match path {
        Some(p) => {
            let f = fs::File::create(p).map_err(|e| Failure::io(p, e))?;
            emit_plot_data(&rows, f).map_err(|e| Failure::io(p, e))
        }
        None => emit_plot_data(&rows, out).map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.cmd {
        Command::Flatten {
            input,
            pipeline,
            stats,
            dump_generator,
            dump_rewrite,
        } => cmd_flatten(input, *pipeline, *stats, *dump_generator, *dump_rewrite, out, err)
            .map(|()| EXIT_OK),
        Command::Compare { input } => cmd_compare(input, out, err),
        Command::Bench {
            variants,
            pipelines,
            n,
            timeout,
            repeats,
            out: path,
        } => match parse_n_values(n) {
            Ok(n_values) => {
                let cfg = BenchConfig {
                    variants: variants.clone(),
                    pipelines: pipelines.clone(),
                    n_values,
                    timeout: Duration::from_secs_f64(timeout.max(0.0)),
                    repeats: *repeats,
                };
                cmd_bench(cfg, path.as_deref(), out, err).map(|()| EXIT_OK)
            }
            Err(m) => Err(Failure {
                code: EXIT_INPUT,
                message: format!("error: --n: {m}"),
            }),
        },
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn n_progressions() {
        assert_eq!(parse_n_values("10,20,50").unwrap(), vec![10, 20, 50]);
        assert_eq!(parse_n_values("10,20,...,60").unwrap(), vec![10, 20, 30, 40, 50, 60]);
        assert!(parse_n_values("10,...,60").is_err());
        assert!(parse_n_values("10,20,...").is_err());
        assert!(parse_n_values("x").is_err());
    }

    #[test]
    fn lets() {
        assert_eq!(parse_let("n=5").unwrap(), ("n".to_string(), 5));
        assert!(parse_let("n").is_err());
        assert!(parse_let("n=x").is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["unroll"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["unroll", "flatten", "m", "--pipeline", "fast"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["unroll", "--help"]).0, EXIT_OK);
        let (code, _, err) = run_str(&["unroll", "flatten", "/nonexistent/x.model"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.starts_with("/nonexistent/x.model: error:"), "{err}");
    }
}
