//! Scaling benchmark over the three bundled Boolean Pythagorean Triples models.

use std::fmt;
use std::io;
use std::time::{Duration, Instant};

use crate::ast::Model;
use crate::error::{Error, Result};
use crate::expand::{flatten_with, ExpandOptions, FlattenOptions, Pipeline};
use crate::parser::{bind_params, parse_model, Bindings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Variant {
    /// `forAll` with the condition as an implication.
    Quantifier,
    /// Comprehension with explicit guards.
    Guarded,
    /// Comprehension with the condition in the return expression.
    InReturn,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Quantifier, Variant::Guarded, Variant::InReturn];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Quantifier => "quantifier",
            Variant::Guarded => "guarded",
            Variant::InReturn => "in_return",
        }
    }

    pub fn file_name(self) -> &'static str {
        match self {
            Variant::Quantifier => "triples_forall.model",
            Variant::Guarded => "triples_guarded.model",
            Variant::InReturn => "triples_inreturn.model",
        }
    }

    pub fn source(self) -> &'static str {
        match self {
            Variant::Quantifier => include_str!("../models/triples_forall.model"),
            Variant::Guarded => include_str!("../models/triples_guarded.model"),
            Variant::InReturn => include_str!("../models/triples_inreturn.model"),
        }
    }

    pub fn model(self) -> Model {
        parse_model(self.source()).expect("bundled model parses")
    }

    /// The bundled model with `n` bound.
    pub fn bound(self, n: i64) -> Result<Model> {
        let b: Bindings = [("n".to_string(), n)].into();
        bind_params(&self.model(), &b)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Timeout,
    Error(String),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Ok => f.write_str("ok"),
            Status::Timeout => f.write_str("timeout"),
            Status::Error(_) => f.write_str("error"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub variant: Variant,
    pub pipeline: Pipeline,
    pub n: i64,
    /// Median over the timed repeats; `None` unless the status is ok.
    pub wall_time: Option<Duration>,
    pub combinations_considered: u64,
    pub constraints_emitted: usize,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub variants: Vec<Variant>,
    pub pipelines: Vec<Pipeline>,
    pub n_values: Vec<i64>,
    pub timeout: Duration,
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            variants: Variant::ALL.to_vec(),
            pipelines: Pipeline::ALL.to_vec(),
            n_values: vec![10, 20, 50],
            timeout: Duration::from_secs(3600),
            repeats: 3,
        }
    }
}

pub fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    let k = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[k]
    } else {
        (xs[k - 1] + xs[k]) / 2
    }
}

/// One untimed warm-up, then `repeats` timed runs.
fn measure(m: &Model, pipeline: Pipeline, timeout: Duration, repeats: usize) -> (Status, Option<Duration>, u64, usize) {
    let mut times = Vec::with_capacity(repeats);
    let mut counts = (0, 0);
    for _ in 0..=repeats {
        let opts = FlattenOptions {
            pipeline: Some(pipeline),
            expand: ExpandOptions {
                deadline: Some(Instant::now() + timeout),
                skip_simplify: false,
            },
        };
        let start = Instant::now();
        let res = flatten_with(m, &opts);
        let t = start.elapsed();
        match res {
            Ok(f) => {
                counts = (f.stats.combinations_considered, f.flat.constraints.len());
                times.push(t);
            }
            Err(Error::Timeout) => return (Status::Timeout, None, 0, 0),
            Err(e) => return (Status::Error(e.to_string()), None, 0, 0),
        }
    }
    times.remove(0);
    (Status::Ok, Some(median(times)), counts.0, counts.1)
}

/// Runs every (variant, pipeline, n) in order. After a timeout, larger `n` are
/// skipped for that pair.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.n_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Internal("n values must be sorted ascending".into()));
    }
    if cfg.repeats == 0 {
        return Err(Error::Internal("repeats must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &variant in &cfg.variants {
        for &pipeline in &cfg.pipelines {
            for &n in &cfg.n_values {
                let m = variant.bound(n)?;
                let (status, wall_time, combos, emitted) = measure(&m, pipeline, cfg.timeout, cfg.repeats);
                let stop = status == Status::Timeout;
                rows.push(BenchRow {
                    variant,
                    pipeline,
                    n,
                    wall_time,
                    combinations_considered: combos,
                    constraints_emitted: emitted,
                    status,
                });
                if stop {
                    break;
                }
            }
        }
    }
    Ok(rows)
}

/// Writes `variant,pipeline,n,median_seconds,status`. Plot the time on a log axis.
pub fn emit_plot_data<W: io::Write>(rows: &[BenchRow], out: W) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no benchmark rows to write"));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["variant", "pipeline", "n", "median_seconds", "status"])?;
    for r in rows {
        let secs = r.wall_time.map(|t| format!("{:.6}", t.as_secs_f64())).unwrap_or_default();
        w.write_record([
            r.variant.name(),
            r.pipeline.name(),
            &r.n.to_string(),
            &secs,
            &r.status.to_string(),
        ])?;
    }
    w.flush()
}

/// Least-squares slope of log(time) against log(n).
pub fn fit_exponent(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), (n, t)| (a + n.ln(), b + t.ln()));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = points.iter().fold((0.0, 0.0), |(a, b), (n, t)| {
        let dx = n.ln() - mx;
        (a + dx * (t.ln() - my), b + dx * dx)
    });
    num / den
}
