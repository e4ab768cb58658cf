use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercore::montecarlo::CoreSemantics;
use hypercore::numerics::choose_f64;
use hypercore::sweep::{evaluate_formula, evaluate_mc, DEFAULT_SCAN_CAP};
use hypercore::{
    exact_exactly_one, exact_global, run_sweep, scan_breakdown, Error, HypergraphParams, LocalContext,
    Method, Scope, Seed, SweepResult, SweepSpec,
};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "hypercore",
    version,
    about = "r-core formation probabilities in random k-uniform hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Probability that a fixed set of u vertices forms an r-core.
    Local(LocalArgs),
    /// Probability that an r-core forms anywhere among v vertices.
    Global(GlobalArgs),
    /// Evaluate methods over a range of expected edge counts.
    Sweep(SweepArgs),
    /// Find the first expected edge count where a formula breaks down.
    Breakdown(BreakdownArgs),
    /// Exhaustive enumeration over every hypergraph (C(v,k) <= 20).
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScopeArg {
    Local,
    Global,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Scope {
        match s {
            ScopeArg::Local => Scope::Local,
            ScopeArg::Global => Scope::Global,
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct McArgs {
    /// Monte Carlo trials.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[arg(long)]
    u: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Edge probability.
    #[arg(long, conflicts_with = "e_u", required_unless_present = "e_u")]
    p: Option<f64>,
    /// Expected edge count; sets p = e_u / C(u, k).
    #[arg(long)]
    e_u: Option<f64>,
    #[arg(long = "method", value_parser = parse_method, default_value = "connectivity")]
    methods: Vec<Method>,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    #[arg(long)]
    v: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Edge probability.
    #[arg(long, conflicts_with = "e_v", required_unless_present = "e_v")]
    p: Option<f64>,
    /// Expected edge count; sets p = e_v / C(v, k).
    #[arg(long)]
    e_v: Option<f64>,
    #[arg(long = "method", value_parser = parse_method, default_value = "interleaved-upper")]
    methods: Vec<Method>,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = ScopeArg::Global)]
    scope: ScopeArg,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    /// Vertices per expected edge: v = round(overhead * e_v).
    #[arg(long)]
    overhead: f64,
    /// First expected edge count.
    #[arg(long)]
    e_from: u32,
    /// Last expected edge count (inclusive).
    #[arg(long)]
    e_to: u32,
    #[arg(long = "method", value_parser = parse_method, required = true)]
    methods: Vec<Method>,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BreakdownArgs {
    #[arg(long, value_enum, default_value_t = ScopeArg::Global)]
    scope: ScopeArg,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value_t = 1.0)]
    overhead: f64,
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Largest expected edge count to scan.
    #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
    cap: u32,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long)]
    v: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    output: Output,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Invalid(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => Failure::Io(e),
            other => Failure::Io(io::Error::other(format!("{other:?}"))),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// One method evaluated at one point.
#[derive(Debug, Serialize)]
struct PointRecord {
    scope: Scope,
    size: u32,
    k: u32,
    r: u32,
    p: f64,
    method: Method,
    value: f64,
    valid: bool,
    diagnostic: Option<String>,
    trials: Option<u64>,
    stderr: Option<f64>,
}

impl PointRecord {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            scope_name(self.scope).to_string(),
            self.size.to_string(),
            self.k.to_string(),
            self.r.to_string(),
            fmt_f64(self.p),
            self.method.to_string(),
            fmt_f64(self.value),
            flag(self.valid),
            self.diagnostic.clone().unwrap_or_default(),
            self.trials.map(|t| t.to_string()).unwrap_or_default(),
            self.stderr.map(fmt_f64).unwrap_or_default(),
        ]
    }
}

const POINT_HEADER: [&str; 11] =
    ["scope", "size", "k", "r", "p", "method", "value", "valid", "diagnostic", "trials", "stderr"];

fn scope_name(s: Scope) -> &'static str {
    match s {
        Scope::Local => "local",
        Scope::Global => "global",
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn resolve_p(size: u32, k: u32, p: Option<f64>, e: Option<f64>) -> Result<f64, Failure> {
    match (p, e) {
        (Some(p), None) => Ok(p),
        (None, Some(e)) => {
            let m = choose_f64(u64::from(size), i64::from(k))?;
            if m == 0.0 {
                return Err(Failure::Invalid(format!("no possible edges with {size} vertices and k = {k}")));
            }
            Ok(e / m)
        }
        _ => Err(Failure::Invalid("give exactly one of --p and the expected edge count".into())),
    }
}

#[allow(clippy::too_many_arguments)]
fn evaluate_point(
    scope: Scope,
    size: u32,
    k: u32,
    r: u32,
    p: f64,
    methods: &[Method],
    mc: &McArgs,
) -> Result<Vec<PointRecord>, Failure> {
    // validates the point once for every method
    HypergraphParams::new(size, k, p, r)?;
    let mut ctx = LocalContext::new();
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    methods
        .into_iter()
        .map(|method| {
            let rec = |value: f64, valid: bool, diagnostic: Option<String>, trials, stderr| PointRecord {
                scope,
                size,
                k,
                r,
                p,
                method,
                value,
                valid,
                diagnostic,
                trials,
                stderr,
            };
            if method.is_formula() {
                let v = evaluate_formula(scope, method, size, k, p, r, &mut ctx);
                let diag =
                    v.diagnostic.and_then(|d| serde_json::to_value(d).ok()?.as_str().map(str::to_owned));
                Ok(rec(v.value, v.valid, diag, None, None))
            } else {
                let est = evaluate_mc(scope, size, k, p, r, mc.trials, Seed(mc.seed))?;
                Ok(rec(est.mean, true, None, Some(est.trials), Some(est.stderr)))
            }
        })
        .collect()
}

fn write_points(records: &[PointRecord], output: &Output) -> Result<(), Failure> {
    let mut out = open_output(&output.out)?;
    match output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(POINT_HEADER)?;
            for r in records {
                w.write_record(r.csv_fields())?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn sweep_csv(res: &SweepResult, out: impl Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    let formulas: Vec<Method> = res.spec.formula_methods().collect();
    let has_mc = res.spec.methods.contains(&Method::Mc);
    let mut header = vec!["e_v".to_string(), "v".into(), "p".into()];
    for m in &formulas {
        header.extend([m.to_string(), format!("{m}_valid"), format!("{m}_breakdown")]);
    }
    if has_mc {
        header.extend(["mc_mean".into(), "mc_stderr".into()]);
    }
    w.write_record(&header)?;
    for row in &res.rows {
        let mut rec = vec![row.e_v.to_string(), row.v.to_string(), fmt_f64(row.p)];
        for m in &formulas {
            let v = row.value(*m).expect("formula evaluated on every row");
            let broken = row.broken.iter().any(|&(x, b)| x == *m && b);
            rec.extend([fmt_f64(v.value), flag(v.valid), flag(broken)]);
        }
        if let Some(mc) = row.mc {
            rec.extend([fmt_f64(mc.mean), fmt_f64(mc.stderr)]);
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let spec = SweepSpec {
        scope: args.scope.into(),
        k: args.k,
        r: args.r,
        overhead: args.overhead,
        e_range: args.e_from..=args.e_to,
        methods: args.methods,
        trials: args.mc.trials,
        seed: Seed(args.mc.seed),
    };
    let res = run_sweep(spec)?;
    let mut out = open_output(&args.output.out)?;
    match args.output.format {
        Format::Csv => sweep_csv(&res, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &res)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    for (m, at) in &res.breakdown_at {
        match at {
            Some(e) => eprintln!("{m}: breakdown at e_v = {e}"),
            None => eprintln!("{m}: no breakdown in range"),
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BreakdownReport {
    scope: Scope,
    method: Method,
    k: u32,
    r: u32,
    overhead: f64,
    cap: u32,
    points: u32,
    breakdown_at: Option<u32>,
}

fn cmd_breakdown(args: BreakdownArgs) -> Result<(), Failure> {
    let scope = args.scope.into();
    let scan = scan_breakdown(scope, args.method, args.k, args.r, args.overhead, args.cap)?;
    let report = BreakdownReport {
        scope,
        method: args.method,
        k: args.k,
        r: args.r,
        overhead: args.overhead,
        cap: scan.cap,
        points: scan.points,
        breakdown_at: scan.breakdown_at,
    };
    let mut out = open_output(&args.output.out)?;
    match args.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["scope", "method", "k", "r", "overhead", "cap", "points", "breakdown_at"])?;
            w.write_record([
                scope_name(scope).to_string(),
                report.method.to_string(),
                report.k.to_string(),
                report.r.to_string(),
                fmt_f64(report.overhead),
                report.cap.to_string(),
                report.points.to_string(),
                report.breakdown_at.map(|e| e.to_string()).unwrap_or_else(|| "none".into()),
            ])?;
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    v: u32,
    k: u32,
    r: u32,
    p: f64,
    at_least_one: f64,
    exactly_one_minimal: f64,
    exactly_one_maximal: f64,
}

fn cmd_oracle(args: OracleArgs) -> Result<(), Failure> {
    let params = HypergraphParams::new(args.v, args.k, args.p, args.r)?;
    let report = OracleReport {
        v: args.v,
        k: args.k,
        r: args.r,
        p: args.p,
        at_least_one: exact_global(&params)?,
        exactly_one_minimal: exact_exactly_one(&params, CoreSemantics::Minimal)?,
        exactly_one_maximal: exact_exactly_one(&params, CoreSemantics::Maximal)?,
    };
    let mut out = open_output(&args.output.out)?;
    match args.output.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record([
                "v",
                "k",
                "r",
                "p",
                "at_least_one",
                "exactly_one_minimal",
                "exactly_one_maximal",
            ])?;
            w.write_record([
                report.v.to_string(),
                report.k.to_string(),
                report.r.to_string(),
                fmt_f64(report.p),
                fmt_f64(report.at_least_one),
                fmt_f64(report.exactly_one_minimal),
                fmt_f64(report.exactly_one_maximal),
            ])?;
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Local(a) => {
            let p = resolve_p(a.u, a.k, a.p, a.e_u)?;
            let recs = evaluate_point(Scope::Local, a.u, a.k, a.r, p, &a.methods, &a.mc)?;
            write_points(&recs, &a.output)
        }
        Command::Global(a) => {
            let p = resolve_p(a.v, a.k, a.p, a.e_v)?;
            let recs = evaluate_point(Scope::Global, a.v, a.k, a.r, p, &a.methods, &a.mc)?;
            write_points(&recs, &a.output)
        }
        Command::Sweep(a) => cmd_sweep(a),
        Command::Breakdown(a) => cmd_breakdown(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
