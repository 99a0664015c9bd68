//! `lelek`: classify slope pairs, build truncated Mahavier products and emit
//! CSV / JSON / SVG artifacts.
//!
//! Exit codes: 0 success, 1 failed audit or invariant, 2 invalid input,
//! 3 budget or size cap exceeded.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use lelek_core::classify::AuditConfig;
use lelek_core::formats::{
    branch_set_json, orbit_csv, point_cloud_csv, prefix_table_csv, projection_csv, projection_svg,
    to_json,
};
use lelek_core::mahavier::DEFAULT_SAMPLES_PER_BRANCH;
use lelek_core::verify::{run_all, VerifyConfig};
use lelek_core::{
    build_sup_itinerary, classify, enumerate_orbit, finite_mahavier, lelek_density_audit, max_gap,
    prefix_products, project, structure_report, ClassificationReport, Error, NeverConnect,
    OrbitClass, PrimeBound, Rational, SlopePair,
};

#[derive(Parser, Debug)]
#[command(
    name = "lelek",
    version,
    about = "Fans from two-segment relations, in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide the fan kind of L_{r,rho}.
    Classify(ClassifyArgs),
    /// Enumerate r^k rho^l over a window and report the largest gap.
    Orbit(OrbitArgs),
    /// Build the depth-m product: branch set as JSON or sampled points as CSV.
    Approx(ApproxArgs),
    /// Project the depth-m product onto coordinates (i, j).
    Plot(PlotArgs),
    /// Word whose prefix values x*P_n climb to within eps of 1.
    EndpointSeq(EndpointSeqArgs),
    /// Endpoint density audit for a never-connect pair.
    Audit(AuditArgs),
    /// Run the invariant suite; exits 1 on any failure.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    /// First slope, as an exact fraction p/q.
    #[arg(long, allow_hyphen_values = true)]
    r: String,
    /// Second slope, as an exact fraction p/q.
    #[arg(long, allow_hyphen_values = true)]
    rho: String,
    /// Trial-division bound for prime factorization.
    #[arg(long, env = "LELEK_PRIME_BOUND", default_value_t = PrimeBound::DEFAULT.0)]
    prime_bound: u64,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    /// Also attach depth-m structure witnesses.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 32)]
    bound: u32,
    /// Comma-separated subset of B1,B2,B3,B4.
    #[arg(long, default_value = "B1", value_delimiter = ',')]
    classes: Vec<String>,
    #[arg(long, default_value = "1/10")]
    lo: String,
    #[arg(long, default_value = "1")]
    hi: String,
}

#[derive(Args, Debug)]
struct ApproxArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Points per branch in CSV output.
    #[arg(long, default_value_t = DEFAULT_SAMPLES_PER_BRANCH)]
    per_branch: usize,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    i: usize,
    #[arg(long, default_value_t = 2)]
    j: usize,
}

#[derive(Args, Debug)]
struct EndpointSeqArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    x: String,
    #[arg(long, default_value = "1/100")]
    eps: String,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Agreement depth; defaults to depth - 2.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "1/100")]
    eps: String,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, default_value_t = 32)]
    bound: u32,
    #[arg(long, default_value = "1/100")]
    eps: String,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    /// Computation finished but a check did not hold.
    Check(String),
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Run = Result<(), Failure>;

impl Common {
    fn pair(&self) -> Result<SlopePair, Error> {
        SlopePair::parse(&self.r, &self.rho)
    }

    fn bound(&self) -> PrimeBound {
        PrimeBound(self.prime_bound)
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, Error> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Error::Precondition(format!(
                "format {f:?} is not available here; choose one of {allowed:?}"
            )))
        }
    }

    fn emit(&self, body: &str) -> io::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, body),
            None => io::stdout().lock().write_all(body.as_bytes()),
        }
    }
}

fn parse_rational(what: &str, s: &str) -> Result<Rational, Error> {
    s.parse::<Rational>().map_err(|e| match e {
        Error::Parse { input, reason } => Error::Parse {
            input,
            reason: format!("{what}: {reason}"),
        },
        other => other,
    })
}

fn report_text(rep: &ClassificationReport) -> String {
    let mut out = String::new();
    let p = &rep.normalized_pair;
    out.push_str(&format!("pair       r = {}, rho = {}\n", p.r, p.rho));
    out.push_str(&format!("kind       {}\n", rep.kind));
    if let Some(e) = rep.dependence {
        out.push_str(&format!("relation   r^{} = rho^{}\n", e.k, e.l));
    }
    for c in &rep.citations {
        out.push_str(&format!("cites      {c}\n"));
    }
    let w = &rep.witnesses;
    out.push_str(&format!("top        {}\n", w.top_note));
    out.push_str(&format!(
        "depth {}    {} branches, {} endpoints, largest parameter {}\n",
        w.reference_depth,
        w.branch_count,
        w.sample_endpoints.len(),
        w.max_branch_param
    ));
    if let Some(s) = &rep.structure {
        out.push_str(&format!(
            "depth {}    {} branches, {} distinct endpoints, meet only at origin: {}\n",
            s.depth, s.branch_count, s.distinct_endpoints, s.origin_only_intersections
        ));
        for row in &s.diameter_table {
            out.push_str(&format!(
                "  n = {:<3} {:>5} branches  max diameter {}  D_n {}  {}\n",
                row.p_symbols,
                row.branches,
                row.max_diameter,
                row.bound,
                if row.within { "ok" } else { "EXCEEDED" }
            ));
        }
    }
    out
}

fn cmd_classify(a: &ClassifyArgs) -> Run {
    let c = &a.common;
    let format = c.format(Format::Json, &[Format::Json, Format::Text])?;
    let pair = c.pair()?;
    let rep = match a.depth {
        Some(d) => structure_report(&pair, d, c.bound())?,
        None => classify(&pair, c.bound())?,
    };
    let body = match format {
        Format::Text => report_text(&rep),
        _ => to_json(&rep)?,
    };
    c.emit(&body)?;
    let broken = rep
        .structure
        .as_ref()
        .is_some_and(|s| s.diameter_table.iter().any(|r| !r.within));
    if broken {
        return Err(Failure::Check("diameter bound exceeded".into()));
    }
    Ok(())
}

fn cmd_orbit(a: &OrbitArgs) -> Run {
    let c = &a.common;
    let format = c.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let pair = c.pair()?;
    let classes = a
        .classes
        .iter()
        .map(|s| s.trim().parse::<OrbitClass>())
        .collect::<Result<Vec<_>, _>>()?;
    let lo = parse_rational("lo", &a.lo)?;
    let hi = parse_rational("hi", &a.hi)?;
    let window = enumerate_orbit(&pair, &classes, a.bound, &lo, &hi)?;
    let gap = max_gap(&window).ok();
    match format {
        Format::Json => {
            let v = json!({ "window": window, "max_gap": gap });
            c.emit(&to_json(&v)?)?;
        }
        _ => {
            c.emit(&orbit_csv(&window))?;
            match &gap {
                Some(g) => eprintln!("{} entries, max gap {g} (~{:.6})", window.len(), g.to_f64()),
                None => eprintln!("window is empty"),
            }
        }
    }
    Ok(())
}

fn cmd_approx(a: &ApproxArgs) -> Run {
    let c = &a.common;
    let format = c.format(Format::Json, &[Format::Json, Format::Csv])?;
    let bs = finite_mahavier(&c.pair()?, a.depth)?;
    let body = match format {
        Format::Csv => point_cloud_csv(&bs.sample_cloud(a.per_branch)),
        _ => to_json(&branch_set_json(&bs))?,
    };
    c.emit(&body)?;
    Ok(())
}

fn cmd_plot(a: &PlotArgs) -> Run {
    let c = &a.common;
    let format = c.format(Format::Svg, &[Format::Svg, Format::Csv])?;
    let bs = finite_mahavier(&c.pair()?, a.depth)?;
    let segments = project(&bs, a.i, a.j)?;
    let body = match format {
        Format::Csv => projection_csv(&segments),
        _ => projection_svg(&segments, a.i, a.j),
    };
    c.emit(&body)?;
    Ok(())
}

fn cmd_endpoint_seq(a: &EndpointSeqArgs) -> Run {
    let c = &a.common;
    let format = c.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let nc = NeverConnect::new(c.pair()?, c.bound())?;
    let x = parse_rational("x", &a.x)?;
    let eps = parse_rational("eps", &a.eps)?;
    let it = build_sup_itinerary(&nc, &x, &eps, a.budget)?;
    let values: Vec<Rational> = prefix_products(&it)
        .as_slice()
        .iter()
        .map(|p| &x * p)
        .collect();
    let max = values.iter().max().expect("P_0 present").clone();
    match format {
        Format::Json => {
            let v = json!({
                "pair": nc.pair(),
                "x": x,
                "epsilon": eps,
                "word": it.word,
                "values": values,
                "max": max,
            });
            c.emit(&to_json(&v)?)?;
        }
        _ => {
            c.emit(&prefix_table_csv(&x, &it))?;
            eprintln!("word {} (length {}), max {max}", it.word, it.len());
        }
    }
    Ok(())
}

fn cmd_audit(a: &AuditArgs) -> Run {
    let c = &a.common;
    c.format(Format::Json, &[Format::Json])?;
    let pair = c.pair()?;
    let mut cfg = AuditConfig::new(a.depth, a.samples, a.n.unwrap_or(a.depth.saturating_sub(2)));
    cfg.epsilon = parse_rational("eps", &a.eps)?;
    cfg.budget = a.budget;
    cfg.seed = a.seed;
    cfg.bound = c.bound();
    let rec = lelek_density_audit(&pair, &cfg)?;
    c.emit(&to_json(&rec)?)?;
    eprintln!(
        "{} samples, {} skipped, max distance {} vs tolerance {}: {}",
        rec.samples.len(),
        rec.skipped.len(),
        rec.max_distance,
        rec.tolerance,
        if rec.passed { "pass" } else { "FAIL" }
    );
    if rec.passed {
        Ok(())
    } else {
        Err(Failure::Check("audit failed".into()))
    }
}

fn cmd_verify(a: &VerifyArgs) -> Run {
    let c = &a.common;
    let format = c.format(Format::Text, &[Format::Text, Format::Json])?;
    let cfg = VerifyConfig {
        depth: a.depth,
        orbit_bound: a.bound,
        epsilon: parse_rational("eps", &a.eps)?,
        samples: a.samples,
        budget: a.budget,
        seed: a.seed,
        prime_bound: c.bound(),
    };
    let checks = run_all(&c.pair()?, &cfg)?;
    let failed = checks.iter().filter(|ch| !ch.passed).count();
    let body = match format {
        Format::Json => to_json(&checks)?,
        _ => {
            let mut s = String::new();
            for ch in &checks {
                let tag = if ch.passed { "ok  " } else { "FAIL" };
                s.push_str(&format!("{tag} {:<38} {}\n", ch.name, ch.detail));
            }
            s.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
            s
        }
    };
    c.emit(&body)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{failed} invariant checks failed")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Orbit(a) => cmd_orbit(a),
        Command::Approx(a) => cmd_approx(a),
        Command::Plot(a) => cmd_plot(a),
        Command::EndpointSeq(a) => cmd_endpoint_seq(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("lelek: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("lelek: {e}");
            ExitCode::from(if e.is_cap() { 3 } else { 2 })
        }
        Err(Failure::Io(e)) => {
            eprintln!("lelek: {e}");
            ExitCode::from(2)
        }
    }
}
