//! The `specjoin` command line: spectra, verification suites and
//! per-family reports.

pub mod document;

use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use specjoin::families::Family;
use specjoin::graph::{make_complete, Graph};
use specjoin::joined_union::{structural_spectrum, Component, JoinedUnionSpec};
use specjoin::par;
use specjoin::power_graph::{power_graph_direct, power_spectrum};
use specjoin::power_report::{family_report, PowerFamily, DEFAULT_ORACLE_MAX};
use specjoin::spectra::{compare_spectra, oracle_spectrum, Spectrum, COMPARE_TOL};
use specjoin::verify::{self, Status, Suite, VerifyConfig};

use document::{
    fmt_dev, fmt_value, Deviations, Method, ReportDocument, SpectrumDocument, Tolerances,
    VerifyDocument, SCHEMA, VERSION,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_DEVIATION: u8 = 2;

pub const ORACLE_ENV: &str = "SPECJOIN_ORACLE_MAX";

const FAMILY_HELP: &str = "Family descriptor NAME:P1,P2,...  Families: \
multipartite:n1,...,np  equal_multipartite:p,t  complete_bipartite:a,b  \
complete_split:omega,n  cone:a,b (C_a join b isolated vertices)  wheel:n  \
friendship:n  firefly:p,n  multistep_wheel:a,b (K_1 join a copies of C_b)";

#[derive(Debug, Parser)]
#[command(
    name = "specjoin",
    version,
    about = "Normalized Laplacian spectra of joined unions and power graphs of Z_n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the spectrum of one graph.
    Spectrum(SpectrumArgs),
    /// Run verification suites against the dense oracle.
    Verify(VerifyArgs),
    /// Sweep one power-graph family and check its published quantities.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["power_n", "family", "edges"])))]
pub struct SpectrumArgs {
    /// Power graph of Z_n.
    #[arg(long, value_name = "N")]
    pub power_n: Option<u64>,
    #[arg(long, value_name = "NAME:PARAMS", help = FAMILY_HELP)]
    pub family: Option<String>,
    /// Edge-list file: first line the vertex count, then one `u v` pair per line.
    #[arg(long, value_name = "PATH")]
    pub edges: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Largest accepted structural-vs-oracle deviation.
    #[arg(long, default_value_t = COMPARE_TOL)]
    pub tol: f64,
    /// Add a generation timestamp to the output.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = ["joined-union", "power", "families", "all"])]
    pub suite: String,
    #[arg(long, default_value_t = 300)]
    pub max_n: u64,
    #[arg(long, default_value_t = COMPARE_TOL)]
    pub tol: f64,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for the randomized joined-union cases.
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// One of p^z, pq, pqr, p^2m1q^2m2.
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 1000)]
    pub bound: u64,
    #[arg(long, default_value_t = COMPARE_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub timestamp: bool,
}

/// A failed invocation: message for standard error.
#[derive(Debug)]
pub struct Failure(pub String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = std::result::Result<u8, Failure>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CmdResult {
    let oracle_max = oracle_max_from_env()?;
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&a, oracle_max, out),
        Command::Verify(a) => cmd_verify(&a, oracle_max, out),
        Command::Report(a) => cmd_report(&a, oracle_max, out),
    }
}

pub fn oracle_max_from_env() -> std::result::Result<u64, Failure> {
    match std::env::var(ORACLE_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure(format!(
                "{ORACLE_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_ORACLE_MAX),
    }
}

fn now() -> Option<u64> {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .ok()
        .map(|d| d.as_secs())
}

enum Source {
    Power(u64),
    Family(Family),
    Edges(PathBuf, Graph),
}

impl Source {
    fn descriptor(&self) -> String {
        match self {
            Source::Power(n) => format!("power:{n}"),
            Source::Family(f) => f.to_string(),
            Source::Edges(p, _) => format!("edges:{}", p.display()),
        }
    }

    fn order(&self) -> usize {
        match self {
            Source::Power(n) => *n as usize,
            Source::Family(f) => f.spec().map(|s| s.total_order()).unwrap_or(0),
            Source::Edges(_, g) => g.order(),
        }
    }

    fn structural(&self) -> specjoin::Result<Spectrum> {
        match self {
            Source::Power(n) => power_spectrum(*n),
            Source::Family(f) => f.spectrum(),
            // A lone regular component over a one-vertex outer graph.
            Source::Edges(_, g) => {
                let spec = JoinedUnionSpec::new(
                    make_complete(1)?,
                    vec![Component::regular_graph(g.clone())?],
                )?;
                structural_spectrum(&spec)
            }
        }
    }

    fn oracle(&self, oracle_max: u64) -> std::result::Result<Spectrum, Failure> {
        let order = self.order() as u64;
        if order > oracle_max {
            return Err(Failure(format!(
                "order {order} exceeds the dense-oracle cutoff {oracle_max} (set {ORACLE_ENV} to raise it)"
            )));
        }
        let g = match self {
            Source::Power(n) => power_graph_direct(*n)?,
            Source::Family(f) => f.spec()?.materialize()?,
            Source::Edges(_, g) => g.clone(),
        };
        Ok(oracle_spectrum(&g)?)
    }
}

fn spectrum_source(a: &SpectrumArgs) -> std::result::Result<Source, Failure> {
    if let Some(n) = a.power_n {
        if n < 2 {
            return Err(Failure("--power-n needs n >= 2".into()));
        }
        return Ok(Source::Power(n));
    }
    if let Some(desc) = &a.family {
        return Ok(Source::Family(desc.parse()?));
    }
    let path = a.edges.clone().expect("clap enforces one source");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    let g = Graph::parse_edge_list(&text)?;
    Ok(Source::Edges(path, g))
}

pub fn build_spectrum_document(
    a: &SpectrumArgs,
    oracle_max: u64,
) -> std::result::Result<SpectrumDocument, Failure> {
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(Failure("--tol must be non-negative".into()));
    }
    let src = spectrum_source(a)?;
    let tolerances = Tolerances {
        compare: a.tol,
        ..Tolerances::default()
    };
    let (spectrum, deviations) = match a.method {
        Method::Structural => (src.structural()?, None),
        Method::Oracle => (src.oracle(oracle_max)?, None),
        Method::Both => {
            let s = src.structural()?;
            let o = src.oracle(oracle_max)?;
            let c = compare_spectra(&s, &o, a.tol)?;
            (
                s,
                Some(Deviations {
                    structural_vs_oracle: c.max_deviation,
                    pass: c.pass,
                }),
            )
        }
    };
    let mut doc = SpectrumDocument::new(
        src.descriptor(),
        a.method,
        &spectrum,
        deviations,
        tolerances,
    );
    if a.timestamp {
        doc.generated_at = now();
    }
    Ok(doc)
}

pub fn cmd_spectrum(a: &SpectrumArgs, oracle_max: u64, out: &mut dyn Write) -> CmdResult {
    let doc = build_spectrum_document(a, oracle_max)?;
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["value", "multiplicity", "source"])?;
            for r in &doc.eigenvalues {
                w.write_record([
                    fmt_value(r.value),
                    r.multiplicity.to_string(),
                    r.source.to_string(),
                ])?;
            }
            out.write_all(&w.into_inner().map_err(|e| Failure(e.to_string()))?)?;
        }
        Format::Table => {
            writeln!(out, "graph   {}", doc.graph_descriptor)?;
            writeln!(out, "order   {}", doc.order)?;
            writeln!(
                out,
                "method  {}",
                serde_json::to_value(doc.method)?
                    .as_str()
                    .unwrap_or_default()
            )?;
            if let Some(t) = doc.generated_at {
                writeln!(out, "time    {t}")?;
            }
            writeln!(out, "{:<20} {:>12}  source", "value", "multiplicity")?;
            for r in &doc.eigenvalues {
                writeln!(
                    out,
                    "{:<20} {:>12}  {}",
                    fmt_value(r.value),
                    r.multiplicity,
                    r.source
                )?;
            }
            if let Some(d) = doc.deviations {
                writeln!(
                    out,
                    "max deviation structural vs oracle {} (tol {:e}) {}",
                    fmt_dev(d.structural_vs_oracle),
                    a.tol,
                    if d.pass { "PASS" } else { "FAIL" }
                )?;
            }
        }
    }
    Ok(match doc.deviations {
        Some(d) if !d.pass => EXIT_DEVIATION,
        _ => EXIT_OK,
    })
}

pub fn cmd_verify(a: &VerifyArgs, oracle_max: u64, out: &mut dyn Write) -> CmdResult {
    let suite: Suite = a.suite.parse()?;
    if a.format == Format::Csv {
        return Err(Failure("verify supports --format table or json".into()));
    }
    let cfg = VerifyConfig {
        max_n: a.max_n,
        tol: a.tol,
        oracle_max,
        seed: a.seed,
        exec: par::with_jobs(a.jobs),
    };
    let report = verify::run(suite, &cfg);
    let failed = report.failed();
    let mut doc = VerifyDocument::from(report);
    if a.timestamp {
        doc.generated_at = now();
    }
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        _ => {
            for c in &doc.cases {
                let dev = c.deviation.map_or("-".to_string(), fmt_dev);
                writeln!(
                    out,
                    "{}  {:<13} {:<10}  {}  {}",
                    c.status, c.suite, dev, c.case, c.detail
                )?;
            }
            writeln!(
                out,
                "summary: {} pass, {} warn, {} fail",
                doc.summary.pass, doc.summary.warn, doc.summary.fail
            )?;
            if let Some(t) = doc.generated_at {
                writeln!(out, "time: {t}")?;
            }
        }
    }
    debug_assert_eq!(failed, doc.cases.iter().any(|c| c.status == Status::Fail));
    Ok(if failed { EXIT_DEVIATION } else { EXIT_OK })
}

pub fn cmd_report(a: &ReportArgs, oracle_max: u64, out: &mut dyn Write) -> CmdResult {
    let family: PowerFamily = a.family.parse()?;
    let report = family_report(family, a.bound, oracle_max, par::with_jobs(a.jobs))?;
    let failed = report.max_oracle_deviation() > a.tol;
    let doc = ReportDocument {
        schema: SCHEMA,
        version: VERSION.to_string(),
        tol: a.tol,
        report,
        generated_at: if a.timestamp { now() } else { None },
    };
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "n",
                "structural_vs_oracle",
                "structural_vs_printed",
                "printed_checked",
                "mismatches",
            ])?;
            for r in &doc.report.rows {
                let opt = |v: Option<f64>| v.map_or(String::new(), fmt_dev);
                w.write_record([
                    r.n.to_string(),
                    opt(r.structural_vs_oracle),
                    opt(r.structural_vs_printed),
                    r.printed_checked.to_string(),
                    r.mismatches.len().to_string(),
                ])?;
            }
            out.write_all(&w.into_inner().map_err(|e| Failure(e.to_string()))?)?;
        }
        Format::Table => {
            writeln!(
                out,
                "family {}  bound {}  oracle cutoff {}",
                family, a.bound, oracle_max
            )?;
            for r in &doc.report.rows {
                let opt = |v: Option<f64>| v.map_or("-".to_string(), fmt_dev);
                writeln!(
                    out,
                    "n={:<6} oracle {:<10} printed {:<10} checked {:<4} mismatches {}",
                    r.n,
                    opt(r.structural_vs_oracle),
                    opt(r.structural_vs_printed),
                    r.printed_checked,
                    r.mismatches.len()
                )?;
                for m in &r.mismatches {
                    writeln!(
                        out,
                        "    {}: printed {} recomputed {}",
                        m.quantity,
                        fmt_value(m.printed),
                        fmt_value(m.recomputed)
                    )?;
                }
            }
            if let Some(t) = doc.generated_at {
                writeln!(out, "time: {t}")?;
            }
        }
    }
    Ok(if failed { EXIT_DEVIATION } else { EXIT_OK })
}
