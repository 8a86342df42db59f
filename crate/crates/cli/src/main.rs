//! `quadlie`: catalogs, verification suites and structure-table export.
//!
//! Exit codes: 0 success, 1 verification or closure failure, 2 usage or I/O.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quadlie::extension::structure_table_over;
use quadlie::fields::Gf2k;
use quadlie::liealg::{build_dl, build_e6, build_g2, select_d, DPolicy, RootOps, Subalgebra};
use quadlie::suites::{self, Fault, VerifyOptions, VerifyReport};
use quadlie::table::{structure_table, Metadata, StructureTable};
use quadlie::weyl::{line_normalizer, order3_in_normalizer, weyl_group};
use quadlie::{Error, Geometry};

#[derive(Parser, Debug)]
#[command(name = "quadlie", version, about = "E6, D4 and G2 in characteristic 2 from the O6-(2) quadrangle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print catalog sizes, or dump one catalog as CSV.
    Catalog {
        #[arg(long, value_enum)]
        dump: Option<Dump>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weyl group order and line normalizers.
    Weyl {
        #[arg(long)]
        order: bool,
        /// Line id whose normalizer N_W(L) is reported.
        #[arg(long, value_name = "LINE")]
        normalizer: Option<usize>,
    },
    /// The 72 root bases.
    Phi {
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        /// Restrict to the named suites (repeatable).
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Flip one entry of one root operator, as `rootbase:row:col`.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Build an algebra and export its structure table.
    Build {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output path; `-` for stdout. Defaults to `<target>.<format>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Scalar field as `2^k`, 1 ≤ k ≤ 8.
    #[arg(long, default_value = "2^1")]
    field: String,
    #[arg(long, default_value_t = 0)]
    line: usize,
    /// `auto` or an index into the sorted order-3 elements of N_W(L).
    #[arg(long, default_value = "auto")]
    d: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dump {
    Points,
    Lines,
    Phi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    E6,
    D4,
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) | Error::ClosureBound { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Catalog { dump, out } => cmd_catalog(dump, out.as_deref()),
        Command::Weyl { order, normalizer } => cmd_weyl(order, normalizer),
        Command::Phi { dump, out } => cmd_phi(dump, out.as_deref()),
        Command::Verify { suites, run, out, inject_fault } => cmd_verify(suites, &run, out.as_deref(), inject_fault),
        Command::Build { target, run, format, out } => cmd_build(target, &run, format, out.as_deref()),
    }
    .map(|()| ExitCode::SUCCESS)
}

fn parse_field(s: &str) -> CliResult<Gf2k> {
    let k = s
        .strip_prefix("2^")
        .and_then(|k| k.parse::<u8>().ok())
        .ok_or_else(|| Failure::Usage(format!("--field expects 2^k, got `{s}`")))?;
    Ok(Gf2k::new(k)?)
}

fn parse_d(s: &str) -> CliResult<DPolicy> {
    if s == "auto" {
        return Ok(DPolicy::Auto);
    }
    s.parse().map(DPolicy::Index).map_err(|_| Failure::Usage(format!("--d expects `auto` or an index, got `{s}`")))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) if p != Path::new("-") => fs::write(p, text)?,
        _ => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_catalog(dump: Option<Dump>, out: Option<&Path>) -> CliResult<()> {
    let geo = Geometry::build()?;
    let cat = &geo.quad;
    let mut s = String::new();
    match dump {
        None => {
            let w = weyl_group(cat)?;
            writeln!(
                s,
                "points={} lines={} exterior={} rootbases={} weyl={}",
                cat.points().len(),
                cat.lines().len(),
                cat.exterior().len(),
                geo.phi.bases().len(),
                w.order()
            )
            .unwrap();
        }
        Some(Dump::Points) => {
            s.push_str("id,code,a,b,c\n");
            for x in cat.point_ids() {
                let v = cat.vector(x);
                let [a, b, c] = v.coords().map(|e| e.code());
                writeln!(s, "{},{},{a},{b},{c}", x.0, v.code()).unwrap();
            }
        }
        Some(Dump::Lines) => {
            s.push_str("id,p0,p1,p2\n");
            for l in cat.lines() {
                let [a, b, c] = l.points.map(|p| p.0);
                writeln!(s, "{},{a},{b},{c}", l.id.0).unwrap();
            }
        }
        Some(Dump::Phi) => s = phi_csv(&geo),
    }
    emit(out, &s)
}

fn phi_csv(geo: &Geometry) -> String {
    let mut s = String::from("id,p0,p1,p2,p3,p4,p5,s_code,dual_id\n");
    for id in geo.phi.ids() {
        let b = geo.phi.get(id);
        let pts: Vec<String> = b.points.iter().map(|p| p.0.to_string()).collect();
        writeln!(s, "{},{},{},{}", id.0, pts.join(","), b.s.code(), geo.phi.dual(id).0).unwrap();
    }
    s
}

fn cmd_weyl(order: bool, normalizer: Option<usize>) -> CliResult<()> {
    let geo = Geometry::build()?;
    let w = weyl_group(&geo.quad)?;
    if order || normalizer.is_none() {
        println!("order={}", w.order());
    }
    if let Some(l) = normalizer {
        let line = geo.quad.line_by_id(l)?.id;
        let n = line_normalizer(&w, &geo, line)?;
        let o3 = order3_in_normalizer(&w, &geo, line)?;
        println!("line={l} normalizer={} order3={}", n.len(), o3.len());
    }
    Ok(())
}

fn cmd_phi(dump: bool, out: Option<&Path>) -> CliResult<()> {
    let geo = Geometry::build()?;
    if dump {
        emit(out, &phi_csv(&geo))
    } else {
        emit(out, &format!("rootbases={} sums={}\n", geo.phi.bases().len(), geo.phi.distinct_sums()))
    }
}

fn cmd_verify(names: Vec<String>, run: &RunArgs, out: Option<&Path>, fault: Option<String>) -> CliResult<()> {
    let opts = VerifyOptions {
        line: run.line,
        d: parse_d(&run.d)?,
        field_degree: parse_field(&run.field)?.degree(),
        suites: (!names.is_empty()).then_some(names),
        fault: fault.as_deref().map(Fault::from_str).transpose()?,
        ..VerifyOptions::default()
    };
    let report = suites::run(&opts)?;
    print_report(&report)?;
    if let Some(p) = out {
        let mut json = serde_json::to_string_pretty(&report).map_err(Error::from)?;
        json.push('\n');
        emit(Some(p), &json)?;
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
        Err(Failure::Verification(format!("suites failed: {}", failed.join(", "))))
    }
}

fn print_report(report: &VerifyReport) -> CliResult<()> {
    let mut out = io::stdout().lock();
    for s in &report.suites {
        let status = if s.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{status} {} ({} checks)", s.name, s.checks.len())?;
        for c in s.checks.iter().filter(|c| !c.passed) {
            writeln!(out, "  {}: expected {}, got {}", c.name, c.expected, c.actual)?;
        }
        for c in &s.counterexamples {
            writeln!(out, "  counterexample: {c}")?;
        }
    }
    writeln!(out, "verify: {}", if report.passed { "passed" } else { "failed" })?;
    Ok(())
}

fn cmd_build(target: Target, run: &RunArgs, format: Format, out: Option<&Path>) -> CliResult<()> {
    let field = parse_field(&run.field)?;
    let policy = parse_d(&run.d)?;
    let geo = Geometry::build()?;
    let roots = RootOps::build(&geo);
    let line = geo.quad.line_by_id(run.line)?;
    let (alg, metadata): (Subalgebra, Option<Metadata>) = match target {
        Target::E6 => (build_e6(&geo, &roots)?, None),
        Target::D4 => (build_dl(&geo, &roots, line)?, Some(Metadata { line: Some(line.id.0), d: None })),
        Target::G2 => {
            let group = weyl_group(&geo.quad)?;
            let d = select_d(&group, &geo, line, policy)?;
            let g2 = build_g2(&geo, &roots, line, &d)?;
            (g2, Some(Metadata { line: Some(line.id.0), d: Some(d.perm().to_vec()) }))
        }
    };
    let mut table = if field.degree() == 1 { structure_table(&alg)? } else { structure_table_over(field, &alg)? };
    table.metadata = metadata;
    let text = match format {
        Format::Json => {
            let json = table.to_json()?;
            StructureTable::from_json(&json)?.verify_against(&alg)?;
            json
        }
        Format::Csv => table.to_csv(),
    };
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    let default_path = PathBuf::from(format!("{}.{ext}", format!("{target:?}").to_lowercase()));
    let path = out.unwrap_or(&default_path);
    if path == Path::new("-") {
        eprintln!("dim={}", alg.dim());
        emit(None, &text)
    } else {
        emit(Some(path), &text)?;
        println!("dim={}", alg.dim());
        println!("wrote {}", path.display());
        Ok(())
    }
}
