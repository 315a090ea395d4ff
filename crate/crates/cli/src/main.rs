use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mds_census::census::{self, CensusOptions, CensusResult, ClassId, Method};
use mds_census::field::parse_hex_u32;
use mds_census::io::MatrixFile;
use mds_census::parallel::Parallelism;
use mds_census::predicates::{check_property, PredicateReport, Property};
use mds_census::tables::{emit_paper_tables, Format, TableId};
use mds_census::theorems::{self, VerificationReport, VerifyOptions};
use mds_census::{Error, FieldSpec};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "mdscensus", version, about = "MDS and NMDS matrix census over GF(2^r)")]
struct Cli {
    /// Field degree r (GF(2^r), 2 <= r <= 16)
    #[arg(long, global = true)]
    r: Option<u32>,

    /// Reduction polynomial, hex (0x13) or decimal; defaults to the smallest irreducible
    #[arg(long, global = true, value_parser = parse_poly)]
    poly: Option<u32>,

    /// Worker threads, 0 = one per core
    #[arg(long, global = true, env = "MDSCENSUS_JOBS", default_value_t = 0)]
    jobs: usize,

    /// Seed for sampled scans
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Permit brute force beyond the default budget (r = 7, 8)
    #[arg(long, global = true)]
    allow_long: bool,

    /// Treat skipped table cells as a budget failure
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summarize the field: polynomial, generator, group order
    Field,
    /// Evaluate matrix properties for a JSON matrix file
    Check {
        file: PathBuf,
        /// Comma-separated: mds, nmds, involutory, orthogonal, nonsingular
        #[arg(long, value_delimiter = ',', default_value = "mds")]
        props: Vec<String>,
    },
    /// Count a matrix class
    Census {
        class: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
        method: MethodArg,
    },
    /// Verify a structural claim, or `all`
    Verify {
        claim: String,
        /// Samples for sampled scans
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Emit the Hadamard / circulant count tables
    Tables {
        /// 1 = Hadamard counts, 2 = Hadamard vs circulant; omit for all columns
        #[arg(long)]
        table: Option<u32>,
        #[arg(long, default_value_t = 3)]
        r_min: u32,
        #[arg(long, default_value_t = 8)]
        r_max: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    #[value(alias = "md")]
    Markdown,
    Text,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Markdown => Format::Markdown,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Brute,
    Formula,
    Both,
}

fn parse_poly(s: &str) -> Result<u32, String> {
    parse_hex_u32(s).map_err(|e| e.to_string())
}

/// A failure with its exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let (out, code) = match &cli.command {
        Command::Field => cmd_field(cli)?,
        Command::Check { file, props } => cmd_check(cli, file, props)?,
        Command::Census { class, method } => cmd_census(cli, class, *method)?,
        Command::Verify { claim, samples } => cmd_verify(cli, claim, *samples)?,
        Command::Tables { table, r_min, r_max } => cmd_tables(cli, *table, *r_min, *r_max)?,
    };
    print!("{out}");
    Ok(code)
}

fn field_from(cli: &Cli) -> Result<FieldSpec, Failure> {
    let r = cli.r.ok_or_else(|| usage("--r is required"))?;
    Ok(FieldSpec::new(r, cli.poly)?)
}

fn parallelism(cli: &Cli) -> Parallelism {
    Parallelism::with_jobs(cli.jobs)
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct FieldSummary {
    r: u32,
    poly: String,
    order: usize,
    group_order: usize,
    generator: mds_census::Elem,
    primitive_poly: bool,
}

fn cmd_field(cli: &Cli) -> Result<(String, u8), Failure> {
    let f = field_from(cli)?;
    let s = FieldSummary {
        r: f.degree(),
        poly: format!("0x{:X}", f.poly()),
        order: f.order(),
        group_order: f.group_order(),
        generator: f.generator(),
        primitive_poly: f.generator() == f.root(),
    };
    let out = match cli.format {
        OutputFormat::Json => json_line(&s),
        OutputFormat::Csv => format!(
            "r,poly,order,group_order,generator,primitive_poly\n{},{},{},{},{},{}\n",
            s.r, s.poly, s.order, s.group_order, s.generator, s.primitive_poly
        ),
        OutputFormat::Markdown => format!(
            "| r | poly | order | group order | generator | primitive |\n|---|---|---|---|---|---|\n| {} | {} | {} | {} | {} | {} |\n",
            s.r, s.poly, s.order, s.group_order, s.generator, s.primitive_poly
        ),
        OutputFormat::Text => format!(
            "GF(2^{}) poly {}\norder {}\nmultiplicative group order {}\ngenerator {}{}\n",
            s.r,
            s.poly,
            s.order,
            s.group_order,
            s.generator,
            if s.primitive_poly { " (primitive polynomial)" } else { "" }
        ),
    };
    Ok((out, 0))
}

fn cmd_check(cli: &Cli, path: &PathBuf, props: &[String]) -> Result<(String, u8), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let file = MatrixFile::parse(&text)?;
    let field = file.resolve_field(cli.r, cli.poly)?;
    let m = file.build(&field)?;
    let mut reports: Vec<PredicateReport> = Vec::new();
    for p in props {
        let prop = Property::parse(p.trim()).ok_or_else(|| usage(format!("unknown property {p:?}")))?;
        reports.push(check_property(&m, prop)?);
    }
    let code = if reports.iter().all(|r| r.holds) { 0 } else { EXIT_FAILED };
    let mut out = String::new();
    match cli.format {
        OutputFormat::Json => {
            for r in &reports {
                out.push_str(&json_line(r));
            }
        }
        OutputFormat::Csv => {
            out.push_str("property,holds,witness_rows,witness_cols,detail\n");
            for r in &reports {
                let (rows, cols) = witness_cells(r);
                let _ = writeln!(out, "{},{},{},{},{}", r.property.name(), r.holds, rows, cols, r.detail.clone().unwrap_or_default());
            }
        }
        OutputFormat::Markdown => {
            out.push_str("| property | holds | witness rows | witness cols | detail |\n|---|---|---|---|---|\n");
            for r in &reports {
                let (rows, cols) = witness_cells(r);
                let _ = writeln!(out, "| {} | {} | {} | {} | {} |", r.property.name(), r.holds, rows, cols, r.detail.clone().unwrap_or_default());
            }
        }
        OutputFormat::Text => {
            for r in &reports {
                let _ = write!(out, "{}: {}", r.property.name(), if r.holds { "holds" } else { "fails" });
                if let Some(w) = &r.witness {
                    let _ = write!(out, " (rows {:?}, cols {:?})", w.rows, w.cols);
                }
                if let Some(d) = &r.detail {
                    let _ = write!(out, " {d}");
                }
                out.push('\n');
            }
        }
    }
    Ok((out, code))
}

fn witness_cells(r: &PredicateReport) -> (String, String) {
    let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    match &r.witness {
        Some(w) => (join(&w.rows), join(&w.cols)),
        None => (String::new(), String::new()),
    }
}

fn cmd_census(cli: &Cli, class: &str, method: MethodArg) -> Result<(String, u8), Failure> {
    let class = ClassId::parse(class).ok_or_else(|| {
        let names: Vec<&str> = ClassId::ALL.iter().map(|c| c.name()).collect();
        usage(format!("unknown class {class:?}; expected one of {}", names.join(", ")))
    })?;
    let field = field_from(cli)?;
    let opts = CensusOptions { parallelism: parallelism(cli), allow_long: cli.allow_long };
    let methods: &[Method] = match method {
        MethodArg::Brute => &[Method::Brute],
        MethodArg::Formula => &[Method::Formula],
        MethodArg::Both => &[Method::Formula, Method::Brute],
    };
    let mut results = Vec::new();
    for &m in methods {
        results.push(census::run_census(class, &field, m, opts)?);
    }
    let agree = results.windows(2).all(|w| w[0].count == w[1].count);
    let mut out = render_census(&results, cli.format);
    if !agree {
        out.push_str(&format!("# mismatch: formula {} vs brute {}\n", results[0].count, results[1].count));
    }
    Ok((out, if agree { 0 } else { EXIT_FAILED }))
}

fn render_census(results: &[CensusResult], format: OutputFormat) -> String {
    let mut out = String::new();
    let cand = |r: &CensusResult| r.candidates.map(|c| c.to_string()).unwrap_or_default();
    match format {
        OutputFormat::Json => {
            for r in results {
                out.push_str(&json_line(r));
            }
        }
        OutputFormat::Csv => {
            out.push_str("class_id,r,poly,method,count,elapsed_ms,partitions,candidates\n");
            for r in results {
                let _ = writeln!(out, "{},{},0x{:X},{},{},{},{},{}", r.class_id, r.r, r.poly, r.method, r.count, r.elapsed_ms, r.partitions, cand(r));
            }
        }
        OutputFormat::Markdown => {
            out.push_str("| class | r | poly | method | count | elapsed ms | candidates |\n|---|---|---|---|---|---|---|\n");
            for r in results {
                let _ = writeln!(out, "| {} | {} | 0x{:X} | {} | {} | {} | {} |", r.class_id, r.r, r.poly, r.method, r.count, r.elapsed_ms, cand(r));
            }
        }
        OutputFormat::Text => {
            for r in results {
                let _ = write!(out, "{} r={} poly=0x{:X} {}: {}", r.class_id, r.r, r.poly, r.method, r.count);
                if let Some(c) = r.candidates {
                    let _ = write!(out, " of {c} candidates");
                }
                let _ = writeln!(out, " ({} ms, {} partitions)", r.elapsed_ms, r.partitions);
            }
        }
    }
    out
}

fn cmd_verify(cli: &Cli, claim: &str, samples: u64) -> Result<(String, u8), Failure> {
    let claims: Vec<&str> = if claim == "all" {
        theorems::CLAIMS.to_vec()
    } else if theorems::CLAIMS.contains(&claim) {
        vec![claim]
    } else {
        return Err(usage(format!("unknown claim {claim:?}; expected all or one of {}", theorems::CLAIMS.join(", "))));
    };
    let opts = VerifyOptions { parallelism: parallelism(cli), allow_long: cli.allow_long, seed: cli.seed, samples };
    let mut reports: Vec<VerificationReport> = Vec::new();
    for c in claims {
        let fields: Vec<FieldSpec> = match cli.r {
            Some(_) => vec![field_from(cli)?],
            None => theorems::default_scope(c)
                .expect("registered claim")
                .map(|r| FieldSpec::new(r, cli.poly))
                .collect::<Result<_, _>>()?,
        };
        for f in &fields {
            reports.extend(theorems::verify_claim(c, f, opts)?);
        }
    }
    let code = if reports.iter().all(|r| r.passed()) { 0 } else { EXIT_FAILED };
    Ok((render_reports(&reports, cli.format), code))
}

fn render_reports(reports: &[VerificationReport], format: OutputFormat) -> String {
    let mut out = String::new();
    let scope = |r: &VerificationReport| {
        let mut s = r.mode.clone();
        for key in ["order", "block_order"] {
            if let Some(v) = r.details.get(key) {
                let _ = write!(s, " {key}={v}");
            }
        }
        if let Some(seed) = r.seed {
            let _ = write!(s, " seed={seed}");
        }
        s
    };
    match format {
        OutputFormat::Json => {
            for r in reports {
                out.push_str(&json_line(r));
            }
        }
        OutputFormat::Csv => {
            out.push_str("claim,r,poly,scope,scanned,counterexamples,verdict\n");
            for r in reports {
                let verdict = if r.passed() { "pass" } else { "fail" };
                let _ = writeln!(out, "{},{},0x{:X},{},{},{},{}", r.claim, r.field.r, r.field.poly, scope(r), r.scanned, r.counterexamples.len(), verdict);
            }
        }
        OutputFormat::Markdown => {
            out.push_str("| claim | r | poly | scope | scanned | counterexamples | verdict |\n|---|---|---|---|---|---|---|\n");
            for r in reports {
                let verdict = if r.passed() { "pass" } else { "fail" };
                let _ = writeln!(out, "| {} | {} | 0x{:X} | {} | {} | {} | {} |", r.claim, r.field.r, r.field.poly, scope(r), r.scanned, r.counterexamples.len(), verdict);
            }
        }
        OutputFormat::Text => {
            for r in reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{verdict} {} r={} poly=0x{:X} [{}] scanned={} counterexamples={}",
                    r.claim,
                    r.field.r,
                    r.field.poly,
                    scope(r),
                    r.scanned,
                    r.counterexamples.len()
                );
                for c in r.counterexamples.iter().take(3) {
                    let _ = writeln!(out, "  {c}");
                }
            }
        }
    }
    out
}

fn cmd_tables(cli: &Cli, table: Option<u32>, r_min: u32, r_max: u32) -> Result<(String, u8), Failure> {
    let id = TableId::from_number(table)?;
    let opts = CensusOptions { parallelism: parallelism(cli), allow_long: cli.allow_long };
    let doc = emit_paper_tables(id, r_min, r_max, opts)?;
    let code = if cli.strict && doc.has_skipped() { EXIT_BUDGET } else { 0 };
    Ok((doc.render(cli.format.into()), code))
}
