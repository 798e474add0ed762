use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use artin_lab::complex::build_coxeter_complex;
use artin_lab::coxeter::{GroupTable, DEFAULT_CAP};
use artin_lab::diagram::{classify_family, is_ABI, is_spherical, CoxeterDiagram};
use artin_lab::taxonomy::{atomicity, enumerate_like, find_robust_core, reduction_certificate, Atomicity, LikeQuery};
use artin_lab_cli::report::{workers_from_env, Ctx, DEFAULT_SEED, WORKERS_ENV};
use artin_lab_cli::suites;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "artin-lab", version, about = "Finite checks on Coxeter diagrams, complexes, posets and bi-Helly graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Family names and shape of a diagram.
    Classify { diagram: PathBuf },
    /// Robust C~-cores for every atomic B- or D-like subdiagram.
    Cores { diagram: PathBuf },
    /// Reduction certificate of a forest diagram.
    Certificate { diagram: PathBuf },
    /// Coxeter complex construction.
    Complex {
        #[command(subcommand)]
        action: ComplexCommand,
    },
    /// Run a verification suite and emit a JSON report.
    #[command(after_help = format!("The worker count is read from {WORKERS_ENV}."))]
    Verify {
        #[arg(value_parser = suites::SUITES)]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Search cap (group elements, or maximal families for bi-Helly checks).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time per case; the report is then no longer byte-stable.
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Build the Coxeter complex of a spherical diagram and dump it.
    Build {
        diagram: PathBuf,
        /// Keep only these vertex types, by diagram name.
        #[arg(long, value_delimiter = ',')]
        relative: Option<Vec<String>>,
        /// Subdivide with the given kind; needs --layout.
        #[arg(long, requires = "layout")]
        subdivide: Option<Kind>,
        /// Type names in layout order (b1, b2, ... for B; a1, a2, a3, ... for D).
        #[arg(long, value_delimiter = ',')]
        layout: Option<Vec<String>>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "B")]
    B,
    #[value(name = "D")]
    D,
}

fn read_diagram(path: &Path) -> Result<CoxeterDiagram> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(CoxeterDiagram::parse(&text)?)
}

fn classify(d: &CoxeterDiagram) -> Value {
    let c = classify_family(d);
    let abi = is_ABI(d);
    json!({
        "names": c.tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "reduction_family": c.reduction_family().map(|t| t.to_string()),
        "spherical": is_spherical(d),
        "abi": abi.holds,
        "abi_witness": abi.witness.map(|w| w.iter().map(|&i| d.name(i).to_string()).collect::<Vec<_>>()),
        "shape": d.shape(),
    })
}

fn cores(d: &CoxeterDiagram) -> Result<Value> {
    let mut subs = enumerate_like(d, LikeQuery::B);
    subs.extend(enumerate_like(d, LikeQuery::D));
    let mut rows = Vec::new();
    for sub in subs {
        if atomicity(d, &sub)? != Atomicity::Atomic {
            continue;
        }
        let result = match find_robust_core(d, &sub) {
            Ok(c) => serde_json::to_value(c)?,
            Err(e) => json!({ "error": e.to_string() }),
        };
        rows.push(json!({ "subdiagram": sub.name(), "vertices": sub.vertices, "core": result }));
    }
    Ok(Value::Array(rows))
}

fn type_ids(names: &[String], lookup: impl Fn(&str) -> Option<usize>) -> Result<Vec<usize>> {
    names.iter().map(|n| lookup(n).with_context(|| format!("unknown type {n:?}"))).collect()
}

fn build(path: &Path, relative: Option<Vec<String>>, subdivide: Option<Kind>, layout: Option<Vec<String>>, cap: usize) -> Result<Value> {
    let d = read_diagram(path)?;
    let mut c = build_coxeter_complex(&GroupTable::enumerate(&d, cap)?)?;
    if let Some(keep) = relative {
        let ids = type_ids(&keep, |n| c.type_index(n))?;
        c = c.relative_complex(&ids)?;
    }
    let Some(kind) = subdivide else { return Ok(c.to_value()) };
    let ids = type_ids(&layout.unwrap_or_default(), |n| c.type_index(n))?;
    let sub = match kind {
        Kind::B => c.subdivide_b(&ids)?,
        Kind::D => c.subdivide_d(&ids)?,
    };
    Ok(sub.to_value())
}

fn print(v: &Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Classify { diagram } => print(&classify(&read_diagram(&diagram)?))?,
        Command::Cores { diagram } => print(&cores(&read_diagram(&diagram)?)?)?,
        Command::Certificate { diagram } => print(&serde_json::to_value(reduction_certificate(&read_diagram(&diagram)?)?)?)?,
        Command::Complex { action: ComplexCommand::Build { diagram, relative, subdivide, layout, cap } } => {
            print(&build(&diagram, relative, subdivide, layout, cap)?)?
        }
        Command::Verify { suite, seed, cap, out, timings } => {
            let report = suites::run(&suite, Ctx { seed, cap }, workers_from_env(), timings)?;
            let text = report.to_json();
            match out {
                Some(p) => std::fs::write(&p, text + "\n").with_context(|| format!("cannot write {}", p.display()))?,
                None => println!("{text}"),
            }
            let counts: Vec<String> = report.summary.iter().map(|(k, v)| format!("{}={v}", serde_json::to_value(k).unwrap().as_str().unwrap())).collect();
            eprintln!("{suite}: {} cases, {}", report.cases.len(), counts.join(" "));
            for c in report.cases.iter().filter(|c| c.verdict.is_bad()) {
                eprintln!("  {:?} {}", c.verdict, c.id);
            }
            return Ok(report.ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
