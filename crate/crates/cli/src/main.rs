//! `liegen`: build rings from presentations, run the order-`p^8`
//! classification, emit the catalog and test isomorphism.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use liegen::classify::{cross_validate, run_classification, IsoResult};
use liegen::gfplin::is_prime;
use liegen::liering::{class, has_characteristic_p, p_class, RingJson};
use liegen::presentation::{catalog_p8, instantiate, p7_entries, p8_entries, parse, Binding};
use liegen::{Error, LieRing};

#[derive(Parser)]
#[command(name = "liegen", version, about = "Nilpotent Lie rings of maximal class: construction and classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Instantiate a presentation or catalog entry and print the ring as JSON.
    Build(BuildArgs),
    /// Count the maximal-class rings of order p^8 and check the formulas.
    Classify(ClassifyArgs),
    /// Write the order-p^8 catalog, one entry per line.
    EmitDb(EmitArgs),
    /// Decide whether two rings (JSON files) are isomorphic.
    Iso(IsoArgs),
}

fn prime(s: &str) -> Result<u32, String> {
    let p: u32 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !is_prime(p as u64) {
        return Err(format!("{p} is not prime"));
    }
    Ok(p)
}

fn prime_at_least_5(s: &str) -> Result<u32, String> {
    let p = prime(s)?;
    if p < 5 {
        return Err(format!("p must be at least 5, got {p}"));
    }
    Ok(p)
}

#[derive(Args)]
struct BuildArgs {
    /// Catalog name such as 7.623 or 7.650-d12.
    #[arg(long, conflicts_with = "pres", required_unless_present = "pres")]
    id: Option<String>,
    /// Presentation text, e.g. "<a,b | ba, pa, pb, class 1>".
    #[arg(long)]
    pres: Option<String>,
    #[arg(long, value_parser = prime)]
    p: u32,
    /// Values for the free parameters.
    #[arg(long)]
    x: Option<u32>,
    #[arg(long)]
    y: Option<u32>,
    #[arg(long)]
    z: Option<u32>,
    /// Value of w; defaults to the least primitive root.
    #[arg(long)]
    w: Option<u32>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// A prime, at least 5.
    #[arg(long, value_parser = prime_at_least_5)]
    p: u32,
    /// Match every catalog ring against the generated descendants.
    #[arg(long)]
    full_crossval: bool,
    /// Match about N evenly spaced catalog rings.
    #[arg(long, value_name = "N", conflicts_with = "full_crossval")]
    crossval_sample: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Primitive root used for parameter representatives.
    #[arg(long)]
    w: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Text,
}

#[derive(Args)]
struct EmitArgs {
    /// A prime, at least 5.
    #[arg(long, value_parser = prime_at_least_5)]
    p: u32,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    #[arg(long)]
    w: Option<u32>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct IsoArgs {
    /// Ring JSON, or a catalog line with a `ring` field.
    a: PathBuf,
    b: PathBuf,
}

/// Exit codes.
const EXIT_PARSE: u8 = 1;
const EXIT_INCONSISTENT: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_NON_ISO: u8 = 1;
const EXIT_INDETERMINATE: u8 = 2;
const EXIT_OTHER: u8 = 4;

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl ToString) -> Self {
        Failure { code, msg: msg.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            // a closed pipe downstream is not our failure
            io::ErrorKind::BrokenPipe => Failure::new(0, ""),
            _ => Failure::new(EXIT_OTHER, e),
        }
    }
}

fn set_jobs(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::new(EXIT_OTHER, e))?;
    }
    Ok(())
}

fn build(args: &BuildArgs) -> Result<(), Failure> {
    let parse_fail = |e: Error| Failure::new(EXIT_PARSE, e);
    let (pres, params) = match (&args.id, &args.pres) {
        (Some(id), _) => {
            let entry = p7_entries()
                .into_iter()
                .chain(p8_entries())
                .find(|e| &e.library_name == id)
                .ok_or_else(|| parse_fail(Error::UnknownName(id.clone())))?;
            let params = entry.relation.params.clone();
            (entry.presentation, params)
        }
        (None, Some(text)) => {
            let pres = parse(text).map_err(parse_fail)?;
            let params = pres.free_params();
            (pres, params)
        }
        (None, None) => unreachable!("clap requires one of --id, --pres"),
    };
    let mut binding = Binding::new();
    for (c, v) in [('w', args.w), ('x', args.x), ('y', args.y), ('z', args.z)] {
        if let Some(v) = v {
            binding.set(c, v);
        }
    }
    if let Some(&q) = params.iter().find(|&&q| binding.explicit(q).is_none()) {
        return Err(parse_fail(Error::UnboundParameter(q)));
    }
    let ring = instantiate(&pres, args.p, &binding).map_err(|e| Failure::new(EXIT_INCONSISTENT, e))?;
    writeln!(io::stdout(), "{}", ring.to_json())?;
    eprintln!("{}", summary(&ring));
    Ok(())
}

fn summary(ring: &LieRing) -> String {
    let p = ring.p();
    let ch = if has_characteristic_p(ring) { format!("characteristic {p}") } else { "characteristic not p".into() };
    format!("order {p}^{}, class {}, p-class {}, {ch}", ring.dim(), class(ring), p_class(ring))
}

fn classify(args: &ClassifyArgs) -> Result<(), Failure> {
    set_jobs(args.jobs)?;
    let err = |e: Error| Failure::new(EXIT_OTHER, e);
    let cls = run_classification(args.p, args.w).map_err(err)?;
    let mut report = cls.report.clone();
    let sample = match (args.full_crossval, args.crossval_sample) {
        (true, _) => Some(None),
        (false, Some(n)) => Some(Some(n)),
        _ => None,
    };
    if let Some(sample) = sample {
        let catalog = catalog_p8(args.p, args.w).map_err(err)?;
        report.cross_validation = Some(cross_validate(&cls, &catalog, sample).map_err(err)?);
    }
    let json = report.to_json();
    match &args.out {
        Some(path) => fs::write(path, json + "\n")?,
        None => writeln!(io::stdout(), "{json}")?,
    }
    for r in &report.parents {
        eprintln!(
            "{:<6} {:>6} expected {:>6} {}",
            r.id,
            r.count,
            r.expected,
            if r.matched { "ok" } else { "MISMATCH" }
        );
    }
    eprintln!("total  {:>6} expected {:>6}", report.total, report.expected_total);
    let cross_ok = report.cross_validation.as_ref().is_none_or(|c| c.ok);
    if let Some(c) = &report.cross_validation {
        eprintln!(
            "cross-validation: {} of {} checked matched, {} unmatched, {} collisions, {} missed",
            c.matched,
            c.checked,
            c.unmatched.len(),
            c.collisions.len(),
            c.missed.len()
        );
    }
    if report.matched && cross_ok {
        Ok(())
    } else {
        Err(Failure::new(EXIT_MISMATCH, "counts or catalog matching disagree with the formulas"))
    }
}

fn emit_db(args: &EmitArgs) -> Result<(), Failure> {
    set_jobs(args.jobs)?;
    let catalog = catalog_p8(args.p, args.w).map_err(|e| Failure::new(EXIT_OTHER, e))?;
    let mut out: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(BufWriter::new(fs::File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for c in &catalog {
        match args.format {
            Format::Jsonl => writeln!(out, "{}", c.to_json_line())?,
            Format::Text => writeln!(out, "{}", c.to_text())?,
        }
    }
    out.flush()?;
    eprintln!("{} entries", catalog.len());
    Ok(())
}

fn read_ring(path: &Path) -> Result<LieRing, Failure> {
    let fail = |m: String| Failure::new(EXIT_OTHER, format!("{}: {m}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| fail(e.to_string()))?;
    let mut v: serde_json::Value = serde_json::from_str(text.trim()).map_err(|e| fail(e.to_string()))?;
    if let Some(r) = v.get_mut("ring") {
        v = r.take();
    }
    let j: RingJson = serde_json::from_value(v).map_err(|e| fail(e.to_string()))?;
    j.to_ring().map_err(|e| fail(e.to_string()))
}

fn iso(args: &IsoArgs) -> Result<(), Failure> {
    let a = read_ring(&args.a)?;
    let b = read_ring(&args.b)?;
    match liegen::classify::is_isomorphic(&a, &b).map_err(|e| Failure::new(EXIT_OTHER, e))? {
        IsoResult::Isomorphic(images) => {
            let mut out = io::stdout().lock();
            writeln!(out, "isomorphic")?;
            writeln!(out, "{}", serde_json::json!({ "images": images }))?;
            Ok(())
        }
        IsoResult::NonIsomorphic(why) => {
            println!("non-isomorphic: {why}");
            Err(Failure { code: EXIT_NON_ISO, msg: String::new() })
        }
        IsoResult::Indeterminate => {
            println!("indeterminate");
            Err(Failure::new(EXIT_INDETERMINATE, "search budget exhausted"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::Build(a) => build(a),
        Command::Classify(a) => classify(a),
        Command::EmitDb(a) => emit_db(a),
        Command::Iso(a) => iso(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}
