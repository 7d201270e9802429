//! Command-line front end.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ex::{ex_infty_truncated, ex_iter, ex_iter_map};
use crate::homotopy::{is_di_weak_equivalence, pi0, pi_n, BasedObject};
use crate::io::{self, Document};
use crate::kan::{is_kan_complex, is_kan_fibration, is_trivial_fibration, LiftReport, Verdict};
use crate::report::{digest_inputs, Report};
use crate::site::local::{
    is_local_epi, is_local_kan_fibration, is_local_trivial_fibration, is_local_weak_equivalence, LocalLiftReport,
};
use crate::site::presheaf::SPMap;
use crate::site::Site;
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

#[derive(Debug, Parser)]
#[command(name = "kanset", version, about = "Finite simplicial sets and simplicial presheaves: lifting checks, Ex, homotopy groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Add wall-clock time to the report (makes it nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a lifting or weak-equivalence check.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
        /// Site document for the local checks.
        #[arg(long)]
        site: Option<PathBuf>,
    },
    /// Path components.
    Pi0 {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Homotopy classes of n-spheres at a basepoint.
    Pi {
        #[arg(long)]
        n: usize,
        /// Vertex name or index; the name of a degenerate edge selects its vertex.
        #[arg(long)]
        base: String,
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Cell counts of the stages X, Ex X, ..., Ex^k X.
    Ex {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        stages: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// Load a document and run its validation.
    Validate {
        file: PathBuf,
        #[arg(long)]
        site: Option<PathBuf>,
    },
    /// Write the example corpus.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Kan,
    Fib,
    Trivfib,
    We,
    LocalFib,
    LocalTrivfib,
    LocalWe,
    LocalEpi,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Opts {
    /// Degree bound. Defaults to the top generator degree + 2 for
    /// presentations and to the stored bound for truncated documents.
    #[arg(long)]
    pub bound: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub ex_stages: usize,
}

/// Inputs read for a command, kept for the digest.
struct Inputs {
    bytes: Vec<Vec<u8>>,
}

impl Inputs {
    fn load(&mut self, path: &PathBuf) -> Result<Document> {
        let bytes = fs::read(path)?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::InvalidArgument(format!("{} is not UTF-8", path.display())))?;
        self.bytes.push(bytes);
        io::parse(&text)
    }

    fn site(&mut self, path: &Option<PathBuf>) -> Result<Site> {
        let path = path.as_ref().ok_or_else(|| Error::InvalidArgument("--site is required".into()))?;
        match self.load(path)? {
            Document::Site(s) => Ok(s),
            d => Err(wrong_kind("site", &d)),
        }
    }
}

fn wrong_kind(expected: &str, d: &Document) -> Error {
    Error::InvalidArgument(format!("expected a {expected} document, found `{}`", d.kind()))
}

/// The bound a check runs at, and whether a pass must be downgraded
/// because the requested bound exceeds what the input supports.
fn effective_bound(requested: Option<usize>, available: usize) -> (usize, bool) {
    match requested {
        Some(b) if b > available => (available, true),
        Some(b) => (b, false),
        None => (available, false),
    }
}

fn default_bound(top: Option<usize>) -> usize {
    top.unwrap_or(0) + 2
}

fn load_sset(inputs: &mut Inputs, file: &PathBuf, bound: Option<usize>) -> Result<(Arc<TruncatedSSet>, usize, bool)> {
    match inputs.load(file)? {
        Document::Presentation(x) => {
            let b = bound.unwrap_or_else(|| default_bound(x.dimension()));
            Ok((Arc::new(x.truncate(b)), b, false))
        }
        Document::SSet(x) => {
            let (b, clamped) = effective_bound(bound, x.bound());
            let x = if b == x.bound() { x } else { x.truncate_to(b)? };
            Ok((Arc::new(x), b, clamped))
        }
        d => Err(wrong_kind("presentation or sset", &d)),
    }
}

fn load_map(inputs: &mut Inputs, file: &PathBuf, bound: Option<usize>) -> Result<(SMap, usize, bool)> {
    match inputs.load(file)? {
        Document::PresentationMap(m) => {
            let top = m.source.dimension().max(m.target.dimension());
            let b = bound.unwrap_or_else(|| default_bound(top));
            Ok((m.to_smap(b)?, b, false))
        }
        Document::Map(f) => {
            let (b, clamped) = effective_bound(bound, f.source().bound());
            let f = if b == f.source().bound() { f } else { f.truncate_to(b)? };
            Ok((f, b, clamped))
        }
        d => Err(wrong_kind("presentation-map or map", &d)),
    }
}

fn load_presheaf_map(inputs: &mut Inputs, file: &PathBuf, site: &Site, bound: Option<usize>) -> Result<(SPMap, usize, bool)> {
    let f = match inputs.load(file)? {
        Document::PresheafMap(doc) => doc.resolve(&site.category)?,
        d => return Err(wrong_kind("presheaf-map", &d)),
    };
    let (b, clamped) = effective_bound(bound, f.source.bound());
    Ok((f, b, clamped))
}

fn downgrade(v: Verdict, clamped: bool) -> Verdict {
    if clamped && v == Verdict::Pass {
        Verdict::Inconclusive
    } else {
        v
    }
}

/// Resolves `--base`: a vertex name, a vertex index, or the name of a
/// degenerate edge (selecting its vertex).
fn resolve_base(x: &TruncatedSSet, base: &str) -> Result<usize> {
    if let Some(v) = x.find_cell(0, base) {
        return Ok(v);
    }
    if let Ok(v) = base.parse::<usize>() {
        if v < x.count(0) {
            return Ok(v);
        }
    }
    if x.bound() >= 1 {
        if let Some(e) = x.find_cell(1, base) {
            let v = x.face(1, 0, e);
            if x.degen(0, 0, v) == e {
                return Ok(v);
            }
        }
    }
    Err(Error::InvalidArgument(format!("`{base}` does not name a vertex")))
}

struct Outcome {
    verdict: Option<Verdict>,
    bound: Option<usize>,
    ex_stages: Option<usize>,
    result: Value,
}

fn lift(r: LiftReport, clamped: bool, bound: usize, ex_stages: Option<usize>) -> Outcome {
    Outcome { verdict: Some(downgrade(r.verdict, clamped)), bound: Some(bound), ex_stages, result: json!(r) }
}

fn local(r: LocalLiftReport, clamped: bool, bound: usize) -> Outcome {
    let ex_stages = r.ex_stages;
    Outcome { verdict: Some(downgrade(r.verdict, clamped)), bound: Some(bound), ex_stages, result: json!(r) }
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> Result<Outcome> {
    Ok(match cmd {
        Command::Check { kind, file, opts, site } => match kind {
            CheckKind::Kan => {
                let (x, b, clamped) = load_sset(inputs, file, opts.bound)?;
                lift(is_kan_complex(&x, b)?, clamped, b, None)
            }
            CheckKind::Fib | CheckKind::Trivfib => {
                let (f, b, clamped) = load_map(inputs, file, opts.bound)?;
                let r = if *kind == CheckKind::Fib { is_kan_fibration(&f, b)? } else { is_trivial_fibration(&f, b)? };
                lift(r, clamped, b, None)
            }
            CheckKind::We => {
                let (f, b, clamped) = load_map(inputs, file, opts.bound)?;
                if b == 0 {
                    return Err(Error::InsufficientBound { what: "DI check".into(), needed: 1, bound: 0 });
                }
                let f = if opts.ex_stages == 0 {
                    f
                } else {
                    let xs = ex_iter(f.source(), opts.ex_stages, b)?;
                    let ys = ex_iter(f.target(), opts.ex_stages, b)?;
                    ex_iter_map(&f, &xs, &ys)?.pop().unwrap()
                };
                lift(is_di_weak_equivalence(&f, b - 1)?, clamped, b, Some(opts.ex_stages))
            }
            CheckKind::LocalFib | CheckKind::LocalTrivfib => {
                let site = inputs.site(site)?;
                let (f, b, clamped) = load_presheaf_map(inputs, file, &site, opts.bound)?;
                let r = if *kind == CheckKind::LocalFib {
                    is_local_kan_fibration(&f, &site, b)?
                } else {
                    is_local_trivial_fibration(&f, &site, b)?
                };
                local(r, clamped, b)
            }
            CheckKind::LocalWe => {
                let site = inputs.site(site)?;
                let (f, b, clamped) = load_presheaf_map(inputs, file, &site, opts.bound)?;
                if b == 0 {
                    return Err(Error::InsufficientBound { what: "local DI check".into(), needed: 1, bound: 0 });
                }
                local(is_local_weak_equivalence(&f, &site, b - 1, opts.ex_stages)?, clamped, b)
            }
            CheckKind::LocalEpi => {
                let site = inputs.site(site)?;
                let f = match inputs.load(file)? {
                    Document::SetPresheafMap(doc) => doc.resolve(&site.category)?,
                    d => return Err(wrong_kind("set-presheaf-map", &d)),
                };
                let r = is_local_epi(&f, &site)?;
                Outcome { verdict: Some(r.verdict), bound: None, ex_stages: None, result: json!(r) }
            }
        },
        Command::Pi0 { file, opts } => {
            let (x, b, _) = load_sset(inputs, file, opts.bound)?;
            let p = pi0(&x)?;
            let names: Vec<Vec<&str>> = p.classes.iter().map(|c| c.iter().map(|&v| x.name(0, v)).collect()).collect();
            Outcome {
                verdict: None,
                bound: Some(b),
                ex_stages: None,
                result: json!({"count": p.len(), "classes": names}),
            }
        }
        Command::Pi { n, base, file, opts } => {
            let (x, b, _) = load_sset(inputs, file, opts.bound)?;
            let v = resolve_base(&x, base)?;
            let p = pi_n(&BasedObject::new(x.clone(), v)?, *n)?;
            Outcome {
                verdict: None,
                bound: Some(b),
                ex_stages: None,
                result: json!({"n": n, "base": x.name(0, v), "count": p.len(), "classes": p.classes}),
            }
        }
        Command::Ex { file, stages, opts } => {
            let (x, b, _) = load_sset(inputs, file, opts.bound)?;
            let r = ex_infty_truncated(&x, *stages, b)?;
            Outcome { verdict: None, bound: Some(b), ex_stages: Some(*stages), result: json!(r.report) }
        }
        Command::Validate { file, site } => {
            let doc = inputs.load(file)?;
            let needs_site = matches!(doc, Document::Presheaf(_) | Document::PresheafMap(_) | Document::SetPresheafMap(_));
            if needs_site {
                let site = inputs.site(site)?;
                match doc.clone() {
                    Document::Presheaf(d) => drop(d.resolve(&site.category)?),
                    Document::PresheafMap(d) => drop(d.resolve(&site.category)?),
                    Document::SetPresheafMap(d) => drop(d.resolve(&site.category)?),
                    _ => unreachable!(),
                }
            }
            Outcome { verdict: Some(Verdict::Pass), bound: None, ex_stages: None, result: json!({"kind": doc.kind()}) }
        }
        Command::Corpus { out } => {
            let files = crate::corpus::write(out)?;
            Outcome { verdict: None, bound: None, ex_stages: None, result: json!({"files": files}) }
        }
    })
}

/// Runs a parsed command. `argv` (without the program name) is echoed
/// into the report.
pub fn run(cli: &Cli, argv: &[String]) -> Result<Report> {
    let start = Instant::now();
    let mut inputs = Inputs { bytes: Vec::new() };
    let out = dispatch(&cli.command, &mut inputs)?;
    Ok(Report {
        command: argv.iter().skip(1).cloned().collect(),
        inputs_digest: digest_inputs(inputs.bytes.iter().map(|b| b.as_slice())),
        verdict: out.verdict,
        bound: out.bound,
        ex_stages: out.ex_stages,
        result: out.result,
        timing_ms: cli.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Parses, runs and prints; returns the process exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli, &argv) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
