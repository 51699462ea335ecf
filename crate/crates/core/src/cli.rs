//! The `oaf` command line. Every command prints tab-separated output and
//! exits with 0 (success), 1 (check failures) or 2 (unusable input: format
//! errors, unknown identifiers, empty output).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::importers::{self, ImportError, ImportReport};
use crate::kernel::{
    check_theory_with, flatten, CheckReport, DeclKind, Ident, KernelConfig, KernelError, Library,
    DEFAULT_REDUCTION_BUDGET,
};
use crate::morphisms::{self, MorphismError};
use crate::omdoc::{self, OmdocError};
use crate::ontology::{self, ExtractOptions, OntologyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    ToyholJson,
    ToysetXml,
    Omdoc,
}

impl Format {
    /// `.omdoc.xml` before `.xml`; `.json` is toyhol.
    pub fn from_path(path: &Path) -> Option<Format> {
        let name = path.file_name()?.to_str()?.to_ascii_lowercase();
        if name.ends_with(omdoc::FILE_EXTENSION) {
            Some(Format::Omdoc)
        } else if name.ends_with(".xml") {
            Some(Format::ToysetXml)
        } else if name.ends_with(".json") {
            Some(Format::ToyholJson)
        } else {
            None
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "oaf",
    version,
    about = "Proof-library import, checking and export"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Input format; guessed from the file extension when absent
    #[arg(long, global = true, value_enum, env = "OAF_FORMAT")]
    pub format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(short, long, global = true, env = "OAF_OUTPUT")]
    pub output: Option<PathBuf>,
    /// Eta-conversion in the kernel
    #[arg(long, global = true, env = "OAF_ETA", default_value_t = true, action = ArgAction::Set)]
    pub eta: bool,
    /// Count constants in proof terms as RDF uses
    #[arg(long, global = true, env = "OAF_INCLUDE_PROOF_USES")]
    pub include_proof_uses: bool,
    /// Reduction steps allowed per normalization
    #[arg(long, global = true, env = "OAF_REDUCTION_BUDGET", default_value_t = DEFAULT_REDUCTION_BUDGET)]
    pub reduction_budget: usize,
    /// Directory of prover sources used to recover missing source references
    #[arg(long, global = true, env = "OAF_SOURCE_DIR")]
    pub source_dir: Option<PathBuf>,
    /// Accept inputs that yield no declarations
    #[arg(long, global = true, env = "OAF_ALLOW_EMPTY")]
    pub allow_empty: bool,
}

impl GlobalOpts {
    pub fn kernel_config(&self) -> KernelConfig {
        KernelConfig {
            eta: self.eta,
            reduction_budget: self.reduction_budget,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every theory and print per-theory counts
    Check {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Import a prover export, report dropped declarations, write OMDoc
    Import { input: PathBuf },
    /// Write a library as OMDoc
    ExportOmdoc { input: PathBuf },
    /// Write the RDF abstraction as N-Triples
    ExportRdf {
        input: PathBuf,
        /// Record theories as unchecked instead of running the kernel
        #[arg(long)]
        skip_check: bool,
    },
    /// Everything an identifier transitively depends on
    Deps { input: PathBuf, ident: String },
    /// Everything that transitively depends on an identifier
    UsedBy {
        input: PathBuf,
        ident: String,
        #[arg(long)]
        kind: Option<String>,
    },
    /// Translate a theorem statement along a morphism
    Translate {
        input: PathBuf,
        morphism: String,
        theorem: String,
    },
    /// Library statistics, one `key<TAB>value` per line
    Stats { input: PathBuf },
    /// Markdown catalog of the built-in logics
    Catalog,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}: cannot tell the input format; pass --format")]
    UnknownFormat(PathBuf),
    #[error("{path}: {source}")]
    Import { path: PathBuf, source: ImportError },
    #[error("{path}: {source}")]
    Omdoc { path: PathBuf, source: OmdocError },
    #[error("{0}: input yields no declarations (use --allow-empty to accept)")]
    Empty(PathBuf),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("ambiguous identifier `{0}`; use the full form namespace?module?name")]
    AmbiguousIdent(String),
    #[error("unknown kind `{0}`")]
    UnknownKind(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Ontology(#[from] OntologyError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("cannot write output: {0}")]
    Output(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Morphism(MorphismError::IllTyped(_)) => EXIT_CHECK_FAILED,
            _ => EXIT_BAD_INPUT,
        }
    }
}

/// A loaded library plus what the importer dropped, if it ran.
pub struct Loaded {
    pub library: Library,
    pub report: Option<ImportReport>,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_sources(dir: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let io = |source| CliError::Io {
            path: d.clone(),
            source,
        };
        for entry in fs::read_dir(&d).map_err(io)? {
            let path = entry.map_err(io)?.path();
            if path.is_dir() {
                stack.push(path);
            } else if let Ok(text) = fs::read_to_string(&path) {
                let key = path.strip_prefix(dir).unwrap_or(&path);
                out.insert(key.to_string_lossy().replace('\\', "/"), text);
            }
        }
    }
    Ok(out)
}

pub fn load(path: &Path, opts: &GlobalOpts) -> Result<Loaded, CliError> {
    let format = opts
        .format
        .or_else(|| Format::from_path(path))
        .ok_or_else(|| CliError::UnknownFormat(path.to_path_buf()))?;
    let bytes = read(path)?;
    let import_err = |source| CliError::Import {
        path: path.to_path_buf(),
        source,
    };
    let config = opts.kernel_config();
    let mut loaded = match format {
        Format::ToyholJson => {
            let doc = importers::parse_toyhol(&bytes).map_err(import_err)?;
            let imp = importers::toyhol::import_toyhol_with(&doc, config).map_err(import_err)?;
            Loaded {
                library: imp.library,
                report: Some(imp.report),
            }
        }
        Format::ToysetXml => {
            let doc = importers::parse_toyset(&bytes).map_err(import_err)?;
            let imp = importers::toyset::import_toyset_with(&doc, config).map_err(import_err)?;
            Loaded {
                library: imp.library,
                report: Some(imp.report),
            }
        }
        Format::Omdoc => Loaded {
            library: omdoc::parse(&bytes).map_err(|source| CliError::Omdoc {
                path: path.to_path_buf(),
                source,
            })?,
            report: None,
        },
    };
    if loaded.library.declaration_count() == 0 && !opts.allow_empty {
        return Err(CliError::Empty(path.to_path_buf()));
    }
    if let Some(dir) = &opts.source_dir {
        let sources = read_sources(dir)?;
        let (lib, _) =
            importers::recover_source_refs(&loaded.library, &sources, &importers::DEFAULT_MARKERS);
        loaded.library = lib;
    }
    Ok(loaded)
}

fn emit(opts: &GlobalOpts, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &opts.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(CliError::Output),
    }
}

/// Resolves either a full identifier or a unique local name among `candidates`.
fn resolve<'a>(text: &str, candidates: impl Iterator<Item = &'a Ident>) -> Result<Ident, CliError> {
    let all: Vec<&Ident> = candidates.collect();
    if let Ok(id) = text.parse::<Ident>() {
        return all
            .into_iter()
            .find(|c| **c == id)
            .cloned()
            .ok_or_else(|| CliError::UnknownIdent(text.to_string()));
    }
    let mut hits = all.into_iter().filter(|c| c.name() == text);
    match (hits.next(), hits.next()) {
        (Some(id), None) => Ok(id.clone()),
        (Some(_), Some(_)) => Err(CliError::AmbiguousIdent(text.to_string())),
        (None, _) => Err(CliError::UnknownIdent(text.to_string())),
    }
}

const PROOF_COLUMNS: [&str; 4] = ["none", "omitted", "dependsOn", "term"];

fn run_check(
    inputs: &[PathBuf],
    opts: &GlobalOpts,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut text = String::from("theory\tdeclarations\tchecked\tfailed");
    for p in PROOF_COLUMNS {
        text.push_str(&format!("\tproof.{p}"));
    }
    text.push('\n');
    let mut failed_total = 0;
    for input in inputs {
        let loaded = load(input, opts)?;
        let lib = &loaded.library;
        for th in &lib.theories {
            let report: CheckReport = check_theory_with(lib, &th.name, opts.kernel_config())?;
            let dropped: Vec<_> = loaded
                .report
                .iter()
                .flat_map(|r| &r.failures)
                .filter(|f| f.theory == th.name)
                .collect();
            for f in &dropped {
                let _ = writeln!(err, "failed\t{}\t{}\t{}", f.theory, f.name, f.issue);
            }
            for f in report.failures() {
                let msg = f
                    .result
                    .as_ref()
                    .err()
                    .map(ToString::to_string)
                    .unwrap_or_default();
                let _ = writeln!(err, "failed\t{}\t{}\t{}", th.name, f.name, msg);
            }
            let failed = report.failed_count() + dropped.len();
            failed_total += failed;
            let hist = report.proof_histogram();
            text.push_str(&format!(
                "{}\t{}\t{}\t{}",
                th.name,
                report.entries.len() + dropped.len(),
                report.entries.len(),
                failed
            ));
            for p in PROOF_COLUMNS {
                text.push_str(&format!("\t{}", hist.get(p).copied().unwrap_or(0)));
            }
            text.push('\n');
        }
    }
    emit(opts, out, &text)?;
    Ok(if failed_total == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn run_stats(input: &Path, opts: &GlobalOpts, out: &mut dyn Write) -> Result<i32, CliError> {
    let lib = load(input, opts)?.library;
    let mut lines: Vec<(String, String)> = Vec::new();
    let mut push = |k: &str, v: String| lines.push((k.to_string(), v));
    push("theories", lib.theories.len().to_string());
    push("declarations", lib.declaration_count().to_string());
    for kind in DeclKind::ALL {
        let n = lib.declarations().filter(|d| d.kind() == kind).count();
        push(&format!("kind.{}", kind.as_str()), n.to_string());
    }
    for style in PROOF_COLUMNS {
        let n = lib
            .declarations()
            .filter(|d| d.proof.as_ref().map_or("none", |p| p.style().as_str()) == style)
            .count();
        push(&format!("proof.{style}"), n.to_string());
    }
    let triples = ontology::extract_triples(
        &lib,
        &ExtractOptions {
            include_proof_uses: opts.include_proof_uses,
            verdicts: None,
        },
    );
    push("rdfTriples", triples.len().to_string());
    let total = lib.declaration_count();
    let with_ref = lib
        .declarations()
        .filter(|d| d.meta.source_ref.is_some())
        .count();
    let coverage = if total == 0 {
        0.0
    } else {
        100.0 * with_ref as f64 / total as f64
    };
    push("srcrefCoverage", format!("{coverage:.2}"));
    let text: String = lines.iter().map(|(k, v)| format!("{k}\t{v}\n")).collect();
    emit(opts, out, &text)?;
    Ok(EXIT_OK)
}

fn run_translate(
    input: &Path,
    morphism: &str,
    theorem: &str,
    opts: &GlobalOpts,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let lib = load(input, opts)?.library;
    let mid = resolve(morphism, lib.morphisms.iter().map(|m| &m.name))?;
    let m = lib.morphism(&mid).expect("resolved");
    let source = flatten(&lib, &m.from)?;
    let tid = resolve(
        theorem,
        source
            .iter()
            .filter(|d| d.kind().is_assertion())
            .map(|d| &d.name),
    )?;
    let report = morphisms::check_morphism(&lib, m)?;
    if !report.passed() {
        return Err(MorphismError::IllTyped(mid).into());
    }
    let decl = lib.declaration(&tid).expect("resolved");
    let statement = decl
        .tp
        .as_ref()
        .ok_or_else(|| CliError::UnknownIdent(theorem.to_string()))?;
    let translated = morphisms::translate(&lib, m, statement)?;
    emit(opts, out, &format!("{translated}\n"))?;
    Ok(EXIT_OK)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Check { inputs } => run_check(inputs, opts, out, err),
        Command::Import { input } => {
            let loaded = load(input, opts)?;
            let report = loaded.report.unwrap_or_default();
            let _ = writeln!(
                err,
                "records\t{}\nimported\t{}\ndropped\t{}",
                report.records,
                report.imported,
                report.failures.len()
            );
            for f in &report.failures {
                let _ = writeln!(err, "failed\t{f}");
            }
            let xml = omdoc::serialize(&loaded.library).map_err(|source| CliError::Omdoc {
                path: input.clone(),
                source,
            })?;
            emit(opts, out, &xml)?;
            Ok(if report.is_clean() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::ExportOmdoc { input } => {
            let lib = load(input, opts)?.library;
            let xml = omdoc::serialize(&lib).map_err(|source| CliError::Omdoc {
                path: input.clone(),
                source,
            })?;
            emit(opts, out, &xml)?;
            Ok(EXIT_OK)
        }
        Command::ExportRdf { input, skip_check } => {
            let lib = load(input, opts)?.library;
            let mut eo = if *skip_check {
                ExtractOptions::default()
            } else {
                ontology::checked_options(&lib, opts.kernel_config())?
            };
            eo.include_proof_uses = opts.include_proof_uses;
            let store = ontology::extract_triples(&lib, &eo);
            emit(opts, out, &ontology::write_ntriples(&store))?;
            Ok(EXIT_OK)
        }
        Command::Deps { input, ident } => {
            let lib = load(input, opts)?.library;
            let store = ontology::extract_triples(&lib, &extract_opts(opts));
            let id = resolve(ident, known_idents(&lib).iter())?;
            let deps = ontology::transitive_uses(&store, &id)?;
            emit(opts, out, &lines(deps))?;
            Ok(EXIT_OK)
        }
        Command::UsedBy { input, ident, kind } => {
            let kind = kind
                .as_deref()
                .map(|k| DeclKind::parse(k).ok_or_else(|| CliError::UnknownKind(k.to_string())))
                .transpose()?;
            let lib = load(input, opts)?.library;
            let store = ontology::extract_triples(&lib, &extract_opts(opts));
            let id = resolve(ident, known_idents(&lib).iter())?;
            let users = ontology::used_by(&store, &id, kind)?;
            emit(opts, out, &lines(users))?;
            Ok(EXIT_OK)
        }
        Command::Translate {
            input,
            morphism,
            theorem,
        } => run_translate(input, morphism, theorem, opts, out),
        Command::Stats { input } => run_stats(input, opts, out),
        Command::Catalog => {
            emit(opts, out, &crate::logic::encoding_catalog())?;
            Ok(EXIT_OK)
        }
    }
}

fn extract_opts(opts: &GlobalOpts) -> ExtractOptions {
    ExtractOptions {
        include_proof_uses: opts.include_proof_uses,
        verdicts: None,
    }
}

/// Declarations of the library and of the logics it is written in.
fn known_idents(lib: &Library) -> Vec<Ident> {
    let mut out: Vec<Ident> = lib.declarations().map(|d| d.name.clone()).collect();
    let mut metas: Vec<&Ident> = lib
        .theories
        .iter()
        .filter_map(|t| t.meta_theory.as_ref())
        .collect();
    metas.sort();
    metas.dedup();
    for m in metas {
        if let Ok(decls) = flatten(lib, m) {
            out.extend(decls.into_iter().map(|d| d.name.clone()));
        }
    }
    out
}

fn lines(ids: impl IntoIterator<Item = Ident>) -> String {
    ids.into_iter().map(|i| format!("{i}\n")).collect()
}

/// Parses arguments and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_BAD_INPUT;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
