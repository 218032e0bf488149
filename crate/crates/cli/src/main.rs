use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use hklat::classification::{embed_in_l, ClassificationError, Elementary, EmbeddingReport, LatticeInvariants};
use hklat::enumeration::{enumerate_triples, to_csv, to_markdown, AdmissibleTriple, EnumerationError, CSV_HEADER, SUPPORTED_PRIMES};
use hklat::fixed_locus::{cross_check_against_table, enumerate_local_actions, hilb2_census, FixedLocusError, K3FixedLocus};
use hklat::involutions::{
    classify_involution_embeddings, computed_figure_points, figure_points, render_scatter, two_elementary_exists, EmbeddingCase, Marker,
    TwoElemInvariants,
};
use hklat::lattice::{realize, Lattice, LatticeError, LatticeExpr};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Rejected(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Write { .. } => 1,
            CliError::Rejected(_) => 2,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Parse(_) | LatticeError::InvalidParameter(_) | LatticeError::Matrix(_) => CliError::Input(e.to_string()),
            _ => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<ClassificationError> for CliError {
    fn from(e: ClassificationError) -> Self {
        match e {
            ClassificationError::Lattice(l) => l.into(),
            ClassificationError::InvalidParameter(_) => CliError::Input(e.to_string()),
            _ => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<EnumerationError> for CliError {
    fn from(e: EnumerationError) -> Self {
        match e {
            EnumerationError::UnsupportedPrime(_) => CliError::Input(e.to_string()),
            _ => CliError::Rejected(e.to_string()),
        }
    }
}

impl From<FixedLocusError> for CliError {
    fn from(e: FixedLocusError) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "hklat", version, about = "Lattice invariants, admissible tables and fixed-locus censuses for K3^[2]-type automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FigureFormat {
    Txt,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariants of a lattice given as an expression or a JSON Gram matrix file
    Invariants {
        /// Expression such as "U(3) + E8" or a path to a .json file
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Admissible (p, m, a) tables
    Tables {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        prime: Option<u64>,
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Md)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point sets in the (r, a)-plane for involutions
    Figures {
        #[arg(long, default_value_t = 2)]
        order: u64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[arg(long, value_enum, default_value_t = FigureFormat::Txt)]
        format: FigureFormat,
        /// Include computed points left out of the published diagram
        #[arg(long)]
        computed: bool,
    },
    /// Primitive embedding of S into U^3 + E8^2 + <-2>
    Embed {
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Embedding classes of a 2-elementary T of signature (1, r-1)
    Involution {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        a: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        delta: u8,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Fixed locus on the Hilbert square from a K3 fixed locus (JSON)
    Census {
        file: PathBuf,
        /// Compare totals with a table triple "p,m,a"
        #[arg(long)]
        check: Option<String>,
    },
    /// Linearized actions at an isolated fixed point
    LocalActions {
        #[arg(long)]
        prime: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Outcome::Failed(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(Outcome::Verdict(out)) => {
            print!("{out}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("HKLAT_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Input(format!("HKLAT_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Input(e.to_string()))
}

/// A run either fails, or completes with output that may carry a negative verdict.
enum Outcome {
    Failed(CliError),
    Verdict(String),
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome::Failed(e)
    }
}

fn run(cmd: Command) -> std::result::Result<String, Outcome> {
    Ok(match cmd {
        Command::Invariants { input, format } => invariants(&input, format)?,
        Command::Tables { prime, all, format, out } => {
            let text = tables(if all { None } else { prime }, format)?;
            match out {
                Some(path) => {
                    fs::write(&path, &text).map_err(|source| CliError::Write { path: path.clone(), source })?;
                    String::new()
                }
                None => text,
            }
        }
        Command::Figures { order, which, format, computed } => figures(order, which, format, computed)?,
        Command::Embed { expr, format } => embed(&expr, format)?,
        Command::Involution { r, a, delta, format } => involution(r, a, delta, format)?,
        Command::Census { file, check } => return census(&file, check.as_deref()),
        Command::LocalActions { prime, format } => local_actions(prime, format)?,
    })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// Gram matrix file: either a bare array of rows or `{"gram": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum GramFile {
    Bare(Vec<Vec<i64>>),
    Wrapped { gram: Vec<Vec<i64>> },
}

fn load_lattice(input: &str) -> Result<(String, Lattice)> {
    let path = Path::new(input);
    if input.ends_with(".json") || path.is_file() {
        let text = read_to_string(path)?;
        let rows = match serde_json::from_str::<GramFile>(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))? {
            GramFile::Bare(rows) | GramFile::Wrapped { gram: rows } => rows,
        };
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CliError::Input(format!("{}: Gram matrix must be square", path.display())));
        }
        if (0..n).any(|i| (0..i).any(|j| rows[i][j] != rows[j][i])) {
            return Err(CliError::Rejected("Gram matrix is not symmetric".into()));
        }
        return Ok((path.display().to_string(), Lattice::from_rows(&rows)?));
    }
    let expr: LatticeExpr = input.parse()?;
    Ok((expr.to_string(), realize(&expr)?))
}

#[derive(Serialize)]
struct InvariantsReport {
    lattice: String,
    rank: usize,
    signature: (usize, usize),
    det: String,
    discriminant_group: Vec<u64>,
    discriminant_form: String,
    p_elementary: Option<u64>,
    length: usize,
    delta: Option<u8>,
    gauss_signature: u8,
}

fn invariants(input: &str, format: Format) -> Result<String> {
    let (name, lattice) = load_lattice(input)?;
    let data = lattice.discriminant_data()?;
    let inv = LatticeInvariants::of_lattice(&lattice)?;
    let gauss = data.form.gauss_signature().map_err(|e| CliError::Rejected(e.to_string()))?;
    let delta = (inv.is_p_elementary(2)).then(|| data.form.delta().ok()).flatten();
    let report = InvariantsReport {
        lattice: name,
        rank: lattice.rank(),
        signature: lattice.signature(),
        det: lattice.det().to_string(),
        discriminant_group: data.invariant_factors.clone(),
        p_elementary: match inv.elementary {
            Elementary::Prime(p) => Some(p),
            _ => None,
        },
        length: inv.a,
        discriminant_form: data.form.to_string(),
        delta,
        gauss_signature: gauss,
    };
    if format == Format::Json {
        return Ok(json(&report));
    }
    let group = if report.discriminant_group.is_empty() {
        "0".to_string()
    } else {
        report.discriminant_group.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    };
    let elementary = match inv.elementary {
        Elementary::Unimodular => "true (unimodular)".to_string(),
        Elementary::Prime(p) => format!("true (p={p}, a={})", inv.a),
        Elementary::Mixed => "false".to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(out, "lattice: {}", report.lattice);
    let _ = writeln!(out, "rank: {}", report.rank);
    let _ = writeln!(out, "signature: ({}, {})", report.signature.0, report.signature.1);
    let _ = writeln!(out, "det: {}", report.det);
    let _ = writeln!(out, "discriminant group: {group}");
    let _ = writeln!(out, "discriminant form: {}", report.discriminant_form);
    let _ = writeln!(out, "p-elementary: {elementary}");
    let _ = writeln!(out, "delta: {}", delta.map_or("n/a".to_string(), |d| d.to_string()));
    let _ = writeln!(out, "gauss signature: {gauss}");
    Ok(out)
}

fn tables(prime: Option<u64>, format: TableFormat) -> Result<String> {
    let primes: Vec<u64> = match prime {
        Some(p) => vec![p],
        None => SUPPORTED_PRIMES.to_vec(),
    };
    let mut per_prime: Vec<(u64, Vec<AdmissibleTriple>)> = Vec::new();
    for p in primes {
        per_prime.push((p, enumerate_triples(p)?));
    }
    Ok(match format {
        TableFormat::Md => per_prime.iter().map(|(p, rows)| to_markdown(*p, rows)).collect::<Vec<_>>().join("\n"),
        TableFormat::Csv => {
            let mut out = format!("{CSV_HEADER}\n");
            for (_, rows) in &per_prime {
                let body = to_csv(rows);
                out.push_str(body.split_once('\n').map_or("", |(_, rest)| rest));
            }
            out
        }
        TableFormat::Json => json(&per_prime.into_iter().flat_map(|(_, rows)| rows).collect::<Vec<_>>()),
    })
}

#[derive(Serialize)]
struct FigureReport {
    which: u8,
    points: Vec<hklat::involutions::FigurePoint>,
}

fn figures(order: u64, which: u8, format: FigureFormat, computed: bool) -> Result<String> {
    if order != 2 {
        return Err(CliError::Input(format!("figures are available for order 2 only, got {order}")));
    }
    let points = if computed { computed_figure_points(which) } else { figure_points(which) };
    Ok(match format {
        FigureFormat::Json => json(&FigureReport { which, points: points.into_iter().collect() }),
        FigureFormat::Txt => {
            let legend = match which {
                1 => format!("{} delta(T) = 1   {} delta(T) = 0", Marker::Filled.symbol(), Marker::Star.symbol()),
                _ => format!("{} delta(S) = 1   {} delta(S) = 0", Marker::Filled.symbol(), Marker::Hollow.symbol()),
            };
            format!("Involution diagram {which}: a (vertical) against r (horizontal)\n{legend}\n\n{}", render_scatter(&points))
        }
    })
}

#[derive(Serialize)]
struct EmbedOutput<'a> {
    s: String,
    s_invariants: LatticeInvariants,
    #[serde(flatten)]
    report: &'a EmbeddingReport,
}

fn embed(input: &str, format: Format) -> Result<String> {
    let expr: LatticeExpr = input.parse()?;
    let s = LatticeInvariants::of_lattice(&realize(&expr)?)?;
    let report = embed_in_l(&s)?;
    if format == Format::Json {
        return Ok(json(&EmbedOutput { s: expr.to_string(), s_invariants: s, report: &report }));
    }
    let t = &report.orthogonal_invariants;
    let mut out = String::new();
    let _ = writeln!(out, "S: {expr}");
    let _ = writeln!(out, "S signature: ({}, {}), length {}", s.s_plus, s.s_minus, s.a);
    let verdict = match report.verdict {
        None => "signature does not fit".to_string(),
        Some(v) => match v.failed() {
            None => "exists".to_string(),
            Some(c) => format!("fails ({c:?})"),
        },
    };
    let _ = writeln!(out, "embeds: {} [{verdict}]", report.embeds);
    if report.embeds {
        let _ = writeln!(out, "unique embedding: {}", report.unique_embedding);
        let _ = writeln!(out, "T signature: ({}, {}), length {}", t.s_plus, t.s_minus, t.a);
        let _ = writeln!(out, "T discriminant form: {}", t.form);
        let _ = writeln!(out, "T: {}", report.orthogonal_expr.as_ref().map_or("not recognized".to_string(), |e| e.to_string()));
        if let Some(g) = report.orthogonal_genus_unique {
            let _ = writeln!(out, "T genus has one class: {g}");
        }
        let _ = writeln!(out, "T embeds uniquely: {}", report.orthogonal_unique_embedding);
        if report.exception_flag {
            let _ = writeln!(out, "note: uniqueness of the embedding is not settled");
        }
    }
    Ok(out)
}

fn involution(r: usize, a: usize, delta: u8, format: Format) -> Result<String> {
    let t = TwoElemInvariants::hyperbolic(r, a, delta);
    if r == 0 || !two_elementary_exists(t) {
        return Err(CliError::Rejected(format!("no even 2-elementary lattice of signature (1, {}) with a = {a}, delta = {delta}", r.saturating_sub(1))));
    }
    let classes = classify_involution_embeddings(t);
    if format == Format::Json {
        return Ok(json(&classes));
    }
    let mut out = format!("T: r = {r}, a = {a}, delta = {delta}\n");
    if classes.is_empty() {
        out.push_str("no primitive embedding\n");
    }
    for c in &classes {
        let s = c.s_invariants;
        let case = match c.case {
            EmbeddingCase::I => "I",
            EmbeddingCase::II => "II",
        };
        let _ = writeln!(out, "case {case}: S has signature ({}, {}), a = {}, delta = {}", s.s_plus, s.s_minus, s.a, s.delta);
    }
    Ok(out)
}

fn parse_triple(s: &str) -> Result<(u64, u64, u64)> {
    let parts: Vec<u64> = s.split(',').map(|x| x.trim().parse::<u64>()).collect::<std::result::Result<_, _>>().map_err(|_| CliError::Input(format!("--check expects p,m,a, got {s:?}")))?;
    match parts[..] {
        [p, m, a] => Ok((p, m, a)),
        _ => Err(CliError::Input(format!("--check expects p,m,a, got {s:?}"))),
    }
}

fn census(file: &Path, check: Option<&str>) -> std::result::Result<String, Outcome> {
    let text = read_to_string(file)?;
    let locus: K3FixedLocus = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let census = hilb2_census(&locus).map_err(CliError::from)?;
    let mut out = json(&census);
    if let Some(spec) = check {
        let (p, m, a) = parse_triple(spec)?;
        if p != locus.p {
            return Err(CliError::Input(format!("--check prime {p} differs from the fixed locus prime {}", locus.p)).into());
        }
        if cross_check_against_table(&locus, p, m, a).map_err(CliError::from)? {
            out.push_str("MATCH\n");
        } else {
            out.push_str("MISMATCH\n");
            return Err(Outcome::Verdict(out));
        }
    }
    Ok(out)
}

fn local_actions(p: u64, format: Format) -> Result<String> {
    let actions = enumerate_local_actions(p)?;
    if format == Format::Json {
        return Ok(json(&actions));
    }
    let mut out = String::new();
    for x in &actions {
        let pattern: Vec<String> = x.exponents.iter().zip(&x.multiplicities).filter(|(_, m)| **m > 0).map(|(e, m)| format!("{e}^{m}")).collect();
        let _ = writeln!(out, "family {}: exponents {}  fixed dimension {}", x.family, pattern.join(" "), x.fixed_dimension());
    }
    Ok(out)
}
