//! The `cqbg` command-line tool.
//!
//! Exit codes: 0 success, 1 other failure, 2 author not found, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::Engine;
use crate::error::Error;
use crate::ranker::{Pairing, RecommendRequest, TeamRecommendation};
use crate::roles::{CriterionKind, Role, RoleCriterion};
use crate::text_index::{Bm25Params, Scorer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

const MAX_LISTED_WARNINGS: usize = 20;

#[derive(Debug, Parser)]
#[command(
    name = "cqbg",
    version,
    about = "Recommend role-complete academic teams from a citation corpus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a citation dump and write a snapshot.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        snapshot: PathBuf,
    },
    /// Recommend top-k team pairs for a researcher.
    Recommend(RecommendArgs),
    /// Print the role assigned to an author.
    Classify {
        #[arg(long)]
        snapshot: PathBuf,
        #[arg(long)]
        name: String,
        #[command(flatten)]
        criterion: CriterionArgs,
    },
    /// Print corpus and graph counts and the role histogram.
    Stats {
        #[arg(long)]
        snapshot: PathBuf,
        #[command(flatten)]
        criterion: CriterionArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoleArg {
    Prime,
    Assistant,
    Student,
}

impl From<RoleArg> for Role {
    fn from(r: RoleArg) -> Self {
        match r {
            RoleArg::Prime => Role::PrimeProfessor,
            RoleArg::Assistant => Role::AssistantProfessor,
            RoleArg::Student => Role::Student,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScorerArg {
    Bm25,
    Tfidf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Paper,
    Citation,
    Neighbor,
}

impl From<CriterionArg> for CriterionKind {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Paper => CriterionKind::Paper,
            CriterionArg::Citation => CriterionKind::Citation,
            CriterionArg::Neighbor => CriterionKind::Neighbor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Aligned,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct CriterionArgs {
    #[arg(long, value_enum, default_value = "paper")]
    criterion: CriterionArg,
    #[arg(long, default_value_t = 20)]
    t1: u64,
    #[arg(long, default_value_t = 40)]
    t2: u64,
}

impl CriterionArgs {
    fn resolve(&self) -> Result<RoleCriterion, Error> {
        RoleCriterion::new(self.criterion.into(), self.t1, self.t2)
    }
}

#[derive(Debug, Args)]
struct RecommendArgs {
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long)]
    name: String,
    #[arg(long, value_enum)]
    role: Option<RoleArg>,
    #[arg(long)]
    query: String,
    #[arg(long)]
    interest: Option<String>,
    #[arg(short = 'k', long = "top-k", default_value_t = 5)]
    k: usize,
    #[arg(long, value_enum, default_value = "bm25")]
    scorer: ScorerArg,
    /// BM25 term-frequency saturation.
    #[arg(long, default_value_t = 1.5)]
    k1: f64,
    /// BM25 length normalization.
    #[arg(long, default_value_t = 0.75)]
    b: f64,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[arg(long, value_enum, default_value = "aligned")]
    pairing: PairingArg,
    #[arg(long)]
    no_interest_in_query: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
}

/// Resolved settings of one `recommend` invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scorer: Scorer,
    pub criterion: RoleCriterion,
    pub top_k: usize,
    pub pairing: Pairing,
    pub interest_in_query: bool,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scorer: Scorer::default(),
            criterion: RoleCriterion::default(),
            top_k: 5,
            pairing: Pairing::Aligned,
            interest_in_query: true,
            format: OutputFormat::Json,
        }
    }
}

impl RecommendArgs {
    fn config(&self) -> Result<RunConfig, Error> {
        let scorer = match self.scorer {
            ScorerArg::Bm25 => Scorer::Bm25(Bm25Params::new(self.k1, self.b)?),
            ScorerArg::Tfidf => Scorer::TfIdf,
        };
        if self.k < 1 {
            return Err(Error::InvalidRequest("-k must be at least 1".into()));
        }
        Ok(RunConfig {
            scorer,
            criterion: self.criterion.resolve()?,
            top_k: self.k,
            pairing: match self.pairing {
                PairingArg::Aligned => Pairing::Aligned,
                PairingArg::Product => Pairing::Product,
            },
            interest_in_query: !self.no_interest_in_query,
            format: self.format,
        })
    }

    fn request(&self, cfg: &RunConfig) -> RecommendRequest {
        RecommendRequest {
            seed_name: self.name.clone(),
            seed_role: self.role.map(Role::from),
            query: self.query.clone(),
            interest: self.interest.clone(),
            top_k: cfg.top_k,
            scorer: cfg.scorer,
            criterion: cfg.criterion,
            pairing: cfg.pairing,
            interest_in_query: cfg.interest_in_query,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::AuthorNotFound(_) => EXIT_NOT_FOUND,
        Error::InvalidRequest(_) | Error::InvalidCriterion { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// JSON rendering used by `recommend --format json`, without trailing newline.
pub fn render_json(rec: &TeamRecommendation) -> String {
    serde_json::to_string(rec).expect("recommendation serializes")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

pub fn render_table(rec: &TeamRecommendation) -> String {
    let mut rows = vec![[
        "rank".to_string(),
        "role".into(),
        "name".into(),
        "i1".into(),
        "i2".into(),
        "f".into(),
    ]];
    for pair in &rec.pairs {
        for m in &pair.members {
            rows.push([
                pair.rank.to_string(),
                m.role.to_string(),
                m.author.clone(),
                format!("{:.6}", m.i1),
                fmt_opt(m.i2),
                format!("{:.6}", m.f),
            ]);
        }
    }
    let mut widths = [0usize; 6];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = format!(
        "seed: {} ({})\nquery: {}\n",
        rec.seed.name, rec.seed.role, rec.query
    );
    if let Some(i) = &rec.interest {
        out.push_str(&format!("interest: {i}\n"));
    }
    if rec.fallback_used {
        out.push_str("note: zero-score candidates were used to fill the list\n");
    }
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn build(
    input: &PathBuf,
    snapshot: &PathBuf,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Error> {
    let (engine, report) = Engine::from_corpus_file(input)?;
    if !report.warnings.is_empty() {
        writeln!(
            err,
            "warning: {} parse warnings ({} records skipped, {} duplicate ids)",
            report.warnings.len(),
            report.skipped_records,
            report.duplicate_ids
        )?;
        for w in report.warnings.iter().take(MAX_LISTED_WARNINGS) {
            writeln!(err, "  {w}")?;
        }
        if report.warnings.len() > MAX_LISTED_WARNINGS {
            writeln!(
                err,
                "  ... {} more",
                report.warnings.len() - MAX_LISTED_WARNINGS
            )?;
        }
    }
    engine.save(snapshot)?;
    writeln!(out, "papers: {}", engine.bundle().papers.len())?;
    writeln!(out, "authors: {}", engine.bundle().authors.len())?;
    writeln!(out, "edges: {}", engine.citation_graph().edge_count())?;
    writeln!(out, "citation_links: {}", engine.bundle().citation_links())?;
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    match cmd {
        Command::Build { input, snapshot } => build(&input, &snapshot, out, err),
        Command::Recommend(args) => {
            let cfg = args.config()?;
            let engine = Engine::load(&args.snapshot)?;
            let rec = engine.recommend(&args.request(&cfg))?;
            match cfg.format {
                OutputFormat::Json => writeln!(out, "{}", render_json(&rec))?,
                OutputFormat::Table => write!(out, "{}", render_table(&rec))?,
            }
            Ok(())
        }
        Command::Classify {
            snapshot,
            name,
            criterion,
        } => {
            let criterion = criterion.resolve()?;
            let engine = Engine::load(&snapshot)?;
            let (role, metric) = engine.classify(&name, &criterion)?;
            let (t1, t2) = criterion.thresholds();
            writeln!(out, "name: {}", name.trim())?;
            writeln!(
                out,
                "criterion: {} (t1={t1}, t2={t2})",
                criterion.kind().as_str()
            )?;
            writeln!(out, "metric: {metric}")?;
            writeln!(out, "role: {role}")?;
            Ok(())
        }
        Command::Stats {
            snapshot,
            criterion,
        } => {
            let criterion = criterion.resolve()?;
            let engine = Engine::load(&snapshot)?;
            let (t1, t2) = criterion.thresholds();
            writeln!(out, "papers: {}", engine.bundle().papers.len())?;
            writeln!(out, "authors: {}", engine.bundle().authors.len())?;
            writeln!(out, "edges: {}", engine.citation_graph().edge_count())?;
            writeln!(out, "citation_links: {}", engine.bundle().citation_links())?;
            writeln!(
                out,
                "criterion: {} (t1={t1}, t2={t2})",
                criterion.kind().as_str()
            )?;
            for (role, count) in engine.role_histogram(&criterion)?.iter().rev() {
                writeln!(out, "{role}: {count}")?;
            }
            Ok(())
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("cqbg").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["recommend", "--snapshot", "x"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&[
            "recommend",
            "--snapshot",
            "x",
            "--name",
            "a",
            "--query",
            "q",
            "--t1",
            "5",
            "--t2",
            "5",
        ]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        let (code, _, _) = run_capture(&[
            "recommend",
            "--snapshot",
            "x",
            "--name",
            "a",
            "--query",
            "q",
            "-k",
            "0",
        ]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("recommend"));
    }

    #[test]
    fn missing_snapshot_is_failure() {
        let (code, _, err) = run_capture(&["stats", "--snapshot", "/nonexistent/snap.json"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn default_config_matches_published_constants() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.scorer, Scorer::Bm25(Bm25Params { k1: 1.5, b: 0.75 }));
        assert_eq!(cfg.criterion.kind(), CriterionKind::Paper);
        assert_eq!(cfg.criterion.thresholds(), (20, 40));
    }
}
