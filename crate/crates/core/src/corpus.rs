//! Arnetminer / DBLP citation-record parsing.
//!
//! The dump is line oriented, one record per block:
//!
//! ```text
//! #*<title>
//! #@<author>, <author>; <author>
//! #t<year>        (or #year<year>)
//! #c<venue>       (or #conf<venue>)
//! #index<id>
//! #%<referenced id>   (repeatable)
//! #!<abstract>
//! ```
//!
//! Blank lines separate records. A `#*` line seen while the current record
//! already has a title also starts a new record, since some dump versions
//! omit the separator.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub title: String,
    pub authors: Vec<String>,
    pub year: Option<i32>,
    pub venue: Option<String>,
    pub references: Vec<String>,
    pub abstract_text: Option<String>,
    /// Number of other records in the corpus that reference this one.
    pub in_citations: u64,
}

impl PaperRecord {
    /// Text indexed for relevance scoring: title, then abstract when present.
    pub fn document_text(&self) -> String {
        match &self.abstract_text {
            Some(abs) if !abs.is_empty() => format!("{} {}", self.title, abs),
            _ => self.title.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub name: String,
    pub papers: Vec<String>,
    pub paper_count: u64,
    pub total_citations: u64,
}

/// Papers keyed by record id and authors keyed by exact (trimmed) name.
///
/// Both maps are ordered so that iteration, and everything derived from it,
/// is deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusBundle {
    pub papers: BTreeMap<String, PaperRecord>,
    pub authors: BTreeMap<String, AuthorRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WarningKind {
    UnknownTag(String),
    StrayLine,
    DuplicateId(String),
    BadYear(String),
    EmptyReference,
    MissingId,
    MissingTitle,
    MissingAuthors,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    /// 1-based line number the warning refers to.
    pub line: usize,
    pub kind: WarningKind,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WarningKind::UnknownTag(tag) => write!(f, "line {}: unknown tag {tag:?}", self.line),
            WarningKind::StrayLine => write!(f, "line {}: line outside any tag", self.line),
            WarningKind::DuplicateId(id) => {
                write!(
                    f,
                    "line {}: duplicate record id {id:?}, keeping the later record",
                    self.line
                )
            }
            WarningKind::BadYear(y) => write!(f, "line {}: unparseable year {y:?}", self.line),
            WarningKind::EmptyReference => write!(f, "line {}: empty reference", self.line),
            WarningKind::MissingId => {
                write!(f, "line {}: record without #index skipped", self.line)
            }
            WarningKind::MissingTitle => {
                write!(f, "line {}: record without title skipped", self.line)
            }
            WarningKind::MissingAuthors => {
                write!(f, "line {}: record without authors skipped", self.line)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub warnings: Vec<ParseWarning>,
    pub skipped_records: usize,
    pub duplicate_ids: usize,
}

#[derive(Default)]
struct PendingRecord {
    start_line: usize,
    id: Option<String>,
    title: Option<String>,
    authors: Vec<String>,
    year: Option<i32>,
    venue: Option<String>,
    references: Vec<String>,
    abstract_text: Option<String>,
    touched: bool,
}

/// Splits an author payload on both `,` and `;`, trimming and dropping empties.
/// Repeated names within one record are kept once.
pub fn split_authors(payload: &str) -> Vec<String> {
    let mut seen = BTreeSet::new();
    payload
        .split([',', ';'])
        .map(str::trim)
        .filter(|name| !name.is_empty())
        .filter(|name| seen.insert(name.to_string()))
        .map(str::to_string)
        .collect()
}

fn non_empty(s: &str) -> Option<String> {
    let s = s.trim();
    (!s.is_empty()).then(|| s.to_string())
}

struct Parser {
    papers: BTreeMap<String, PaperRecord>,
    report: ParseReport,
    current: PendingRecord,
}

impl Parser {
    fn flush(&mut self) {
        let rec = std::mem::take(&mut self.current);
        if !rec.touched {
            return;
        }
        let line = rec.start_line;
        let skip = |report: &mut ParseReport, kind| {
            report.warnings.push(ParseWarning { line, kind });
            report.skipped_records += 1;
        };
        let Some(id) = rec.id else {
            skip(&mut self.report, WarningKind::MissingId);
            return;
        };
        let Some(title) = rec.title else {
            skip(&mut self.report, WarningKind::MissingTitle);
            return;
        };
        if rec.authors.is_empty() {
            skip(&mut self.report, WarningKind::MissingAuthors);
            return;
        }

        let mut seen = BTreeSet::new();
        let references = rec
            .references
            .into_iter()
            .filter(|r| *r != id && seen.insert(r.clone()))
            .collect();

        let paper = PaperRecord {
            id: id.clone(),
            title,
            authors: rec.authors,
            year: rec.year,
            venue: rec.venue,
            references,
            abstract_text: rec.abstract_text,
            in_citations: 0,
        };
        if self.papers.insert(id.clone(), paper).is_some() {
            self.report.duplicate_ids += 1;
            self.report.warnings.push(ParseWarning {
                line,
                kind: WarningKind::DuplicateId(id),
            });
        }
    }

    fn line(&mut self, lineno: usize, raw: &str) {
        let line = raw.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            self.flush();
            return;
        }
        if !line.starts_with('#') {
            self.report.warnings.push(ParseWarning {
                line: lineno,
                kind: WarningKind::StrayLine,
            });
            return;
        }
        if line.starts_with("#*") && self.current.title.is_some() {
            self.flush();
        }
        if !self.current.touched {
            self.current.touched = true;
            self.current.start_line = lineno;
        }

        let rec = &mut self.current;
        // Longer tags first: "#index" before "#i…", "#year" before "#y…", "#conf" before "#c".
        if let Some(v) = line.strip_prefix("#index") {
            rec.id = non_empty(v);
        } else if let Some(v) = line.strip_prefix("#year") {
            self.year(lineno, v);
        } else if let Some(v) = line.strip_prefix("#conf") {
            rec.venue = non_empty(v);
        } else if let Some(v) = line.strip_prefix("#*") {
            rec.title = non_empty(v);
        } else if let Some(v) = line.strip_prefix("#@") {
            rec.authors = split_authors(v);
        } else if let Some(v) = line.strip_prefix("#t") {
            self.year(lineno, v);
        } else if let Some(v) = line.strip_prefix("#c") {
            rec.venue = non_empty(v);
        } else if let Some(v) = line.strip_prefix("#%") {
            match non_empty(v) {
                Some(r) => rec.references.push(r),
                None => self.report.warnings.push(ParseWarning {
                    line: lineno,
                    kind: WarningKind::EmptyReference,
                }),
            }
        } else if let Some(v) = line.strip_prefix("#!") {
            rec.abstract_text = non_empty(v);
        } else {
            let tag: String = line
                .chars()
                .take_while(|c| !c.is_whitespace())
                .take(16)
                .collect();
            self.report.warnings.push(ParseWarning {
                line: lineno,
                kind: WarningKind::UnknownTag(tag),
            });
        }
    }

    fn year(&mut self, lineno: usize, v: &str) {
        let v = v.trim();
        if v.is_empty() {
            return;
        }
        match v.parse() {
            Ok(y) => self.current.year = Some(y),
            Err(_) => self.report.warnings.push(ParseWarning {
                line: lineno,
                kind: WarningKind::BadYear(v.to_string()),
            }),
        }
    }
}

/// Parses a citation dump into a [`CorpusBundle`].
///
/// Problems in the input never abort the parse: they are collected in the
/// returned [`ParseReport`]. Only I/O failures produce an error. Invalid UTF-8
/// is replaced rather than rejected.
pub fn parse_corpus<R: BufRead>(mut input: R) -> Result<(CorpusBundle, ParseReport)> {
    let mut parser = Parser {
        papers: BTreeMap::new(),
        report: ParseReport::default(),
        current: PendingRecord::default(),
    };
    let mut buf = Vec::new();
    let mut lineno = 0;
    loop {
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        lineno += 1;
        parser.line(lineno, &String::from_utf8_lossy(&buf));
    }
    parser.flush();

    let bundle = CorpusBundle::from_papers(parser.papers);
    Ok((bundle, parser.report))
}

/// Counts, for every paper, how many other papers in the map reference it.
/// References to ids outside the map are ignored.
pub fn compute_citation_counts(papers: &BTreeMap<String, PaperRecord>) -> BTreeMap<String, u64> {
    let mut counts: BTreeMap<String, u64> = papers.keys().map(|id| (id.clone(), 0)).collect();
    for paper in papers.values() {
        let mut seen = BTreeSet::new();
        for r in &paper.references {
            if *r == paper.id || !seen.insert(r.as_str()) {
                continue;
            }
            if let Some(c) = counts.get_mut(r) {
                *c += 1;
            }
        }
    }
    counts
}

impl CorpusBundle {
    /// Builds the author registry and in-citation counts from a set of papers.
    /// Any `in_citations` already present on the records is overwritten.
    pub fn from_papers(mut papers: BTreeMap<String, PaperRecord>) -> Self {
        let counts = compute_citation_counts(&papers);
        for (id, paper) in papers.iter_mut() {
            paper.in_citations = counts[id];
        }
        Self::with_citations(papers)
    }

    /// Builds the author registry from papers whose `in_citations` are taken as given.
    pub fn with_citations(papers: BTreeMap<String, PaperRecord>) -> Self {
        let mut authors: BTreeMap<String, AuthorRecord> = BTreeMap::new();
        for paper in papers.values() {
            for name in &paper.authors {
                let entry = authors.entry(name.clone()).or_insert_with(|| AuthorRecord {
                    name: name.clone(),
                    papers: Vec::new(),
                    paper_count: 0,
                    total_citations: 0,
                });
                entry.papers.push(paper.id.clone());
                entry.paper_count += 1;
                entry.total_citations += paper.in_citations;
            }
        }
        CorpusBundle { papers, authors }
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    /// Total number of resolvable reference links, i.e. the sum of in-citations.
    pub fn citation_links(&self) -> u64 {
        self.papers.values().map(|p| p.in_citations).sum()
    }

    /// Checks the cross-references between papers and authors.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::SnapshotInvalid(msg));
        let mut expected: HashMap<&str, (Vec<&str>, u64)> = HashMap::new();
        for paper in self.papers.values() {
            for name in &paper.authors {
                let e = expected.entry(name.as_str()).or_default();
                e.0.push(paper.id.as_str());
                e.1 += paper.in_citations;
            }
        }
        if expected.len() != self.authors.len() {
            return bad(format!(
                "{} authors referenced by papers, {} in registry",
                expected.len(),
                self.authors.len()
            ));
        }
        for (name, author) in &self.authors {
            if *name != author.name {
                return bad(format!("author key {name:?} does not match record name"));
            }
            let Some((papers, cites)) = expected.get(name.as_str()) else {
                return bad(format!("author {name:?} has no papers"));
            };
            let listed: Vec<&str> = author.papers.iter().map(String::as_str).collect();
            if listed != *papers
                || author.paper_count != papers.len() as u64
                || author.total_citations != *cites
            {
                return bad(format!("author {name:?} disagrees with paper records"));
            }
        }
        Ok(())
    }
}

/// Exact lookup on the trimmed name. No disambiguation is attempted.
pub fn resolve_author<'a>(bundle: &'a CorpusBundle, name: &str) -> Result<&'a AuthorRecord> {
    let key = name.trim();
    bundle
        .authors
        .get(key)
        .ok_or_else(|| Error::AuthorNotFound(key.to_string()))
}
