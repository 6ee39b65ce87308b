//! Versioned JSON persistence of the query-independent state.
//!
//! See `docs/snapshot-format.md` for the layout. Every derived section is
//! checked against the corpus on load, so a snapshot that was edited by hand
//! or truncated is rejected instead of silently producing different rankings.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::{compute_citation_counts, AuthorRecord, CorpusBundle, PaperRecord};
use crate::error::{Error, Result};
use crate::graph::WeightedAuthorGraph;
use crate::text_index::{CorpusStats, DocumentTerms, TextIndex};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format_version: u32,
    pub corpus: CorpusSection,
    pub index: IndexSection,
    pub citation_graph: GraphSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSection {
    pub papers: Vec<PaperRecord>,
    pub authors: Vec<AuthorRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSection {
    pub stopwords: Vec<String>,
    pub documents: Vec<DocumentTerms>,
    pub stats: CorpusStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSection {
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    pub weight: f64,
}

#[derive(Deserialize)]
struct Header {
    format_version: u32,
}

impl Snapshot {
    pub fn capture(
        bundle: &CorpusBundle,
        index: &TextIndex,
        citation: &WeightedAuthorGraph,
    ) -> Self {
        Snapshot {
            format_version: FORMAT_VERSION,
            corpus: CorpusSection {
                papers: bundle.papers.values().cloned().collect(),
                authors: bundle.authors.values().cloned().collect(),
            },
            index: IndexSection {
                stopwords: index.tokenizer().stopwords().iter().cloned().collect(),
                documents: index.documents().to_vec(),
                stats: index.stats().clone(),
            },
            citation_graph: GraphSection {
                edges: citation
                    .edges()
                    .map(|(a, b, weight)| EdgeEntry {
                        a: a.to_string(),
                        b: b.to_string(),
                        weight,
                    })
                    .collect(),
            },
        }
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let header: Header = serde_json::from_str(&text)?;
        if header.format_version != FORMAT_VERSION {
            return Err(Error::SnapshotVersion {
                found: header.format_version,
                expected: FORMAT_VERSION,
            });
        }
        Ok(serde_json::from_str(&text)?)
    }

    /// Rebuilds the corpus, checking every cross-reference and derived count.
    pub fn corpus(&self) -> Result<CorpusBundle> {
        let mut papers = BTreeMap::new();
        for p in &self.corpus.papers {
            if papers.insert(p.id.clone(), p.clone()).is_some() {
                return Err(Error::SnapshotInvalid(format!(
                    "duplicate paper id {:?}",
                    p.id
                )));
            }
        }
        let counts = compute_citation_counts(&papers);
        if let Some(p) = papers.values().find(|p| counts[&p.id] != p.in_citations) {
            return Err(Error::SnapshotInvalid(format!(
                "paper {:?} has a stale citation count",
                p.id
            )));
        }
        let bundle = CorpusBundle::with_citations(papers);
        let authors: Vec<&AuthorRecord> = bundle.authors.values().collect();
        if authors.len() != self.corpus.authors.len()
            || authors
                .iter()
                .zip(&self.corpus.authors)
                .any(|(a, b)| *a != b)
        {
            return Err(Error::SnapshotInvalid(
                "author registry disagrees with papers".into(),
            ));
        }
        Ok(bundle)
    }

    pub fn text_index(&self, bundle: &CorpusBundle) -> Result<TextIndex> {
        let docs = &self.index.documents;
        if docs.is_empty() && self.index.stats.doc_count == 0 {
            return Ok(TextIndex::empty());
        }
        if docs.len() != bundle.papers.len()
            || docs
                .iter()
                .zip(bundle.papers.keys())
                .any(|(d, id)| d.paper_id != *id)
        {
            return Err(Error::SnapshotInvalid(
                "index documents do not match papers".into(),
            ));
        }
        let tokenizer = crate::text_index::Tokenizer::with_stopwords(&self.index.stopwords);
        TextIndex::from_parts(tokenizer, docs.clone(), self.index.stats.clone())
    }

    /// Checks the persisted citation graph against one rebuilt from the corpus.
    pub fn check_citation_graph(&self, rebuilt: &WeightedAuthorGraph) -> Result<()> {
        let edges = &self.citation_graph.edges;
        let same = edges.len() == rebuilt.edge_count()
            && edges
                .iter()
                .zip(rebuilt.edges())
                .all(|(e, (a, b, w))| e.a == a && e.b == b && e.weight.to_bits() == w.to_bits());
        if same {
            Ok(())
        } else {
            Err(Error::SnapshotInvalid(
                "citation graph disagrees with corpus".into(),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_other_versions() {
        let json = r#"{"format_version": 99, "whatever": true}"#;
        match Snapshot::read_from(json.as_bytes()) {
            Err(Error::SnapshotVersion {
                found: 99,
                expected: 1,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(
            Snapshot::read_from("not json".as_bytes()),
            Err(Error::Json(_))
        ));
    }
}
