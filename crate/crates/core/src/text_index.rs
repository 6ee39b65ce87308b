//! Tokenization, corpus statistics and query-document relevance.
//!
//! Two scorers share the same IDF, `ln((|D| + 1) / df(w))`:
//!
//! * BM25: `Σ_w c(w,q) · c'(w,d) · idf(w)` with the saturated term frequency
//!   `c'(w,d) = (k1 + 1)·c(w,d) / (c(w,d) + k1·(1 − b + b·|d| / avg(d)))`.
//! * TF-IDF: `Σ_w c(w,q) · c(w,d) · idf(w)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusBundle;
use crate::error::{Error, Result};

/// Lowercases and splits on every non-alphanumeric character. No stemming;
/// an optional stopword list is applied after lowercasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tokenizer {
    stopwords: BTreeSet<String>,
}

impl Tokenizer {
    pub fn with_stopwords<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let stopwords = words
            .into_iter()
            .flat_map(|w| tokenize(w.as_ref()))
            .collect();
        Tokenizer { stopwords }
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let mut tokens = tokenize(text);
        if !self.stopwords.is_empty() {
            tokens.retain(|t| !self.stopwords.contains(t));
        }
        tokens
    }
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn count_terms(tokens: Vec<String>) -> BTreeMap<String, u32> {
    let mut tf = BTreeMap::new();
    for t in tokens {
        *tf.entry(t).or_insert(0) += 1;
    }
    tf
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentTerms {
    pub paper_id: String,
    pub term_freq: BTreeMap<String, u32>,
    pub length: u32,
}

impl DocumentTerms {
    pub fn new(paper_id: impl Into<String>, tokens: Vec<String>) -> Self {
        let length = tokens.len() as u32;
        DocumentTerms {
            paper_id: paper_id.into(),
            term_freq: count_terms(tokens),
            length,
        }
    }

    pub fn tf(&self, term: &str) -> u32 {
        self.term_freq.get(term).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub doc_count: u64,
    pub avg_len: f64,
    pub doc_freq: BTreeMap<String, u64>,
}

impl CorpusStats {
    pub fn from_documents<'a>(docs: impl IntoIterator<Item = &'a DocumentTerms>) -> Self {
        let mut doc_count = 0u64;
        let mut total_len = 0u64;
        let mut doc_freq: BTreeMap<String, u64> = BTreeMap::new();
        for d in docs {
            doc_count += 1;
            total_len += u64::from(d.length);
            for term in d.term_freq.keys() {
                *doc_freq.entry(term.clone()).or_insert(0) += 1;
            }
        }
        let avg_len = if doc_count == 0 {
            0.0
        } else {
            total_len as f64 / doc_count as f64
        };
        CorpusStats {
            doc_count,
            avg_len,
            doc_freq,
        }
    }

    pub fn df(&self, term: &str) -> u64 {
        self.doc_freq.get(term).copied().unwrap_or(0)
    }

    /// `ln((|D| + 1) / df(w))`, or `None` when the term occurs in no document.
    pub fn idf(&self, term: &str) -> Option<f64> {
        match self.df(term) {
            0 => None,
            df => Some(((self.doc_count as f64 + 1.0) / df as f64).ln()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 1.5, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self> {
        if !(k1.is_finite() && k1 >= 0.0) {
            return Err(Error::InvalidRequest(format!(
                "BM25 k1 must be >= 0, got {k1}"
            )));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::InvalidRequest(format!(
                "BM25 b must lie in [0, 1], got {b}"
            )));
        }
        Ok(Bm25Params { k1, b })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryTerms {
    pub raw: String,
    pub term_freq: BTreeMap<String, u32>,
}

impl QueryTerms {
    pub fn new(raw: &str, tokenizer: &Tokenizer) -> Self {
        QueryTerms {
            raw: raw.to_string(),
            term_freq: count_terms(tokenizer.tokenize(raw)),
        }
    }

    /// Query from pre-tokenized terms, e.g. query text plus research interest.
    pub fn from_tokens(raw: impl Into<String>, tokens: Vec<String>) -> Self {
        QueryTerms {
            raw: raw.into(),
            term_freq: count_terms(tokens),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.term_freq.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Scorer {
    Bm25(Bm25Params),
    TfIdf,
}

impl Default for Scorer {
    fn default() -> Self {
        Scorer::Bm25(Bm25Params::default())
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scorer::Bm25(_) => f.write_str("bm25"),
            Scorer::TfIdf => f.write_str("tfidf"),
        }
    }
}

impl FromStr for Scorer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bm25" => Ok(Scorer::default()),
            "tfidf" | "tf-idf" => Ok(Scorer::TfIdf),
            other => Err(Error::InvalidRequest(format!("unknown scorer {other:?}"))),
        }
    }
}

#[inline]
fn bm25_term(
    query_tf: u32,
    doc_tf: u32,
    doc_len: u32,
    avg_len: f64,
    idf: f64,
    p: Bm25Params,
) -> f64 {
    let tf = f64::from(doc_tf);
    let norm = 1.0 - p.b + p.b * f64::from(doc_len) / avg_len;
    let saturated = (p.k1 + 1.0) * tf / (tf + p.k1 * norm);
    f64::from(query_tf) * saturated * idf
}

#[inline]
fn tfidf_term(query_tf: u32, doc_tf: u32, idf: f64) -> f64 {
    f64::from(query_tf) * f64::from(doc_tf) * idf
}

pub fn bm25_score(q: &QueryTerms, d: &DocumentTerms, s: &CorpusStats, p: Bm25Params) -> f64 {
    let mut score = 0.0;
    for (term, &qtf) in &q.term_freq {
        let dtf = d.tf(term);
        if dtf == 0 {
            continue;
        }
        if let Some(idf) = s.idf(term) {
            score += bm25_term(qtf, dtf, d.length, s.avg_len, idf, p);
        }
    }
    score
}

pub fn tfidf_score(q: &QueryTerms, d: &DocumentTerms, s: &CorpusStats) -> f64 {
    let mut score = 0.0;
    for (term, &qtf) in &q.term_freq {
        let dtf = d.tf(term);
        if dtf == 0 {
            continue;
        }
        if let Some(idf) = s.idf(term) {
            score += tfidf_term(qtf, dtf, idf);
        }
    }
    score
}

impl Scorer {
    pub fn score(&self, q: &QueryTerms, d: &DocumentTerms, s: &CorpusStats) -> f64 {
        match *self {
            Scorer::Bm25(p) => bm25_score(q, d, s, p),
            Scorer::TfIdf => tfidf_score(q, d, s),
        }
    }
}

/// Per-paper term vectors, corpus statistics and an inverted index.
///
/// Documents are stored in the iteration order of the bundle's papers, so a
/// document ordinal doubles as a paper ordinal.
#[derive(Debug, Clone)]
pub struct TextIndex {
    tokenizer: Tokenizer,
    docs: Vec<DocumentTerms>,
    stats: CorpusStats,
    lookup: HashMap<String, u32>,
    postings: HashMap<String, Vec<(u32, u32)>>,
}

impl PartialEq for TextIndex {
    fn eq(&self, other: &Self) -> bool {
        self.tokenizer == other.tokenizer && self.docs == other.docs && self.stats == other.stats
    }
}

pub fn build_index(bundle: &CorpusBundle) -> Result<TextIndex> {
    build_index_with(bundle, Tokenizer::default())
}

pub fn build_index_with(bundle: &CorpusBundle, tokenizer: Tokenizer) -> Result<TextIndex> {
    let docs: Vec<DocumentTerms> = bundle
        .papers
        .values()
        .map(|p| DocumentTerms::new(&p.id, tokenizer.tokenize(&p.document_text())))
        .collect();
    let stats = CorpusStats::from_documents(&docs);
    if stats.doc_count == 0 || stats.avg_len <= 0.0 {
        return Err(Error::IndexEmpty);
    }
    Ok(TextIndex::assemble(tokenizer, docs, stats))
}

impl TextIndex {
    /// Index with no documents, used for empty corpora.
    pub fn empty() -> Self {
        TextIndex::assemble(
            Tokenizer::default(),
            Vec::new(),
            CorpusStats::from_documents(&[]),
        )
    }

    /// Rebuilds an index from persisted parts, checking the statistics
    /// against the documents.
    pub fn from_parts(
        tokenizer: Tokenizer,
        docs: Vec<DocumentTerms>,
        stats: CorpusStats,
    ) -> Result<Self> {
        for d in &docs {
            if d.term_freq.values().map(|&c| u64::from(c)).sum::<u64>() != u64::from(d.length)
                || d.term_freq.values().any(|&c| c == 0)
            {
                return Err(Error::SnapshotInvalid(format!(
                    "document {:?} term counts do not sum to its length",
                    d.paper_id
                )));
            }
        }
        let recomputed = CorpusStats::from_documents(&docs);
        if recomputed.doc_count != stats.doc_count
            || recomputed.doc_freq != stats.doc_freq
            || recomputed.avg_len.to_bits() != stats.avg_len.to_bits()
        {
            return Err(Error::SnapshotInvalid(
                "corpus statistics disagree with documents".into(),
            ));
        }
        Ok(TextIndex::assemble(tokenizer, docs, stats))
    }

    fn assemble(tokenizer: Tokenizer, docs: Vec<DocumentTerms>, stats: CorpusStats) -> Self {
        let mut lookup = HashMap::with_capacity(docs.len());
        let mut postings: HashMap<String, Vec<(u32, u32)>> = HashMap::new();
        for (i, d) in docs.iter().enumerate() {
            lookup.insert(d.paper_id.clone(), i as u32);
            for (term, &tf) in &d.term_freq {
                postings
                    .entry(term.clone())
                    .or_default()
                    .push((i as u32, tf));
            }
        }
        TextIndex {
            tokenizer,
            docs,
            stats,
            lookup,
            postings,
        }
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn documents(&self) -> &[DocumentTerms] {
        &self.docs
    }

    pub fn document(&self, paper_id: &str) -> Option<&DocumentTerms> {
        self.lookup.get(paper_id).map(|&i| &self.docs[i as usize])
    }

    pub fn ordinal(&self, paper_id: &str) -> Option<u32> {
        self.lookup.get(paper_id).copied()
    }

    pub fn query(&self, raw: &str) -> QueryTerms {
        QueryTerms::new(raw, &self.tokenizer)
    }

    /// Scores every document through the inverted index. Entry `i` is the
    /// score of document ordinal `i`; the result is bit-identical to calling
    /// the scalar scorer on each document.
    pub fn score_all(&self, q: &QueryTerms, scorer: Scorer) -> Vec<f64> {
        let mut scores = vec![0.0; self.docs.len()];
        for (term, &qtf) in &q.term_freq {
            let (Some(list), Some(idf)) = (self.postings.get(term), self.stats.idf(term)) else {
                continue;
            };
            for &(doc, dtf) in list {
                let contribution = match scorer {
                    Scorer::Bm25(p) => bm25_term(
                        qtf,
                        dtf,
                        self.docs[doc as usize].length,
                        self.stats.avg_len,
                        idf,
                        p,
                    ),
                    Scorer::TfIdf => tfidf_term(qtf, dtf, idf),
                };
                scores[doc as usize] += contribution;
            }
        }
        scores
    }

    /// Element-wise scoring of the given papers. Unknown ids are skipped.
    pub fn score_documents<S: AsRef<str>>(
        &self,
        q: &QueryTerms,
        ids: &[S],
        scorer: Scorer,
    ) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for id in ids {
            let id = id.as_ref();
            match self.document(id) {
                Some(d) => {
                    out.insert(id.to_string(), scorer.score(q, d, &self.stats));
                }
                None => log::warn!("score_documents: unknown paper id {id:?}"),
            }
        }
        out
    }
}
