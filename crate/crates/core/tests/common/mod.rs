//! Independent oracles for integration and acceptance tests. Nothing here
//! calls into the library's scoring, graph or ranking code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden.txt")
}

pub fn fixture_text() -> String {
    std::fs::read_to_string(fixture_path()).unwrap()
}

/// Minimal paper view produced by the oracle's own line scanner.
#[derive(Debug, Clone)]
pub struct OPaper {
    pub id: String,
    pub title: String,
    pub authors: Vec<String>,
    pub refs: Vec<String>,
    pub abstract_text: String,
}

/// Scans `#` lines block by block; good enough for well-formed fixtures.
pub fn scan(text: &str) -> Vec<OPaper> {
    let mut out = Vec::new();
    for block in text.split("\n\n") {
        let mut p = OPaper {
            id: String::new(),
            title: String::new(),
            authors: vec![],
            refs: vec![],
            abstract_text: String::new(),
        };
        for line in block.lines() {
            if let Some(v) = line.strip_prefix("#index") {
                p.id = v.trim().into();
            } else if let Some(v) = line.strip_prefix("#*") {
                p.title = v.trim().into();
            } else if let Some(v) = line.strip_prefix("#@") {
                p.authors = v
                    .replace(';', ",")
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
            } else if let Some(v) = line.strip_prefix("#%") {
                p.refs.push(v.trim().into());
            } else if let Some(v) = line.strip_prefix("#!") {
                p.abstract_text = v.trim().into();
            }
        }
        if !p.id.is_empty() {
            out.push(p);
        }
    }
    out
}

/// In-link counts: references to self or to unknown ids are ignored.
pub fn in_links(papers: &[OPaper]) -> BTreeMap<String, u64> {
    let ids: BTreeSet<&str> = papers.iter().map(|p| p.id.as_str()).collect();
    let mut counts: BTreeMap<String, u64> = ids.iter().map(|id| (id.to_string(), 0)).collect();
    for p in papers {
        let uniq: BTreeSet<&str> = p.refs.iter().map(String::as_str).collect();
        for r in uniq {
            if r != p.id && ids.contains(r) {
                *counts.get_mut(r).unwrap() += 1;
            }
        }
    }
    counts
}

pub fn words(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

pub fn doc_words(p: &OPaper) -> Vec<String> {
    let mut w = words(&p.title);
    w.extend(words(&p.abstract_text));
    w
}

pub struct OStats {
    pub n: f64,
    pub avg: f64,
    pub df: BTreeMap<String, f64>,
}

pub fn stats(docs: &[Vec<String>]) -> OStats {
    let mut df = BTreeMap::new();
    let mut total = 0usize;
    for d in docs {
        total += d.len();
        let uniq: BTreeSet<&String> = d.iter().collect();
        for w in uniq {
            *df.entry(w.clone()).or_insert(0.0) += 1.0;
        }
    }
    OStats {
        n: docs.len() as f64,
        avg: total as f64 / docs.len() as f64,
        df,
    }
}

fn count(ws: &[String], w: &str) -> f64 {
    ws.iter().filter(|x| *x == w).count() as f64
}

/// BM25 evaluated straight from the formula over token lists.
pub fn bm25(query: &[String], doc: &[String], s: &OStats, k: f64, b: f64) -> f64 {
    let distinct: BTreeSet<&String> = query.iter().collect();
    let mut total = 0.0;
    for w in distinct {
        let cwq = count(query, w);
        let cwd = count(doc, w);
        let Some(&df) = s.df.get(w) else { continue };
        let cprime = (k + 1.0) * cwd / (cwd + k * (1.0 - b + b * doc.len() as f64 / s.avg));
        total += cwq * cprime * ((s.n + 1.0) / df).ln();
    }
    total
}

pub fn tfidf(query: &[String], doc: &[String], s: &OStats) -> f64 {
    let distinct: BTreeSet<&String> = query.iter().collect();
    let mut total = 0.0;
    for w in distinct {
        if let Some(&df) = s.df.get(w) {
            total += count(query, w) * count(doc, w) * ((s.n + 1.0) / df).ln();
        }
    }
    total
}

/// Unordered co-author pairs (smaller name first) with their joint papers.
pub fn pairs(papers: &[OPaper]) -> BTreeMap<(String, String), Vec<String>> {
    let mut out: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for p in papers {
        for a in &p.authors {
            for b in &p.authors {
                if a < b {
                    out.entry((a.clone(), b.clone()))
                        .or_default()
                        .push(p.id.clone());
                }
            }
        }
    }
    out
}

pub fn norm(values: &[f64]) -> Vec<f64> {
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .map(|v| {
            if max == min {
                1.0
            } else {
                (v - min) / (max - min)
            }
        })
        .collect()
}

/// All-pairs hop counts by Floyd-Warshall over an adjacency list.
pub fn all_pairs_hops(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<u32>>> {
    const INF: u32 = u32::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in edges {
        if a != b {
            d[a][b] = 1;
            d[b][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter()
        .map(|r| r.into_iter().map(|x| (x < INF).then_some(x)).collect())
        .collect()
}

/// Oracle graph: names, weighted edges by name.
pub struct OGraph {
    pub names: Vec<String>,
    pub edges: BTreeMap<(String, String), f64>,
}

impl OGraph {
    fn idx(&self, n: &str) -> usize {
        self.names.iter().position(|x| x == n).unwrap()
    }

    pub fn hops(&self) -> Vec<Vec<Option<u32>>> {
        let e: Vec<(usize, usize)> = self
            .edges
            .keys()
            .map(|(a, b)| (self.idx(a), self.idx(b)))
            .collect();
        all_pairs_hops(self.names.len(), &e)
    }

    pub fn i1(&self, n: &str) -> f64 {
        let ws: Vec<f64> = self
            .edges
            .iter()
            .filter(|((a, b), _)| a == n || b == n)
            .map(|(_, w)| *w)
            .collect();
        if ws.is_empty() {
            0.0
        } else {
            ws.iter().sum::<f64>() / ws.len() as f64
        }
    }

    /// `(name, f)` for every candidate, fully sorted: positive F by F desc then
    /// name, then zero-F by I1 desc then name.
    pub fn full_ranking(&self, seed: &str, candidates: &[String]) -> Vec<(String, f64, f64)> {
        let hops = self.hops();
        let s = self.idx(seed);
        let mut scored: Vec<(String, f64, f64)> = candidates
            .iter()
            .filter(|c| *c != seed)
            .map(|c| {
                let i1 = self.i1(c);
                let f = hops[s][self.idx(c)].map_or(0.0, |h| i1 / h as f64);
                (c.clone(), f, i1)
            })
            .collect();
        scored.sort_by(|a, b| {
            let pa = a.1 > 0.0;
            let pb = b.1 > 0.0;
            pb.cmp(&pa).then_with(|| {
                if pa {
                    b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0))
                } else {
                    b.2.partial_cmp(&a.2).unwrap().then(a.0.cmp(&b.0))
                }
            })
        });
        scored
    }
}

/// Blended graph over the scanned papers for a query, assembled from the
/// oracles above.
pub fn blended(
    papers: &[OPaper],
    cites: &BTreeMap<String, u64>,
    query: &[String],
    use_bm25: bool,
) -> OGraph {
    let docs: BTreeMap<&str, Vec<String>> = papers
        .iter()
        .map(|p| (p.id.as_str(), doc_words(p)))
        .collect();
    let all_docs: Vec<Vec<String>> = docs.values().cloned().collect();
    let s = stats(&all_docs);
    let pr = pairs(papers);
    let keys: Vec<(String, String)> = pr.keys().cloned().collect();
    let cw: Vec<f64> = pr
        .values()
        .map(|ps| ps.iter().map(|p| cites[p] as f64).sum())
        .collect();
    let qw: Vec<f64> = pr
        .values()
        .map(|ps| {
            ps.iter()
                .map(|p| {
                    if use_bm25 {
                        bm25(query, &docs[p.as_str()], &s, 1.5, 0.75)
                    } else {
                        tfidf(query, &docs[p.as_str()], &s)
                    }
                })
                .sum()
        })
        .collect();
    let (nc, nq) = (norm(&cw), norm(&qw));
    let mut names: BTreeSet<String> = BTreeSet::new();
    for p in papers {
        names.extend(p.authors.iter().cloned());
    }
    OGraph {
        names: names.into_iter().collect(),
        edges: keys
            .into_iter()
            .zip(nc.iter().zip(&nq).map(|(a, b)| a + b))
            .collect(),
    }
}
