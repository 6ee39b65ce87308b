//! Co-authorship graphs: the collaboration index, the citation graph, the
//! per-query relevance graph and their min-max normalized blend.
//!
//! All three weighted graphs range over the same edge set (the co-authorship
//! relation), so they share one immutable [`Topology`] behind an `Arc` and
//! differ only in their weight vectors.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::corpus::CorpusBundle;
use crate::error::{Error, Result};
use crate::text_index::{QueryTerms, Scorer, TextIndex};

pub type NodeId = u32;

/// Unordered pair of distinct authors, stored with the smaller id first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AuthorPair {
    lo: NodeId,
    hi: NodeId,
}

impl AuthorPair {
    pub fn new(a: NodeId, b: NodeId) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(AuthorPair { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(AuthorPair { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(self) -> NodeId {
        self.lo
    }

    pub fn hi(self) -> NodeId {
        self.hi
    }

    pub fn other(self, n: NodeId) -> NodeId {
        if n == self.lo {
            self.hi
        } else {
            self.lo
        }
    }
}

#[derive(Debug)]
pub struct Topology {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: Vec<AuthorPair>,
    edge_index: HashMap<AuthorPair, u32>,
    adjacency: Vec<Vec<(NodeId, u32)>>,
}

impl Topology {
    /// `names` must be sorted and unique; `pairs` must reference valid ids.
    fn new(names: Vec<String>, pairs: BTreeSet<AuthorPair>) -> Self {
        debug_assert!(names.windows(2).all(|w| w[0] < w[1]));
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as NodeId))
            .collect();
        let edges: Vec<AuthorPair> = pairs.into_iter().collect();
        let mut adjacency = vec![Vec::new(); names.len()];
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (e, pair) in edges.iter().enumerate() {
            adjacency[pair.lo as usize].push((pair.hi, e as u32));
            adjacency[pair.hi as usize].push((pair.lo, e as u32));
            edge_index.insert(*pair, e as u32);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Topology {
            names,
            index,
            edges,
            edge_index,
            adjacency,
        }
    }

    fn same_shape(&self, other: &Topology) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

/// Weighted undirected author graph. Weights are aligned with the shared
/// topology's sorted edge list.
#[derive(Debug, Clone)]
pub struct WeightedAuthorGraph {
    topo: Arc<Topology>,
    weights: Vec<f64>,
}

impl PartialEq for WeightedAuthorGraph {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.topo, &other.topo) || self.topo.same_shape(&other.topo))
            && self.weights.len() == other.weights.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl WeightedAuthorGraph {
    /// Builds a graph from an explicit edge list. Nodes mentioned only by
    /// edges are added; a repeated pair keeps its last weight.
    pub fn from_edges<N, S>(nodes: N, edges: &[(S, S, f64)]) -> Result<Self>
    where
        N: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut names: BTreeSet<String> =
            nodes.into_iter().map(|n| n.as_ref().to_string()).collect();
        for (a, b, _) in edges {
            names.insert(a.as_ref().to_string());
            names.insert(b.as_ref().to_string());
        }
        let names: Vec<String> = names.into_iter().collect();
        let id = |n: &str| names.binary_search_by(|x| x.as_str().cmp(n)).unwrap() as NodeId;
        let mut weighted = BTreeMap::new();
        for (a, b, w) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::InvalidRequest(format!(
                    "edge {a:?}-{b:?} has invalid weight {w}"
                )));
            }
            let pair =
                AuthorPair::new(id(a), id(b)).ok_or_else(|| Error::SameNode(a.to_string()))?;
            weighted.insert(pair, *w);
        }
        let topo = Topology::new(names, weighted.keys().copied().collect());
        Ok(WeightedAuthorGraph {
            topo: Arc::new(topo),
            weights: weighted.into_values().collect(),
        })
    }

    fn with_weights(&self, weights: Vec<f64>) -> Self {
        WeightedAuthorGraph {
            topo: Arc::clone(&self.topo),
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.topo.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.topo.edges.len()
    }

    pub fn names(&self) -> &[String] {
        &self.topo.names
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.topo.names[id as usize]
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.topo.index.get(name).copied()
    }

    fn require(&self, name: &str) -> Result<NodeId> {
        self.node_id(name)
            .ok_or_else(|| Error::AuthorNotFound(name.to_string()))
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pairs(&self) -> &[AuthorPair] {
        &self.topo.edges
    }

    /// Edges as `(name, name, weight)` with the lexicographically smaller name first.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.topo
            .edges
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| (self.name(p.lo), self.name(p.hi), w))
    }

    pub fn weight(&self, a: &str, b: &str) -> Option<f64> {
        let pair = AuthorPair::new(self.node_id(a)?, self.node_id(b)?)?;
        self.topo
            .edge_index
            .get(&pair)
            .map(|&e| self.weights[e as usize])
    }

    /// Neighbors of `n` with the connecting edge weight, in id order.
    pub fn neighbors(&self, n: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.topo.adjacency[n as usize]
            .iter()
            .map(|&(m, e)| (m, self.weights[e as usize]))
    }

    pub fn degree_of(&self, n: NodeId) -> usize {
        self.topo.adjacency[n as usize].len()
    }

    pub fn degree(&self, author: &str) -> Result<usize> {
        Ok(self.degree_of(self.require(author)?))
    }

    /// Whether both graphs range over the same nodes and edges.
    pub fn same_shape(&self, other: &WeightedAuthorGraph) -> bool {
        Arc::ptr_eq(&self.topo, &other.topo) || self.topo.same_shape(&other.topo)
    }

    /// Unweighted hop count of a shortest path, `None` when disconnected.
    pub fn hop_distance(&self, src: &str, dst: &str) -> Result<Option<u32>> {
        let s = self.require(src)?;
        let t = self.require(dst)?;
        if s == t {
            return Err(Error::SameNode(src.to_string()));
        }
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[s as usize] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let next = dist[u as usize] + 1;
            for &(v, _) in &self.topo.adjacency[u as usize] {
                if dist[v as usize] == u32::MAX {
                    if v == t {
                        return Ok(Some(next));
                    }
                    dist[v as usize] = next;
                    queue.push_back(v);
                }
            }
        }
        Ok(None)
    }

    /// Single-source hop counts to every node (`Some(0)` for the source).
    pub fn hop_distances_from(&self, src: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count()];
        let mut queue = VecDeque::new();
        dist[src as usize] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let next = dist[u as usize].map(|d| d + 1);
            for &(v, _) in &self.topo.adjacency[u as usize] {
                if dist[v as usize].is_none() {
                    dist[v as usize] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Min-max normalized copy of this graph.
    pub fn normalized(&self) -> Result<Self> {
        Ok(self.with_weights(minmax_normalize(&self.weights)?))
    }

    /// Replaces the weights, keeping the topology.
    pub fn reweighted(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.weights.len() {
            return Err(Error::GraphShapeMismatch);
        }
        Ok(self.with_weights(weights))
    }
}

/// Maps weights to `(w - min) / (max - min)`. When every weight is equal the
/// result is all ones, so a constant-weight graph keeps its edges in a blend.
pub fn minmax_normalize(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let (min, max) = weights
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| {
            (lo.min(w), hi.max(w))
        });
    if max == min {
        return Ok(vec![1.0; weights.len()]);
    }
    let span = max - min;
    Ok(weights.iter().map(|&w| (w - min) / span).collect())
}

/// Sum of the min-max normalized citation and query weights on each edge.
/// Two empty graphs blend to an empty graph.
pub fn blend(
    citation: &WeightedAuthorGraph,
    query: &WeightedAuthorGraph,
) -> Result<WeightedAuthorGraph> {
    if !citation.same_shape(query) {
        return Err(Error::GraphShapeMismatch);
    }
    if citation.edge_count() == 0 {
        return Ok(citation.with_weights(Vec::new()));
    }
    let c = minmax_normalize(&citation.weights)?;
    let q = minmax_normalize(&query.weights)?;
    Ok(citation.with_weights(c.iter().zip(&q).map(|(a, b)| a + b).collect()))
}

/// For every co-author pair, the papers (as ordinals into the bundle's
/// paper order) the two wrote together.
#[derive(Debug, Clone)]
pub struct CollabIndex {
    topo: Arc<Topology>,
    paper_ids: Vec<String>,
    papers: Vec<Vec<u32>>,
}

pub fn build_collab_index(bundle: &CorpusBundle) -> CollabIndex {
    let names: Vec<String> = bundle.authors.keys().cloned().collect();
    let id_of: HashMap<&str, NodeId> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i as NodeId))
        .collect();
    let mut by_pair: BTreeMap<AuthorPair, Vec<u32>> = BTreeMap::new();
    let mut paper_ids = Vec::with_capacity(bundle.papers.len());
    for (ordinal, paper) in bundle.papers.values().enumerate() {
        paper_ids.push(paper.id.clone());
        let ids: Vec<NodeId> = paper.authors.iter().map(|a| id_of[a.as_str()]).collect();
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                if let Some(pair) = AuthorPair::new(a, b) {
                    by_pair.entry(pair).or_default().push(ordinal as u32);
                }
            }
        }
    }
    let topo = Topology::new(names, by_pair.keys().copied().collect());
    CollabIndex {
        topo: Arc::new(topo),
        paper_ids,
        papers: by_pair.into_values().collect(),
    }
}

impl CollabIndex {
    pub fn pair_count(&self) -> usize {
        self.papers.len()
    }

    pub fn paper_count(&self) -> usize {
        self.paper_ids.len()
    }

    /// Joint papers of two authors, by record id.
    pub fn papers_of(&self, a: &str, b: &str) -> Vec<&str> {
        let (Some(&x), Some(&y)) = (self.topo.index.get(a), self.topo.index.get(b)) else {
            return Vec::new();
        };
        AuthorPair::new(x, y)
            .and_then(|p| self.topo.edge_index.get(&p))
            .map(|&e| {
                self.papers[e as usize]
                    .iter()
                    .map(|&o| self.paper_ids[o as usize].as_str())
                    .collect()
            })
            .unwrap_or_default()
    }

    /// `(name, name, joint paper ids)` for every collaborating pair.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, Vec<&str>)> + '_ {
        self.topo.edges.iter().zip(&self.papers).map(|(p, ps)| {
            (
                self.topo.names[p.lo as usize].as_str(),
                self.topo.names[p.hi as usize].as_str(),
                ps.iter()
                    .map(|&o| self.paper_ids[o as usize].as_str())
                    .collect(),
            )
        })
    }

    /// Graph over the collaboration edges with the given per-edge weights.
    pub fn graph_with(&self, weights: Vec<f64>) -> Result<WeightedAuthorGraph> {
        if weights.len() != self.papers.len() {
            return Err(Error::GraphShapeMismatch);
        }
        Ok(WeightedAuthorGraph {
            topo: Arc::clone(&self.topo),
            weights,
        })
    }

    fn sum_per_edge(&self, per_paper: impl Fn(u32) -> f64) -> Vec<f64> {
        self.papers
            .iter()
            .map(|ps| ps.iter().fold(0.0, |acc, &o| acc + per_paper(o)))
            .collect()
    }
}

/// Edge weight = sum of in-citations over the pair's joint papers. Pairs whose
/// joint papers are uncited stay in the graph with weight 0.
pub fn build_citation_graph(bundle: &CorpusBundle, collab: &CollabIndex) -> WeightedAuthorGraph {
    let cites: Vec<u64> = bundle.papers.values().map(|p| p.in_citations).collect();
    let weights = collab
        .papers
        .iter()
        .map(|ps| ps.iter().map(|&o| cites[o as usize]).sum::<u64>() as f64)
        .collect();
    WeightedAuthorGraph {
        topo: Arc::clone(&collab.topo),
        weights,
    }
}

/// Edge weight = sum of query relevance over the pair's joint papers.
pub fn build_query_graph(
    index: &TextIndex,
    collab: &CollabIndex,
    q: &QueryTerms,
    scorer: Scorer,
) -> WeightedAuthorGraph {
    let scores = index.score_all(q, scorer);
    let aligned = scores.len() == collab.paper_ids.len()
        && index
            .documents()
            .iter()
            .zip(&collab.paper_ids)
            .all(|(d, id)| d.paper_id == *id);
    let weights = if aligned {
        collab.sum_per_edge(|o| scores[o as usize])
    } else {
        let remap: Vec<f64> = collab
            .paper_ids
            .iter()
            .map(|id| index.ordinal(id).map_or(0.0, |i| scores[i as usize]))
            .collect();
        collab.sum_per_edge(|o| remap[o as usize])
    };
    WeightedAuthorGraph {
        topo: Arc::clone(&collab.topo),
        weights,
    }
}
