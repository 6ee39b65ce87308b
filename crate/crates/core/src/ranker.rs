//! Candidate scoring and team assembly.
//!
//! A candidate `n_j` for seed `n_i` scores `F = I1 · I2`, where `I1` is the
//! mean blended weight of the edges incident to `n_j` and `I2` is the
//! reciprocal hop distance between `n_i` and `n_j`. Unreachable candidates
//! have no `I2` and score 0.

use std::cmp::Ordering;

use serde::Serialize;

use crate::corpus::{resolve_author, CorpusBundle};
use crate::error::{Error, Result};
use crate::graph::{blend, build_query_graph, CollabIndex, NodeId, WeightedAuthorGraph};
use crate::roles::{classify, partition, Role, RoleCriterion};
use crate::text_index::{QueryTerms, Scorer, TextIndex};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScore {
    #[serde(rename = "name")]
    pub author: String,
    pub role: Role,
    pub i1: f64,
    pub i2: Option<f64>,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// The m-th pair joins the m-th ranked candidate of each missing role.
    #[default]
    Aligned,
    /// Every combination of the two ranked lists, ordered by summed F.
    Product,
}

impl std::str::FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aligned" => Ok(Pairing::Aligned),
            "product" => Ok(Pairing::Product),
            other => Err(Error::InvalidRequest(format!("unknown pairing {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecommendRequest {
    pub seed_name: String,
    pub seed_role: Option<Role>,
    pub query: String,
    pub interest: Option<String>,
    pub top_k: usize,
    pub scorer: Scorer,
    pub criterion: RoleCriterion,
    pub pairing: Pairing,
    /// Append the research interest's tokens to the query before scoring.
    pub interest_in_query: bool,
}

impl RecommendRequest {
    pub fn new(seed_name: impl Into<String>, query: impl Into<String>) -> Self {
        RecommendRequest {
            seed_name: seed_name.into(),
            seed_role: None,
            query: query.into(),
            interest: None,
            top_k: 5,
            scorer: Scorer::default(),
            criterion: RoleCriterion::default(),
            pairing: Pairing::Aligned,
            interest_in_query: true,
        }
    }

    /// Query terms actually used for scoring.
    pub fn query_terms(&self, index: &TextIndex) -> QueryTerms {
        let tok = index.tokenizer();
        let mut tokens = tok.tokenize(&self.query);
        if self.interest_in_query {
            if let Some(interest) = &self.interest {
                tokens.extend(tok.tokenize(interest));
            }
        }
        QueryTerms::from_tokens(self.query.clone(), tokens)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Seed {
    pub name: String,
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeamPair {
    pub rank: usize,
    pub members: Vec<CandidateScore>,
}

/// Field order matches the JSON output contract.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeamRecommendation {
    pub seed: Seed,
    pub query: String,
    pub interest: Option<String>,
    pub k: usize,
    pub fallback_used: bool,
    pub pairs: Vec<TeamPair>,
}

fn require(graph: &WeightedAuthorGraph, name: &str) -> Result<NodeId> {
    graph
        .node_id(name)
        .ok_or_else(|| Error::AuthorNotFound(name.to_string()))
}

fn mean_incident(graph: &WeightedAuthorGraph, n: NodeId) -> f64 {
    let degree = graph.degree_of(n);
    if degree == 0 {
        return 0.0;
    }
    graph.neighbors(n).fold(0.0, |acc, (_, w)| acc + w) / degree as f64
}

/// Mean weight of the edges incident to `author`; 0 for an isolated node.
pub fn avg_incident_weight(graph: &WeightedAuthorGraph, author: &str) -> Result<f64> {
    Ok(mean_incident(graph, require(graph, author)?))
}

/// `1 / hops` between the two authors, `None` when they are disconnected.
pub fn proximity(graph: &WeightedAuthorGraph, seed: &str, candidate: &str) -> Result<Option<f64>> {
    Ok(graph
        .hop_distance(seed, candidate)?
        .map(|h| 1.0 / f64::from(h)))
}

fn candidate(
    graph: &WeightedAuthorGraph,
    n: NodeId,
    hops: Option<u32>,
    role: Role,
) -> CandidateScore {
    let i1 = mean_incident(graph, n);
    let i2 = hops.map(|h| 1.0 / f64::from(h));
    let f = i2.map_or(0.0, |i2| i1 * i2);
    CandidateScore {
        author: graph.name(n).to_string(),
        role,
        i1,
        i2,
        f,
    }
}

pub fn f_score(
    graph: &WeightedAuthorGraph,
    seed: &str,
    cand: &str,
    role: Role,
) -> Result<CandidateScore> {
    let hops = graph.hop_distance(seed, cand)?;
    Ok(candidate(graph, require(graph, cand)?, hops, role))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedRole {
    pub members: Vec<CandidateScore>,
    /// Whether zero-score candidates were appended to fill the list.
    pub fallback_used: bool,
}

fn by_f_then_name(a: &CandidateScore, b: &CandidateScore) -> Ordering {
    b.f.partial_cmp(&a.f)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.author.cmp(&b.author))
}

fn by_i1_then_name(a: &CandidateScore, b: &CandidateScore) -> Ordering {
    b.i1.partial_cmp(&a.i1)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.author.cmp(&b.author))
}

/// Top `k` candidates by F (descending, ties by name). Zero-F candidates
/// only fill a shortfall, ordered by I1 then name. The seed is never ranked.
pub fn rank_role<S: AsRef<str>>(
    graph: &WeightedAuthorGraph,
    seed: &str,
    candidates: &[S],
    role: Role,
    k: usize,
) -> Result<RankedRole> {
    let seed_id = require(graph, seed)?;
    let dist = graph.hop_distances_from(seed_id);
    let mut positive = Vec::new();
    let mut zero = Vec::new();
    for name in candidates {
        let id = require(graph, name.as_ref())?;
        if id == seed_id {
            continue;
        }
        let c = candidate(graph, id, dist[id as usize], role);
        if c.f > 0.0 {
            positive.push(c);
        } else {
            zero.push(c);
        }
    }
    positive.sort_by(by_f_then_name);
    positive.truncate(k);
    let shortfall = k - positive.len();
    let fallback_used = shortfall > 0 && !zero.is_empty();
    if fallback_used {
        zero.sort_by(by_i1_then_name);
        positive.extend(zero.into_iter().take(shortfall));
    }
    Ok(RankedRole {
        members: positive,
        fallback_used,
    })
}

fn pair_up(
    first: Vec<CandidateScore>,
    second: Vec<CandidateScore>,
    k: usize,
    pairing: Pairing,
) -> Vec<TeamPair> {
    let combos: Vec<(CandidateScore, CandidateScore)> = match pairing {
        Pairing::Aligned => first.into_iter().zip(second).collect(),
        Pairing::Product => {
            let mut all: Vec<_> = first
                .iter()
                .flat_map(|a| second.iter().map(move |b| (a.clone(), b.clone())))
                .collect();
            all.sort_by(|(a1, b1), (a2, b2)| {
                (a2.f + b2.f)
                    .partial_cmp(&(a1.f + b1.f))
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| a1.author.cmp(&a2.author))
                    .then_with(|| b1.author.cmp(&b2.author))
            });
            all
        }
    };
    combos
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (a, b))| TeamPair {
            rank: i + 1,
            members: vec![a, b],
        })
        .collect()
}

/// Full recommendation: blend the citation graph with the request's query
/// graph, settle the seed's role, rank the two missing roles and pair them.
pub fn recommend_team(
    bundle: &CorpusBundle,
    index: &TextIndex,
    collab: &CollabIndex,
    citation: &WeightedAuthorGraph,
    request: &RecommendRequest,
) -> Result<TeamRecommendation> {
    if request.top_k < 1 {
        return Err(Error::InvalidRequest("k must be at least 1".into()));
    }
    let seed = resolve_author(bundle, &request.seed_name)?;

    let q = request.query_terms(index);
    let query_graph = build_query_graph(index, collab, &q, request.scorer);
    let blended = blend(citation, &query_graph)?;

    let seed_role = match request.seed_role {
        Some(r) => r,
        None => classify(seed, citation, &request.criterion)?,
    };
    let roles = partition(bundle, citation, &request.criterion)?;
    let [first, second] = seed_role.complement();
    let k = request.top_k;
    let a = rank_role(&blended, &seed.name, &roles[&first], first, k)?;
    let b = rank_role(&blended, &seed.name, &roles[&second], second, k)?;

    let pairs = pair_up(a.members, b.members, k, request.pairing);
    let fallback_used = pairs.iter().flat_map(|p| &p.members).any(|m| m.f == 0.0);

    Ok(TeamRecommendation {
        seed: Seed {
            name: seed.name.clone(),
            role: seed_role,
        },
        query: request.query.clone(),
        interest: request.interest.clone(),
        k,
        fallback_used,
        pairs,
    })
}
