//! Academic role assignment by thresholding one of three author metrics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{AuthorRecord, CorpusBundle};
use crate::error::{Error, Result};
use crate::graph::WeightedAuthorGraph;

/// Ordered `Student < AssistantProfessor < PrimeProfessor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Student,
    AssistantProfessor,
    PrimeProfessor,
}

impl Role {
    /// Highest role first.
    pub const ALL: [Role; 3] = [
        Role::PrimeProfessor,
        Role::AssistantProfessor,
        Role::Student,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::PrimeProfessor => "prime_professor",
            Role::AssistantProfessor => "assistant_professor",
            Role::Student => "student",
        }
    }

    /// The two roles a seed of this role needs, highest first.
    pub fn complement(self) -> [Role; 2] {
        match self {
            Role::PrimeProfessor => [Role::AssistantProfessor, Role::Student],
            Role::AssistantProfessor => [Role::PrimeProfessor, Role::Student],
            Role::Student => [Role::PrimeProfessor, Role::AssistantProfessor],
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "prime" | "prime_professor" => Ok(Role::PrimeProfessor),
            "assistant" | "assistant_professor" => Ok(Role::AssistantProfessor),
            "student" => Ok(Role::Student),
            other => Err(Error::InvalidRequest(format!("unknown role {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    /// Number of papers published.
    Paper,
    /// Total in-citations over the author's papers.
    Citation,
    /// Number of distinct co-authors.
    Neighbor,
}

impl CriterionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionKind::Paper => "paper",
            CriterionKind::Citation => "citation",
            CriterionKind::Neighbor => "neighbor",
        }
    }
}

impl FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(CriterionKind::Paper),
            "citation" => Ok(CriterionKind::Citation),
            "neighbor" | "neighbour" => Ok(CriterionKind::Neighbor),
            other => Err(Error::InvalidRequest(format!(
                "unknown criterion {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleCriterion {
    kind: CriterionKind,
    t1: u64,
    t2: u64,
}

impl Default for RoleCriterion {
    /// Paper count with thresholds 20 and 40.
    fn default() -> Self {
        RoleCriterion {
            kind: CriterionKind::Paper,
            t1: 20,
            t2: 40,
        }
    }
}

impl RoleCriterion {
    pub fn new(kind: CriterionKind, t1: u64, t2: u64) -> Result<Self> {
        if t1 >= t2 {
            return Err(Error::InvalidCriterion { t1, t2 });
        }
        Ok(RoleCriterion { kind, t1, t2 })
    }

    pub fn kind(&self) -> CriterionKind {
        self.kind
    }

    pub fn thresholds(&self) -> (u64, u64) {
        (self.t1, self.t2)
    }

    /// `m > t2` is a prime professor, `t1 < m <= t2` an assistant professor,
    /// anything else a student.
    pub fn role_for(&self, metric: u64) -> Role {
        if metric > self.t2 {
            Role::PrimeProfessor
        } else if metric > self.t1 {
            Role::AssistantProfessor
        } else {
            Role::Student
        }
    }

    pub fn metric(&self, author: &AuthorRecord, graph: &WeightedAuthorGraph) -> Result<u64> {
        Ok(match self.kind {
            CriterionKind::Paper => author.paper_count,
            CriterionKind::Citation => author.total_citations,
            CriterionKind::Neighbor => graph.degree(&author.name)? as u64,
        })
    }
}

pub fn classify(
    author: &AuthorRecord,
    graph: &WeightedAuthorGraph,
    c: &RoleCriterion,
) -> Result<Role> {
    Ok(c.role_for(c.metric(author, graph)?))
}

/// Splits every author in the bundle into the three role sets.
pub fn partition(
    bundle: &CorpusBundle,
    graph: &WeightedAuthorGraph,
    c: &RoleCriterion,
) -> Result<BTreeMap<Role, Vec<String>>> {
    let mut out: BTreeMap<Role, Vec<String>> = Role::ALL.iter().map(|&r| (r, Vec::new())).collect();
    for author in bundle.authors.values() {
        let role = classify(author, graph, c)?;
        out.get_mut(&role)
            .expect("all roles present")
            .push(author.name.clone());
    }
    Ok(out)
}
