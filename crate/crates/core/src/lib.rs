//! Academic team recommendation over a citation-query blended co-authorship graph.
//!
//! The pipeline parses an Arnetminer-style citation dump ([`corpus`]), indexes
//! title and abstract text for BM25 / TF-IDF relevance ([`text_index`]), builds
//! the citation, query and blended author graphs ([`graph`]), assigns academic
//! roles by threshold ([`roles`]) and ranks role-complete team pairs for a seed
//! researcher ([`ranker`]). [`engine`] ties the pieces together and
//! [`snapshot`] persists the query-independent state.

pub mod cli;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod graph;
pub mod ranker;
pub mod roles;
pub mod snapshot;
pub mod text_index;

pub use corpus::{parse_corpus, AuthorRecord, CorpusBundle, PaperRecord, ParseReport};
pub use engine::Engine;
pub use error::{Error, Result};
pub use graph::{AuthorPair, CollabIndex, WeightedAuthorGraph};
pub use ranker::{CandidateScore, Pairing, RecommendRequest, TeamPair, TeamRecommendation};
pub use roles::{CriterionKind, Role, RoleCriterion};
pub use text_index::{Bm25Params, QueryTerms, Scorer, TextIndex, Tokenizer};
