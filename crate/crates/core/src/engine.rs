//! Build-once state shared by every request: corpus, text index,
//! collaboration index and citation graph.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::corpus::{parse_corpus, resolve_author, CorpusBundle, ParseReport};
use crate::error::{Error, Result};
use crate::graph::{build_citation_graph, build_collab_index, CollabIndex, WeightedAuthorGraph};
use crate::ranker::{recommend_team, RecommendRequest, TeamRecommendation};
use crate::roles::{classify, partition, Role, RoleCriterion};
use crate::snapshot::Snapshot;
use crate::text_index::{build_index, TextIndex};

#[derive(Debug, Clone)]
pub struct Engine {
    bundle: CorpusBundle,
    index: TextIndex,
    collab: CollabIndex,
    citation: WeightedAuthorGraph,
}

impl PartialEq for Engine {
    fn eq(&self, other: &Self) -> bool {
        self.bundle == other.bundle && self.index == other.index && self.citation == other.citation
    }
}

impl Engine {
    /// An empty corpus, or one whose text yields no tokens, gets an empty
    /// index: every query graph is then all zeros.
    pub fn from_bundle(bundle: CorpusBundle) -> Self {
        let index = match build_index(&bundle) {
            Ok(index) => index,
            Err(Error::IndexEmpty) => TextIndex::empty(),
            Err(e) => unreachable!("build_index only fails with IndexEmpty: {e}"),
        };
        Self::assemble(bundle, index)
    }

    fn assemble(bundle: CorpusBundle, index: TextIndex) -> Self {
        let collab = build_collab_index(&bundle);
        let citation = build_citation_graph(&bundle, &collab);
        Engine {
            bundle,
            index,
            collab,
            citation,
        }
    }

    pub fn from_corpus<R: Read>(input: R) -> Result<(Self, ParseReport)> {
        let (bundle, report) = parse_corpus(BufReader::new(input))?;
        Ok((Self::from_bundle(bundle), report))
    }

    pub fn from_corpus_file(path: impl AsRef<Path>) -> Result<(Self, ParseReport)> {
        Self::from_corpus(File::open(path)?)
    }

    pub fn from_snapshot(snapshot: &Snapshot) -> Result<Self> {
        let bundle = snapshot.corpus()?;
        let index = snapshot.text_index(&bundle)?;
        let engine = Self::assemble(bundle, index);
        snapshot.check_citation_graph(&engine.citation)?;
        Ok(engine)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::capture(&self.bundle, &self.index, &self.citation)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.snapshot().write_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let snapshot = Snapshot::read_from(BufReader::new(File::open(path)?))?;
        Self::from_snapshot(&snapshot)
    }

    pub fn bundle(&self) -> &CorpusBundle {
        &self.bundle
    }

    pub fn index(&self) -> &TextIndex {
        &self.index
    }

    pub fn collab(&self) -> &CollabIndex {
        &self.collab
    }

    pub fn citation_graph(&self) -> &WeightedAuthorGraph {
        &self.citation
    }

    pub fn recommend(&self, request: &RecommendRequest) -> Result<TeamRecommendation> {
        recommend_team(
            &self.bundle,
            &self.index,
            &self.collab,
            &self.citation,
            request,
        )
    }

    /// Role of an author under `criterion`, with the metric it was decided on.
    pub fn classify(&self, name: &str, criterion: &RoleCriterion) -> Result<(Role, u64)> {
        let author = resolve_author(&self.bundle, name)?;
        let metric = criterion.metric(author, &self.citation)?;
        Ok((classify(author, &self.citation, criterion)?, metric))
    }

    pub fn role_histogram(&self, criterion: &RoleCriterion) -> Result<BTreeMap<Role, usize>> {
        Ok(partition(&self.bundle, &self.citation, criterion)?
            .into_iter()
            .map(|(role, names)| (role, names.len()))
            .collect())
    }
}
