mod common;

use std::collections::BTreeMap;

use common::*;
use cqbg_core::graph::{blend, build_citation_graph, build_collab_index, build_query_graph};
use cqbg_core::ranker::rank_role;
use cqbg_core::roles::{classify, partition};
use cqbg_core::text_index::{build_index, Scorer};
use cqbg_core::{
    parse_corpus, CorpusBundle, CriterionKind, Engine, RecommendRequest, Role, RoleCriterion,
};

fn fixture() -> CorpusBundle {
    parse_corpus(fixture_text().as_bytes()).unwrap().0
}

#[test]
fn golden_counts() {
    let (b, report) = parse_corpus(fixture_text().as_bytes()).unwrap();
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
    assert_eq!(b.papers.len(), 5);
    assert_eq!(b.authors.len(), 7);
    let cites: Vec<(&str, u64)> = b
        .papers
        .values()
        .map(|p| (p.id.as_str(), p.in_citations))
        .collect();
    assert_eq!(
        cites,
        [("p1", 3), ("p2", 1), ("p3", 2), ("p4", 0), ("p5", 0)]
    );
    let alice = &b.authors["Alice Chen"];
    assert_eq!(alice.papers, ["p1", "p2", "p4"]);
    assert_eq!((alice.paper_count, alice.total_citations), (3, 4));
    assert_eq!(b.citation_links(), 6);
}

#[test]
fn citation_counts_match_line_scan() {
    let b = fixture();
    let oracle = in_links(&scan(&fixture_text()));
    let got: BTreeMap<String, u64> = b
        .papers
        .iter()
        .map(|(id, p)| (id.clone(), p.in_citations))
        .collect();
    assert_eq!(got, oracle);
}

#[test]
fn parse_is_deterministic_and_consistent() {
    let (a, b) = (fixture(), fixture());
    assert_eq!(a, b);
    a.validate().unwrap();
    for (name, author) in &a.authors {
        for (id, paper) in &a.papers {
            assert_eq!(author.papers.contains(id), paper.authors.contains(name));
        }
    }
}

#[test]
fn index_stats_match_counting_script() {
    let b = fixture();
    let idx = build_index(&b).unwrap();
    let docs: Vec<Vec<String>> = scan(&fixture_text()).iter().map(doc_words).collect();
    let s = stats(&docs);
    assert_eq!(idx.stats().doc_count as f64, s.n);
    assert_eq!(idx.stats().avg_len, s.avg);
    let df: BTreeMap<String, f64> = idx
        .stats()
        .doc_freq
        .iter()
        .map(|(k, v)| (k.clone(), *v as f64))
        .collect();
    assert_eq!(df, s.df);
}

#[test]
fn batch_scores_match_scalar_and_oracle() {
    let b = fixture();
    let idx = build_index(&b).unwrap();
    let papers = scan(&fixture_text());
    let docs: Vec<Vec<String>> = papers.iter().map(doc_words).collect();
    let s = stats(&docs);
    for query in [
        "network",
        "graph query processing",
        "citation network ranking network",
    ] {
        let q = idx.query(query);
        let qw = words(query);
        let ids: Vec<&str> = b.papers.keys().map(String::as_str).collect();
        let bm = idx.score_documents(&q, &ids, Scorer::default());
        let tf = idx.score_documents(&q, &ids, Scorer::TfIdf);
        for (p, d) in papers.iter().zip(&docs) {
            assert!((bm[&p.id] - bm25(&qw, d, &s, 1.5, 0.75)).abs() < 1e-9);
            assert!((tf[&p.id] - tfidf(&qw, d, &s)).abs() < 1e-9);
            let scalar = Scorer::default().score(&q, idx.document(&p.id).unwrap(), idx.stats());
            assert_eq!(bm[&p.id], scalar);
        }
    }
}

#[test]
fn collab_and_citation_graph_match_brute_force() {
    let b = fixture();
    let collab = build_collab_index(&b);
    let papers = scan(&fixture_text());
    let oracle = pairs(&papers);
    let got: BTreeMap<(String, String), Vec<String>> = collab
        .entries()
        .map(|(a, b, ps)| {
            (
                (a.to_string(), b.to_string()),
                ps.into_iter().map(String::from).collect(),
            )
        })
        .collect();
    assert_eq!(got, oracle);
    assert_eq!(got.len(), 7);

    let cites = in_links(&papers);
    let g = build_citation_graph(&b, &collab);
    for ((a, bb), ps) in &oracle {
        let expected: u64 = ps.iter().map(|p| cites[p]).sum();
        assert_eq!(g.weight(a, bb), Some(expected as f64));
    }
    assert_eq!(g.weight("Carol Wang", "Frank Liu"), Some(0.0));
    assert_eq!(g.weight("Alice Chen", "Carol Wang"), Some(3.0));
}

#[test]
fn degrees_match_recount() {
    let b = fixture();
    let g = build_citation_graph(&b, &build_collab_index(&b));
    let oracle = pairs(&scan(&fixture_text()));
    for name in b.authors.keys() {
        let n = oracle
            .keys()
            .filter(|(x, y)| x == name || y == name)
            .count();
        assert_eq!(g.degree(name).unwrap(), n, "{name}");
    }
    assert_eq!(g.degree("Alice Chen").unwrap(), 4);
    assert_eq!(g.degree("Grace Park").unwrap(), 0);
}

#[test]
fn query_graph_and_blend_match_oracle() {
    let b = fixture();
    let idx = build_index(&b).unwrap();
    let collab = build_collab_index(&b);
    let citation = build_citation_graph(&b, &collab);
    let papers = scan(&fixture_text());
    let cites = in_links(&papers);
    for (query, bm) in [
        ("network", true),
        ("network", false),
        ("graph databases", true),
        ("zebra", true),
    ] {
        let scorer = if bm { Scorer::default() } else { Scorer::TfIdf };
        let qg = build_query_graph(&idx, &collab, &idx.query(query), scorer);
        assert!(qg.same_shape(&citation));
        let blended = blend(&citation, &qg).unwrap();
        let oracle = blended_oracle(&papers, &cites, query, bm);
        for ((a, c), w) in &oracle.edges {
            let got = blended.weight(a, c).unwrap();
            assert!((got - w).abs() < 1e-9, "{query}: {a}-{c} {got} vs {w}");
        }
    }
    let zero = build_query_graph(&idx, &collab, &idx.query("zebra"), Scorer::default());
    assert!(zero.weights().iter().all(|&w| w == 0.0));
}

fn blended_oracle(
    papers: &[OPaper],
    cites: &BTreeMap<String, u64>,
    query: &str,
    bm: bool,
) -> OGraph {
    blended(papers, cites, &words(query), bm)
}

#[test]
fn classify_all_criteria_match_oracle() {
    let b = fixture();
    let g = build_citation_graph(&b, &build_collab_index(&b));
    let papers = scan(&fixture_text());
    let cites = in_links(&papers);
    let op = pairs(&papers);
    let role = |m: u64, t1: u64, t2: u64| {
        if m > t2 {
            Role::PrimeProfessor
        } else if m > t1 {
            Role::AssistantProfessor
        } else {
            Role::Student
        }
    };
    for kind in [
        CriterionKind::Paper,
        CriterionKind::Citation,
        CriterionKind::Neighbor,
    ] {
        for (t1, t2) in [(1, 2), (2, 3), (20, 40), (0, 1)] {
            let c = RoleCriterion::new(kind, t1, t2).unwrap();
            let parts = partition(&b, &g, &c).unwrap();
            let total: usize = parts.values().map(Vec::len).sum();
            assert_eq!(total, b.authors.len());
            for (name, author) in &b.authors {
                let mine: Vec<&OPaper> =
                    papers.iter().filter(|p| p.authors.contains(name)).collect();
                let metric = match kind {
                    CriterionKind::Paper => mine.len() as u64,
                    CriterionKind::Citation => mine.iter().map(|p| cites[&p.id]).sum(),
                    CriterionKind::Neighbor => {
                        op.keys().filter(|(x, y)| x == name || y == name).count() as u64
                    }
                };
                let expected = role(metric, t1, t2);
                assert_eq!(
                    classify(author, &g, &c).unwrap(),
                    expected,
                    "{kind:?} {name}"
                );
                assert!(parts[&expected].contains(name));
            }
        }
    }
}

#[test]
fn rank_role_matches_exhaustive_sort() {
    let b = fixture();
    let engine = Engine::from_bundle(b.clone());
    let papers = scan(&fixture_text());
    let cites = in_links(&papers);
    let c = RoleCriterion::new(CriterionKind::Paper, 1, 2).unwrap();
    let parts = partition(&b, engine.citation_graph(), &c).unwrap();
    for query in ["network", "query processing graph"] {
        let idx = engine.index();
        let qg = build_query_graph(idx, engine.collab(), &idx.query(query), Scorer::default());
        let blended = blend(engine.citation_graph(), &qg).unwrap();
        let oracle = blended_oracle(&papers, &cites, query, true);
        for seed in b.authors.keys() {
            for role in Role::ALL {
                let cands = &parts[&role];
                let full = oracle.full_ranking(seed, cands);
                let got = rank_role(&blended, seed, cands, role, cands.len()).unwrap();
                let names: Vec<&str> = got.members.iter().map(|m| m.author.as_str()).collect();
                let expect: Vec<&str> = full.iter().map(|x| x.0.as_str()).collect();
                assert_eq!(names, expect, "seed {seed} role {role}");
                for (m, (_, f, _)) in got.members.iter().zip(&full) {
                    assert!((m.f - f).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn end_to_end_recommendation_matches_composed_oracle() {
    let b = fixture();
    let engine = Engine::from_bundle(b.clone());
    let papers = scan(&fixture_text());
    let cites = in_links(&papers);
    let c = RoleCriterion::new(CriterionKind::Paper, 1, 2).unwrap();

    let mut req = RecommendRequest::new("Alice Chen", "network");
    req.criterion = c;
    req.top_k = 2;
    let rec = engine.recommend(&req).unwrap();
    assert_eq!(rec.seed.role, Role::PrimeProfessor);

    let oracle = blended_oracle(&papers, &cites, "network", true);
    let parts = partition(&b, engine.citation_graph(), &c).unwrap();
    let asst = oracle.full_ranking("Alice Chen", &parts[&Role::AssistantProfessor]);
    let stud = oracle.full_ranking("Alice Chen", &parts[&Role::Student]);
    assert_eq!(rec.pairs.len(), 2);
    for (i, pair) in rec.pairs.iter().enumerate() {
        assert_eq!(pair.rank, i + 1);
        assert_eq!(pair.members[0].author, asst[i].0);
        assert_eq!(pair.members[0].role, Role::AssistantProfessor);
        assert_eq!(pair.members[1].author, stud[i].0);
        assert_eq!(pair.members[1].role, Role::Student);
        assert!((pair.members[0].f - asst[i].1).abs() < 1e-12);
        assert!((pair.members[1].f - stud[i].1).abs() < 1e-12);
    }
}

#[test]
fn interest_changes_effective_query() {
    let engine = Engine::from_bundle(fixture());
    let mut req = RecommendRequest::new("Bob Li", "zebra");
    req.criterion = RoleCriterion::new(CriterionKind::Paper, 1, 2).unwrap();
    req.interest = Some("graph databases".into());
    let with = engine.recommend(&req).unwrap();
    req.interest_in_query = false;
    let without = engine.recommend(&req).unwrap();
    assert_eq!(with.interest.as_deref(), Some("graph databases"));
    assert_ne!(with, without);
}

#[test]
fn lone_author_gets_no_pairs() {
    let (b, _) = parse_corpus("#*Solo work\n#@Only One\n#index1\n".as_bytes()).unwrap();
    let engine = Engine::from_bundle(b);
    let rec = engine
        .recommend(&RecommendRequest::new("Only One", "solo"))
        .unwrap();
    assert!(rec.pairs.is_empty());
    assert!(!rec.fallback_used);
}

#[test]
fn request_errors() {
    let engine = Engine::from_bundle(fixture());
    let mut req = RecommendRequest::new("Nobody", "network");
    assert!(matches!(
        engine.recommend(&req),
        Err(cqbg_core::Error::AuthorNotFound(_))
    ));
    req.seed_name = "Alice Chen".into();
    req.top_k = 0;
    assert!(matches!(
        engine.recommend(&req),
        Err(cqbg_core::Error::InvalidRequest(_))
    ));
}
