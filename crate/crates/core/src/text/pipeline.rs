use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, CoverInstance, CoverSolution};
use crate::solvers::{BpDiagnostics, Solver};

use super::{Cluster, PreprocessConfig, TermWeights, Tokenizer};

/// One sentence after preprocessing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub doc_id: String,
    pub doc_index: usize,
    /// 0 for a document's first sentence.
    pub position: usize,
    pub text: String,
    pub tokens: Vec<String>,
    /// Cost of the sentence: its token count after preprocessing.
    pub word_count: usize,
}

/// Every sentence of the cluster in (document, position) order, including
/// sentences whose token list ends up empty.
pub fn sentence_records(cluster: &Cluster, tokenizer: &Tokenizer) -> Vec<SentenceRecord> {
    let mut out = Vec::new();
    for (doc_index, doc) in cluster.documents.iter().enumerate() {
        for (position, text) in doc.sentences.iter().enumerate() {
            let tokens = tokenizer.tokenize(text);
            out.push(SentenceRecord {
                doc_id: doc.id.clone(),
                doc_index,
                position,
                text: text.clone(),
                word_count: tokens.len(),
                tokens,
            });
        }
    }
    out
}

/// A cluster turned into a coverage instance, with the tables that map
/// node ids back to sentences and terms.
#[derive(Debug, Clone)]
pub struct ClusterInstance {
    pub instance: CoverInstance,
    /// X-node `i` is `sentences[i]`.
    pub sentences: Vec<SentenceRecord>,
    /// Y-node `a` is `terms[a]`.
    pub terms: Vec<String>,
}

/// Sentences become X-nodes with cost = word count (empty sentences are
/// skipped); distinct terms become Y-nodes, in sorted order, weighted from
/// `weights`; an edge joins a sentence to each term it contains.
pub fn build_cover_graph(
    cluster: &Cluster,
    weights: &TermWeights,
    budget: f64,
    cfg: &PreprocessConfig,
) -> Result<ClusterInstance> {
    let tokenizer = Tokenizer::new(cfg);
    let sentences: Vec<SentenceRecord> = sentence_records(cluster, &tokenizer)
        .into_iter()
        .filter(|r| r.word_count > 0)
        .collect();

    let vocab: BTreeSet<&str> = sentences
        .iter()
        .flat_map(|r| r.tokens.iter().map(String::as_str))
        .collect();
    let missing: Vec<String> = vocab
        .iter()
        .filter(|t| weights.get(t).is_none())
        .map(|t| t.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::VocabularyGap(missing));
    }

    let terms: Vec<String> = vocab.iter().map(|t| t.to_string()).collect();
    let term_id: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(a, &t)| (t, a)).collect();
    let y_weights = terms.iter().map(|t| weights.get(t).unwrap()).collect();
    let x_weights = sentences.iter().map(|r| r.word_count as f64).collect();
    let mut edges = Vec::new();
    for (i, r) in sentences.iter().enumerate() {
        let distinct: BTreeSet<usize> = r.tokens.iter().map(|t| term_id[t.as_str()]).collect();
        edges.extend(distinct.into_iter().map(|a| (i, a)));
    }
    let graph = BipartiteGraph::new(x_weights, y_weights, edges)?;
    Ok(ClusterInstance {
        instance: CoverInstance::new(graph, budget)?,
        sentences,
        terms,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    /// Selected sentences ordered by (document, position).
    pub sentences: Vec<String>,
    pub tokens: Vec<String>,
    pub word_count: usize,
    pub solution: CoverSolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<BpDiagnostics>,
}

impl Summary {
    pub fn text(&self) -> String {
        self.sentences.join("\n")
    }
}

/// Extracts a summary of at most `budget` preprocessed words.
pub fn summarize(
    cluster: &Cluster,
    weights: &TermWeights,
    solver: &Solver,
    budget: f64,
    cfg: &PreprocessConfig,
) -> Result<Summary> {
    let built = build_cover_graph(cluster, weights, budget, cfg)?;
    summary_from(&built, solver)
}

/// Runs `solver` on an already built instance.
pub fn summary_from(built: &ClusterInstance, solver: &Solver) -> Result<Summary> {
    let report = solver.run(&built.instance)?;
    let solution = report.solution;
    // selected ids are ascending and X ids follow (document, position) order
    let picked: Vec<&SentenceRecord> = solution.selected.iter().map(|&i| &built.sentences[i]).collect();
    Ok(Summary {
        sentences: picked.iter().map(|r| r.text.clone()).collect(),
        tokens: picked.iter().flat_map(|r| r.tokens.iter().cloned()).collect(),
        word_count: picked.iter().map(|r| r.word_count).sum(),
        solution,
        diagnostics: report.diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{compute_tfidf, Document};

    fn cluster(docs: &[&str]) -> Cluster {
        let documents = docs
            .iter()
            .enumerate()
            .map(|(i, t)| Document::from_text(format!("d{i}"), t, format!("d{i}.txt")))
            .collect();
        Cluster::new("c", documents, Vec::new()).unwrap()
    }

    fn cfg(stop: bool) -> PreprocessConfig {
        PreprocessConfig {
            remove_stopwords: stop,
            apply_stemming: false,
            ..PreprocessConfig::default()
        }
    }

    #[test]
    fn shared_term_has_degree_two() {
        let c = cluster(&["Red apple. Green apple."]);
        let w = &compute_tfidf(std::slice::from_ref(&c), &[], &cfg(false)).unwrap()[0];
        let built = build_cover_graph(&c, w, 10.0, &cfg(false)).unwrap();
        let a = built.terms.iter().position(|t| t == "apple").unwrap();
        assert_eq!(built.instance.graph.y_neighbors(a), &[0, 1]);
        assert_eq!(built.instance.graph.x_weights(), &[2.0, 2.0]);
    }

    #[test]
    fn all_stopword_sentence_is_skipped() {
        let c = cluster(&["The of and. Cats sleep."]);
        let w = &compute_tfidf(std::slice::from_ref(&c), &[], &cfg(true)).unwrap()[0];
        let built = build_cover_graph(&c, w, 10.0, &cfg(true)).unwrap();
        assert_eq!(built.instance.graph.n_x(), 1);
        assert_eq!(built.sentences[0].text, "Cats sleep.");
    }

    #[test]
    fn vocabulary_gap_lists_terms() {
        let c = cluster(&["Alpha beta."]);
        let mut w = TermWeights::default();
        w.weights.insert("alpha".into(), 0.1);
        match build_cover_graph(&c, &w, 10.0, &cfg(false)) {
            Err(Error::VocabularyGap(missing)) => assert_eq!(missing, vec!["beta"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_budget_gives_empty_summary() {
        let c = cluster(&["Alpha beta.", "Gamma delta."]);
        let w = &compute_tfidf(std::slice::from_ref(&c), &[], &cfg(false)).unwrap()[0];
        let s = summarize(&c, w, &Solver::GGreedy, 0.0, &cfg(false)).unwrap();
        assert!(s.sentences.is_empty());
        assert_eq!(s.word_count, 0);
    }
}
