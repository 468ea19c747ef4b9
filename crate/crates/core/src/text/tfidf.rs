use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{sentence_records, Cluster, PreprocessConfig, SentenceRecord, Tokenizer};

/// Per-cluster term weights, keyed by preprocessed term.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TermWeights {
    pub weights: BTreeMap<String, f64>,
    /// Cluster-level term frequencies before IDF and boosting.
    pub tf: BTreeMap<String, f64>,
}

impl TermWeights {
    pub fn get(&self, term: &str) -> Option<f64> {
        self.weights.get(term).copied()
    }
}

/// TF-IDF weights for each cluster.
///
/// `TF(t, c)` is the count of `t` in cluster `c` over the cluster's token
/// total. `IDF(t) = ln(D / df(t))`, where `D` counts every document in
/// `clusters` and `background`, and `df(t)` the documents containing `t`.
/// Terms that appear in the first sentence of any document of the cluster
/// get their weight multiplied by `cfg.first_sentence_boost`.
pub fn compute_tfidf(
    clusters: &[Cluster],
    background: &[Cluster],
    cfg: &PreprocessConfig,
) -> Result<Vec<TermWeights>> {
    cfg.validate()?;
    if clusters.is_empty() {
        return Err(Error::Empty("compute_tfidf clusters"));
    }
    let tokenizer = Tokenizer::new(cfg);

    let mut doc_count = 0usize;
    let mut df: HashMap<String, usize> = HashMap::new();
    let mut records = Vec::with_capacity(clusters.len());
    for cluster in clusters.iter().chain(background) {
        let recs = sentence_records(cluster, &tokenizer);
        for d in 0..cluster.documents.len() {
            doc_count += 1;
            let terms: BTreeSet<&str> = recs
                .iter()
                .filter(|r| r.doc_index == d)
                .flat_map(|r| r.tokens.iter().map(String::as_str))
                .collect();
            for t in terms {
                *df.entry(t.to_string()).or_default() += 1;
            }
        }
        if records.len() < clusters.len() {
            records.push(recs);
        }
    }

    clusters
        .iter()
        .zip(&records)
        .map(|(cluster, recs)| cluster_weights(cluster, recs, &df, doc_count, cfg))
        .collect()
}

fn cluster_weights(
    cluster: &Cluster,
    recs: &[SentenceRecord],
    df: &HashMap<String, usize>,
    doc_count: usize,
    cfg: &PreprocessConfig,
) -> Result<TermWeights> {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut first_sentence_terms = BTreeSet::new();
    for r in recs {
        for t in &r.tokens {
            *counts.entry(t.clone()).or_default() += 1;
            if r.position == 0 {
                first_sentence_terms.insert(t.as_str());
            }
        }
    }
    let total: usize = counts.values().sum();
    if total == 0 {
        return Err(Error::EmptyCluster(cluster.id.clone()));
    }

    let mut out = TermWeights::default();
    for (term, &count) in &counts {
        let tf = count as f64 / total as f64;
        let idf = (doc_count as f64 / df[term] as f64).ln();
        let mut w = tf * idf;
        if first_sentence_terms.contains(term.as_str()) {
            w *= cfg.first_sentence_boost;
        }
        out.tf.insert(term.clone(), tf);
        out.weights.insert(term.clone(), w);
    }
    Ok(out)
}
