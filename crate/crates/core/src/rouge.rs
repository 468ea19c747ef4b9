//! ROUGE-1 recall against one or more reference summaries.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How overlapping words are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RougeMode {
    /// Token multisets; each reference occurrence matches at most one
    /// summary occurrence.
    #[default]
    Multiset,
    /// Distinct word types on both sides.
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub value: f64,
    pub match_count: usize,
    pub reference_length: usize,
}

fn counts<S: AsRef<str>>(tokens: &[S]) -> HashMap<&str, usize> {
    let mut m = HashMap::new();
    for t in tokens {
        *m.entry(t.as_ref()).or_default() += 1;
    }
    m
}

pub fn rouge1<S: AsRef<str>, R: AsRef<str>>(summary: &[S], reference: &[R]) -> Result<RougeScore> {
    rouge1_with(summary, reference, RougeMode::Multiset)
}

pub fn rouge1_with<S: AsRef<str>, R: AsRef<str>>(
    summary: &[S],
    reference: &[R],
    mode: RougeMode,
) -> Result<RougeScore> {
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let (match_count, reference_length) = match mode {
        RougeMode::Multiset => {
            let sum = counts(summary);
            let matched = counts(reference)
                .into_iter()
                .map(|(t, n)| n.min(sum.get(t).copied().unwrap_or(0)))
                .sum();
            (matched, reference.len())
        }
        RougeMode::Set => {
            let sum: HashSet<&str> = summary.iter().map(AsRef::as_ref).collect();
            let refs: HashSet<&str> = reference.iter().map(AsRef::as_ref).collect();
            (refs.intersection(&sum).count(), refs.len())
        }
    };
    Ok(RougeScore {
        value: match_count as f64 / reference_length as f64,
        match_count,
        reference_length,
    })
}

/// Mean score over several references. The returned counts are summed over
/// references; `value` is the arithmetic mean of the per-reference values.
pub fn rouge1_multi<S: AsRef<str>, R: AsRef<str>>(
    summary: &[S],
    references: &[Vec<R>],
    mode: RougeMode,
) -> Result<RougeScore> {
    if references.is_empty() {
        return Err(Error::Empty("rouge1_multi references"));
    }
    let scores = references
        .iter()
        .map(|r| rouge1_with(summary, r, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(RougeScore {
        value: mean(scores.iter().map(|s| s.value)),
        match_count: scores.iter().map(|s| s.match_count).sum(),
        reference_length: scores.iter().map(|s| s.reference_length).sum(),
    })
}

/// Unweighted mean over per-cluster scores.
pub fn corpus_rouge(per_cluster: &[f64]) -> Result<f64> {
    if per_cluster.is_empty() {
        return Err(Error::Empty("corpus_rouge clusters"));
    }
    Ok(mean(per_cluster.iter().copied()))
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = xs.len() as f64;
    xs.sum::<f64>() / n
}
