//! Extractive summarization as maximum coverage: sentences are X-nodes
//! costing their word count, terms are Y-nodes weighted by TF-IDF.

mod corpus;
mod pipeline;
mod sentences;
mod tfidf;
mod tokenize;

pub use corpus::{load_cluster, load_corpus, Cluster, Document};
pub use pipeline::{
    build_cover_graph, sentence_records, summarize, summary_from, ClusterInstance, SentenceRecord, Summary,
};
pub use sentences::split_sentences;
pub use tfidf::{compute_tfidf, TermWeights};
pub use tokenize::{
    builtin_stopwords, parse_stopwords, tokenize_normalize, PreprocessConfig, PunctuationMode, Tokenizer,
};
