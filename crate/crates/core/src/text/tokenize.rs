use std::collections::HashSet;
use std::sync::OnceLock;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUILTIN_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

/// Which punctuation is deleted before splitting into tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PunctuationMode {
    /// Delete every non-alphanumeric character; hyphens, slashes and dashes
    /// become token separators.
    #[default]
    All,
    /// Delete only `!`, `(` and `)`.
    BangAndParens,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PreprocessConfig {
    pub remove_stopwords: bool,
    /// Replacement stop-word list; `None` uses the bundled English list.
    pub stopwords: Option<Vec<String>>,
    pub apply_stemming: bool,
    /// Multiplier for terms that occur in a document's first sentence.
    pub first_sentence_boost: f64,
    pub punctuation: PunctuationMode,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            remove_stopwords: false,
            stopwords: None,
            apply_stemming: true,
            first_sentence_boost: 1.5,
            punctuation: PunctuationMode::All,
        }
    }
}

impl PreprocessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.first_sentence_boost >= 1.0 && self.first_sentence_boost.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "first_sentence_boost must be finite and >= 1, got {}",
                self.first_sentence_boost
            )));
        }
        Ok(())
    }
}

/// Parses a stop-word file: one word per line, blank lines and `#` comments ignored.
pub fn parse_stopwords(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn builtin_stopwords() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| parse_stopwords(BUILTIN_STOPWORDS).into_iter().collect())
}

/// Reusable tokenizer for one [`PreprocessConfig`].
pub struct Tokenizer {
    cfg: PreprocessConfig,
    custom_stopwords: Option<HashSet<String>>,
    stemmer: Stemmer,
}

impl Tokenizer {
    pub fn new(cfg: &PreprocessConfig) -> Self {
        Tokenizer {
            cfg: cfg.clone(),
            custom_stopwords: cfg
                .stopwords
                .as_ref()
                .map(|ws| ws.iter().map(|w| w.to_lowercase()).collect()),
            stemmer: Stemmer::create(Algorithm::English),
        }
    }

    fn is_stopword(&self, token: &str) -> bool {
        match &self.custom_stopwords {
            Some(set) => set.contains(token),
            None => builtin_stopwords().contains(token),
        }
    }

    /// Lowercases, strips punctuation, splits on whitespace, then optionally
    /// drops stop words and stems what remains.
    pub fn tokenize(&self, sentence: &str) -> Vec<String> {
        let mut cleaned = String::with_capacity(sentence.len());
        for c in sentence.chars().flat_map(char::to_lowercase) {
            match self.cfg.punctuation {
                PunctuationMode::All => {
                    if c.is_alphanumeric() || c.is_whitespace() {
                        cleaned.push(c);
                    } else if matches!(c, '-' | '/' | '\u{2013}' | '\u{2014}') {
                        cleaned.push(' ');
                    }
                }
                PunctuationMode::BangAndParens => {
                    if !matches!(c, '!' | '(' | ')') {
                        cleaned.push(c);
                    }
                }
            }
        }
        cleaned
            .split_whitespace()
            .filter(|t| !(self.cfg.remove_stopwords && self.is_stopword(t)))
            .map(|t| {
                if self.cfg.apply_stemming {
                    self.stemmer.stem(t).into_owned()
                } else {
                    t.to_string()
                }
            })
            .collect()
    }
}

/// One-shot form of [`Tokenizer::tokenize`].
pub fn tokenize_normalize(sentence: &str, cfg: &PreprocessConfig) -> Vec<String> {
    Tokenizer::new(cfg).tokenize(sentence)
}
