//! Bigram bag-of-words featurization for raw-text corpora.
//!
//! Documents are lowercased, punctuation is replaced by spaces, and adjacent
//! whitespace-separated tokens form bigrams. The vocabulary keeps the most
//! frequent bigrams of the training corpus (ties broken lexicographically)
//! and each dimension is standardized by the training mean and standard
//! deviation of that bigram's per-document count.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_VOCAB_SIZE: usize = 1000;
pub const DEFAULT_STD_FLOOR: f64 = 1e-8;

/// Fixed bigram vocabulary with per-token standardization statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowVocabulary {
    tokens: Vec<String>,
    token_mean: Vec<f64>,
    token_std: Vec<f64>,
}

impl BowVocabulary {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn token_mean(&self) -> &[f64] {
        &self.token_mean
    }

    pub fn token_std(&self) -> &[f64] {
        &self.token_std
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Bigrams of a document: lowercase, punctuation stripped to spaces,
/// adjacent token pairs joined by a single space.
pub fn bigrams(doc: &str) -> Vec<String> {
    let cleaned: String = doc
        .to_lowercase()
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    let tokens: Vec<&str> = cleaned.split_whitespace().collect();
    tokens
        .windows(2)
        .map(|w| format!("{} {}", w[0], w[1]))
        .collect()
}

fn bigram_counts(doc: &str) -> HashMap<String, f64> {
    let mut counts = HashMap::new();
    for bigram in bigrams(doc) {
        *counts.entry(bigram).or_insert(0.0) += 1.0;
    }
    counts
}

/// Builds the vocabulary of the `vocab_size` most frequent training bigrams
/// (capped at the distinct bigram count) with standardization statistics
/// computed across the training documents.
pub fn build_bow_vocabulary(corpus: &[String], vocab_size: usize) -> Result<BowVocabulary> {
    build_bow_vocabulary_with_floor(corpus, vocab_size, DEFAULT_STD_FLOOR)
}

/// As [`build_bow_vocabulary`] with an explicit floor applied to
/// zero-variance token standard deviations.
pub fn build_bow_vocabulary_with_floor(
    corpus: &[String],
    vocab_size: usize,
    std_floor: f64,
) -> Result<BowVocabulary> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if vocab_size == 0 {
        return Err(Error::InvalidVocabSize);
    }

    let per_doc: Vec<HashMap<String, f64>> = corpus.iter().map(|d| bigram_counts(d)).collect();

    let mut totals: HashMap<&str, f64> = HashMap::new();
    for counts in &per_doc {
        for (bigram, count) in counts {
            *totals.entry(bigram.as_str()).or_insert(0.0) += count;
        }
    }

    let mut ranked: Vec<(&str, f64)> = totals.into_iter().collect();
    // Descending frequency, lexicographic among equals.
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    ranked.truncate(vocab_size);
    let tokens: Vec<String> = ranked.into_iter().map(|(t, _)| t.to_string()).collect();

    let n = corpus.len() as f64;
    let mut token_mean = vec![0.0; tokens.len()];
    let mut token_std = vec![0.0; tokens.len()];
    for (v, token) in tokens.iter().enumerate() {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for counts in &per_doc {
            let c = counts.get(token).copied().unwrap_or(0.0);
            sum += c;
            sum_sq += c * c;
        }
        let mean = sum / n;
        let var = (sum_sq / n - mean * mean).max(0.0);
        token_mean[v] = mean;
        token_std[v] = var.sqrt().max(std_floor);
    }

    Ok(BowVocabulary {
        tokens,
        token_mean,
        token_std,
    })
}

/// Standardized bigram-count vector of a document. Bigrams outside the
/// vocabulary are ignored.
pub fn featurize_document(doc: &str, vocab: &BowVocabulary) -> Vec<f64> {
    let counts = bigram_counts(doc);
    vocab
        .tokens
        .iter()
        .enumerate()
        .map(|(v, token)| {
            let c = counts.get(token).copied().unwrap_or(0.0);
            (c - vocab.token_mean[v]) / vocab.token_std[v]
        })
        .collect()
}
