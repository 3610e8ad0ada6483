use std::path::{Path, PathBuf};

use clap::Args;
use sudo_eval::text::{build_bow_vocabulary, featurize_document};

use crate::cli_error::{CliError, CliResult};
use crate::output::{ensure_dir, write_atomic};

/// Bigram bag-of-words featurization: builds a vocabulary on a training
/// corpus (one document per line) and writes standardized feature vectors
/// for an input corpus as canonical CSV.
#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// Training corpus, one document per line
    #[arg(long)]
    pub train_corpus: PathBuf,
    /// Corpus to featurize, one document per line
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = sudo_eval::text::DEFAULT_VOCAB_SIZE)]
    pub vocab_size: usize,
    /// Also dump the vocabulary and its statistics as JSON
    #[arg(long)]
    pub vocab_json: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(text.lines().map(|l| l.to_string()).collect())
}

pub fn run(args: &FeaturizeArgs) -> CliResult<()> {
    let corpus = read_lines(&args.train_corpus)?;
    let vocab = build_bow_vocabulary(&corpus, args.vocab_size)?;
    let documents = read_lines(&args.input)?;

    let mut csv = String::from("id");
    for i in 0..vocab.len() {
        csv.push_str(&format!(",f{i}"));
    }
    csv.push('\n');
    for (i, doc) in documents.iter().enumerate() {
        csv.push_str(&format!("doc{i:05}"));
        for value in featurize_document(doc, &vocab) {
            csv.push_str(&format!(",{value}"));
        }
        csv.push('\n');
    }
    ensure_dir(&args.out)?;
    write_atomic(args.out.join("features.csv"), &csv)?;

    if let Some(path) = &args.vocab_json {
        write_atomic(
            path,
            &serde_json::to_string_pretty(&vocab).expect("vocab serializes"),
        )?;
    }
    println!(
        "featurize: {} documents x {} tokens written to {}",
        documents.len(),
        vocab.len(),
        args.out.display()
    );
    Ok(())
}
