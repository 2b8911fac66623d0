//! Unsupervised hypernymy detection from lexico-syntactic patterns.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`corpus`] streams a pre-annotated (surface, lemma, POS) corpus and chunks
//!    noun phrases.
//! 2. [`pattern`] compiles the Hearst-pattern DSL and [`extract`] scans sentences,
//!    producing [`PairCounts`] that are then filtered by [`PairCounts::postprocess`].
//! 3. [`scorer`] turns the counts into extraction-probability or PPMI matrices and
//!    [`svd`] smooths them with a deterministic truncated SVD. [`dist`] provides the
//!    distributional-inclusion baselines over a sparse context space.
//! 4. [`eval`] runs detection, direction and graded-entailment protocols over any
//!    [`Scorer`].
//!
//! ```
//! use hypernym::{chunk_noun_phrases, parse_corpus_str, PatternSet, extract_corpus, ExtractOptions};
//!
//! let text = "animals\tanimal\tNNS\nsuch\tsuch\tJJ\nas\tas\tIN\ncats\tcat\tNNS\n";
//! let patterns = PatternSet::parse("such_as\tY such as X...").unwrap();
//! let sentences = parse_corpus_str(text).unwrap();
//! assert_eq!(chunk_noun_phrases(&sentences[0]).len(), 2);
//! let counts = extract_corpus(sentences.into_iter().map(Ok), &patterns, &ExtractOptions::default(), 1).unwrap();
//! assert_eq!(counts.count("cat", "animal"), 1);
//! ```

pub mod corpus;
pub mod dist;
pub mod error;
pub mod eval;
pub mod extract;
pub mod model_io;
pub mod pattern;
pub mod rng;
pub mod scorer;
pub mod sparse;
pub mod svd;

pub use corpus::{chunk_noun_phrases, parse_corpus_str, AnnotatedSentence, AnnotatedToken, CorpusReader, NounPhrase};
pub use dist::DistributionalSpace;
pub use error::{Error, Result};
pub use eval::Scorer;
pub use extract::{extract_corpus, match_sentence, ExtractOptions, ExtractionRecord, PairCounts};
pub use pattern::{compile_pattern, PatternSet, PatternSpec};
pub use scorer::{PairMatrix, Vocabulary, Weighting};
pub use sparse::CsrMatrix;
pub use svd::{truncated_svd, SvdModel};
