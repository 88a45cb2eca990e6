//! Mining the monetary-policy stance of FOMC communications.
//!
//! This crate implements the non-neural end of a stance-mining pipeline for
//! Federal Open Market Committee text (meeting minutes, press conference
//! transcripts, and speeches):
//!
//! - [`corpus`]: document/sentence data model, sentence tokenization, and
//!   CSV/raw-text ingestion.
//! - [`lexicon`]: the five-panel policy dictionary, target-sentence
//!   filtering, and speech-title filtering.
//! - [`splitter`]: contrast-keyword splitting of sentences that carry
//!   opposing sub-stances.
//! - [`stance`]: the rule-based hawkish/dovish/neutral classifier plus a
//!   label-source abstraction for externally supplied model predictions.
//! - [`eval`]: seeded 80:20 splits, weighted F1, seed averaging, and
//!   annotation agreement.
//! - [`measures`]: the per-document hawkishness measure
//!   `(hawkish - dovish) / total` and its date-ordered series.
//! - [`econ`]: year-over-year inflation transforms, release alignment,
//!   Pearson correlation, and simple OLS with Student-t p-values.
//! - [`distributions`]: dependency-free log-gamma, regularized incomplete
//!   beta, and Student-t CDF.
//! - [`backtest`]: sign-of-measure long/short strategy vs. buy-and-hold.
//!
//! All randomness flows through the documented generator in [`rng`]; there is
//! no ambient entropy, so every pipeline stage is reproducible from its
//! inputs and configuration alone.

pub mod backtest;
pub mod corpus;
pub mod distributions;
pub mod econ;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod measures;
pub mod provenance;
pub mod rng;
pub mod splitter;
pub mod stance;
pub mod tokenize;

pub use corpus::{Corpus, CorpusStats, Document, DocumentKind, Sentence, StanceLabel};
pub use error::Error;
pub use lexicon::{FilterReport, Lexicon, PanelId, TitleFilterReport};
pub use measures::MeasurePoint;
pub use splitter::{SplitReport, SplitResult};
pub use stance::{LabelSource, RuleVerdict, TieRule};

/// Crate version, embedded in provenance headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
