//! parsens analyzes French text into sense-annotated dependency graphs,
//! expands them with sense-filtered synonyms and derivational rephrasings,
//! indexes everything per sentence, and answers questions by matching a
//! stripped-down "light structure" of the question against the index.
//!
//! The pieces compose left to right:
//!
//! ```text
//! text -> lexicon (tokens + readings)
//!      -> parser (POS picks, named dependencies)
//!      -> wsd (sn=k sense traits, rules compiled from sensedict examples)
//!      -> expansion (synonym alternatives, derivation rewrites)
//!      -> index (sentence records + inverted postings)
//!      -> query (light structure matching, ranking, focus extraction)
//! ```
//!
//! See the `examples/` directory for one runnable walkthrough per stage.

pub mod cli;
pub mod config;
pub mod error;
pub mod expansion;
pub mod index;
pub mod lexicon;
pub mod parser;
pub mod pipeline;
pub mod query;
pub mod sensedict;
pub mod wsd;

pub use error::{Error, Result};
