//! Word enumeration, language comparison, the fixture corpus, documents and
//! the command-line front end.

pub mod cli;
pub mod compare;
pub mod conjecture;
pub mod document;
pub mod enumerate;
pub mod fixtures;

pub use compare::{compare_languages, Acceptor, ComparisonReport, Decision, Disagreement, GAcceptor, GroupOracle, MachineAcceptor, WordSet};
pub use conjecture::{conjecture_check, conjecture_filter, conjecture_language, ln_words};
pub use document::{load_document, parse_document, save_document, Document, MachineDocument};
pub use enumerate::{enumerate_words, word_count, Words};
pub use fixtures::{corpus, transfer_cases, Fixture, Slice, TransferCase};
