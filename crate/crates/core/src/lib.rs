//! Group-labeled automata over finite, free abelian and free groups, their
//! compilation into finite-state, pushdown and linear-bounded machines, and
//! exhaustive language comparison at small word lengths.

pub mod error;
pub mod gaut;
pub mod group;
pub mod harness;
pub mod machine;
pub mod transfer;

pub use error::{Diagnostic, Error, Result};
pub use group::{GeneratorSymbol, GroupElement, GroupSpec};
pub use machine::{Machine, MachineClass, RunResult, Verdict};
pub use gaut::{GAutomaton, MembershipVerdict, SearchBudget};
