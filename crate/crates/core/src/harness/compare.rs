use std::collections::HashSet;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::enumerate_words;
use crate::error::{Error, Result};
use crate::gaut::{GAutomaton, GDecider, MembershipVerdict, SearchBudget};
use crate::group::GroupSpec;
use crate::machine::{Decider, Machine, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    Accept,
    Reject,
    /// The acceptor ran out of budget; never counted as agreement.
    Exhausted,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::Accept => "accept",
            Decision::Reject => "reject",
            Decision::Exhausted => "exhausted",
        })
    }
}

/// Anything that decides membership of token words.
pub trait Acceptor: Sync {
    /// Letters the acceptor is defined over; `None` means any.
    fn alphabet(&self) -> Option<Vec<String>>;
    fn decide(&self, word: &[&str]) -> Result<Decision>;
    fn describe(&self) -> String;
}

/// The word problem itself: accept iff the word evaluates to the identity.
pub struct GroupOracle<'a> {
    pub group: &'a GroupSpec,
}

impl Acceptor for GroupOracle<'_> {
    fn alphabet(&self) -> Option<Vec<String>> {
        Some(self.group.generator_tokens())
    }

    fn decide(&self, word: &[&str]) -> Result<Decision> {
        let g = self.group.evaluate_tokens(word)?;
        Ok(if self.group.is_identity(&g) { Decision::Accept } else { Decision::Reject })
    }

    fn describe(&self) -> String {
        format!("word problem of {}", self.group.family_label())
    }
}

pub struct GAcceptor<'a> {
    decider: GDecider<'a>,
    budget: SearchBudget,
}

impl<'a> GAcceptor<'a> {
    pub fn new(automaton: &'a GAutomaton, budget: SearchBudget) -> Result<Self> {
        Ok(GAcceptor { decider: GDecider::new(automaton)?, budget })
    }
}

impl Acceptor for GAcceptor<'_> {
    fn alphabet(&self) -> Option<Vec<String>> {
        Some(self.decider.automaton().alphabet.clone())
    }

    fn decide(&self, word: &[&str]) -> Result<Decision> {
        Ok(match self.decider.run(word, &self.budget)?.verdict {
            MembershipVerdict::Accept => Decision::Accept,
            MembershipVerdict::RejectWithinBudget => Decision::Reject,
            MembershipVerdict::BudgetExhausted => Decision::Exhausted,
        })
    }

    fn describe(&self) -> String {
        let a = self.decider.automaton();
        format!("{}-automaton ({} states)", a.group.family_label(), a.states.len())
    }
}

pub struct MachineAcceptor<'m> {
    decider: Decider<'m>,
}

impl<'m> MachineAcceptor<'m> {
    pub fn new(machine: &'m Machine) -> Result<Self> {
        Ok(MachineAcceptor { decider: Decider::new(machine)? })
    }
}

impl Acceptor for MachineAcceptor<'_> {
    fn alphabet(&self) -> Option<Vec<String>> {
        Some(self.decider.machine().input_alphabet.clone())
    }

    fn decide(&self, word: &[&str]) -> Result<Decision> {
        Ok(match self.decider.run(word)?.verdict {
            Verdict::Accept => Decision::Accept,
            Verdict::Reject => Decision::Reject,
            Verdict::ResourceExceeded => Decision::Exhausted,
        })
    }

    fn describe(&self) -> String {
        let m = self.decider.machine();
        format!("{} ({} states, {} edges)", m.class, m.states.len(), m.edges.len())
    }
}

/// A finite language given by its word list.
pub struct WordSet {
    words: HashSet<String>,
    label: String,
}

impl WordSet {
    pub fn new<W: AsRef<[String]>>(words: &[W], label: impl Into<String>) -> Self {
        WordSet {
            words: words.iter().map(|w| w.as_ref().join(" ")).collect(),
            label: label.into(),
        }
    }
}

impl Acceptor for WordSet {
    fn alphabet(&self) -> Option<Vec<String>> {
        None
    }

    fn decide(&self, word: &[&str]) -> Result<Decision> {
        Ok(if self.words.contains(&word.join(" ")) { Decision::Accept } else { Decision::Reject })
    }

    fn describe(&self) -> String {
        format!("{} ({} words)", self.label, self.words.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub word: String,
    pub left: Decision,
    pub right: Decision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub left: String,
    pub right: String,
    pub alphabet: Vec<String>,
    pub max_len: usize,
    pub total: u64,
    pub agreements: u64,
    pub disagreements: Vec<Disagreement>,
    pub budget_exhausted: Vec<String>,
}

impl ComparisonReport {
    /// No disagreements and no exhausted words.
    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.budget_exhausted.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "left: {}", self.left);
        let _ = writeln!(s, "right: {}", self.right);
        let _ = writeln!(s, "alphabet: {}", self.alphabet.join(" "));
        let _ = writeln!(s, "max length: {}", self.max_len);
        let _ = writeln!(s, "words: {}", self.total);
        let _ = writeln!(s, "agreements: {}", self.agreements);
        let _ = writeln!(s, "disagreements: {}", self.disagreements.len());
        for d in &self.disagreements {
            let _ = writeln!(s, "  [{}] left={} right={}", d.word, d.left, d.right);
        }
        let _ = writeln!(s, "budget-exhausted: {}", self.budget_exhausted.len());
        for w in &self.budget_exhausted {
            let _ = writeln!(s, "  [{w}]");
        }
        let _ = writeln!(s, "result: {}", if self.passed() { "pass" } else { "fail" });
        s
    }
}

const CHUNK: usize = 1 << 14;

/// Runs both acceptors on every word of `Σ^{≤max_len}`.
pub fn compare_languages(
    left: &dyn Acceptor,
    right: &dyn Acceptor,
    alphabet: &[String],
    max_len: usize,
) -> Result<ComparisonReport> {
    for (side, acc) in [("left", left), ("right", right)] {
        if let Some(own) = acc.alphabet() {
            if let Some(x) = alphabet.iter().find(|x| !own.contains(x)) {
                return Err(Error::AlphabetMismatch(format!("{side} acceptor does not read {x}")));
            }
        }
    }
    let mut words = enumerate_words(alphabet, max_len);
    let letters = words.alphabet().to_vec();
    let mut report = ComparisonReport {
        left: left.describe(),
        right: right.describe(),
        alphabet: letters.clone(),
        max_len,
        total: 0,
        agreements: 0,
        disagreements: Vec::new(),
        budget_exhausted: Vec::new(),
    };
    loop {
        let chunk: Vec<Vec<usize>> = std::iter::from_fn(|| words.next_indices()).take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<(Decision, Decision)> = chunk
            .par_iter()
            .map(|idx| {
                let word: Vec<&str> = idx.iter().map(|&i| letters[i].as_str()).collect();
                Ok((left.decide(&word)?, right.decide(&word)?))
            })
            .collect::<Result<_>>()?;
        for (idx, (l, r)) in chunk.iter().zip(results) {
            report.total += 1;
            let word = || idx.iter().map(|&i| letters[i].as_str()).collect::<Vec<_>>().join(" ");
            if l == Decision::Exhausted || r == Decision::Exhausted {
                report.budget_exhausted.push(word());
            } else if l == r {
                report.agreements += 1;
            } else {
                report.disagreements.push(Disagreement { word: word(), left: l, right: r });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaut::wp_automaton;

    #[test]
    fn self_comparison_agrees() {
        let z1 = GroupSpec::free_abelian(1).unwrap();
        let oracle = GroupOracle { group: &z1 };
        let r = compare_languages(&oracle, &oracle, &z1.generator_tokens(), 5).unwrap();
        assert!(r.passed());
        assert_eq!(r.total, 63);
        assert_eq!(r.total, r.agreements);
    }

    #[test]
    fn lemma_automaton_for_z1_matches_oracle() {
        let z1 = GroupSpec::free_abelian(1).unwrap();
        let a = wp_automaton(&z1);
        let left = GAcceptor::new(&a, SearchBudget::default()).unwrap();
        let r = compare_languages(&left, &GroupOracle { group: &z1 }, &z1.generator_tokens(), 8).unwrap();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn disagreements_are_listed() {
        let z1 = GroupSpec::free_abelian(1).unwrap();
        let set = WordSet::new(&[vec!["a".to_string()]], "just a");
        let r = compare_languages(&GroupOracle { group: &z1 }, &set, &z1.generator_tokens(), 1).unwrap();
        // ε is accepted only by the oracle, "a" only by the set.
        assert_eq!(r.disagreements.len(), 2);
        assert_eq!(r.total, r.agreements + r.disagreements.len() as u64 + r.budget_exhausted.len() as u64);
        assert!(r.to_text().contains("result: fail"));
    }

    #[test]
    fn exhausted_words_are_not_agreements() {
        let z1 = GroupSpec::free_abelian(1).unwrap();
        let a = wp_automaton(&z1);
        let tight = SearchBudget { norm_cap: None, eps_cap: None, max_configurations: 1 };
        let left = GAcceptor::new(&a, tight).unwrap();
        let r = compare_languages(&left, &left, &z1.generator_tokens(), 2).unwrap();
        // Only ε is decided without expanding any configuration.
        assert_eq!(r.agreements, 1);
        assert_eq!(r.budget_exhausted.len(), 6);
        assert!(!r.passed());
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let z1 = GroupSpec::free_abelian(1).unwrap();
        let oracle = GroupOracle { group: &z1 };
        let letters = vec!["a".to_string(), "q".to_string()];
        assert!(matches!(compare_languages(&oracle, &oracle, &letters, 2), Err(Error::AlphabetMismatch(_))));
    }
}
