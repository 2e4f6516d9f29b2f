//! The `Z^2` word problem cut down to `{(ab)^n w | w has n copies each of
//! a^-1 and b^-1}` by a regular filter.
//!
//! The language is also written with three letters `x^n w_n`, `w_n` over
//! `{y, z}`. That form is not over the generators of `Z^2`, so the letters
//! are read as `x = ab`, `y = a^-1`, `z = b^-1`.

use super::compare::{compare_languages, ComparisonReport, GAcceptor, WordSet};
use crate::error::Result;
use crate::gaut::{intersect_regular, wp_automaton, SearchBudget};
use crate::group::GroupSpec;
use crate::machine::{Edge, Instruction, Machine, MachineClass};

/// Every word over `{y, z}` with exactly `n` of each, lexicographic in the
/// order `y < z`.
pub fn ln_words(n: usize, y: &str, z: &str) -> Vec<Vec<String>> {
    fn go(left: [usize; 2], toks: [&str; 2], cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if left == [0, 0] {
            out.push(cur.clone());
            return;
        }
        for i in 0..2 {
            if left[i] > 0 {
                let mut rest = left;
                rest[i] -= 1;
                cur.push(toks[i].to_string());
                go(rest, toks, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go([n, n], [y, z], &mut Vec::with_capacity(2 * n), &mut out);
    out
}

/// `(ab)^n w` for every `n ≤ n_max` and `w ∈ ln_words(n, a^-1, b^-1)`.
pub fn conjecture_language(n_max: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        let prefix: Vec<String> = (0..n).flat_map(|_| ["a".to_string(), "b".to_string()]).collect();
        for w in ln_words(n, "a^-1", "b^-1") {
            out.push(prefix.iter().cloned().chain(w).collect());
        }
    }
    out
}

/// Deterministic fsa for `(ab)^* {a^-1, b^-1}^*`.
pub fn conjecture_filter() -> Machine {
    let e = |from: &str, x: &str, to: &str| Edge::new(from, Some(x), Instruction::Noop, to);
    Machine {
        class: MachineClass::Fsa,
        input_alphabet: ["a", "a^-1", "b", "b^-1"].map(String::from).to_vec(),
        tape_alphabet: vec![],
        states: ["prefix", "mid", "suffix"].map(String::from).to_vec(),
        start: "prefix".into(),
        accept: vec!["prefix".into(), "suffix".into()],
        edges: vec![
            e("prefix", "a", "mid"),
            e("mid", "b", "prefix"),
            e("prefix", "a^-1", "suffix"),
            e("prefix", "b^-1", "suffix"),
            e("suffix", "a^-1", "suffix"),
            e("suffix", "b^-1", "suffix"),
        ],
        space_multiplier: None,
    }
}

/// Compares the filtered word problem of `Z^2` with the explicit list,
/// on every word up to `max_len`.
pub fn conjecture_check(max_len: usize) -> Result<ComparisonReport> {
    let z2 = GroupSpec::free_abelian(2)?;
    let filtered = intersect_regular(&wp_automaton(&z2), &conjecture_filter())?;
    let left = GAcceptor::new(&filtered, SearchBudget::default())?;
    let right = WordSet::new(&conjecture_language(max_len.div_ceil(2)), "explicit (ab)^n L_n(a^-1, b^-1)");
    compare_languages(&left, &right, &z2.generator_tokens(), max_len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::fsa_accepts;
    use crate::machine::Verdict;

    fn joined(words: &[Vec<String>]) -> Vec<String> {
        words.iter().map(|w| w.join(" ")).collect()
    }

    #[test]
    fn small_ln() {
        assert_eq!(joined(&ln_words(0, "y", "z")), [""]);
        assert_eq!(joined(&ln_words(1, "y", "z")), ["y z", "z y"]);
        assert_eq!(ln_words(2, "y", "z").len(), 6);
    }

    #[test]
    fn ln_counts_by_filtering_all_words() {
        for n in 0..6 {
            let direct = super::super::enumerate::enumerate_words(&["y", "z"], 2 * n)
                .filter(|w| w.len() == 2 * n && w.iter().filter(|t| *t == "y").count() == n)
                .count();
            assert_eq!(ln_words(n, "y", "z").len(), direct);
        }
    }

    #[test]
    fn ln_distinguishes_equal_tokens_by_position() {
        // y and z given the same spelling still produce C(2n, n) sequences.
        assert_eq!(ln_words(2, "q", "q").len(), 6);
    }

    #[test]
    fn language_sizes() {
        assert_eq!(joined(&conjecture_language(0)), [""]);
        assert_eq!(joined(&conjecture_language(1)), ["", "a b a^-1 b^-1", "a b b^-1 a^-1"]);
        assert_eq!(conjecture_language(2).len(), 9);
    }

    #[test]
    fn filter_examples() {
        let f = conjecture_filter();
        assert!(f.validate().is_empty());
        assert!(f.is_deterministic());
        let v = |w: &str| fsa_accepts(&f, &w.split_whitespace().collect::<Vec<_>>()).unwrap().verdict;
        assert_eq!(v("a b a b"), Verdict::Accept);
        assert_eq!(v("b a"), Verdict::Reject);
        assert_eq!(v("a b a^-1 b^-1"), Verdict::Accept);
    }

    #[test]
    fn small_check_passes() {
        let r = conjecture_check(4).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.total, 341);
    }
}
