//! Independent reference deciders. They share no search code with the
//! library: plain recursion over paths or configurations, bounded by
//! explicit limits.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gauto::gaut::GAutomaton;
use gauto::machine::{Instruction, Machine, StackAction, BOTTOM};

/// Every word of length `≤ max_len` spelled by a start-to-accept path whose
/// weight is the identity. At most `|states|` consecutive ε-edges are
/// followed, which loses nothing when every ε-cycle has identity weight.
pub fn gaut_language(a: &GAutomaton, max_len: usize) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    let eps_limit = a.states.len();
    let mut word = Vec::new();
    walk(a, &a.start, a.group.identity(), 0, eps_limit, max_len, &mut word, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn walk(
    a: &GAutomaton,
    state: &str,
    g: gauto::GroupElement,
    eps_run: usize,
    eps_limit: usize,
    max_len: usize,
    word: &mut Vec<String>,
    out: &mut BTreeSet<Vec<String>>,
) {
    if a.accept.iter().any(|s| s == state) && a.group.is_identity(&g) {
        out.insert(word.clone());
    }
    for e in a.edges.iter().filter(|e| e.from == state) {
        let h = a.group.multiply(&g, &e.weight).unwrap();
        match &e.letter {
            None if eps_run < eps_limit => walk(a, &e.to, h, eps_run + 1, eps_limit, max_len, word, out),
            None => {}
            Some(x) if word.len() < max_len => {
                word.push(x.clone());
                walk(a, &e.to, h, 0, eps_limit, max_len, word, out);
                word.pop();
            }
            Some(_) => {}
        }
    }
}

/// Membership by path enumeration restricted to `word`.
pub fn gaut_accepts(a: &GAutomaton, word: &[&str]) -> bool {
    fn go(a: &GAutomaton, state: &str, g: gauto::GroupElement, pos: usize, eps_run: usize, word: &[&str]) -> bool {
        if pos == word.len() && a.accept.iter().any(|s| s == state) && a.group.is_identity(&g) {
            return true;
        }
        a.edges.iter().filter(|e| e.from == state).any(|e| {
            let h = a.group.multiply(&g, &e.weight).unwrap();
            match &e.letter {
                None => eps_run < a.states.len() && go(a, &e.to, h, pos, eps_run + 1, word),
                Some(x) => word.get(pos) == Some(&x.as_str()) && go(a, &e.to, h, pos + 1, 0, word),
            }
        })
    }
    go(a, &a.start, a.group.identity(), 0, 0, word)
}

/// Finite-state membership by enumerating paths with at most `|states|`
/// consecutive ε-edges.
pub fn fsa_accepts_naive(m: &Machine, word: &[&str]) -> bool {
    fn go(m: &Machine, state: &str, pos: usize, eps_run: usize, word: &[&str]) -> bool {
        if pos == word.len() && m.accept.iter().any(|s| s == state) {
            return true;
        }
        m.edges.iter().filter(|e| e.from == state).any(|e| match &e.input {
            None => eps_run < m.states.len() && go(m, &e.to, pos, eps_run + 1, word),
            Some(x) => word.get(pos) == Some(&x.as_str()) && go(m, &e.to, pos + 1, 0, word),
        })
    }
    go(m, &m.start, 0, 0, word)
}

/// Pushdown membership by exhaustive search over configurations whose stack
/// holds at most `|word| + |states| + 2` symbols above the bottom marker.
pub fn pda_accepts_bounded(m: &Machine, word: &[&str]) -> bool {
    pda_accepts_within(m, word, word.len() + m.states.len() + 2)
}

/// As [`pda_accepts_bounded`] with an explicit stack limit. Machines that
/// push on ε-edges can need more than the default.
pub fn pda_accepts_within(m: &Machine, word: &[&str], limit: usize) -> bool {
    let mut seen: HashSet<(String, usize, Vec<String>)> = HashSet::new();
    let mut stack_of_work = vec![(m.start.clone(), 0usize, vec![BOTTOM.to_string()])];
    while let Some((state, pos, stack)) = stack_of_work.pop() {
        if !seen.insert((state.clone(), pos, stack.clone())) {
            continue;
        }
        if pos == word.len() && m.accept.contains(&state) {
            return true;
        }
        for e in m.edges.iter().filter(|e| e.from == state) {
            let next_pos = match &e.input {
                None => pos,
                Some(x) if word.get(pos) == Some(&x.as_str()) => pos + 1,
                Some(_) => continue,
            };
            let mut next = stack.clone();
            match &e.instr {
                Instruction::Noop => {}
                Instruction::Stack { guard, action } => {
                    let top = next.last().unwrap();
                    if guard.as_ref().is_some_and(|g| g != top) {
                        continue;
                    }
                    match action {
                        StackAction::Push(s) => next.push(s.clone()),
                        StackAction::Pop if top == BOTTOM => continue,
                        StackAction::Pop => {
                            next.pop();
                        }
                        StackAction::Stay => {}
                    }
                }
                Instruction::Tape { .. } => panic!("tape instruction in a pda"),
            }
            if next.len() - 1 <= limit {
                stack_of_work.push((e.to.clone(), next_pos, next));
            }
        }
    }
    false
}

/// Splits a space-separated word.
pub fn w(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}
