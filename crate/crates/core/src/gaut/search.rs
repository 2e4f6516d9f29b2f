use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GAutomaton;
use crate::error::{Error, Result};
use crate::group::GroupElement;

/// Caps for the forward search. `None` picks the per-word default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub norm_cap: Option<u64>,
    /// Consecutive ε-moves allowed at one input position.
    pub eps_cap: Option<usize>,
    pub max_configurations: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            norm_cap: None,
            eps_cap: None,
            max_configurations: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipVerdict {
    Accept,
    RejectWithinBudget,
    BudgetExhausted,
}

impl fmt::Display for MembershipVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MembershipVerdict::Accept => "accept",
            MembershipVerdict::RejectWithinBudget => "reject-within-budget",
            MembershipVerdict::BudgetExhausted => "budget-exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub verdict: MembershipVerdict,
    /// Edge indices of the accepting path, re-verified before returning.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<usize>>,
    pub configurations: u64,
    /// Whether the norm or ε cap cut off any configuration.
    pub pruned: bool,
    /// A reject is exact when nothing was pruned and no ε-cycle has a
    /// non-identity product; accepts are always exact.
    pub exact: bool,
}

/// A validated G-automaton indexed for repeated membership queries.
#[derive(Debug)]
pub struct GDecider<'a> {
    automaton: &'a GAutomaton,
    out: Vec<Vec<usize>>,
    to: Vec<usize>,
    start: usize,
    accept: Vec<bool>,
    max_step_norm: u64,
    bounded_only: bool,
}

impl<'a> GDecider<'a> {
    pub fn new(automaton: &'a GAutomaton) -> Result<Self> {
        automaton.require_valid()?;
        let index: HashMap<&str, usize> = automaton
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut out = vec![Vec::new(); automaton.states.len()];
        let mut to = Vec::new();
        for (i, e) in automaton.edges.iter().enumerate() {
            out[index[e.from.as_str()]].push(i);
            to.push(index[e.to.as_str()]);
        }
        let mut accept = vec![false; automaton.states.len()];
        for a in &automaton.accept {
            accept[index[a.as_str()]] = true;
        }
        let group = &automaton.group;
        let max_step_norm = automaton
            .edges
            .iter()
            .map(|e| group.element_norm(&e.weight))
            .chain([group.max_generator_norm()])
            .max()
            .unwrap_or(0);
        Ok(GDecider {
            automaton,
            out,
            to,
            start: index[automaton.start.as_str()],
            accept,
            max_step_norm,
            bounded_only: automaton.has_nonidentity_epsilon_cycle(),
        })
    }

    pub fn automaton(&self) -> &'a GAutomaton {
        self.automaton
    }

    /// True when rejects can never be certified exact.
    pub fn bounded_only(&self) -> bool {
        self.bounded_only
    }

    /// The caps actually used for a word of length `n`.
    ///
    /// The default norm cap also covers the longest cycle-free accepting
    /// path, `n + (n+1)(|states|-1)` edges, so that searches on automata
    /// without non-identity ε-cycles are never cut short by it.
    pub fn resolved_caps(&self, budget: &SearchBudget, n: usize) -> (u64, usize) {
        let states = self.automaton.states.len() as u64;
        let n64 = n as u64;
        let norm = budget.norm_cap.unwrap_or_else(|| {
            let nominal = (n64 + 1).saturating_mul(self.max_step_norm).saturating_mul(4);
            let path_edges = n64 + (n64 + 1) * states.saturating_sub(1);
            nominal.max(path_edges.saturating_mul(self.max_step_norm))
        });
        let eps = budget.eps_cap.unwrap_or(self.automaton.states.len() * (n + 1));
        (norm, eps)
    }

    pub fn run<S: AsRef<str>>(&self, word: &[S], budget: &SearchBudget) -> Result<Membership> {
        let group = &self.automaton.group;
        let edges = &self.automaton.edges;
        let (norm_cap, eps_cap) = self.resolved_caps(budget, word.len());

        struct Node {
            pos: usize,
            state: usize,
            element: GroupElement,
            eps: usize,
            parent: usize,
            edge: usize,
        }
        let mut nodes = vec![Node {
            pos: 0,
            state: self.start,
            element: group.identity(),
            eps: 0,
            parent: usize::MAX,
            edge: usize::MAX,
        }];
        let mut visited: HashSet<(usize, usize, GroupElement)> = HashSet::new();
        visited.insert((0, self.start, group.identity()));
        let mut queue = VecDeque::from([0usize]);
        let mut pruned = false;
        let mut found = None;
        let mut exhausted = false;

        'search: while let Some(id) = queue.pop_front() {
            let (pos, state) = (nodes[id].pos, nodes[id].state);
            if pos == word.len() && self.accept[state] && group.is_identity(&nodes[id].element) {
                found = Some(id);
                break;
            }
            for &ei in &self.out[state] {
                let e = &edges[ei];
                let (next_pos, next_eps) = match &e.letter {
                    None => (pos, nodes[id].eps + 1),
                    Some(x) if word.get(pos).map(AsRef::as_ref) == Some(x.as_str()) => (pos + 1, 0),
                    Some(_) => continue,
                };
                if next_eps > eps_cap {
                    pruned = true;
                    continue;
                }
                let element = group.multiply(&nodes[id].element, &e.weight)?;
                if group.element_norm(&element) > norm_cap {
                    pruned = true;
                    continue;
                }
                let key = (next_pos, self.to[ei], element);
                if visited.contains(&key) {
                    continue;
                }
                if nodes.len() >= budget.max_configurations {
                    exhausted = true;
                    break 'search;
                }
                let element = key.2.clone();
                visited.insert(key);
                nodes.push(Node {
                    pos: next_pos,
                    state: self.to[ei],
                    element,
                    eps: next_eps,
                    parent: id,
                    edge: ei,
                });
                queue.push_back(nodes.len() - 1);
            }
        }

        let configurations = nodes.len() as u64;
        if let Some(mut id) = found {
            let mut path = Vec::new();
            while nodes[id].parent != usize::MAX {
                path.push(nodes[id].edge);
                id = nodes[id].parent;
            }
            path.reverse();
            self.verify_path(word, &path)?;
            return Ok(Membership {
                verdict: MembershipVerdict::Accept,
                path: Some(path),
                configurations,
                pruned,
                exact: true,
            });
        }
        let verdict = if exhausted {
            MembershipVerdict::BudgetExhausted
        } else {
            MembershipVerdict::RejectWithinBudget
        };
        Ok(Membership {
            verdict,
            path: None,
            configurations,
            pruned,
            exact: !exhausted && !pruned && !self.bounded_only,
        })
    }

    /// Recomputes `w(p)` and `g(p)` for a path from scratch.
    fn verify_path<S: AsRef<str>>(&self, word: &[S], path: &[usize]) -> Result<()> {
        let a = self.automaton;
        let fail = |why: &str| Err(Error::Internal(format!("accepting path rejected: {why}")));
        let mut state = a.start.as_str();
        let mut letters = Vec::new();
        let mut g = a.group.identity();
        for &ei in path {
            let e = &a.edges[ei];
            if e.from != state {
                return fail("edges do not chain");
            }
            if let Some(x) = &e.letter {
                letters.push(x.as_str());
            }
            g = a.group.multiply(&g, &e.weight)?;
            state = &e.to;
        }
        if !letters.iter().copied().eq(word.iter().map(AsRef::as_ref)) {
            return fail("path spells a different word");
        }
        if !a.group.is_identity(&g) {
            return fail("path weight is not the identity");
        }
        if !a.accept.iter().any(|s| s == state) {
            return fail("path ends outside the accept set");
        }
        Ok(())
    }
}

/// Bounded forward search for a start-to-accept path spelling `word` whose
/// weight is the identity.
pub fn g_membership<S: AsRef<str>>(a: &GAutomaton, word: &[S], budget: &SearchBudget) -> Result<Membership> {
    GDecider::new(a)?.run(word, budget)
}
