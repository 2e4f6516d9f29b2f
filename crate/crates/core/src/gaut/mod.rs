//! G-automata: finite graphs whose edges carry an input letter (or ε) and a
//! group element. A word is accepted when some start-to-accept path spells
//! it and the product of its edge elements is the identity.
//!
//! Input letters are plain tokens. `x` and `x^-1` are unrelated letters on
//! the input side; only the group side has inverses.

mod search;

use std::collections::{HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Diagnostic, Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::machine::{Machine, MachineClass};

pub use search::{g_membership, GDecider, Membership, MembershipVerdict, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GEdge {
    pub from: String,
    /// `None` is ε.
    pub letter: Option<String>,
    pub weight: GroupElement,
    pub to: String,
}

impl GEdge {
    pub fn new(from: &str, letter: Option<&str>, weight: GroupElement, to: &str) -> Self {
        GEdge {
            from: from.to_string(),
            letter: letter.map(str::to_string),
            weight,
            to: to.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GAutomaton {
    pub group: GroupSpec,
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    pub start: String,
    pub accept: Vec<String>,
    pub edges: Vec<GEdge>,
}

impl GAutomaton {
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags: Vec<Diagnostic> = self
            .group
            .validate()
            .into_iter()
            .map(|d| Diagnostic::new(format!("group: {}", d.location), d.message))
            .collect();
        let states: HashSet<&str> = self.states.iter().map(String::as_str).collect();
        if states.len() != self.states.len() {
            diags.push(Diagnostic::new("states", "duplicate state names"));
        }
        let letters: HashSet<&str> = self.alphabet.iter().map(String::as_str).collect();
        for a in &self.alphabet {
            if a.is_empty() || a.chars().any(char::is_whitespace) {
                diags.push(Diagnostic::new("alphabet", format!("invalid token {a:?}")));
            }
        }
        if !states.contains(self.start.as_str()) {
            diags.push(Diagnostic::new("start", format!("{} is not a state", self.start)));
        }
        for a in &self.accept {
            if !states.contains(a.as_str()) {
                diags.push(Diagnostic::new("accept", format!("{a} is not a state")));
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let loc = format!(
                "edge #{i} ({} -{}-> {})",
                e.from,
                e.letter.as_deref().unwrap_or("ε"),
                e.to
            );
            for s in [&e.from, &e.to] {
                if !states.contains(s.as_str()) {
                    diags.push(Diagnostic::new(&loc, format!("{s} is not a state")));
                }
            }
            if let Some(x) = &e.letter {
                if !letters.contains(x.as_str()) {
                    diags.push(Diagnostic::new(&loc, format!("letter {x} not in the alphabet")));
                }
            }
            if let Err(err) = self.group.check_element(&e.weight) {
                diags.push(Diagnostic::new(&loc, err.to_string()));
            }
        }
        diags
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(diags))
        }
    }

    /// True when some cycle of ε-edges has a non-identity product. Such
    /// automata only get bounded-search semantics.
    pub fn has_nonidentity_epsilon_cycle(&self) -> bool {
        let index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut graph = DiGraph::<(), &GroupElement>::new();
        let nodes: Vec<_> = self.states.iter().map(|_| graph.add_node(())).collect();
        for e in self.edges.iter().filter(|e| e.letter.is_none()) {
            graph.add_edge(nodes[index[e.from.as_str()]], nodes[index[e.to.as_str()]], &e.weight);
        }
        for component in tarjan_scc(&graph) {
            let members: HashSet<_> = component.iter().copied().collect();
            // Assign each vertex the product along a spanning tree from a root;
            // every cycle is trivial iff each internal edge agrees with it.
            let mut potential: HashMap<_, GroupElement> = HashMap::new();
            potential.insert(component[0], self.group.identity());
            let mut queue = VecDeque::from([component[0]]);
            while let Some(u) = queue.pop_front() {
                let pu = potential[&u].clone();
                let neighbors: Vec<_> = graph
                    .edges(u)
                    .map(|e| (petgraph::visit::EdgeRef::target(&e), *e.weight()))
                    .collect();
                for (v, w) in neighbors {
                    if !members.contains(&v) {
                        continue;
                    }
                    let Ok(pv) = self.group.multiply(&pu, w) else { return true };
                    match potential.get(&v) {
                        Some(existing) if *existing != pv => return true,
                        Some(_) => {}
                        None => {
                            potential.insert(v, pv);
                            queue.push_back(v);
                        }
                    }
                }
            }
        }
        false
    }

    /// Every weight is the identity or a generator image.
    pub fn is_normalized(&self) -> bool {
        self.edges
            .iter()
            .all(|e| self.group.is_identity(&e.weight) || self.group.token_for(&e.weight).is_some())
    }

    /// No ε-letter edges and no state with two outgoing edges on one letter.
    pub fn is_deterministic(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| match &e.letter {
            None => false,
            Some(x) => seen.insert((e.from.as_str(), x.as_str())),
        })
    }

    /// No state has two outgoing edges carrying the same group element.
    pub fn has_unique_weights(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|e| seen.insert((e.from.as_str(), &e.weight)))
    }

    /// Splits every weight into a chain of generator images through fresh
    /// states. The original letter goes on the first link, ε on the rest.
    pub fn normalize(&self) -> Result<GAutomaton> {
        self.require_valid()?;
        let mut out = self.clone();
        out.edges.clear();
        let mut names: HashSet<String> = self.states.iter().cloned().collect();
        for (i, e) in self.edges.iter().enumerate() {
            let factors = self.group.factor(&e.weight).ok_or_else(|| Error::NotExpressible {
                location: format!("edge #{i}"),
                weight: e.weight.to_string(),
            })?;
            if factors.len() <= 1 {
                out.edges.push(e.clone());
                continue;
            }
            let mut from = e.from.clone();
            for (k, symbol) in factors.iter().enumerate() {
                let to = if k + 1 == factors.len() {
                    e.to.clone()
                } else {
                    let mut name = format!("{}~{i}.{}", e.from, k + 1);
                    while names.contains(&name) {
                        name.push('\'');
                    }
                    names.insert(name.clone());
                    out.states.push(name.clone());
                    name
                };
                out.edges.push(GEdge {
                    from: from.clone(),
                    letter: if k == 0 { e.letter.clone() } else { None },
                    weight: self.group.image(symbol)?.clone(),
                    to: to.clone(),
                });
                from = to;
            }
        }
        Ok(out)
    }
}

/// One state, both start and accept, with a loop `(g, image(g))` per
/// generator: its language is the word problem of `spec`.
pub fn wp_automaton(spec: &GroupSpec) -> GAutomaton {
    let edges = spec
        .generators()
        .iter()
        .map(|g| GEdge::new("q0", Some(&g.symbol.to_string()), g.image.clone(), "q0"))
        .collect();
    GAutomaton {
        group: spec.clone(),
        alphabet: spec.generator_tokens(),
        states: vec!["q0".into()],
        start: "q0".into(),
        accept: vec!["q0".into()],
        edges,
    }
}

/// A counter edge: source, letter (`None` for ε), counter update, target.
pub type CounterEdge<'a> = (&'a str, Option<&'a str>, Vec<i64>, &'a str);

/// A `Z^k`-automaton (blind `k`-counter automaton) over the standard
/// generators. Weights may be arbitrary vectors; [`GAutomaton::normalize`]
/// splits them into unit steps.
pub fn counter_automaton(
    k: usize,
    states: &[&str],
    edges: &[CounterEdge<'_>],
    start: &str,
    accept: &[&str],
) -> Result<GAutomaton> {
    let group = GroupSpec::free_abelian(k)?;
    let mut alphabet: Vec<String> = Vec::new();
    let mut g_edges = Vec::new();
    for (from, letter, v, to) in edges {
        if v.len() != k {
            return Err(Error::LengthMismatch { rank: k, found: v.len() });
        }
        if let Some(x) = letter {
            if !alphabet.iter().any(|a| a == x) {
                alphabet.push(x.to_string());
            }
        }
        g_edges.push(GEdge::new(from, *letter, GroupElement::abelian(v.iter().copied()), to));
    }
    alphabet.sort();
    let a = GAutomaton {
        group,
        alphabet,
        states: states.iter().map(|s| s.to_string()).collect(),
        start: start.to_string(),
        accept: accept.iter().map(|s| s.to_string()).collect(),
        edges: g_edges,
    };
    a.require_valid()?;
    Ok(a)
}

/// Product of a G-automaton with an ε-free finite-state machine over the
/// same alphabet. ε-edges of `a` move only the first coordinate.
pub fn intersect_regular(a: &GAutomaton, f: &Machine) -> Result<GAutomaton> {
    if f.class != MachineClass::Fsa {
        return Err(Error::ClassMismatch { expected: "fsa".into(), found: f.class.to_string() });
    }
    let diags = f.validate();
    if !diags.is_empty() {
        return Err(Error::Invalid(diags));
    }
    if f.edges.iter().any(|e| e.input.is_none()) {
        return Err(Error::AlphabetMismatch("filter machine has ε-edges".into()));
    }
    let left: HashSet<&String> = a.alphabet.iter().collect();
    let right: HashSet<&String> = f.input_alphabet.iter().collect();
    if left != right {
        return Err(Error::AlphabetMismatch(format!(
            "automaton over {:?}, filter over {:?}",
            a.alphabet, f.input_alphabet
        )));
    }
    a.require_valid()?;

    let pair = |p: &str, q: &str| format!("{p}|{q}");
    let start = (a.start.clone(), f.start.clone());
    let mut seen: HashSet<(String, String)> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some((p, q)) = queue.pop_front() {
        for e in a.edges.iter().filter(|e| e.from == p) {
            let targets: Vec<(Option<&str>, &str)> = match &e.letter {
                None => vec![(None, q.as_str())],
                Some(x) => f
                    .edges
                    .iter()
                    .filter(|fe| fe.from == q && fe.input.as_deref() == Some(x))
                    .map(|fe| (Some(x.as_str()), fe.to.as_str()))
                    .collect(),
            };
            for (letter, q2) in targets {
                let next = (e.to.clone(), q2.to_string());
                edges.push(GEdge::new(&pair(&p, &q), letter, e.weight.clone(), &pair(&next.0, &next.1)));
                if seen.insert(next.clone()) {
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    let accept = order
        .iter()
        .filter(|(p, q)| a.accept.contains(p) && f.accept.contains(q))
        .map(|(p, q)| pair(p, q))
        .collect();
    Ok(GAutomaton {
        group: a.group.clone(),
        alphabet: a.alphabet.clone(),
        states: order.iter().map(|(p, q)| pair(p, q)).collect(),
        start: pair(&a.start, &f.start),
        accept,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Edge, Instruction};

    #[test]
    fn lemma_automaton_is_valid() {
        let a = wp_automaton(&GroupSpec::free_abelian(2).unwrap());
        assert_eq!(a.validate(), vec![]);
        assert!(a.is_normalized());
        assert!(a.is_deterministic());
    }

    #[test]
    fn wrong_rank_and_stray_accept_are_reported() {
        let mut a = wp_automaton(&GroupSpec::free_abelian(2).unwrap());
        a.edges[0].weight = GroupElement::abelian([1, 0, 0]);
        assert_eq!(a.validate().len(), 1);
        let mut b = wp_automaton(&GroupSpec::free_abelian(2).unwrap());
        b.accept.push("elsewhere".into());
        assert_eq!(b.validate().len(), 1);
    }

    #[test]
    fn normalize_splits_long_weights() {
        let a = counter_automaton(2, &["p", "q"], &[("p", Some("x"), vec![2, 0], "q")], "p", &["q"]).unwrap();
        let n = a.normalize().unwrap();
        assert_eq!(
            n.edges,
            vec![
                GEdge::new("p", Some("x"), GroupElement::abelian([1, 0]), "p~0.1"),
                GEdge::new("p~0.1", None, GroupElement::abelian([1, 0]), "q"),
            ]
        );
        assert!(n.is_normalized());
    }

    #[test]
    fn normalize_is_a_fixpoint_on_normalized_input() {
        let a = wp_automaton(&GroupSpec::free(2).unwrap());
        assert_eq!(a.normalize().unwrap(), a);
    }

    #[test]
    fn normalize_reports_inexpressible_weights() {
        let group = GroupSpec::finite(vec![vec![0, 1], vec![1, 0]], &[]).unwrap();
        let a = GAutomaton {
            group,
            alphabet: vec!["x".into()],
            states: vec!["p".into()],
            start: "p".into(),
            accept: vec!["p".into()],
            edges: vec![GEdge::new("p", Some("x"), GroupElement::Finite(1), "p")],
        };
        assert!(matches!(a.normalize(), Err(Error::NotExpressible { .. })));
    }

    #[test]
    fn epsilon_cycle_detection() {
        let mut a = counter_automaton(
            1,
            &["p", "q"],
            &[("p", None, vec![1], "q"), ("q", None, vec![-1], "p")],
            "p",
            &["p"],
        )
        .unwrap();
        assert!(!a.has_nonidentity_epsilon_cycle());
        a.edges[1].weight = GroupElement::abelian([0]);
        assert!(a.has_nonidentity_epsilon_cycle());
    }

    #[test]
    fn determinism_predicates() {
        let z2 = GroupSpec::cyclic(2).unwrap();
        let mut a = GAutomaton {
            group: z2,
            alphabet: vec!["a".into(), "b".into()],
            states: vec!["s".into()],
            start: "s".into(),
            accept: vec!["s".into()],
            edges: vec![
                GEdge::new("s", Some("a"), GroupElement::Finite(1), "s"),
                GEdge::new("s", Some("b"), GroupElement::Finite(0), "s"),
            ],
        };
        assert!(a.is_deterministic() && a.has_unique_weights());
        a.edges[1].weight = GroupElement::Finite(1);
        assert!(a.is_deterministic() && !a.has_unique_weights());
        a.edges[1].letter = Some("a".into());
        assert!(!a.is_deterministic());
    }

    #[test]
    fn intersect_requires_matching_alphabets() {
        let a = wp_automaton(&GroupSpec::free_abelian(1).unwrap());
        let f = Machine {
            class: MachineClass::Fsa,
            input_alphabet: vec!["a".into()],
            tape_alphabet: vec![],
            states: vec!["q".into()],
            start: "q".into(),
            accept: vec!["q".into()],
            edges: vec![Edge::new("q", Some("a"), Instruction::Noop, "q")],
            space_multiplier: None,
        };
        assert!(matches!(intersect_regular(&a, &f), Err(Error::AlphabetMismatch(_))));
    }
}
