//! The shipped fixture corpus.
//!
//! Each fixture's automata are built here. The expected language slices in
//! `fixtures/*.json` are produced by an independent path-enumeration oracle
//! in the test suite, which also checks the shipped files against it.

use serde::{Deserialize, Serialize};

use super::conjecture::conjecture_filter;
use crate::error::Result;
use crate::gaut::{counter_automaton, wp_automaton, GAutomaton, GEdge};
use crate::group::{GeneratorSymbol, GroupElement, GroupSpec};
use crate::machine::{Machine, MachineClass};
use crate::transfer::{wp_machine_finite, wp_machine_free, wp_machine_zn, WordProblemMachine};

/// Accepted words of length `≤ max_len`, in enumeration order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slice {
    pub max_len: usize,
    pub words: Vec<String>,
    /// How the list was produced.
    pub oracle: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gautomaton: Option<GAutomaton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine: Option<Machine>,
    #[serde(default)]
    pub slices: Vec<Slice>,
}

impl Fixture {
    fn new(name: &str, description: &str, gautomaton: GAutomaton) -> Self {
        Fixture {
            name: name.into(),
            description: description.into(),
            gautomaton: Some(gautomaton),
            machine: None,
            slices: vec![],
        }
    }
}

/// Equal numbers of `a` and `b`, counted in `Z`.
pub fn a_eq_z1() -> GAutomaton {
    counter_automaton(1, &["s"], &[("s", Some("a"), vec![1], "s"), ("s", Some("b"), vec![-1], "s")], "s", &["s"])
        .expect("well-formed")
}

/// Equal numbers of `a` and `b`, counted in the free group of rank one.
pub fn a_eq_f1() -> GAutomaton {
    let f1 = GroupSpec::free(1).expect("rank 1");
    let a = GeneratorSymbol::positive("a").expect("valid name");
    GAutomaton {
        group: f1,
        alphabet: vec!["a".into(), "b".into()],
        states: vec!["s".into()],
        start: "s".into(),
        accept: vec!["s".into()],
        edges: vec![
            GEdge::new("s", Some("a"), GroupElement::free([a.clone()]), "s"),
            GEdge::new("s", Some("b"), GroupElement::free([a.inverse()]), "s"),
        ],
    }
}

/// `a^n b^n`, `n ≥ 1`.
pub fn a_anbn() -> GAutomaton {
    counter_automaton(
        1,
        &["s", "t"],
        &[("s", Some("a"), vec![1], "s"), ("s", Some("b"), vec![-1], "t"), ("t", Some("b"), vec![-1], "t")],
        "s",
        &["t"],
    )
    .expect("well-formed")
}

/// `a^n b^n c^n`, `n ≥ 0`, with two counters.
pub fn a_anbncn() -> GAutomaton {
    counter_automaton(
        2,
        &["s_a", "s_b", "s_c"],
        &[
            ("s_a", Some("a"), vec![1, 0], "s_a"),
            ("s_a", Some("b"), vec![-1, 1], "s_b"),
            ("s_b", Some("b"), vec![-1, 1], "s_b"),
            ("s_b", Some("c"), vec![0, -1], "s_c"),
            ("s_c", Some("c"), vec![0, -1], "s_c"),
        ],
        "s_a",
        &["s_a", "s_c"],
    )
    .expect("well-formed")
}

/// Even number of `a` over `Z/2`.
pub fn z2_parity() -> GAutomaton {
    GAutomaton {
        group: GroupSpec::cyclic(2).expect("order 2"),
        alphabet: vec!["a".into()],
        states: vec!["s".into()],
        start: "s".into(),
        accept: vec!["s".into()],
        edges: vec![GEdge::new("s", Some("a"), GroupElement::Finite(1), "s")],
    }
}

/// The groups with a shipped one-state word-problem automaton.
pub fn lemma_groups() -> Vec<(&'static str, GroupSpec)> {
    let g = |r: Result<GroupSpec>| r.expect("standard group");
    vec![
        ("c2", g(GroupSpec::cyclic(2))),
        ("s3", g(GroupSpec::symmetric3())),
        ("f1", g(GroupSpec::free(1))),
        ("f2", g(GroupSpec::free(2))),
        ("z1", g(GroupSpec::free_abelian(1))),
        ("z2", g(GroupSpec::free_abelian(2))),
    ]
}

/// Every fixture, with empty slices.
pub fn corpus() -> Vec<Fixture> {
    let mut out = vec![
        Fixture::new("a_eq_z1", "equal counts of a and b, one counter", a_eq_z1()),
        Fixture::new("a_eq_f1", "equal counts of a and b over the free group of rank one", a_eq_f1()),
        Fixture::new("a_anbn", "a^n b^n for n >= 1, one counter", a_anbn()),
        Fixture::new("a_anbncn", "a^n b^n c^n for n >= 0, two counters", a_anbncn()),
        Fixture::new("z2_parity", "even number of a over Z/2", z2_parity()),
    ];
    for (name, spec) in lemma_groups() {
        out.push(Fixture::new(
            &format!("wp_{name}"),
            &format!("word problem of {}", spec.family_label()),
            wp_automaton(&spec),
        ));
    }
    let z2 = GroupSpec::free_abelian(2).expect("rank 2");
    out.push(Fixture {
        machine: Some(conjecture_filter()),
        ..Fixture::new(
            "conjecture",
            "word problem of Z^2 and the filter (ab)^* {a^-1, b^-1}^*",
            wp_automaton(&z2),
        )
    });
    out
}

/// A G-automaton paired with a word-problem machine for its group.
#[derive(Debug, Clone)]
pub struct TransferCase {
    pub name: &'static str,
    /// Already normalized.
    pub automaton: GAutomaton,
    pub word_problem: WordProblemMachine,
    /// Sweep length: 8, or 6 for lba products over three or more letters.
    pub max_len: usize,
}

pub fn transfer_cases() -> Result<Vec<TransferCase>> {
    let case = |name, a: GAutomaton, n: WordProblemMachine| -> Result<TransferCase> {
        let max_len = if n.class() == MachineClass::Lba && a.alphabet.len() >= 3 { 6 } else { 8 };
        Ok(TransferCase { name, automaton: a.normalize()?, word_problem: n, max_len })
    };
    Ok(vec![
        case("z2_parity", z2_parity(), wp_machine_finite(&GroupSpec::cyclic(2)?)?)?,
        case("a_eq_f1", a_eq_f1(), wp_machine_free(&GroupSpec::free(1)?)?)?,
        case("a_eq_z1", a_eq_z1(), wp_machine_zn(1)?)?,
        case("a_anbn", a_anbn(), wp_machine_zn(1)?)?,
        case("a_anbncn", a_anbncn(), wp_machine_zn(2)?)?,
    ])
}
