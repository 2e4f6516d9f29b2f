//! Compiling G-automata into classical machines.
//!
//! Given a normalized G-automaton `P` and a machine `N` for the word problem
//! of the same group, [`product`] pairs every `P` edge `(x, g)` with every
//! `N` edge reading the token for `g`, yielding an edge `(x, instruction)` of
//! a machine in `N`'s class. Three further rules complete the pairing:
//! identity-weight `P` edges keep `N` where it is under the class's neutral
//! instruction, and ε-input `N` edges move `N` alone. ε-letter `P` edges with
//! a generator weight fall under the main rule and become ε-input edges.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaut::GAutomaton;
use crate::group::{Family, GeneratorSymbol, GroupElement, GroupSpec};
use crate::machine::{
    Edge, Instruction, Machine, MachineClass, Move, SpaceMultiplier, StackAction, BLANK, BOTTOM, LEFT_END,
    RIGHT_END,
};

/// A machine recognizing the word problem of `group` over its generator tokens.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordProblemMachine {
    pub machine: Machine,
    pub group: GroupSpec,
}

impl WordProblemMachine {
    pub fn class(&self) -> MachineClass {
        self.machine.class
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionRule {
    /// `(x, g)` in P with `(g, instruction)` in N.
    Paired,
    /// Identity-weight P edge; N stays put under the neutral instruction.
    IdentityStep,
    /// ε-input N edge; P stays put.
    MachineEpsilon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateOrigin {
    pub state: String,
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrigin {
    pub rule: CompositionRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_edge: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_edge: Option<usize>,
}

/// Maps product states and edges back to the factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub states: Vec<StateOrigin>,
    /// Parallel to the machine's edge list.
    pub edges: Vec<EdgeOrigin>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductMachine {
    pub machine: Machine,
    pub provenance: Provenance,
}

fn pair_name(p: &str, q: &str) -> String {
    format!("{p}|{q}")
}

/// Builds the product machine. Only states reachable from `(p_S, q_S)` are kept.
pub fn product(p: &GAutomaton, n: &WordProblemMachine) -> Result<ProductMachine> {
    p.require_valid()?;
    let diags = n.machine.validate();
    if !diags.is_empty() {
        return Err(Error::Invalid(diags));
    }
    if !p.is_normalized() {
        return Err(Error::NotNormalized(
            "every edge weight must be the identity or a generator image".into(),
        ));
    }
    let tokens: HashSet<String> = p.group.generator_tokens().into_iter().collect();
    let n_tokens: HashSet<String> = n.machine.input_alphabet.iter().cloned().collect();
    if tokens != n_tokens {
        return Err(Error::GeneratorMismatch(format!(
            "automaton group generators {:?}, machine reads {:?}",
            p.group.generator_tokens(),
            n.machine.input_alphabet
        )));
    }
    for g in p.group.generators() {
        if n.group.image(&g.symbol).ok() != Some(&g.image) {
            return Err(Error::GeneratorMismatch(format!(
                "generator {} has different images in the two groups",
                g.symbol
            )));
        }
    }

    // Each non-identity weight is read by N as one canonical token.
    let mut token_of: Vec<Option<String>> = Vec::with_capacity(p.edges.len());
    for e in &p.edges {
        if p.group.is_identity(&e.weight) {
            token_of.push(None);
        } else {
            let t = p.group.token_for(&e.weight).expect("normalized weight");
            token_of.push(Some(t.to_string()));
        }
    }

    let class = n.machine.class;
    let neutral = class.neutral_instruction();
    let start = (p.start.clone(), n.machine.start.clone());
    let mut seen: HashSet<(String, String)> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    let mut origins = Vec::new();

    let mut visit = |next: (String, String), queue: &mut VecDeque<(String, String)>| {
        if seen.insert(next.clone()) {
            order.push(next.clone());
            queue.push_back(next);
        }
    };

    while let Some((ps, qs)) = queue.pop_front() {
        let here = pair_name(&ps, &qs);
        for (pi, pe) in p.edges.iter().enumerate().filter(|(_, e)| e.from == ps) {
            match &token_of[pi] {
                None => {
                    edges.push(Edge::new(&here, pe.letter.as_deref(), neutral.clone(), &pair_name(&pe.to, &qs)));
                    origins.push(EdgeOrigin { rule: CompositionRule::IdentityStep, p_edge: Some(pi), n_edge: None });
                    visit((pe.to.clone(), qs.clone()), &mut queue);
                }
                Some(token) => {
                    for (ni, ne) in n.machine.edges.iter().enumerate() {
                        if ne.from != qs || ne.input.as_deref() != Some(token) {
                            continue;
                        }
                        edges.push(Edge::new(&here, pe.letter.as_deref(), ne.instr.clone(), &pair_name(&pe.to, &ne.to)));
                        origins.push(EdgeOrigin { rule: CompositionRule::Paired, p_edge: Some(pi), n_edge: Some(ni) });
                        visit((pe.to.clone(), ne.to.clone()), &mut queue);
                    }
                }
            }
        }
        for (ni, ne) in n.machine.edges.iter().enumerate() {
            if ne.from == qs && ne.input.is_none() {
                edges.push(Edge::new(&here, None, ne.instr.clone(), &pair_name(&ps, &ne.to)));
                origins.push(EdgeOrigin { rule: CompositionRule::MachineEpsilon, p_edge: None, n_edge: Some(ni) });
                visit((ps.clone(), ne.to.clone()), &mut queue);
            }
        }
    }

    let accept = order
        .iter()
        .filter(|(ps, qs)| p.accept.contains(ps) && n.machine.accept.contains(qs))
        .map(|(ps, qs)| pair_name(ps, qs))
        .collect();
    let machine = Machine {
        class,
        input_alphabet: p.alphabet.clone(),
        tape_alphabet: n.machine.tape_alphabet.clone(),
        states: order.iter().map(|(ps, qs)| pair_name(ps, qs)).collect(),
        start: pair_name(&p.start, &n.machine.start),
        accept,
        edges,
        space_multiplier: n.machine.space_multiplier,
    };
    let provenance = Provenance {
        states: order
            .iter()
            .map(|(ps, qs)| StateOrigin { state: pair_name(ps, qs), p: ps.clone(), q: qs.clone() })
            .collect(),
        edges: origins,
    };
    Ok(ProductMachine { machine, provenance })
}

/// Both factors deterministic, and no state of `p` has two outgoing edges
/// with the same group element. When this holds the product is deterministic.
pub fn product_preserves_determinism(p: &GAutomaton, n: &WordProblemMachine) -> bool {
    p.is_deterministic() && p.has_unique_weights() && n.machine.is_deterministic()
}

fn finite_state(i: usize) -> String {
    format!("g{i}")
}

/// The Cayley graph as a finite-state machine: one state per element, start
/// and accept at the identity.
pub fn wp_machine_finite(spec: &GroupSpec) -> Result<WordProblemMachine> {
    let Family::Finite { order, cayley } = spec.family() else {
        return Err(Error::FamilyMismatch(format!("{} is not finite", spec.family_label())));
    };
    let mut edges = Vec::new();
    for (h, row) in cayley.iter().enumerate() {
        for g in spec.generators() {
            let GroupElement::Finite(gi) = g.image else { unreachable!("validated finite spec") };
            edges.push(Edge::new(&finite_state(h), Some(&g.symbol.to_string()), Instruction::Noop, &finite_state(row[gi])));
        }
    }
    Ok(WordProblemMachine {
        machine: Machine {
            class: MachineClass::Fsa,
            input_alphabet: spec.generator_tokens(),
            tape_alphabet: vec![],
            states: (0..*order).map(finite_state).collect(),
            start: finite_state(0),
            accept: vec![finite_state(0)],
            edges,
            space_multiplier: None,
        },
        group: spec.clone(),
    })
}

/// Free reduction on a stack: for each letter `l` of a generator's image,
/// pop if the top is `l^-1`, otherwise push `l`. Accepts on reading the
/// bottom marker in the working state.
pub fn wp_machine_free(spec: &GroupSpec) -> Result<WordProblemMachine> {
    let Family::Free { letters, .. } = spec.family() else {
        return Err(Error::FamilyMismatch(format!("{} is not free", spec.family_label())));
    };
    let mut gamma = vec![BOTTOM.to_string()];
    for l in letters {
        gamma.push(l.clone());
        gamma.push(format!("{l}^-1"));
    }
    let work = "w";
    let mut states = vec![work.to_string(), "acc".to_string()];
    let mut edges = Vec::new();
    for (ti, g) in spec.generators().iter().enumerate() {
        let token = g.symbol.to_string();
        let GroupElement::Free(image) = &g.image else { unreachable!("validated free spec") };
        if image.is_empty() {
            edges.push(Edge::new(work, Some(&token), Instruction::Stack { guard: None, action: StackAction::Stay }, work));
            continue;
        }
        let mut src = work.to_string();
        for (k, letter) in image.iter().enumerate() {
            let dst = if k + 1 == image.len() {
                work.to_string()
            } else {
                let s = format!("t{ti}.{}", k + 1);
                states.push(s.clone());
                s
            };
            let input = (k == 0).then_some(token.as_str());
            let cancels = letter.inverse().to_string();
            for x in &gamma {
                let action = if *x == cancels { StackAction::Pop } else { StackAction::Push(letter.to_string()) };
                edges.push(Edge::new(&src, input, Instruction::Stack { guard: Some(x.clone()), action }, &dst));
            }
            src = dst;
        }
    }
    edges.push(Edge::new(work, None, Instruction::Stack { guard: Some(BOTTOM.into()), action: StackAction::Stay }, "acc"));
    Ok(WordProblemMachine {
        machine: Machine {
            class: MachineClass::Pda,
            input_alphabet: spec.generator_tokens(),
            tape_alphabet: gamma,
            states,
            start: work.into(),
            accept: vec!["acc".into()],
            edges,
            space_multiplier: None,
        },
        group: spec.clone(),
    })
}

const SIGN_POS: &str = "+";
const SIGN_NEG: &str = "-";
const MARK: &str = "1";
const SEPARATOR: &str = "#";
/// Symbols that may appear strictly between the end markers.
const INTERIOR: [&str; 5] = [BLANK, SIGN_POS, SIGN_NEG, MARK, SEPARATOR];

#[derive(Default)]
struct LbaBuilder {
    states: Vec<String>,
    edges: Vec<Edge>,
}

impl LbaBuilder {
    fn state(&mut self, name: &str) -> String {
        if !self.states.iter().any(|s| s == name) {
            self.states.push(name.to_string());
        }
        name.to_string()
    }

    fn edge(&mut self, from: &str, input: Option<&str>, guard: &str, write: Option<&str>, shift: Move, to: &str) {
        self.state(from);
        self.state(to);
        self.edges.push(Edge::new(
            from,
            input,
            Instruction::Tape { guard: Some(guard.into()), write: write.map(str::to_string), shift },
            to,
        ));
    }

    fn eps(&mut self, from: &str, guard: &str, write: Option<&str>, shift: Move, to: &str) {
        self.edge(from, None, guard, write, shift, to);
    }
}

/// Word problem of `Z^k` on a linear-bounded work tape.
///
/// Layout: `k` zones `S 1…1` separated by `#`, where `S` is the sign cell
/// (`+` or `-`, always `+` at magnitude zero) followed by the magnitude in
/// unary. Each token walks to its zone and appends or deletes one mark,
/// shifting the rest of the tape. At most `2k + n` cells are ever used, so
/// the recorded multiplier `2k + 3` is never tight.
pub fn wp_machine_zn(k: usize) -> Result<WordProblemMachine> {
    if k == 0 {
        return Err(Error::Argument("Z^k needs k >= 1".into()));
    }
    let spec = GroupSpec::free_abelian(k)?;
    let mut b = LbaBuilder::default();
    b.state("init");

    // Lay out the empty zones, then return to the left marker.
    b.eps("init", LEFT_END, None, Move::R, "lay1");
    for z in 1..=k {
        if z < k {
            b.eps(&format!("lay{z}"), BLANK, Some(SIGN_POS), Move::R, &format!("sep{z}"));
            b.eps(&format!("sep{z}"), BLANK, Some(SEPARATOR), Move::R, &format!("lay{}", z + 1));
        } else {
            b.eps(&format!("lay{z}"), BLANK, Some(SIGN_POS), Move::S, "home");
        }
    }
    for y in INTERIOR {
        b.eps("home", y, None, Move::L, "home");
    }
    b.eps("home", LEFT_END, None, Move::S, "idle");

    // Append one mark at the end of the zone whose sign cell is under the head.
    for sign in [SIGN_POS, SIGN_NEG] {
        b.eps("app", sign, None, Move::R, "app1");
    }
    b.eps("app1", MARK, None, Move::R, "app1");
    b.eps("app1", BLANK, Some(MARK), Move::S, "home");
    b.eps("app1", SEPARATOR, Some(MARK), Move::R, &format!("carry{SEPARATOR}"));
    for carried in [SIGN_POS, SIGN_NEG, MARK, SEPARATOR] {
        let from = format!("carry{carried}");
        for y in [SIGN_POS, SIGN_NEG, MARK, SEPARATOR] {
            b.eps(&from, y, Some(carried), Move::R, &format!("carry{y}"));
        }
        b.eps(&from, BLANK, Some(carried), Move::S, "home");
    }

    // Delete the cell under the head, shifting everything after it left.
    for y in INTERIOR {
        b.eps("del", y, None, Move::R, "peek");
    }
    for z in INTERIOR {
        b.eps("peek", z, None, Move::L, &format!("put{z}"));
    }
    b.eps("peek", RIGHT_END, None, Move::L, &format!("put{BLANK}"));
    for z in INTERIOR {
        let next = if z == BLANK { "home" } else { "del" };
        for y in INTERIOR {
            b.eps(&format!("put{z}"), y, Some(z), Move::R, next);
        }
    }

    for (i, g) in spec.generators().iter().enumerate() {
        let zone = i / 2 + 1;
        let token = g.symbol.to_string();
        let increment = g.symbol.exponent() > 0;
        let at = |j: usize| format!("{token}@{j}");
        b.edge("idle", Some(&token), LEFT_END, None, Move::R, &at(1));
        for j in 1..zone {
            for y in [SIGN_POS, SIGN_NEG, MARK] {
                b.eps(&at(j), y, None, Move::R, &at(j));
            }
            b.eps(&at(j), SEPARATOR, None, Move::R, &at(j + 1));
        }
        let target = at(zone);
        let (grow, shrink) = if increment { (SIGN_POS, SIGN_NEG) } else { (SIGN_NEG, SIGN_POS) };
        // Same sign as the step: the magnitude grows.
        b.eps(&target, grow, None, Move::S, "app");
        if increment {
            // Sign is '-', so the magnitude is at least one; shrink it and
            // reset the sign if it reaches zero.
            let (chk, last, fix) = (format!("{token}:chk"), format!("{token}:last"), format!("{token}:fix"));
            b.eps(&target, shrink, None, Move::R, &chk);
            b.eps(&chk, MARK, None, Move::R, &last);
            b.eps(&last, MARK, None, Move::L, "del");
            for y in [SEPARATOR, BLANK] {
                b.eps(&last, y, None, Move::L, &fix);
            }
            b.eps(&fix, MARK, None, Move::L, &format!("{token}:sign"));
            b.eps(&format!("{token}:sign"), SIGN_NEG, Some(SIGN_POS), Move::R, "del");
        } else {
            // Sign is '+': shrink if nonzero, otherwise flip to '-' and grow.
            let (probe, flip) = (format!("{token}:probe"), format!("{token}:flip"));
            b.eps(&target, shrink, None, Move::R, &probe);
            b.eps(&probe, MARK, None, Move::S, "del");
            for y in [SEPARATOR, BLANK] {
                b.eps(&probe, y, None, Move::L, &flip);
            }
            b.eps(&flip, SIGN_POS, Some(SIGN_NEG), Move::S, "app");
        }
    }

    // End of input: every zone must read "+" followed directly by '#' or blank.
    b.eps("idle", LEFT_END, None, Move::R, "zero");
    b.eps("zero", SIGN_POS, None, Move::R, "zero.next");
    b.eps("zero.next", SEPARATOR, None, Move::R, "zero");
    b.eps("zero.next", BLANK, None, Move::S, "accept");

    let tape_alphabet = [LEFT_END, RIGHT_END]
        .into_iter()
        .chain(INTERIOR)
        .map(str::to_string)
        .collect();
    Ok(WordProblemMachine {
        machine: Machine {
            class: MachineClass::Lba,
            input_alphabet: spec.generator_tokens(),
            tape_alphabet,
            states: b.states,
            start: "init".into(),
            accept: vec!["accept".into()],
            edges: b.edges,
            space_multiplier: Some(SpaceMultiplier::integer(2 * k as u64 + 3)),
        },
        group: spec,
    })
}

/// The natural word-problem machine for a group family, or one of an
/// explicitly requested class when that class is the natural one.
pub fn wp_machine(spec: &GroupSpec, class: Option<MachineClass>) -> Result<WordProblemMachine> {
    let natural = match spec.family() {
        Family::Finite { .. } => MachineClass::Fsa,
        Family::Free { .. } => MachineClass::Pda,
        Family::FreeAbelian { .. } => MachineClass::Lba,
    };
    if let Some(c) = class {
        if c != natural {
            return Err(Error::ClassMismatch { expected: natural.to_string(), found: c.to_string() });
        }
    }
    match spec.family() {
        Family::Finite { .. } => wp_machine_finite(spec),
        Family::Free { .. } => wp_machine_free(spec),
        Family::FreeAbelian { rank } => {
            let standard = GroupSpec::free_abelian(*rank)?;
            if *spec != standard {
                return Err(Error::GeneratorMismatch("the lba builder needs the standard generators of Z^k".into()));
            }
            wp_machine_zn(*rank)
        }
    }
}

/// Token strings of a word in generator symbols.
pub fn tokens(word: &[GeneratorSymbol]) -> Vec<String> {
    word.iter().map(ToString::to_string).collect()
}

/// Indexes provenance by product state name.
pub fn origin_index(provenance: &Provenance) -> HashMap<&str, (&str, &str)> {
    provenance
        .states
        .iter()
        .map(|s| (s.state.as_str(), (s.p.as_str(), s.q.as_str())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaut::{counter_automaton, GEdge};
    use crate::machine::{accepts, Verdict};

    fn run(m: &Machine, w: &str) -> Verdict {
        let word: Vec<&str> = w.split_whitespace().collect();
        accepts(m, &word).unwrap().verdict
    }

    fn z2_parity() -> GAutomaton {
        GAutomaton {
            group: GroupSpec::cyclic(2).unwrap(),
            alphabet: vec!["a".into()],
            states: vec!["s".into()],
            start: "s".into(),
            accept: vec!["s".into()],
            edges: vec![GEdge::new("s", Some("a"), GroupElement::Finite(1), "s")],
        }
    }

    #[test]
    fn finite_machine() {
        let n = wp_machine_finite(&GroupSpec::cyclic(2).unwrap()).unwrap();
        assert_eq!(n.machine.states.len(), 2);
        assert_eq!(n.machine.validate(), vec![]);
        assert_eq!(run(&n.machine, "t t"), Verdict::Accept);
        assert_eq!(run(&n.machine, "t"), Verdict::Reject);
    }

    #[test]
    fn free_machine() {
        let n = wp_machine_free(&GroupSpec::free(2).unwrap()).unwrap();
        assert_eq!(n.machine.validate(), vec![]);
        assert_eq!(run(&n.machine, "a b b^-1 a^-1"), Verdict::Accept);
        assert_eq!(run(&n.machine, "a b a^-1 b^-1"), Verdict::Reject);
        assert_eq!(run(&n.machine, ""), Verdict::Accept);
    }

    #[test]
    fn zn_machine() {
        let n = wp_machine_zn(2).unwrap();
        assert_eq!(n.machine.validate(), vec![]);
        assert_eq!(run(&n.machine, "a b a^-1 b^-1"), Verdict::Accept);
        assert_eq!(run(&n.machine, "a b a^-1"), Verdict::Reject);
        assert_eq!(run(&n.machine, "b^-1 b^-1 a b b a^-1"), Verdict::Accept);
        assert_eq!(run(&n.machine, "a^-1 a^-1 a a a"), Verdict::Reject);
        assert_eq!(run(&n.machine, ""), Verdict::Accept);
    }

    #[test]
    fn parity_product() {
        let p = z2_parity();
        let n = wp_machine_finite(&p.group).unwrap();
        let m = product(&p, &n).unwrap();
        assert_eq!(m.machine.class, MachineClass::Fsa);
        assert_eq!(m.machine.states, vec!["s|g0", "s|g1"]);
        assert_eq!(m.machine.start, "s|g0");
        assert_eq!(m.machine.accept, vec!["s|g0"]);
        assert_eq!(run(&m.machine, "a a"), Verdict::Accept);
        assert_eq!(run(&m.machine, "a"), Verdict::Reject);
        assert!(product_preserves_determinism(&p, &n));
        assert!(m.machine.is_deterministic());
    }

    #[test]
    fn equal_counts_product_on_lba() {
        let p = counter_automaton(1, &["s"], &[("s", Some("l"), vec![1], "s"), ("s", Some("r"), vec![-1], "s")], "s", &["s"])
            .unwrap();
        let n = wp_machine_zn(1).unwrap();
        let m = product(&p, &n).unwrap();
        assert_eq!(m.machine.class, MachineClass::Lba);
        assert_eq!(run(&m.machine, "l l r r"), Verdict::Accept);
        assert_eq!(run(&m.machine, "l r l r"), Verdict::Accept);
        assert_eq!(run(&m.machine, "l r r"), Verdict::Reject);
        assert_eq!(run(&m.machine, ""), Verdict::Accept);
    }

    #[test]
    fn product_rejects_bad_factors() {
        let raw = counter_automaton(1, &["s"], &[("s", Some("x"), vec![2], "s")], "s", &["s"]).unwrap();
        let n = wp_machine_zn(1).unwrap();
        assert!(matches!(product(&raw, &n), Err(Error::NotNormalized(_))));
        let z2 = wp_machine_zn(2).unwrap();
        let ok = raw.normalize().unwrap();
        assert!(matches!(product(&ok, &z2), Err(Error::GeneratorMismatch(_))));
    }

    #[test]
    fn determinism_predicate_fails_on_duplicate_letters() {
        let mut p = z2_parity();
        p.edges.push(GEdge::new("s", Some("a"), GroupElement::Finite(0), "s"));
        let n = wp_machine_finite(&p.group).unwrap();
        assert!(!product_preserves_determinism(&p, &n));
        let free = wp_machine_free(&GroupSpec::free(1).unwrap()).unwrap();
        assert!(!free.machine.is_deterministic());
    }

    #[test]
    fn provenance_names_pairs() {
        let p = z2_parity();
        let m = product(&p, &wp_machine_finite(&p.group).unwrap()).unwrap();
        let idx = origin_index(&m.provenance);
        assert_eq!(idx["s|g1"], ("s", "g1"));
        assert_eq!(m.provenance.edges.len(), m.machine.edges.len());
        assert!(m.provenance.edges.iter().all(|o| o.rule == CompositionRule::Paired));
    }
}
