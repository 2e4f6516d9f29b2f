//! Instruction-edge machines: a finite state control whose edges carry an
//! input token (or ε) and one instruction for the work tape.
//!
//! Three tiers are executable: finite-state (no tape), pushdown (the head
//! only sees the top of a stack), and linear-bounded (a blank work tape of
//! `⌈c·(|w|+1)⌉` cells between end markers). Input is read through the
//! control, never from the tape.

mod fsa;
mod lba;
mod pda;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Diagnostic, Error, Result};

pub use lba::DEFAULT_MAX_CONFIGURATIONS;
pub use pda::{Grammar, PdaDecider};

/// Bottom-of-stack marker; present from the start and never popped.
pub const BOTTOM: &str = "$";
pub const LEFT_END: &str = "<";
pub const RIGHT_END: &str = ">";
pub const BLANK: &str = "_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachineClass {
    Fsa,
    Pda,
    Lba,
    /// Parsed but not executable.
    Stack,
    /// Parsed but not executable.
    NestedStack,
    /// Parsed but not executable.
    Turing,
}

impl MachineClass {
    pub fn is_executable(self) -> bool {
        matches!(self, MachineClass::Fsa | MachineClass::Pda | MachineClass::Lba)
    }

    /// The instruction that leaves the tape untouched.
    pub fn neutral_instruction(self) -> Instruction {
        match self {
            MachineClass::Pda => Instruction::Stack {
                guard: None,
                action: StackAction::Stay,
            },
            MachineClass::Lba => Instruction::Tape {
                guard: None,
                write: None,
                shift: Move::S,
            },
            _ => Instruction::Noop,
        }
    }
}

impl fmt::Display for MachineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MachineClass::Fsa => "fsa",
            MachineClass::Pda => "pda",
            MachineClass::Lba => "lba",
            MachineClass::Stack => "stack",
            MachineClass::NestedStack => "nested-stack",
            MachineClass::Turing => "turing",
        })
    }
}

impl FromStr for MachineClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Argument(format!("unknown machine class {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackAction {
    Push(String),
    Pop,
    Stay,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
    S,
}

/// A tape instruction. A `None` guard is a wildcard.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum Instruction {
    Noop,
    Stack {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        guard: Option<String>,
        action: StackAction,
    },
    Tape {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        guard: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        write: Option<String>,
        #[serde(rename = "move")]
        shift: Move,
    },
}

impl Instruction {
    fn guard(&self) -> Option<&str> {
        match self {
            Instruction::Noop => None,
            Instruction::Stack { guard, .. } | Instruction::Tape { guard, .. } => guard.as_deref(),
        }
    }

    fn symbols(&self) -> Vec<&str> {
        match self {
            Instruction::Noop => vec![],
            Instruction::Stack { guard, action } => {
                let mut v: Vec<&str> = guard.iter().map(String::as_str).collect();
                if let StackAction::Push(s) = action {
                    v.push(s);
                }
                v
            }
            Instruction::Tape { guard, write, .. } => guard
                .iter()
                .chain(write.iter())
                .map(String::as_str)
                .collect(),
        }
    }

    /// Whether some tape contents satisfy both guards.
    pub fn overlaps(&self, other: &Instruction) -> bool {
        match (self.guard(), other.guard()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

/// One edge of the finite state control. `input: None` is an ε-edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub input: Option<String>,
    pub instr: Instruction,
    pub to: String,
}

impl Edge {
    pub fn new(from: &str, input: Option<&str>, instr: Instruction, to: &str) -> Self {
        Edge {
            from: from.to_string(),
            input: input.map(str::to_string),
            instr,
            to: to.to_string(),
        }
    }
}

/// The linear space constant `c`, written `"7"` or `"7/2"` in documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpaceMultiplier(pub Ratio<u64>);

impl SpaceMultiplier {
    pub fn integer(c: u64) -> Self {
        SpaceMultiplier(Ratio::from_integer(c))
    }

    /// `⌈c·(n+1)⌉` work cells for an input of length `n`.
    pub fn cells(&self, input_len: usize) -> usize {
        (self.0 * Ratio::from_integer(input_len as u64 + 1))
            .ceil()
            .to_integer()
            .to_usize()
            .unwrap_or(usize::MAX)
    }
}

impl fmt::Display for SpaceMultiplier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for SpaceMultiplier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Argument(format!("invalid space multiplier {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1u64),
        };
        if num == 0 || den == 0 {
            return Err(bad());
        }
        Ok(SpaceMultiplier(Ratio::new(num, den)))
    }
}

impl Serialize for SpaceMultiplier {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SpaceMultiplier {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Machine {
    pub class: MachineClass,
    pub input_alphabet: Vec<String>,
    pub tape_alphabet: Vec<String>,
    pub states: Vec<String>,
    pub start: String,
    pub accept: Vec<String>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space_multiplier: Option<SpaceMultiplier>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accept,
    Reject,
    ResourceExceeded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::ResourceExceeded => "resource-exceeded",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub configurations: u64,
    /// Highest work cell the head reached (lba).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_cells: Option<usize>,
    /// Symbols above the bottom marker (pda).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_stack_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub verdict: Verdict,
    pub stats: RunStats,
    /// Edge indices of an accepting run; present iff the verdict is accept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<Vec<usize>>,
}

/// What a replayed run touched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReplayStats {
    pub max_cells: Option<usize>,
    pub max_stack_depth: Option<usize>,
}

fn edge_label(i: usize, e: &Edge) -> String {
    format!(
        "edge #{i} ({} -{}-> {})",
        e.from,
        e.input.as_deref().unwrap_or("ε"),
        e.to
    )
}

impl Machine {
    /// Structural diagnostics; empty iff the machine is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let states: HashSet<&str> = self.states.iter().map(String::as_str).collect();
        if states.len() != self.states.len() {
            diags.push(Diagnostic::new("states", "duplicate state names"));
        }
        let sigma: HashSet<&str> = self.input_alphabet.iter().map(String::as_str).collect();
        let gamma: HashSet<&str> = self.tape_alphabet.iter().map(String::as_str).collect();
        if !states.contains(self.start.as_str()) {
            diags.push(Diagnostic::new("start", format!("{} is not a state", self.start)));
        }
        for a in &self.accept {
            if !states.contains(a.as_str()) {
                diags.push(Diagnostic::new("accept", format!("{a} is not a state")));
            }
        }
        let required: &[&str] = match self.class {
            MachineClass::Pda => &[BOTTOM],
            MachineClass::Lba => &[LEFT_END, RIGHT_END, BLANK],
            _ => &[],
        };
        for r in required {
            if !gamma.contains(r) {
                diags.push(Diagnostic::new("tape_alphabet", format!("missing marker {r}")));
            }
        }
        if self.class == MachineClass::Lba && self.space_multiplier.is_none() {
            diags.push(Diagnostic::new("space_multiplier", "lba needs a space multiplier"));
        }

        for (i, e) in self.edges.iter().enumerate() {
            let loc = edge_label(i, e);
            for s in [&e.from, &e.to] {
                if !states.contains(s.as_str()) {
                    diags.push(Diagnostic::new(&loc, format!("{s} is not a state")));
                }
            }
            if let Some(x) = &e.input {
                if !sigma.contains(x.as_str()) {
                    diags.push(Diagnostic::new(&loc, format!("input {x} not in the input alphabet")));
                }
            }
            for s in e.instr.symbols() {
                if !gamma.contains(s) {
                    diags.push(Diagnostic::new(&loc, format!("symbol {s} not in the tape alphabet")));
                }
            }
            match (self.class, &e.instr) {
                (MachineClass::Fsa, Instruction::Noop) => {}
                (MachineClass::Pda, Instruction::Stack { guard, action }) => match action {
                    StackAction::Pop if guard.is_none() || guard.as_deref() == Some(BOTTOM) => {
                        diags.push(Diagnostic::new(&loc, "may pop the bottom marker"));
                    }
                    StackAction::Push(s) if s == BOTTOM => {
                        diags.push(Diagnostic::new(&loc, "pushes the bottom marker"));
                    }
                    _ => {}
                },
                (MachineClass::Lba, Instruction::Tape { guard, write, shift }) => {
                    let g = guard.as_deref();
                    let is_marker = |s: Option<&str>| matches!(s, Some(LEFT_END) | Some(RIGHT_END));
                    if let Some(w) = write {
                        if g.is_none() || is_marker(g) {
                            diags.push(Diagnostic::new(&loc, "writes without a guard excluding the end markers"));
                        }
                        if is_marker(Some(w)) {
                            diags.push(Diagnostic::new(&loc, "writes an end marker"));
                        }
                    }
                    match shift {
                        Move::L if g.is_none() || g == Some(LEFT_END) => {
                            diags.push(Diagnostic::new(&loc, "may move left off the left end marker"));
                        }
                        Move::R if g.is_none() || g == Some(RIGHT_END) => {
                            diags.push(Diagnostic::new(&loc, "may move right off the right end marker"));
                        }
                        _ => {}
                    }
                }
                (class, _) if class.is_executable() => {
                    diags.push(Diagnostic::new(&loc, format!("instruction kind does not fit class {class}")));
                }
                _ => {}
            }
        }
        diags
    }

    /// No ε-edges, and no state has two edges on the same token whose guards overlap.
    pub fn is_deterministic(&self) -> bool {
        if self.edges.iter().any(|e| e.input.is_none()) {
            return false;
        }
        let mut by_key: HashMap<(&str, &str), Vec<&Instruction>> = HashMap::new();
        for e in &self.edges {
            by_key
                .entry((e.from.as_str(), e.input.as_deref().unwrap_or_default()))
                .or_default()
                .push(&e.instr);
        }
        by_key.values().all(|instrs| {
            instrs
                .iter()
                .enumerate()
                .all(|(i, a)| instrs[i + 1..].iter().all(|b| !a.overlaps(b)))
        })
    }

    fn require_class(&self, class: MachineClass) -> Result<()> {
        if !self.class.is_executable() {
            return Err(Error::UnimplementedClass(self.class.to_string()));
        }
        if self.class != class {
            return Err(Error::ClassMismatch {
                expected: class.to_string(),
                found: self.class.to_string(),
            });
        }
        Ok(())
    }

    fn require_valid(&self) -> Result<()> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(diags))
        }
    }

    /// Re-executes a run given as edge indices and checks that it consumes
    /// `word` exactly and ends in an accept state.
    pub fn replay<S: AsRef<str>>(&self, word: &[S], run: &[usize]) -> std::result::Result<ReplayStats, String> {
        let mut state = self.start.as_str();
        let mut pos = 0usize;
        let mut stack = vec![BOTTOM];
        let cells = self.space_multiplier.map(|c| c.cells(word.len()));
        let mut tape: Vec<&str> = Vec::new();
        if let Some(m) = cells {
            tape.push(LEFT_END);
            tape.extend(std::iter::repeat_n(BLANK, m));
            tape.push(RIGHT_END);
        }
        let mut head = 0usize;
        let mut stats = ReplayStats::default();
        match self.class {
            MachineClass::Pda => stats.max_stack_depth = Some(0),
            MachineClass::Lba => stats.max_cells = Some(0),
            _ => {}
        }
        for (step, &ei) in run.iter().enumerate() {
            let e = self.edges.get(ei).ok_or(format!("step {step}: no edge #{ei}"))?;
            if e.from != state {
                return Err(format!("step {step}: edge #{ei} leaves {} not {state}", e.from));
            }
            if let Some(x) = &e.input {
                if word.get(pos).map(AsRef::as_ref) != Some(x.as_str()) {
                    return Err(format!("step {step}: edge #{ei} reads {x} at position {pos}"));
                }
                pos += 1;
            }
            match &e.instr {
                Instruction::Noop => {}
                Instruction::Stack { guard, action } => {
                    let top = *stack.last().ok_or("stack underflow")?;
                    if guard.as_deref().is_some_and(|g| g != top) {
                        return Err(format!("step {step}: guard fails on top {top}"));
                    }
                    match action {
                        StackAction::Push(s) => stack.push(s),
                        StackAction::Pop if top == BOTTOM => return Err(format!("step {step}: pops bottom")),
                        StackAction::Pop => {
                            stack.pop();
                        }
                        StackAction::Stay => {}
                    }
                    let depth = stack.len() - 1;
                    stats.max_stack_depth = stats.max_stack_depth.max(Some(depth));
                }
                Instruction::Tape { guard, write, shift } => {
                    if tape.is_empty() {
                        return Err("tape instruction without a space multiplier".into());
                    }
                    let scanned = tape[head];
                    if guard.as_deref().is_some_and(|g| g != scanned) {
                        return Err(format!("step {step}: guard fails on {scanned}"));
                    }
                    if let Some(w) = write {
                        if scanned == LEFT_END || scanned == RIGHT_END {
                            return Err(format!("step {step}: overwrites an end marker"));
                        }
                        tape[head] = w;
                    }
                    head = match shift {
                        Move::L => head.checked_sub(1).ok_or(format!("step {step}: falls off the tape"))?,
                        Move::R if head + 1 < tape.len() => head + 1,
                        Move::R => return Err(format!("step {step}: falls off the tape")),
                        Move::S => head,
                    };
                    let touched = head.min(tape.len() - 2);
                    stats.max_cells = stats.max_cells.max(Some(touched));
                }
            }
            state = &e.to;
        }
        if pos != word.len() {
            return Err(format!("run consumes {pos} of {} tokens", word.len()));
        }
        if !self.accept.iter().any(|a| a == state) {
            return Err(format!("run ends in non-accepting state {state}"));
        }
        Ok(stats)
    }
}

/// A validated machine prepared for repeated membership queries.
#[derive(Debug)]
pub enum Decider<'m> {
    Fsa(fsa::FsaDecider<'m>),
    Pda(PdaDecider<'m>),
    Lba(lba::LbaDecider<'m>),
}

impl<'m> Decider<'m> {
    pub fn new(machine: &'m Machine) -> Result<Self> {
        if !machine.class.is_executable() {
            return Err(Error::UnimplementedClass(machine.class.to_string()));
        }
        machine.require_valid()?;
        Ok(match machine.class {
            MachineClass::Fsa => Decider::Fsa(fsa::FsaDecider::new(machine)),
            MachineClass::Pda => Decider::Pda(PdaDecider::new(machine)),
            MachineClass::Lba => Decider::Lba(lba::LbaDecider::new(machine, DEFAULT_MAX_CONFIGURATIONS)),
            _ => unreachable!("checked above"),
        })
    }

    /// Like [`Decider::new`] with a custom visited-set cap for lba searches.
    pub fn with_lba_cap(machine: &'m Machine, max_configurations: usize) -> Result<Self> {
        match Decider::new(machine)? {
            Decider::Lba(_) => Ok(Decider::Lba(lba::LbaDecider::new(machine, max_configurations))),
            other => Ok(other),
        }
    }

    pub fn machine(&self) -> &'m Machine {
        match self {
            Decider::Fsa(d) => d.machine(),
            Decider::Pda(d) => d.machine(),
            Decider::Lba(d) => d.machine(),
        }
    }

    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> Result<RunResult> {
        let result = match self {
            Decider::Fsa(d) => d.run(word),
            Decider::Pda(d) => d.run(word),
            Decider::Lba(d) => d.run(word),
        };
        if let Some(run) = &result.run {
            self.machine()
                .replay(word, run)
                .map_err(|e| Error::Internal(format!("accepting run failed replay: {e}")))?;
        }
        Ok(result)
    }
}

/// Finite-state membership by ε-closure subset simulation.
pub fn fsa_accepts<S: AsRef<str>>(m: &Machine, word: &[S]) -> Result<RunResult> {
    m.require_class(MachineClass::Fsa)?;
    Decider::new(m)?.run(word)
}

/// Exact pushdown membership through grammar conversion and chart recognition.
pub fn pda_accepts<S: AsRef<str>>(m: &Machine, word: &[S]) -> Result<RunResult> {
    m.require_class(MachineClass::Pda)?;
    Decider::new(m)?.run(word)
}

/// Exact linear-bounded membership by configuration search.
pub fn lba_accepts<S: AsRef<str>>(m: &Machine, word: &[S]) -> Result<RunResult> {
    m.require_class(MachineClass::Lba)?;
    Decider::new(m)?.run(word)
}

/// Dispatches on the machine class.
pub fn accepts<S: AsRef<str>>(m: &Machine, word: &[S]) -> Result<RunResult> {
    Decider::new(m)?.run(word)
}

/// Maps state names and edges to dense indices.
#[derive(Debug)]
pub(crate) struct Indexed<'m> {
    pub machine: &'m Machine,
    pub start: usize,
    pub accept: Vec<bool>,
    /// Outgoing edge indices per state.
    pub out: Vec<Vec<usize>>,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

impl<'m> Indexed<'m> {
    pub fn new(machine: &'m Machine) -> Self {
        let state_index: HashMap<&str, usize> = machine
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let n = machine.states.len();
        let mut accept = vec![false; n];
        for a in &machine.accept {
            accept[state_index[a.as_str()]] = true;
        }
        let mut out = vec![Vec::new(); n];
        let mut from = Vec::with_capacity(machine.edges.len());
        let mut to = Vec::with_capacity(machine.edges.len());
        for (i, e) in machine.edges.iter().enumerate() {
            let f = state_index[e.from.as_str()];
            out[f].push(i);
            from.push(f);
            to.push(state_index[e.to.as_str()]);
        }
        Indexed {
            machine,
            start: state_index[machine.start.as_str()],
            accept,
            out,
            from,
            to,
        }
    }
}

/// Walks parent links back from `last`, returning edge indices in run order.
pub(crate) fn unwind(parents: &[(usize, usize)], mut last: usize) -> Vec<usize> {
    let mut run = Vec::new();
    while last != usize::MAX {
        let (parent, edge) = parents[last];
        if parent == usize::MAX {
            break;
        }
        run.push(edge);
        last = parent;
    }
    run.reverse();
    run
}
