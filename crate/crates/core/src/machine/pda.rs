//! Exact pushdown membership.
//!
//! The machine is first turned into an empty-stack acceptor by adding a
//! drain state reachable by ε from every accept state, then converted to a
//! context-free grammar with the classical triple construction: nonterminal
//! `[p X q]` derives exactly the inputs that take the machine from `p` with
//! `X` on top to `q` with that `X` removed. Recognition is a span chart with
//! a per-span fixpoint, which handles ε- and unit productions directly.

use std::collections::HashMap;

use super::{Indexed, Machine, RunResult, RunStats, StackAction, Verdict, BOTTOM};
use crate::machine::Instruction;

/// `lhs -> terminal? body[0]? body[1]?`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: usize,
    pub terminal: Option<usize>,
    pub body: Vec<usize>,
    /// The machine edge this production simulates; `None` for drain steps.
    pub edge: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    pub nonterminals: usize,
    pub start: usize,
    pub rules: Vec<Rule>,
}

struct Transition {
    from: usize,
    input: Option<usize>,
    pop: usize,
    to: usize,
    /// Replacement for the popped symbol, top first.
    push: Vec<usize>,
    edge: Option<usize>,
}

impl Grammar {
    pub fn from_machine(m: &Machine) -> Grammar {
        let ix = Indexed::new(m);
        let sym: HashMap<&str, usize> = m
            .tape_alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let term: HashMap<&str, usize> = m
            .input_alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let gamma = m.tape_alphabet.len();
        let bottom = sym[BOTTOM];
        let drain = m.states.len();
        let nq = drain + 1;

        let mut transitions = Vec::new();
        for (ei, e) in m.edges.iter().enumerate() {
            let Instruction::Stack { guard, action } = &e.instr else {
                continue;
            };
            let guards: Vec<usize> = match guard {
                Some(g) => vec![sym[g.as_str()]],
                None => (0..gamma).collect(),
            };
            for x in guards {
                let push = match action {
                    StackAction::Push(y) => vec![sym[y.as_str()], x],
                    StackAction::Pop if x == bottom => continue,
                    StackAction::Pop => vec![],
                    StackAction::Stay => vec![x],
                };
                transitions.push(Transition {
                    from: ix.from[ei],
                    input: e.input.as_deref().map(|t| term[t]),
                    pop: x,
                    to: ix.to[ei],
                    push,
                    edge: Some(ei),
                });
            }
        }
        for x in 0..gamma {
            for (q, &acc) in ix.accept.iter().enumerate() {
                if acc {
                    transitions.push(Transition { from: q, input: None, pop: x, to: drain, push: vec![], edge: None });
                }
            }
            transitions.push(Transition { from: drain, input: None, pop: x, to: drain, push: vec![], edge: None });
        }

        let nt = |p: usize, x: usize, q: usize| (p * gamma + x) * nq + q;
        let mut rules = Vec::new();
        for t in &transitions {
            match t.push.as_slice() {
                [] => rules.push(Rule { lhs: nt(t.from, t.pop, t.to), terminal: t.input, body: vec![], edge: t.edge }),
                [y] => {
                    for s in 0..nq {
                        rules.push(Rule {
                            lhs: nt(t.from, t.pop, s),
                            terminal: t.input,
                            body: vec![nt(t.to, *y, s)],
                            edge: t.edge,
                        });
                    }
                }
                [y1, y2] => {
                    for s1 in 0..nq {
                        for s2 in 0..nq {
                            rules.push(Rule {
                                lhs: nt(t.from, t.pop, s2),
                                terminal: t.input,
                                body: vec![nt(t.to, *y1, s1), nt(s1, *y2, s2)],
                                edge: t.edge,
                            });
                        }
                    }
                }
                _ => unreachable!("at most two symbols replace the top"),
            }
        }
        Grammar::trimmed(nq * gamma * nq, nt(ix.start, bottom, drain), rules)
    }

    /// Drops unproductive and unreachable nonterminals and renumbers the rest.
    fn trimmed(count: usize, start: usize, rules: Vec<Rule>) -> Grammar {
        let mut productive = vec![false; count];
        loop {
            let mut changed = false;
            for r in &rules {
                if !productive[r.lhs] && r.body.iter().all(|&b| productive[b]) {
                    productive[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let rules: Vec<Rule> = rules
            .into_iter()
            .filter(|r| productive[r.lhs] && r.body.iter().all(|&b| productive[b]))
            .collect();
        let mut by_lhs: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_lhs.entry(r.lhs).or_default().push(i);
        }
        let mut reachable = vec![false; count];
        let mut stack = vec![start];
        reachable[start] = true;
        while let Some(a) = stack.pop() {
            for &ri in by_lhs.get(&a).map(Vec::as_slice).unwrap_or_default() {
                for &b in &rules[ri].body {
                    if !reachable[b] {
                        reachable[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; count];
        let mut next = 0;
        for a in 0..count {
            if reachable[a] && (productive[a] || a == start) {
                renumber[a] = next;
                next += 1;
            }
        }
        let rules = rules
            .into_iter()
            .filter(|r| reachable[r.lhs])
            .map(|r| Rule {
                lhs: renumber[r.lhs],
                terminal: r.terminal,
                body: r.body.iter().map(|&b| renumber[b]).collect(),
                edge: r.edge,
            })
            .collect();
        Grammar {
            nonterminals: next,
            start: renumber[start],
            rules,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Back {
    rule: u32,
    mid: u32,
}

const ABSENT: Back = Back { rule: u32::MAX, mid: 0 };

#[derive(Debug)]
pub struct PdaDecider<'m> {
    machine: &'m Machine,
    grammar: Grammar,
    terminals: HashMap<&'m str, usize>,
    lexical: Vec<Vec<usize>>,
    unlexical: Vec<usize>,
}

impl<'m> PdaDecider<'m> {
    pub(crate) fn new(machine: &'m Machine) -> Self {
        let grammar = Grammar::from_machine(machine);
        let terminals = machine
            .input_alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut lexical = vec![Vec::new(); machine.input_alphabet.len()];
        let mut unlexical = Vec::new();
        for (i, r) in grammar.rules.iter().enumerate() {
            match r.terminal {
                Some(t) => lexical[t].push(i),
                None => unlexical.push(i),
            }
        }
        PdaDecider {
            machine,
            grammar,
            terminals,
            lexical,
            unlexical,
        }
    }

    pub fn machine(&self) -> &'m Machine {
        self.machine
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> RunResult {
        let reject = |configurations| RunResult {
            verdict: Verdict::Reject,
            stats: RunStats { configurations, max_cells: None, max_stack_depth: None },
            run: None,
        };
        let Some(tokens) = word
            .iter()
            .map(|t| self.terminals.get(t.as_ref()).copied())
            .collect::<Option<Vec<usize>>>()
        else {
            return reject(0);
        };
        let n = tokens.len();
        let g = &self.grammar;
        let width = n + 1;
        let cell = |i: usize, j: usize, a: usize| (i * width + j) * g.nonterminals + a;
        let mut chart = vec![ABSENT; width * width * g.nonterminals];
        let mut items = 0u64;

        for len in 0..=n {
            for i in 0..=n - len {
                let j = i + len;
                loop {
                    let mut changed = false;
                    let lexical = if i < j { self.lexical[tokens[i]].as_slice() } else { &[] };
                    for &ri in self.unlexical.iter().chain(lexical) {
                        let r = &g.rules[ri];
                        if chart[cell(i, j, r.lhs)].rule != u32::MAX {
                            continue;
                        }
                        let s = if r.terminal.is_some() { i + 1 } else { i };
                        let mid = match r.body.as_slice() {
                            [] => (s == j).then_some(j),
                            [b] => (chart[cell(s, j, *b)].rule != u32::MAX).then_some(j),
                            [b, c] => (s..=j).find(|&m| {
                                chart[cell(s, m, *b)].rule != u32::MAX && chart[cell(m, j, *c)].rule != u32::MAX
                            }),
                            _ => None,
                        };
                        if let Some(m) = mid {
                            chart[cell(i, j, r.lhs)] = Back { rule: ri as u32, mid: m as u32 };
                            items += 1;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                }
            }
        }

        if g.nonterminals == 0 || chart[cell(0, n, g.start)].rule == u32::MAX {
            return reject(items);
        }

        // Preorder over the derivation is the machine's run order.
        let mut run = Vec::new();
        let mut todo = vec![(g.start, 0usize, n)];
        while let Some((a, i, j)) = todo.pop() {
            let back = chart[cell(i, j, a)];
            let r = &g.rules[back.rule as usize];
            if let Some(e) = r.edge {
                run.push(e);
            }
            let s = if r.terminal.is_some() { i + 1 } else { i };
            match r.body.as_slice() {
                [] => {}
                [b] => todo.push((*b, s, j)),
                [b, c] => {
                    let m = back.mid as usize;
                    todo.push((*c, m, j));
                    todo.push((*b, s, m));
                }
                _ => unreachable!(),
            }
        }
        let max_stack_depth = self.machine.replay(word, &run).ok().and_then(|s| s.max_stack_depth);
        RunResult {
            verdict: Verdict::Accept,
            stats: RunStats { configurations: items, max_cells: None, max_stack_depth },
            run: Some(run),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::machine::*;

    fn st(guard: Option<&str>, action: StackAction) -> Instruction {
        Instruction::Stack { guard: guard.map(str::to_string), action }
    }

    /// `{ a^n b^n }` accepted by final state.
    fn anbn() -> Machine {
        Machine {
            class: MachineClass::Pda,
            input_alphabet: vec!["a".into(), "b".into()],
            tape_alphabet: vec![BOTTOM.into(), "A".into()],
            states: vec!["push".into(), "pop".into(), "done".into()],
            start: "push".into(),
            accept: vec!["done".into()],
            edges: vec![
                Edge::new("push", Some("a"), st(None, StackAction::Push("A".into())), "push"),
                Edge::new("push", None, st(None, StackAction::Stay), "pop"),
                Edge::new("pop", Some("b"), st(Some("A"), StackAction::Pop), "pop"),
                Edge::new("pop", None, st(Some(BOTTOM), StackAction::Stay), "done"),
            ],
            space_multiplier: None,
        }
    }

    fn verdict(m: &Machine, w: &str) -> Verdict {
        let word: Vec<&str> = w.split_whitespace().collect();
        pda_accepts(m, &word).unwrap().verdict
    }

    #[test]
    fn anbn_membership() {
        let m = anbn();
        assert_eq!(verdict(&m, ""), Verdict::Accept);
        assert_eq!(verdict(&m, "a b"), Verdict::Accept);
        assert_eq!(verdict(&m, "a a b b"), Verdict::Accept);
        assert_eq!(verdict(&m, "a b b"), Verdict::Reject);
        assert_eq!(verdict(&m, "b a"), Verdict::Reject);
        assert_eq!(verdict(&m, "a a b"), Verdict::Reject);
        assert_eq!(verdict(&m, "c"), Verdict::Reject);
    }

    #[test]
    fn accepting_run_reports_stack_depth() {
        let r = pda_accepts(&anbn(), &["a", "a", "a", "b", "b", "b"]).unwrap();
        assert_eq!(r.stats.max_stack_depth, Some(3));
        assert_eq!(r.run.unwrap().len(), 8);
    }

    #[test]
    fn epsilon_push_cycles_terminate() {
        let mut m = anbn();
        // A loop that can push forever without reading input.
        m.edges.push(Edge::new("push", None, st(None, StackAction::Push("A".into())), "push"));
        assert_eq!(verdict(&m, "b b"), Verdict::Accept);
        assert_eq!(verdict(&m, "a b a"), Verdict::Reject);
    }
}
