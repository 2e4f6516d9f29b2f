use std::collections::{HashMap, VecDeque};

use super::{unwind, Indexed, Instruction, Machine, Move, RunResult, RunStats, Verdict, BLANK, LEFT_END, RIGHT_END};

/// Visited-set cap for configuration search.
pub const DEFAULT_MAX_CONFIGURATIONS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Config {
    pos: u32,
    state: u32,
    head: u32,
    tape: Box<[u8]>,
}

/// Compiled form of a tape instruction over symbol indices.
#[derive(Debug, Clone, Copy)]
struct Step {
    guard: Option<u8>,
    write: Option<u8>,
    shift: Move,
}

/// Breadth-first search over `(input position, state, tape, head)`. The work
/// tape holds `⌈c·(|w|+1)⌉` blank cells between the end markers, so the
/// space is finite and the search terminates.
#[derive(Debug)]
pub struct LbaDecider<'m> {
    ix: Indexed<'m>,
    steps: Vec<Step>,
    symbols: HashMap<&'m str, u8>,
    max_configurations: usize,
}

impl<'m> LbaDecider<'m> {
    pub(crate) fn new(machine: &'m Machine, max_configurations: usize) -> Self {
        let symbols: HashMap<&str, u8> = machine
            .tape_alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), u8::try_from(i).expect("tape alphabet exceeds 256 symbols")))
            .collect();
        let steps = machine
            .edges
            .iter()
            .map(|e| match &e.instr {
                Instruction::Tape { guard, write, shift } => Step {
                    guard: guard.as_deref().map(|g| symbols[g]),
                    write: write.as_deref().map(|w| symbols[w]),
                    shift: *shift,
                },
                _ => unreachable!("validated lba edges carry tape instructions"),
            })
            .collect();
        LbaDecider {
            ix: Indexed::new(machine),
            steps,
            symbols,
            max_configurations,
        }
    }

    pub fn machine(&self) -> &'m Machine {
        self.ix.machine
    }

    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> RunResult {
        let machine = self.ix.machine;
        let cells = machine
            .space_multiplier
            .expect("validated lba has a multiplier")
            .cells(word.len());
        let mut tape = vec![self.symbols[BLANK]; cells + 2];
        tape[0] = self.symbols[LEFT_END];
        tape[cells + 1] = self.symbols[RIGHT_END];

        let start = Config {
            pos: 0,
            state: self.ix.start as u32,
            head: 0,
            tape: tape.into_boxed_slice(),
        };
        let mut visited: HashMap<Config, usize> = HashMap::new();
        let mut nodes: Vec<Config> = vec![start.clone()];
        let mut parents: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
        visited.insert(start, 0);
        let mut queue = VecDeque::from([0usize]);
        let mut max_cells = 0usize;
        let mut found = None;
        let mut exhausted = false;

        'search: while let Some(id) = queue.pop_front() {
            let cfg = nodes[id].clone();
            max_cells = max_cells.max((cfg.head as usize).min(cells));
            if cfg.pos as usize == word.len() && self.ix.accept[cfg.state as usize] {
                found = Some(id);
                break;
            }
            for &ei in &self.ix.out[cfg.state as usize] {
                let e = &machine.edges[ei];
                let pos = match &e.input {
                    None => cfg.pos,
                    Some(x) if word.get(cfg.pos as usize).map(AsRef::as_ref) == Some(x.as_str()) => cfg.pos + 1,
                    Some(_) => continue,
                };
                let step = self.steps[ei];
                let head = cfg.head as usize;
                let scanned = cfg.tape[head];
                if step.guard.is_some_and(|g| g != scanned) {
                    continue;
                }
                let on_marker = head == 0 || head == cells + 1;
                let next_head = match step.shift {
                    Move::L if head == 0 => continue,
                    Move::L => head - 1,
                    Move::R if head == cells + 1 => continue,
                    Move::R => head + 1,
                    Move::S => head,
                };
                let mut next_tape = cfg.tape.clone();
                if let Some(w) = step.write {
                    if on_marker {
                        continue;
                    }
                    next_tape[head] = w;
                }
                let next = Config {
                    pos,
                    state: self.ix.to[ei] as u32,
                    head: next_head as u32,
                    tape: next_tape,
                };
                if visited.contains_key(&next) {
                    continue;
                }
                if nodes.len() >= self.max_configurations {
                    exhausted = true;
                    break 'search;
                }
                visited.insert(next.clone(), nodes.len());
                nodes.push(next);
                parents.push((id, ei));
                queue.push_back(nodes.len() - 1);
            }
        }

        let stats = RunStats {
            configurations: nodes.len() as u64,
            max_cells: Some(max_cells),
            max_stack_depth: None,
        };
        match (found, exhausted) {
            (Some(id), _) => RunResult {
                verdict: Verdict::Accept,
                stats,
                run: Some(unwind(&parents, id)),
            },
            (None, true) => RunResult {
                verdict: Verdict::ResourceExceeded,
                stats,
                run: None,
            },
            (None, false) => RunResult {
                verdict: Verdict::Reject,
                stats,
                run: None,
            },
        }
    }
}
