use std::collections::VecDeque;

use super::{unwind, Indexed, Machine, RunResult, RunStats, Verdict};

/// Breadth-first exploration of `(position, state)` pairs: the subset
/// simulation with ε-closure, keeping one parent per pair so an accepting
/// run can be read back.
#[derive(Debug)]
pub struct FsaDecider<'m> {
    ix: Indexed<'m>,
}

impl<'m> FsaDecider<'m> {
    pub(crate) fn new(machine: &'m Machine) -> Self {
        FsaDecider {
            ix: Indexed::new(machine),
        }
    }

    pub fn machine(&self) -> &'m Machine {
        self.ix.machine
    }

    pub fn run<S: AsRef<str>>(&self, word: &[S]) -> RunResult {
        let n_states = self.ix.accept.len();
        let slot = |pos: usize, q: usize| pos * n_states + q;
        // Indices into `parents` per (pos, state); usize::MAX = unvisited.
        let mut seen = vec![usize::MAX; (word.len() + 1) * n_states];
        let mut parents: Vec<(usize, usize)> = Vec::new();
        let mut nodes: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::new();

        seen[slot(0, self.ix.start)] = 0;
        parents.push((usize::MAX, usize::MAX));
        nodes.push((0, self.ix.start));
        queue.push_back(0usize);

        let mut found = None;
        while let Some(id) = queue.pop_front() {
            let (pos, q) = nodes[id];
            if pos == word.len() && self.ix.accept[q] {
                found = Some(id);
                break;
            }
            for &ei in &self.ix.out[q] {
                let e = &self.ix.machine.edges[ei];
                let next_pos = match &e.input {
                    None => pos,
                    Some(x) if word.get(pos).map(AsRef::as_ref) == Some(x.as_str()) => pos + 1,
                    Some(_) => continue,
                };
                let s = slot(next_pos, self.ix.to[ei]);
                if seen[s] == usize::MAX {
                    seen[s] = nodes.len();
                    parents.push((id, ei));
                    nodes.push((next_pos, self.ix.to[ei]));
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        let stats = RunStats {
            configurations: nodes.len() as u64,
            ..RunStats::default()
        };
        match found {
            Some(id) => RunResult {
                verdict: Verdict::Accept,
                stats,
                run: Some(unwind(&parents, id)),
            },
            None => RunResult {
                verdict: Verdict::Reject,
                stats,
                run: None,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::machine::tests::parity;
    use crate::machine::{fsa_accepts, Edge, Instruction, Verdict};

    #[test]
    fn parity_machine() {
        let m = parity();
        assert_eq!(fsa_accepts(&m, &["a", "a"]).unwrap().verdict, Verdict::Accept);
        assert_eq!(fsa_accepts(&m, &["a"]).unwrap().verdict, Verdict::Reject);
        let empty: [&str; 0] = [];
        let r = fsa_accepts(&m, &empty).unwrap();
        assert_eq!(r.verdict, Verdict::Accept);
        assert_eq!(r.run, Some(vec![]));
    }

    #[test]
    fn epsilon_edges_are_followed() {
        let mut m = parity();
        m.states.push("extra".into());
        m.accept = vec!["extra".into()];
        m.edges.push(Edge::new("odd", None, Instruction::Noop, "extra"));
        assert_eq!(fsa_accepts(&m, &["a"]).unwrap().verdict, Verdict::Accept);
        assert_eq!(fsa_accepts(&m, &["a", "a"]).unwrap().verdict, Verdict::Reject);
        assert_eq!(fsa_accepts(&m, &["a"]).unwrap().run, Some(vec![0, 2]));
    }
}
