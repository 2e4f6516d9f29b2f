//! JSON documents: one object per file, discriminated by `"kind"`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::fixtures::Fixture;
use crate::error::{Diagnostic, Error, Result};
use crate::gaut::{GAutomaton, GEdge};
use crate::group::GroupSpec;
use crate::machine::{Edge, Machine, MachineClass, SpaceMultiplier};
use crate::transfer::{Provenance, WordProblemMachine};

/// A machine plus what the toolkit knows about it: the group whose word
/// problem it recognizes, or where a product's states came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineDocument {
    #[serde(flatten)]
    pub machine: Machine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_problem: Option<GroupSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl MachineDocument {
    pub fn plain(machine: Machine) -> Self {
        MachineDocument { machine, word_problem: None, provenance: None }
    }

    /// The word-problem machine this document declares, if any.
    pub fn word_problem_machine(&self) -> Option<WordProblemMachine> {
        self.word_problem.as_ref().map(|g| WordProblemMachine { machine: self.machine.clone(), group: g.clone() })
    }
}

impl From<WordProblemMachine> for MachineDocument {
    fn from(n: WordProblemMachine) -> Self {
        MachineDocument { machine: n.machine, word_problem: Some(n.group), provenance: None }
    }
}

/// Read with [`parse_document`], which also resolves group paths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Group(GroupSpec),
    Gautomaton(GAutomaton),
    Machine(MachineDocument),
    Fixture(Fixture),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Group(_) => "group",
            Document::Gautomaton(_) => "gautomaton",
            Document::Machine(_) => "machine",
            Document::Fixture(_) => "fixture",
        }
    }

    /// Structural problems in every part of the document.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let prefixed = |prefix: &str, diags: Vec<Diagnostic>| {
            diags
                .into_iter()
                .map(|d| Diagnostic::new(format!("{prefix}: {}", d.location), d.message))
                .collect::<Vec<_>>()
        };
        match self {
            Document::Group(g) => g.validate(),
            Document::Gautomaton(a) => a.validate(),
            Document::Machine(m) => {
                let mut d = m.machine.validate();
                if let Some(g) = &m.word_problem {
                    d.extend(prefixed("word_problem", g.validate()));
                    let tokens = g.generator_tokens();
                    if m.machine.input_alphabet.iter().any(|x| !tokens.contains(x)) {
                        d.push(Diagnostic::new("word_problem", "input alphabet is not the generator tokens"));
                    }
                }
                d
            }
            Document::Fixture(f) => {
                let mut d = Vec::new();
                if let Some(a) = &f.gautomaton {
                    d.extend(prefixed("gautomaton", a.validate()));
                }
                if let Some(m) = &f.machine {
                    d.extend(prefixed("machine", m.validate()));
                }
                d
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Group-automaton documents may name their group by a path, relative to
/// the document, instead of inlining it.
#[derive(Deserialize)]
#[serde(untagged)]
enum GroupRef {
    Inline(GroupSpec),
    Path(String),
}

#[derive(Deserialize)]
struct RawGAutomaton {
    group: GroupRef,
    alphabet: Vec<String>,
    states: Vec<String>,
    start: String,
    accept: Vec<String>,
    edges: Vec<GEdge>,
}

// Field-by-field twin of `MachineDocument`, read without flattening so that
// errors keep their line and column.
#[derive(Deserialize)]
struct RawMachine {
    class: MachineClass,
    input_alphabet: Vec<String>,
    tape_alphabet: Vec<String>,
    states: Vec<String>,
    start: String,
    accept: Vec<String>,
    edges: Vec<Edge>,
    #[serde(default)]
    space_multiplier: Option<SpaceMultiplier>,
    #[serde(default)]
    word_problem: Option<GroupSpec>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

fn typed<T: DeserializeOwned>(text: &str, origin: &Path) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Document {
        path: origin.display().to_string(),
        field: e.path().to_string(),
        source: e.into_inner(),
    })
}

/// Parses a document. `origin` names it in errors and anchors relative
/// group paths.
pub fn parse_document(text: &str, origin: &Path) -> Result<Document> {
    #[derive(Deserialize)]
    struct Kind {
        kind: String,
    }
    let kind: Kind = typed(text, origin)?;
    Ok(match kind.kind.as_str() {
        "group" => Document::Group(typed(text, origin)?),
        "fixture" => Document::Fixture(typed(text, origin)?),
        "machine" => {
            let m: RawMachine = typed(text, origin)?;
            Document::Machine(MachineDocument {
                machine: Machine {
                    class: m.class,
                    input_alphabet: m.input_alphabet,
                    tape_alphabet: m.tape_alphabet,
                    states: m.states,
                    start: m.start,
                    accept: m.accept,
                    edges: m.edges,
                    space_multiplier: m.space_multiplier,
                },
                word_problem: m.word_problem,
                provenance: m.provenance,
            })
        }
        "gautomaton" => {
            let a: RawGAutomaton = typed(text, origin)?;
            let group = match a.group {
                GroupRef::Inline(g) => g,
                GroupRef::Path(p) => {
                    let base = origin.parent().unwrap_or(Path::new(""));
                    load_group(&base.join(p))?
                }
            };
            Document::Gautomaton(GAutomaton {
                group,
                alphabet: a.alphabet,
                states: a.states,
                start: a.start,
                accept: a.accept,
                edges: a.edges,
            })
        }
        other => {
            return Err(Error::Argument(format!(
                "{}: unknown document kind {other:?}; expected group, gautomaton, machine or fixture",
                origin.display()
            )))
        }
    })
}

pub fn load_document(path: impl AsRef<Path>) -> Result<Document> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_document(&text, path)
}

pub fn load_group(path: &Path) -> Result<GroupSpec> {
    match load_document(path)? {
        Document::Group(g) => Ok(g),
        other => Err(Error::Argument(format!("{}: expected a group document, found {}", path.display(), other.kind()))),
    }
}

pub fn save_document(doc: &Document, path: impl AsRef<Path>) -> Result<()> {
    let path: PathBuf = path.as_ref().into();
    fs::write(&path, doc.to_json()?).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::fixtures::{a_anbn, corpus};

    fn round_trip(doc: &Document) {
        let text = doc.to_json().unwrap();
        let back = parse_document(&text, Path::new("mem.json")).unwrap();
        assert_eq!(&back, doc);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn corpus_round_trips() {
        for f in corpus() {
            round_trip(&Document::Gautomaton(f.gautomaton.clone().unwrap()));
            round_trip(&Document::Fixture(f));
        }
        for (_, g) in crate::harness::fixtures::lemma_groups() {
            round_trip(&Document::Group(g));
        }
    }

    #[test]
    fn inverse_tokens_are_written_with_caret() {
        let doc = Document::Group(GroupSpec::free(1).unwrap());
        assert!(doc.to_json().unwrap().contains("\"a^-1\""));
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_document("{\n  \"kind\": \"group\",\n  oops\n}", Path::new("bad.json")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.json") && msg.contains("line 3"), "{msg}");
        let text = "{\n  \"kind\": \"group\",\n  \"family\": \"free\",\n  \"rank\": \"two\"\n}";
        let msg = parse_document(text, Path::new("g.json")).unwrap_err().to_string();
        assert!(msg.contains("g.json"), "{msg}");
    }

    #[test]
    fn group_may_be_a_relative_path() {
        let dir = tempfile::tempdir().unwrap();
        save_document(&Document::Group(GroupSpec::free_abelian(1).unwrap()), dir.path().join("z1.json")).unwrap();
        let mut value = serde_json::to_value(Document::Gautomaton(a_anbn())).unwrap();
        value["group"] = "z1.json".into();
        let path = dir.path().join("anbn.json");
        fs::write(&path, value.to_string()).unwrap();
        assert_eq!(load_document(&path).unwrap(), Document::Gautomaton(a_anbn()));
    }
}
