mod common;

use std::path::PathBuf;

use gauto::gaut::GAutomaton;
use gauto::harness::fixtures::{a_anbn, a_anbncn, corpus};
use gauto::harness::{load_document, save_document, Document, Fixture, Slice};

use common::{fsa_accepts_naive, gaut_language};

const SLICE_LEN: usize = 6;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn sorted(words: impl IntoIterator<Item = Vec<String>>) -> Vec<String> {
    let mut v: Vec<Vec<String>> = words.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v.into_iter().map(|w| w.join(" ")).collect()
}

fn language(a: &GAutomaton) -> Vec<String> {
    sorted(gaut_language(a, SLICE_LEN))
}

fn with_slices(mut f: Fixture) -> Fixture {
    let a = f.gautomaton.as_ref().unwrap();
    let (words, oracle) = match &f.machine {
        None => (language(a), "path enumeration, at most |states| consecutive epsilon edges"),
        Some(m) => {
            let kept = gaut_language(a, SLICE_LEN)
                .into_iter()
                .filter(|w| fsa_accepts_naive(m, &w.iter().map(String::as_str).collect::<Vec<_>>()));
            (sorted(kept), "path enumeration on the automaton, filtered by path enumeration on the machine")
        }
    };
    f.slices = vec![Slice { max_len: SLICE_LEN, words, oracle: oracle.into() }];
    f
}

/// Set GAUTO_REGENERATE_FIXTURES=1 to rewrite the shipped files.
#[test]
fn shipped_fixtures_match_the_oracle() {
    let regenerate = std::env::var_os("GAUTO_REGENERATE_FIXTURES").is_some();
    for f in corpus() {
        let expected = Document::Fixture(with_slices(f.clone()));
        let path = fixture_dir().join(format!("{}.json", f.name));
        if regenerate {
            std::fs::create_dir_all(fixture_dir()).unwrap();
            save_document(&expected, &path).unwrap();
        }
        let shipped = load_document(&path).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(shipped, expected, "{}", path.display());
        assert_eq!(std::fs::read_to_string(&path).unwrap(), expected.to_json().unwrap());
    }
}

#[test]
fn counter_fixture_slices() {
    assert_eq!(language(&a_anbn()), ["a b", "a a b b", "a a a b b b"]);
    assert_eq!(language(&a_anbncn()), ["", "a b c", "a a b b c c"]);
    assert_eq!(language(&a_anbncn().normalize().unwrap()), ["", "a b c", "a a b b c c"]);
}

#[test]
fn conjecture_slice_matches_explicit_language() {
    let f = with_slices(corpus().into_iter().find(|f| f.name == "conjecture").unwrap());
    let explicit = sorted(gauto::harness::conjecture_language(SLICE_LEN).into_iter().filter(|w| w.len() <= SLICE_LEN));
    assert_eq!(f.slices[0].words, explicit);
}
