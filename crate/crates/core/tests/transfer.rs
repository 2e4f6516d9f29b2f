mod common;

use gauto::gaut::{wp_automaton, GEdge};
use gauto::group::GroupElement;
use gauto::harness::enumerate_words;
use gauto::harness::fixtures::{lemma_groups, z2_parity};
use gauto::machine::{accepts, MachineClass, Verdict};
use gauto::transfer::{
    origin_index, product, product_preserves_determinism, wp_machine, wp_machine_finite, CompositionRule,
};
use gauto::GroupSpec;

use common::gaut_accepts;

#[test]
fn products_of_word_problem_automata_recognize_the_word_problem() {
    for (name, spec) in lemma_groups() {
        let n = wp_machine(&spec, None).unwrap();
        let m = product(&wp_automaton(&spec), &n).unwrap().machine;
        assert_eq!(m.class, n.class());
        let len = match (m.class, spec.generators().len()) {
            (MachineClass::Lba, k) if k > 2 => 3,
            (MachineClass::Lba, _) => 5,
            _ => 5,
        };
        for word in enumerate_words(&spec.generator_tokens(), len) {
            let expect = spec.is_identity(&spec.evaluate_tokens(&word).unwrap());
            let got = accepts(&m, &word).unwrap().verdict == Verdict::Accept;
            assert_eq!(got, expect, "{name} {word:?}");
        }
    }
}

#[test]
fn provenance_accounts_for_every_edge() {
    for case in gauto::harness::transfer_cases().unwrap() {
        let pm = product(&case.automaton, &case.word_problem).unwrap();
        let index = origin_index(&pm.provenance);
        assert_eq!(pm.provenance.edges.len(), pm.machine.edges.len());
        assert_eq!(index.len(), pm.machine.states.len());
        for (e, origin) in pm.machine.edges.iter().zip(&pm.provenance.edges) {
            let (p_from, q_from) = index[e.from.as_str()];
            let (p_to, q_to) = index[e.to.as_str()];
            match origin.rule {
                CompositionRule::Paired | CompositionRule::IdentityStep => {
                    let pe = &case.automaton.edges[origin.p_edge.unwrap()];
                    assert_eq!((pe.from.as_str(), pe.to.as_str()), (p_from, p_to), "{}", case.name);
                    assert_eq!(pe.letter, e.input, "{}", case.name);
                    if origin.rule == CompositionRule::IdentityStep {
                        assert_eq!(q_from, q_to);
                    }
                }
                CompositionRule::MachineEpsilon => {
                    assert_eq!(p_from, p_to);
                    assert_eq!(e.input, None);
                    let ne = &case.word_problem.machine.edges[origin.n_edge.unwrap()];
                    assert_eq!((ne.from.as_str(), ne.to.as_str()), (q_from, q_to));
                }
            }
        }
    }
}

#[test]
fn product_agrees_with_path_enumeration_on_short_words() {
    for case in gauto::harness::transfer_cases().unwrap() {
        let m = product(&case.automaton, &case.word_problem).unwrap().machine;
        for word in enumerate_words(&case.automaton.alphabet, 4) {
            let word: Vec<&str> = word.iter().map(String::as_str).collect();
            let got = accepts(&m, &word).unwrap().verdict == Verdict::Accept;
            assert_eq!(got, gaut_accepts(&case.automaton, &word), "{} {word:?}", case.name);
        }
    }
}

#[test]
fn determinism_is_preserved_when_the_predicate_holds() {
    let c2 = GroupSpec::cyclic(2).unwrap();
    let n = wp_machine_finite(&c2).unwrap();
    let p = z2_parity();
    assert!(product_preserves_determinism(&p, &n));
    assert!(product(&p, &n).unwrap().machine.is_deterministic());

    let s3 = GroupSpec::symmetric3().unwrap();
    let n = wp_machine_finite(&s3).unwrap();
    let a = wp_automaton(&s3);
    if product_preserves_determinism(&a, &n) {
        assert!(product(&a, &n).unwrap().machine.is_deterministic());
    }

    let mut dup = p.clone();
    dup.edges.push(GEdge::new("s", Some("a"), GroupElement::Finite(0), "s"));
    assert!(!product_preserves_determinism(&dup, &wp_machine_finite(&c2).unwrap()));
}

#[test]
fn requested_class_must_be_the_natural_one() {
    let z1 = GroupSpec::free_abelian(1).unwrap();
    assert_eq!(wp_machine(&z1, Some(MachineClass::Lba)).unwrap().class(), MachineClass::Lba);
    assert!(matches!(wp_machine(&z1, Some(MachineClass::Fsa)), Err(gauto::Error::ClassMismatch { .. })));
}

#[test]
fn unnormalized_automata_are_refused() {
    let a = gauto::harness::fixtures::a_anbncn();
    let n = gauto::transfer::wp_machine_zn(2).unwrap();
    assert!(matches!(product(&a, &n), Err(gauto::Error::NotNormalized(_))));
}
