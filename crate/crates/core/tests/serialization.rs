use std::path::Path;

use gauto::gaut::{counter_automaton, GAutomaton};
use gauto::group::{GeneratorSymbol, GroupElement};
use gauto::harness::{parse_document, Document, MachineDocument};
use gauto::machine::{Edge, Instruction, Machine, MachineClass, Move, SpaceMultiplier, StackAction};
use gauto::GroupSpec;
use num_rational::Ratio;
use proptest::prelude::*;

fn round_trip(doc: &Document) -> Result<(), TestCaseError> {
    let text = doc.to_json().unwrap();
    let back = parse_document(&text, Path::new("mem.json")).unwrap();
    prop_assert_eq!(&back, doc);
    prop_assert_eq!(back.to_json().unwrap(), text);
    Ok(())
}

fn symbol() -> impl Strategy<Value = GeneratorSymbol> {
    (prop::sample::select(vec!["a", "b", "x1"]), any::<bool>())
        .prop_map(|(n, inv)| GeneratorSymbol::new(n, if inv { -1 } else { 1 }).unwrap())
}

fn element() -> impl Strategy<Value = GroupElement> {
    prop_oneof![
        (0usize..50).prop_map(GroupElement::Finite),
        prop::collection::vec(any::<i64>(), 1..4).prop_map(GroupElement::abelian),
        prop::collection::vec(symbol(), 0..6).prop_map(GroupElement::free),
    ]
}

fn counter() -> impl Strategy<Value = GAutomaton> {
    let edge = (0..2usize, prop::option::of(0..3usize), prop::collection::vec(-3i64..=3, 2), 0..2usize);
    prop::collection::vec(edge, 0..5).prop_map(|edges| {
        let names = ["s", "t"];
        let letters = ["a", "b", "c^-1"];
        let edges: Vec<_> =
            edges.into_iter().map(|(f, l, v, t)| (names[f], l.map(|i| letters[i]), v, names[t])).collect();
        counter_automaton(2, &names, &edges, "s", &["t"]).unwrap()
    })
}

fn instruction() -> impl Strategy<Value = Instruction> {
    let sym = prop::option::of(prop::sample::select(vec!["$", "A", "_"]).prop_map(String::from));
    let shift = prop_oneof![Just(Move::L), Just(Move::R), Just(Move::S)];
    let action = prop_oneof![
        Just(StackAction::Pop),
        Just(StackAction::Stay),
        Just(StackAction::Push("A".into())),
    ];
    prop_oneof![
        Just(Instruction::Noop),
        (sym.clone(), action).prop_map(|(guard, action)| Instruction::Stack { guard, action }),
        (sym.clone(), sym, shift).prop_map(|(guard, write, shift)| Instruction::Tape { guard, write, shift }),
    ]
}

fn machine() -> impl Strategy<Value = Machine> {
    let class = prop::sample::select(vec![
        MachineClass::Fsa,
        MachineClass::Pda,
        MachineClass::Lba,
        MachineClass::NestedStack,
    ]);
    let edge = (0..2usize, prop::option::of(prop::sample::select(vec!["a", "a^-1"])), instruction(), 0..2usize);
    let c = prop::option::of((1u64..9, 1u64..4).prop_map(|(n, d)| SpaceMultiplier(Ratio::new(n, d))));
    (class, prop::collection::vec(edge, 0..6), c).prop_map(|(class, edges, space_multiplier)| {
        let names = ["p", "q"];
        Machine {
            class,
            input_alphabet: vec!["a".into(), "a^-1".into()],
            tape_alphabet: vec!["$".into(), "A".into(), "_".into()],
            states: names.map(String::from).to_vec(),
            start: "p".into(),
            accept: vec!["q".into()],
            edges: edges.into_iter().map(|(f, x, i, t)| Edge::new(names[f], x, i, names[t])).collect(),
            space_multiplier,
        }
    })
}

proptest! {
    #[test]
    fn elements_round_trip(e in element()) {
        let text = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<GroupElement>(&text).unwrap(), e);
    }

    #[test]
    fn automata_round_trip(a in counter()) {
        round_trip(&Document::Gautomaton(a))?;
    }

    #[test]
    fn machines_round_trip(m in machine()) {
        round_trip(&Document::Machine(MachineDocument::plain(m)))?;
    }

    #[test]
    fn word_problem_documents_round_trip(k in 1usize..4) {
        let g = GroupSpec::free(k).unwrap();
        round_trip(&Document::Group(g.clone()))?;
        round_trip(&Document::Machine(gauto::transfer::wp_machine(&g, None).unwrap().into()))?;
    }
}

#[test]
fn finite_group_documents_round_trip() {
    let s3 = GroupSpec::symmetric3().unwrap();
    round_trip(&Document::Group(s3.clone())).unwrap();
    round_trip(&Document::Machine(gauto::transfer::wp_machine(&s3, None).unwrap().into())).unwrap();
}

#[test]
fn large_coordinates_are_refused_on_output() {
    let big = GroupElement::Abelian(vec![num_bigint::BigInt::from(i64::MAX) * 4]);
    assert!(serde_json::to_string(&big).is_err());
}

#[test]
fn space_multiplier_is_a_string() {
    let m = MachineDocument::plain(Machine {
        class: MachineClass::Lba,
        input_alphabet: vec![],
        tape_alphabet: vec![],
        states: vec!["p".into()],
        start: "p".into(),
        accept: vec![],
        edges: vec![],
        space_multiplier: Some(SpaceMultiplier(Ratio::new(7, 2))),
    });
    let text = Document::Machine(m).to_json().unwrap();
    assert!(text.contains("\"space_multiplier\": \"7/2\""), "{text}");
}
