use std::collections::BTreeSet;

use idlp::fixtures::{AGREEMENT, AGREEMENT_FREE, LATE_VIOLATION};
use idlp::{enumerate_language, load_grammar, oracle_recognize, serialize_avm, Bounds, ParseError};

fn set(items: &[&str]) -> BTreeSet<Vec<String>> {
    items.iter().map(|s| s.split(' ').map(String::from).collect()).collect()
}

#[test]
fn recognition_examples() {
    let b = Bounds::default();
    let g13 = load_grammar(AGREEMENT).unwrap();
    let g16 = load_grammar(LATE_VIOLATION).unwrap();
    assert!(oracle_recognize(&g13, &["she", "walks"], &b).unwrap().accepted);
    assert!(!oracle_recognize(&g13, &["walks", "she"], &b).unwrap().accepted);
    assert!(!oracle_recognize(&g16, &["i", "h", "j", "k"], &b).unwrap().accepted);
    let r = oracle_recognize(&g16, &["h", "i", "j", "k"], &b).unwrap();
    assert!(r.accepted);
    assert!(!r.bound_hit);
    assert_eq!(r.trees.len(), 1);
}

#[test]
fn oracle_trees_are_fully_instantiated() {
    let g = load_grammar(LATE_VIOLATION).unwrap();
    let r = oracle_recognize(&g, &["h", "i", "j", "k"], &Bounds::default()).unwrap();
    let t = &r.trees[0];
    let b = t.root.daughters()[0];
    assert_eq!(serialize_avm(&g.sig, &t.label_graph(b)), "[b F:[t F1:one F2:two]]");
    assert_eq!(b.span, (0, 2));
}

#[test]
fn languages() {
    let b = Bounds::default();
    let l = enumerate_language(&load_grammar(AGREEMENT).unwrap(), &b);
    assert_eq!(l.sentences, set(&["she walks"]));
    assert!(!l.bound_hit);
    let l = enumerate_language(&load_grammar(AGREEMENT_FREE).unwrap(), &b);
    assert_eq!(l.sentences, set(&["she walks", "walks she"]));
    let l = enumerate_language(&load_grammar(LATE_VIOLATION).unwrap(), &b);
    assert_eq!(l.sentences, set(&["h i j k"]));
}

#[test]
fn length_bound_limits_the_language() {
    let b = Bounds {
        max_len: 3,
        ..Bounds::default()
    };
    assert!(enumerate_language(&load_grammar(LATE_VIOLATION).unwrap(), &b)
        .sentences
        .is_empty());
}

#[test]
fn depth_and_width_bounds_are_reported() {
    let g = load_grammar(LATE_VIOLATION).unwrap();
    let shallow = Bounds {
        max_depth: 1,
        ..Bounds::default()
    };
    let r = oracle_recognize(&g, &["h", "i", "j", "k"], &shallow).unwrap();
    assert!(!r.accepted);
    assert!(r.bound_hit);
    let narrow = Bounds {
        max_width: 1,
        ..Bounds::default()
    };
    assert!(enumerate_language(&g, &narrow).bound_hit);
}

#[test]
fn recursion_terminates() {
    let g = load_grammar(
        "type bot bot .\ntype a sub bot .\ntype b sub bot .\n\
         rule [a] -> [a], [b] .\nrule [a] -> [b], [b] .\nlex w [b] .\nstart [a] .\n",
    )
    .unwrap();
    let l = enumerate_language(&g, &Bounds::default());
    assert_eq!(l.sentences, set(&["w w", "w w w", "w w w w"]));
}

#[test]
fn unknown_word() {
    let g = load_grammar(AGREEMENT).unwrap();
    assert_eq!(
        oracle_recognize(&g, &["runs"], &Bounds::default()).unwrap_err(),
        ParseError::UnknownWord {
            word: "runs".into(),
            position: 0
        }
    );
}
