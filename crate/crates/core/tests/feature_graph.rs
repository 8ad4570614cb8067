mod common;

use idlp::fixtures::LATE_VIOLATION;
use idlp::{
    equivalent, load_grammar, parse_avm, parse_avm_raw, serialize_avm, subsumes, type_infer, unify, validate_hierarchy,
    AvmError, Decl, FeatureGraph, GraphPair, Restrictor, Signature, UnifyError,
};

use common::{isomorphic, random_graph, random_signature, rng, small_sig};

fn avm(sig: &Signature, s: &str) -> FeatureGraph {
    parse_avm(sig, s).unwrap()
}

fn late_violation() -> Signature {
    load_grammar(LATE_VIOLATION).unwrap().sig
}

fn feats(sig: &Signature, names: &[&str]) -> Vec<idlp::FeatId> {
    names.iter().map(|n| sig.approp.feature(n).unwrap()).collect()
}

#[test]
fn well_typed_checks_values() {
    let sig = small_sig();
    assert!(avm(&sig, "[c F:d]").well_typed(&sig));
    assert!(!parse_avm_raw(&sig, "[c F:a]").unwrap().well_typed(&sig));
    assert!(!parse_avm_raw(&sig, "[a F:bot]").unwrap().well_typed(&sig));
}

#[test]
fn subsumption_examples() {
    let sig = small_sig();
    let a = avm(&sig, "[a]");
    let cfd = avm(&sig, "[c F:d]");
    assert!(subsumes(&sig, &a, &cfd));
    assert!(subsumes(&sig, &cfd, &cfd));
    assert!(!subsumes(&sig, &cfd, &a));
}

#[test]
fn subsumption_respects_sharing() {
    let sig = late_violation();
    let shared = avm(&sig, "[t F1:#1=num F2:#1]");
    let apart = avm(&sig, "[t F1:num F2:num]");
    assert!(subsumes(&sig, &apart, &shared));
    assert!(!subsumes(&sig, &shared, &apart));
}

#[test]
fn unification_examples() {
    let sig = small_sig();
    let raw = parse_avm_raw(&sig, "[a F:d]").unwrap();
    let u = unify(&sig, &raw, &avm(&sig, "[c F:bot]")).unwrap();
    assert_eq!(serialize_avm(&sig, &u), "[c F:d]");

    let g = avm(&sig, "[b F:d]");
    let u = unify(&sig, &g, &avm(&sig, "[bot]")).unwrap();
    assert!(equivalent(&sig, &u, &g));

    let err = unify(&sig, &avm(&sig, "[b]"), &avm(&sig, "[c]")).unwrap_err();
    assert!(matches!(err, UnifyError::UnificationFailure { .. }), "{err:?}");
}

#[test]
fn unification_leaves_inputs_alone() {
    let sig = small_sig();
    let g1 = avm(&sig, "[b]");
    let g2 = parse_avm_raw(&sig, "[a F:d]").unwrap();
    let before = (serialize_avm(&sig, &g1), serialize_avm(&sig, &g2));
    unify(&sig, &g1, &g2).unwrap();
    assert_eq!(before, (serialize_avm(&sig, &g1), serialize_avm(&sig, &g2)));
}

#[test]
fn type_inference_examples() {
    let sig = small_sig();
    let g = type_infer(&sig, &parse_avm_raw(&sig, "[c F:bot]").unwrap()).unwrap();
    assert_eq!(serialize_avm(&sig, &g), "[c F:d]");
    let done = avm(&sig, "[b F:a]");
    assert_eq!(serialize_avm(&sig, &type_infer(&sig, &done).unwrap()), "[b F:a]");
    let err = type_infer(&sig, &parse_avm_raw(&sig, "[c F:b]").unwrap()).unwrap_err();
    assert!(matches!(
        err,
        UnifyError::TypeInferenceFailure { .. } | UnifyError::UnificationFailure { .. }
    ));
}

#[test]
fn type_inference_raises_to_the_introducing_type() {
    let sig = small_sig();
    // only b and c carry F and neither is below the other
    let err = type_infer(&sig, &parse_avm_raw(&sig, "[a F:bot]").unwrap());
    assert!(err.is_err());
    let g = type_infer(&sig, &parse_avm_raw(&sig, "[bot F:d]").unwrap());
    assert!(g.is_err());
}

#[test]
fn restriction_examples() {
    let sig = late_violation();
    let g = avm(&sig, "[b F:[t F1:num F2:num]]");
    let root_only = Restrictor::default().restrict(&g);
    assert_eq!(serialize_avm(&sig, &root_only), "[b]");
    let all = Restrictor::all_paths(&g).restrict(&g);
    assert!(equivalent(&sig, &all, &g));
    let r = Restrictor::new([feats(&sig, &["F", "F1"])]);
    assert_eq!(serialize_avm(&sig, &r.restrict(&g)), "[b F:[t F1:num]]");
}

#[test]
fn restriction_keeps_sharing_and_subsumes() {
    let sig = late_violation();
    let g = avm(&sig, "[t F1:#1=num F2:#1]");
    let r = Restrictor::new([feats(&sig, &["F1"]), feats(&sig, &["F2"])]);
    let out = r.restrict(&g);
    assert_eq!(serialize_avm(&sig, &out), "[t F1:#1=num F2:#1]");
    assert!(subsumes(&sig, &out, &g));
    assert!(equivalent(&sig, &r.restrict(&out), &out));
}

#[test]
fn copies_are_equivalent_and_detached() {
    let sig = late_violation();
    let g = avm(&sig, "[t F1:#1=num F2:#1]");
    let c = g.copy();
    assert!(equivalent(&sig, &g, &c));
    assert_ne!(g.graph_id(), c.graph_id());
    let text = serialize_avm(&sig, &c);
    let grown = unify(&sig, &g, &avm(&sig, "[t F1:one]")).unwrap();
    assert_eq!(serialize_avm(&sig, &grown), "[t F1:#1=one F2:#1]");
    assert_eq!(serialize_avm(&sig, &c), text);
}

#[test]
fn equivalence_examples() {
    let sig = small_sig();
    let g = avm(&sig, "[c F:d]");
    assert!(equivalent(&sig, &g, &g.copy()));
    assert!(!equivalent(&sig, &avm(&sig, "[a]"), &g));
    let renamed = avm(&sig, "[c F:[d]]");
    assert!(equivalent(&sig, &g, &renamed));
}

#[test]
fn dif_tracks_instantiation() {
    let sig = late_violation();
    let host = avm(&sig, "[t F1:num F2:num]");
    let f2 = sig.approp.feature("F2").unwrap();
    let live = host.get(host.root(), f2).unwrap();
    let pair = GraphPair::new(host, live);
    assert!(!pair.dif(&sig));
    let same = pair.unify_host(&sig, &avm(&sig, "[t F1:num]")).unwrap();
    assert!(!same.dif(&sig));
    let grown = pair.unify_host(&sig, &avm(&sig, "[t F2:two]")).unwrap();
    assert!(grown.dif(&sig));
    let further = grown.unify_host(&sig, &avm(&sig, "[t F1:one]")).unwrap();
    assert!(further.dif(&sig));
}

#[test]
fn avm_text_io() {
    let sig = small_sig();
    let g = avm(&sig, "[c F:d]");
    assert_eq!(g.len(), 2);
    assert_eq!(sig.type_name(g.root_type()), "c");

    let lv = late_violation();
    let g = avm(&lv, "[t F2:two F1:one]");
    assert_eq!(serialize_avm(&lv, &g), "[t F1:one F2:two]");
    let g = avm(&lv, "[t F1:#1=num F2:#1]");
    let f1 = lv.approp.feature("F1").unwrap();
    let f2 = lv.approp.feature("F2").unwrap();
    assert_eq!(g.get(g.root(), f1), g.get(g.root(), f2));
    let g = avm(&lv, "% a comment\n[t\n  F1 : one ]");
    assert_eq!(serialize_avm(&lv, &g), "[t F1:one]");
}

#[test]
fn avm_errors() {
    let sig = small_sig();
    assert!(matches!(parse_avm(&sig, "[c F:d"), Err(AvmError::Syntax { .. })));
    assert!(matches!(parse_avm(&sig, "[zz]"), Err(AvmError::UnknownType { .. })));
    assert!(matches!(parse_avm(&sig, "[b F:#4]"), Err(AvmError::UnknownTag { .. })));
    assert!(matches!(parse_avm(&sig, "[c F:b]"), Err(AvmError::Inconsistent { .. })));
}

#[test]
fn cycles_terminate() {
    let sig = validate_hierarchy(&[
        Decl::Bottom("bot".into()),
        Decl::sub("a", &["bot"]),
        Decl::approp("a", "F", "a"),
    ])
    .unwrap();
    let g = avm(&sig, "#1=[a F:#1]");
    assert_eq!(g.len(), 1);
    assert_eq!(serialize_avm(&sig, &g), "#1=[a F:#1]");
    assert!(subsumes(&sig, &g, &g));
    let chain = avm(&sig, "[a F:[a F:[a]]]");
    assert!(subsumes(&sig, &chain, &g));
    assert!(!subsumes(&sig, &g, &chain));
    let u = unify(&sig, &g, &chain).unwrap();
    assert!(equivalent(&sig, &u, &g));
}

#[test]
fn text_round_trip_on_random_graphs() {
    let mut r = rng(21);
    let sig = random_signature(&mut r, 8);
    for _ in 0..300 {
        let g = random_graph(&sig, &mut r, 8);
        let back = avm(&sig, &serialize_avm(&sig, &g));
        assert!(equivalent(&sig, &g, &back));
        assert!(isomorphic(&g, &back));
        assert_eq!(serialize_avm(&sig, &back), serialize_avm(&sig, &g));
    }
}
