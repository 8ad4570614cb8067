use idlp::fixtures::{AGREEMENT, AGREEMENT_FREE, LATE_VIOLATION};
use idlp::{equivalent, load_grammar, lp_closure, parse_avm, serialize_avm, Grammar, LoadError, TypeError};

const HEADER: &str = "type bot bot .\ntype a sub bot .\ntype b sub bot .\ntype c sub bot .\ntype m sub bot .\n\
                      approp a F m .\n";

fn with_header(body: &str) -> String {
    format!("{HEADER}{body}")
}

fn paths(g: &Grammar) -> Vec<String> {
    g.restrictor.describe(&g.sig)
}

#[test]
fn small_grammar_loads() {
    let g = load_grammar(AGREEMENT).unwrap();
    assert_eq!(g.id_rules.len(), 1);
    assert_eq!(g.lexicon.len(), 3);
    assert_eq!(g.lp_rules.len(), 1);
    assert!(g.empties.is_empty());
    assert_eq!(serialize_avm(&g.sig, &g.start), "[s VFORM:vform]");
    assert_eq!(g.words(), vec!["she", "I", "walks"]);
}

#[test]
fn rule_tags_link_mother_and_daughters() {
    let g = load_grammar(AGREEMENT).unwrap();
    let sig = &g.sig;
    let rule = &g.id_rules[0];
    let vform = sig.approp.feature("VFORM").unwrap();
    let agr = sig.approp.feature("AGR").unwrap();
    let lhs = rule.lhs(sig);
    let rhs = rule.rhs(sig);
    assert_eq!(rhs.len(), 2);
    assert_eq!(rule.graph.get(lhs, vform), rule.graph.get(rhs[1], vform));
    assert_eq!(rule.graph.get(rhs[0], agr), rule.graph.get(rhs[1], agr));
}

#[test]
fn reflexive_lp_rule_is_rejected() {
    let err = load_grammar(&with_header(
        "rule [a] -> [b], [c] .\nlp [b] < [b] .\nlex w [b] .\nstart [a] .\n",
    ))
    .unwrap_err();
    assert!(matches!(err, LoadError::ReflexiveLpRule { line: 8 }), "{err:?}");
}

#[test]
fn symmetric_lp_rules_are_rejected() {
    let err = load_grammar(&with_header(
        "rule [a] -> [b], [c] .\nlp [b] < [c] .\nlp [c] < [b] .\nlex w [b] .\nstart [a] .\n",
    ))
    .unwrap_err();
    assert!(matches!(err, LoadError::SymmetricLpRules { .. }), "{err:?}");
}

#[test]
fn undeclared_type_is_reported() {
    let err = load_grammar(&with_header("rule [a] -> [zz], [c] .\nlex w [b] .\nstart [a] .\n")).unwrap_err();
    let text = err.to_string();
    assert!(text.contains("zz"), "{text}");
    assert!(
        matches!(
            err,
            LoadError::Type {
                source: TypeError::UnknownType(_),
                ..
            } | LoadError::Avm(idlp::AvmError::UnknownType { .. })
        ),
        "{err:?}"
    );
}

#[test]
fn structural_errors() {
    assert!(matches!(
        load_grammar(&with_header("rule [a] -> [b] .\nlex w [b] .\n")),
        Err(LoadError::NoStartSymbol)
    ));
    assert!(matches!(
        load_grammar(&with_header("rule [a] -> [b] .\nstart [a] .\nstart [b] .\n")),
        Err(LoadError::DuplicateStart { .. })
    ));
    assert!(matches!(
        load_grammar(&with_header("rule [a] -> .\nstart [a] .\n")),
        Err(LoadError::Syntax { .. } | LoadError::EmptyRuleRhs { .. })
    ));
    assert!(matches!(
        load_grammar(&with_header("rule [a] -> [b] .\nstart [a] .\nfrob .\n")),
        Err(LoadError::Syntax { .. })
    ));
    assert!(matches!(
        load_grammar(&with_header("rule [a] -> [b] .\nstart [a] .\nrestrict G .\n")),
        Err(LoadError::UnknownFeature { .. })
    ));
}

#[test]
fn reserved_names_cannot_be_redeclared() {
    let err = load_grammar("type bot bot .\ntype elist sub bot .\nstart [bot] .\n").unwrap_err();
    assert!(
        matches!(
            err,
            LoadError::Type {
                source: TypeError::ReservedName(_),
                ..
            }
        ),
        "{err:?}"
    );
}

#[test]
fn text_round_trip() {
    for src in [AGREEMENT, AGREEMENT_FREE, LATE_VIOLATION] {
        let g = load_grammar(src).unwrap();
        let again = load_grammar(&g.to_text()).unwrap();
        assert_eq!(again.to_text(), g.to_text());
        let sig = &g.sig;
        assert_eq!(again.id_rules.len(), g.id_rules.len());
        for (a, b) in g.id_rules.iter().zip(&again.id_rules) {
            assert!(equivalent(
                sig,
                &a.graph,
                &parse_avm(sig, &serialize_avm(&again.sig, &b.graph)).unwrap()
            ));
        }
        assert_eq!(again.lexicon.len(), g.lexicon.len());
        assert_eq!(again.lp_rules.len(), g.lp_rules.len());
        assert_eq!(paths(&again), paths(&g));
    }
}

#[test]
fn default_restrictors() {
    let g = load_grammar(AGREEMENT).unwrap();
    assert_eq!(paths(&g), ["<>", "AGR", "CASE", "VFORM"]);

    let bare = load_grammar(&with_header("rule [a] -> [b], [c] .\nlex w [b] .\nstart [a] .\n")).unwrap();
    assert_eq!(paths(&bare), ["<>"]);

    // values left unconstrained in the grammar are not expanded
    let g = load_grammar(LATE_VIOLATION).unwrap();
    assert_eq!(paths(&g), ["<>", "F", "F1", "F2"]);
}

#[test]
fn explicit_restrictor() {
    let g = load_grammar(&format!("{LATE_VIOLATION}restrict F.F1, F2 .\n")).unwrap();
    assert_eq!(paths(&g), ["<>", "F", "F.F1", "F2"]);
    let g = load_grammar(&format!("{LATE_VIOLATION}restrict .\n")).unwrap();
    assert_eq!(paths(&g), ["<>"]);
}

#[test]
fn empty_categories_load() {
    let g = load_grammar(&with_header(
        "rule [a] -> [b], [c] .\nlex w [b] .\nempty [c] .\nstart [a] .\n",
    ))
    .unwrap();
    assert_eq!(g.empties.len(), 1);
    assert_eq!(serialize_avm(&g.sig, &g.empties[0]), "[c]");
}

#[test]
fn lp_closure_adds_the_transitive_rule() {
    let g = load_grammar(&with_header(
        "rule [a] -> [b], [c] .\nlp [a] < [m] .\nlp [m] < [b] .\nstart [a] .\n",
    ))
    .unwrap();
    let sig = &g.sig;
    let closed = lp_closure(sig, &g.lp_rules).unwrap();
    assert_eq!(closed.len(), 3);
    let a = parse_avm(sig, "[a]").unwrap();
    let b = parse_avm(sig, "[b]").unwrap();
    assert!(closed
        .iter()
        .any(|r| equivalent(sig, &r.first, &a) && equivalent(sig, &r.second, &b)));
    assert_eq!(g.with_lp_closure().unwrap().lp_rules.len(), 3);
}

#[test]
fn lp_closure_fixpoint_and_cycles() {
    let g = load_grammar(AGREEMENT).unwrap();
    assert_eq!(lp_closure(&g.sig, &g.lp_rules).unwrap().len(), 1);

    let g = load_grammar(&with_header(
        "rule [a] -> [b], [c] .\nlp [a] < [m] .\nlp [m] < [b] .\nlp [b] < [a] .\nstart [a] .\n",
    ))
    .unwrap();
    assert!(matches!(
        lp_closure(&g.sig, &g.lp_rules),
        Err(LoadError::SymmetricLpRules { .. })
    ));
}
