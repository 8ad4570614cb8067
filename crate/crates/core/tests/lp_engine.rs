use idlp::fixtures::{AGREEMENT, LATE_VIOLATION};
use idlp::lp::{applies, expand, permute, precede_check, weakly_applies};
use idlp::{load_grammar, lp_acceptable, parse_avm, verdict, Grammar, LpVerdict, Sequence};

fn seq(g: &Grammar, items: &[&str]) -> Sequence {
    let graphs: Vec<_> = items.iter().map(|s| parse_avm(&g.sig, s).unwrap()).collect();
    Sequence::from_graphs(&g.sig, &graphs)
}

const NP: &str = "[np AGR:3pers CASE:nom]";
const VP: &str = "[vp AGR:3pers VFORM:fin]";
const E_NUM: &str = "[e F2:num]";
const D_NUM: &str = "[d F1:num]";
const E_TWO: &str = "[e F2:two]";
const D_ONE: &str = "[d F1:one]";

fn agreement() -> Grammar {
    load_grammar(AGREEMENT).unwrap()
}

fn late_violation() -> Grammar {
    load_grammar(LATE_VIOLATION).unwrap()
}

#[test]
fn applies_examples() {
    let g = agreement();
    let s = seq(&g, &[NP, VP]);
    assert_eq!(applies(&g.sig, &g.lp_rules[0], &s.graph, &s.items), vec![(0, 1)]);
    let one = seq(&g, &[NP]);
    assert!(applies(&g.sig, &g.lp_rules[0], &one.graph, &one.items).is_empty());

    let g = late_violation();
    let s = seq(&g, &[E_NUM, D_NUM]);
    assert!(applies(&g.sig, &g.lp_rules[1], &s.graph, &s.items).is_empty());
}

#[test]
fn weakly_applies_examples() {
    let g = late_violation();
    let s = seq(&g, &[E_NUM, D_NUM]);
    assert_eq!(weakly_applies(&g.sig, &g.lp_rules[1], &s.graph, &s.items), vec![(1, 0)]);
    // neither side of `[b] < [c]` unifies with these
    assert!(weakly_applies(&g.sig, &g.lp_rules[0], &s.graph, &s.items).is_empty());
}

#[test]
fn applies_implies_weakly_applies() {
    let g = late_violation();
    let pool = [E_NUM, D_NUM, E_TWO, D_ONE, "[b]", "[c]", "[f F1:one]", "[g F2:two]"];
    for a in pool {
        for b in pool {
            for c in pool {
                let s = seq(&g, &[a, b, c]);
                for r in &g.lp_rules {
                    let strong = applies(&g.sig, r, &s.graph, &s.items);
                    let weak = weakly_applies(&g.sig, r, &s.graph, &s.items);
                    assert!(strong.iter().all(|p| weak.contains(p)));
                }
            }
        }
    }
}

#[test]
fn acceptability_examples() {
    let g = agreement();
    let empty = seq(&g, &[]);
    assert!(lp_acceptable(&g.sig, &g.lp_rules, &empty.graph, &empty.items));
    let s = seq(&g, &[NP, VP]);
    assert!(lp_acceptable(&g.sig, &g.lp_rules, &s.graph, &s.items));
    let r = s.reordered(&[1, 0]);
    assert!(!lp_acceptable(&g.sig, &g.lp_rules, &r.graph, &r.items));

    let g = late_violation();
    let s = seq(&g, &[E_TWO, D_ONE]);
    assert!(!lp_acceptable(&g.sig, &g.lp_rules, &s.graph, &s.items));
    let s = seq(&g, &[E_NUM, D_NUM]);
    assert!(lp_acceptable(&g.sig, &g.lp_rules, &s.graph, &s.items));
}

#[test]
fn verdict_examples() {
    let g = agreement();
    let s = seq(&g, &[NP, VP]);
    assert_eq!(verdict(&g.sig, &g.lp_rules, &s.graph, &s.items), LpVerdict::Clean);

    let g = late_violation();
    let s = seq(&g, &[E_NUM, D_NUM]);
    assert_eq!(verdict(&g.sig, &g.lp_rules, &s.graph, &s.items), LpVerdict::Possible);
    let s = seq(&g, &[D_NUM, E_NUM]);
    assert_eq!(verdict(&g.sig, &g.lp_rules, &s.graph, &s.items), LpVerdict::Clean);
    let s = seq(&g, &[E_TWO, D_ONE]);
    assert_eq!(verdict(&g.sig, &g.lp_rules, &s.graph, &s.items), LpVerdict::Violated);
    // instantiated so that no rule side fits any more
    let s = seq(&g, &["[e F2:one]", "[d F1:two]"]);
    assert_eq!(verdict(&g.sig, &g.lp_rules, &s.graph, &s.items), LpVerdict::Clean);
}

#[test]
fn permutations() {
    let g = late_violation();
    let s = seq(&g, &[E_NUM, D_NUM]);
    assert_eq!(permute(&g.sig, &s.graph, &s.items), vec![vec![0, 1], vec![1, 0]]);
    let none = seq(&g, &[]);
    assert_eq!(permute(&g.sig, &none.graph, &none.items), vec![Vec::<usize>::new()]);
    let twins = seq(&g, &[E_NUM, E_NUM]);
    assert_eq!(permute(&g.sig, &twins.graph, &twins.items).len(), 1);
    let three = seq(&g, &[E_NUM, D_NUM, "[b]"]);
    assert_eq!(permute(&g.sig, &three.graph, &three.items).len(), 6);
}

#[test]
fn shared_items_are_not_collapsed_by_position() {
    let g = late_violation();
    let s = seq(&g, &[E_NUM, E_TWO]);
    assert_eq!(permute(&g.sig, &s.graph, &s.items).len(), 2);
}

#[test]
fn expansion() {
    let g = agreement();
    let s = seq(&g, &["[np CASE:nom]", "[vp VFORM:fin]"]);
    assert_eq!(expand(&g.sig, &g.lp_rules, &s.graph, &s.items), vec![vec![0, 1]]);
    assert_eq!(
        expand(&g.sig, &[], &s.graph, &s.items),
        permute(&g.sig, &s.graph, &s.items)
    );

    let g = late_violation();
    let s = seq(&g, &[D_NUM, E_NUM]);
    assert_eq!(expand(&g.sig, &g.lp_rules, &s.graph, &s.items).len(), 2);
}

#[test]
fn precede_checks() {
    let g = agreement();
    let s = seq(&g, &["[vp VFORM:fin]", "[np CASE:nom]"]);
    assert!(!precede_check(&g.sig, &g.lp_rules, &s.graph, s.items[0], &s.items[1..]));
    assert!(precede_check(&g.sig, &g.lp_rules, &s.graph, s.items[0], &[]));
    let s = seq(&g, &["[np CASE:nom]", "[vp VFORM:fin]"]);
    assert!(precede_check(&g.sig, &g.lp_rules, &s.graph, s.items[0], &s.items[1..]));
}
