//! Random signatures, graphs and grammars shared by the test targets.
#![allow(dead_code)]

use std::collections::HashMap;

use idlp::{load_grammar, parse_avm, validate_hierarchy, Decl, FeatureGraph, Grammar, NodeId, Signature};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The small hierarchy used in many unit examples: `a` below `b` and `c`,
/// `d` beside them, `F` on `b` (any value) and on `c` (value `d`).
pub fn small_sig() -> Signature {
    validate_hierarchy(&[
        Decl::Bottom("bot".into()),
        Decl::sub("a", &["bot"]),
        Decl::sub("b", &["a"]),
        Decl::sub("c", &["a"]),
        Decl::sub("d", &["bot"]),
        Decl::approp("b", "F", "bot"),
        Decl::approp("c", "F", "d"),
    ])
    .unwrap()
}

/// A valid hierarchy of `n` user types with up to three features.
pub fn random_signature(rng: &mut TestRng, n: usize) -> Signature {
    loop {
        let names: Vec<String> = (0..n)
            .map(|i| if i == 0 { "bot".into() } else { format!("t{i}") })
            .collect();
        let mut decls = vec![Decl::Bottom("bot".into())];
        for i in 1..n {
            let mut parents = vec![names[rng.gen_range(0..i)].clone()];
            if i > 2 && rng.gen_bool(0.25) {
                let other = names[rng.gen_range(1..i)].clone();
                if !parents.contains(&other) {
                    parents.push(other);
                }
            }
            let refs: Vec<&str> = parents.iter().map(String::as_str).collect();
            decls.push(Decl::sub(&names[i], &refs));
        }
        for feat in ["F", "G", "H"] {
            if rng.gen_bool(0.8) {
                let host = &names[rng.gen_range(1..n)];
                let value = &names[rng.gen_range(0..n)];
                decls.push(Decl::approp(host, feat, value));
            }
        }
        if let Ok(sig) = validate_hierarchy(&decls) {
            if sig.user_features().count() > 0 {
                return sig;
            }
        }
    }
}

fn avm_text(sig: &Signature, rng: &mut TestRng, budget: &mut usize, tags: &mut u32, depth: usize) -> String {
    if *tags > 0 && rng.gen_bool(0.12) {
        return format!("#{}", rng.gen_range(1..=*tags));
    }
    let types: Vec<_> = sig.user_types().collect();
    let t = *types.choose(rng).unwrap();
    let mut out = String::new();
    if rng.gen_bool(0.2) {
        *tags += 1;
        out.push_str(&format!("#{}=", *tags));
    }
    out.push('[');
    out.push_str(sig.type_name(t));
    let feats: Vec<_> = sig.user_features().filter(|&f| sig.approp(t, f).is_some()).collect();
    for f in feats {
        if *budget > 0 && depth < 4 && rng.gen_bool(0.65) {
            *budget -= 1;
            let v = avm_text(sig, rng, budget, tags, depth + 1);
            out.push_str(&format!(" {}:{v}", sig.feat_name(f)));
        }
    }
    out.push(']');
    out
}

/// A well-typed graph of at most `max_nodes` nodes, possibly with sharing
/// and cycles.
pub fn random_graph(sig: &Signature, rng: &mut TestRng, max_nodes: usize) -> FeatureGraph {
    loop {
        let mut budget = max_nodes.saturating_sub(1);
        let mut tags = 0;
        let text = avm_text(sig, rng, &mut budget, &mut tags, 0);
        if let Ok(g) = parse_avm(sig, &text) {
            if g.len() <= max_nodes {
                return g;
            }
        }
    }
}

/// Explicit search for a root-preserving bijection between the reachable
/// nodes that preserves types and arcs.
pub fn isomorphic(g1: &FeatureGraph, g2: &FeatureGraph) -> bool {
    let n1 = g1.reachable(g1.root());
    let n2 = g2.reachable(g2.root());
    if n1.len() != n2.len() {
        return false;
    }
    let mut map: HashMap<NodeId, NodeId> = HashMap::new();
    let mut used: HashMap<NodeId, NodeId> = HashMap::new();
    map.insert(g1.root(), g2.root());
    used.insert(g2.root(), g1.root());
    if !compatible(g1, g2, g1.root(), g2.root()) {
        return false;
    }
    let rest: Vec<NodeId> = n1.into_iter().filter(|&n| n != g1.root()).collect();
    extend(g1, g2, &rest, &n2, &mut map, &mut used) && arcs_agree(g1, g2, &map)
}

fn compatible(g1: &FeatureGraph, g2: &FeatureGraph, a: NodeId, b: NodeId) -> bool {
    g1.ty(a) == g2.ty(b)
        && g1.arcs(a).len() == g2.arcs(b).len()
        && g1.arcs(a).iter().zip(g2.arcs(b)).all(|(x, y)| x.0 == y.0)
}

fn arcs_agree(g1: &FeatureGraph, g2: &FeatureGraph, map: &HashMap<NodeId, NodeId>) -> bool {
    map.iter().all(|(&a, &b)| {
        g1.arcs(a).iter().all(|&(f, m)| match map.get(&m) {
            Some(&mm) => g2.get(b, f) == Some(mm),
            None => true,
        })
    })
}

fn extend(
    g1: &FeatureGraph,
    g2: &FeatureGraph,
    rest: &[NodeId],
    targets: &[NodeId],
    map: &mut HashMap<NodeId, NodeId>,
    used: &mut HashMap<NodeId, NodeId>,
) -> bool {
    let Some((&a, tail)) = rest.split_first() else {
        return true;
    };
    for &b in targets {
        if used.contains_key(&b) || !compatible(g1, g2, a, b) {
            continue;
        }
        map.insert(a, b);
        used.insert(b, a);
        if arcs_agree(g1, g2, map) && extend(g1, g2, tail, targets, map, used) {
            return true;
        }
        map.remove(&a);
        used.remove(&b);
    }
    false
}

/// Source text of a small random grammar: at most four user types, one
/// feature, up to three binary or ternary rules, up to two LP rules and a
/// three-word lexicon. No empty categories.
pub fn random_grammar(rng: &mut TestRng) -> (String, Grammar) {
    loop {
        let text = grammar_text(rng);
        if let Ok(g) = load_grammar(&text) {
            return (text, g);
        }
    }
}

struct Cats {
    featured: Vec<&'static str>,
    with_feature: bool,
}

impl Cats {
    fn cat(&self, rng: &mut TestRng, tag: &mut Option<bool>) -> String {
        let ty = *["a", "b", "c"].choose(rng).unwrap();
        if !self.with_feature || !self.featured.contains(&ty) || rng.gen_bool(0.4) {
            return format!("[{ty}]");
        }
        let value = match tag {
            Some(defined) if rng.gen_bool(0.6) => {
                if *defined {
                    "#1".to_string()
                } else {
                    *defined = true;
                    format!("#1={}", ["b", "c", "bot"].choose(rng).unwrap())
                }
            }
            _ => ["b", "c", "bot"].choose(rng).unwrap().to_string(),
        };
        format!("[{ty} F:{value}]")
    }
}

fn grammar_text(rng: &mut TestRng) -> String {
    let mut s = String::from("type bot bot .\ntype a sub bot .\ntype b sub bot .\n");
    let c_under_a = rng.gen_bool(0.5);
    s.push_str(if c_under_a {
        "type c sub a .\n"
    } else {
        "type c sub bot .\n"
    });
    let with_feature = rng.gen_bool(0.7);
    if with_feature {
        s.push_str("approp a F bot .\n");
    }
    let cats = Cats {
        featured: if c_under_a { vec!["a", "c"] } else { vec!["a"] },
        with_feature,
    };
    let mut lhs_types = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut tag = if rng.gen_bool(0.5) { Some(false) } else { None };
        let lhs = cats.cat(rng, &mut tag);
        lhs_types.push(
            lhs.trim_start_matches('[')
                .split([' ', ']'])
                .next()
                .unwrap()
                .to_string(),
        );
        let rhs: Vec<String> = (0..rng.gen_range(2..=3)).map(|_| cats.cat(rng, &mut tag)).collect();
        s.push_str(&format!("rule {lhs} -> {} .\n", rhs.join(", ")));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let x = cats.cat(rng, &mut None);
        let y = cats.cat(rng, &mut None);
        s.push_str(&format!("lp {x} < {y} .\n"));
    }
    for w in ["p", "q", "r"] {
        for _ in 0..rng.gen_range(1..=2) {
            s.push_str(&format!("lex {w} {} .\n", cats.cat(rng, &mut None)));
        }
    }
    s.push_str(&format!("start [{}] .\n", lhs_types[0]));
    s
}

/// All word sequences of length 1 to `max` over `alphabet`.
pub fn sentences(alphabet: &[&str], max: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &layer {
            for w in alphabet {
                let mut t = s.clone();
                t.push(w.to_string());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
