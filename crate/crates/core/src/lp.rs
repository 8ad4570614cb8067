//! Linear-precedence judgments over sequences of categories.
//!
//! A sequence is a list of nodes inside one graph, so that sharing between
//! its elements (and with the rest of the graph) is respected. Indices in
//! results are 0-based positions in the sequence.

use serde::Serialize;

use crate::grammar::LpRule;
use crate::graph::{FeatureGraph, NodeId};
use crate::ops::{equivalent_at, subsumes_at, unifiable_at};
use crate::types::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpVerdict {
    /// Some rule applies in the wrong order.
    Violated,
    /// Acceptable, but some rule weakly applies in the wrong order.
    Possible,
    Clean,
}

/// A sequence of standalone graphs gathered into one graph.
#[derive(Clone, Debug)]
pub struct Sequence {
    pub graph: FeatureGraph,
    pub items: Vec<NodeId>,
}

impl Sequence {
    /// Disjoint union of `graphs` under a list node.
    pub fn from_graphs(sig: &Signature, graphs: &[FeatureGraph]) -> Sequence {
        let mut g = FeatureGraph::atom(sig.sys.elist);
        let mut items = Vec::new();
        for part in graphs {
            let base = g.len() as u32;
            for n in part.nodes() {
                let added = g.add_node(part.ty(n));
                debug_assert_eq!(added.0, base + n.0);
            }
            for n in part.nodes() {
                for &(f, m) in part.arcs(n) {
                    g.set_arc(NodeId(base + n.0), f, NodeId(base + m.0));
                }
            }
            items.push(NodeId(base + part.root().0));
        }
        let list = crate::encoding::g_list(sig, &mut g, &items);
        // reroot on the list so every item is reachable
        let out = g.subgraph(list);
        let mapped = crate::encoding::list_items(sig, &out, out.root());
        Sequence {
            graph: out,
            items: mapped,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn reordered(&self, order: &[usize]) -> Sequence {
        Sequence {
            graph: self.graph.clone(),
            items: order.iter().map(|&i| self.items[i]).collect(),
        }
    }
}

fn sub(sig: &Signature, part: &FeatureGraph, g: &FeatureGraph, n: NodeId) -> bool {
    subsumes_at(sig, part, part.root(), g, n)
}

fn unifies(sig: &Signature, part: &FeatureGraph, g: &FeatureGraph, n: NodeId) -> bool {
    unifiable_at(sig, part, part.root(), g, n)
}

/// Pairs `(i, j)`, `i != j`, with the rule's first side subsuming item `i`
/// and its second side subsuming item `j`.
pub fn applies(sig: &Signature, rule: &LpRule, g: &FeatureGraph, items: &[NodeId]) -> Vec<(usize, usize)> {
    let firsts: Vec<bool> = items.iter().map(|&n| sub(sig, &rule.first, g, n)).collect();
    let seconds: Vec<bool> = items.iter().map(|&n| sub(sig, &rule.second, g, n)).collect();
    pairs(&firsts, &seconds)
}

/// As [`applies`] with unifiability in place of subsumption.
pub fn weakly_applies(sig: &Signature, rule: &LpRule, g: &FeatureGraph, items: &[NodeId]) -> Vec<(usize, usize)> {
    let firsts: Vec<bool> = items.iter().map(|&n| unifies(sig, &rule.first, g, n)).collect();
    let seconds: Vec<bool> = items.iter().map(|&n| unifies(sig, &rule.second, g, n)).collect();
    pairs(&firsts, &seconds)
}

fn pairs(firsts: &[bool], seconds: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &a) in firsts.iter().enumerate() {
        for (j, &b) in seconds.iter().enumerate() {
            if a && b && i != j {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn lp_acceptable(sig: &Signature, rules: &[LpRule], g: &FeatureGraph, items: &[NodeId]) -> bool {
    rules.iter().all(|r| {
        let mut seen_second = false;
        for &n in items {
            if seen_second && sub(sig, &r.first, g, n) {
                return false;
            }
            seen_second |= sub(sig, &r.second, g, n);
        }
        true
    })
}

/// Violated, possibly violated or clean, in one left-to-right pass per rule.
pub fn verdict(sig: &Signature, rules: &[LpRule], g: &FeatureGraph, items: &[NodeId]) -> LpVerdict {
    let mut possible = false;
    for r in rules {
        let mut seen_second = false;
        let mut seen_weak_second = false;
        for &n in items {
            let first_sub = sub(sig, &r.first, g, n);
            if first_sub && seen_second {
                return LpVerdict::Violated;
            }
            if !possible && seen_weak_second && (first_sub || unifies(sig, &r.first, g, n)) {
                possible = true;
            }
            if sub(sig, &r.second, g, n) {
                seen_second = true;
                seen_weak_second = true;
            } else if !seen_weak_second && unifies(sig, &r.second, g, n) {
                seen_weak_second = true;
            }
        }
    }
    if possible {
        LpVerdict::Possible
    } else {
        LpVerdict::Clean
    }
}

/// False when `first` matches some rule's second side while one of
/// `remaining` matches its first side, so `first` could never precede it.
pub fn precede_check(sig: &Signature, rules: &[LpRule], g: &FeatureGraph, first: NodeId, remaining: &[NodeId]) -> bool {
    !rules
        .iter()
        .any(|r| sub(sig, &r.second, g, first) && remaining.iter().any(|&x| sub(sig, &r.first, g, x)))
}

/// Every ordering of the items, as index vectors. Orderings that are
/// element-wise equivalent are collapsed; the empty input has one ordering.
pub fn permute(sig: &Signature, g: &FeatureGraph, items: &[NodeId]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for order in index_permutations(items.len()) {
        let dup = out.iter().any(|prev| {
            prev.iter()
                .zip(&order)
                .all(|(&a, &b)| a == b || equivalent_at(sig, g, items[a], g, items[b]))
        });
        if !dup {
            out.push(order);
        }
    }
    out
}

/// The LP-acceptable members of [`permute`].
pub fn expand(sig: &Signature, rules: &[LpRule], g: &FeatureGraph, items: &[NodeId]) -> Vec<Vec<usize>> {
    permute(sig, g, items)
        .into_iter()
        .filter(|order| {
            let seq: Vec<NodeId> = order.iter().map(|&i| items[i]).collect();
            lp_acceptable(sig, rules, g, &seq)
        })
        .collect()
}

/// All `n!` orderings of `0..n` in lexicographic order.
pub fn index_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}
