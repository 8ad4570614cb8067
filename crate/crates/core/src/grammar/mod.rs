//! ID/LP grammars: immediate-dominance rules over multisets, linear-precedence
//! rules, a lexicon, empty categories, a start graph and a restrictor.

mod loader;

use std::fmt::Write as _;

use thiserror::Error;

use crate::avm::{AvmError, Piece, Printer};
use crate::encoding::list_items;
use crate::graph::{FeatureGraph, NodeId};
use crate::ops::{equivalent, UnifyError};
use crate::restrict::Restrictor;
use crate::types::{Signature, TypeError};

pub use loader::load_grammar;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LoadError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {source}")]
    Type { line: usize, col: usize, source: TypeError },
    #[error(transparent)]
    Avm(#[from] AvmError),
    #[error("{line}:{col}: {source}")]
    Inconsistent {
        line: usize,
        col: usize,
        source: UnifyError,
    },
    #[error("line {line}: LP rule orders a category before itself")]
    ReflexiveLpRule { line: usize },
    #[error("line {line}: LP rule is the reverse of the rule on line {other}")]
    SymmetricLpRules { line: usize, other: usize },
    #[error("the grammar has no start statement")]
    NoStartSymbol,
    #[error("line {line}: second start statement")]
    DuplicateStart { line: usize },
    #[error("line {line}: rule has an empty right-hand side")]
    EmptyRuleRhs { line: usize },
    #[error("line {line}: unknown feature `{name}` in restrictor path")]
    UnknownFeature { line: usize, name: String },
}

/// An ID rule, stored as one graph rooted at the reserved `rule` type with
/// `LHS`, `RHS` (list), `REC` (empty list), `STORE` (empty set) and `DTRS`
/// (empty list). Tags may link the mother and daughters.
#[derive(Clone, Debug)]
pub struct IdRule {
    pub graph: FeatureGraph,
    pub line: usize,
}

impl IdRule {
    pub fn lhs(&self, sig: &Signature) -> NodeId {
        self.graph.get(self.graph.root(), sig.sys.lhs).expect("rule has LHS")
    }

    pub fn rhs(&self, sig: &Signature) -> Vec<NodeId> {
        let list = self.graph.get(self.graph.root(), sig.sys.rhs).expect("rule has RHS");
        list_items(sig, &self.graph, list)
    }

    pub fn lhs_graph(&self, sig: &Signature) -> FeatureGraph {
        self.graph.subgraph(self.lhs(sig))
    }

    /// Each daughter on its own; sharing between them is lost.
    pub fn rhs_graphs(&self, sig: &Signature) -> Vec<FeatureGraph> {
        self.rhs(sig).into_iter().map(|n| self.graph.subgraph(n)).collect()
    }
}

/// `first < second`: a sister matching `first` precedes one matching `second`.
#[derive(Clone, Debug)]
pub struct LpRule {
    pub first: FeatureGraph,
    pub second: FeatureGraph,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct LexEntry {
    pub word: String,
    pub graph: FeatureGraph,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub sig: Signature,
    pub id_rules: Vec<IdRule>,
    pub lp_rules: Vec<LpRule>,
    pub lexicon: Vec<LexEntry>,
    pub empties: Vec<FeatureGraph>,
    pub start: FeatureGraph,
    pub restrictor: Restrictor,
    /// Whether the restrictor came from a `restrict` statement.
    pub explicit_restrictor: bool,
}

impl Grammar {
    pub fn entries_for<'g>(&'g self, word: &'g str) -> impl Iterator<Item = &'g LexEntry> + 'g {
        self.lexicon.iter().filter(move |e| e.word == word)
    }

    pub fn knows_word(&self, word: &str) -> bool {
        self.lexicon.iter().any(|e| e.word == word)
    }

    /// Distinct lexicon words in first-declaration order.
    pub fn words(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for e in &self.lexicon {
            if !out.contains(&e.word.as_str()) {
                out.push(&e.word);
            }
        }
        out
    }

    /// Every feature path of every daughter and of every LP graph.
    pub fn default_restrictor(&self) -> Restrictor {
        let mut r = Restrictor::default();
        for rule in &self.id_rules {
            for d in rule.rhs_graphs(&self.sig) {
                r = r.union(&Restrictor::all_paths(&d));
            }
        }
        for lp in &self.lp_rules {
            r = r.union(&Restrictor::all_paths(&lp.first));
            r = r.union(&Restrictor::all_paths(&lp.second));
        }
        r
    }

    /// Same grammar with the LP rules closed under transitivity.
    pub fn with_lp_closure(&self) -> Result<Grammar, LoadError> {
        let mut g = self.clone();
        g.lp_rules = lp_closure(&self.sig, &self.lp_rules)?;
        Ok(g)
    }

    /// Grammar text that loads back to an equivalent grammar.
    pub fn to_text(&self) -> String {
        let sig = &self.sig;
        let mut out = sig.to_string();
        for rule in &self.id_rules {
            let lhs = rule.lhs(sig);
            let rhs = rule.rhs(sig);
            let mut plan = vec![Piece::Avm(lhs)];
            plan.extend(rhs.iter().map(|&n| Piece::Avm(n)));
            let mut p = Printer::new(sig, &rule.graph, &plan);
            let l = p.avm(lhs);
            let r: Vec<String> = rhs.iter().map(|&n| p.avm(n)).collect();
            let _ = writeln!(out, "rule {l} -> {} .", r.join(", "));
        }
        for lp in &self.lp_rules {
            let _ = writeln!(
                out,
                "lp {} < {} .",
                crate::avm::serialize_avm(sig, &lp.first),
                crate::avm::serialize_avm(sig, &lp.second)
            );
        }
        for e in &self.lexicon {
            let _ = writeln!(out, "lex {} {} .", e.word, crate::avm::serialize_avm(sig, &e.graph));
        }
        for e in &self.empties {
            let _ = writeln!(out, "empty {} .", crate::avm::serialize_avm(sig, e));
        }
        let _ = writeln!(out, "start {} .", crate::avm::serialize_avm(sig, &self.start));
        if self.explicit_restrictor {
            let paths: Vec<String> = self
                .restrictor
                .describe(sig)
                .into_iter()
                .filter(|p| p != "<>")
                .collect();
            let _ = writeln!(out, "restrict {} .", paths.join(", "));
        }
        out
    }
}

fn symmetric_pair(sig: &Signature, rules: &[LpRule]) -> Option<(usize, usize)> {
    for (i, a) in rules.iter().enumerate() {
        for b in &rules[i + 1..] {
            if equivalent(sig, &a.first, &b.second) && equivalent(sig, &a.second, &b.first) {
                return Some((b.line, a.line));
            }
        }
    }
    None
}

pub(crate) fn check_lp_rules(sig: &Signature, rules: &[LpRule]) -> Result<(), LoadError> {
    for r in rules {
        if equivalent(sig, &r.first, &r.second) {
            return Err(LoadError::ReflexiveLpRule { line: r.line });
        }
    }
    if let Some((line, other)) = symmetric_pair(sig, rules) {
        return Err(LoadError::SymmetricLpRules { line, other });
    }
    Ok(())
}

/// Adds `A < C` for every `A < B`, `B' < C` with `B` and `B'` equivalent,
/// up to a fixpoint. Rules equivalent on both sides are kept once.
pub fn lp_closure(sig: &Signature, rules: &[LpRule]) -> Result<Vec<LpRule>, LoadError> {
    let mut out: Vec<LpRule> = Vec::new();
    for r in rules {
        if !contains_rule(sig, &out, r) {
            out.push(r.clone());
        }
    }
    check_lp_rules(sig, &out)?;
    loop {
        let mut added = Vec::new();
        for a in &out {
            for b in &out {
                if !equivalent(sig, &a.second, &b.first) {
                    continue;
                }
                let cand = LpRule {
                    first: a.first.clone(),
                    second: b.second.clone(),
                    line: a.line.max(b.line),
                };
                if equivalent(sig, &cand.first, &cand.second) {
                    return Err(LoadError::SymmetricLpRules {
                        line: b.line,
                        other: a.line,
                    });
                }
                if !contains_rule(sig, &out, &cand) && !contains_rule(sig, &added, &cand) {
                    added.push(cand);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        out.extend(added);
        check_lp_rules(sig, &out)?;
    }
    Ok(out)
}

fn contains_rule(sig: &Signature, rules: &[LpRule], r: &LpRule) -> bool {
    rules
        .iter()
        .any(|x| equivalent(sig, &x.first, &r.first) && equivalent(sig, &x.second, &r.second))
}
