//! One-pass Earley-style chart parsing for ID/LP grammars.
//!
//! Each edge is a dotted rule over a span, held as one rule-rooted graph:
//! `LHS` is the mother, `REC` the daughters recognized so far in surface
//! order, `RHS` the daughters still to find, `STORE` the pending LP checks
//! and `DTRS` the graphs of the passive edges used, for tree building.
//!
//! A store entry is a `pair` whose `LIVE` half is a list sharing nodes with
//! the recognized daughters and whose `SNAP` half is a detached copy made
//! when the check was deferred. Once the two differ the live half is checked
//! again.

mod dump;
mod parser;
mod trees;

use std::collections::HashMap;
use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::encoding::{list_items, set_items};
use crate::graph::{FeatureGraph, NodeId};
use crate::types::Signature;

pub use dump::{EdgeView, StorePairView};
pub use parser::{parse, Parser};
pub use trees::{ParseTree, TreeChild, TreeNode};

pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// A lexical edge; it is active until its word has been scanned.
    Word { word: String, scanned: bool },
    /// A zero-width empty category.
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Initial,
    /// `from` is the lexical edge that was advanced, if any.
    Scanned {
        from: Option<EdgeId>,
    },
    Predicted {
        from: EdgeId,
    },
    Completed {
        active: EdgeId,
        passive: EdgeId,
    },
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub id: EdgeId,
    pub start: usize,
    pub end: usize,
    pub graph: FeatureGraph,
    pub terminal: Option<Terminal>,
    pub provenance: Provenance,
}

impl Edge {
    fn feature(&self, f: crate::types::FeatId) -> NodeId {
        self.graph
            .get(self.graph.root(), f)
            .expect("edge graph has all rule features")
    }

    pub fn lhs(&self, sig: &Signature) -> NodeId {
        self.feature(sig.sys.lhs)
    }

    pub fn rec_list(&self, sig: &Signature) -> NodeId {
        self.feature(sig.sys.rec)
    }

    pub fn rec(&self, sig: &Signature) -> Vec<NodeId> {
        list_items(sig, &self.graph, self.rec_list(sig))
    }

    pub fn rhs(&self, sig: &Signature) -> Vec<NodeId> {
        list_items(sig, &self.graph, self.feature(sig.sys.rhs))
    }

    pub fn dtrs(&self, sig: &Signature) -> Vec<NodeId> {
        list_items(sig, &self.graph, self.feature(sig.sys.dtrs))
    }

    /// The `pair` nodes of the store.
    pub fn pairs(&self, sig: &Signature) -> Vec<NodeId> {
        set_items(sig, &self.graph, self.feature(sig.sys.store))
    }

    /// `(live, snapshot)` list nodes of the store.
    pub fn store(&self, sig: &Signature) -> Vec<(NodeId, NodeId)> {
        self.pairs(sig)
            .into_iter()
            .map(|p| {
                (
                    self.graph.get(p, sig.sys.live).expect("pair has LIVE"),
                    self.graph.get(p, sig.sys.snap).expect("pair has SNAP"),
                )
            })
            .collect()
    }

    pub fn is_active(&self, sig: &Signature) -> bool {
        match &self.terminal {
            Some(Terminal::Word { scanned, .. }) => !scanned,
            Some(Terminal::Empty) => false,
            None => !self.rhs(sig).is_empty(),
        }
    }

    pub fn is_passive(&self, sig: &Signature) -> bool {
        !self.is_active(sig)
    }

    /// Same span and terminal, and this edge's graph subsumes the other's.
    /// The daughter graphs kept for tree building are not compared.
    pub fn subsumes(&self, sig: &Signature, other: &Edge) -> bool {
        self.start == other.start
            && self.end == other.end
            && self.terminal == other.terminal
            && crate::ops::subsumes_skipping(
                sig,
                &self.graph,
                self.graph.root(),
                &other.graph,
                other.graph.root(),
                Some(sig.sys.dtrs),
            )
    }

    pub fn equivalent(&self, sig: &Signature, other: &Edge) -> bool {
        self.subsumes(sig, other) && other.subsumes(sig, self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AgendaOrder {
    #[default]
    Fifo,
    Lifo,
}

/// How two stores are joined when edges combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StoreUnion {
    /// Pairs are merged only when they are the very same pair.
    #[default]
    Distinct,
    /// Pairs with equivalent snapshots are merged and their live halves
    /// unified.
    MergeEquivalent,
}

#[derive(Clone, Debug)]
pub struct ParseOptions {
    /// Reject a daughter that some remaining daughter must precede.
    pub rhs_filter: bool,
    /// Drop edges subsumed by a stored edge of the same span and kind.
    pub dedup: bool,
    pub agenda: AgendaOrder,
    /// Seed lexical and empty edges for the whole input up front instead of
    /// predicting lexical edges and scanning them.
    pub scan_first: bool,
    pub store_union: StoreUnion,
    /// Stop after this many edges have been created.
    pub max_edges: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            rhs_filter: true,
            dedup: true,
            agenda: AgendaOrder::Fifo,
            scan_first: false,
            store_union: StoreUnion::Distinct,
            max_edges: 100_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    pub enqueued: usize,
    pub processed: usize,
    pub stored: usize,
    pub rejected_subsumed: usize,
    pub rejected_unproductive: usize,
    pub rejected_unification: usize,
    pub rejected_store_union: usize,
    pub rejected_store_violation: usize,
    pub rejected_lp_violation: usize,
    pub rejected_precede_filter: usize,
    pub memo_hits: usize,
    pub failed_predictions: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct MemoEntry {
    pub(crate) graph: FeatureGraph,
    pub(crate) productive: bool,
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub words: Vec<String>,
    /// Every edge ever created, stored or not.
    pub edges: Vec<Edge>,
    /// Stored edges in the order they were stored.
    pub stored: Vec<EdgeId>,
    pub counters: Counters,
    /// Set when `max_edges` cut the run short.
    pub truncated: bool,
    pub(crate) agenda: VecDeque<EdgeId>,
    pub(crate) memo: Vec<Vec<MemoEntry>>,
    pub(crate) actives_ending: HashMap<usize, Vec<EdgeId>>,
    pub(crate) passives_starting: HashMap<usize, Vec<EdgeId>>,
    pub(crate) by_span: HashMap<(usize, usize, bool), Vec<EdgeId>>,
    pub(crate) number: HashMap<EdgeId, usize>,
}

impl Chart {
    pub(crate) fn new(words: Vec<String>) -> Chart {
        let n = words.len();
        Chart {
            words,
            edges: Vec::new(),
            stored: Vec::new(),
            counters: Counters::default(),
            truncated: false,
            agenda: VecDeque::new(),
            memo: vec![Vec::new(); n + 1],
            actives_ending: HashMap::new(),
            passives_starting: HashMap::new(),
            by_span: HashMap::new(),
            number: HashMap::new(),
        }
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn stored_edges(&self) -> impl Iterator<Item = &Edge> {
        self.stored.iter().map(|&id| &self.edges[id])
    }

    /// 1-based position of a stored edge in storage order.
    pub fn number(&self, id: EdgeId) -> Option<usize> {
        self.number.get(&id).copied()
    }

    pub fn is_stored(&self, id: EdgeId) -> bool {
        self.number.contains_key(&id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Accepted,
    AcceptedPending,
    Rejected,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Accepted => "accepted",
            Status::AcceptedPending => "accepted_pending",
            Status::Rejected => "rejected",
        }
    }

    pub fn is_accepted(self) -> bool {
        self != Status::Rejected
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    /// Passive start edges over the whole input whose category is an
    /// instance of the start graph.
    pub witnesses: Vec<EdgeId>,
    pub chart: Chart,
    pub trees: Vec<ParseTree>,
}

impl Outcome {
    /// Witnesses that still carry deferred LP checks.
    pub fn pending(&self, sig: &Signature) -> Vec<EdgeId> {
        self.witnesses
            .iter()
            .copied()
            .filter(|&w| !self.chart.edge(w).store(sig).is_empty())
            .collect()
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown word `{word}` at position {position}")]
    UnknownWord { word: String, position: usize },
}
