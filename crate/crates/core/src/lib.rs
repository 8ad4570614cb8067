//! Typed unification ID/LP grammars.

pub mod avm;
pub mod chart;
mod encoding;
pub mod fixtures;
pub mod grammar;
pub mod graph;
pub mod lp;
pub mod ops;
pub mod oracle;
pub mod restrict;
mod text;
pub mod types;
mod workspace;

pub use avm::{parse_avm, parse_avm_raw, serialize_avm, AvmError};
pub use chart::{
    parse, AgendaOrder, Chart, Counters, Edge, EdgeId, EdgeView, Outcome, ParseError, ParseOptions, ParseTree, Parser,
    Provenance, Status, StorePairView, StoreUnion, Terminal, TreeChild, TreeNode,
};
pub use grammar::{load_grammar, lp_closure, Grammar, IdRule, LexEntry, LoadError, LpRule};
pub use graph::{FeatureGraph, NodeId};
pub use lp::{lp_acceptable, verdict, LpVerdict, Sequence};
pub use ops::{equivalent, equivalent_at, subsumes, subsumes_at, type_infer, unify, GraphPair, UnifyError};
pub use oracle::{enumerate_language, oracle_recognize, Bounds, Language, OracleResult};
pub use restrict::Restrictor;
pub use types::{validate_hierarchy, Decl, FeatId, Signature, TypeError, TypeHierarchy, TypeId};
