//! Lists and sets over the reserved system types.
//!
//! A list is a chain of `nelist` nodes with `HD`/`TL` ending in `elist`; a set
//! is the same shape over `neset` with `ELT`/`REST` ending in `eset`.

use crate::graph::{FeatureGraph, NodeId};
use crate::types::{FeatId, Signature, TypeId};
use crate::workspace::{WNode, Workspace};

fn chain_items(g: &FeatureGraph, mut n: NodeId, cons: TypeId, head: FeatId, tail: FeatId) -> Vec<NodeId> {
    let mut out = Vec::new();
    while g.ty(n) == cons && out.len() <= g.len() {
        match (g.get(n, head), g.get(n, tail)) {
            (Some(h), Some(t)) => {
                out.push(h);
                n = t;
            }
            _ => break,
        }
    }
    out
}

/// Items of a list node.
pub(crate) fn list_items(sig: &Signature, g: &FeatureGraph, n: NodeId) -> Vec<NodeId> {
    chain_items(g, n, sig.sys.nelist, sig.sys.hd, sig.sys.tl)
}

/// Items of a set node.
pub(crate) fn set_items(sig: &Signature, g: &FeatureGraph, n: NodeId) -> Vec<NodeId> {
    chain_items(g, n, sig.sys.neset, sig.sys.elt, sig.sys.rest)
}

fn g_chain(g: &mut FeatureGraph, items: &[NodeId], cons: TypeId, nil: TypeId, head: FeatId, tail: FeatId) -> NodeId {
    let mut cur = g.add_node(nil);
    for &item in items.iter().rev() {
        let cell = g.add_node(cons);
        g.set_arc(cell, head, item);
        g.set_arc(cell, tail, cur);
        cur = cell;
    }
    cur
}

/// Fresh list spine over existing nodes.
pub(crate) fn g_list(sig: &Signature, g: &mut FeatureGraph, items: &[NodeId]) -> NodeId {
    let s = &sig.sys;
    g_chain(g, items, s.nelist, s.elist, s.hd, s.tl)
}

pub(crate) fn g_set(sig: &Signature, g: &mut FeatureGraph, items: &[NodeId]) -> NodeId {
    let s = &sig.sys;
    g_chain(g, items, s.neset, s.eset, s.elt, s.rest)
}

fn ws_chain(ws: &mut Workspace, items: &[WNode], cons: TypeId, nil: TypeId, head: FeatId, tail: FeatId) -> WNode {
    let mut cur = ws.add(nil);
    for &item in items.iter().rev() {
        let cell = ws.add(cons);
        ws.set_arc(cell, head, item).expect("fresh node");
        ws.set_arc(cell, tail, cur).expect("fresh node");
        cur = cell;
    }
    cur
}

pub(crate) fn ws_list(ws: &mut Workspace, items: &[WNode]) -> WNode {
    let s = ws.sig.sys;
    ws_chain(ws, items, s.nelist, s.elist, s.hd, s.tl)
}

pub(crate) fn ws_set(ws: &mut Workspace, items: &[WNode]) -> WNode {
    let s = ws.sig.sys;
    ws_chain(ws, items, s.neset, s.eset, s.elt, s.rest)
}
