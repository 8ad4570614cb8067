//! Feature graphs as immutable values.
//!
//! A graph is a vector of typed nodes with sorted, deterministic arcs and a
//! root. All nodes are reachable from the root except transiently inside the
//! crate while a graph is being assembled. Every graph carries a process-wide
//! identity so that [`FeatureGraph::copy`] yields a graph whose nodes are
//! distinct from the original's.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::types::{FeatId, Signature, TypeId};

static NEXT_GRAPH: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_GRAPH.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub(crate) ty: TypeId,
    pub(crate) arcs: Vec<(FeatId, NodeId)>,
}

#[derive(Clone, Debug)]
pub struct FeatureGraph {
    id: u64,
    pub(crate) nodes: Vec<Node>,
    root: NodeId,
}

impl FeatureGraph {
    /// One-node graph of the given type.
    pub fn atom(ty: TypeId) -> FeatureGraph {
        FeatureGraph {
            id: fresh_id(),
            nodes: vec![Node { ty, arcs: Vec::new() }],
            root: NodeId(0),
        }
    }

    pub(crate) fn from_parts(nodes: Vec<Node>, root: NodeId) -> FeatureGraph {
        FeatureGraph {
            id: fresh_id(),
            nodes,
            root,
        }
    }

    /// Identity of this graph's node space.
    pub fn graph_id(&self) -> u64 {
        self.id
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn ty(&self, n: NodeId) -> TypeId {
        self.nodes[n.index()].ty
    }

    pub fn root_type(&self) -> TypeId {
        self.ty(self.root)
    }

    pub fn arcs(&self, n: NodeId) -> &[(FeatId, NodeId)] {
        &self.nodes[n.index()].arcs
    }

    pub fn get(&self, n: NodeId, f: FeatId) -> Option<NodeId> {
        let arcs = &self.nodes[n.index()].arcs;
        arcs.binary_search_by_key(&f, |a| a.0).ok().map(|i| arcs[i].1)
    }

    /// Follows a feature path from `n`.
    pub fn follow(&self, n: NodeId, path: &[FeatId]) -> Option<NodeId> {
        let mut cur = n;
        for &f in path {
            cur = self.get(cur, f)?;
        }
        Some(cur)
    }

    /// Equivalent graph over fresh node identities.
    pub fn copy(&self) -> FeatureGraph {
        FeatureGraph {
            id: fresh_id(),
            nodes: self.nodes.clone(),
            root: self.root,
        }
    }

    /// The part of this graph reachable from `n`, rooted at `n`.
    pub fn subgraph(&self, n: NodeId) -> FeatureGraph {
        let mut map = vec![u32::MAX; self.nodes.len()];
        let mut out: Vec<Node> = Vec::new();
        let root = self.copy_into(n, &mut map, &mut out);
        FeatureGraph::from_parts(out, root)
    }

    // Appends the region under `n` into `out`, returning the new id of `n`.
    fn copy_into(&self, n: NodeId, map: &mut [u32], out: &mut Vec<Node>) -> NodeId {
        if map[n.index()] != u32::MAX {
            return NodeId(map[n.index()]);
        }
        let mut stack = vec![n];
        map[n.index()] = out.len() as u32;
        out.push(Node {
            ty: self.ty(n),
            arcs: Vec::new(),
        });
        while let Some(cur) = stack.pop() {
            let mut arcs = Vec::with_capacity(self.arcs(cur).len());
            for &(f, m) in self.arcs(cur) {
                if map[m.index()] == u32::MAX {
                    map[m.index()] = out.len() as u32;
                    out.push(Node {
                        ty: self.ty(m),
                        arcs: Vec::new(),
                    });
                    stack.push(m);
                }
                arcs.push((f, NodeId(map[m.index()])));
            }
            out[map[cur.index()] as usize].arcs = arcs;
        }
        NodeId(map[n.index()])
    }

    pub(crate) fn add_node(&mut self, ty: TypeId) -> NodeId {
        self.nodes.push(Node { ty, arcs: Vec::new() });
        NodeId(self.nodes.len() as u32 - 1)
    }

    /// Sets or replaces an arc.
    pub(crate) fn set_arc(&mut self, n: NodeId, f: FeatId, m: NodeId) {
        let arcs = &mut self.nodes[n.index()].arcs;
        match arcs.binary_search_by_key(&f, |a| a.0) {
            Ok(i) => arcs[i].1 = m,
            Err(i) => arcs.insert(i, (f, m)),
        }
    }

    /// Duplicates the region under `n` inside this graph; the copy shares no
    /// nodes with anything else.
    pub(crate) fn duplicate(&mut self, n: NodeId) -> NodeId {
        let mut map = vec![u32::MAX; self.nodes.len()];
        let mut region: Vec<Node> = Vec::new();
        let local = self.copy_into(n, &mut map, &mut region);
        let base = self.nodes.len() as u32;
        for mut node in region {
            for arc in &mut node.arcs {
                arc.1 = NodeId(arc.1 .0 + base);
            }
            self.nodes.push(node);
        }
        NodeId(local.0 + base)
    }

    /// Drops unreachable nodes, renumbering in depth-first order from the
    /// root. Returns the renaming of surviving nodes.
    pub(crate) fn compact(&mut self) -> Vec<Option<NodeId>> {
        let mut map = vec![u32::MAX; self.nodes.len()];
        let mut out = Vec::new();
        let root = self.copy_into(self.root, &mut map, &mut out);
        self.nodes = out;
        self.root = root;
        map.into_iter().map(|m| (m != u32::MAX).then_some(NodeId(m))).collect()
    }

    /// Nodes reachable from `n`, in depth-first preorder.
    pub fn reachable(&self, n: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut stack = vec![n];
        while let Some(cur) = stack.pop() {
            if std::mem::replace(&mut seen[cur.index()], true) {
                continue;
            }
            order.push(cur);
            for &(_, m) in self.arcs(cur).iter().rev() {
                if !seen[m.index()] {
                    stack.push(m);
                }
            }
        }
        order
    }

    /// Whether every present feature is appropriate for its node's type and
    /// every value is at least as specific as the appropriate value type.
    pub fn well_typed(&self, sig: &Signature) -> bool {
        self.nodes.iter().all(|node| {
            node.arcs.iter().all(|&(f, m)| match sig.approp(node.ty, f) {
                Some(v) => sig.subsumes(v, self.ty(m)),
                None => false,
            })
        })
    }
}
