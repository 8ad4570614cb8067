//! Mutable union-find arena in which graphs are merged.
//!
//! Graphs are imported with disjoint node ranges, unified node by node, and
//! read back out with [`Workspace::extract`]. The arena is cheap to clone,
//! which the oracle uses to branch.

use std::collections::VecDeque;

use crate::graph::{FeatureGraph, Node, NodeId};
use crate::types::{FeatId, Signature, TypeId};

pub(crate) type WNode = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Clash {
    /// Two merged nodes have no common upper type.
    Types(WNode, TypeId, TypeId),
    /// No unique least type above the node's type bears the feature.
    NoRaise(WNode, TypeId, FeatId),
    /// The value's type is incompatible with what the feature requires.
    Value(WNode, TypeId, TypeId),
}

impl Clash {
    pub(crate) fn node(&self) -> WNode {
        match *self {
            Clash::Types(n, ..) | Clash::NoRaise(n, ..) | Clash::Value(n, ..) => n,
        }
    }
}

#[derive(Clone)]
pub(crate) struct Workspace<'s> {
    pub(crate) sig: &'s Signature,
    parent: Vec<WNode>,
    ty: Vec<TypeId>,
    arcs: Vec<Vec<(FeatId, WNode)>>,
}

impl<'s> Workspace<'s> {
    pub(crate) fn new(sig: &'s Signature) -> Self {
        Workspace {
            sig,
            parent: Vec::new(),
            ty: Vec::new(),
            arcs: Vec::new(),
        }
    }

    /// Copies `g` in; node `n` of `g` becomes `offset + n`.
    pub(crate) fn import(&mut self, g: &FeatureGraph) -> WNode {
        let base = self.parent.len() as WNode;
        for n in g.nodes() {
            self.parent.push(base + n.0);
            self.ty.push(g.ty(n));
            self.arcs
                .push(g.arcs(n).iter().map(|&(f, m)| (f, base + m.0)).collect());
        }
        base
    }

    pub(crate) fn add(&mut self, ty: TypeId) -> WNode {
        let id = self.parent.len() as WNode;
        self.parent.push(id);
        self.ty.push(ty);
        self.arcs.push(Vec::new());
        id
    }

    pub(crate) fn find(&self, mut n: WNode) -> WNode {
        while self.parent[n as usize] != n {
            n = self.parent[n as usize];
        }
        n
    }

    fn find_mut(&mut self, n: WNode) -> WNode {
        let root = self.find(n);
        let mut cur = n;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    #[cfg(test)]
    pub(crate) fn ty(&self, n: WNode) -> TypeId {
        self.ty[self.find(n) as usize]
    }

    pub(crate) fn arcs(&self, n: WNode) -> Vec<(FeatId, WNode)> {
        self.arcs[self.find(n) as usize]
            .iter()
            .map(|&(f, m)| (f, self.find(m)))
            .collect()
    }

    /// Adds an arc, unifying with an existing value for the same feature.
    pub(crate) fn set_arc(&mut self, n: WNode, f: FeatId, m: WNode) -> Result<(), Clash> {
        let r = self.find_mut(n);
        let arcs = &mut self.arcs[r as usize];
        match arcs.binary_search_by_key(&f, |a| a.0) {
            Ok(i) => {
                let old = arcs[i].1;
                self.unify(old, m)
            }
            Err(i) => {
                arcs.insert(i, (f, m));
                Ok(())
            }
        }
    }

    /// Raises a node's type by joining it with `t`.
    /// Merges the classes of `a` and `b` and, recursively, of their common
    /// features. Types are joined; no inference is done here.
    pub(crate) fn unify(&mut self, a: WNode, b: WNode) -> Result<(), Clash> {
        let mut pending = vec![(a, b)];
        while let Some((x, y)) = pending.pop() {
            let rx = self.find_mut(x);
            let ry = self.find_mut(y);
            if rx == ry {
                continue;
            }
            let (tx, ty) = (self.ty[rx as usize], self.ty[ry as usize]);
            let joined = self.sig.join(tx, ty).ok_or(Clash::Types(rx, tx, ty))?;
            self.parent[ry as usize] = rx;
            self.ty[rx as usize] = joined;
            let moved = std::mem::take(&mut self.arcs[ry as usize]);
            let keep = &mut self.arcs[rx as usize];
            for (f, m) in moved {
                match keep.binary_search_by_key(&f, |arc| arc.0) {
                    Ok(i) => pending.push((keep[i].1, m)),
                    Err(i) => keep.insert(i, (f, m)),
                }
            }
        }
        Ok(())
    }

    fn reachable_from(&self, roots: &[WNode]) -> Vec<WNode> {
        let mut seen = std::collections::HashSet::new();
        let mut order = Vec::new();
        let mut stack: Vec<WNode> = roots.iter().map(|&r| self.find(r)).collect();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            order.push(n);
            for &(_, m) in &self.arcs[n as usize] {
                let m = self.find(m);
                if !seen.contains(&m) {
                    stack.push(m);
                }
            }
        }
        order
    }

    /// Raises types until every node reachable from `roots` is well typed.
    pub(crate) fn infer(&mut self, roots: &[WNode]) -> Result<(), Clash> {
        let nodes = self.reachable_from(roots);
        loop {
            let mut changed = false;
            for &n in &nodes {
                for i in 0..self.arcs[n as usize].len() {
                    let (f, m) = self.arcs[n as usize][i];
                    let t = self.ty[n as usize];
                    let raised = self.sig.raise_for(t, f).ok_or(Clash::NoRaise(n, t, f))?;
                    if raised != t {
                        self.ty[n as usize] = raised;
                        changed = true;
                    }
                    let want = self.sig.approp(raised, f).expect("raised type bears feature");
                    let m = self.find(m);
                    let have = self.ty[m as usize];
                    let j = self.sig.join(have, want).ok_or(Clash::Value(m, have, want))?;
                    if j != have {
                        self.ty[m as usize] = j;
                        changed = true;
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Reads the graph rooted at `root` back out.
    pub(crate) fn extract(&self, root: WNode) -> FeatureGraph {
        self.extract_many(&[root]).0
    }

    /// Reads several regions out as one graph rooted at `roots[0]`; the other
    /// roots' images are returned alongside. They need not be reachable from
    /// the first, so callers must compact or link them.
    pub(crate) fn extract_many(&self, roots: &[WNode]) -> (FeatureGraph, Vec<NodeId>) {
        let mut map = std::collections::HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut images = Vec::with_capacity(roots.len());
        for &r in roots {
            let r = self.find(r);
            if let Some(&id) = map.get(&r) {
                images.push(NodeId(id));
                continue;
            }
            map.insert(r, nodes.len() as u32);
            images.push(NodeId(nodes.len() as u32));
            nodes.push(Node {
                ty: self.ty[r as usize],
                arcs: Vec::new(),
            });
            let mut stack = vec![r];
            while let Some(n) = stack.pop() {
                let mut arcs = Vec::with_capacity(self.arcs[n as usize].len());
                for &(f, m) in &self.arcs[n as usize] {
                    let m = self.find(m);
                    let id = match map.get(&m) {
                        Some(&id) => id,
                        None => {
                            let id = nodes.len() as u32;
                            map.insert(m, id);
                            nodes.push(Node {
                                ty: self.ty[m as usize],
                                arcs: Vec::new(),
                            });
                            stack.push(m);
                            id
                        }
                    };
                    arcs.push((f, NodeId(id)));
                }
                nodes[map[&n] as usize].arcs = arcs;
            }
        }
        let root = images[0];
        (FeatureGraph::from_parts(nodes, root), images)
    }

    /// Shortest feature path from `from` to `to`, for diagnostics.
    pub(crate) fn path_to(&self, from: WNode, to: WNode) -> Option<Vec<FeatId>> {
        let from = self.find(from);
        let to = self.find(to);
        let mut prev: std::collections::HashMap<WNode, (WNode, FeatId)> = Default::default();
        let mut queue = VecDeque::from([from]);
        let mut seen = std::collections::HashSet::from([from]);
        while let Some(n) = queue.pop_front() {
            if n == to {
                let mut path = Vec::new();
                let mut cur = n;
                while cur != from {
                    let (p, f) = prev[&cur];
                    path.push(f);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for (f, m) in self.arcs(n) {
                if seen.insert(m) {
                    prev.insert(m, (n, f));
                    queue.push_back(m);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{validate_hierarchy, Decl};

    #[test]
    fn unify_merges_features_and_detects_clash() {
        let sig = validate_hierarchy(&[
            Decl::Bottom("bot".into()),
            Decl::sub("a", &["bot"]),
            Decl::sub("b", &["bot"]),
            Decl::approp("a", "F", "bot"),
        ])
        .unwrap();
        let a = sig.hierarchy.lookup("a").unwrap();
        let b = sig.hierarchy.lookup("b").unwrap();
        let f = sig.approp.feature("F").unwrap();
        let mut ws = Workspace::new(&sig);
        let x = ws.add(sig.bottom());
        let y = ws.add(a);
        let xv = ws.add(b);
        ws.set_arc(x, f, xv).unwrap();
        let yv = ws.add(a);
        ws.set_arc(y, f, yv).unwrap();
        assert!(matches!(ws.unify(x, y), Err(Clash::Types(..))));

        let mut ws = Workspace::new(&sig);
        let x = ws.add(sig.bottom());
        let v = ws.add(b);
        ws.set_arc(x, f, v).unwrap();
        ws.infer(&[x]).unwrap();
        assert_eq!(ws.ty(x), a);
        let g = ws.extract(x);
        assert_eq!(g.len(), 2);
        assert_eq!(ws.path_to(x, v), Some(vec![f]));
    }
}
