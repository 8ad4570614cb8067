//! Restrictors: prefix-closed path sets that cut graphs down for prediction.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::graph::{FeatureGraph, Node, NodeId};
use crate::types::{FeatId, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Restrictor {
    paths: BTreeSet<Vec<FeatId>>,
}

impl Default for Restrictor {
    fn default() -> Self {
        Restrictor::new(std::iter::empty::<Vec<FeatId>>())
    }
}

impl Restrictor {
    /// Builds the prefix closure of `paths`; the empty path is always present.
    pub fn new<I, P>(paths: I) -> Restrictor
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[FeatId]>,
    {
        let mut set = BTreeSet::new();
        set.insert(Vec::new());
        for p in paths {
            let p = p.as_ref();
            for i in 1..=p.len() {
                set.insert(p[..i].to_vec());
            }
        }
        Restrictor { paths: set }
    }

    /// All paths of `g` from its root, up to cycles.
    pub fn all_paths(g: &FeatureGraph) -> Restrictor {
        let mut out = Vec::new();
        let mut stack = vec![(g.root(), Vec::new(), HashSet::from([g.root()]))];
        while let Some((n, path, on_path)) = stack.pop() {
            for &(f, m) in g.arcs(n) {
                let mut p: Vec<FeatId> = path.clone();
                p.push(f);
                out.push(p.clone());
                if !on_path.contains(&m) {
                    let mut seen = on_path.clone();
                    seen.insert(m);
                    stack.push((m, p, seen));
                }
            }
        }
        Restrictor::new(out)
    }

    pub fn paths(&self) -> impl Iterator<Item = &Vec<FeatId>> {
        self.paths.iter()
    }

    pub fn contains(&self, path: &[FeatId]) -> bool {
        self.paths.contains(path)
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn union(&self, other: &Restrictor) -> Restrictor {
        Restrictor {
            paths: self.paths.union(&other.paths).cloned().collect(),
        }
    }

    /// Paths rendered with feature names, `<>` for the empty path, sorted
    /// by name.
    pub fn describe(&self, sig: &Signature) -> Vec<String> {
        let mut named: Vec<Vec<&str>> = self
            .paths
            .iter()
            .map(|p| p.iter().map(|&f| sig.feat_name(f)).collect())
            .collect();
        named.sort();
        named
            .into_iter()
            .map(|p| if p.is_empty() { "<>".to_string() } else { p.join(".") })
            .collect()
    }

    /// Keeps exactly the arcs walked by some path of the restrictor.
    pub fn restrict(&self, g: &FeatureGraph) -> FeatureGraph {
        let mut map: HashMap<NodeId, NodeId> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut image = |n: NodeId, nodes: &mut Vec<Node>| -> NodeId {
            *map.entry(n).or_insert_with(|| {
                nodes.push(Node {
                    ty: g.ty(n),
                    arcs: Vec::new(),
                });
                NodeId(nodes.len() as u32 - 1)
            })
        };
        let root = image(g.root(), &mut nodes);
        let mut seen: HashSet<(NodeId, Vec<FeatId>)> = HashSet::new();
        let mut work = vec![(g.root(), Vec::<FeatId>::new())];
        while let Some((n, path)) = work.pop() {
            if !seen.insert((n, path.clone())) {
                continue;
            }
            let from = image(n, &mut nodes);
            for &(f, m) in g.arcs(n) {
                let mut p = path.clone();
                p.push(f);
                if !self.paths.contains(&p) {
                    continue;
                }
                let to = image(m, &mut nodes);
                let arcs = &mut nodes[from.index()].arcs;
                if let Err(i) = arcs.binary_search_by_key(&f, |a| a.0) {
                    arcs.insert(i, (f, to));
                }
                work.push((m, p));
            }
        }
        FeatureGraph::from_parts(nodes, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_closed() {
        let r = Restrictor::new([vec![FeatId(0), FeatId(1)]]);
        assert!(r.contains(&[]));
        assert!(r.contains(&[FeatId(0)]));
        assert_eq!(r.len(), 3);
    }
}
