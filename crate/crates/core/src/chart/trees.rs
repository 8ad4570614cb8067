use crate::avm::{Piece, Printer};
use crate::encoding::list_items;
use crate::graph::{FeatureGraph, NodeId};
use crate::types::Signature;

use super::{Chart, EdgeId, Provenance, Terminal};

/// A parse tree whose labels are nodes of one shared graph, so sharing
/// between categories in different local trees is kept.
#[derive(Clone, Debug)]
pub struct ParseTree {
    pub graph: FeatureGraph,
    pub root: TreeNode,
}

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub label: NodeId,
    pub span: (usize, usize),
    pub children: Vec<TreeChild>,
}

#[derive(Clone, Debug)]
pub enum TreeChild {
    Node(TreeNode),
    Word(String),
}

impl TreeNode {
    fn preorder<'t>(&'t self, out: &mut Vec<&'t TreeNode>) {
        out.push(self);
        for c in &self.children {
            if let TreeChild::Node(n) = c {
                n.preorder(out);
            }
        }
    }

    fn leaves(&self, out: &mut Vec<String>) {
        for c in &self.children {
            match c {
                TreeChild::Node(n) => n.leaves(out),
                TreeChild::Word(w) => out.push(w.clone()),
            }
        }
    }

    pub fn daughters(&self) -> Vec<&TreeNode> {
        self.children
            .iter()
            .filter_map(|c| match c {
                TreeChild::Node(n) => Some(n),
                TreeChild::Word(_) => None,
            })
            .collect()
    }
}

impl ParseTree {
    /// Every internal node, parents before children.
    pub fn nodes(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.preorder(&mut out);
        out
    }

    /// The words at the leaves, left to right.
    pub fn words(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.root.leaves(&mut out);
        out
    }

    /// A node's category as a standalone graph.
    pub fn label_graph(&self, n: &TreeNode) -> FeatureGraph {
        self.graph.subgraph(n.label)
    }

    /// One node per line, indented by depth, with tags shared across lines.
    pub fn render(&self, sig: &Signature) -> String {
        let nodes = self.nodes();
        let plan: Vec<Piece> = nodes.iter().map(|n| Piece::Avm(n.label)).collect();
        let mut printer = Printer::new(sig, &self.graph, &plan);
        let mut out = String::new();
        render_node(&self.root, 0, &mut printer, &mut out);
        out
    }
}

fn render_node(n: &TreeNode, depth: usize, p: &mut Printer, out: &mut String) {
    let pad = "  ".repeat(depth);
    out.push_str(&format!("{pad}{} ({}-{})\n", p.avm(n.label), n.span.0, n.span.1));
    for c in &n.children {
        match c {
            TreeChild::Node(d) => render_node(d, depth + 1, p, out),
            TreeChild::Word(w) => out.push_str(&format!("{pad}  \"{w}\"\n")),
        }
    }
}

/// Passive edges moved into `id`, in the order they were recognized.
fn completed_from(chart: &Chart, mut id: EdgeId) -> Vec<EdgeId> {
    let mut out = Vec::new();
    while let Provenance::Completed { active, passive } = chart.edge(id).provenance {
        out.push(passive);
        id = active;
    }
    out.reverse();
    out
}

fn node_for(sig: &Signature, chart: &Chart, g: &FeatureGraph, edge: EdgeId, at: NodeId) -> TreeNode {
    let s = sig.sys;
    let e = chart.edge(edge);
    let label = g.get(at, s.lhs).expect("edge node has LHS");
    let children = match &e.terminal {
        Some(Terminal::Word { word, .. }) => vec![TreeChild::Word(word.clone())],
        Some(Terminal::Empty) => Vec::new(),
        None => {
            let dtrs = list_items(sig, g, g.get(at, s.dtrs).expect("edge node has DTRS"));
            completed_from(chart, edge)
                .into_iter()
                .zip(dtrs)
                .map(|(p, n)| TreeChild::Node(node_for(sig, chart, g, p, n)))
                .collect()
        }
    };
    TreeNode {
        label,
        span: (e.start, e.end),
        children,
    }
}

/// The tree under a start edge; its root is the start category's daughter.
pub(crate) fn build(sig: &Signature, chart: &Chart, witness: EdgeId) -> ParseTree {
    let e = chart.edge(witness);
    let graph = e.graph.clone();
    let dtrs = e.dtrs(sig);
    let top = completed_from(chart, witness);
    let root = node_for(sig, chart, &graph, top[0], dtrs[0]);
    ParseTree { graph, root }
}
