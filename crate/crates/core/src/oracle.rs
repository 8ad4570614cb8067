//! Reference recognizer by exhaustive top-down derivation.
//!
//! Trees are grown left to right inside one workspace, so sharing between
//! local trees propagates as the tree is instantiated. Daughters are tried
//! in every order and LP acceptability is judged only once the whole tree is
//! built. Nothing here shares code with the chart parser beyond graph
//! operations and the LP predicate.

use std::collections::BTreeSet;

use crate::chart::{ParseError, ParseTree, TreeChild, TreeNode};
use crate::grammar::Grammar;
use crate::lp::{index_permutations, lp_acceptable};
use crate::workspace::{WNode, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Rule applications allowed on any root-to-leaf path.
    pub max_depth: usize,
    /// Rules with more daughters than this are not used.
    pub max_width: usize,
    /// Longest sentence produced by [`enumerate_language`].
    pub max_len: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_depth: 12,
            max_width: 6,
            max_len: 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub accepted: bool,
    pub trees: Vec<ParseTree>,
    /// Some derivation was cut by the depth or width bound.
    pub bound_hit: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Language {
    pub sentences: BTreeSet<Vec<String>>,
    pub bound_hit: bool,
}

#[derive(Clone, Debug)]
enum Slot {
    Open,
    Word(String),
    Daughters(Vec<usize>),
}

#[derive(Clone, Debug)]
struct Local {
    label: WNode,
    slot: Slot,
}

#[derive(Clone, Copy, Debug)]
struct Task {
    node: usize,
    depth: usize,
}

#[derive(Clone)]
struct State<'s> {
    ws: Workspace<'s>,
    words: Vec<String>,
    todo: Vec<Task>,
    nodes: Vec<Local>,
}

enum Mode<'w> {
    Fixed(&'w [String]),
    Free(usize),
}

struct Search<'g, 'w> {
    g: &'g Grammar,
    bounds: Bounds,
    mode: Mode<'w>,
    /// Every goal must cover at least one word.
    reserve: bool,
    bound_hit: bool,
    trees: Vec<ParseTree>,
    sentences: BTreeSet<Vec<String>>,
}

impl<'g> Search<'g, '_> {
    fn room(&self, st: &State) -> usize {
        match self.mode {
            Mode::Fixed(w) => w.len() - st.words.len(),
            Mode::Free(max) => max.saturating_sub(st.words.len()),
        }
    }

    fn word_fits(&self, st: &State, word: &str) -> bool {
        match self.mode {
            Mode::Fixed(w) => w.get(st.words.len()).is_some_and(|x| x == word),
            Mode::Free(max) => st.words.len() < max,
        }
    }

    fn fits(&self, st: &State, words_now: usize) -> bool {
        let room = self.room(st);
        if room < words_now {
            return false;
        }
        !self.reserve || room - words_now >= st.todo.len()
    }

    fn run(&mut self, mut st: State<'g>) {
        let Some(task) = st.todo.pop() else {
            self.finish(st);
            return;
        };
        let goal = st.nodes[task.node].label;
        let g = self.g;
        for entry in &g.lexicon {
            if !self.word_fits(&st, &entry.word) || !self.fits(&st, 1) {
                continue;
            }
            let mut next = st.clone();
            let e = next.ws.import(&entry.graph) + entry.graph.root().0;
            if next.ws.unify(goal, e).is_err() || next.ws.infer(&[goal]).is_err() {
                continue;
            }
            next.words.push(entry.word.clone());
            next.nodes[task.node].slot = Slot::Word(entry.word.clone());
            self.run(next);
        }
        for empty in &g.empties {
            let mut next = st.clone();
            let e = next.ws.import(empty) + empty.root().0;
            if next.ws.unify(goal, e).is_err() || next.ws.infer(&[goal]).is_err() {
                continue;
            }
            next.nodes[task.node].slot = Slot::Daughters(Vec::new());
            self.run(next);
        }
        let sig = &g.sig;
        for rule in &g.id_rules {
            let rhs = rule.rhs(sig);
            if self.reserve && self.room(&st) < st.todo.len() + rhs.len() {
                continue;
            }
            let mut next = st.clone();
            let base = next.ws.import(&rule.graph);
            let lhs = base + rule.lhs(sig).0;
            if next.ws.unify(goal, lhs).is_err() || next.ws.infer(&[base + rule.graph.root().0]).is_err() {
                continue;
            }
            if task.depth >= self.bounds.max_depth || rhs.len() > self.bounds.max_width {
                self.bound_hit = true;
                continue;
            }
            for order in index_permutations(rhs.len()) {
                let mut branch = next.clone();
                let first = branch.nodes.len();
                for &i in &order {
                    branch.nodes.push(Local {
                        label: base + rhs[i].0,
                        slot: Slot::Open,
                    });
                }
                let kids: Vec<usize> = (first..branch.nodes.len()).collect();
                for &k in kids.iter().rev() {
                    branch.todo.push(Task {
                        node: k,
                        depth: task.depth + 1,
                    });
                }
                branch.nodes[task.node].slot = Slot::Daughters(kids);
                self.run(branch);
            }
        }
    }

    fn finish(&mut self, st: State<'g>) {
        if let Mode::Fixed(w) = self.mode {
            if st.words.len() != w.len() {
                return;
            }
        }
        let labels: Vec<WNode> = st.nodes.iter().map(|l| l.label).collect();
        let (graph, images) = st.ws.extract_many(&labels);
        let sig = &self.g.sig;
        for local in &st.nodes {
            if let Slot::Daughters(kids) = &local.slot {
                let items: Vec<_> = kids.iter().map(|&k| images[k]).collect();
                if !lp_acceptable(sig, &self.g.lp_rules, &graph, &items) {
                    return;
                }
            }
        }
        match self.mode {
            Mode::Fixed(_) => {
                let mut pos = 0;
                let root = tree_node(&st.nodes, &images, 0, &mut pos);
                self.trees.push(ParseTree { graph, root });
            }
            Mode::Free(_) => {
                self.sentences.insert(st.words);
            }
        }
    }
}

fn tree_node(nodes: &[Local], images: &[crate::graph::NodeId], i: usize, pos: &mut usize) -> TreeNode {
    let start = *pos;
    let children = match &nodes[i].slot {
        Slot::Word(w) => {
            *pos += 1;
            vec![TreeChild::Word(w.clone())]
        }
        Slot::Daughters(kids) => kids
            .iter()
            .map(|&k| TreeChild::Node(tree_node(nodes, images, k, pos)))
            .collect(),
        Slot::Open => unreachable!("finished trees have no open goals"),
    };
    TreeNode {
        label: images[i],
        span: (start, *pos),
        children,
    }
}

fn start_state(g: &Grammar) -> State<'_> {
    let mut ws = Workspace::new(&g.sig);
    let root = ws.import(&g.start) + g.start.root().0;
    State {
        ws,
        words: Vec::new(),
        todo: vec![Task { node: 0, depth: 0 }],
        nodes: vec![Local {
            label: root,
            slot: Slot::Open,
        }],
    }
}

/// Whether some tree within `bounds` has the start graph's instance at the
/// root, `words` at the leaves and LP-acceptable daughters everywhere once
/// fully instantiated. `max_len` is ignored here.
pub fn oracle_recognize<S: AsRef<str>>(g: &Grammar, words: &[S], bounds: &Bounds) -> Result<OracleResult, ParseError> {
    let words: Vec<String> = words.iter().map(|w| w.as_ref().to_string()).collect();
    if let Some((position, word)) = words.iter().enumerate().find(|(_, w)| !g.knows_word(w)) {
        return Err(ParseError::UnknownWord {
            word: word.clone(),
            position,
        });
    }
    let mut search = Search {
        g,
        bounds: *bounds,
        mode: Mode::Fixed(&words),
        reserve: g.empties.is_empty(),
        bound_hit: false,
        trees: Vec::new(),
        sentences: BTreeSet::new(),
    };
    search.run(start_state(g));
    Ok(OracleResult {
        accepted: !search.trees.is_empty(),
        trees: search.trees,
        bound_hit: search.bound_hit,
    })
}

/// Every sentence of at most `bounds.max_len` words with a tree within
/// `bounds`.
pub fn enumerate_language(g: &Grammar, bounds: &Bounds) -> Language {
    let mut search = Search {
        g,
        bounds: *bounds,
        mode: Mode::Free(bounds.max_len),
        reserve: g.empties.is_empty(),
        bound_hit: false,
        trees: Vec::new(),
        sentences: BTreeSet::new(),
    };
    search.run(start_state(g));
    Language {
        sentences: search.sentences,
        bound_hit: search.bound_hit,
    }
}
