use crate::encoding::{g_set, list_items, set_items, ws_list};
use crate::grammar::{Grammar, IdRule, LpRule};
use crate::graph::FeatureGraph;
use crate::lp::{precede_check, verdict, LpVerdict};
use crate::ops::{equivalent_at, subsumes, subsumes_at, subsumes_skipping, unifiable_at};
use crate::types::Signature;
use crate::workspace::{WNode, Workspace};

use super::trees;
use super::{
    AgendaOrder, Chart, Counters, Edge, EdgeId, MemoEntry, Outcome, ParseError, ParseOptions, Provenance, Status,
    StoreUnion, Terminal,
};

/// A reusable parser over one grammar.
pub struct Parser<'g> {
    grammar: &'g Grammar,
    options: ParseOptions,
}

impl<'g> Parser<'g> {
    pub fn new(grammar: &'g Grammar, options: ParseOptions) -> Self {
        Parser { grammar, options }
    }

    pub fn grammar(&self) -> &Grammar {
        self.grammar
    }

    pub fn options(&self) -> &ParseOptions {
        &self.options
    }

    /// Fails before any parsing if a word is missing from the lexicon.
    /// Positions are 0-based.
    pub fn parse<S: AsRef<str>>(&self, words: &[S]) -> Result<Outcome, ParseError> {
        let words: Vec<String> = words.iter().map(|w| w.as_ref().to_string()).collect();
        if let Some((position, word)) = words.iter().enumerate().find(|(_, w)| !self.grammar.knows_word(w)) {
            return Err(ParseError::UnknownWord {
                word: word.clone(),
                position,
            });
        }
        let mut run = Run {
            g: self.grammar,
            sig: &self.grammar.sig,
            opts: &self.options,
            chart: Chart::new(words),
        };
        run.initialize();
        run.close();
        Ok(run.finish())
    }
}

pub fn parse<S: AsRef<str>>(grammar: &Grammar, words: &[S], options: &ParseOptions) -> Result<Outcome, ParseError> {
    Parser::new(grammar, options.clone()).parse(words)
}

/// Builds a rule-rooted node over existing workspace nodes.
pub(crate) fn rule_node(
    ws: &mut Workspace,
    lhs: WNode,
    rec: &[WNode],
    rhs: &[WNode],
    pairs: &[WNode],
    dtrs: &[WNode],
) -> WNode {
    let s = ws.sig.sys;
    let root = ws.add(s.rule);
    let rec = ws_list(ws, rec);
    let rhs = ws_list(ws, rhs);
    let store = crate::encoding::ws_set(ws, pairs);
    let dtrs = ws_list(ws, dtrs);
    for (f, v) in [
        (s.lhs, lhs),
        (s.rec, rec),
        (s.rhs, rhs),
        (s.store, store),
        (s.dtrs, dtrs),
    ] {
        ws.set_arc(root, f, v).expect("fresh node");
    }
    root
}

/// A bodiless rule graph for a lexical entry or empty category, optionally
/// narrowed by a predicted category.
fn leaf_graph(sig: &Signature, cat: &FeatureGraph, goal: Option<&FeatureGraph>) -> Option<FeatureGraph> {
    let mut ws = Workspace::new(sig);
    let lhs = ws.import(cat) + cat.root().0;
    if let Some(c) = goal {
        let cn = ws.import(c) + c.root().0;
        ws.unify(lhs, cn).ok()?;
    }
    let root = rule_node(&mut ws, lhs, &[], &[], &[], &[]);
    ws.infer(&[root]).ok()?;
    Some(ws.extract(root))
}

fn predicted_rule(sig: &Signature, rule: &IdRule, goal: &FeatureGraph) -> Option<FeatureGraph> {
    let mut ws = Workspace::new(sig);
    let base = ws.import(&rule.graph);
    let root = base + rule.graph.root().0;
    let lhs = base + rule.lhs(sig).0;
    let cn = ws.import(goal) + goal.root().0;
    ws.unify(lhs, cn).ok()?;
    ws.infer(&[root]).ok()?;
    Some(ws.extract(root))
}

enum Reject {
    Precede,
    Store,
    Lp,
}

/// LP bookkeeping on a freshly combined rule graph whose last recognized
/// daughter was just added: the precede filter, the store recheck and the
/// verdict on the recognized sequence.
fn settle_lp(sig: &Signature, rules: &[LpRule], rhs_filter: bool, g: &mut FeatureGraph) -> Result<(), Reject> {
    let s = sig.sys;
    let root = g.root();
    let rec_list = g.get(root, s.rec).expect("rule has REC");
    let rec = list_items(sig, g, rec_list);
    let rhs = list_items(sig, g, g.get(root, s.rhs).expect("rule has RHS"));
    let elem = *rec.last().expect("a daughter was just recognized");
    if rhs_filter && !precede_check(sig, rules, g, elem, &rhs) {
        return Err(Reject::Precede);
    }
    let mut kept = Vec::new();
    for pair in set_items(sig, g, g.get(root, s.store).expect("rule has STORE")) {
        let live = g.get(pair, s.live).expect("pair has LIVE");
        let snap = g.get(pair, s.snap).expect("pair has SNAP");
        if equivalent_at(sig, g, live, g, snap) {
            kept.push(pair);
            continue;
        }
        match verdict(sig, rules, g, &list_items(sig, g, live)) {
            LpVerdict::Violated => return Err(Reject::Store),
            LpVerdict::Clean => {}
            LpVerdict::Possible => kept.push(pair),
        }
    }
    match verdict(sig, rules, g, &rec) {
        LpVerdict::Violated => return Err(Reject::Lp),
        LpVerdict::Clean => {}
        LpVerdict::Possible => {
            let snap = g.duplicate(rec_list);
            let pair = g.add_node(s.pair);
            g.set_arc(pair, s.live, rec_list);
            g.set_arc(pair, s.snap, snap);
            kept.push(pair);
        }
    }
    let set = g_set(sig, g, &kept);
    g.set_arc(root, s.store, set);
    g.compact();
    Ok(())
}

/// Every way of moving the passive edge's category into the active edge.
fn combine(
    sig: &Signature,
    rules: &[LpRule],
    opts: &ParseOptions,
    a: &Edge,
    p: &Edge,
    counters: &mut Counters,
) -> Vec<FeatureGraph> {
    let s = sig.sys;
    let rhs = a.rhs(sig);
    let rec = a.rec(sig);
    let dtrs = a.dtrs(sig);
    let a_pairs = a.pairs(sig);
    let p_pairs = p.pairs(sig);
    let p_lhs = p.lhs(sig);
    let mut out = Vec::new();
    for pos in 0..rhs.len() {
        let mut ws = Workspace::new(sig);
        let oa = ws.import(&a.graph);
        let op = ws.import(&p.graph);
        let elem = oa + rhs[pos].0;
        if ws.unify(elem, op + p_lhs.0).is_err() {
            counters.rejected_unification += 1;
            continue;
        }
        let mut pairs: Vec<WNode> = a_pairs.iter().map(|n| oa + n.0).collect();
        let mut merged_ok = true;
        match opts.store_union {
            StoreUnion::Distinct => pairs.extend(p_pairs.iter().map(|n| op + n.0)),
            StoreUnion::MergeEquivalent => {
                for &pp in &p_pairs {
                    let p_snap = p.graph.get(pp, s.snap).expect("pair has SNAP");
                    let twin = a_pairs.iter().find(|&&ap| {
                        let a_snap = a.graph.get(ap, s.snap).expect("pair has SNAP");
                        equivalent_at(sig, &a.graph, a_snap, &p.graph, p_snap)
                    });
                    match twin {
                        Some(&ap) => {
                            let a_live = a.graph.get(ap, s.live).expect("pair has LIVE");
                            let p_live = p.graph.get(pp, s.live).expect("pair has LIVE");
                            if ws.unify(oa + a_live.0, op + p_live.0).is_err() {
                                merged_ok = false;
                                break;
                            }
                        }
                        None => pairs.push(op + pp.0),
                    }
                }
            }
        }
        if !merged_ok {
            counters.rejected_store_union += 1;
            continue;
        }
        let mut rec_items: Vec<WNode> = rec.iter().map(|n| oa + n.0).collect();
        rec_items.push(elem);
        let rest: Vec<WNode> = rhs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pos)
            .map(|(_, n)| oa + n.0)
            .collect();
        let mut dtr_items: Vec<WNode> = dtrs.iter().map(|n| oa + n.0).collect();
        dtr_items.push(op + p.graph.root().0);
        let lhs = oa + a.lhs(sig).0;
        let root = rule_node(&mut ws, lhs, &rec_items, &rest, &pairs, &dtr_items);
        if ws.infer(&[root]).is_err() {
            counters.rejected_unification += 1;
            continue;
        }
        let mut g = ws.extract(root);
        match settle_lp(sig, rules, opts.rhs_filter, &mut g) {
            Ok(()) => out.push(g),
            Err(Reject::Precede) => counters.rejected_precede_filter += 1,
            Err(Reject::Store) => counters.rejected_store_violation += 1,
            Err(Reject::Lp) => counters.rejected_lp_violation += 1,
        }
    }
    out
}

struct Run<'a> {
    g: &'a Grammar,
    sig: &'a Signature,
    opts: &'a ParseOptions,
    chart: Chart,
}

impl Run<'_> {
    fn push(
        &mut self,
        start: usize,
        end: usize,
        graph: FeatureGraph,
        terminal: Option<Terminal>,
        provenance: Provenance,
    ) {
        if self.chart.edges.len() >= self.opts.max_edges {
            self.chart.truncated = true;
            return;
        }
        let id = self.chart.edges.len();
        self.chart.edges.push(Edge {
            id,
            start,
            end,
            graph,
            terminal,
            provenance,
        });
        self.chart.agenda.push_back(id);
        self.chart.counters.enqueued += 1;
    }

    fn pop(&mut self) -> Option<EdgeId> {
        match self.opts.agenda {
            AgendaOrder::Fifo => self.chart.agenda.pop_front(),
            AgendaOrder::Lifo => self.chart.agenda.pop_back(),
        }
    }

    fn initialize(&mut self) {
        let sig = self.sig;
        let mut ws = Workspace::new(sig);
        let lhs = ws.add(sig.sys.start);
        let sfs = ws.import(&self.g.start) + self.g.start.root().0;
        let root = rule_node(&mut ws, lhs, &[], &[sfs], &[], &[]);
        let graph = ws.extract(root);
        self.push(0, 0, graph, None, Provenance::Initial);
        if !self.opts.scan_first {
            return;
        }
        let words = self.chart.words.clone();
        for (j, w) in words.iter().enumerate() {
            for entry in self.g.entries_for(w) {
                if let Some(graph) = leaf_graph(sig, &entry.graph, None) {
                    let t = Terminal::Word {
                        word: w.clone(),
                        scanned: true,
                    };
                    self.push(j, j + 1, graph, Some(t), Provenance::Scanned { from: None });
                }
            }
        }
        for v in 0..=words.len() {
            for e in &self.g.empties {
                if let Some(graph) = leaf_graph(sig, e, None) {
                    self.push(v, v, graph, Some(Terminal::Empty), Provenance::Initial);
                }
            }
        }
    }

    fn subsumed(&self, id: EdgeId) -> bool {
        let sig = self.sig;
        let e = &self.chart.edges[id];
        let key = (e.start, e.end, e.is_active(sig));
        let Some(same) = self.chart.by_span.get(&key) else {
            return false;
        };
        same.iter().any(|&o| {
            let o = &self.chart.edges[o];
            o.terminal == e.terminal
                && subsumes_skipping(
                    sig,
                    &o.graph,
                    o.graph.root(),
                    &e.graph,
                    e.graph.root(),
                    Some(sig.sys.dtrs),
                )
        })
    }

    fn store(&mut self, id: EdgeId) {
        let sig = self.sig;
        let chart = &mut self.chart;
        let e = &chart.edges[id];
        let active = e.is_active(sig);
        chart.stored.push(id);
        chart.number.insert(id, chart.stored.len());
        chart.counters.stored += 1;
        chart.by_span.entry((e.start, e.end, active)).or_default().push(id);
        match &e.terminal {
            Some(Terminal::Word { scanned: false, .. }) => {}
            _ if active => chart.actives_ending.entry(e.end).or_default().push(id),
            _ => chart.passives_starting.entry(e.start).or_default().push(id),
        }
    }

    /// Predicts from every remaining daughter. Returns false, enqueueing
    /// nothing, when some daughter can never be found.
    fn predict(&mut self, edge: &Edge) -> bool {
        let sig = self.sig;
        let j = edge.end;
        let mut fresh: Vec<MemoEntry> = Vec::new();
        let mut found_edges: Vec<(FeatureGraph, Option<Terminal>)> = Vec::new();
        for n in edge.rhs(sig) {
            let goal = self.g.restrictor.restrict(&edge.graph.subgraph(n));
            let known = self.chart.memo[j]
                .iter()
                .chain(&fresh)
                .find(|m| subsumes(sig, &m.graph, &goal))
                .map(|m| m.productive);
            if let Some(productive) = known {
                self.chart.counters.memo_hits += 1;
                if !productive {
                    return false;
                }
                continue;
            }
            let mut found = false;
            for rule in &self.g.id_rules {
                match predicted_rule(sig, rule, &goal) {
                    Some(graph) => {
                        found_edges.push((graph, None));
                        found = true;
                    }
                    None => self.chart.counters.failed_predictions += 1,
                }
            }
            let leaves = self
                .g
                .lexicon
                .iter()
                .map(|e| (&e.graph, Some(e.word.as_str())))
                .chain(self.g.empties.iter().map(|e| (e, None)));
            for (cat, word) in leaves {
                if self.opts.scan_first {
                    found |= unifiable_at(sig, cat, cat.root(), &goal, goal.root());
                    continue;
                }
                match leaf_graph(sig, cat, Some(&goal)) {
                    Some(graph) => {
                        let t = match word {
                            Some(w) => Terminal::Word {
                                word: w.to_string(),
                                scanned: false,
                            },
                            None => Terminal::Empty,
                        };
                        found_edges.push((graph, Some(t)));
                        found = true;
                    }
                    None => self.chart.counters.failed_predictions += 1,
                }
            }
            fresh.push(MemoEntry {
                graph: goal,
                productive: found,
            });
            if !found {
                let memo = &mut self.chart.memo[j];
                memo.extend(fresh.into_iter().filter(|m| !m.productive));
                return false;
            }
        }
        self.chart.memo[j].extend(fresh);
        for (graph, t) in found_edges {
            self.push(j, j, graph, t, Provenance::Predicted { from: edge.id });
        }
        true
    }

    fn complete(&mut self, a: EdgeId, p: EdgeId) {
        let sig = self.sig;
        let (ae, pe) = (&self.chart.edges[a], &self.chart.edges[p]);
        let (start, end) = (ae.start, pe.end);
        let made = combine(sig, &self.g.lp_rules, self.opts, ae, pe, &mut self.chart.counters);
        for graph in made {
            self.push(start, end, graph, None, Provenance::Completed { active: a, passive: p });
        }
    }

    fn close(&mut self) {
        let sig = self.sig;
        while let Some(id) = self.pop() {
            if self.chart.truncated {
                break;
            }
            self.chart.counters.processed += 1;
            if self.opts.dedup && self.subsumed(id) {
                self.chart.counters.rejected_subsumed += 1;
                continue;
            }
            let edge = self.chart.edges[id].clone();
            match &edge.terminal {
                Some(Terminal::Word { word, scanned: false }) => {
                    if self.chart.words.get(edge.end) == Some(word) {
                        let t = Terminal::Word {
                            word: word.clone(),
                            scanned: true,
                        };
                        let graph = edge.graph.copy();
                        self.push(
                            edge.start,
                            edge.end + 1,
                            graph,
                            Some(t),
                            Provenance::Scanned { from: Some(id) },
                        );
                    }
                }
                _ if edge.is_active(sig) => {
                    if !self.predict(&edge) {
                        self.chart.counters.rejected_unproductive += 1;
                        continue;
                    }
                    let partners = self.chart.passives_starting.get(&edge.end).cloned().unwrap_or_default();
                    for p in partners {
                        self.complete(id, p);
                    }
                }
                _ => {
                    let partners = self.chart.actives_ending.get(&edge.start).cloned().unwrap_or_default();
                    for a in partners {
                        self.complete(a, id);
                    }
                }
            }
            self.store(id);
        }
    }

    fn finish(self) -> Outcome {
        let sig = self.sig;
        let chart = self.chart;
        let n = chart.words.len();
        let sfs = &self.g.start;
        let witnesses: Vec<EdgeId> = chart
            .stored
            .iter()
            .copied()
            .filter(|&id| {
                let e = &chart.edges[id];
                if e.start != 0 || e.end != n || e.terminal.is_some() || e.is_active(sig) {
                    return false;
                }
                if e.graph.ty(e.lhs(sig)) != sig.sys.start {
                    return false;
                }
                let rec = e.rec(sig);
                rec.len() == 1 && subsumes_at(sig, sfs, sfs.root(), &e.graph, rec[0])
            })
            .collect();
        let status = if witnesses.is_empty() {
            Status::Rejected
        } else if witnesses.iter().any(|&w| chart.edges[w].pairs(sig).is_empty()) {
            Status::Accepted
        } else {
            Status::AcceptedPending
        };
        let trees = witnesses.iter().map(|&w| trees::build(sig, &chart, w)).collect();
        Outcome {
            status,
            witnesses,
            chart,
            trees,
        }
    }
}
