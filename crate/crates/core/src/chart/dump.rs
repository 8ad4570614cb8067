use serde::Serialize;

use crate::avm::{Piece, Printer};
use crate::types::Signature;

use super::{Chart, EdgeId, Provenance, Terminal};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StorePairView {
    pub live: String,
    pub snapshot: String,
}

/// A stored edge as text, for dumps and golden comparisons. Graphs are in
/// canonical AVM form with tags numbered across the whole edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeView {
    /// 1-based storage order.
    pub number: usize,
    pub start: usize,
    pub end: usize,
    pub active: bool,
    pub lhs: String,
    pub rec: Vec<String>,
    pub rhs: Vec<String>,
    pub store: Vec<StorePairView>,
    /// `Ini.`, `Scan.&k`, `Pred.&k` or `Comp.&k&l`, with stored numbers.
    pub provenance: String,
}

impl EdgeView {
    pub fn line(&self, trace: bool) -> String {
        let store: Vec<String> = self
            .store
            .iter()
            .map(|p| format!("({}, {})", p.live, p.snapshot))
            .collect();
        let body = format!(
            "[{}, {}, {} -> [{}] • {{{}}}, {{{}}}]",
            self.start,
            self.end,
            self.lhs,
            self.rec.join(", "),
            self.rhs.join(", "),
            store.join(", ")
        );
        if trace {
            format!("{}. {} {}", self.number, self.provenance, body)
        } else {
            body
        }
    }
}

fn provenance(chart: &Chart, p: Provenance) -> String {
    let num = |id: EdgeId| chart.number(id).map_or_else(|| "?".to_string(), |k| k.to_string());
    match p {
        Provenance::Initial => "Ini.".into(),
        Provenance::Scanned { from: Some(k) } => format!("Scan.&{}", num(k)),
        Provenance::Scanned { from: None } => "Scan.".into(),
        Provenance::Predicted { from } => format!("Pred.&{}", num(from)),
        Provenance::Completed { active, passive } => format!("Comp.&{}&{}", num(active), num(passive)),
    }
}

impl Chart {
    pub fn view(&self, sig: &Signature, id: EdgeId) -> EdgeView {
        let e = self.edge(id);
        let g = &e.graph;
        let lhs = e.lhs(sig);
        let rec = e.rec(sig);
        let rhs = e.rhs(sig);
        let store = e.store(sig);
        let mut plan = vec![Piece::Avm(lhs)];
        plan.extend(rec.iter().map(|&n| Piece::Avm(n)));
        plan.extend(rhs.iter().map(|&n| Piece::Avm(n)));
        for &(l, s) in &store {
            plan.push(Piece::List(l));
            plan.push(Piece::List(s));
        }
        let mut p = Printer::new(sig, g, &plan);
        let lhs = p.avm(lhs);
        let mut rec: Vec<String> = rec.iter().map(|&n| p.avm(n)).collect();
        let mut rhs: Vec<String> = rhs.iter().map(|&n| p.avm(n)).collect();
        let store = store
            .iter()
            .map(|&(l, s)| StorePairView {
                live: p.list(l),
                snapshot: p.list(s),
            })
            .collect();
        match &e.terminal {
            Some(Terminal::Word { word, scanned: true }) => rec.push(word.clone()),
            Some(Terminal::Word { word, scanned: false }) => rhs.push(word.clone()),
            _ => {}
        }
        EdgeView {
            number: self.number(id).unwrap_or(0),
            start: e.start,
            end: e.end,
            active: e.is_active(sig),
            lhs,
            rec,
            rhs,
            store,
            provenance: provenance(self, e.provenance),
        }
    }

    /// Stored edges ordered by start, end and storage order.
    pub fn views(&self, sig: &Signature) -> Vec<EdgeView> {
        let mut ids = self.stored.clone();
        ids.sort_by_key(|&id| (self.edges[id].start, self.edges[id].end, self.number[&id]));
        ids.into_iter().map(|id| self.view(sig, id)).collect()
    }

    /// One line per stored edge, in storage order.
    pub fn dump(&self, sig: &Signature, trace: bool) -> String {
        let mut out = String::new();
        for &id in &self.stored {
            out.push_str(&self.view(sig, id).line(trace));
            out.push('\n');
        }
        out
    }
}
