//! AVM text notation.
//!
//! ```text
//! AVM   := "[" TYPE (FEAT ":" VALUE)* "]"
//! VALUE := AVM | TYPE | TAG "=" VALUE | TAG
//! TAG   := "#" integer
//! ```
//!
//! `%` starts a comment running to the end of the line. The printer is
//! canonical: features are sorted by name, shared nodes get tags numbered in
//! depth-first first-visit order, and a shared node is printed in full once.

use std::collections::HashMap;

use thiserror::Error;

use crate::encoding::list_items;
use crate::graph::{FeatureGraph, NodeId};
use crate::ops::{describe_clash, UnifyError};
use crate::text::Cursor;
use crate::types::Signature;
use crate::workspace::{WNode, Workspace};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AvmError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown type `{name}`")]
    UnknownType { line: usize, col: usize, name: String },
    #[error("{line}:{col}: unknown feature `{name}`")]
    UnknownFeature { line: usize, col: usize, name: String },
    #[error("{line}:{col}: tag #{tag} is used but never given a value")]
    UnknownTag { line: usize, col: usize, tag: u32 },
    #[error("{line}:{col}: {source}")]
    Inconsistent {
        line: usize,
        col: usize,
        source: UnifyError,
    },
}

impl AvmError {
    pub fn line(&self) -> usize {
        match *self {
            AvmError::Syntax { line, .. }
            | AvmError::UnknownType { line, .. }
            | AvmError::UnknownFeature { line, .. }
            | AvmError::UnknownTag { line, .. }
            | AvmError::Inconsistent { line, .. } => line,
        }
    }
}

struct Tag {
    node: WNode,
    defined: bool,
    first_use: usize,
}

/// Reads AVMs into a workspace. Tags are scoped to one reader.
pub(crate) struct AvmReader<'c, 't, 'w, 's> {
    pub(crate) cur: &'c mut Cursor<'t>,
    pub(crate) ws: &'w mut Workspace<'s>,
    tags: HashMap<u32, Tag>,
}

impl<'c, 't, 'w, 's> AvmReader<'c, 't, 'w, 's> {
    pub(crate) fn new(cur: &'c mut Cursor<'t>, ws: &'w mut Workspace<'s>) -> Self {
        AvmReader {
            cur,
            ws,
            tags: HashMap::new(),
        }
    }

    fn syntax(&self, at: usize, msg: impl Into<String>) -> AvmError {
        let (line, col) = self.cur.line_col(at);
        AvmError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn clash(&self, at: usize, root: WNode, c: crate::workspace::Clash) -> AvmError {
        let (line, col) = self.cur.line_col(at);
        AvmError::Inconsistent {
            line,
            col,
            source: describe_clash(self.ws, root, c),
        }
    }

    fn type_name(&mut self) -> Result<WNode, AvmError> {
        self.cur.skip_ws();
        let at = self.cur.pos();
        let name = self
            .cur
            .ident()
            .ok_or_else(|| self.syntax(at, "expected a type name"))?;
        let ty = self.ws.sig.hierarchy.lookup(&name).ok_or_else(|| {
            let (line, col) = self.cur.line_col(at);
            AvmError::UnknownType { line, col, name }
        })?;
        Ok(self.ws.add(ty))
    }

    /// Reads one bracketed AVM.
    pub(crate) fn avm(&mut self) -> Result<WNode, AvmError> {
        self.cur.skip_ws();
        let at = self.cur.pos();
        if !self.cur.eat("[") {
            return Err(self.syntax(at, "expected `[`"));
        }
        let node = self.type_name()?;
        loop {
            if self.cur.eat("]") {
                return Ok(node);
            }
            self.cur.skip_ws();
            let fat = self.cur.pos();
            let fname = self
                .cur
                .ident()
                .ok_or_else(|| self.syntax(fat, "expected a feature or `]`"))?;
            let f = self.ws.sig.approp.feature(&fname).ok_or_else(|| {
                let (line, col) = self.cur.line_col(fat);
                AvmError::UnknownFeature {
                    line,
                    col,
                    name: fname.clone(),
                }
            })?;
            if !self.cur.eat(":") {
                let p = self.cur.pos();
                return Err(self.syntax(p, "expected `:`"));
            }
            let v = self.value()?;
            self.ws.set_arc(node, f, v).map_err(|c| self.clash(fat, node, c))?;
        }
    }

    fn value(&mut self) -> Result<WNode, AvmError> {
        match self.cur.peek() {
            Some('[') => self.avm(),
            Some('#') => {
                let at = self.cur.pos();
                self.cur.eat("#");
                let n = self
                    .cur
                    .number()
                    .ok_or_else(|| self.syntax(at, "expected a tag number after `#`"))?;
                if self.cur.eat("=") {
                    let v = self.value()?;
                    match self.tags.get_mut(&n) {
                        Some(tag) => {
                            tag.defined = true;
                            let old = tag.node;
                            self.ws.unify(old, v).map_err(|c| self.clash(at, v, c))?;
                            Ok(old)
                        }
                        None => {
                            self.tags.insert(
                                n,
                                Tag {
                                    node: v,
                                    defined: true,
                                    first_use: at,
                                },
                            );
                            Ok(v)
                        }
                    }
                } else {
                    if let Some(tag) = self.tags.get(&n) {
                        return Ok(tag.node);
                    }
                    let node = self.ws.add(self.ws.sig.bottom());
                    self.tags.insert(
                        n,
                        Tag {
                            node,
                            defined: false,
                            first_use: at,
                        },
                    );
                    Ok(node)
                }
            }
            Some(_) => self.type_name(),
            None => {
                let p = self.cur.pos();
                Err(self.syntax(p, "unexpected end of input"))
            }
        }
    }

    /// Fails if some tag was only ever used bare.
    pub(crate) fn finish(&self) -> Result<(), AvmError> {
        let mut open: Vec<(&u32, &Tag)> = self.tags.iter().filter(|(_, t)| !t.defined).collect();
        open.sort_by_key(|(_, t)| t.first_use);
        if let Some((&tag, t)) = open.first() {
            let (line, col) = self.cur.line_col(t.first_use);
            return Err(AvmError::UnknownTag { line, col, tag });
        }
        Ok(())
    }
}

fn parse_with(sig: &Signature, text: &str, infer: bool) -> Result<FeatureGraph, AvmError> {
    let mut cur = Cursor::new(text);
    let mut ws = Workspace::new(sig);
    let root = {
        let mut reader = AvmReader::new(&mut cur, &mut ws);
        reader.cur.skip_ws();
        // a tag may label the root itself, as in `#1=[a F:#1]`
        let root = match reader.cur.peek() {
            Some('#') => reader.value()?,
            _ => reader.avm()?,
        };
        reader.finish()?;
        root
    };
    if !cur.at_end() {
        let (line, col) = cur.here();
        return Err(AvmError::Syntax {
            line,
            col,
            msg: "trailing input after AVM".into(),
        });
    }
    if infer {
        ws.infer(&[root]).map_err(|c| AvmError::Inconsistent {
            line: 1,
            col: 1,
            source: describe_clash(&ws, root, c),
        })?;
    }
    Ok(ws.extract(root))
}

/// Parses one AVM and makes it well typed.
pub fn parse_avm(sig: &Signature, text: &str) -> Result<FeatureGraph, AvmError> {
    parse_with(sig, text, true)
}

/// Parses one AVM as written, without type inference.
pub fn parse_avm_raw(sig: &Signature, text: &str) -> Result<FeatureGraph, AvmError> {
    parse_with(sig, text, false)
}

/// Canonical text of a graph.
pub fn serialize_avm(sig: &Signature, g: &FeatureGraph) -> String {
    let mut p = Printer::new(sig, g, &[Piece::Avm(g.root())]);
    p.avm(g.root())
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Piece {
    /// A graph node printed as an AVM.
    Avm(NodeId),
    /// A list node printed as `[item, ...]`.
    List(NodeId),
}

/// Prints several regions of one graph with a shared tag numbering. The
/// pieces passed to [`Printer::new`] must be printed in the same order.
pub(crate) struct Printer<'a> {
    sig: &'a Signature,
    g: &'a FeatureGraph,
    refs: Vec<u32>,
    tag: Vec<Option<u32>>,
    next: u32,
}

impl<'a> Printer<'a> {
    pub(crate) fn new(sig: &'a Signature, g: &'a FeatureGraph, plan: &[Piece]) -> Self {
        let mut p = Printer {
            sig,
            g,
            refs: vec![0; g.len()],
            tag: vec![None; g.len()],
            next: 1,
        };
        for &piece in plan {
            match piece {
                Piece::Avm(n) => p.count(n),
                Piece::List(n) => p.count_list(n),
            }
        }
        p
    }

    fn count(&mut self, n: NodeId) {
        let mut stack = vec![n];
        while let Some(cur) = stack.pop() {
            self.refs[cur.index()] += 1;
            if self.refs[cur.index()] == 1 {
                for &(_, m) in self.g.arcs(cur).iter().rev() {
                    stack.push(m);
                }
            }
        }
    }

    fn count_list(&mut self, n: NodeId) {
        self.refs[n.index()] += 1;
        if self.refs[n.index()] == 1 {
            for item in list_items(self.sig, self.g, n) {
                self.count(item);
            }
        }
    }

    fn open_tag(&mut self, n: NodeId, out: &mut String) -> bool {
        if let Some(t) = self.tag[n.index()] {
            out.push_str(&format!("#{t}"));
            return false;
        }
        if self.refs[n.index()] > 1 {
            let t = self.next;
            self.next += 1;
            self.tag[n.index()] = Some(t);
            out.push_str(&format!("#{t}="));
        }
        true
    }

    /// Prints a node as a bracketed AVM.
    pub(crate) fn avm(&mut self, n: NodeId) -> String {
        let mut out = String::new();
        self.write(n, true, &mut out);
        out
    }

    pub(crate) fn list(&mut self, n: NodeId) -> String {
        let mut out = String::new();
        if !self.open_tag(n, &mut out) {
            return out;
        }
        let items = list_items(self.sig, self.g, n);
        out.push('[');
        for (i, item) in items.into_iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.write(item, true, &mut out);
        }
        out.push(']');
        out
    }

    fn write(&mut self, n: NodeId, bracket: bool, out: &mut String) {
        if !self.open_tag(n, out) {
            return;
        }
        let g = self.g;
        let sig = self.sig;
        let mut arcs: Vec<(&str, NodeId)> = g.arcs(n).iter().map(|&(f, m)| (sig.feat_name(f), m)).collect();
        arcs.sort_by(|a, b| a.0.cmp(b.0));
        let ty = sig.type_name(g.ty(n));
        if arcs.is_empty() && !bracket {
            out.push_str(ty);
            return;
        }
        out.push('[');
        out.push_str(ty);
        for (name, m) in arcs {
            out.push(' ');
            out.push_str(name);
            out.push(':');
            self.write(m, false, out);
        }
        out.push(']');
    }
}
