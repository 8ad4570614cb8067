//! Grammar file reader.
//!
//! Statements end with `.`; `%` starts a comment.
//!
//! ```text
//! type <name> bot .
//! type <name> sub <parent>, ... .
//! approp <type> <feature> <value> .
//! rule <AVM> -> <AVM>, ... .
//! lp <AVM> < <AVM> .
//! lex <word> <AVM> .
//! empty <AVM> .
//! start <AVM> .
//! restrict <F>.<G>, ... .
//! ```
//!
//! Type and appropriateness declarations are gathered first, so they may
//! appear anywhere in the file.

use crate::avm::AvmReader;
use crate::encoding::{ws_list, ws_set};
use crate::grammar::{check_lp_rules, Grammar, IdRule, LexEntry, LoadError, LpRule};
use crate::graph::FeatureGraph;
use crate::ops::describe_clash;
use crate::restrict::Restrictor;
use crate::text::{is_ident_char, Cursor};
use crate::types::{validate_hierarchy, Decl, Signature, TypeError};
use crate::workspace::{WNode, Workspace};

type Span = usize;

enum Stmt {
    Decl(Decl),
    Rule { lhs: Span, rhs: Vec<Span> },
    Lp { first: Span, second: Span },
    Lex { word: String, avm: Span },
    Empty { avm: Span },
    Start { avm: Span },
    Restrict { paths: Vec<Vec<String>> },
}

struct Located {
    stmt: Stmt,
    at: usize,
}

fn syntax(cur: &Cursor, at: usize, msg: impl Into<String>) -> LoadError {
    let (line, col) = cur.line_col(at);
    LoadError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn expect_ident(cur: &mut Cursor, what: &str) -> Result<String, LoadError> {
    cur.skip_ws();
    let at = cur.pos();
    cur.ident().ok_or_else(|| syntax(cur, at, format!("expected {what}")))
}

fn expect_avm(cur: &mut Cursor) -> Result<Span, LoadError> {
    cur.skip_ws();
    let at = cur.pos();
    if !cur.skip_brackets() {
        return Err(syntax(cur, at, "expected a bracketed AVM"));
    }
    Ok(at)
}

fn expect_end(cur: &mut Cursor) -> Result<(), LoadError> {
    cur.skip_ws();
    let at = cur.pos();
    if cur.eat(".") {
        Ok(())
    } else {
        Err(syntax(cur, at, "expected `.`"))
    }
}

fn statement(cur: &mut Cursor) -> Result<Located, LoadError> {
    cur.skip_ws();
    let at = cur.pos();
    let kw = expect_ident(cur, "a statement keyword")?;
    let stmt = match kw.as_str() {
        "type" => {
            let name = expect_ident(cur, "a type name")?;
            let how = expect_ident(cur, "`bot` or `sub`")?;
            match how.as_str() {
                "bot" => Stmt::Decl(Decl::Bottom(name)),
                "sub" => {
                    let mut parents = vec![expect_ident(cur, "a parent type")?];
                    while cur.eat(",") {
                        parents.push(expect_ident(cur, "a parent type")?);
                    }
                    Stmt::Decl(Decl::Sub { name, parents })
                }
                _ => return Err(syntax(cur, at, "expected `bot` or `sub`")),
            }
        }
        "approp" => {
            let ty = expect_ident(cur, "a type name")?;
            let feat = expect_ident(cur, "a feature name")?;
            let value = expect_ident(cur, "a value type")?;
            Stmt::Decl(Decl::Approp { ty, feat, value })
        }
        "rule" => {
            let lhs = expect_avm(cur)?;
            cur.skip_ws();
            let arrow = cur.pos();
            if !cur.eat("->") {
                return Err(syntax(cur, arrow, "expected `->`"));
            }
            let mut rhs = Vec::new();
            if cur.peek() != Some('.') {
                rhs.push(expect_avm(cur)?);
                while cur.eat(",") {
                    rhs.push(expect_avm(cur)?);
                }
            }
            if rhs.is_empty() {
                return Err(LoadError::EmptyRuleRhs {
                    line: cur.line_col(at).0,
                });
            }
            Stmt::Rule { lhs, rhs }
        }
        "lp" => {
            let first = expect_avm(cur)?;
            cur.skip_ws();
            let p = cur.pos();
            if !cur.eat("<") {
                return Err(syntax(cur, p, "expected `<`"));
            }
            let second = expect_avm(cur)?;
            Stmt::Lp { first, second }
        }
        "lex" => {
            cur.skip_ws();
            let p = cur.pos();
            let word = cur.word().ok_or_else(|| syntax(cur, p, "expected a word"))?;
            let avm = expect_avm(cur)?;
            Stmt::Lex { word, avm }
        }
        "empty" => Stmt::Empty { avm: expect_avm(cur)? },
        "start" => Stmt::Start { avm: expect_avm(cur)? },
        "restrict" => {
            let mut paths = Vec::new();
            if cur.peek() != Some('.') || cur.peek_second().is_some_and(is_ident_char) {
                loop {
                    let mut path = vec![expect_ident(cur, "a feature name")?];
                    while cur.rest().starts_with('.') && cur.rest()[1..].chars().next().is_some_and(is_ident_char) {
                        cur.eat(".");
                        path.push(expect_ident(cur, "a feature name")?);
                    }
                    paths.push(path);
                    if !cur.eat(",") {
                        break;
                    }
                }
            }
            Stmt::Restrict { paths }
        }
        other => return Err(syntax(cur, at, format!("unknown statement `{other}`"))),
    };
    expect_end(cur)?;
    Ok(Located { stmt, at })
}

fn type_error_at(cur: &Cursor, stmts: &[Located], err: TypeError) -> LoadError {
    let name = match &err {
        TypeError::CycleInOrder(n)
        | TypeError::NotBoundedComplete(n, _)
        | TypeError::ApproprNotUpwardClosed(n, _)
        | TypeError::ConflictingApprop(n, _)
        | TypeError::UnknownType(n)
        | TypeError::UnknownFeature(n)
        | TypeError::DuplicateType(n)
        | TypeError::ReservedName(n) => Some(n.clone()),
        TypeError::NoUniqueBottom => None,
    };
    let mentions = |d: &Decl, n: &str| match d {
        Decl::Bottom(x) => x == n,
        Decl::Sub { name, parents } => name == n || parents.iter().any(|p| p == n),
        Decl::Approp { ty, feat, value } => ty == n || feat == n || value == n,
    };
    let decls = stmts.iter().filter_map(|s| match &s.stmt {
        Stmt::Decl(d) => Some((d, s.at)),
        _ => None,
    });
    let defines = |d: &Decl, n: &str| match d {
        Decl::Bottom(x) | Decl::Sub { name: x, .. } => x == n,
        Decl::Approp { .. } => false,
    };
    let at = match (&err, &name) {
        (TypeError::DuplicateType(n), _) => decls.filter(|(d, _)| defines(d, n)).nth(1).map_or(0, |h| h.1),
        (TypeError::UnknownType(n), _) => decls
            .clone()
            .find(|(d, _)| mentions(d, n) && !defines(d, n))
            .map_or(0, |h| h.1),
        (_, Some(n)) => decls.clone().find(|(d, _)| mentions(d, n)).map_or(0, |h| h.1),
        (_, None) => decls
            .filter(|(d, _)| matches!(d, Decl::Bottom(_)))
            .nth(1)
            .map_or(0, |h| h.1),
    };
    let (line, col) = cur.line_col(at);
    LoadError::Type { line, col, source: err }
}

struct Builder<'t, 's> {
    src: &'t str,
    sig: &'s Signature,
}

impl<'t, 's> Builder<'t, 's> {
    fn read<R>(
        &self,
        spans: &[Span],
        infer_and_build: impl FnOnce(&mut Workspace<'s>, Vec<WNode>) -> Result<R, (WNode, crate::workspace::Clash)>,
    ) -> Result<R, LoadError> {
        let mut cur = Cursor::new(self.src);
        let mut ws = Workspace::new(self.sig);
        let nodes = {
            let mut reader = AvmReader::new(&mut cur, &mut ws);
            let mut nodes = Vec::new();
            for &s in spans {
                reader.cur.set_pos(s);
                nodes.push(reader.avm()?);
            }
            reader.finish()?;
            nodes
        };
        let at = spans[0];
        infer_and_build(&mut ws, nodes).map_err(|(root, c)| {
            let (line, col) = cur.line_col(at);
            LoadError::Inconsistent {
                line,
                col,
                source: describe_clash(&ws, root, c),
            }
        })
    }

    fn graph(&self, span: Span) -> Result<FeatureGraph, LoadError> {
        self.read(&[span], |ws, nodes| {
            ws.infer(&[nodes[0]]).map_err(|c| (nodes[0], c))?;
            Ok(ws.extract(nodes[0]))
        })
    }

    fn rule(&self, spans: &[Span]) -> Result<FeatureGraph, LoadError> {
        let sys = self.sig.sys;
        self.read(spans, |ws, nodes| {
            let root = ws.add(sys.rule);
            let rhs = ws_list(ws, &nodes[1..]);
            let rec = ws_list(ws, &[]);
            let dtrs = ws_list(ws, &[]);
            let store = ws_set(ws, &[]);
            for (f, v) in [
                (sys.lhs, nodes[0]),
                (sys.rhs, rhs),
                (sys.rec, rec),
                (sys.store, store),
                (sys.dtrs, dtrs),
            ] {
                ws.set_arc(root, f, v).map_err(|c| (root, c))?;
            }
            ws.infer(&[root]).map_err(|c| (root, c))?;
            Ok(ws.extract(root))
        })
    }
}

/// Reads and validates a grammar.
pub fn load_grammar(text: &str) -> Result<Grammar, LoadError> {
    let mut cur = Cursor::new(text);
    let mut stmts = Vec::new();
    while !cur.at_end() {
        stmts.push(statement(&mut cur)?);
    }

    let decls: Vec<Decl> = stmts
        .iter()
        .filter_map(|s| match &s.stmt {
            Stmt::Decl(d) => Some(d.clone()),
            _ => None,
        })
        .collect();
    let sig = validate_hierarchy(&decls).map_err(|e| type_error_at(&cur, &stmts, e))?;

    let b = Builder { src: text, sig: &sig };
    let line = |at: usize| cur.line_col(at).0;
    let mut id_rules = Vec::new();
    let mut lp_rules = Vec::new();
    let mut lexicon = Vec::new();
    let mut empties = Vec::new();
    let mut start: Option<FeatureGraph> = None;
    let mut restrict_paths: Option<Vec<Vec<String>>> = None;
    for s in &stmts {
        match &s.stmt {
            Stmt::Decl(_) => {}
            Stmt::Rule { lhs, rhs } => {
                let mut spans = vec![*lhs];
                spans.extend(rhs.iter().copied());
                id_rules.push(IdRule {
                    graph: b.rule(&spans)?,
                    line: line(s.at),
                });
            }
            Stmt::Lp { first, second } => lp_rules.push(LpRule {
                first: b.graph(*first)?,
                second: b.graph(*second)?,
                line: line(s.at),
            }),
            Stmt::Lex { word, avm } => lexicon.push(LexEntry {
                word: word.clone(),
                graph: b.graph(*avm)?,
                line: line(s.at),
            }),
            Stmt::Empty { avm } => empties.push(b.graph(*avm)?),
            Stmt::Start { avm } => {
                if start.is_some() {
                    return Err(LoadError::DuplicateStart { line: line(s.at) });
                }
                start = Some(b.graph(*avm)?);
            }
            Stmt::Restrict { paths } => {
                restrict_paths
                    .get_or_insert_with(Vec::new)
                    .extend(paths.iter().cloned());
            }
        }
    }
    let start = start.ok_or(LoadError::NoStartSymbol)?;
    check_lp_rules(&sig, &lp_rules)?;

    let explicit = restrict_paths.is_some();
    let restrict_line = stmts
        .iter()
        .find(|s| matches!(s.stmt, Stmt::Restrict { .. }))
        .map_or(0, |s| line(s.at));
    let mut resolved = Vec::new();
    for p in restrict_paths.unwrap_or_default() {
        let mut ids = Vec::new();
        for name in p {
            let f = sig.approp.feature(&name).ok_or_else(|| LoadError::UnknownFeature {
                line: restrict_line,
                name: name.clone(),
            })?;
            ids.push(f);
        }
        resolved.push(ids);
    }

    let mut g = Grammar {
        sig,
        id_rules,
        lp_rules,
        lexicon,
        empties,
        start,
        restrictor: Restrictor::new(resolved),
        explicit_restrictor: explicit,
    };
    if !explicit {
        g.restrictor = g.default_restrictor();
    }
    Ok(g)
}
