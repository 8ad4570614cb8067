//! Unification, type inference, subsumption and equivalence on graphs.

use thiserror::Error;

use crate::graph::{FeatureGraph, NodeId};
use crate::types::{FeatId, Signature};
use crate::workspace::{Clash, WNode, Workspace};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum UnifyError {
    #[error("unification failure at {path}: `{left}` and `{right}` have no common subtype")]
    UnificationFailure { path: String, left: String, right: String },
    #[error("type inference failure at {path}: {detail}")]
    TypeInferenceFailure { path: String, detail: String },
}

pub(crate) fn format_path(sig: &Signature, path: Option<Vec<FeatId>>) -> String {
    match path {
        None => "?".to_string(),
        Some(p) if p.is_empty() => "<>".to_string(),
        Some(p) => {
            let names: Vec<&str> = p.iter().map(|&f| sig.feat_name(f)).collect();
            format!("<{}>", names.join(" "))
        }
    }
}

pub(crate) fn describe_clash(ws: &Workspace, root: WNode, clash: Clash) -> UnifyError {
    let sig = ws.sig;
    let path = format_path(sig, ws.path_to(root, clash.node()));
    match clash {
        Clash::Types(_, a, b) => UnifyError::UnificationFailure {
            path,
            left: sig.type_name(a).to_string(),
            right: sig.type_name(b).to_string(),
        },
        Clash::NoRaise(_, t, f) => UnifyError::TypeInferenceFailure {
            path,
            detail: format!(
                "no unique least type above `{}` bears `{}`",
                sig.type_name(t),
                sig.feat_name(f)
            ),
        },
        Clash::Value(_, have, want) => UnifyError::TypeInferenceFailure {
            path,
            detail: format!(
                "value `{}` is incompatible with required `{}`",
                sig.type_name(have),
                sig.type_name(want)
            ),
        },
    }
}

/// Least common extension of two graphs, well typed.
pub fn unify(sig: &Signature, g1: &FeatureGraph, g2: &FeatureGraph) -> Result<FeatureGraph, UnifyError> {
    let mut ws = Workspace::new(sig);
    let a = ws.import(g1) + g1.root().0;
    let b = ws.import(g2) + g2.root().0;
    ws.unify(a, b).map_err(|c| describe_clash(&ws, a, c))?;
    ws.infer(&[a]).map_err(|c| describe_clash(&ws, a, c))?;
    Ok(ws.extract(a))
}

/// Least well-typed extension of `g`.
pub fn type_infer(sig: &Signature, g: &FeatureGraph) -> Result<FeatureGraph, UnifyError> {
    let mut ws = Workspace::new(sig);
    let r = ws.import(g) + g.root().0;
    ws.infer(&[r]).map_err(|c| describe_clash(&ws, r, c))?;
    Ok(ws.extract(r))
}

/// Whether `g1` is at least as general as `g2`.
pub fn subsumes(sig: &Signature, g1: &FeatureGraph, g2: &FeatureGraph) -> bool {
    subsumes_at(sig, g1, g1.root(), g2, g2.root())
}

/// Subsumption between the regions under `n1` in `g1` and `n2` in `g2`.
pub fn subsumes_at(sig: &Signature, g1: &FeatureGraph, n1: NodeId, g2: &FeatureGraph, n2: NodeId) -> bool {
    subsumes_skipping(sig, g1, n1, g2, n2, None)
}

/// As [`subsumes_at`], ignoring `skip` on the first expansion of `n1`.
pub(crate) fn subsumes_skipping(
    sig: &Signature,
    g1: &FeatureGraph,
    n1: NodeId,
    g2: &FeatureGraph,
    n2: NodeId,
    skip: Option<FeatId>,
) -> bool {
    let mut image: Vec<Option<NodeId>> = vec![None; g1.len()];
    let mut work = vec![(n1, n2, skip)];
    while let Some((a, b, skip)) = work.pop() {
        if skip.is_none() {
            match image[a.index()] {
                Some(prev) if prev == b => continue,
                Some(_) => return false,
                None => image[a.index()] = Some(b),
            }
        } else {
            image[a.index()] = Some(b);
        }
        if !sig.subsumes(g1.ty(a), g2.ty(b)) {
            return false;
        }
        for &(f, a2) in g1.arcs(a) {
            if Some(f) == skip {
                continue;
            }
            match g2.get(b, f) {
                Some(b2) => work.push((a2, b2, None)),
                None => return false,
            }
        }
    }
    true
}

pub fn equivalent(sig: &Signature, g1: &FeatureGraph, g2: &FeatureGraph) -> bool {
    subsumes(sig, g1, g2) && subsumes(sig, g2, g1)
}

pub fn equivalent_at(sig: &Signature, g1: &FeatureGraph, n1: NodeId, g2: &FeatureGraph, n2: NodeId) -> bool {
    subsumes_at(sig, g1, n1, g2, n2) && subsumes_at(sig, g2, n2, g1, n1)
}

/// Whether the regions under two nodes unify; nothing is kept.
pub(crate) fn unifiable_at(sig: &Signature, g1: &FeatureGraph, n1: NodeId, g2: &FeatureGraph, n2: NodeId) -> bool {
    let mut ws = Workspace::new(sig);
    let a = ws.import(g1) + n1.0;
    let b = ws.import(g2) + n2.0;
    ws.unify(a, b).is_ok() && ws.infer(&[a]).is_ok()
}

/// A region of a host graph paired with a detached copy taken when the pair
/// was made. The two drift apart once the host is instantiated.
#[derive(Clone, Debug)]
pub struct GraphPair {
    pub host: FeatureGraph,
    pub live: NodeId,
    pub snapshot: FeatureGraph,
}

impl GraphPair {
    pub fn new(host: FeatureGraph, live: NodeId) -> GraphPair {
        let snapshot = host.subgraph(live);
        GraphPair { host, live, snapshot }
    }

    /// True once the live region is no longer equivalent to the snapshot.
    pub fn dif(&self, sig: &Signature) -> bool {
        !equivalent_at(sig, &self.host, self.live, &self.snapshot, self.snapshot.root())
    }

    /// Unifies `other` into the host's root; the snapshot is untouched.
    pub fn unify_host(&self, sig: &Signature, other: &FeatureGraph) -> Result<GraphPair, UnifyError> {
        let mut ws = Workspace::new(sig);
        let base = ws.import(&self.host);
        let root = base + self.host.root().0;
        let live = base + self.live.0;
        let o = ws.import(other) + other.root().0;
        ws.unify(root, o).map_err(|c| describe_clash(&ws, root, c))?;
        ws.infer(&[root]).map_err(|c| describe_clash(&ws, root, c))?;
        let (host, images) = ws.extract_many(&[root, live]);
        Ok(GraphPair {
            host,
            live: images[1],
            snapshot: self.snapshot.clone(),
        })
    }
}
