//! Type hierarchies and appropriateness specifications.
//!
//! A hierarchy is a finite bounded-complete partial order over type names with
//! a unique bottom. The order is stored closed and the join table is computed
//! once at validation, since unification performs joins in its inner loop.
//!
//! Every validated [`Signature`] also carries a small reserved layer of system
//! types and features (lists, sets, pairs and the rule type) used to encode
//! dotted rules as single feature graphs. These types sit directly above the
//! user's bottom and are incomparable with every user type.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TypeId(pub(crate) u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FeatId(pub(crate) u32);

impl FeatId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One declaration of the `type`/`approp` section of a grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    /// `type <name> bot .`
    Bottom(String),
    /// `type <name> sub <parent>, ... .`
    Sub { name: String, parents: Vec<String> },
    /// `approp <type> <feature> <value> .`
    Approp { ty: String, feat: String, value: String },
}

impl Decl {
    pub fn sub(name: &str, parents: &[&str]) -> Decl {
        Decl::Sub {
            name: name.to_string(),
            parents: parents.iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn approp(ty: &str, feat: &str, value: &str) -> Decl {
        Decl::Approp {
            ty: ty.to_string(),
            feat: feat.to_string(),
            value: value.to_string(),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("cycle in the type order through `{0}`")]
    CycleInOrder(String),
    #[error("the hierarchy must declare exactly one bottom type")]
    NoUniqueBottom,
    #[error("types `{0}` and `{1}` have common upper bounds but no least one")]
    NotBoundedComplete(String, String),
    #[error("appropriateness of feature `{1}` is not upward closed at type `{0}`")]
    ApproprNotUpwardClosed(String, String),
    #[error("conflicting appropriateness declarations for `{0}` `{1}`")]
    ConflictingApprop(String, String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("type `{0}` is declared more than once")]
    DuplicateType(String),
    #[error("`{0}` is reserved for the rule encoding")]
    ReservedName(String),
}

/// Reserved type names of the system layer.
pub const RESERVED_TYPES: [&str; 7] = ["rule", "elist", "nelist", "pair", "eset", "neset", "***"];
/// Reserved feature names of the system layer.
pub const RESERVED_FEATURES: [&str; 11] = [
    "LHS", "REC", "RHS", "STORE", "DTRS", "HD", "TL", "LIVE", "SNAP", "ELT", "REST",
];

/// The closed order with its precomputed joins.
#[derive(Clone, Debug)]
pub struct TypeHierarchy {
    names: Vec<String>,
    index: HashMap<String, TypeId>,
    bottom: TypeId,
    leq: Vec<bool>,
    join: Vec<Option<TypeId>>,
}

impl TypeHierarchy {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn bottom(&self) -> TypeId {
        self.bottom
    }

    pub fn name(&self, t: TypeId) -> &str {
        &self.names[t.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<TypeId> {
        self.index.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<TypeId, TypeError> {
        self.lookup(name)
            .ok_or_else(|| TypeError::UnknownType(name.to_string()))
    }

    pub fn types(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.names.len() as u32).map(TypeId)
    }

    /// `t1 ⊑ t2`: `t1` is at least as general as `t2`.
    pub fn subsumes(&self, t1: TypeId, t2: TypeId) -> bool {
        self.leq[t1.index() * self.names.len() + t2.index()]
    }

    /// Least upper bound, `None` when the pair has no common upper bound.
    pub fn join(&self, t1: TypeId, t2: TypeId) -> Option<TypeId> {
        self.join[t1.index() * self.names.len() + t2.index()]
    }

    pub fn type_subsumes(&self, t1: &str, t2: &str) -> Result<bool, TypeError> {
        Ok(self.subsumes(self.resolve(t1)?, self.resolve(t2)?))
    }

    pub fn join_names(&self, t1: &str, t2: &str) -> Result<Option<&str>, TypeError> {
        let j = self.join(self.resolve(t1)?, self.resolve(t2)?);
        Ok(j.map(|t| self.name(t)))
    }

    /// Maximal types ("varieties").
    pub fn varieties(&self) -> Vec<TypeId> {
        self.types()
            .filter(|&t| self.types().all(|u| u == t || !self.subsumes(t, u)))
            .collect()
    }
}

/// Partial map `(type, feature) -> type`, upward closed.
#[derive(Clone, Debug)]
pub struct Appropriateness {
    feat_names: Vec<String>,
    feat_index: HashMap<String, FeatId>,
    table: HashMap<(TypeId, FeatId), TypeId>,
    declared: Vec<(TypeId, FeatId, TypeId)>,
}

impl Appropriateness {
    pub fn approp(&self, t: TypeId, f: FeatId) -> Option<TypeId> {
        self.table.get(&(t, f)).copied()
    }

    pub fn feature(&self, name: &str) -> Option<FeatId> {
        self.feat_index.get(name).copied()
    }

    pub fn resolve(&self, name: &str) -> Result<FeatId, TypeError> {
        self.feature(name)
            .ok_or_else(|| TypeError::UnknownFeature(name.to_string()))
    }

    pub fn feat_name(&self, f: FeatId) -> &str {
        &self.feat_names[f.index()]
    }

    pub fn features(&self) -> impl Iterator<Item = FeatId> + '_ {
        (0..self.feat_names.len() as u32).map(FeatId)
    }

    /// Every defined `(type, feature, value)` triple.
    pub fn entries(&self) -> impl Iterator<Item = (TypeId, FeatId, TypeId)> + '_ {
        self.table.iter().map(|(&(t, f), &v)| (t, f, v))
    }

    /// The triples as they were declared (before upward closure).
    pub fn declared(&self) -> &[(TypeId, FeatId, TypeId)] {
        &self.declared
    }
}

/// Type and feature ids of the reserved rule encoding.
#[derive(Clone, Copy, Debug)]
pub struct SystemLayer {
    pub rule: TypeId,
    pub elist: TypeId,
    pub nelist: TypeId,
    pub pair: TypeId,
    pub eset: TypeId,
    pub neset: TypeId,
    pub start: TypeId,
    pub lhs: FeatId,
    pub rec: FeatId,
    pub rhs: FeatId,
    pub store: FeatId,
    pub dtrs: FeatId,
    pub hd: FeatId,
    pub tl: FeatId,
    pub live: FeatId,
    pub snap: FeatId,
    pub elt: FeatId,
    pub rest: FeatId,
    /// Number of user types; system types follow them.
    pub user_types: usize,
    /// Number of user features; system features follow them.
    pub user_features: usize,
}

impl SystemLayer {
    pub fn is_system_type(&self, t: TypeId) -> bool {
        t.index() >= self.user_types
    }

    pub fn is_system_feature(&self, f: FeatId) -> bool {
        f.index() >= self.user_features
    }
}

/// A validated hierarchy together with its appropriateness specification.
#[derive(Clone, Debug)]
pub struct Signature {
    pub hierarchy: TypeHierarchy,
    pub approp: Appropriateness,
    pub sys: SystemLayer,
    // least type at or above `t` for which the feature is appropriate
    raise: HashMap<(TypeId, FeatId), Option<TypeId>>,
}

impl Signature {
    pub fn bottom(&self) -> TypeId {
        self.hierarchy.bottom()
    }

    pub fn type_name(&self, t: TypeId) -> &str {
        self.hierarchy.name(t)
    }

    pub fn feat_name(&self, f: FeatId) -> &str {
        self.approp.feat_name(f)
    }

    pub fn subsumes(&self, t1: TypeId, t2: TypeId) -> bool {
        self.hierarchy.subsumes(t1, t2)
    }

    pub fn join(&self, t1: TypeId, t2: TypeId) -> Option<TypeId> {
        self.hierarchy.join(t1, t2)
    }

    pub fn approp(&self, t: TypeId, f: FeatId) -> Option<TypeId> {
        self.approp.approp(t, f)
    }

    /// Least type `t' ⊒ t` with `f` appropriate; `None` if there is no such
    /// type or no unique least one.
    pub fn raise_for(&self, t: TypeId, f: FeatId) -> Option<TypeId> {
        if self.approp(t, f).is_some() {
            return Some(t);
        }
        self.raise.get(&(t, f)).copied().flatten()
    }

    pub fn user_types(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.sys.user_types as u32).map(TypeId)
    }

    pub fn user_features(&self) -> impl Iterator<Item = FeatId> + '_ {
        (0..self.sys.user_features as u32).map(FeatId)
    }

    /// Reconstructs the declaration list of the user layer.
    pub fn to_decls(&self) -> Vec<Decl> {
        let h = &self.hierarchy;
        let mut out = Vec::new();
        for t in self.user_types() {
            if t == h.bottom() {
                out.push(Decl::Bottom(h.name(t).to_string()));
                continue;
            }
            // immediate parents: strict lower bounds with nothing strictly between
            let parents: Vec<String> = self
                .user_types()
                .filter(|&p| p != t && h.subsumes(p, t))
                .filter(|&p| {
                    !self
                        .user_types()
                        .any(|m| m != p && m != t && h.subsumes(p, m) && h.subsumes(m, t))
                })
                .map(|p| h.name(p).to_string())
                .collect();
            out.push(Decl::Sub {
                name: h.name(t).to_string(),
                parents,
            });
        }
        let mut declared = self.approp.declared().to_vec();
        declared.sort_by(|a, b| (a.0, self.feat_name(a.1)).cmp(&(b.0, self.feat_name(b.1))));
        for (t, f, v) in declared {
            out.push(Decl::Approp {
                ty: h.name(t).to_string(),
                feat: self.feat_name(f).to_string(),
                value: h.name(v).to_string(),
            });
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.to_decls() {
            match d {
                Decl::Bottom(n) => writeln!(f, "type {n} bot .")?,
                Decl::Sub { name, parents } => writeln!(f, "type {name} sub {} .", parents.join(", "))?,
                Decl::Approp { ty, feat, value } => writeln!(f, "approp {ty} {feat} {value} .")?,
            }
        }
        Ok(())
    }
}

/// Validates a declaration list and builds the closed hierarchy, the join
/// table and the upward-closed appropriateness table.
///
/// Appropriateness declared on a type is inherited by every type above it;
/// an explicit declaration higher up must be at least as specific as what
/// it inherits.
pub fn validate_hierarchy(decls: &[Decl]) -> Result<Signature, TypeError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, TypeId> = HashMap::new();
    let mut bottoms = Vec::new();
    let mut raw_parents: Vec<Vec<String>> = Vec::new();

    for d in decls {
        let (name, parents) = match d {
            Decl::Bottom(n) => {
                bottoms.push(n.clone());
                (n, Vec::new())
            }
            Decl::Sub { name, parents } => (name, parents.clone()),
            Decl::Approp { .. } => continue,
        };
        if RESERVED_TYPES.contains(&name.as_str()) {
            return Err(TypeError::ReservedName(name.clone()));
        }
        if index.contains_key(name) {
            return Err(TypeError::DuplicateType(name.clone()));
        }
        index.insert(name.clone(), TypeId(names.len() as u32));
        names.push(name.clone());
        raw_parents.push(parents);
    }
    if bottoms.len() != 1 {
        return Err(TypeError::NoUniqueBottom);
    }
    let bottom = index[&bottoms[0]];
    let user_types = names.len();

    // system layer, each a direct child of bottom
    let bottom_name = bottoms[0].clone();
    for sys in RESERVED_TYPES {
        index.insert(sys.to_string(), TypeId(names.len() as u32));
        names.push(sys.to_string());
        raw_parents.push(vec![bottom_name.clone()]);
    }

    let n = names.len();
    let mut parents: Vec<Vec<usize>> = Vec::with_capacity(n);
    for ps in &raw_parents {
        let mut ids = Vec::new();
        for p in ps {
            let id = index.get(p).ok_or_else(|| TypeError::UnknownType(p.clone()))?;
            ids.push(id.index());
        }
        parents.push(ids);
    }
    for (t, ps) in parents.iter().enumerate() {
        if t != bottom.index() && ps.is_empty() {
            return Err(TypeError::NoUniqueBottom);
        }
    }

    let ancestors = close_order(&names, &parents)?;
    let mut leq = vec![false; n * n];
    for (t, anc) in ancestors.iter().enumerate() {
        for &a in anc {
            leq[a * n + t] = true;
        }
    }
    if (0..n).any(|t| !leq[bottom.index() * n + t]) {
        return Err(TypeError::NoUniqueBottom);
    }

    let mut join = vec![None; n * n];
    for i in 0..n {
        for j in i..n {
            let ubs: Vec<usize> = (0..n).filter(|&u| leq[i * n + u] && leq[j * n + u]).collect();
            if ubs.is_empty() {
                continue;
            }
            let least = ubs.iter().copied().find(|&u| ubs.iter().all(|&v| leq[u * n + v]));
            match least {
                Some(l) => {
                    join[i * n + j] = Some(TypeId(l as u32));
                    join[j * n + i] = Some(TypeId(l as u32));
                }
                None => return Err(TypeError::NotBoundedComplete(names[i].clone(), names[j].clone())),
            }
        }
    }

    let hierarchy = TypeHierarchy {
        names,
        index,
        bottom,
        leq,
        join,
    };

    // features
    let mut feat_names: Vec<String> = Vec::new();
    let mut feat_index: HashMap<String, FeatId> = HashMap::new();
    let mut declared: Vec<(TypeId, FeatId, TypeId)> = Vec::new();
    for d in decls {
        if let Decl::Approp { ty, feat, value } = d {
            if RESERVED_FEATURES.contains(&feat.as_str()) {
                return Err(TypeError::ReservedName(feat.clone()));
            }
            let t = hierarchy.resolve(ty)?;
            let v = hierarchy.resolve(value)?;
            if t.index() >= user_types {
                return Err(TypeError::ReservedName(ty.clone()));
            }
            if v.index() >= user_types {
                return Err(TypeError::ReservedName(value.clone()));
            }
            let f = *feat_index.entry(feat.clone()).or_insert_with(|| {
                feat_names.push(feat.clone());
                FeatId(feat_names.len() as u32 - 1)
            });
            if let Some(&(_, _, old)) = declared.iter().find(|(dt, df, _)| *dt == t && *df == f) {
                if old != v {
                    return Err(TypeError::ConflictingApprop(ty.clone(), feat.clone()));
                }
                continue;
            }
            declared.push((t, f, v));
        }
    }
    let user_features = feat_names.len();
    let mut sys_feat = |name: &str| {
        feat_names.push(name.to_string());
        let id = FeatId(feat_names.len() as u32 - 1);
        feat_index.insert(name.to_string(), id);
        id
    };
    let lhs = sys_feat("LHS");
    let rec = sys_feat("REC");
    let rhs = sys_feat("RHS");
    let store = sys_feat("STORE");
    let dtrs = sys_feat("DTRS");
    let hd = sys_feat("HD");
    let tl = sys_feat("TL");
    let live = sys_feat("LIVE");
    let snap = sys_feat("SNAP");
    let elt = sys_feat("ELT");
    let rest = sys_feat("REST");

    let ty = |name: &str| hierarchy.lookup(name).expect("system type");
    let sys = SystemLayer {
        rule: ty("rule"),
        elist: ty("elist"),
        nelist: ty("nelist"),
        pair: ty("pair"),
        eset: ty("eset"),
        neset: ty("neset"),
        start: ty("***"),
        lhs,
        rec,
        rhs,
        store,
        dtrs,
        hd,
        tl,
        live,
        snap,
        elt,
        rest,
        user_types,
        user_features,
    };

    let table = close_approp(&hierarchy, &declared, &feat_names, user_types)?;
    let mut table = table;
    for f in [lhs, rec, rhs, store, dtrs] {
        table.insert((sys.rule, f), bottom);
    }
    for f in [hd, tl] {
        table.insert((sys.nelist, f), bottom);
    }
    for f in [elt, rest] {
        table.insert((sys.neset, f), bottom);
    }
    for f in [live, snap] {
        table.insert((sys.pair, f), bottom);
    }

    let approp = Appropriateness {
        feat_names,
        feat_index,
        table,
        declared,
    };

    let mut raise = HashMap::new();
    for t in hierarchy.types() {
        for f in approp.features() {
            if approp.approp(t, f).is_some() {
                continue;
            }
            let cands: Vec<TypeId> = hierarchy
                .types()
                .filter(|&u| hierarchy.subsumes(t, u) && approp.approp(u, f).is_some())
                .collect();
            let least = cands
                .iter()
                .copied()
                .find(|&u| cands.iter().all(|&v| hierarchy.subsumes(u, v)));
            raise.insert((t, f), least);
        }
    }

    Ok(Signature {
        hierarchy,
        approp,
        sys,
        raise,
    })
}

/// Reflexive-transitive closure of the parent relation; each entry lists all
/// types below-or-equal to the index type.
fn close_order(names: &[String], parents: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, TypeError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = names.len();
    let mut marks = vec![Mark::New; n];
    let mut anc: Vec<Vec<usize>> = vec![Vec::new(); n];

    fn visit(
        t: usize,
        names: &[String],
        parents: &[Vec<usize>],
        marks: &mut [Mark],
        anc: &mut [Vec<usize>],
    ) -> Result<(), TypeError> {
        match marks[t] {
            Mark::Done => return Ok(()),
            Mark::Active => return Err(TypeError::CycleInOrder(names[t].clone())),
            Mark::New => {}
        }
        marks[t] = Mark::Active;
        let mut set = vec![t];
        for &p in &parents[t] {
            visit(p, names, parents, marks, anc)?;
            set.extend(anc[p].iter().copied());
        }
        set.sort_unstable();
        set.dedup();
        anc[t] = set;
        marks[t] = Mark::Done;
        Ok(())
    }

    for t in 0..n {
        visit(t, names, parents, &mut marks, &mut anc)?;
    }
    Ok(anc)
}

fn close_approp(
    h: &TypeHierarchy,
    declared: &[(TypeId, FeatId, TypeId)],
    feat_names: &[String],
    user_types: usize,
) -> Result<HashMap<(TypeId, FeatId), TypeId>, TypeError> {
    let mut table = HashMap::new();
    // bottom-up: a type has strictly more types below it than any type it is above
    let mut order: Vec<TypeId> = (0..user_types as u32).map(TypeId).collect();
    let below = |t: TypeId| (0..h.len() as u32).filter(|&u| h.subsumes(TypeId(u), t)).count();
    order.sort_by_key(|&t| below(t));

    let n_feats = declared.iter().map(|d| d.1.index() + 1).max().unwrap_or(0);
    for f in (0..n_feats as u32).map(FeatId) {
        let fname = &feat_names[f.index()];
        for &t in &order {
            let mut inherited: Option<TypeId> = None;
            for u in order.iter().copied() {
                if u == t || !h.subsumes(u, t) {
                    continue;
                }
                if let Some(&v) = table.get(&(u, f)) {
                    inherited =
                        match inherited {
                            None => Some(v),
                            Some(w) => Some(h.join(w, v).ok_or_else(|| {
                                TypeError::ApproprNotUpwardClosed(h.name(t).to_string(), fname.clone())
                            })?),
                        };
                }
            }
            let own = declared.iter().find(|(dt, df, _)| *dt == t && *df == f).map(|d| d.2);
            match (own, inherited) {
                (Some(v), Some(w)) => {
                    if !h.subsumes(w, v) {
                        return Err(TypeError::ApproprNotUpwardClosed(h.name(t).to_string(), fname.clone()));
                    }
                    table.insert((t, f), v);
                }
                (Some(v), None) | (None, Some(v)) => {
                    table.insert((t, f), v);
                }
                (None, None) => {}
            }
        }
    }
    Ok(table)
}
