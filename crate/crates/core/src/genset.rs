//! Named generating sets, relation replay, membership certificates, pair
//! order tables and finite-closure checks.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{AutError, Automorphism, Order};
use crate::fixture::{Fixture, FixtureError};
use crate::group_word::{GroupWord, GroupWordError};

const AUT_FIXTURE: &str = include_str!("../fixtures/aut_generation.fix");
const SAUT_FIXTURE: &str = include_str!("../fixtures/saut_generation.fix");

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GensetError {
    #[error("{set} needs rank at least {min}, got {rank}")]
    RankTooSmall {
        set: String,
        rank: usize,
        min: usize,
    },
    #[error("unknown generating set `{0}`")]
    UnknownSet(String),
    #[error("relation `{label}` failed")]
    RelationFailed { label: String },
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Word(#[from] GroupWordError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenSetName {
    Y1,
    Y2,
    Y3,
    Y4,
    YPrime,
}

impl GenSetName {
    pub fn min_rank(self) -> usize {
        match self {
            GenSetName::Y1 | GenSetName::Y3 => 3,
            GenSetName::Y2 | GenSetName::Y4 | GenSetName::YPrime => 4,
        }
    }
}

impl fmt::Display for GenSetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GenSetName::Y1 => "Y1",
            GenSetName::Y2 => "Y2",
            GenSetName::Y3 => "Y3",
            GenSetName::Y4 => "Y4",
            GenSetName::YPrime => "Yprime",
        };
        f.write_str(s)
    }
}

impl FromStr for GenSetName {
    type Err = GensetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "y1" => Ok(GenSetName::Y1),
            "y2" => Ok(GenSetName::Y2),
            "y3" => Ok(GenSetName::Y3),
            "y4" => Ok(GenSetName::Y4),
            "yprime" | "y'" => Ok(GenSetName::YPrime),
            _ => Err(GensetError::UnknownSet(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenElement {
    pub name: String,
    pub word: GroupWord,
    pub aut: Automorphism,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSet {
    pub name: String,
    pub rank: usize,
    pub elements: Vec<GenElement>,
}

fn element(name: String, text: &str, rank: usize) -> Result<GenElement, GensetError> {
    let word = GroupWord::parse(text, rank)?;
    let aut = word.evaluate(rank)?;
    Ok(GenElement { name, word, aut })
}

pub fn builtin_genset(which: GenSetName, n: usize) -> Result<GenSet, GensetError> {
    if n < which.min_rank() {
        return Err(GensetError::RankTooSmall {
            set: which.to_string(),
            rank: n,
            min: which.min_rank(),
        });
    }
    let mut entries: Vec<(String, String)> = Vec::new();
    let mut push = |name: String, text: String| entries.push((name, text));
    match which {
        GenSetName::Y1 => {
            push("rho(1,2)".into(), "rho(1,2)".into());
            push("e(1)".into(), "e(1)".into());
            push("t(1,2)".into(), "t(1,2)".into());
            push("cyc".into(), "cyc".into());
        }
        GenSetName::Y2 => {
            push("(x1,x2)e1e2".into(), "t(1,2)*e(1)*e(2)".into());
            push("(x2,x3)e1".into(), "t(2,3)*e(1)".into());
            for i in 3..n {
                push(format!("(x{},x{})", i, i + 1), format!("t({},{})", i, i + 1));
            }
            push("e2rho12".into(), "e(2)*rho(1,2)".into());
            push(format!("e{n}"), format!("e({n})"));
        }
        GenSetName::Y3 => {
            for i in 1..n {
                push(format!("rho({},{})", i, i + 1), format!("rho({},{})", i, i + 1));
            }
            push(format!("rho({n},1)"), format!("rho({n},1)"));
            for i in 1..n {
                push(format!("lam({},{})", i, i + 1), format!("lam({},{})", i, i + 1));
            }
            push(format!("lam({n},1)"), format!("lam({n},1)"));
        }
        GenSetName::Y4 | GenSetName::YPrime => {
            push("(x1,x2)e1e2e3".into(), "t(1,2)*e(1)*e(2)*e(3)".into());
            push("(x2,x3)e1".into(), "t(2,3)*e(1)".into());
            for i in 3..n {
                let flip = if which == GenSetName::Y4 { i } else { 3 };
                push(
                    format!("(x{},x{})e{}", i, i + 1, flip),
                    format!("t({},{})*e({})", i, i + 1, flip),
                );
            }
            push("e2e4rho12".into(), "e(2)*e(4)*rho(1,2)".into());
            push("e3e4".into(), "e(3)*e(4)".into());
        }
    }
    let elements = entries
        .into_iter()
        .map(|(name, text)| element(name, &text, n))
        .collect::<Result<_, _>>()?;
    Ok(GenSet {
        name: which.to_string(),
        rank: n,
        elements,
    })
}

impl GenSet {
    pub fn names(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&GenElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    /// The same set with one element removed.
    pub fn without(&self, name: &str) -> GenSet {
        GenSet {
            name: format!("{}-{{{}}}", self.name, name),
            rank: self.rank,
            elements: self
                .elements
                .iter()
                .filter(|e| e.name != name)
                .cloned()
                .collect(),
        }
    }

    pub fn automorphisms(&self) -> Vec<Automorphism> {
        self.elements.iter().map(|e| e.aut.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Failed => "failed",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub label: String,
    pub rank: usize,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
}

/// Compare both sides as automorphisms of `F_rank`.
pub fn verify_relation(lhs: &GroupWord, rhs: &GroupWord, rank: usize) -> Status {
    match (lhs.evaluate(rank), rhs.evaluate(rank)) {
        (Ok(a), Ok(b)) if a == b => Status::Verified,
        _ => Status::Failed,
    }
}

/// The two witness chains shipped as fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chain {
    /// `Aut(F_n)` from `Y2`, certifying `Y1` inside it.
    Aut,
    /// `SAut(F_n)` from `Y4`, certifying `Y3` inside it.
    SAut,
}

impl Chain {
    pub fn min_rank(self) -> usize {
        match self {
            Chain::Aut => 4,
            Chain::SAut => 5,
        }
    }

    pub fn ambient(self) -> GenSetName {
        match self {
            Chain::Aut => GenSetName::Y2,
            Chain::SAut => GenSetName::Y4,
        }
    }

    pub fn target(self) -> GenSetName {
        match self {
            Chain::Aut => GenSetName::Y1,
            Chain::SAut => GenSetName::Y3,
        }
    }

    pub fn fixture_text(self) -> &'static str {
        match self {
            Chain::Aut => AUT_FIXTURE,
            Chain::SAut => SAUT_FIXTURE,
        }
    }

    pub fn fixture(self) -> Result<Fixture, GensetError> {
        Ok(Fixture::parse(self.fixture_text())?)
    }

    fn check_rank(self, n: usize) -> Result<(), GensetError> {
        if n < self.min_rank() {
            return Err(GensetError::RankTooSmall {
                set: self.ambient().to_string(),
                rank: n,
                min: self.min_rank(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chain::Aut => "aut",
            Chain::SAut => "saut",
        })
    }
}

/// Evaluate every fixture relation at rank `n`, keeping failures as records.
pub fn replay_records(chain: Chain, n: usize) -> Result<Vec<RelationRecord>, GensetError> {
    chain.check_rank(n)?;
    Ok(chain
        .fixture()?
        .expand(n)?
        .into_iter()
        .map(|r| RelationRecord {
            status: verify_relation(&r.lhs, &r.rhs, n),
            label: r.label,
            rank: n,
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
        })
        .collect())
}

/// Like [`replay_records`], but the first failing relation is an error.
pub fn replay_proposition(chain: Chain, n: usize) -> Result<Vec<RelationRecord>, GensetError> {
    let records = replay_records(chain, n)?;
    if let Some(bad) = records.iter().find(|r| r.status == Status::Failed) {
        return Err(GensetError::RelationFailed {
            label: bad.label.clone(),
        });
    }
    Ok(records)
}

/// A word over the elements of a generating set: `(index, inverted)` pairs
/// read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness(pub Vec<(usize, bool)>);

impl Witness {
    pub fn inverse(&self) -> Witness {
        Witness(self.0.iter().rev().map(|&(k, inv)| (k, !inv)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self, set: &GenSet) -> Result<Automorphism, GensetError> {
        let mut acc = Automorphism::identity(set.rank);
        for &(k, inv) in &self.0 {
            let a = &set.elements[k].aut;
            let f = if inv { a.inverse()? } else { a.clone() };
            acc = acc.compose(&f)?;
        }
        Ok(acc)
    }

    pub fn render(&self, set: &GenSet) -> String {
        if self.0.is_empty() {
            return "id".into();
        }
        self.0
            .iter()
            .map(|&(k, inv)| {
                let name = &set.elements[k].name;
                if inv {
                    format!("[{name}]^-1")
                } else {
                    format!("[{name}]")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipStep {
    pub label: String,
    pub status: Status,
    pub witness_length: usize,
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub ambient: GenSet,
    pub steps: Vec<MembershipStep>,
    known: HashMap<Automorphism, Witness>,
}

impl MembershipReport {
    /// Witness for `a` over the ambient set, if `a` was certified (directly
    /// or as an inverse).
    pub fn witness_for(&self, a: &Automorphism) -> Option<Witness> {
        if let Some(w) = self.known.get(a) {
            return Some(w.clone());
        }
        let inv = a.inverse().ok()?;
        self.known.get(&inv).map(Witness::inverse)
    }

    pub fn all_certified(&self) -> bool {
        self.steps.iter().all(|s| s.status == Status::Verified)
    }
}

/// Certify every membership line of the chain at rank `n`. A line counts
/// when it verifies as a relation and each braced factor is an ambient
/// element, an element certified on another line, or an inverse of one.
/// Lines are revisited until nothing changes.
pub fn certify_memberships(chain: Chain, n: usize) -> Result<MembershipReport, GensetError> {
    chain.check_rank(n)?;
    let ambient = builtin_genset(chain.ambient(), n)?;
    let relations = chain.fixture()?.expand(n)?;
    let mut report = MembershipReport {
        known: HashMap::new(),
        steps: Vec::new(),
        ambient,
    };
    for (k, e) in report.ambient.elements.iter().enumerate() {
        report
            .known
            .entry(e.aut.clone())
            .or_insert_with(|| Witness(vec![(k, false)]));
    }
    let pending: Vec<_> = relations
        .into_iter()
        .filter(|r| r.rhs.is_membership_chain())
        .collect();
    let mut done: BTreeMap<usize, usize> = BTreeMap::new();
    loop {
        let mut progress = false;
        for (idx, r) in pending.iter().enumerate() {
            if done.contains_key(&idx) || verify_relation(&r.lhs, &r.rhs, n) != Status::Verified {
                continue;
            }
            let mut witness = Vec::new();
            let mut complete = true;
            for part in r.rhs.braced_parts() {
                match report.witness_for(&part.evaluate(n)?) {
                    Some(w) => witness.extend(w.0),
                    None => {
                        complete = false;
                        break;
                    }
                }
            }
            if complete {
                let lhs = r.lhs.evaluate(n)?;
                done.insert(idx, witness.len());
                report.known.entry(lhs).or_insert(Witness(witness));
                progress = true;
            }
        }
        if !progress {
            break;
        }
    }
    report.steps = pending
        .iter()
        .enumerate()
        .map(|(idx, r)| MembershipStep {
            label: r.label.clone(),
            status: if done.contains_key(&idx) {
                Status::Verified
            } else {
                Status::Failed
            },
            witness_length: done.get(&idx).copied().unwrap_or(0),
        })
        .collect();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationEntry {
    pub element: String,
    pub status: Status,
    pub witness: Option<String>,
    pub witness_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub target: String,
    pub ambient: String,
    pub rank: usize,
    pub entries: Vec<GenerationEntry>,
}

impl GenerationReport {
    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.status == Status::Verified)
    }
}

/// Evaluate each witness over `ambient` and compare with the target element
/// of the same name.
pub fn certify_generation(
    target: &GenSet,
    ambient: &GenSet,
    witnesses: &BTreeMap<String, Witness>,
) -> Result<GenerationReport, GensetError> {
    let mut entries = Vec::new();
    for e in &target.elements {
        let entry = match witnesses.get(&e.name) {
            Some(w) => {
                let ok = w.evaluate(ambient)? == e.aut;
                GenerationEntry {
                    element: e.name.clone(),
                    status: if ok { Status::Verified } else { Status::Failed },
                    witness: Some(w.render(ambient)),
                    witness_length: w.len(),
                }
            }
            None => GenerationEntry {
                element: e.name.clone(),
                status: Status::Failed,
                witness: None,
                witness_length: 0,
            },
        };
        entries.push(entry);
    }
    Ok(GenerationReport {
        target: target.name.clone(),
        ambient: ambient.name.clone(),
        rank: target.rank,
        entries,
    })
}

/// Witnesses for the chain's target set, assembled from the fixture.
pub fn chain_witnesses(
    chain: Chain,
    n: usize,
) -> Result<(GenSet, GenSet, BTreeMap<String, Witness>), GensetError> {
    let report = certify_memberships(chain, n)?;
    let target = builtin_genset(chain.target(), n)?;
    let witnesses = target
        .elements
        .iter()
        .filter_map(|e| report.witness_for(&e.aut).map(|w| (e.name.clone(), w)))
        .collect();
    Ok((target, report.ambient, witnesses))
}

/// Certify the chain's target set inside the ambient set at rank `n`.
pub fn certify_chain_generation(chain: Chain, n: usize) -> Result<GenerationReport, GensetError> {
    let (target, ambient, witnesses) = chain_witnesses(chain, n)?;
    certify_generation(&target, &ambient, &witnesses)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTable {
    pub set: String,
    pub rank: usize,
    pub names: Vec<String>,
    /// `orders[i][j]` is the order of `f_i f_j`; the diagonal holds `ord(f_i)`.
    pub orders: Vec<Vec<Order>>,
    pub commute: Vec<Vec<bool>>,
}

impl PairTable {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn order_of(&self, a: &str, b: &str) -> Option<Order> {
        Some(self.orders[self.index(a)?][self.index(b)?])
    }

    /// Non-commuting pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.names.len();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.commute[i][j])
            .collect()
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges()
            .into_iter()
            .map(|(i, j)| (self.names[i].clone(), self.names[j].clone()))
            .collect()
    }

    pub fn neighbours(&self, name: &str) -> Vec<String> {
        let Some(i) = self.index(name) else {
            return Vec::new();
        };
        (0..self.names.len())
            .filter(|&j| j != i && !self.commute[i][j])
            .map(|j| self.names[j].clone())
            .collect()
    }

    /// Cells whose order search hit the cutoff.
    pub fn cutoff_cells(&self) -> Vec<(usize, usize)> {
        let k = self.names.len();
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .filter(|&(i, j)| self.orders[i][j].finite().is_none())
            .collect()
    }

    /// Graph in DOT form: one vertex per element, one edge per
    /// non-commuting pair labelled with the order of the product.
    pub fn to_dot(&self) -> String {
        let mut out = format!("graph \"{} n={}\" {{\n", self.set, self.rank);
        for name in &self.names {
            out.push_str(&format!("  \"{name}\";\n"));
        }
        for (i, j) in self.edges() {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\" [label=\"{}\"];\n",
                self.names[i], self.names[j], self.orders[i][j]
            ));
        }
        out.push_str("}\n");
        out
    }
}

pub fn pair_order_table(set: &GenSet, cutoff: u32) -> Result<PairTable, GensetError> {
    let k = set.elements.len();
    let mut orders = vec![vec![Order::Finite(1); k]; k];
    let mut commute = vec![vec![true; k]; k];
    for i in 0..k {
        let a = &set.elements[i].aut;
        orders[i][i] = a.order(cutoff);
        for j in 0..k {
            if i != j {
                let b = &set.elements[j].aut;
                orders[i][j] = a.compose(b)?.order(cutoff);
                commute[i][j] = a.commutes_with(b)?;
            }
        }
    }
    Ok(PairTable {
        set: set.name.clone(),
        rank: set.rank,
        names: set.elements.iter().map(|e| e.name.clone()).collect(),
        orders,
        commute,
    })
}

/// An edge of a drawn diagram, with its drawn label if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawnEdge {
    pub a: String,
    pub b: String,
    pub label: Option<u32>,
}

fn drawn(a: &str, b: &str, label: Option<u32>) -> DrawnEdge {
    DrawnEdge {
        a: a.to_string(),
        b: b.to_string(),
        label,
    }
}

fn swap_name(i: usize) -> String {
    format!("(x{},x{})", i, i + 1)
}

/// Edges of the Coxeter diagram of `Y2` as drawn, instantiated at rank `n`.
/// Unlabelled edges carry the Coxeter default 3.
pub fn figure_y2_edges(n: usize) -> Vec<DrawnEdge> {
    let mut edges = vec![
        drawn("e2rho12", "(x2,x3)e1", Some(4)),
        drawn("e2rho12", "(x1,x2)e1e2", None),
        drawn("(x1,x2)e1e2", "(x2,x3)e1", Some(6)),
        drawn("(x2,x3)e1", "(x3,x4)", Some(6)),
    ];
    for i in 3..n - 1 {
        edges.push(drawn(&swap_name(i), &swap_name(i + 1), None));
    }
    edges.push(drawn(&swap_name(n - 1), &format!("e{n}"), Some(4)));
    edges
}

fn swap_flip_name(i: usize) -> String {
    format!("(x{},x{})e{}", i, i + 1, i)
}

/// Edges of the commutation graph of `Y4` exactly as drawn (segment by
/// segment), instantiated at rank `n`.
pub fn figure_y4_edges(n: usize) -> Vec<DrawnEdge> {
    let mut edges = vec![
        drawn("(x2,x3)e1", "e3e4", None),
        drawn("e3e4", "(x4,x5)e4", None),
        drawn("e2e4rho12", "(x4,x5)e4", None),
        drawn("(x2,x3)e1", "e2e4rho12", None),
        drawn("(x2,x3)e1", "(x3,x4)e3", None),
        drawn("(x3,x4)e3", "(x4,x5)e4", None),
        drawn("e2e4rho12", "(x3,x4)e3", None),
        drawn("(x2,x3)e1", "(x1,x2)e1e2e3", None),
        drawn("e2e4rho12", "(x1,x2)e1e2e3", None),
    ];
    for i in 4..n - 1 {
        edges.push(drawn(&swap_flip_name(i), &swap_flip_name(i + 1), None));
    }
    edges
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureComparison {
    /// Drawn edges whose endpoints commute.
    pub missing: Vec<(String, String)>,
    /// Non-commuting pairs with no drawn edge.
    pub extra: Vec<(String, String)>,
    /// Drawn labels that disagree with the computed product order.
    pub label_mismatches: Vec<(String, String, u32, Order)>,
    pub unknown_vertices: Vec<String>,
}

impl FigureComparison {
    pub fn matches(&self) -> bool {
        self.missing.is_empty()
            && self.extra.is_empty()
            && self.label_mismatches.is_empty()
            && self.unknown_vertices.is_empty()
    }
}

/// Compare a computed table with a drawn diagram. `default_label` is the
/// order implied by an unlabelled edge, when the diagram has that convention.
pub fn compare_with_figure(
    table: &PairTable,
    figure: &[DrawnEdge],
    default_label: Option<u32>,
) -> FigureComparison {
    let mut cmp = FigureComparison {
        missing: Vec::new(),
        extra: Vec::new(),
        label_mismatches: Vec::new(),
        unknown_vertices: Vec::new(),
    };
    let mut drawn_pairs = HashSet::new();
    for e in figure {
        let (Some(i), Some(j)) = (table.index(&e.a), table.index(&e.b)) else {
            for v in [&e.a, &e.b] {
                if table.index(v).is_none() && !cmp.unknown_vertices.contains(v) {
                    cmp.unknown_vertices.push(v.clone());
                }
            }
            continue;
        };
        drawn_pairs.insert((i.min(j), i.max(j)));
        if table.commute[i][j] {
            cmp.missing.push((e.a.clone(), e.b.clone()));
        }
        if let Some(label) = e.label.or(default_label) {
            let order = table.orders[i][j];
            if order != Order::Finite(label) {
                cmp.label_mismatches
                    .push((e.a.clone(), e.b.clone(), label, order));
            }
        }
    }
    for (i, j) in table.edges() {
        if !drawn_pairs.contains(&(i, j)) {
            cmp.extra
                .push((table.names[i].clone(), table.names[j].clone()));
        }
    }
    cmp
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    Finite(usize),
    CapExceeded(usize),
}

impl Closure {
    pub fn order(self) -> Option<usize> {
        match self {
            Closure::Finite(k) => Some(k),
            Closure::CapExceeded(_) => None,
        }
    }
}

/// Breadth-first enumeration of the group generated by `gens`. Finite
/// groups are closed under right multiplication by generators alone.
pub fn finite_closure(gens: &[Automorphism], rank: usize, cap: usize) -> Result<Closure, GensetError> {
    let identity = Automorphism::identity(rank);
    let mut seen: HashSet<Automorphism> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g)?;
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Ok(Closure::CapExceeded(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(Closure::Finite(seen.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FinitenessCertificate {
    /// Two distinct involutions whose product has order `m`: dihedral of
    /// order `2m`.
    Dihedral { order: u32 },
    /// Every generator permutes the basis up to sign, so the group embeds in
    /// the hyperoctahedral group of order `2^n n!`.
    SignedPermutation { order: Option<usize> },
    /// Exhaustive enumeration.
    Closure { order: usize },
    Uncertified,
}

impl FinitenessCertificate {
    pub fn is_certified(self) -> bool {
        !matches!(self, FinitenessCertificate::Uncertified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    pub a: String,
    pub b: String,
    pub certificate: FinitenessCertificate,
}

pub fn certify_pair(
    a: &Automorphism,
    b: &Automorphism,
    cutoff: u32,
    cap: usize,
) -> Result<FinitenessCertificate, GensetError> {
    let rank = a.rank();
    let involution = |x: &Automorphism| x.order(2) == Order::Finite(2);
    if a != b && involution(a) && involution(b) {
        if let Some(m) = a.compose(b)?.order(cutoff).finite() {
            return Ok(FinitenessCertificate::Dihedral { order: 2 * m });
        }
    }
    let gens = [a.clone(), b.clone()];
    if a.is_signed_permutation() && b.is_signed_permutation() {
        let order = finite_closure(&gens, rank, cap)?.order();
        return Ok(FinitenessCertificate::SignedPermutation { order });
    }
    Ok(match finite_closure(&gens, rank, cap)? {
        Closure::Finite(order) => FinitenessCertificate::Closure { order },
        Closure::CapExceeded(_) => FinitenessCertificate::Uncertified,
    })
}

/// Certificate for every 2-element subset of `set`.
pub fn certify_pairwise_finite(
    set: &GenSet,
    cutoff: u32,
    cap: usize,
) -> Result<Vec<PairCertificate>, GensetError> {
    let mut out = Vec::new();
    for (i, a) in set.elements.iter().enumerate() {
        for b in &set.elements[i + 1..] {
            out.push(PairCertificate {
                a: a.name.clone(),
                b: b.name.clone(),
                certificate: certify_pair(&a.aut, &b.aut, cutoff, cap)?,
            });
        }
    }
    Ok(out)
}

/// Finiteness certificate for the group generated by a whole set: the
/// signed-permutation embedding when it applies, plus exact enumeration
/// under `cap` when that terminates.
pub fn certify_set_finite(set: &GenSet, cap: usize) -> Result<FinitenessCertificate, GensetError> {
    let gens = set.automorphisms();
    let closure = finite_closure(&gens, set.rank, cap)?;
    if gens.iter().all(Automorphism::is_signed_permutation) {
        return Ok(FinitenessCertificate::SignedPermutation {
            order: closure.order(),
        });
    }
    Ok(match closure {
        Closure::Finite(order) => FinitenessCertificate::Closure { order },
        Closure::CapExceeded(_) => FinitenessCertificate::Uncertified,
    })
}

/// `2^n n!`, the order of the signed permutation group.
pub fn hyperoctahedral_order(n: usize) -> u128 {
    (1..=n as u128).product::<u128>() << n
}

/// Names used for the distinguished elements of `Y2` and `Y4`.
pub const Y2_NIELSEN: &str = "e2rho12";
pub const Y4_NIELSEN: &str = "e2e4rho12";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::AtomicName;

    fn set(which: GenSetName, n: usize) -> GenSet {
        builtin_genset(which, n).unwrap()
    }

    #[test]
    fn builtin_sets() {
        assert_eq!(
            set(GenSetName::Y2, 5).names(),
            vec!["(x1,x2)e1e2", "(x2,x3)e1", "(x3,x4)", "(x4,x5)", "e2rho12", "e5"]
        );
        assert_eq!(
            set(GenSetName::Y4, 5).names(),
            vec![
                "(x1,x2)e1e2e3",
                "(x2,x3)e1",
                "(x3,x4)e3",
                "(x4,x5)e4",
                "e2e4rho12",
                "e3e4"
            ]
        );
        assert_eq!(set(GenSetName::Y1, 4).names(), vec!["rho(1,2)", "e(1)", "t(1,2)", "cyc"]);
        assert_eq!(set(GenSetName::Y3, 4).elements.len(), 8);
        assert_eq!(set(GenSetName::YPrime, 6).names()[4], "(x5,x6)e3");
        assert!(matches!(
            builtin_genset(GenSetName::Y2, 3),
            Err(GensetError::RankTooSmall { .. })
        ));
        assert!(builtin_genset(GenSetName::Y1, 2).is_err());
    }

    #[test]
    fn y2_has_n_plus_one_elements() {
        for n in 4..=9 {
            assert_eq!(set(GenSetName::Y2, n).elements.len(), n + 1);
            assert_eq!(set(GenSetName::Y4, n).elements.len(), n + 1);
        }
    }

    #[test]
    fn verify_relation_examples() {
        let p = |s: &str, n| GroupWord::parse(s, n).unwrap();
        assert_eq!(
            verify_relation(&p("e(1)*e(2)*rho(1,2)*e(2)*e(1)", 4), &p("lam(1,2)", 4), 4),
            Status::Verified
        );
        assert_eq!(
            verify_relation(&p("t(2,n)", 6), &p("t(2,3)*e(1)*t(3,n)*t(2,3)*e(1)", 6), 6),
            Status::Verified
        );
        assert_eq!(verify_relation(&p("t(1,2)^2", 4), &p("id", 4), 4), Status::Verified);
        assert_eq!(verify_relation(&p("rho(1,2)", 4), &p("lam(1,2)", 4), 4), Status::Failed);
    }

    #[test]
    fn replay_rejects_small_ranks() {
        assert!(matches!(
            replay_records(Chain::Aut, 3),
            Err(GensetError::RankTooSmall { .. })
        ));
        assert!(replay_records(Chain::SAut, 4).is_err());
    }

    #[test]
    fn replay_both_chains() {
        for n in [4, 5, 6, 7] {
            let recs = replay_proposition(Chain::Aut, n).unwrap();
            assert!(recs.iter().any(|r| r.label == "aut/flip-2"));
        }
        for n in [5, 6, 9, 10] {
            let recs = replay_proposition(Chain::SAut, n).unwrap();
            let chain = if n % 2 == 1 { "saut/chain-odd" } else { "saut/chain-even" };
            assert!(recs.iter().any(|r| r.label == chain));
        }
    }

    // With the swap pair on the right acting first, the conjugate of
    // rho(i,i+1) is rho(i+2,i), so the ladder needs the other order.
    #[test]
    fn ladder_conjugator_order() {
        for n in [5, 6, 9, 10] {
            let p = |s: String| GroupWord::parse(&s, n).unwrap();
            for i in 1..=n - 2 {
                let (a, b) = (i + 1, i + 2);
                let right_first = p(format!("t({a},{b})*t({i},{a})*rho({i},{a})*t({i},{a})*t({a},{b})"));
                let left_first = p(format!("t({i},{a})*t({a},{b})*rho({i},{a})*t({a},{b})*t({i},{a})"));
                assert_eq!(verify_relation(&right_first, &p(format!("rho({a},{b})")), n), Status::Failed);
                assert_eq!(verify_relation(&right_first, &p(format!("rho({b},{i})")), n), Status::Verified);
                assert_eq!(verify_relation(&left_first, &p(format!("rho({a},{b})")), n), Status::Verified);
            }
        }
    }

    #[test]
    fn memberships_certify() {
        for n in [4, 5, 8] {
            assert!(certify_memberships(Chain::Aut, n).unwrap().all_certified());
        }
        for n in [5, 6, 9, 10] {
            let r = certify_memberships(Chain::SAut, n).unwrap();
            let bad: Vec<_> = r.steps.iter().filter(|s| s.status != Status::Verified).collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn generation_from_fixture_witnesses() {
        for n in [4, 5, 6] {
            assert!(certify_chain_generation(Chain::Aut, n).unwrap().all_certified());
        }
        for n in [5, 6, 7] {
            assert!(certify_chain_generation(Chain::SAut, n).unwrap().all_certified());
        }
    }

    #[test]
    fn generation_rejects_wrong_witness() {
        let (target, ambient, mut w) = chain_witnesses(Chain::Aut, 4).unwrap();
        let swapped = w["e(1)"].clone();
        w.insert("t(1,2)".into(), swapped);
        w.remove("cyc");
        let report = certify_generation(&target, &ambient, &w).unwrap();
        let status = |name: &str| report.entries.iter().find(|e| e.element == name).unwrap().status;
        assert_eq!(status("t(1,2)"), Status::Failed);
        assert_eq!(status("cyc"), Status::Failed);
        assert_eq!(status("e(1)"), Status::Verified);
    }

    #[test]
    fn e1_witness_matches_the_short_chain() {
        let (_, ambient, w) = chain_witnesses(Chain::Aut, 4).unwrap();
        assert_eq!(
            w["e(1)"].evaluate(&ambient).unwrap(),
            Automorphism::atomic(AtomicName::Flip(1), 4).unwrap()
        );
    }

    #[test]
    fn y2_pair_orders_at_rank_8() {
        let t = pair_order_table(&set(GenSetName::Y2, 8), 64).unwrap();
        let ord = |a, b| t.order_of(a, b).unwrap();
        assert_eq!(ord("e2rho12", "(x2,x3)e1"), Order::Finite(4));
        assert_eq!(ord("(x1,x2)e1e2", "(x2,x3)e1"), Order::Finite(6));
        assert_eq!(ord("(x2,x3)e1", "(x3,x4)"), Order::Finite(6));
        assert_eq!(ord("(x7,x8)", "e8"), Order::Finite(4));
        assert_eq!(ord("e2rho12", "(x1,x2)e1e2"), Order::Finite(3));
        assert_eq!(ord("(x3,x4)", "(x5,x6)"), Order::Finite(2));
        assert!(t.commute[t.index("(x3,x4)").unwrap()][t.index("(x5,x6)").unwrap()]);
        let cmp = compare_with_figure(&t, &figure_y2_edges(8), Some(3));
        assert!(cmp.matches(), "{cmp:?}");
    }

    #[test]
    fn pair_orders_are_symmetric() {
        for which in [GenSetName::Y2, GenSetName::Y4] {
            let t = pair_order_table(&set(which, 7), 64).unwrap();
            for i in 0..t.names.len() {
                for j in 0..t.names.len() {
                    assert_eq!(t.orders[i][j], t.orders[j][i]);
                    assert_eq!(t.commute[i][j], t.commute[j][i]);
                }
            }
        }
    }

    #[test]
    fn y4_neighbours_of_the_nielsen_element() {
        let t = pair_order_table(&set(GenSetName::Y4, 9), 64).unwrap();
        let mut nb = t.neighbours(Y4_NIELSEN);
        nb.sort();
        assert_eq!(
            nb,
            vec!["(x1,x2)e1e2e3", "(x2,x3)e1", "(x3,x4)e3", "(x4,x5)e4"]
        );
        let mut e34 = t.neighbours("e3e4");
        e34.sort();
        assert_eq!(e34, vec!["(x2,x3)e1", "(x4,x5)e4"]);
    }

    // The drawing of the Y4 graph has one segment fewer than the computed
    // graph: the extra pair lies on the vertical line through e2e4rho12.
    #[test]
    fn y4_figure_differs_by_one_collinear_edge() {
        let t = pair_order_table(&set(GenSetName::Y4, 9), 64).unwrap();
        let cmp = compare_with_figure(&t, &figure_y4_edges(9), None);
        assert!(cmp.missing.is_empty());
        assert!(cmp.unknown_vertices.is_empty());
        assert_eq!(
            cmp.extra,
            vec![("(x1,x2)e1e2e3".to_string(), "(x3,x4)e3".to_string())]
        );
        assert_eq!(t.edges().len(), 14);
        assert_eq!(figure_y4_edges(9).len(), 13);
    }

    #[test]
    fn dot_output() {
        let t = pair_order_table(&set(GenSetName::Y2, 4), 64).unwrap();
        let dot = t.to_dot();
        assert!(dot.starts_with("graph \"Y2 n=4\" {"));
        assert_eq!(dot.matches(" -- ").count(), t.edges().len());
        assert_eq!(dot.lines().filter(|l| l.ends_with("\";")).count(), 5);
    }

    #[test]
    fn closure_examples() {
        let y2 = set(GenSetName::Y2, 4);
        let t12 = Automorphism::atomic(AtomicName::Transposition(1, 2), 4).unwrap();
        assert_eq!(finite_closure(&[t12], 4, 100).unwrap(), Closure::Finite(2));
        let rest = y2.without(Y2_NIELSEN);
        let order = finite_closure(&rest.automorphisms(), 4, DEFAULT_CLOSURE_CAP)
            .unwrap()
            .order()
            .unwrap();
        assert_eq!(hyperoctahedral_order(4) as usize % order, 0);
        assert_eq!(order, 384);
        let rho = Automorphism::atomic(AtomicName::Rho(1, 2), 4).unwrap();
        assert_eq!(finite_closure(&[rho], 4, 50).unwrap(), Closure::CapExceeded(50));
    }

    #[test]
    fn d4_quotient_pairs() {
        let y4 = set(GenSetName::Y4, 5);
        let r = &y4.get(Y4_NIELSEN).unwrap().aut;
        for name in ["(x3,x4)e3", "(x4,x5)e4"] {
            let y = &y4.get(name).unwrap().aut;
            let k = finite_closure(&[r.clone(), y.clone()], 5, DEFAULT_CLOSURE_CAP)
                .unwrap()
                .order()
                .unwrap();
            assert_eq!(8 % k, 0, "{name}: {k}");
        }
    }

    #[test]
    fn pair_certificates() {
        let y2 = set(GenSetName::Y2, 6);
        let certs = certify_pairwise_finite(&y2, 64, DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(certs.len(), 21);
        assert!(certs.iter().all(|c| c.certificate.is_certified()));
        let find = |a: &str, b: &str| {
            certs
                .iter()
                .find(|c| (c.a == a && c.b == b) || (c.a == b && c.b == a))
                .unwrap()
                .certificate
        };
        assert_eq!(
            find("e2rho12", "(x1,x2)e1e2"),
            FinitenessCertificate::Dihedral { order: 6 }
        );
        assert_eq!(find("(x3,x4)", "e6"), FinitenessCertificate::Dihedral { order: 4 });
        let y4 = set(GenSetName::Y4, 6);
        let certs = certify_pairwise_finite(&y4, 64, DEFAULT_CLOSURE_CAP).unwrap();
        assert!(certs.iter().all(|c| c.certificate.is_certified()));
        let c = certs
            .iter()
            .find(|c| c.a == "(x4,x5)e4" && c.b == "e2e4rho12")
            .unwrap();
        assert!(matches!(c.certificate, FinitenessCertificate::Closure { .. }));
    }

    #[test]
    fn set_finiteness_without_the_nielsen_element() {
        let y2 = set(GenSetName::Y2, 4).without(Y2_NIELSEN);
        assert_eq!(
            certify_set_finite(&y2, DEFAULT_CLOSURE_CAP).unwrap(),
            FinitenessCertificate::SignedPermutation { order: Some(384) }
        );
        for which in [GenSetName::YPrime, GenSetName::Y4] {
            let s = set(which, 5).without(Y4_NIELSEN);
            let cert = certify_set_finite(&s, DEFAULT_CLOSURE_CAP).unwrap();
            let FinitenessCertificate::SignedPermutation { order: Some(k) } = cert else {
                panic!("{which}: {cert:?}");
            };
            assert_eq!(hyperoctahedral_order(5) as usize % k, 0);
        }
        let big = set(GenSetName::Y2, 9).without(Y2_NIELSEN);
        assert_eq!(
            certify_set_finite(&big, 1000).unwrap(),
            FinitenessCertificate::SignedPermutation { order: None }
        );
    }
}
