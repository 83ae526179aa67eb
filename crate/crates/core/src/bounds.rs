//! Dimension-bound arithmetic and the commuting conjugate families behind it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automorphism::{AtomicName, AutError, Automorphism, DEFAULT_ORDER_CUTOFF};
use crate::genset::{builtin_genset, pair_order_table, GenSetName, GensetError, PairTable};

/// Default upper end of the exhaustive implication check.
pub const DEFAULT_IMPLICATION_CAP: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{group} needs n >= {min}, got {n}")]
    RankTooSmall { group: Group, n: u64, min: u64 },
    #[error("rank {n} holds fewer than two blocks of size {block}")]
    InsufficientRank { n: usize, block: usize },
    #[error("k must be at least 2, got {0}")]
    BadK(usize),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error(transparent)]
    Genset(#[from] GensetError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Aut,
    SAut,
}

impl Group {
    pub fn min_rank(self) -> u64 {
        match self {
            Group::Aut => 4,
            Group::SAut => 5,
        }
    }

    /// The rank that enters the floor expressions.
    pub fn effective_rank(self, n: u64) -> u64 {
        match self {
            Group::Aut => n,
            Group::SAut => n - 1,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Aut => "aut",
            Group::SAut => "saut",
        })
    }
}

impl FromStr for Group {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, BoundsError> {
        match s.to_ascii_lowercase().as_str() {
            "aut" => Ok(Group::Aut),
            "saut" => Ok(Group::SAut),
            _ => Err(BoundsError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: u64,
    pub group: Group,
    pub m: u64,
    pub max_d_general: u64,
    pub max_d_simple: u64,
    pub rep_threshold: u64,
}

/// `d < k * floor(m / (k+2))` for every `k` in `2..=d+1`.
pub fn general_condition(m: u64, d: u64) -> bool {
    first_failing_k(m, d).is_none()
}

fn first_failing_k(m: u64, d: u64) -> Option<u64> {
    (2..=d + 1).find(|&k| d >= k * (m / (k + 2)))
}

/// `d < 2 * floor(m/4) - 1`.
pub fn simple_condition(m: u64, d: u64) -> bool {
    d + 1 < 2 * (m / 4)
}

pub fn fa_bounds(n: u64, group: Group) -> Result<BoundReport, BoundsError> {
    if n < group.min_rank() {
        return Err(BoundsError::RankTooSmall {
            group,
            n,
            min: group.min_rank(),
        });
    }
    let m = group.effective_rank(n);
    // Both conditions fail for every d >= m/2, so the searches stop.
    let largest = |ok: &dyn Fn(u64) -> bool| (0..=m).take_while(|&d| ok(d)).last().unwrap_or(0);
    let max_d_general = largest(&|d| general_condition(m, d));
    let max_d_simple = largest(&|d| simple_condition(m, d));
    Ok(BoundReport {
        n,
        group,
        m,
        max_d_general,
        max_d_simple,
        rep_threshold: max_d_simple + 1,
    })
}

pub fn sweep(lo: u64, hi: u64, group: Group) -> Result<Vec<BoundReport>, BoundsError> {
    (lo..=hi).map(|n| fa_bounds(n, group)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: u64,
    pub d: u64,
    pub k: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub lo: u64,
    pub hi: u64,
    /// Number of `(n, d)` pairs examined.
    pub pairs_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl ImplicationReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// For every `n` in `lo..=hi` and every `d` allowed by the simple bound,
/// check the general bound for all `k`. Stops at the first failure.
pub fn verify_simple_implies_general(lo: u64, hi: u64) -> ImplicationReport {
    let mut pairs_checked = 0;
    for n in lo.max(4)..=hi {
        for d in (0..).take_while(|&d| simple_condition(n, d)) {
            pairs_checked += 1;
            if let Some(k) = first_failing_k(n, d) {
                return ImplicationReport {
                    lo,
                    hi,
                    pairs_checked,
                    counterexample: Some(Counterexample { n, d, k }),
                };
            }
        }
    }
    ImplicationReport {
        lo,
        hi,
        pairs_checked,
        counterexample: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Tau,
    Sigma,
}

impl Variant {
    pub fn block(self, k: usize) -> usize {
        match self {
            Variant::Tau => k + 1,
            Variant::Sigma => k + 2,
        }
    }

    /// Names of the `Y2` elements forming the seed family.
    pub fn seed_names(self, k: usize) -> Vec<String> {
        let mut names = vec!["e2rho12".to_string()];
        let last = match self {
            Variant::Tau => {
                names.push("(x1,x2)e1e2".into());
                k
            }
            Variant::Sigma => k + 1,
        };
        names.push("(x2,x3)e1".into());
        names.extend((3..=last).map(|i| format!("(x{},x{})", i, i + 1)));
        names
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Tau => "tau",
            Variant::Sigma => "sigma",
        })
    }
}

impl FromStr for Variant {
    type Err = BoundsError;

    fn from_str(s: &str) -> Result<Self, BoundsError> {
        match s {
            "tau" => Ok(Variant::Tau),
            "sigma" => Ok(Variant::Sigma),
            _ => Err(BoundsError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub n: usize,
    pub k: usize,
    pub variant: Variant,
    pub seed: Vec<String>,
    /// `families[i][j]` is the `j`-th seed element moved into block `i`.
    pub families: Vec<Vec<Automorphism>>,
    pub commutators_checked: usize,
    /// Cross-family pairs `((i, a), (j, b))` that fail to commute.
    pub noncommuting: Vec<((usize, usize), (usize, usize))>,
    /// Whether every element and every in-family product keeps its order.
    pub orders_preserved: bool,
}

impl FamilyReport {
    pub fn verified(&self) -> bool {
        self.noncommuting.is_empty() && self.orders_preserved
    }
}

/// The block permutation `prod_m t(m, block*(i-1)+m)` for `i >= 1`.
pub fn block_permutation(n: usize, block: usize, i: usize) -> Result<Automorphism, BoundsError> {
    let mut acc = Automorphism::identity(n);
    for m in 1..=block {
        let t = Automorphism::atomic(AtomicName::Transposition(m, block * (i - 1) + m), n)?;
        acc = acc.compose(&t)?;
    }
    Ok(acc)
}

/// Move the seed family into each of the `floor(n/block)` disjoint blocks
/// and check that elements from different blocks commute.
pub fn conjugate_families(n: usize, k: usize, variant: Variant) -> Result<FamilyReport, BoundsError> {
    if k < 2 {
        return Err(BoundsError::BadK(k));
    }
    let block = variant.block(k);
    if 2 * block > n {
        return Err(BoundsError::InsufficientRank { n, block });
    }
    let y2 = builtin_genset(GenSetName::Y2, n)?;
    let seed_names = variant.seed_names(k);
    let seed: Vec<Automorphism> = seed_names
        .iter()
        .map(|name| y2.get(name).map(|e| e.aut.clone()).expect("seed names lie in Y2"))
        .collect();
    let mut families = Vec::new();
    for i in 1..=n / block {
        let tau = block_permutation(n, block, i)?;
        let tau_inv = tau.inverse()?;
        families.push(
            seed.iter()
                .map(|y| tau.compose(y)?.compose(&tau_inv))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let mut commutators_checked = 0;
    let mut noncommuting = Vec::new();
    for i in 0..families.len() {
        for j in i + 1..families.len() {
            for (a, x) in families[i].iter().enumerate() {
                for (b, y) in families[j].iter().enumerate() {
                    commutators_checked += 1;
                    if !Automorphism::commutator(x, y)?.is_identity() {
                        noncommuting.push(((i, a), (j, b)));
                    }
                }
            }
        }
    }
    let cutoff = DEFAULT_ORDER_CUTOFF;
    let mut orders_preserved = true;
    for fam in &families {
        for a in 0..seed.len() {
            orders_preserved &= fam[a].order(cutoff) == seed[a].order(cutoff);
            for b in 0..seed.len() {
                orders_preserved &=
                    fam[a].compose(&fam[b])?.order(cutoff) == seed[a].compose(&seed[b])?.order(cutoff);
            }
        }
    }
    Ok(FamilyReport {
        n,
        k,
        variant,
        seed: seed_names,
        families,
        commutators_checked,
        noncommuting,
        orders_preserved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingEntry {
    pub name: String,
    pub preimage_found: bool,
    pub embeds_exactly: bool,
    pub det: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub excluded: String,
    pub entries: Vec<EmbeddingEntry>,
    /// Pairs `(a, b)` of `Y4` checked for `det(ab) = det(a) det(b)`.
    pub det_pairs_checked: usize,
    pub det_homomorphism: bool,
}

impl EmbeddingReport {
    pub fn verified(&self) -> bool {
        self.det_homomorphism && self.entries.iter().all(|e| e.preimage_found && e.embeds_exactly)
    }
}

/// Every element of `Y4` other than `(x_{n-1},x_n)e_{n-1}` lies in the image
/// of the embedding of rank `n-1`; also checks that the determinant of the
/// abelianization is multiplicative with values `±1` on `Y4`.
pub fn embed_and_check_yprime(n: usize) -> Result<EmbeddingReport, BoundsError> {
    if n < 5 {
        return Err(BoundsError::RankTooSmall {
            group: Group::SAut,
            n: n as u64,
            min: 5,
        });
    }
    let y4 = builtin_genset(GenSetName::Y4, n)?;
    let excluded = format!("(x{},x{})e{}", n - 1, n, n - 1);
    let mut entries = Vec::new();
    for e in y4.elements.iter().filter(|e| e.name != excluded) {
        let pre = e.aut.psi_preimage();
        let embeds_exactly = match &pre {
            Some(p) => p.psi_embed()? == e.aut,
            None => false,
        };
        entries.push(EmbeddingEntry {
            name: e.name.clone(),
            preimage_found: pre.is_some(),
            embeds_exactly,
            det: e.aut.determinant_sign()?,
        });
    }
    let auts = y4.automorphisms();
    let mut det_pairs_checked = 0;
    let mut det_homomorphism = true;
    for a in &auts {
        for b in &auts {
            det_pairs_checked += 1;
            let lhs = a.compose(b)?.determinant_sign()?;
            det_homomorphism &= lhs == a.determinant_sign()? * b.determinant_sign()?;
        }
    }
    Ok(EmbeddingReport {
        n,
        excluded,
        entries,
        det_pairs_checked,
        det_homomorphism,
    })
}

/// Vertices on a shortest path between two elements in the commutation
/// graph (edges join non-commuting pairs), endpoints included.
pub fn shortest_path_vertices(table: &PairTable, from: &str, to: &str) -> Option<usize> {
    let start = table.index(from)?;
    let goal = table.index(to)?;
    let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(start, 1)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if v == goal {
            return dist.get(&v).copied();
        }
        let dv = dist[&v];
        for w in 0..table.names.len() {
            if w != v && !table.commute[v][w] && !dist.contains_key(&w) {
                dist.insert(w, dv + 1);
                queue.push_back(w);
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCount {
    pub n: usize,
    pub vertices: Option<usize>,
    pub required: usize,
}

impl PathCount {
    pub fn holds(&self) -> bool {
        self.vertices.is_some_and(|v| v >= self.required)
    }
}

/// A connected subset of `Y4` joining `e2e4rho12` to
/// `(x_{n-1},x_n)e_{n-1}` has at least `n-3` elements.
pub fn nielsen_path_count(n: usize) -> Result<PathCount, BoundsError> {
    let y4 = builtin_genset(GenSetName::Y4, n)?;
    let table = pair_order_table(&y4, DEFAULT_ORDER_CUTOFF)?;
    let target = format!("(x{},x{})e{}", n - 1, n, n - 1);
    Ok(PathCount {
        n,
        vertices: shortest_path_vertices(&table, "e2e4rho12", &target),
        required: n.saturating_sub(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct evaluation of the two inequalities, kept apart from the
    // implementation above.
    fn brute(m: u64) -> (u64, u64) {
        let mut general = 0;
        let mut simple = 0;
        for d in 0..=m {
            if (2..=d + 1).all(|k| (d as i64) < (k * (m / (k + 2))) as i64) {
                general = general.max(d);
            }
            if (d as i64) < 2 * (m / 4) as i64 - 1 {
                simple = simple.max(d);
            }
        }
        (general, simple)
    }

    #[test]
    fn required_bound_values() {
        let r = fa_bounds(4, Group::Aut).unwrap();
        assert_eq!((r.max_d_general, r.max_d_simple), (1, 0));
        let r = fa_bounds(12, Group::Aut).unwrap();
        assert_eq!((r.max_d_general, r.max_d_simple), (4, 4));
        let r = fa_bounds(9, Group::SAut).unwrap();
        assert_eq!((r.m, r.max_d_general, r.max_d_simple), (8, 2, 2));
        assert_eq!(r.rep_threshold, 3);
    }

    #[test]
    fn rank_guards() {
        assert!(matches!(fa_bounds(3, Group::Aut), Err(BoundsError::RankTooSmall { .. })));
        assert!(matches!(fa_bounds(4, Group::SAut), Err(BoundsError::RankTooSmall { .. })));
    }

    #[test]
    fn agrees_with_brute_force() {
        for n in 4..300 {
            let r = fa_bounds(n, Group::Aut).unwrap();
            assert_eq!((r.max_d_general, r.max_d_simple), brute(n), "n = {n}");
        }
    }

    #[test]
    fn saut_shifts_rank() {
        for n in 5..=2000 {
            let s = fa_bounds(n, Group::SAut).unwrap();
            let a = fa_bounds(n - 1, Group::Aut).unwrap();
            assert_eq!((s.max_d_general, s.max_d_simple), (a.max_d_general, a.max_d_simple));
        }
    }

    #[test]
    fn simple_below_general_and_monotone() {
        for group in [Group::Aut, Group::SAut] {
            let rows = sweep(group.min_rank(), 2000, group).unwrap();
            for w in rows.windows(2) {
                assert!(w[0].max_d_general <= w[1].max_d_general);
                assert!(w[0].max_d_simple <= w[1].max_d_simple);
            }
            assert!(rows.iter().all(|r| r.max_d_simple <= r.max_d_general));
        }
    }

    #[test]
    fn implication_examples() {
        assert!(verify_simple_implies_general(4, 2000).holds());
        let small = verify_simple_implies_general(4, 7);
        assert!(small.holds());
        assert_eq!(small.pairs_checked, 4);
        assert!(general_condition(8, 2));
        assert!(simple_condition(8, 2));
        assert!(!general_condition(12, 5));
        assert_eq!(first_failing_k(12, 5), Some(5));
    }

    #[test]
    fn sweep_length() {
        assert_eq!(sweep(4, 20, Group::Aut).unwrap().len(), 17);
    }

    #[test]
    fn seed_names() {
        assert_eq!(
            Variant::Tau.seed_names(3),
            vec!["e2rho12", "(x1,x2)e1e2", "(x2,x3)e1", "(x3,x4)"]
        );
        assert_eq!(
            Variant::Sigma.seed_names(3),
            vec!["e2rho12", "(x2,x3)e1", "(x3,x4)", "(x4,x5)"]
        );
        assert_eq!(Variant::Tau.seed_names(2), vec!["e2rho12", "(x1,x2)e1e2", "(x2,x3)e1"]);
    }

    #[test]
    fn family_examples() {
        let r = conjugate_families(8, 3, Variant::Tau).unwrap();
        assert_eq!(r.families.len(), 2);
        assert_eq!(r.commutators_checked, 16);
        assert!(r.verified());
        let y2 = builtin_genset(GenSetName::Y2, 8).unwrap();
        for (name, a) in r.seed.iter().zip(&r.families[0]) {
            assert_eq!(&y2.get(name).unwrap().aut, a);
        }
        let s = conjugate_families(10, 3, Variant::Sigma).unwrap();
        assert_eq!(s.families.len(), 2);
        assert!(s.verified());
        assert!(matches!(
            conjugate_families(9, 3, Variant::Sigma),
            Err(BoundsError::InsufficientRank { .. })
        ));
    }

    #[test]
    fn overlapping_blocks_would_fail() {
        // Seed elements moved by a single shift overlap their originals.
        let n = 6;
        let y2 = builtin_genset(GenSetName::Y2, n).unwrap();
        let a = y2.get("(x2,x3)e1").unwrap().aut.clone();
        let shift = block_permutation(n, 2, 2).unwrap();
        let b = shift.compose(&a).unwrap().compose(&shift.inverse().unwrap()).unwrap();
        assert!(!Automorphism::commutator(&a, &b).unwrap().is_identity());
    }

    #[test]
    fn all_families_commute() {
        for k in 2..=4 {
            for n in 1..=12 {
                for v in [Variant::Tau, Variant::Sigma] {
                    if 2 * v.block(k) > n {
                        continue;
                    }
                    assert!(conjugate_families(n, k, v).unwrap().verified(), "{n} {k} {v}");
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let r = embed_and_check_yprime(6).unwrap();
        assert!(r.verified());
        assert_eq!(r.excluded, "(x5,x6)e5");
        let find = |name: &str| r.entries.iter().find(|e| e.name == name).unwrap().clone();
        assert_eq!(find("e3e4").det, 1);
        assert_eq!(find("(x2,x3)e1").det, 1);
        let x = builtin_genset(GenSetName::Y4, 6).unwrap();
        let pre = x.get("(x2,x3)e1").unwrap().aut.psi_preimage().unwrap();
        assert_eq!(pre, crate::GroupWord::parse("t(2,3)*e(1)", 5).unwrap().evaluate(5).unwrap());
        let id = Automorphism::identity(5);
        assert_eq!(id.psi_embed().unwrap(), Automorphism::identity(6));
        for n in 5..=10 {
            assert!(embed_and_check_yprime(n).unwrap().verified(), "n = {n}");
        }
    }

    #[test]
    fn excluded_element_has_no_preimage() {
        let y4 = builtin_genset(GenSetName::Y4, 7).unwrap();
        assert!(y4.get("(x6,x7)e6").unwrap().aut.psi_preimage().is_none());
    }

    #[test]
    fn nielsen_paths() {
        for n in 9..=12 {
            let c = nielsen_path_count(n).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }
}
