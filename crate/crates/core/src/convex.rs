//! Exact rational convex bodies in Q^d: boxes and H-polytopes, feasibility
//! by Fourier-Motzkin elimination, box distances, Helly checks and the
//! swelling construction.
//!
//! Swelling works with boxes under the L-infinity metric, where an
//! epsilon-neighbourhood of a box is again a box. It exercises the
//! combinatorial argument (inflating by less than half the gap keeps every
//! empty intersection empty), not the metric geometry of general spaces.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::simplicial::{nerve, SetFamily, SimplicialComplex, SimplicialError};

pub type Q = BigRational;

/// Largest dimension accepted by polytope elimination.
pub const MAX_POLYTOPE_DIM: usize = 4;
/// Largest family accepted by [`swelling`].
pub const MAX_SWELLING_FAMILY: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvexError {
    #[error("polytope feasibility is limited to d <= {MAX_POLYTOPE_DIM}, got d = {0}")]
    DimensionGuard(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("family member {0} is empty")]
    EmptyMember(usize),
    #[error("empty family")]
    EmptyFamily,
    #[error("swelling is limited to {MAX_SWELLING_FAMILY} sets, got {0}")]
    FamilyTooLarge(usize),
    #[error("every {subfamily_size}-subfamily meets but the whole family is empty")]
    HellyContradiction { subfamily_size: usize },
    #[error("witness failed re-validation")]
    InvalidWitness,
    #[error("swelling changed the nerve")]
    NerveChanged,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Always written as `p/q`.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(text: &str) -> Result<Q, ConvexError> {
    let bad = || ConvexError::Parse(text.to_string());
    let t = text.trim();
    match t.split_once('/') {
        Some((p, d)) => {
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p.trim().parse().map_err(|_| bad())?, d))
        }
        None => Ok(Q::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_point(p: &[Q]) -> String {
    format!("({})", p.iter().map(fmt_q).collect::<Vec<_>>().join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    LInf,
    /// Squared Euclidean distance, kept rational.
    SquaredL2,
}

/// Product of closed intervals `[lo_c, hi_c]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalBox {
    lo: Vec<Q>,
    hi: Vec<Q>,
}

impl RationalBox {
    pub fn new(lo: Vec<Q>, hi: Vec<Q>) -> Result<Self, ConvexError> {
        if lo.len() != hi.len() {
            return Err(ConvexError::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(ConvexError::EmptyMember(0));
        }
        Ok(RationalBox { lo, hi })
    }

    /// Integer corners, for tests and examples.
    pub fn from_ints(lo: &[i64], hi: &[i64]) -> Result<Self, ConvexError> {
        let f = |v: &[i64]| v.iter().map(|&x| Q::from_integer(x.into())).collect();
        Self::new(f(lo), f(hi))
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[Q] {
        &self.lo
    }

    pub fn hi(&self) -> &[Q] {
        &self.hi
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        p.len() == self.dim() && (0..self.dim()).all(|c| self.lo[c] <= p[c] && p[c] <= self.hi[c])
    }

    pub fn contains_box(&self, other: &RationalBox) -> bool {
        (0..self.dim()).all(|c| self.lo[c] <= other.lo[c] && other.hi[c] <= self.hi[c])
    }

    pub fn intersect(&self, other: &RationalBox) -> Option<RationalBox> {
        let lo: Vec<Q> = self.lo.iter().zip(&other.lo).map(|(a, b)| a.max(b).clone()).collect();
        let hi: Vec<Q> = self.hi.iter().zip(&other.hi).map(|(a, b)| a.min(b).clone()).collect();
        RationalBox::new(lo, hi).ok()
    }

    pub fn intersect_all<'a, I: IntoIterator<Item = &'a RationalBox>>(boxes: I) -> Option<RationalBox> {
        let mut it = boxes.into_iter();
        let mut acc = it.next()?.clone();
        for b in it {
            acc = acc.intersect(b)?;
        }
        Some(acc)
    }

    /// Closed L-infinity neighbourhood of radius `eps`.
    pub fn inflate(&self, eps: &Q) -> RationalBox {
        RationalBox {
            lo: self.lo.iter().map(|x| x - eps).collect(),
            hi: self.hi.iter().map(|x| x + eps).collect(),
        }
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        let d = self.dim();
        let mut out = Vec::with_capacity(2 * d);
        for c in 0..d {
            let mut a = vec![Q::zero(); d];
            a[c] = Q::one();
            out.push(Halfspace::new(a.clone(), self.hi[c].clone()));
            a[c] = -Q::one();
            out.push(Halfspace::new(a, -self.lo[c].clone()));
        }
        out
    }
}

impl fmt::Display for RationalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.dim())
            .map(|c| format!("[{},{}]", fmt_q(&self.lo[c]), fmt_q(&self.hi[c])))
            .collect();
        write!(f, "box d={} {}", self.dim(), parts.join("x"))
    }
}

/// `a . x <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub a: Vec<Q>,
    pub b: Q,
}

impl Halfspace {
    pub fn new(a: Vec<Q>, b: Q) -> Self {
        Halfspace { a, b }
    }

    pub fn holds(&self, p: &[Q]) -> bool {
        dot(&self.a, p) <= self.b
    }

    /// Scale so the first nonzero coefficient has absolute value 1.
    fn normalized(&self) -> Halfspace {
        match self.a.iter().find(|x| !x.is_zero()) {
            Some(lead) => {
                let s = lead.abs();
                Halfspace::new(self.a.iter().map(|x| x / &s).collect(), &self.b / &s)
            }
            None => self.clone(),
        }
    }
}

fn dot(a: &[Q], p: &[Q]) -> Q {
    a.iter().zip(p).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HPolytope {
    d: usize,
    halfspaces: Vec<Halfspace>,
}

impl HPolytope {
    pub fn new(d: usize, halfspaces: Vec<Halfspace>) -> Result<Self, ConvexError> {
        if let Some(h) = halfspaces.iter().find(|h| h.a.len() != d) {
            return Err(ConvexError::DimensionMismatch {
                expected: d,
                got: h.a.len(),
            });
        }
        Ok(HPolytope { d, halfspaces })
    }

    /// Integer rows `(a, b)`.
    pub fn from_ints(d: usize, rows: &[(&[i64], i64)]) -> Result<Self, ConvexError> {
        Self::new(
            d,
            rows.iter()
                .map(|(a, b)| {
                    Halfspace::new(
                        a.iter().map(|&x| Q::from_integer(x.into())).collect(),
                        Q::from_integer((*b).into()),
                    )
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        p.len() == self.d && self.halfspaces.iter().all(|h| h.holds(p))
    }
}

impl fmt::Display for HPolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .halfspaces
            .iter()
            .map(|h| {
                let a: Vec<String> = h.a.iter().map(fmt_q).collect();
                format!("{} <= {}", a.join(","), fmt_q(&h.b))
            })
            .collect();
        write!(f, "hpoly d={} {{{}}}", self.d, rows.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConvexBody {
    Box(RationalBox),
    Poly(HPolytope),
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        match self {
            ConvexBody::Box(b) => b.dim(),
            ConvexBody::Poly(p) => p.dim(),
        }
    }

    pub fn contains(&self, p: &[Q]) -> bool {
        match self {
            ConvexBody::Box(b) => b.contains(p),
            ConvexBody::Poly(h) => h.contains(p),
        }
    }

    pub fn halfspaces(&self) -> Vec<Halfspace> {
        match self {
            ConvexBody::Box(b) => b.halfspaces(),
            ConvexBody::Poly(h) => h.halfspaces.clone(),
        }
    }
}

impl From<RationalBox> for ConvexBody {
    fn from(b: RationalBox) -> Self {
        ConvexBody::Box(b)
    }
}

impl From<HPolytope> for ConvexBody {
    fn from(p: HPolytope) -> Self {
        ConvexBody::Poly(p)
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvexBody::Box(b) => b.fmt(f),
            ConvexBody::Poly(p) => p.fmt(f),
        }
    }
}

impl FromStr for ConvexBody {
    type Err = ConvexError;

    fn from_str(text: &str) -> Result<Self, ConvexError> {
        let bad = || ConvexError::Parse(text.to_string());
        let t = text.trim();
        let (kind, rest) = t.split_once(char::is_whitespace).ok_or_else(bad)?;
        let rest = rest.trim_start();
        let rest = rest.strip_prefix("d=").ok_or_else(bad)?;
        let (d, body) = rest.split_once(char::is_whitespace).ok_or_else(bad)?;
        let d: usize = d.parse().map_err(|_| bad())?;
        let body = body.trim();
        match kind {
            "box" => {
                let mut lo = Vec::new();
                let mut hi = Vec::new();
                for iv in body.split('x') {
                    let inner = iv
                        .trim()
                        .strip_prefix('[')
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(bad)?;
                    let (l, h) = inner.split_once(',').ok_or_else(bad)?;
                    lo.push(parse_q(l)?);
                    hi.push(parse_q(h)?);
                }
                if lo.len() != d {
                    return Err(bad());
                }
                Ok(ConvexBody::Box(RationalBox::new(lo, hi)?))
            }
            "hpoly" => {
                let inner = body
                    .strip_prefix('{')
                    .and_then(|s| s.strip_suffix('}'))
                    .ok_or_else(bad)?;
                let mut hs = Vec::new();
                for row in inner.split(';').map(str::trim).filter(|r| !r.is_empty()) {
                    let (a, b) = row.split_once("<=").ok_or_else(bad)?;
                    let a = a.split(',').map(parse_q).collect::<Result<Vec<_>, _>>()?;
                    hs.push(Halfspace::new(a, parse_q(b)?));
                }
                Ok(ConvexBody::Poly(HPolytope::new(d, hs)?))
            }
            _ => Err(bad()),
        }
    }
}

/// Normalize, drop trivial rows and keep the tightest row per direction.
/// `None` if some row reads `0 <= b` with `b < 0`.
fn prune(rows: Vec<Halfspace>) -> Option<Vec<Halfspace>> {
    let mut best: BTreeMap<Vec<Q>, Q> = BTreeMap::new();
    for h in rows {
        let h = h.normalized();
        if h.a.iter().all(Zero::is_zero) {
            if h.b.is_negative() {
                return None;
            }
            continue;
        }
        best.entry(h.a)
            .and_modify(|b| {
                if h.b < *b {
                    *b = h.b.clone();
                }
            })
            .or_insert(h.b);
    }
    Some(best.into_iter().map(|(a, b)| Halfspace::new(a, b)).collect())
}

/// Fourier-Motzkin elimination with back substitution.
fn fourier_motzkin(d: usize, rows: Vec<Halfspace>) -> Option<Vec<Q>> {
    let mut stages = vec![prune(rows)?];
    for j in (0..d).rev() {
        let cur = stages.last().expect("nonempty");
        let mut next = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for h in cur {
            if h.a[j].is_positive() {
                pos.push(h);
            } else if h.a[j].is_negative() {
                neg.push(h);
            } else {
                next.push(h.clone());
            }
        }
        for p in &pos {
            let sp = p.a[j].clone();
            for n in &neg {
                let sn = -n.a[j].clone();
                let a = p.a.iter().zip(&n.a).map(|(x, y)| x / &sp + y / &sn).collect();
                next.push(Halfspace::new(a, &p.b / &sp + &n.b / &sn));
            }
        }
        stages.push(prune(next)?);
    }
    // stages[d-1-j] constrains x_0..=x_j.
    let mut x: Vec<Q> = Vec::with_capacity(d);
    for j in 0..d {
        let mut lower: Option<Q> = None;
        let mut upper: Option<Q> = None;
        for h in &stages[d - 1 - j] {
            if h.a[j].is_zero() {
                continue;
            }
            let r = (&h.b - dot(&h.a[..j], &x)) / &h.a[j];
            if h.a[j].is_positive() {
                upper = Some(upper.map_or(r.clone(), |u| u.min(r)));
            } else {
                lower = Some(lower.map_or(r.clone(), |l| l.max(r)));
            }
        }
        x.push(match (lower, upper) {
            (Some(l), Some(u)) => (l + u) / Q::from_integer(2.into()),
            (Some(l), None) => l,
            (None, Some(u)) => u,
            (None, None) => Q::zero(),
        });
    }
    Some(x)
}

fn common_dim(sets: &[ConvexBody]) -> Result<usize, ConvexError> {
    let d = sets.first().ok_or(ConvexError::EmptyFamily)?.dim();
    if let Some(s) = sets.iter().find(|s| s.dim() != d) {
        return Err(ConvexError::DimensionMismatch {
            expected: d,
            got: s.dim(),
        });
    }
    Ok(d)
}

/// A point in the common intersection, or `None` if it is empty. Boxes are
/// intersected coordinatewise; anything else goes through elimination.
/// Every witness is re-checked against every set.
pub fn feasible(sets: &[ConvexBody]) -> Result<Option<Vec<Q>>, ConvexError> {
    let d = common_dim(sets)?;
    let boxes: Option<Vec<&RationalBox>> = sets
        .iter()
        .map(|s| match s {
            ConvexBody::Box(b) => Some(b),
            ConvexBody::Poly(_) => None,
        })
        .collect();
    let witness = match boxes {
        Some(boxes) => RationalBox::intersect_all(boxes).map(|b| b.lo.clone()),
        None => {
            if d > MAX_POLYTOPE_DIM {
                return Err(ConvexError::DimensionGuard(d));
            }
            fourier_motzkin(d, sets.iter().flat_map(ConvexBody::halfspaces).collect())
        }
    };
    if let Some(w) = &witness {
        if !sets.iter().all(|s| s.contains(w)) {
            return Err(ConvexError::InvalidWitness);
        }
    }
    Ok(witness)
}

/// Infimum distance between two boxes. Zero iff they meet.
pub fn distance(a: &RationalBox, b: &RationalBox, metric: Metric) -> Q {
    let gaps = (0..a.dim()).map(|c| {
        let g = (&a.lo[c] - &b.hi[c]).max(&b.lo[c] - &a.hi[c]);
        g.max(Q::zero())
    });
    match metric {
        Metric::LInf => gaps.max().unwrap_or_else(Q::zero),
        Metric::SquaredL2 => gaps.map(|g| &g * &g).sum(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HellyVerdict {
    /// Some `(d+1)`-subfamily (or the whole family, if smaller) is empty.
    Violating { subfamily: Vec<usize> },
    /// Every `(d+1)`-subfamily meets, and so does the whole family.
    TotalNonempty {
        witness: Vec<Q>,
        subfamilies_checked: usize,
    },
}

/// Check the Helly hypothesis in `Q^d` and, when it holds, that the whole
/// family meets. An empty total intersection under the hypothesis is an
/// error, since it would contradict Helly's theorem.
pub fn helly_check(sets: &[ConvexBody], d: usize) -> Result<HellyVerdict, ConvexError> {
    let dim = common_dim(sets)?;
    if dim != d {
        return Err(ConvexError::DimensionMismatch { expected: d, got: dim });
    }
    for (k, s) in sets.iter().enumerate() {
        if feasible(std::slice::from_ref(s))?.is_none() {
            return Err(ConvexError::EmptyMember(k));
        }
    }
    let size = (d + 1).min(sets.len());
    let mut checked = 0;
    for sub in combinations(sets.len(), size) {
        let members: Vec<ConvexBody> = sub.iter().map(|&k| sets[k].clone()).collect();
        checked += 1;
        if feasible(&members)?.is_none() {
            return Ok(HellyVerdict::Violating { subfamily: sub });
        }
    }
    match feasible(sets)? {
        Some(witness) => Ok(HellyVerdict::TotalNonempty {
            witness,
            subfamilies_checked: checked,
        }),
        None => Err(ConvexError::HellyContradiction { subfamily_size: size }),
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A box family seen as a [`SetFamily`].
pub struct BoxFamily<'a>(pub &'a [RationalBox]);

impl SetFamily for BoxFamily<'_> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn intersects(&self, members: &[usize]) -> bool {
        members.is_empty() || RationalBox::intersect_all(members.iter().map(|&m| &self.0[m])).is_some()
    }
}

pub fn box_nerve(boxes: &[RationalBox]) -> Result<SimplicialComplex, ConvexError> {
    Ok(nerve(&BoxFamily(boxes))?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwellingStep {
    pub index: usize,
    /// Nonempty sub-intersections of the current family that miss the set,
    /// with their L-infinity distance to it.
    pub distances: Vec<(Vec<usize>, Q)>,
    pub epsilon_prime: Q,
    pub epsilon: Q,
    pub inflated: RationalBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwellingTrace {
    pub input: Vec<RationalBox>,
    pub steps: Vec<SwellingStep>,
}

impl SwellingTrace {
    pub fn output(&self) -> Vec<RationalBox> {
        self.steps.iter().map(|s| s.inflated.clone()).collect()
    }

    pub fn max_epsilon(&self) -> Q {
        self.steps.iter().map(|s| s.epsilon.clone()).max().unwrap_or_else(Q::zero)
    }

    /// `F_i ⊆ U_i`, `eps_i <= 1/2` and identical nerves.
    pub fn validate(&self) -> Result<(), ConvexError> {
        let out = self.output();
        let half = q(1, 2);
        for (s, (f, u)) in self.steps.iter().zip(self.input.iter().zip(&out)) {
            if !u.contains_box(f) || s.epsilon > half || !s.epsilon.is_positive() {
                return Err(ConvexError::InvalidWitness);
            }
        }
        if box_nerve(&self.input)? != box_nerve(&out)? {
            return Err(ConvexError::NerveChanged);
        }
        Ok(())
    }
}

/// Inflate the sets one at a time. Set `i` grows by half of
/// `min(1, distance to every nonempty sub-intersection it misses)`, taken
/// over the family as modified so far.
pub fn swelling(family: &[RationalBox]) -> Result<SwellingTrace, ConvexError> {
    let k = family.len();
    if k == 0 {
        return Err(ConvexError::EmptyFamily);
    }
    if k > MAX_SWELLING_FAMILY {
        return Err(ConvexError::FamilyTooLarge(k));
    }
    let d = family[0].dim();
    if let Some(b) = family.iter().find(|b| b.dim() != d) {
        return Err(ConvexError::DimensionMismatch { expected: d, got: b.dim() });
    }
    let mut current = family.to_vec();
    let mut steps = Vec::with_capacity(k);
    for i in 0..k {
        let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
        let mut distances = Vec::new();
        for mask in 1u32..1 << others.len() {
            let sub: Vec<usize> = others
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &j)| j)
                .collect();
            let Some(meet) = RationalBox::intersect_all(sub.iter().map(|&j| &current[j])) else {
                continue;
            };
            if meet.intersect(&current[i]).is_none() {
                distances.push((sub, distance(&current[i], &meet, Metric::LInf)));
            }
        }
        let epsilon_prime = distances
            .iter()
            .map(|(_, g)| g.clone())
            .fold(Q::one(), |acc, g| acc.min(g));
        let epsilon = &epsilon_prime / Q::from_integer(2.into());
        let inflated = current[i].inflate(&epsilon);
        current[i] = inflated.clone();
        steps.push(SwellingStep {
            index: i,
            distances,
            epsilon_prime,
            epsilon,
            inflated,
        });
    }
    Ok(SwellingTrace {
        input: family.to_vec(),
        steps,
    })
}

/// Dyadic rational with denominator at most 64, in `[0, hi]`.
fn random_q<R: Rng>(rng: &mut R, hi: i64) -> Q {
    let den = 1i64 << rng.gen_range(0..=6);
    q(rng.gen_range(0..=hi * den), den)
}

/// Boxes inside `[0,6]^d` with side lengths between 0 and 3.
pub fn random_box<R: Rng>(rng: &mut R, d: usize) -> RationalBox {
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for _ in 0..d {
        let l = random_q(rng, 3);
        hi.push(&l + random_q(rng, 3));
        lo.push(l);
    }
    RationalBox { lo, hi }
}

pub fn random_box_family<R: Rng>(rng: &mut R, d: usize, sets: usize) -> Vec<RationalBox> {
    (0..sets).map(|_| random_box(rng, d)).collect()
}

/// Random boxes that all contain a common random point, so the whole
/// family meets.
pub fn random_box_family_through<R: Rng>(rng: &mut R, d: usize, sets: usize) -> Vec<RationalBox> {
    let p: Vec<Q> = (0..d).map(|_| random_q(rng, 4)).collect();
    (0..sets)
        .map(|_| RationalBox {
            lo: p.iter().map(|x| x - random_q(rng, 2)).collect(),
            hi: p.iter().map(|x| x + random_q(rng, 2)).collect(),
        })
        .collect()
}

/// A box around a random centre cut by up to two random halfspaces that
/// keep the centre, so the polytope is never empty.
pub fn random_polytope<R: Rng>(rng: &mut R, d: usize) -> HPolytope {
    let centre: Vec<Q> = (0..d).map(|_| random_q(rng, 4)).collect();
    random_polytope_around(rng, &centre)
}

/// A random polytope containing `centre`.
pub fn random_polytope_around<R: Rng>(rng: &mut R, centre: &[Q]) -> HPolytope {
    let d = centre.len();
    let mut hs = Vec::new();
    for c in 0..d {
        let r = random_q(rng, 2) + q(1, 4);
        let mut a = vec![Q::zero(); d];
        a[c] = Q::one();
        hs.push(Halfspace::new(a.clone(), &centre[c] + &r));
        a[c] = -Q::one();
        hs.push(Halfspace::new(a, -(&centre[c] - &r)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let a: Vec<Q> = (0..d).map(|_| Q::from_integer(rng.gen_range(-3..=3).into())).collect();
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        let b = dot(&a, centre) + random_q(rng, 1);
        hs.push(Halfspace::new(a, b));
    }
    HPolytope { d, halfspaces: hs }
}

pub fn random_polytope_family<R: Rng>(rng: &mut R, d: usize, sets: usize) -> Vec<HPolytope> {
    (0..sets).map(|_| random_polytope(rng, d)).collect()
}

/// Random polytopes sharing a common random point.
pub fn random_polytope_family_through<R: Rng>(rng: &mut R, d: usize, sets: usize) -> Vec<HPolytope> {
    let p: Vec<Q> = (0..d).map(|_| random_q(rng, 4)).collect();
    (0..sets)
        .map(|_| {
            // shift the centre a little so the common point is not always central
            let c: Vec<Q> = p.iter().map(|x| x + random_q(rng, 1) * q(1, 8)).collect();
            let mut poly = random_polytope_around(rng, &c);
            poly.halfspaces.retain(|h| h.holds(&p));
            poly
        })
        .collect()
}

/// Half the time a family through a common point, otherwise independent
/// members.
pub fn random_family<R: Rng>(rng: &mut R, poly: bool, d: usize, sets: usize) -> Vec<ConvexBody> {
    let through = rng.gen_bool(0.5);
    match (poly, through) {
        (false, false) => random_box_family(rng, d, sets).into_iter().map(Into::into).collect(),
        (false, true) => random_box_family_through(rng, d, sets).into_iter().map(Into::into).collect(),
        (true, false) => random_polytope_family(rng, d, sets).into_iter().map(Into::into).collect(),
        (true, true) => random_polytope_family_through(rng, d, sets).into_iter().map(Into::into).collect(),
    }
}

/// The three closed edges of the triangle with vertices (0,0), (1,0), (0,1).
pub fn triangle_edges() -> Vec<ConvexBody> {
    let rows: [&[(&[i64], i64)]; 3] = [
        &[(&[0, 1], 0), (&[0, -1], 0), (&[1, 0], 1), (&[-1, 0], 0)],
        &[(&[1, 0], 0), (&[-1, 0], 0), (&[0, 1], 1), (&[0, -1], 0)],
        &[(&[1, 1], 1), (&[-1, -1], -1), (&[-1, 0], 0), (&[0, -1], 0)],
    ];
    rows.iter()
        .map(|r| ConvexBody::Poly(HPolytope::from_ints(2, r).expect("consistent dimension")))
        .collect()
}
