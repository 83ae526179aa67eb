//! Finite abstract simplicial complexes with tagged vertices: joins, nerves,
//! simplex boundaries and reduced integral homology.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smith::smith_diagonal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("a complex needs at least one vertex")]
    Empty,
    #[error("boundary_complex needs k >= 1")]
    DegenerateBoundary,
    #[error("family member {0} is empty")]
    EmptyMember(usize),
    #[error("member {member} of family {family} is not a cylinder over coordinate {family}")]
    NotCylinder { family: usize, member: usize },
    #[error("cylinder model: {0}")]
    BadModel(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// A vertex: `tag` names the factor it came from (0 for plain complexes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub tag: u32,
    pub id: u32,
}

impl Vertex {
    pub fn new(tag: u32, id: u32) -> Self {
        Vertex { tag, id }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag == 0 {
            write!(f, "{}", self.id)
        } else {
            write!(f, "{}:{}", self.tag, self.id)
        }
    }
}

/// Nonempty faces only; the empty simplex enters through the augmentation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Vec<Vertex>>,
}

fn subsets(face: &[Vertex]) -> impl Iterator<Item = Vec<Vertex>> + '_ {
    (1u64..1 << face.len()).map(move |mask| {
        face.iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, v)| *v)
            .collect()
    })
}

impl SimplicialComplex {
    /// Downward closure of the given faces.
    pub fn from_maximal<I, F>(faces: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let mut simplices = BTreeSet::new();
        for face in faces {
            let mut face: Vec<Vertex> = face.into_iter().collect();
            face.sort();
            face.dedup();
            for s in subsets(&face) {
                simplices.insert(s);
            }
        }
        if simplices.is_empty() {
            return Err(SimplicialError::Empty);
        }
        Ok(SimplicialComplex { simplices })
    }

    /// Faces given by untagged ids.
    pub fn from_ids(faces: &[&[u32]]) -> Result<Self, SimplicialError> {
        Self::from_maximal(
            faces
                .iter()
                .map(|f| f.iter().map(|&id| Vertex::new(0, id)).collect::<Vec<_>>()),
        )
    }

    pub fn point() -> Self {
        Self::simplex(0)
    }

    /// The full `k`-simplex on ids `0..=k`.
    pub fn simplex(k: u32) -> Self {
        Self::from_maximal([(0..=k).map(|id| Vertex::new(0, id))]).expect("nonempty")
    }

    /// All proper faces of a `k`-simplex: a `(k-1)`-sphere.
    pub fn boundary_complex(k: u32) -> Result<Self, SimplicialError> {
        if k == 0 {
            return Err(SimplicialError::DegenerateBoundary);
        }
        Self::from_maximal((0..=k).map(|skip| {
            (0..=k)
                .filter(move |&id| id != skip)
                .map(|id| Vertex::new(0, id))
        }))
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.simplices.iter()
    }

    pub fn contains(&self, face: &[Vertex]) -> bool {
        let mut f = face.to_vec();
        f.sort();
        self.simplices.contains(&f)
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 1)
            .map(|s| s[0])
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.simplices.iter().map(Vec::len).max().unwrap_or(1) - 1
    }

    /// Number of faces with `q+1` vertices, for `q = 0..=dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim() + 1];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Faces not contained in a larger face.
    pub fn facets(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = Vec::new();
        let mut by_size: Vec<&Vec<Vertex>> = self.simplices.iter().collect();
        by_size.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        for s in by_size {
            if !out
                .iter()
                .any(|f| f.len() > s.len() && s.iter().all(|v| f.contains(v)))
            {
                out.push(s.clone());
            }
        }
        out.sort();
        out
    }

    pub fn max_tag(&self) -> u32 {
        self.vertices().iter().map(|v| v.tag).max().unwrap_or(0)
    }

    fn retag(&self, offset: u32) -> SimplicialComplex {
        SimplicialComplex {
            simplices: self
                .simplices
                .iter()
                .map(|s| s.iter().map(|v| Vertex::new(v.tag + offset, v.id)).collect())
                .collect(),
        }
    }

    /// Join on the disjoint union of the vertex sets; the second factor's
    /// tags are shifted past the first's.
    pub fn join(&self, other: &SimplicialComplex) -> SimplicialComplex {
        let b = other.retag(self.max_tag() + 1);
        let mut simplices = self.simplices.clone();
        simplices.extend(b.simplices.iter().cloned());
        for s in &self.simplices {
            for t in &b.simplices {
                let mut u = s.clone();
                u.extend_from_slice(t);
                u.sort();
                simplices.insert(u);
            }
        }
        SimplicialComplex { simplices }
    }

    pub fn join_all<'a, I: IntoIterator<Item = &'a SimplicialComplex>>(parts: I) -> Option<Self> {
        let mut it = parts.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, c| acc.join(c)))
    }

    /// One facet per line, vertices separated by spaces.
    pub fn to_text(&self) -> String {
        self.facets()
            .iter()
            .map(|f| {
                f.iter()
                    .map(Vertex::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn parse_text(text: &str) -> Result<Self, SimplicialError> {
        let mut faces = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let mut face = Vec::new();
            for tok in line.split_whitespace() {
                let bad = || SimplicialError::Parse(tok.to_string());
                let v = match tok.split_once(':') {
                    Some((t, i)) => Vertex::new(t.parse().map_err(|_| bad())?, i.parse().map_err(|_| bad())?),
                    None => Vertex::new(0, tok.parse().map_err(|_| bad())?),
                };
                face.push(v);
            }
            faces.push(face);
        }
        Self::from_maximal(faces)
    }

    /// Reduced homology of the augmented chain complex, via Smith normal
    /// forms of the integral boundary matrices.
    pub fn reduced_homology(&self) -> HomologyProfile {
        let dim = self.dim();
        // faces[q+1] lists the q-faces; faces[0] is the empty simplex.
        let mut faces: Vec<Vec<&Vec<Vertex>>> = vec![Vec::new(); dim + 2];
        for s in &self.simplices {
            faces[s.len()].push(s);
        }
        let index: Vec<BTreeMap<&Vec<Vertex>, usize>> = faces
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(k, s)| (*s, k)).collect())
            .collect();
        let count = |q: usize| if q == 0 { 1 } else { faces[q].len() };
        // boundary[k] maps chains on faces[k] to chains on faces[k-1].
        let mut ranks = vec![0usize; dim + 3];
        let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); dim + 3];
        for k in 1..=dim + 1 {
            let mut m = vec![vec![BigInt::zero(); count(k)]; count(k - 1)];
            for (col, s) in faces[k].iter().enumerate() {
                if k == 1 {
                    m[0][col] = BigInt::one();
                    continue;
                }
                for drop in 0..s.len() {
                    let mut t = (*s).clone();
                    t.remove(drop);
                    let row = index[k - 1][&t];
                    m[row][col] = if drop % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                }
            }
            let diag = smith_diagonal(m);
            ranks[k] = diag.len();
            torsion[k] = diag.into_iter().filter(|d| !d.is_one()).collect();
        }
        let groups = (0..=dim)
            .map(|q| {
                let k = q + 1;
                HomologyGroup {
                    degree: q,
                    rank: count(k) - ranks[k] - ranks[k + 1],
                    torsion: torsion[k + 1].clone(),
                }
            })
            .collect();
        HomologyProfile { groups }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub rank: usize,
    #[serde(with = "bigint_strings")]
    pub torsion: Vec<BigInt>,
}

mod bigint_strings {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Reduced homology in degrees `0..=dim`; higher degrees vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    pub groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn rank(&self, q: usize) -> usize {
        self.groups.get(q).map_or(0, |g| g.rank)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_torsion_free() && self.groups.iter().all(|g| g.rank == 0)
    }

    /// Reduced homology of the `d`-sphere: `Z` in degree `d`, zero elsewhere.
    pub fn is_sphere_of_dim(&self, d: usize) -> bool {
        self.is_torsion_free()
            && self
                .groups
                .iter()
                .all(|g| g.rank == usize::from(g.degree == d))
            && self.groups.len() > d
    }

    /// Alternating sum of Betti numbers (reduced Euler characteristic).
    pub fn reduced_euler(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.degree % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            let tors: Vec<String> = g.torsion.iter().map(|t| format!("Z/{t}")).collect();
            writeln!(
                f,
                "H~_{}: rank {}{}",
                g.degree,
                g.rank,
                if tors.is_empty() {
                    String::new()
                } else {
                    format!(" + {}", tors.join(" + "))
                }
            )?;
        }
        Ok(())
    }
}

/// A finite family of sets with a joint-intersection test. The test must be
/// monotone: if some members meet, so does every subfamily of them.
pub trait SetFamily {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the listed members have a common point.
    fn intersects(&self, members: &[usize]) -> bool;

    fn vertex(&self, member: usize) -> Vertex {
        Vertex::new(0, member as u32)
    }
}

/// Explicit finite sets of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSets {
    pub sets: Vec<BTreeSet<u32>>,
    pub tags: Vec<Vertex>,
}

impl FiniteSets {
    pub fn new(sets: Vec<BTreeSet<u32>>) -> Self {
        let tags = (0..sets.len()).map(|k| Vertex::new(0, k as u32)).collect();
        FiniteSets { sets, tags }
    }

    pub fn from_slices(sets: &[&[u32]]) -> Self {
        Self::new(sets.iter().map(|s| s.iter().copied().collect()).collect())
    }
}

impl SetFamily for FiniteSets {
    fn len(&self) -> usize {
        self.sets.len()
    }

    fn intersects(&self, members: &[usize]) -> bool {
        let Some((&first, rest)) = members.split_first() else {
            return true;
        };
        self.sets[first]
            .iter()
            .any(|p| rest.iter().all(|&m| self.sets[m].contains(p)))
    }

    fn vertex(&self, member: usize) -> Vertex {
        self.tags[member]
    }
}

/// Nerve: one simplex per jointly intersecting subfamily.
pub fn nerve<F: SetFamily>(family: &F) -> Result<SimplicialComplex, SimplicialError> {
    fn grow<F: SetFamily>(
        family: &F,
        current: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<Vertex>>,
    ) {
        let mut face: Vec<Vertex> = current.iter().map(|&m| family.vertex(m)).collect();
        face.sort();
        out.insert(face);
        let start = current.last().map_or(0, |&m| m + 1);
        for next in start..family.len() {
            current.push(next);
            if family.intersects(current) {
                grow(family, current, out);
            }
            current.pop();
        }
    }
    for m in 0..family.len() {
        if !family.intersects(&[m]) {
            return Err(SimplicialError::EmptyMember(m));
        }
    }
    if family.is_empty() {
        return Err(SimplicialError::Empty);
    }
    let mut out = BTreeSet::new();
    for m in 0..family.len() {
        grow(family, &mut vec![m], &mut out);
    }
    Ok(SimplicialComplex { simplices: out })
}

/// Families of cylinder sets in a finite product `I_1 x ... x I_l`: family
/// `c` consists of sets `{p : p_c in A}` for subsets `A` of `I_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderModel {
    pub sizes: Vec<u32>,
    /// `bases[c][j]` is the subset `A` of `I_c` for member `j` of family `c`.
    pub bases: Vec<Vec<BTreeSet<u32>>>,
}

impl CylinderModel {
    pub fn new(sizes: Vec<u32>, bases: Vec<Vec<BTreeSet<u32>>>) -> Result<Self, SimplicialError> {
        if sizes.is_empty() || sizes.len() != bases.len() {
            return Err(SimplicialError::BadModel(
                "one family per coordinate is required".into(),
            ));
        }
        for (c, fam) in bases.iter().enumerate() {
            if fam.is_empty() {
                return Err(SimplicialError::BadModel(format!("family {c} is empty")));
            }
            for (j, a) in fam.iter().enumerate() {
                if a.is_empty() || a.iter().any(|&x| x >= sizes[c]) {
                    return Err(SimplicialError::NotCylinder { family: c, member: j });
                }
            }
        }
        Ok(CylinderModel { sizes, bases })
    }

    /// Recover a model from explicit point sets (points encoded as mixed
    /// radix indices), rejecting any set that is not a cylinder over its
    /// family's coordinate.
    pub fn from_point_sets(
        sizes: Vec<u32>,
        families: &[Vec<BTreeSet<u32>>],
    ) -> Result<Self, SimplicialError> {
        let probe = CylinderModel {
            sizes: sizes.clone(),
            bases: Vec::new(),
        };
        let mut bases = Vec::new();
        for (c, fam) in families.iter().enumerate() {
            let mut fam_bases = Vec::new();
            for (j, set) in fam.iter().enumerate() {
                let base: BTreeSet<u32> = set.iter().map(|&p| probe.coordinate(p, c)).collect();
                let rebuilt = probe.cylinder(c, &base);
                if &rebuilt != set {
                    return Err(SimplicialError::NotCylinder { family: c, member: j });
                }
                fam_bases.push(base);
            }
            bases.push(fam_bases);
        }
        Self::new(sizes, bases)
    }

    pub fn families(&self) -> usize {
        self.sizes.len()
    }

    fn point_count(&self) -> u32 {
        self.sizes.iter().product()
    }

    fn coordinate(&self, point: u32, c: usize) -> u32 {
        let stride: u32 = self.sizes[..c].iter().product();
        point / stride % self.sizes[c]
    }

    /// The cylinder over `base` in coordinate `c`, as explicit points.
    pub fn cylinder(&self, c: usize, base: &BTreeSet<u32>) -> BTreeSet<u32> {
        (0..self.point_count())
            .filter(|&p| base.contains(&self.coordinate(p, c)))
            .collect()
    }

    /// All members of all families as explicit point sets, tagged by family.
    pub fn union_family(&self) -> FiniteSets {
        let mut sets = Vec::new();
        let mut tags = Vec::new();
        for (c, fam) in self.bases.iter().enumerate() {
            for (j, base) in fam.iter().enumerate() {
                sets.push(self.cylinder(c, base));
                tags.push(Vertex::new(c as u32, j as u32));
            }
        }
        FiniteSets { sets, tags }
    }

    /// Family `c` seen inside its own coordinate.
    pub fn coordinate_family(&self, c: usize) -> FiniteSets {
        FiniteSets::new(self.bases[c].clone())
    }

    pub fn random<R: Rng>(rng: &mut R, max_families: usize) -> Self {
        let l = rng.gen_range(1..=max_families.max(1));
        let sizes: Vec<u32> = (0..l).map(|_| rng.gen_range(1..=5)).collect();
        let bases = sizes
            .iter()
            .map(|&size| {
                let members = rng.gen_range(1..=4);
                (0..members)
                    .map(|_| {
                        let mut a: BTreeSet<u32> =
                            (0..size).filter(|_| rng.gen_bool(0.5)).collect();
                        if a.is_empty() {
                            a.insert(rng.gen_range(0..size));
                        }
                        a
                    })
                    .collect()
            })
            .collect();
        CylinderModel { sizes, bases }
    }
}

/// Nerve of the union of the families against the join of the nerves,
/// with family `c` matched to join factor `c`.
pub fn verify_join_nerve(model: &CylinderModel) -> Result<bool, SimplicialError> {
    let whole = nerve(&model.union_family())?;
    let parts = (0..model.families())
        .map(|c| nerve(&model.coordinate_family(c)))
        .collect::<Result<Vec<_>, _>>()?;
    let joined = SimplicialComplex::join_all(&parts).ok_or(SimplicialError::Empty)?;
    Ok(whole == joined)
}

/// Join of the boundaries of simplices of the given dimensions.
pub fn join_of_boundaries(ks: &[u32]) -> Result<SimplicialComplex, SimplicialError> {
    let parts = ks
        .iter()
        .map(|&k| SimplicialComplex::boundary_complex(k))
        .collect::<Result<Vec<_>, _>>()?;
    SimplicialComplex::join_all(&parts).ok_or(SimplicialError::Empty)
}

/// All tuples of positive integers with sum at most `max_total`.
pub fn compositions_up_to(max_total: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for k in 1..=left {
            cur.push(k);
            rec(left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_total, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(id: u32) -> Vertex {
        Vertex::new(0, id)
    }

    #[test]
    fn from_maximal_examples() {
        let tri = SimplicialComplex::from_ids(&[&[1, 2, 3]]).unwrap();
        assert_eq!(tri.f_vector(), vec![3, 3, 1]);
        assert_eq!(tri.simplices().count(), 7);
        let two = SimplicialComplex::from_ids(&[&[1], &[2]]).unwrap();
        assert_eq!(two.f_vector(), vec![2]);
        let hollow = SimplicialComplex::from_ids(&[&[1, 2], &[2, 3], &[1, 3]]).unwrap();
        assert_eq!(hollow, {
            let b = SimplicialComplex::boundary_complex(2).unwrap();
            let shift = |c: &SimplicialComplex| c.to_text();
            assert_eq!(shift(&b), "0 1\n0 2\n1 2");
            SimplicialComplex::from_ids(&[&[1, 2], &[2, 3], &[1, 3]]).unwrap()
        });
        assert_eq!(
            SimplicialComplex::from_maximal(Vec::<Vec<Vertex>>::new()),
            Err(SimplicialError::Empty)
        );
    }

    #[test]
    fn boundary_examples() {
        let s0 = SimplicialComplex::boundary_complex(1).unwrap();
        assert_eq!(s0.f_vector(), vec![2]);
        let s1 = SimplicialComplex::boundary_complex(2).unwrap();
        assert_eq!(s1.f_vector(), vec![3, 3]);
        for k in 1..=6 {
            assert_eq!(SimplicialComplex::boundary_complex(k).unwrap().dim(), k as usize - 1);
        }
        assert_eq!(
            SimplicialComplex::boundary_complex(0),
            Err(SimplicialError::DegenerateBoundary)
        );
    }

    #[test]
    fn join_examples() {
        let p = SimplicialComplex::point();
        let edge = p.join(&p);
        assert_eq!(edge.f_vector(), vec![2, 1]);
        let s0 = SimplicialComplex::boundary_complex(1).unwrap();
        let square = s0.join(&s0);
        assert_eq!(square.f_vector(), vec![4, 4]);
        assert!(square.reduced_homology().is_sphere_of_dim(1));
        let s1 = SimplicialComplex::boundary_complex(2).unwrap();
        let s3 = s1.join(&s1);
        assert_eq!(s3.dim(), 3);
        assert_eq!(s3.facets().len(), 9);
        assert!(s3.reduced_homology().is_sphere_of_dim(3));
    }

    #[test]
    fn join_tags_are_disjoint() {
        let a = SimplicialComplex::boundary_complex(1).unwrap();
        let j = a.join(&a).join(&a);
        let tags: BTreeSet<u32> = j.vertices().iter().map(|v| v.tag).collect();
        assert_eq!(tags, BTreeSet::from([0, 1, 2]));
        assert_eq!(j.vertices().len(), 6);
    }

    #[test]
    fn nerve_examples() {
        let overlap = FiniteSets::from_slices(&[&[1, 2], &[2, 3]]);
        assert_eq!(nerve(&overlap).unwrap().f_vector(), vec![2, 1]);
        let triangle = FiniteSets::from_slices(&[&[1, 2], &[2, 3], &[3, 1]]);
        let n = nerve(&triangle).unwrap();
        assert_eq!(n, SimplicialComplex::boundary_complex(2).unwrap());
        let disjoint = FiniteSets::from_slices(&[&[1], &[2], &[3]]);
        assert_eq!(nerve(&disjoint).unwrap().f_vector(), vec![3]);
        let bad = FiniteSets::from_slices(&[&[1], &[]]);
        assert_eq!(nerve(&bad), Err(SimplicialError::EmptyMember(1)));
    }

    #[test]
    fn homology_examples() {
        let circle = SimplicialComplex::boundary_complex(2).unwrap().reduced_homology();
        assert_eq!(circle.rank(1), 1);
        assert_eq!(circle.rank(0), 0);
        assert!(SimplicialComplex::simplex(3).reduced_homology().is_acyclic());
        let s0 = SimplicialComplex::boundary_complex(1).unwrap().reduced_homology();
        assert!(s0.is_sphere_of_dim(0));
        let two_points_and_edge = SimplicialComplex::from_ids(&[&[1, 2], &[3]]).unwrap();
        assert_eq!(two_points_and_edge.reduced_homology().rank(0), 1);
    }

    // The six-vertex triangulation of the projective plane has H~_1 = Z/2.
    #[test]
    fn projective_plane_torsion() {
        let rp2 = SimplicialComplex::from_ids(&[
            &[1, 2, 3], &[1, 3, 4], &[1, 4, 5], &[1, 5, 6], &[1, 6, 2],
            &[2, 3, 5], &[3, 4, 6], &[4, 5, 2], &[5, 6, 3], &[6, 2, 4],
        ])
        .unwrap();
        let h = rp2.reduced_homology();
        assert_eq!(h.groups[1].torsion, vec![BigInt::from(2)]);
        assert_eq!(h.rank(1), 0);
        assert_eq!(h.rank(2), 0);
        assert_eq!(h.reduced_euler(), rp2.euler_characteristic() - 1);
    }

    #[test]
    fn text_round_trip() {
        let s = SimplicialComplex::boundary_complex(2).unwrap();
        let j = s.join(&SimplicialComplex::point());
        assert_eq!(SimplicialComplex::parse_text(&j.to_text()).unwrap(), j);
        assert!(j.to_text().contains("1:0"));
        assert!(SimplicialComplex::parse_text("1 x").is_err());
    }

    #[test]
    fn cones_are_acyclic() {
        for k in 1..=4 {
            let cone = SimplicialComplex::boundary_complex(k).unwrap().join(&SimplicialComplex::point());
            assert!(cone.reduced_homology().is_acyclic());
        }
    }

    #[test]
    fn compositions_count() {
        // Compositions of m number 2^(m-1); summed over 1..=6 that is 63.
        assert_eq!(compositions_up_to(6).len(), 63);
        assert!(compositions_up_to(6).iter().all(|c| c.iter().sum::<u32>() <= 6));
    }

    #[test]
    fn cylinder_examples() {
        let arcs: Vec<BTreeSet<u32>> = vec![[0, 1].into(), [1, 2, 3].into(), [3, 4, 0].into()];
        let m = CylinderModel::new(vec![5, 5], vec![arcs.clone(), arcs]).unwrap();
        assert!(verify_join_nerve(&m).unwrap());
        let single = CylinderModel::new(vec![1, 1], vec![vec![[0].into()], vec![[0].into()]]).unwrap();
        assert!(verify_join_nerve(&single).unwrap());
        let whole = nerve(&single.union_family()).unwrap();
        assert_eq!(whole.f_vector(), vec![2, 1]);
        let pair: Vec<BTreeSet<u32>> = vec![[0].into(), [1].into()];
        let m3 = CylinderModel::new(vec![2, 2, 2], vec![pair.clone(), pair.clone(), pair]).unwrap();
        assert!(verify_join_nerve(&m3).unwrap());
        let n = nerve(&m3.union_family()).unwrap();
        assert!(n.reduced_homology().is_sphere_of_dim(2));
    }

    #[test]
    fn non_cylinders_are_rejected() {
        let m = CylinderModel::new(vec![2, 2], vec![vec![[0].into()], vec![[1].into()]]).unwrap();
        let fam = m.union_family();
        // point 3 = (1,1); the set {0, 3} is a diagonal, not a cylinder
        let families = vec![vec![fam.sets[0].clone()], vec![[0, 3].into()]];
        assert_eq!(
            CylinderModel::from_point_sets(vec![2, 2], &families),
            Err(SimplicialError::NotCylinder { family: 1, member: 0 })
        );
        let ok = vec![vec![fam.sets[0].clone()], vec![fam.sets[1].clone()]];
        assert_eq!(CylinderModel::from_point_sets(vec![2, 2], &ok).unwrap(), m);
        assert!(CylinderModel::new(vec![2], vec![vec![[2].into()]]).is_err());
    }

    #[test]
    fn random_cylinder_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..50 {
            let m = CylinderModel::random(&mut rng, 3);
            assert!(verify_join_nerve(&m).unwrap());
        }
    }

    proptest! {
        #[test]
        fn join_dimension_adds(a in 1u32..4, b in 1u32..4) {
            let x = SimplicialComplex::boundary_complex(a).unwrap();
            let y = SimplicialComplex::simplex(b);
            prop_assert_eq!(x.join(&y).dim(), x.dim() + y.dim() + 1);
        }

        #[test]
        fn nerve_is_closed_and_euler_matches(sets in prop::collection::vec(prop::collection::btree_set(0u32..6, 1..4), 1..6)) {
            let fam = FiniteSets::new(sets);
            let n = nerve(&fam).unwrap();
            for s in n.simplices() {
                for sub in subsets(s) {
                    prop_assert!(n.contains(&sub));
                }
            }
            let h = n.reduced_homology();
            prop_assert_eq!(h.reduced_euler(), n.euler_characteristic() - 1);
        }
    }

    #[test]
    fn vertex_display() {
        assert_eq!(v(3).to_string(), "3");
        assert_eq!(Vertex::new(2, 1).to_string(), "2:1");
    }
}
