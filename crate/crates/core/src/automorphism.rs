//! Automorphisms of `F_n` as basis-image tables.
//!
//! Products follow the left-to-right convention: in the product `ab` the
//! automorphism `a` acts first, so `apply(a.compose(b), w) == apply(b, apply(a, w))`.
//! Every automorphism is built from the atomic generators below, which keeps
//! an atomic factorization around as an inverse witness. Equality only looks
//! at the basis images.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::IntMatrix;
use crate::words::{Letter, Word, WordError};

pub const DEFAULT_ORDER_CUTOFF: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("`{name}` is not defined in rank {rank}")]
    BadIndex { name: String, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("operation needs an atomic factorization")]
    MissingFactorization,
    #[error("abelianization has determinant {0}; not an automorphism")]
    NotUnimodular(String),
    #[error("rank {rank} is below the required minimum {min}")]
    RankTooSmall { rank: usize, min: usize },
}

/// Named generators. Indices are 1-based basis positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomicName {
    /// Right Nielsen map `x_i -> x_i x_j`.
    Rho(usize, usize),
    /// Left Nielsen map `x_i -> x_j x_i`.
    Lambda(usize, usize),
    /// Basis swap `x_i <-> x_j`; `Transposition(i, i)` is the identity.
    Transposition(usize, usize),
    /// `x_i -> x_i^-1`.
    Flip(usize),
    /// `x_k -> x_{k+1}` for `k < m`, `x_m -> x_1`.
    Cycle(usize),
    Identity,
}

impl AtomicName {
    fn validate(self, rank: usize) -> Result<(), AutError> {
        let ok = |i: usize| (1..=rank).contains(&i);
        let valid = match self {
            AtomicName::Rho(i, j) | AtomicName::Lambda(i, j) => ok(i) && ok(j) && i != j,
            AtomicName::Transposition(i, j) => ok(i) && ok(j),
            AtomicName::Flip(i) => ok(i),
            AtomicName::Cycle(m) => ok(m),
            AtomicName::Identity => true,
        };
        if valid {
            Ok(())
        } else {
            Err(AutError::BadIndex {
                name: self.to_string(),
                rank,
            })
        }
    }

    /// Largest basis index this generator touches.
    pub fn support_max(self) -> usize {
        match self {
            AtomicName::Rho(i, j) | AtomicName::Lambda(i, j) | AtomicName::Transposition(i, j) => {
                i.max(j)
            }
            AtomicName::Flip(i) => i,
            AtomicName::Cycle(m) => m,
            AtomicName::Identity => 0,
        }
    }

    /// Sign of the determinant of the abelianized generator.
    pub fn det_sign(self) -> i8 {
        match self {
            AtomicName::Rho(..) | AtomicName::Lambda(..) | AtomicName::Identity => 1,
            AtomicName::Transposition(i, j) if i == j => 1,
            AtomicName::Transposition(..) | AtomicName::Flip(_) => -1,
            AtomicName::Cycle(m) => {
                if m % 2 == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    fn images(self, rank: usize, inverse: bool) -> Vec<Word> {
        let mut images: Vec<Vec<Letter>> = (1..=rank).map(|k| vec![Letter::pos(k)]).collect();
        match self {
            AtomicName::Rho(i, j) => {
                let tail = if inverse { Letter::neg(j) } else { Letter::pos(j) };
                images[i - 1] = vec![Letter::pos(i), tail];
            }
            AtomicName::Lambda(i, j) => {
                let head = if inverse { Letter::neg(j) } else { Letter::pos(j) };
                images[i - 1] = vec![head, Letter::pos(i)];
            }
            AtomicName::Transposition(i, j) => images.swap(i - 1, j - 1),
            AtomicName::Flip(i) => images[i - 1] = vec![Letter::neg(i)],
            AtomicName::Cycle(m) => {
                for k in 1..=m {
                    let target = if inverse {
                        if k == 1 {
                            m
                        } else {
                            k - 1
                        }
                    } else if k == m {
                        1
                    } else {
                        k + 1
                    };
                    images[k - 1] = vec![Letter::pos(target)];
                }
            }
            AtomicName::Identity => {}
        }
        images
            .into_iter()
            .map(|l| Word::reduce(rank, l).expect("atomic images stay in rank"))
            .collect()
    }
}

impl fmt::Display for AtomicName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AtomicName::Rho(i, j) => write!(f, "rho({i},{j})"),
            AtomicName::Lambda(i, j) => write!(f, "lam({i},{j})"),
            AtomicName::Transposition(i, j) => write!(f, "t({i},{j})"),
            AtomicName::Flip(i) => write!(f, "e({i})"),
            AtomicName::Cycle(m) => write!(f, "cyc({m})"),
            AtomicName::Identity => write!(f, "id"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AtomicFactor {
    pub name: AtomicName,
    pub inverse: bool,
}

/// A product of atomic generators, read left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AtomicWord(pub Vec<AtomicFactor>);

impl AtomicWord {
    pub fn single(name: AtomicName) -> Self {
        AtomicWord(vec![AtomicFactor {
            name,
            inverse: false,
        }])
    }

    pub fn inverse(&self) -> Self {
        AtomicWord(
            self.0
                .iter()
                .rev()
                .map(|f| AtomicFactor {
                    name: f.name,
                    inverse: !f.inverse,
                })
                .collect(),
        )
    }

    fn concat(&self, other: &AtomicWord) -> AtomicWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        AtomicWord(v)
    }
}

impl fmt::Display for AtomicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        for (k, factor) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", factor.name)?;
            if factor.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// Result of an order search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(u32),
    ExceedsCutoff(u32),
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::ExceedsCutoff(_) => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::ExceedsCutoff(c) => write!(f, ">{c}"),
        }
    }
}

/// Index map and sign vector of an automorphism sending each basis element
/// to a basis element or its inverse: `x_i -> x_{perm[i-1]}^{signs[i-1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Automorphism {
    rank: usize,
    images: Vec<Word>,
    factorization: Option<AtomicWord>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.images == other.images
    }
}

impl Eq for Automorphism {}

impl Hash for Automorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.images.hash(state);
    }
}

impl Automorphism {
    pub fn identity(rank: usize) -> Self {
        Automorphism {
            rank,
            images: (1..=rank)
                .map(|k| Word::generator(rank, k).expect("in rank"))
                .collect(),
            factorization: Some(AtomicWord::default()),
        }
    }

    pub fn atomic(name: AtomicName, rank: usize) -> Result<Self, AutError> {
        name.validate(rank)?;
        Ok(Automorphism {
            rank,
            images: name.images(rank, false),
            factorization: Some(AtomicWord::single(name)),
        })
    }

    /// Closed-form inverse of an atomic generator.
    pub fn atomic_inverse(name: AtomicName, rank: usize) -> Result<Self, AutError> {
        name.validate(rank)?;
        Ok(Automorphism {
            rank,
            images: name.images(rank, true),
            factorization: Some(AtomicWord::single(name).inverse()),
        })
    }

    /// Evaluate an atomic word left to right.
    pub fn from_atomic_word(word: &AtomicWord, rank: usize) -> Result<Self, AutError> {
        let mut acc = Automorphism::identity(rank);
        for factor in &word.0 {
            let next = if factor.inverse {
                Automorphism::atomic_inverse(factor.name, rank)?
            } else {
                Automorphism::atomic(factor.name, rank)?
            };
            acc = acc.compose(&next)?;
        }
        Ok(acc)
    }

    /// Left-to-right product of a sequence of automorphisms.
    pub fn product<'a, I>(rank: usize, factors: I) -> Result<Self, AutError>
    where
        I: IntoIterator<Item = &'a Automorphism>,
    {
        factors
            .into_iter()
            .try_fold(Automorphism::identity(rank), |acc, f| acc.compose(f))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn factorization(&self) -> Option<&AtomicWord> {
        self.factorization.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, w)| w.letters() == [Letter::pos(k + 1)])
    }

    fn check_rank(&self, other: &Automorphism) -> Result<(), AutError> {
        if self.rank != other.rank {
            return Err(AutError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    fn compose_images(&self, other: &Automorphism) -> Vec<Word> {
        self.images
            .iter()
            .map(|w| w.substitute(&other.images).expect("ranks checked"))
            .collect()
    }

    /// The product `self * other`: `self` acts first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, AutError> {
        self.check_rank(other)?;
        let factorization = match (&self.factorization, &other.factorization) {
            (Some(a), Some(b)) => Some(a.concat(b)),
            _ => None,
        };
        Ok(Automorphism {
            rank: self.rank,
            images: self.compose_images(other),
            factorization,
        })
    }

    pub fn apply(&self, w: &Word) -> Result<Word, AutError> {
        if w.rank() != self.rank {
            return Err(AutError::RankMismatch {
                left: self.rank,
                right: w.rank(),
            });
        }
        Ok(w.substitute(&self.images)?)
    }

    /// Inverse obtained by reversing the factorization and inverting each atom.
    pub fn inverse(&self) -> Result<Automorphism, AutError> {
        let word = self
            .factorization
            .as_ref()
            .ok_or(AutError::MissingFactorization)?;
        Automorphism::from_atomic_word(&word.inverse(), self.rank)
    }

    pub fn pow(&self, exponent: i64) -> Result<Automorphism, AutError> {
        let base = if exponent < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut acc = Automorphism::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.compose(&base)?;
        }
        Ok(acc)
    }

    /// Least `m <= cutoff` with `self^m = 1`.
    pub fn order(&self, cutoff: u32) -> Order {
        let mut power = self.images.clone();
        for m in 1..=cutoff {
            let current = Automorphism {
                rank: self.rank,
                images: power,
                factorization: None,
            };
            if current.is_identity() {
                return Order::Finite(m);
            }
            power = current.compose_images(self);
        }
        Order::ExceedsCutoff(cutoff)
    }

    /// `[a, b] = a b a^-1 b^-1`, read left to right.
    pub fn commutator(a: &Automorphism, b: &Automorphism) -> Result<Automorphism, AutError> {
        Automorphism::product(a.rank, [a, b, &a.inverse()?, &b.inverse()?])
    }

    /// `g^-1 a g`, read left to right. Conjugating `e_i` by the basis
    /// permutation `x_k -> x_{s(k)}` gives `e_{s(i)}`.
    pub fn conjugate(&self, g: &Automorphism) -> Result<Automorphism, AutError> {
        Automorphism::product(self.rank, [&g.inverse()?, self, g])
    }

    pub fn commutes_with(&self, other: &Automorphism) -> Result<bool, AutError> {
        self.check_rank(other)?;
        Ok(self.compose_images(other) == other.compose_images(self))
    }

    /// Row `i` holds the exponent sums of `self(x_i)`, so that
    /// `abelianization(a * b) = abelianization(a) · abelianization(b)`.
    pub fn abelianization(&self) -> IntMatrix {
        let rows = self
            .images
            .iter()
            .map(|w| (1..=self.rank).map(|j| w.exponent_sum(j)).collect())
            .collect();
        IntMatrix::from_rows(rows)
    }

    /// Determinant of the abelianization, which must be `±1`.
    pub fn determinant_sign(&self) -> Result<i8, AutError> {
        let det = self.abelianization().determinant();
        if det.is_one() {
            Ok(1)
        } else if det.is_negative() && det.abs().is_one() {
            Ok(-1)
        } else {
            debug_assert!(!det.is_zero() || self.rank == 0);
            Err(AutError::NotUnimodular(det.to_string()))
        }
    }

    pub fn signed_permutation(&self) -> Option<SignedPermutation> {
        let mut perm = Vec::with_capacity(self.rank);
        let mut signs = Vec::with_capacity(self.rank);
        let mut seen = vec![false; self.rank + 1];
        for w in &self.images {
            let [l] = w.letters() else {
                return None;
            };
            if std::mem::replace(&mut seen[l.index()], true) {
                return None;
            }
            perm.push(l.index());
            signs.push(if l.is_inverse() { -1 } else { 1 });
        }
        Some(SignedPermutation { perm, signs })
    }

    pub fn is_signed_permutation(&self) -> bool {
        self.signed_permutation().is_some()
    }

    /// Embed `Aut(F_{n-1})` into `SAut(F_n)`: keep the images of
    /// `x_1..x_{n-1}` and send `x_n` to `x_n^{det}`.
    pub fn psi_embed(&self) -> Result<Automorphism, AutError> {
        if self.rank < 3 {
            return Err(AutError::RankTooSmall {
                rank: self.rank,
                min: 3,
            });
        }
        let n = self.rank + 1;
        let det = self.determinant_sign()?;
        let mut images = self
            .images
            .iter()
            .map(|w| w.lift(n))
            .collect::<Result<Vec<_>, _>>()?;
        images.push(Word::reduce(n, [Letter::new(n, det < 0)])?);
        let factorization = self.factorization.as_ref().map(|word| {
            let mut out = Vec::new();
            for f in &word.0 {
                out.push(*f);
                if f.name.det_sign() < 0 {
                    out.push(AtomicFactor {
                        name: AtomicName::Flip(n),
                        inverse: false,
                    });
                }
            }
            AtomicWord(out)
        });
        Ok(Automorphism {
            rank: n,
            images,
            factorization,
        })
    }

    /// Candidate preimage under [`Automorphism::psi_embed`]: drop the
    /// `e(n)` atoms from the factorization and evaluate in rank `n-1`.
    /// Returns `None` when some other atom touches `x_n`; callers verify the
    /// candidate by embedding it again.
    pub fn psi_preimage(&self) -> Option<Automorphism> {
        let n = self.rank;
        let word = self.factorization.as_ref()?;
        let mut kept = Vec::new();
        for f in &word.0 {
            match f.name {
                AtomicName::Flip(i) if i == n => {}
                name if name.support_max() >= n => return None,
                _ => kept.push(*f),
            }
        }
        Automorphism::from_atomic_word(&AtomicWord(kept), n - 1).ok()
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(k, w)| format!("x{} -> {}", k + 1, w))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
