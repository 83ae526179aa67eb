//! Freely reduced words in the free group `F_n` on the basis `x_1, ..., x_n`.
//!
//! A [`Word`] is always stored in freely reduced form and always carries the
//! rank of its ambient free group. Operations between words of different rank
//! are rejected; use [`Word::lift`] to move a word into a larger free group
//! explicitly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {index} outside 1..={rank}")]
    RankViolation { index: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("expected {expected} basis images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("cannot parse word `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// A basis element `x_i` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    index: u32,
    inverse: bool,
}

impl Letter {
    /// `x_index`, or `x_index^-1` when `inverse` is set. Indices start at 1.
    pub fn new(index: usize, inverse: bool) -> Self {
        assert!(index >= 1, "generator indices start at 1");
        Letter {
            index: index as u32,
            inverse,
        }
    }

    pub fn pos(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn neg(index: usize) -> Self {
        Letter::new(index, true)
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    /// `+1` for `x_i`, `-1` for `x_i^-1`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inv(self) -> Self {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

/// A freely reduced word of `F_rank`. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The single-letter word `x_index`.
    pub fn generator(rank: usize, index: usize) -> Result<Self, WordError> {
        Word::reduce(rank, [Letter::pos(index)])
    }

    /// Freely reduce a raw letter sequence.
    pub fn reduce<I>(rank: usize, letters: I) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut out = Vec::new();
        for l in letters {
            if l.index() == 0 || l.index() > rank {
                return Err(WordError::RankViolation {
                    index: l.index(),
                    rank,
                });
            }
            push_reduced(&mut out, l);
        }
        Ok(Word { rank, letters: out })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<(), WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn concat(&self, other: &Word) -> Result<Word, WordError> {
        self.check_rank(other)?;
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(Word {
            rank: self.rank,
            letters: out,
        })
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// Replace every `x_i` by `images[i-1]` and every `x_i^-1` by its inverse.
    pub fn substitute(&self, images: &[Word]) -> Result<Word, WordError> {
        if images.len() != self.rank {
            return Err(WordError::ImageCount {
                expected: self.rank,
                got: images.len(),
            });
        }
        let target_rank = images.first().map(|w| w.rank).unwrap_or(self.rank);
        if let Some(bad) = images.iter().find(|w| w.rank != target_rank) {
            return Err(WordError::RankMismatch {
                left: target_rank,
                right: bad.rank,
            });
        }
        let mut out = Vec::new();
        for &l in &self.letters {
            let image = &images[l.index() - 1];
            if l.is_inverse() {
                for &m in image.letters.iter().rev() {
                    push_reduced(&mut out, m.inv());
                }
            } else {
                for &m in &image.letters {
                    push_reduced(&mut out, m);
                }
            }
        }
        Ok(Word {
            rank: target_rank,
            letters: out,
        })
    }

    /// Exponent sum of `x_index` in this word.
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.index() == index)
            .map(|l| l.sign())
            .sum()
    }

    /// The same word viewed in `F_rank` for a rank at least as large.
    pub fn lift(&self, rank: usize) -> Result<Word, WordError> {
        if rank < self.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: rank,
            });
        }
        Ok(Word {
            rank,
            letters: self.letters.clone(),
        })
    }

    /// The same word viewed in a smaller free group, if it only uses
    /// generators below the new rank.
    pub fn restrict(&self, rank: usize) -> Option<Word> {
        if self.letters.iter().any(|l| l.index() > rank) {
            return None;
        }
        Some(Word {
            rank,
            letters: self.letters.clone(),
        })
    }

    /// Parse `x1*x2^-1*x3` (whitespace-insensitive); `1` is the empty word.
    pub fn parse(rank: usize, text: &str) -> Result<Word, WordError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |reason: &str| WordError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if compact == "1" {
            return Ok(Word::identity(rank));
        }
        if compact.is_empty() {
            return Err(err("empty input; use `1` for the identity"));
        }
        let mut letters = Vec::new();
        for token in compact.split('*') {
            let body = token.strip_prefix('x').ok_or_else(|| err("expected `x<i>`"))?;
            let (digits, inverse) = match body.split_once('^') {
                None => (body, false),
                Some((d, "-1")) => (d, true),
                Some((d, "1")) => (d, false),
                Some(_) => return Err(err("only exponents 1 and -1 are allowed")),
            };
            let index: usize = digits.parse().map_err(|_| err("bad generator index"))?;
            if index == 0 {
                return Err(WordError::RankViolation { index, rank });
            }
            letters.push(Letter::new(index, inverse));
        }
        Word::reduce(rank, letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses at the smallest rank that contains every letter used.
impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let loose = Word::parse(usize::MAX, s)?;
        let rank = loose.letters.iter().map(|l| l.index()).max().unwrap_or(0);
        Ok(Word {
            rank,
            letters: loose.letters,
        })
    }
}
