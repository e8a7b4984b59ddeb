//! Permutations of [n] in one-line notation, words in the simple
//! transpositions s_1..s_{n-1}, subexpressions, and shifted Gale orders.
//!
//! Permutations act on positions: `u.mul_generator(i)` is `u·s_i` and swaps
//! the entries in positions i and i+1. A word evaluates left to right.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("images {0:?} are not a permutation of 1..=n")]
    NotPermutation(Vec<usize>),
    #[error("letter {letter} out of range 1..={max}")]
    InvalidLetter { letter: usize, max: usize },
    #[error("mask length {mask} does not match word length {word}")]
    MaskLength { mask: usize, word: usize },
    #[error("word is not reduced")]
    NotReduced,
    #[error("permutation size {got} does not match word size {want}")]
    SizeMismatch { got: usize, want: usize },
    #[error("no subexpression of the word evaluates to {0}")]
    NoSubexpression(Permutation),
    #[error("subsets {0:?} and {1:?} differ in size")]
    SubsetSize(Vec<usize>, Vec<usize>),
    #[error("index {0} outside 1..={1}")]
    IndexRange(usize, usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, CoxeterError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            if x == 0 || x > n || seen[x] {
                return Err(CoxeterError::NotPermutation(images));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// v(x), 1-based.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation { images: other.images.iter().map(|&x| self.apply(x)).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (pos, &x) in self.images.iter().enumerate() {
            inv[x - 1] = pos + 1;
        }
        Permutation { images: inv }
    }

    /// self · s_i.
    pub fn mul_generator(&self, i: usize) -> Permutation {
        let mut images = self.images.clone();
        images.swap(i - 1, i);
        Permutation { images }
    }

    /// ℓ(self · s_i) > ℓ(self).
    pub fn ascends_at(&self, i: usize) -> bool {
        self.images[i - 1] < self.images[i]
    }

    pub fn length(&self) -> usize {
        let v = &self.images;
        let mut count = 0;
        for a in 0..v.len() {
            for b in a + 1..v.len() {
                if v[a] > v[b] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn sign(&self) -> i32 {
        if self.length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// No descents outside position k.
    pub fn is_grassmannian(&self, k: usize) -> bool {
        (1..self.n()).all(|i| i == k || self.ascends_at(i))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(p, &x)| x == p + 1)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() >= 10 { " " } else { "" };
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    n: usize,
    letters: Vec<usize>,
}

impl Word {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self, CoxeterError> {
        for &l in &letters {
            if l == 0 || l >= n {
                return Err(CoxeterError::InvalidLetter { letter: l, max: n.saturating_sub(1) });
            }
        }
        Ok(Word { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

pub fn evaluate_word(w: &Word) -> Permutation {
    evaluate_letters(w.n, &w.letters)
}

pub fn evaluate_letters(n: usize, letters: &[usize]) -> Permutation {
    letters.iter().fold(Permutation::identity(n), |u, &l| u.mul_generator(l))
}

pub fn length(p: &Permutation) -> usize {
    p.length()
}

pub fn is_reduced(w: &Word) -> bool {
    let mut u = Permutation::identity(w.n);
    for &l in &w.letters {
        if !u.ascends_at(l) {
            return false;
        }
        u = u.mul_generator(l);
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubexpressionMask {
    word: Word,
    selected: Vec<bool>,
}

impl SubexpressionMask {
    pub fn new(word: Word, selected: Vec<bool>) -> Result<Self, CoxeterError> {
        if word.len() != selected.len() {
            return Err(CoxeterError::MaskLength { mask: selected.len(), word: word.len() });
        }
        Ok(SubexpressionMask { word, selected })
    }

    /// Parses "101"-style strings.
    pub fn from_bits(word: Word, bits: &str) -> Result<Self, CoxeterError> {
        let selected = bits.chars().map(|c| c == '1').collect();
        Self::new(word, selected)
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn selected(&self) -> &[bool] {
        &self.selected
    }

    pub fn selected_letters(&self) -> Vec<usize> {
        self.word.letters.iter().zip(&self.selected).filter(|(_, &s)| s).map(|(&l, _)| l).collect()
    }

    pub fn evaluate(&self) -> Permutation {
        evaluate_letters(self.word.n, &self.selected_letters())
    }

    pub fn bits(&self) -> String {
        self.selected.iter().map(|&s| if s { '1' } else { '0' }).collect()
    }
}

pub fn is_distinguished(m: &SubexpressionMask) -> bool {
    let mut u = Permutation::identity(m.word.n);
    for (&l, &sel) in m.word.letters.iter().zip(&m.selected) {
        if !u.ascends_at(l) && !sel {
            return false;
        }
        if sel {
            u = u.mul_generator(l);
        }
    }
    true
}

pub fn is_positive(m: &SubexpressionMask) -> bool {
    is_distinguished(m) && is_reduced(&Word { n: m.word.n, letters: m.selected_letters() })
}

/// The unique positive subexpression of the reduced word `v` for `u`, built
/// right to left: a letter is taken exactly when it shortens the running
/// suffix target.
pub fn positive_subexpression(v: &Word, u: &Permutation) -> Result<SubexpressionMask, CoxeterError> {
    if u.n() != v.n {
        return Err(CoxeterError::SizeMismatch { got: u.n(), want: v.n });
    }
    if !is_reduced(v) {
        return Err(CoxeterError::NotReduced);
    }
    let mut target = u.clone();
    let mut selected = vec![false; v.len()];
    for (pos, &l) in v.letters.iter().enumerate().rev() {
        if !target.ascends_at(l) {
            selected[pos] = true;
            target = target.mul_generator(l);
        }
    }
    if !target.is_identity() {
        return Err(CoxeterError::NoSubexpression(u.clone()));
    }
    Ok(SubexpressionMask { word: v.clone(), selected })
}

/// Position of x in the order i <_i i+1 <_i … <_i n <_i 1 <_i … <_i i-1.
pub fn shifted_rank(i: usize, n: usize, x: usize) -> usize {
    (x + n - i) % n
}

/// Sorts a subset by <_i.
pub fn sorted_by_shift(i: usize, n: usize, set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_by_key(|&x| shifted_rank(i, n, x));
    v
}

/// I ⊴_i J.
pub fn gale_leq(i: usize, n: usize, a: &[usize], b: &[usize]) -> Result<bool, CoxeterError> {
    if a.len() != b.len() {
        return Err(CoxeterError::SubsetSize(a.to_vec(), b.to_vec()));
    }
    if i == 0 || i > n {
        return Err(CoxeterError::IndexRange(i, n));
    }
    let sa = sorted_by_shift(i, n, a);
    let sb = sorted_by_shift(i, n, b);
    Ok(sa.iter().zip(&sb).all(|(&x, &y)| shifted_rank(i, n, x) <= shifted_rank(i, n, y)))
}

/// I ◁_i J: I ⊴_i J and I ≠ J.
pub fn gale_lt(i: usize, n: usize, a: &[usize], b: &[usize]) -> Result<bool, CoxeterError> {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    Ok(gale_leq(i, n, a, b)? && sa != sb)
}
