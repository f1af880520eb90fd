//! Words over `[n]` and finitely supported permutations of `[n]^m`.
//!
//! A [`TuplePerm`] stores only its moved points. Products are written
//! left to right: `p.compose(&q)` applies `p` first and then `q`.

use std::borrow::Borrow;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A tuple of letters from `[n] = {1, .., n}`.
///
/// The alphabet size is not stored; it is checked by whatever consumes the
/// word (usually a [`TuplePerm`]).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::LetterOutOfRange { letter: bad, n: 0 });
        }
        Ok(Word(letters))
    }

    /// Builds a word and checks every letter lies in `[n]`.
    pub fn over(n: u32, letters: Vec<u32>) -> Result<Self> {
        let w = Word::new(letters)?;
        w.check_alphabet(n)?;
        Ok(w)
    }

    pub(crate) fn from_vec_unchecked(letters: Vec<u32>) -> Self {
        debug_assert!(!letters.is_empty());
        Word(letters)
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn check_alphabet(&self, n: u32) -> Result<()> {
        match self.0.iter().find(|&&l| l == 0 || l > n) {
            Some(&letter) => Err(Error::LetterOutOfRange { letter, n }),
            None => Ok(()),
        }
    }

    /// Coordinate reversal `(w_m, .., w_1)`.
    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.arity() + other.arity());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn head(&self, len: usize) -> &[u32] {
        &self.0[..len]
    }

    pub fn tail(&self, len: usize) -> &[u32] {
        &self.0[self.0.len() - len..]
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        Word::new(v)
    }
}

impl From<Word> for Vec<u32> {
    fn from(w: Word) -> Self {
        w.0
    }
}

impl Borrow<[u32]> for Word {
    fn borrow(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `n^m` as a 64-bit count, if it fits.
pub fn space_size(n: u32, arity: usize) -> Option<u64> {
    u64::from(n).checked_pow(u32::try_from(arity).ok()?)
}

/// Position of `w` in the lexicographic listing of `[n]^m`, starting at 1.
pub fn lex_rank(w: &Word, n: u32) -> Result<u64> {
    w.check_alphabet(n)?;
    let overflow = || Error::IndexOverflow { n, arity: w.arity() };
    space_size(n, w.arity()).ok_or_else(overflow)?;
    let rank = w
        .letters()
        .iter()
        .fold(0u64, |acc, &l| acc * u64::from(n) + u64::from(l - 1));
    Ok(rank + 1)
}

/// Inverse of [`lex_rank`].
pub fn lex_unrank(index: u64, n: u32, arity: usize) -> Result<Word> {
    if n == 0 {
        return Err(Error::AlphabetTooSmall { n, min: 1 });
    }
    if arity == 0 {
        return Err(Error::EmptyWord);
    }
    let max = space_size(n, arity).ok_or(Error::IndexOverflow { n, arity })?;
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { index, max });
    }
    let mut rest = index - 1;
    let mut letters = vec![0u32; arity];
    for slot in letters.iter_mut().rev() {
        *slot = (rest % u64::from(n)) as u32 + 1;
        rest /= u64::from(n);
    }
    Ok(Word(letters))
}

/// All tuples of `[n]^len` in lexicographic order. `len = 0` yields one
/// empty tuple.
pub fn tuples(n: u32, len: usize) -> impl Iterator<Item = Vec<u32>> {
    let mut next = if n == 0 && len > 0 {
        None
    } else {
        Some(vec![1u32; len])
    };
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        while i > 0 {
            i -= 1;
            if succ[i] < n {
                succ[i] += 1;
                next = Some(succ);
                break;
            }
            succ[i] = 1;
        }
        Some(current)
    })
}

/// All words of `[n]^m` in lexicographic order.
pub fn words(n: u32, arity: usize) -> impl Iterator<Item = Word> {
    assert!(arity > 0, "words have arity at least 1");
    tuples(n, arity).map(Word)
}

/// Upper limit on how many support entries a materializing operation may
/// produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub usize);

impl Budget {
    pub const DEFAULT: Budget = Budget(10_000_000);

    pub fn check(self, estimate: u128) -> Result<()> {
        if estimate > self.0 as u128 {
            Err(Error::BudgetExceeded { estimate, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

fn pow_u128(n: u32, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(u128::from(n));
    }
    acc
}

/// A permutation of `[n]^m` with finitely many moved points.
///
/// Fixed points are never stored, so structural equality is permutation
/// equality.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PermRepr", into = "PermRepr")]
pub struct TuplePerm {
    n: u32,
    arity: usize,
    moved: BTreeMap<Word, Word>,
}

impl TuplePerm {
    pub fn identity(n: u32, arity: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::AlphabetTooSmall { n, min: 1 });
        }
        if arity == 0 {
            return Err(Error::EmptyWord);
        }
        Ok(TuplePerm { n, arity, moved: BTreeMap::new() })
    }

    /// The 2-cycle exchanging `a` and `b`.
    pub fn transposition(n: u32, a: Word, b: Word) -> Result<Self> {
        if a.arity() != b.arity() {
            return Err(Error::ArityMismatch { expected: a.arity(), found: b.arity() });
        }
        let arity = a.arity();
        Self::from_cycles(n, arity, vec![vec![a, b]])
    }

    /// Builds a permutation from disjoint cycles; each cycle maps its
    /// `i`-th word to its `(i+1)`-th and the last back to the first.
    pub fn from_cycles(n: u32, arity: usize, cycles: Vec<Vec<Word>>) -> Result<Self> {
        let mut perm = Self::identity(n, arity)?;
        let mut seen = BTreeSet::new();
        for cycle in cycles {
            if cycle.len() < 2 {
                return Err(Error::DegenerateCycle);
            }
            for w in &cycle {
                perm.check_word(w)?;
                if !seen.insert(w.clone()) {
                    return Err(if cycle.len() == 2 && cycle[0] == cycle[1] {
                        Error::DegenerateCycle
                    } else {
                        Error::RepeatedWord(w.to_string())
                    });
                }
            }
            for (i, w) in cycle.iter().enumerate() {
                perm.moved.insert(w.clone(), cycle[(i + 1) % cycle.len()].clone());
            }
        }
        Ok(perm)
    }

    /// Builds a permutation from an explicit point map. Pairs `w -> w` are
    /// dropped; the remaining keys must coincide with the values.
    pub fn from_pairs<I>(n: u32, arity: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Word)>,
    {
        let mut perm = Self::identity(n, arity)?;
        for (from, to) in pairs {
            perm.check_word(&from)?;
            perm.check_word(&to)?;
            if from == to {
                continue;
            }
            if perm.moved.insert(from.clone(), to).is_some() {
                return Err(Error::NotAPermutation(format!("{from} mapped twice")));
            }
        }
        perm.check_closure()?;
        Ok(perm)
    }

    fn check_closure(&self) -> Result<()> {
        let mut images = BTreeSet::new();
        for to in self.moved.values() {
            if !images.insert(to) {
                return Err(Error::NotAPermutation(format!("{to} has two preimages")));
            }
            if !self.moved.contains_key(to) {
                return Err(Error::NotAPermutation(format!("{to} is an image but never moved")));
            }
        }
        Ok(())
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if w.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: w.arity() });
        }
        w.check_alphabet(self.n)
    }

    fn check_compatible(&self, other: &TuplePerm) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_identity(&self) -> bool {
        self.moved.is_empty()
    }

    /// Number of moved points.
    pub fn support_len(&self) -> usize {
        self.moved.len()
    }

    /// Moved points and their images, in lexicographic order of the point.
    pub fn moved(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.moved.iter()
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        Ok(self.image(w.letters()).cloned().unwrap_or_else(|| w.clone()))
    }

    /// Image of a moved point, `None` if `letters` is fixed. No validation.
    pub fn image(&self, letters: &[u32]) -> Option<&Word> {
        self.moved.get(letters)
    }

    /// Left-to-right product: the result applies `self`, then `other`.
    pub fn compose(&self, other: &TuplePerm) -> Result<TuplePerm> {
        self.check_compatible(other)?;
        let mut moved = BTreeMap::new();
        for (from, mid) in &self.moved {
            let to = other.moved.get(mid).unwrap_or(mid);
            if to != from {
                moved.insert(from.clone(), to.clone());
            }
        }
        for (from, to) in &other.moved {
            if !self.moved.contains_key(from) {
                moved.insert(from.clone(), to.clone());
            }
        }
        Ok(TuplePerm { n: self.n, arity: self.arity, moved })
    }

    pub fn inverse(&self) -> TuplePerm {
        let moved = self.moved.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        TuplePerm { n: self.n, arity: self.arity, moved }
    }

    /// `(self ⊗ other)(α, β) = (self(α), other(β))`.
    pub fn tensor(&self, other: &TuplePerm, budget: Budget) -> Result<TuplePerm> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let estimate = (self.moved.len() as u128).saturating_mul(pow_u128(n, other.arity))
            + pow_u128(n, self.arity).saturating_mul(other.moved.len() as u128);
        budget.check(estimate)?;

        let mut moved = BTreeMap::new();
        for (alpha, alpha_img) in &self.moved {
            for beta in tuples(n, other.arity) {
                let beta_img = other.moved.get(beta.as_slice()).map(|w| w.letters()).unwrap_or(&beta);
                let mut from = alpha.0.clone();
                from.extend_from_slice(&beta);
                let mut to = alpha_img.0.clone();
                to.extend_from_slice(beta_img);
                moved.insert(Word(from), Word(to));
            }
        }
        if !other.moved.is_empty() {
            for alpha in tuples(n, self.arity) {
                if self.moved.contains_key(alpha.as_slice()) {
                    continue;
                }
                for (beta, beta_img) in &other.moved {
                    let mut from = alpha.clone();
                    from.extend_from_slice(&beta.0);
                    let mut to = alpha.clone();
                    to.extend_from_slice(&beta_img.0);
                    moved.insert(Word(from), Word(to));
                }
            }
        }
        Ok(TuplePerm { n, arity: self.arity + other.arity, moved })
    }

    /// `1^{⊗left} ⊗ self ⊗ 1^{⊗right}`: acts by `self` on coordinates
    /// `left+1 ..= left+arity` and leaves the rest alone.
    pub fn embed(&self, left: usize, right: usize, budget: Budget) -> Result<TuplePerm> {
        let n = self.n;
        budget.check((self.moved.len() as u128).saturating_mul(pow_u128(n, left + right)))?;
        let mut moved = BTreeMap::new();
        for (from, to) in &self.moved {
            for prefix in tuples(n, left) {
                for suffix in tuples(n, right) {
                    let build = |core: &Word| {
                        let mut v = Vec::with_capacity(left + self.arity + right);
                        v.extend_from_slice(&prefix);
                        v.extend_from_slice(&core.0);
                        v.extend_from_slice(&suffix);
                        Word(v)
                    };
                    moved.insert(build(from), build(to));
                }
            }
        }
        Ok(TuplePerm { n, arity: left + self.arity + right, moved })
    }

    /// Finds `w` with `self = w ⊗ 1^{⊗tail}`, if there is one.
    pub fn tail_identity_split(&self, tail: usize) -> Option<TuplePerm> {
        if tail >= self.arity {
            return None;
        }
        if tail == 0 {
            return Some(self.clone());
        }
        let head_len = self.arity - tail;
        let needed = space_size(self.n, tail)?;
        let mut heads: BTreeMap<&[u32], (&[u32], u64)> = BTreeMap::new();
        for (from, to) in &self.moved {
            if from.tail(tail) != to.tail(tail) {
                return None;
            }
            match heads.entry(from.head(head_len)) {
                Entry::Vacant(slot) => {
                    slot.insert((to.head(head_len), 1));
                }
                Entry::Occupied(mut slot) => {
                    let (img, count) = slot.get_mut();
                    if *img != to.head(head_len) {
                        return None;
                    }
                    *count += 1;
                }
            }
        }
        if heads.values().any(|&(_, count)| count != needed) {
            return None;
        }
        let moved = heads
            .into_iter()
            .map(|(h, (img, _))| (Word(h.to_vec()), Word(img.to_vec())))
            .collect();
        Some(TuplePerm { n: self.n, arity: head_len, moved })
    }

    /// Applies a letter permutation `sigma` of `[n]` to every coordinate:
    /// the result is `σ^{⊗m}`-conjugate of `self`.
    pub fn relabel(&self, sigma: &TuplePerm) -> Result<TuplePerm> {
        if sigma.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: sigma.arity });
        }
        if sigma.n != self.n {
            return Err(Error::AlphabetMismatch { left: self.n, right: sigma.n });
        }
        let map = |w: &Word| {
            Word(
                w.0.iter()
                    .map(|&l| sigma.moved.get(&[l][..]).map_or(l, |img| img.0[0]))
                    .collect(),
            )
        };
        let moved = self.moved.iter().map(|(a, b)| (map(a), map(b))).collect();
        Ok(TuplePerm { n: self.n, arity: self.arity, moved })
    }

    /// Disjoint cycles, each starting at its least word, ordered by that word.
    pub fn cycles(&self) -> Vec<Vec<Word>> {
        let mut done = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.moved.keys() {
            if done.contains(start) {
                continue;
            }
            let mut cycle = vec![start.clone()];
            done.insert(start);
            let mut cur = &self.moved[start];
            while cur != start {
                cycle.push(cur.clone());
                done.insert(cur);
                cur = &self.moved[cur];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for TuplePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moved.is_empty() {
            return f.write_str("id");
        }
        for (i, cycle) in self.cycles().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("[")?;
            for (j, w) in cycle.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{w}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TuplePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TuplePerm(n={}, arity={}, {})", self.n, self.arity, self)
    }
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    n: u32,
    arity: usize,
    cycles: Vec<Vec<Word>>,
}

impl TryFrom<PermRepr> for TuplePerm {
    type Error = Error;

    fn try_from(r: PermRepr) -> Result<Self> {
        TuplePerm::from_cycles(r.n, r.arity, r.cycles)
    }
}

impl From<TuplePerm> for PermRepr {
    fn from(p: TuplePerm) -> Self {
        PermRepr { n: p.n, arity: p.arity, cycles: p.cycles() }
    }
}
