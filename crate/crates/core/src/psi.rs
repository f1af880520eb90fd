//! The sequence `Ψ_k(u)` on `[n]^{t+k}`.
//!
//! `Ψ_0(u) = u^{-1}`. For `k ≥ 1`, `Ψ_k(u)` is the left-to-right product of
//! `1^{k-i} ⊗ u^{-1} ⊗ 1^{i}` for `i = 0..=k` followed by
//! `1^{i} ⊗ u ⊗ 1^{k-i}` for `i = 1..=k`.

use crate::error::{Error, Result};
use crate::perm::{Budget, TuplePerm, Word};

/// One padded copy `1^{pad_left} ⊗ u^{±1} ⊗ 1^{pad_right}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub pad_left: usize,
    pub inverse: bool,
    pub pad_right: usize,
}

#[derive(Clone, Debug)]
pub struct PsiFactorization {
    base: TuplePerm,
    base_inverse: TuplePerm,
    k: usize,
    factors: Vec<Factor>,
}

pub fn psi_factors(u: &TuplePerm, k: usize) -> PsiFactorization {
    let factors = if k == 0 {
        vec![Factor { pad_left: 0, inverse: true, pad_right: 0 }]
    } else {
        let inverses = (0..=k).map(|i| Factor { pad_left: k - i, inverse: true, pad_right: i });
        let directs = (1..=k).map(|i| Factor { pad_left: i, inverse: false, pad_right: k - i });
        inverses.chain(directs).collect()
    };
    PsiFactorization { base: u.clone(), base_inverse: u.inverse(), k, factors }
}

impl PsiFactorization {
    pub fn base(&self) -> &TuplePerm {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Factors in application order.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Arity of the words `Ψ_k(u)` acts on.
    pub fn arity(&self) -> usize {
        self.base.arity() + self.k
    }

    /// Evaluates `Ψ_k(u)` at one point by sliding each factor's window over
    /// the word; never touches the rest of `[n]^{t+k}`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.arity() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: w.arity() });
        }
        w.check_alphabet(self.base.n())?;
        let t = self.base.arity();
        let mut letters = w.letters().to_vec();
        for f in &self.factors {
            let perm = if f.inverse { &self.base_inverse } else { &self.base };
            let window = f.pad_left..f.pad_left + t;
            if let Some(img) = perm.image(&letters[window.clone()]) {
                letters[window].copy_from_slice(img.letters());
            }
        }
        Ok(Word::from_vec_unchecked(letters))
    }

    /// Total support of the padded factors; bounds the support of every
    /// partial product.
    pub fn support_estimate(&self) -> u128 {
        let per_factor = (self.base.support_len() as u128)
            .saturating_mul(u128::from(self.base.n()).saturating_pow(self.k as u32));
        per_factor.saturating_mul(self.factors.len() as u128)
    }

    /// Multiplies out the padded factors as sparse permutations.
    pub fn materialize(&self, budget: Budget) -> Result<TuplePerm> {
        budget.check(self.support_estimate())?;
        let mut acc = TuplePerm::identity(self.base.n(), self.arity())?;
        for f in &self.factors {
            let perm = if f.inverse { &self.base_inverse } else { &self.base };
            let padded = perm.embed(f.pad_left, f.pad_right, budget)?;
            acc = acc.compose(&padded)?;
        }
        Ok(acc)
    }
}

pub fn psi_apply(u: &TuplePerm, k: usize, w: &Word) -> Result<Word> {
    psi_factors(u, k).apply(w)
}

pub fn psi_materialize(u: &TuplePerm, k: usize, budget: Budget) -> Result<TuplePerm> {
    psi_factors(u, k).materialize(budget)
}
