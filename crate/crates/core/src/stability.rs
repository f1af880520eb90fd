//! Stability certificates and rank.
//!
//! `u ∈ S([n]^t)` is stable of rank at most `h + 1` as soon as `Ψ_h(u)`
//! factors as `w ⊗ 1^{⊗(t-1)}`. The search below scans `h = 0..=h_max` for
//! such a factorization. Failing to find one is not a proof of instability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Budget, TuplePerm};
use crate::psi::psi_materialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "rank1-equations")]
    RankOneEquations,
    #[serde(rename = "tail-criterion")]
    TailCriterion,
    #[serde(rename = "t1-trivial")]
    TrivialArityOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    StableCertified { certificate_h: usize, rank_upper: usize, rank_exact: Option<usize> },
    Inconclusive { h_max: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VerdictRepr", into = "VerdictRepr")]
pub struct StabilityVerdict {
    pub status: Status,
    pub method: Method,
}

impl StabilityVerdict {
    fn certified(certificate_h: usize, rank_exact: Option<usize>, method: Method) -> Self {
        StabilityVerdict {
            status: Status::StableCertified { certificate_h, rank_upper: certificate_h + 1, rank_exact },
            method,
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self.status, Status::StableCertified { .. })
    }

    pub fn certificate_h(&self) -> Option<usize> {
        match self.status {
            Status::StableCertified { certificate_h, .. } => Some(certificate_h),
            Status::Inconclusive { .. } => None,
        }
    }

    pub fn rank_exact(&self) -> Option<usize> {
        match self.status {
            Status::StableCertified { rank_exact, .. } => rank_exact,
            Status::Inconclusive { .. } => None,
        }
    }

    /// Copy with `rank_exact` filled in.
    pub fn with_rank(mut self, rank: usize) -> Self {
        if let Status::StableCertified { rank_exact, .. } = &mut self.status {
            *rank_exact = Some(rank);
        }
        self
    }
}

#[derive(Serialize, Deserialize)]
struct VerdictRepr {
    status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate_h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank_upper: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rank_exact: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_max: Option<usize>,
    method: Method,
}

impl From<StabilityVerdict> for VerdictRepr {
    fn from(v: StabilityVerdict) -> Self {
        match v.status {
            Status::StableCertified { certificate_h, rank_upper, rank_exact } => VerdictRepr {
                status: "stable".into(),
                certificate_h: Some(certificate_h),
                rank_upper: Some(rank_upper),
                rank_exact,
                h_max: None,
                method: v.method,
            },
            Status::Inconclusive { h_max } => VerdictRepr {
                status: "inconclusive".into(),
                certificate_h: None,
                rank_upper: None,
                rank_exact: None,
                h_max: Some(h_max),
                method: v.method,
            },
        }
    }
}

impl TryFrom<VerdictRepr> for StabilityVerdict {
    type Error = String;

    fn try_from(r: VerdictRepr) -> std::result::Result<Self, String> {
        let status = match (r.status.as_str(), r.certificate_h, r.rank_upper, r.h_max) {
            ("stable", Some(h), Some(upper), None) if upper == h + 1 => {
                Status::StableCertified { certificate_h: h, rank_upper: upper, rank_exact: r.rank_exact }
            }
            ("inconclusive", None, None, Some(h_max)) if r.rank_exact.is_none() => Status::Inconclusive { h_max },
            _ => return Err(format!("inconsistent verdict fields for status `{}`", r.status)),
        };
        Ok(StabilityVerdict { status, method: r.method })
    }
}

fn require_arity_three(u: &TuplePerm) -> Result<()> {
    if u.arity() != 3 {
        return Err(Error::ArityMismatch { expected: 3, found: u.arity() });
    }
    Ok(())
}

fn pad_right(p: &TuplePerm, count: usize, budget: Budget) -> Result<TuplePerm> {
    p.embed(0, count, budget)
}

/// For `u ∈ S([n]^3)`: `Ψ_1(u) = Ψ_0(u) ⊗ 1` and `Ψ_2(u) = Ψ_1(u) ⊗ 1`.
/// These two equations characterize rank-one stability in arity 3.
pub fn rank_one_check(u: &TuplePerm, budget: Budget) -> Result<bool> {
    require_arity_three(u)?;
    let psi0 = psi_materialize(u, 0, budget)?;
    let psi1 = psi_materialize(u, 1, budget)?;
    if psi1 != pad_right(&psi0, 1, budget)? {
        return Ok(false);
    }
    let psi2 = psi_materialize(u, 2, budget)?;
    Ok(psi2 == pad_right(&psi1, 1, budget)?)
}

/// Rank-one verdict from the two equations, `None` when they fail.
pub fn rank_one_verdict(u: &TuplePerm, budget: Budget) -> Result<Option<StabilityVerdict>> {
    // Both equations give Ψ_2 = u^{-1} ⊗ 1 ⊗ 1, a certificate at h = 2.
    Ok(rank_one_check(u, budget)?.then(|| StabilityVerdict::certified(2, Some(1), Method::RankOneEquations)))
}

pub fn stability_search(u: &TuplePerm, h_max: usize, budget: Budget) -> Result<StabilityVerdict> {
    let t = u.arity();
    if t == 1 {
        return Ok(StabilityVerdict::certified(0, Some(1), Method::TrivialArityOne));
    }
    for h in 0..=h_max {
        let psi = psi_materialize(u, h, budget)?;
        if psi.tail_identity_split(t - 1).is_some() {
            return Ok(StabilityVerdict::certified(h, None, Method::TailCriterion));
        }
    }
    Ok(StabilityVerdict { status: Status::Inconclusive { h_max }, method: Method::TailCriterion })
}

/// `Ψ_{k+l}(u) = Ψ_{k-1}(u) ⊗ 1^{⊗(l+1)}` for every `l` in `0..=l_max`.
pub fn definitional_prefix_check(u: &TuplePerm, k: usize, l_max: usize, budget: Budget) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let base = psi_materialize(u, k - 1, budget)?;
    for l in 0..=l_max {
        let lhs = psi_materialize(u, k + l, budget)?;
        if lhs != pad_right(&base, l + 1, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least `k ≤ rank_upper` passing [`definitional_prefix_check`] over the
/// window `l ≤ certificate_h + t - k`.
///
/// The window is finite, so outside the arity-3 transposition family this is
/// evidence for the rank rather than a proof.
pub fn exact_rank_for_stable(u: &TuplePerm, verdict: &StabilityVerdict, budget: Budget) -> Result<usize> {
    let Status::StableCertified { certificate_h, rank_upper, .. } = verdict.status else {
        return Err(Error::InvalidArgument("exact rank needs a stable certificate".into()));
    };
    let t = u.arity();
    for k in 1..=rank_upper {
        let l_max = certificate_h + t - k;
        if definitional_prefix_check(u, k, l_max, budget)? {
            return Ok(k);
        }
    }
    Err(Error::RankNotFound { rank_upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{words, Word};

    fn w(letters: &[u32]) -> Word {
        Word::new(letters.to_vec()).unwrap()
    }

    fn t(n: u32, a: &[u32], b: &[u32]) -> TuplePerm {
        TuplePerm::transposition(n, w(a), w(b)).unwrap()
    }

    const B: Budget = Budget::DEFAULT;

    #[test]
    fn rank_one_examples() {
        assert!(rank_one_check(&t(3, &[1, 1, 2], &[3, 3, 2]), B).unwrap());
        assert!(rank_one_check(&t(3, &[1, 2, 1], &[1, 3, 1]), B).unwrap());
        assert!(!rank_one_check(&t(2, &[1, 1, 1], &[2, 2, 2]), B).unwrap());
        assert!(matches!(
            rank_one_check(&t(2, &[1, 1], &[2, 2]), B),
            Err(Error::ArityMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn search_examples() {
        let stable = t(3, &[1, 1, 2], &[3, 3, 2]);
        let v = stability_search(&stable, 4, B).unwrap();
        assert_eq!(
            v.status,
            Status::StableCertified { certificate_h: 2, rank_upper: 3, rank_exact: None }
        );
        assert_eq!(v.method, Method::TailCriterion);

        let unstable = t(2, &[1, 1, 1], &[2, 2, 2]);
        let v = stability_search(&unstable, 4, B).unwrap();
        assert_eq!(v.status, Status::Inconclusive { h_max: 4 });
    }

    #[test]
    fn arity_one_is_trivially_rank_one() {
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            let sigma = t(3, &[a], &[b]);
            let v = stability_search(&sigma, 0, B).unwrap();
            assert_eq!(v.method, Method::TrivialArityOne);
            assert_eq!(v.rank_exact(), Some(1));
            assert_eq!(exact_rank_for_stable(&sigma, &v, B).unwrap(), 1);
        }
    }

    #[test]
    fn prefix_check_examples() {
        assert!(definitional_prefix_check(&t(3, &[1, 2, 1], &[1, 3, 1]), 1, 1, B).unwrap());
        assert!(!definitional_prefix_check(&t(2, &[1, 1, 1], &[2, 2, 2]), 1, 0, B).unwrap());
        let id = TuplePerm::identity(2, 3).unwrap();
        assert!(definitional_prefix_check(&id, 2, 2, B).unwrap());
        assert!(definitional_prefix_check(&id, 0, 2, B).is_err());
    }

    #[test]
    fn exact_rank_examples() {
        for u in [t(3, &[1, 1, 2], &[3, 3, 2]), t(3, &[1, 2, 1], &[1, 3, 1])] {
            let v = stability_search(&u, 4, B).unwrap();
            assert_eq!(exact_rank_for_stable(&u, &v, B).unwrap(), 1);
            let eq = rank_one_verdict(&u, B).unwrap().unwrap();
            assert_eq!(eq.status, v.with_rank(1).status);
            assert_eq!(eq.method, Method::RankOneEquations);
        }
        let inconclusive = StabilityVerdict { status: Status::Inconclusive { h_max: 1 }, method: Method::TailCriterion };
        assert!(exact_rank_for_stable(&t(2, &[1, 1, 1], &[2, 2, 2]), &inconclusive, B).is_err());
    }

    #[test]
    fn arity_two_search_classifies_a_known_case() {
        // σ ⊗ 1 with σ the letter swap of [2].
        let swap_first = TuplePerm::from_cycles(
            2,
            2,
            vec![vec![w(&[1, 1]), w(&[2, 1])], vec![w(&[1, 2]), w(&[2, 2])]],
        )
        .unwrap();
        let v = stability_search(&swap_first, 2, B).unwrap();
        assert_eq!(v.certificate_h(), Some(0));
        assert_eq!(exact_rank_for_stable(&swap_first, &v, B).unwrap(), 1);
    }

    #[test]
    fn verdict_json() {
        let stable = StabilityVerdict::certified(2, Some(1), Method::TailCriterion);
        let json = serde_json::to_string(&stable).unwrap();
        assert_eq!(
            json,
            r#"{"status":"stable","certificate_h":2,"rank_upper":3,"rank_exact":1,"method":"tail-criterion"}"#
        );
        assert_eq!(serde_json::from_str::<StabilityVerdict>(&json).unwrap(), stable);
        let inc = StabilityVerdict { status: Status::Inconclusive { h_max: 4 }, method: Method::TailCriterion };
        let json = serde_json::to_string(&inc).unwrap();
        assert_eq!(json, r#"{"status":"inconclusive","h_max":4,"method":"tail-criterion"}"#);
        assert_eq!(serde_json::from_str::<StabilityVerdict>(&json).unwrap(), inc);
        assert!(serde_json::from_str::<StabilityVerdict>(
            r#"{"status":"stable","certificate_h":2,"rank_upper":5,"method":"t1-trivial"}"#
        )
        .is_err());
    }

    #[test]
    fn certificate_invariant_holds() {
        for a in words(2, 3) {
            for b in words(2, 3).filter(|b| *b > a) {
                let u = TuplePerm::transposition(2, a.clone(), b).unwrap();
                let v = stability_search(&u, 3, B).unwrap();
                if let Some(h) = v.certificate_h() {
                    let psi = psi_materialize(&u, h, B).unwrap();
                    assert!(psi.tail_identity_split(2).is_some());
                }
            }
        }
    }
}
