//! Stability and classifier properties over all transpositions of `[n]^3`
//! for small `n`.

use weylstab::perm::words;
use weylstab::{
    classify, definitional_prefix_check, enumerate_transpositions, exact_rank_for_stable, psi_apply,
    psi_materialize, rank_one_check, stability_condition, stability_search, verify_theorem, Branch, Budget,
    Classification, TuplePerm, Word,
};

const B: Budget = Budget::DEFAULT;

fn letter_perms(n: u32) -> Vec<TuplePerm> {
    let mut out = Vec::new();
    let mut img: Vec<u32> = (1..=n).collect();
    permute(&mut img, 0, &mut out, n);
    out
}

fn permute(img: &mut Vec<u32>, i: usize, out: &mut Vec<TuplePerm>, n: u32) {
    if i == img.len() {
        let pairs = img
            .iter()
            .enumerate()
            .map(|(x, &y)| (Word::new(vec![x as u32 + 1]).unwrap(), Word::new(vec![y]).unwrap()));
        out.push(TuplePerm::from_pairs(n, 1, pairs).unwrap());
        return;
    }
    for j in i..img.len() {
        img.swap(i, j);
        permute(img, i + 1, out, n);
        img.swap(i, j);
    }
}

/// `Ψ1 = Ψ0 ⊗ 1` and `Ψ2 = Ψ1 ⊗ 1`, checked one point at a time.
fn pointwise_rank_one(u: &TuplePerm) -> bool {
    let n = u.n();
    (1..=2).all(|k| {
        words(n, 3 + k).all(|w| {
            let (head, last) = w.letters().split_at(2 + k);
            let mut lower = psi_apply(u, k - 1, &Word::new(head.to_vec()).unwrap()).unwrap().letters().to_vec();
            lower.extend_from_slice(last);
            psi_apply(u, k, &w).unwrap().letters() == lower.as_slice()
        })
    })
}

#[test]
fn rank_one_gives_certificate_at_two_and_exact_rank_one() {
    for n in 2..=3 {
        for t in enumerate_transpositions(n).unwrap() {
            let u = t.perm();
            if !rank_one_check(&u, B).unwrap() {
                continue;
            }
            let v = stability_search(&u, 2, B).unwrap();
            assert_eq!(v.certificate_h(), Some(2), "{t:?}");
            assert_eq!(exact_rank_for_stable(&u, &v, B).unwrap(), 1);
            assert!(definitional_prefix_check(&u, 1, 3, B).unwrap());
        }
    }
}

#[test]
fn certificates_persist_one_step_further() {
    for t in enumerate_transpositions(3).unwrap() {
        let u = t.perm();
        if let Some(h) = stability_search(&u, 3, B).unwrap().certificate_h() {
            let next = psi_materialize(&u, h + 1, B).unwrap();
            assert!(next.tail_identity_split(h + 1).is_some(), "{t:?} at h={}", h + 1);
        }
    }
}

#[test]
fn classifier_matches_both_checks_for_small_n() {
    for n in 2..=3 {
        let report = verify_theorem(n, 4, B).unwrap();
        assert!(report.theorem_holds(), "{:?}", report.mismatches);
    }
}

#[test]
fn no_diagonal_branch_over_two_letters() {
    for t in enumerate_transpositions(2).unwrap() {
        if let Classification::StableRankOne { branch } = classify(&t) {
            assert_ne!(branch, Branch::DiagonalEqual);
        }
    }
}

#[test]
fn verdicts_invariant_under_relabeling_and_reversal() {
    let sigmas = letter_perms(3);
    for t in enumerate_transpositions(3).unwrap() {
        let base = classify(&t).is_stable();
        let h = stability_search(&t.perm(), 4, B).unwrap().certificate_h();
        assert_eq!(stability_condition(t.a(), t.b()), stability_condition(t.b(), t.a()));
        assert_eq!(classify(&t.reverse()).is_stable(), base);
        assert_eq!(stability_search(&t.reverse().perm(), 4, B).unwrap().certificate_h(), h);
        for s in &sigmas {
            let r = t.relabel(s).unwrap();
            assert_eq!(classify(&r).is_stable(), base);
            assert_eq!(rank_one_check(&r.perm(), B).unwrap(), base);
            assert_eq!(stability_search(&r.perm(), 4, B).unwrap().certificate_h(), h);
        }
    }
}

#[test]
fn stable_count_is_relabeling_invariant_and_independently_reproduced() {
    let report = verify_theorem(3, 2, B).unwrap();
    let direct = enumerate_transpositions(3).unwrap().filter(|t| pointwise_rank_one(&t.perm())).count();
    assert_eq!(direct, report.stable_count);
    for s in letter_perms(3) {
        let relabeled =
            enumerate_transpositions(3).unwrap().filter(|t| classify(&t.relabel(&s).unwrap()).is_stable()).count();
        assert_eq!(relabeled, report.stable_count);
    }
}

#[test]
fn arity_one_is_stable_from_the_start() {
    for s in letter_perms(3) {
        let v = stability_search(&s, 0, B).unwrap();
        assert_eq!(v.certificate_h(), Some(0));
        assert_eq!(exact_rank_for_stable(&s, &v, B).unwrap(), 1);
    }
}
