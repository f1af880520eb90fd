//! Algebraic laws of tuple permutations and the Ψ flow, checked pointwise on
//! small domains.

use std::collections::BTreeSet;

use proptest::prelude::*;
use weylstab::perm::{space_size, words};
use weylstab::{lex_rank, lex_unrank, psi_apply, psi_materialize, Budget, TuplePerm, Word};

const B: Budget = Budget::DEFAULT;

/// A random permutation of `[n]^m` moving at most `max_moved` points.
fn arb_perm(n: u32, m: usize, max_moved: usize) -> impl Strategy<Value = TuplePerm> {
    let size = space_size(n, m).unwrap();
    let all: Vec<u64> = (1..=size).collect();
    let cap = max_moved.min(all.len());
    proptest::sample::subsequence(all, 0..=cap)
        .prop_flat_map(|pts| (Just(pts.clone()), Just(pts).prop_shuffle()))
        .prop_map(move |(from, to)| {
            let pairs = from
                .into_iter()
                .zip(to)
                .map(|(x, y)| (lex_unrank(x, n, m).unwrap(), lex_unrank(y, n, m).unwrap()));
            TuplePerm::from_pairs(n, m, pairs).unwrap()
        })
}

fn arb_domain() -> impl Strategy<Value = (u32, usize)> {
    (2u32..=3, 1usize..=4)
}

fn arb_transposition(n: u32) -> impl Strategy<Value = TuplePerm> {
    let size = space_size(n, 3).unwrap();
    (1..=size, 1..=size).prop_filter("distinct", |(x, y)| x != y).prop_map(move |(x, y)| {
        TuplePerm::transposition(n, lex_unrank(x, n, 3).unwrap(), lex_unrank(y, n, 3).unwrap()).unwrap()
    })
}

fn assert_bijective(p: &TuplePerm) {
    let keys: BTreeSet<&Word> = p.moved().map(|(k, _)| k).collect();
    let values: BTreeSet<&Word> = p.moved().map(|(_, v)| v).collect();
    assert_eq!(keys, values);
    assert_eq!(values.len(), p.support_len());
    assert!(p.moved().all(|(k, v)| k != v));
}

fn same_everywhere(p: &TuplePerm, q: &TuplePerm) {
    assert_eq!(p.arity(), q.arity());
    for w in words(p.n(), p.arity()) {
        assert_eq!(p.apply(&w).unwrap(), q.apply(&w).unwrap(), "at {w}");
    }
}

/// All permutations of `[n]` as letter maps.
fn letter_perms(n: u32) -> Vec<TuplePerm> {
    fn rec(prefix: &mut Vec<u32>, left: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left.is_empty() {
            out.push(prefix.clone());
        }
        for i in 0..left.len() {
            let x = left.remove(i);
            prefix.push(x);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(i, x);
        }
    }
    let mut images = Vec::new();
    rec(&mut Vec::new(), &mut (1..=n).collect(), &mut images);
    images
        .into_iter()
        .map(|img| {
            let pairs = img.iter().enumerate().map(|(i, &y)| {
                (Word::new(vec![i as u32 + 1]).unwrap(), Word::new(vec![y]).unwrap())
            });
            TuplePerm::from_pairs(n, 1, pairs).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative_and_left_to_right(
        (p, q, r) in arb_domain().prop_flat_map(|(n, m)| (arb_perm(n, m, 8), arb_perm(n, m, 8), arb_perm(n, m, 8)))
    ) {
        let pq = p.compose(&q).unwrap();
        let left = pq.compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        assert_bijective(&left);
        for w in words(p.n(), p.arity()) {
            let stepwise = q.apply(&p.apply(&w).unwrap()).unwrap();
            prop_assert_eq!(pq.apply(&w).unwrap(), stepwise);
        }
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn tensor_is_associative(
        (p, q, r) in (2u32..=3).prop_flat_map(|n| (arb_perm(n, 1, 3), arb_perm(n, 2, 6), arb_perm(n, 1, 3)))
    ) {
        let left = p.tensor(&q, B).unwrap().tensor(&r, B).unwrap();
        let right = p.tensor(&q.tensor(&r, B).unwrap(), B).unwrap();
        prop_assert_eq!(&left, &right);
        assert_bijective(&left);
    }

    #[test]
    fn tensor_interchanges_with_compose(
        (p, p2, q, q2) in (2u32..=3).prop_flat_map(|n| {
            (arb_perm(n, 2, 5), arb_perm(n, 2, 5), arb_perm(n, 1, 3), arb_perm(n, 1, 3))
        })
    ) {
        let lhs = p.tensor(&q, B).unwrap().compose(&p2.tensor(&q2, B).unwrap()).unwrap();
        let rhs = p.compose(&p2).unwrap().tensor(&q.compose(&q2).unwrap(), B).unwrap();
        same_everywhere(&lhs, &rhs);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tail_split_inverts_right_padding(
        (w, j) in (2u32..=3, 1usize..=2, 1usize..=2).prop_flat_map(|(n, m, j)| (arb_perm(n, m, 6), Just(j)))
    ) {
        let padded = w.embed(0, j, B).unwrap();
        prop_assert_eq!(padded.tail_identity_split(j), Some(w));
    }

    #[test]
    fn embed_is_tensor_with_identities(
        (u, left, right) in (2u32..=3).prop_flat_map(|n| (arb_perm(n, 2, 4), 0usize..=2, 0usize..=2))
    ) {
        let n = u.n();
        let mut expected = u.clone();
        if left > 0 {
            expected = TuplePerm::identity(n, left).unwrap().tensor(&expected, B).unwrap();
        }
        if right > 0 {
            expected = expected.tensor(&TuplePerm::identity(n, right).unwrap(), B).unwrap();
        }
        prop_assert_eq!(u.embed(left, right, B).unwrap(), expected);
    }

    #[test]
    fn lazy_and_materialized_psi_agree(u in (2u32..=3).prop_flat_map(arb_transposition), k in 0usize..=4) {
        let m = psi_materialize(&u, k, B).unwrap();
        assert_bijective(&m);
        for (x, y) in m.moved() {
            prop_assert_eq!(&psi_apply(&u, k, x).unwrap(), y);
        }
        prop_assert!(m.support_len() as u128 <= weylstab::psi_factors(&u, k).support_estimate());
    }

    #[test]
    fn psi_commutes_with_relabeling(u in arb_transposition(3), k in 0usize..=3, which in 0usize..6) {
        let sigma = &letter_perms(3)[which];
        let lhs = psi_materialize(&u.relabel(sigma).unwrap(), k, B).unwrap();
        let rhs = psi_materialize(&u, k, B).unwrap().relabel(sigma).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn lex_rank_round_trips_on_small_spaces() {
    for n in 1..=3u32 {
        for m in 1..=4usize {
            let size = space_size(n, m).unwrap();
            let listed: Vec<Word> = words(n, m).collect();
            assert_eq!(listed.len() as u64, size);
            for i in 1..=size {
                let w = lex_unrank(i, n, m).unwrap();
                assert_eq!(lex_rank(&w, n).unwrap(), i);
                assert_eq!(listed[(i - 1) as usize], w);
            }
        }
    }
}

#[test]
fn relabel_is_conjugation_by_diagonal_power() {
    for sigma in letter_perms(3) {
        let diag = sigma.tensor(&sigma, B).unwrap().tensor(&sigma, B).unwrap();
        for (x, y) in [([1, 1, 2], [3, 3, 2]), ([1, 2, 3], [2, 3, 1]), ([2, 2, 2], [1, 2, 1])] {
            let u = TuplePerm::transposition(3, Word::new(x.to_vec()).unwrap(), Word::new(y.to_vec()).unwrap())
                .unwrap();
            let conj = diag.inverse().compose(&u).unwrap().compose(&diag).unwrap();
            assert_eq!(u.relabel(&sigma).unwrap(), conj);
        }
    }
}

#[test]
fn psi_zero_and_identity() {
    let u = TuplePerm::transposition(3, Word::new(vec![1, 2, 3]).unwrap(), Word::new(vec![3, 3, 1]).unwrap()).unwrap();
    assert_eq!(psi_materialize(&u, 0, B).unwrap(), u.inverse());
    let id = TuplePerm::identity(3, 3).unwrap();
    for k in 0..=4 {
        assert!(psi_materialize(&id, k, B).unwrap().is_identity());
    }
}
