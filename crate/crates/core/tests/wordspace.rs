use proptest::prelude::*;

use sn_core::builder::Engine;
use sn_core::combinatorics::{lambda_eigenvalue, partitions};
use sn_core::exact::{q, qf};
use sn_core::wordspace::{
    all_words, antisymmetrize_set, apply_permutation, apply_transposition, class_sum_apply, inner, inner_product,
    symmetrize_set, WordVector,
};

fn vector(n: usize) -> impl Strategy<Value = WordVector> {
    let words = all_words(n);
    let len = words.len();
    proptest::collection::vec((0..len, -5i64..=5, 1i64..=3), 1..10)
        .prop_map(move |terms| WordVector::from_terms(n, terms.into_iter().map(|(i, a, b)| (words[i], qf(a, b)))))
}

fn sized_vector() -> impl Strategy<Value = WordVector> {
    (2usize..=6).prop_flat_map(vector)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<u8>> {
    Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpositions_are_isometric_involutions((v, i, j) in sized_vector().prop_flat_map(|v| {
        let n = v.n() as u8;
        (Just(v), 1..=n, 1..=n)
    })) {
        prop_assume!(i != j);
        let w = apply_transposition(&v, i, j).unwrap();
        prop_assert_eq!(&apply_transposition(&w, i, j).unwrap(), &v);
        prop_assert_eq!(inner_product(&w, &w).unwrap(), inner_product(&v, &v).unwrap());
    }

    #[test]
    fn class_sum_commutes_with_permutations((v, g) in sized_vector().prop_flat_map(|v| {
        let n = v.n();
        (Just(v), permutation(n))
    })) {
        let a = class_sum_apply(&apply_permutation(&v, &g));
        let b = apply_permutation(&class_sum_apply(&v), &g);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn set_symmetrizers() {
    for k in 1..=5u8 {
        let labels: Vec<u8> = (1..=k).collect();
        let s = symmetrize_set(&labels).unwrap();
        let a = antisymmetrize_set(&labels).unwrap();
        for i in 1..=k {
            for j in i + 1..=k {
                assert_eq!(apply_transposition(&s, i, j).unwrap(), s);
                assert_eq!(apply_transposition(&a, i, j).unwrap(), a.scale(&q(-1)));
            }
        }
    }
}

#[test]
fn irreducible_vectors_are_class_sum_eigenvectors() {
    let e = Engine::shared();
    for n in 1..=6 {
        for f in partitions(n) {
            let b = e.basis(&f).unwrap();
            let l = q(lambda_eigenvalue(&f));
            for v in &b.vectors {
                assert_eq!(class_sum_apply(v), v.scale(&l), "{f}");
            }
        }
    }
}

/// Product states sym(S)⊗antisym(Sᶜ) for different label sets S are orthogonal.
#[test]
fn different_distributions_are_orthogonal() {
    let labels: Vec<u8> = (1..=5).collect();
    let subsets: Vec<Vec<u8>> = (0..5).flat_map(|i| (i + 1..5).map(move |j| vec![i as u8 + 1, j as u8 + 1])).collect();
    let state = |s: &[u8]| {
        let rest: Vec<u8> = labels.iter().copied().filter(|l| !s.contains(l)).collect();
        symmetrize_set(s).unwrap().tensor(&antisymmetrize_set(&rest).unwrap())
    };
    for s in &subsets {
        for t in &subsets {
            let x = inner(&state(s), &state(t));
            if s == t {
                assert_eq!(x, q(12));
            } else {
                assert_eq!(x, q(0), "{s:?} {t:?}");
            }
        }
    }
}
