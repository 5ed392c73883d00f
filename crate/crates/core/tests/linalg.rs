mod common;

use bockstein::linalg::*;
use common::brute::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z(n: u64) -> Modulus {
    Modulus::from_order(n).unwrap()
}

#[test]
fn howell_examples_match_exhaustive_spans() {
    let m = z(4);
    // [[3]] and [[1]] span the same set, and [[2,0],[0,2]] is already canonical
    let a = Mat::from_rows(m, &[vec![3]]).unwrap();
    let h = howell_form(&a);
    assert_eq!(span_set(&a, 100), span_set(&h, 100));
    assert_eq!(h, Mat::from_rows(m, &[vec![1]]).unwrap());
    let d = Mat::from_rows(m, &[vec![2, 0], vec![0, 2]]).unwrap();
    let spans: Vec<Mat> = all_mats(m, 2, 2).into_iter().filter(|b| span_set(b, 100) == span_set(&d, 100)).collect();
    assert!(spans.iter().all(|b| howell_form(b) == d));
}

#[test]
fn kernel_examples_match_enumeration() {
    let m = z(4);
    let a = Mat::from_rows(m, &[vec![2]]).unwrap();
    let ker: Vec<Vec<u32>> = all_vectors(m, 1).into_iter().filter(|x| a.apply(x) == vec![0]).collect();
    assert_eq!(ker, vec![vec![0], vec![2]]);
    assert_eq!(span_set(&kernel(&a), 100).unwrap().len(), 2);
    let a = Mat::from_rows(m, &[vec![1, 2]]).unwrap();
    assert_eq!(kernel(&a).rows(), 0);
}

#[test]
fn split_examples_match_retraction_search() {
    let m = z(4);
    let a = Mat::from_rows(m, &[vec![2]]).unwrap();
    assert!(!exists_retraction(&a) && !exists_section(&a));
    let b = Mat::from_rows(m, &[vec![1, 2]]).unwrap();
    assert!(exists_retraction(&b));
    assert!(!exists_section(&b));
    assert!(is_split_mono(&b) && !is_split_epi(&b));
}

#[test]
fn exhaustive_small_split_tests() {
    for n in [4u64, 9] {
        let m = z(n);
        for (r, c) in [(1, 1), (1, 2), (2, 1)] {
            for a in all_mats(m, r, c) {
                assert_eq!(is_split_mono(&a), exists_retraction(&a), "{a:?}");
                assert_eq!(is_split_epi(&a), exists_section(&a), "{a:?}");
            }
        }
    }
}

#[test]
fn subquotient_order_matches_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [4u64, 8, 9] {
        let m = z(n);
        for _ in 0..60 {
            let zm = random_mat(&mut rng, m, 3, 3);
            let coeff = random_mat(&mut rng, m, 2, 3);
            let b = coeff.mul(&zm);
            let p = subquotient(&zm, &b).unwrap();
            let sz = span_set(&zm, 1 << 12).unwrap().len() as u64;
            let sb = span_set(&b, 1 << 12).unwrap().len() as u64;
            assert_eq!(p.order(), sz / sb);
            for i in 0..b.rows() {
                assert!(p.is_zero_class(b.row(i)).unwrap());
            }
            let ords = p.cyclic_orders();
            assert!(ords.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}

fn arb_case() -> impl Strategy<Value = (u64, usize, usize, u64)> {
    (prop_oneof![Just(4u64), Just(8), Just(9), Just(27)], 1usize..5, 1usize..5, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn howell_idempotent_and_invariant((n, r, c, seed) in arb_case()) {
        let m = z(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&mut rng, m, r, c);
        let h = howell_form(&a);
        prop_assert_eq!(howell_form(&h), h.clone());
        let u = random_unimodular(&mut rng, m, r);
        prop_assert_eq!(howell_form(&u.mul(&a)), h.clone());
        prop_assert!(span_eq(&a, &h));
    }

    #[test]
    fn kernel_is_exact((n, r, c, seed) in arb_case()) {
        let m = z(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&mut rng, m, r, c);
        let k = kernel(&a);
        prop_assert!(k.mul(&a).is_zero());
        if (n as usize).pow(r as u32) <= 4096 {
            let s = Solver::new(&k);
            for x in all_vectors(m, r) {
                if a.apply(&x).iter().all(|&y| y == 0) {
                    prop_assert!(s.contains(&x));
                }
            }
        }
    }

    #[test]
    fn solve_decides_membership((n, r, c, seed) in arb_case()) {
        let m = z(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_mat(&mut rng, m, r, c);
        if (n as usize).pow(c as u32) <= 4096 {
            let span = span_set(&a, 4096).unwrap();
            for b in all_vectors(m, c) {
                let x = solve(&a, &b).unwrap();
                prop_assert_eq!(x.is_some(), span.contains(&b));
                if let Some(x) = x {
                    prop_assert_eq!(a.apply(&x), b);
                }
            }
        }
    }

    #[test]
    fn presentation_round_trip((n, r, c, seed) in arb_case()) {
        let m = z(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zm = random_mat(&mut rng, m, r, c);
        let b = random_mat(&mut rng, m, 2, r).mul(&zm);
        let p = subquotient(&zm, &b).unwrap();
        let coords: Vec<u32> = p.cyclic_orders().iter().map(|&o| rng.gen_range(0..o) as u32).collect();
        prop_assert_eq!(p.project(&p.lift(&coords)).unwrap(), coords);
    }
}
