use bockstein::ext::{bar_orders, ext_group, periodic_orders, yoneda, ExtPresentation, Resolution};
use bockstein::gen::{random_rank_one, random_rank_two};
use bockstein::group::FiniteGroup;
use bockstein::linalg::Modulus;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn context() -> impl Strategy<Value = (&'static str, u64, u64)> {
    (
        prop_oneof![Just("C2"), Just("C3"), Just("C4")],
        prop_oneof![Just(2u64), Just(4), Just(3), Just(9)],
        any::<u64>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn main_resolution_agrees_with_periodic_oracle((g, n, seed) in context(), deg in 0usize..=3) {
        let group = Arc::new(FiniteGroup::by_name(g).unwrap());
        let m = Modulus::from_order(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_rank_two(&group, m, &mut rng).unwrap();
        let y = random_rank_one(&group, m, &mut rng);
        prop_assert_eq!(ext_group(&x, &y, deg).unwrap().cyclic_orders(), periodic_orders(&x, &y, deg).unwrap());
    }

    #[test]
    fn bar_complex_agrees_in_low_degree((g, n, seed) in context(), deg in 0usize..=2) {
        let group = Arc::new(FiniteGroup::by_name(g).unwrap());
        let m = Modulus::from_order(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_rank_one(&group, m, &mut rng);
        let y = random_rank_one(&group, m, &mut rng);
        prop_assert_eq!(bar_orders(&x, &y, deg).unwrap(), periodic_orders(&x, &y, deg).unwrap());
    }

    #[test]
    fn yoneda_product_is_associative_and_bilinear((g, n, seed) in context()) {
        let group = Arc::new(FiniteGroup::by_name(g).unwrap());
        let m = Modulus::from_order(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_rank_one(&group, m, &mut rng);
        let r = Resolution::free_cover(&x);
        let e1 = ExtPresentation::new(&r, &x, 1).unwrap();
        let (a, b, c) = (e1.random(&mut rng), e1.random(&mut rng), e1.random(&mut rng));
        let left = yoneda(&yoneda(&a, &b).unwrap(), &c).unwrap();
        let right = yoneda(&a, &yoneda(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let sum = yoneda(&a, &b.add(&c).unwrap()).unwrap();
        prop_assert_eq!(sum, yoneda(&a, &b).unwrap().add(&yoneda(&a, &c).unwrap()).unwrap());
    }
}
