use newred::factor::rational::{factor_over_q, irreducible_q, squarefree_decomposition};
use newred::{Poly, RationalField};
use proptest::prelude::*;

fn int_poly() -> impl Strategy<Value = Poly<RationalField>> {
    (prop::collection::vec(-50i64..=50, 1..=12), (1i64..=50).prop_flat_map(|c| prop_oneof![Just(c), Just(-c)]))
        .prop_map(|(mut cs, lead)| {
            cs.push(lead);
            Poly::from_ints(RationalField, &cs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn irreducibility_test_agrees_with_factorization(f in int_poly()) {
        let fac = factor_over_q(&f).unwrap();
        prop_assert_eq!(fac.expand(&RationalField), f.clone());
        let single = fac.factors.len() == 1 && fac.factors[0].1 == 1 && fac.factors[0].0 == f.monic();
        prop_assert_eq!(irreducible_q(&f).unwrap(), single);
    }
}

proptest! {
    #[test]
    fn fast_paths_on_iterates_agree_with_factorization(a in -30i64..=30, b in -300i64..=300, n in 2u32..=3) {
        let fnn = Poly::from_ints(RationalField, &[b, a, 1]).iterate(n);
        prop_assert_eq!(irreducible_q(&fnn).unwrap(), factor_over_q(&fnn).unwrap().is_irreducible());
    }

    /// Iterates of an irreducible polynomial are separable.
    #[test]
    fn iterates_of_irreducibles_are_squarefree(
        cs in prop::collection::vec(-20i64..=20, 2..=4),
        n in 1u32..=3,
    ) {
        let mut cs = cs;
        cs.push(1);
        let f = Poly::from_ints(RationalField, &cs);
        prop_assume!(f.deg().pow(n) <= 16 && irreducible_q(&f).unwrap());
        let fnn = f.iterate(n);
        prop_assert_eq!(squarefree_decomposition(&fnn), vec![(fnn.monic(), 1)]);
    }
}
