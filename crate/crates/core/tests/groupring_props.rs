mod common;

use common::oracles::{convolve, nzd_by_characters, zero_divisor_witness};
use num_bigint::BigInt;
use num_rational::BigRational;
use prolim_core::groupring::{FiniteAbelianGroup, GroupRingElement};
use proptest::prelude::*;

/// Cyclic `p`-groups `C_{p^m}` for `(2, m <= 3)` and `(3, m <= 2)`.
fn cyclic_p_group() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(4), Just(8), Just(3), Just(9)]
}

fn small_group() -> impl Strategy<Value = Vec<u64>> {
    prop_oneof![
        Just(vec![2u64]),
        Just(vec![3]),
        Just(vec![4]),
        Just(vec![2, 2]),
        Just(vec![5]),
        Just(vec![6]),
        Just(vec![7]),
        Just(vec![8]),
        Just(vec![2, 4]),
    ]
}

fn elem(g: &FiniteAbelianGroup, c: &[i64]) -> GroupRingElement {
    GroupRingElement::from_i64(g, c).unwrap()
}

fn triple(n: u64, b: i64) -> impl Strategy<Value = [Vec<i64>; 3]> {
    let v = move || prop::collection::vec(-b..=b, n as usize);
    (v(), v(), v()).prop_map(|(x, y, z)| [x, y, z])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms((n, [x, y, z]) in cyclic_p_group().prop_flat_map(|n| (Just(n), triple(n, 5)))) {
        let g = FiniteAbelianGroup::cyclic(n);
        let (x, y, z) = (elem(&g, &x), elem(&g, &y), elem(&g, &z));
        let xy = x.gr_mul(&y).unwrap();
        prop_assert_eq!(xy.gr_mul(&z).unwrap(), x.gr_mul(&y.gr_mul(&z).unwrap()).unwrap());
        prop_assert_eq!(&xy, &y.gr_mul(&x).unwrap());
        prop_assert_eq!(xy.augmentation(), x.augmentation() * y.augmentation());
        let lhs = xy.regular_matrix().unwrap();
        let rhs = x.regular_matrix().unwrap().checked_mul(&y.regular_matrix().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let dist = x.gr_mul(&y.checked_add(&z).unwrap()).unwrap();
        prop_assert_eq!(dist, xy.checked_add(&x.gr_mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn product_matches_reference_convolution(
        (orders, x, y) in small_group().prop_flat_map(|o| {
            let n: usize = o.iter().product::<u64>() as usize;
            (Just(o), prop::collection::vec(-4i64..=4, n), prop::collection::vec(-4i64..=4, n))
        })
    ) {
        let g = FiniteAbelianGroup::new(orders.clone()).unwrap();
        let prod = elem(&g, &x).gr_mul(&elem(&g, &y)).unwrap();
        prop_assert_eq!(prod, elem(&g, &convolve(&orders, &x, &y)));
    }

    #[test]
    fn zero_divisors_agree_with_characters(
        (orders, x) in small_group().prop_flat_map(|o| {
            let n: usize = o.iter().product::<u64>() as usize;
            (Just(o), prop::collection::vec(-2i64..=2, n))
        })
    ) {
        let g = FiniteAbelianGroup::new(orders.clone()).unwrap();
        let nzd = elem(&g, &x).is_non_zero_divisor().unwrap();
        prop_assert_eq!(nzd, nzd_by_characters(&orders, &x));
        if x.len() <= 4 {
            if let Some(w) = zero_divisor_witness(&orders, &x, 2) {
                prop_assert!(!nzd, "witness {:?}", w);
            }
        }
    }

    #[test]
    fn idempotents_are_idempotent(n in cyclic_p_group()) {
        let g = FiniteAbelianGroup::cyclic(n);
        let t = GroupRingElement::partial_trace(&g, g.generator(0), n).unwrap();
        let e = GroupRingElement::from_rational(&g, t.int_coeffs().unwrap().to_vec(), BigInt::from(n)).unwrap();
        prop_assert_eq!(&e.gr_mul(&e).unwrap(), &e);
        prop_assert_eq!(e.augmentation(), BigRational::from_integer(1.into()));
    }
}

/// Exhaustive search for small zero-divisor witnesses over groups of order
/// at most 8.
#[test]
fn small_witnesses_only_for_zero_divisors() {
    let cases: &[(&[u64], &[i64])] = &[
        (&[2], &[1, 1]),
        (&[2], &[1, 2]),
        (&[3], &[1, 1, 1]),
        (&[3], &[2, -1, 0]),
        (&[4], &[1, 0, 1, 0]),
        (&[4], &[1, 1, 0, 0]),
        (&[2, 2], &[1, -1, 1, -1]),
        (&[2, 2], &[3, 1, 1, 0]),
        (&[8], &[1, 1, 1, 1, 1, 1, 1, 1]),
        (&[8], &[1, -1, 0, 0, 0, 0, 0, 0]),
        (&[8], &[2, 1, 0, 0, 0, 0, 0, 0]),
    ];
    for &(orders, x) in cases {
        let g = FiniteAbelianGroup::new(orders.to_vec()).unwrap();
        let nzd = elem(&g, x).is_non_zero_divisor().unwrap();
        let witness = zero_divisor_witness(orders, x, 2);
        assert_eq!(nzd, witness.is_none(), "{orders:?} {x:?} {witness:?}");
        assert_eq!(nzd, nzd_by_characters(orders, x));
    }
}
