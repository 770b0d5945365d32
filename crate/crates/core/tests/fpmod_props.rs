mod common;

use common::oracles::{cyclic_group_homology, flat_translates, fp_span, group_elements, index_of, EnumeratedGroup};
use num_bigint::BigInt;
use num_traits::Pow;
use prolim_core::fpmod::{
    base_change, coker_map, fs_bound, homology_h1, ker_map, min_gens, tor_basechange, tor_mod_n,
    FPModule, ModuleMap,
};
use prolim_core::groupring::{FiniteAbelianGroup, GroupHom, GroupRingElement, Subgroup};
use prolim_core::verify::random_module;
use prolim_core::AbelianInvariants;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_group() -> impl Strategy<Value = Vec<u64>> {
    prop_oneof![Just(vec![2u64]), Just(vec![3]), Just(vec![4]), Just(vec![2, 2]), Just(vec![9])]
}

fn group(orders: &[u64]) -> FiniteAbelianGroup {
    FiniteAbelianGroup::new(orders.to_vec()).unwrap()
}

#[test]
fn tor_of_trivial_modules_over_cyclic_groups() {
    for n in [2u64, 3, 4, 9] {
        let g = FiniteAbelianGroup::cyclic(n);
        let z = FPModule::trivial_z(&g);
        for i in 0..=4 {
            let got = tor_basechange(i, &Subgroup::whole(&g), &z).unwrap();
            let (free, torsion) = cyclic_group_homology(n, i);
            assert_eq!(got, AbelianInvariants { free_rank: free, torsion }, "n={n} i={i}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tor_one_is_h1(orders in small_group(), seed in any::<u64>()) {
        let g = group(&orders);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&g, &mut rng).unwrap();
        let subs = [Subgroup::whole(&g), Subgroup::trivial(&g), Subgroup::generated_by(&g, &[g.times(g.generator(0), 2)])];
        for d in &subs {
            prop_assert_eq!(tor_basechange(1, d, &m).unwrap(), homology_h1(d, &m).unwrap());
        }
    }

    #[test]
    fn tor_mod_prime_power_is_torsion(orders in small_group(), seed in any::<u64>(), e in 1u32..=2) {
        let g = group(&orders);
        let p = if orders.contains(&3) || orders.contains(&9) { 3u64 } else { 2 };
        let m = random_module(&g, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let n = BigInt::from(p).pow(e);
        prop_assert_eq!(tor_mod_n(1, &n, &m).unwrap(), m.underlying_invariants().n_torsion(&n));
    }

    #[test]
    fn kernels_and_cokernels_of_maps(orders in small_group(), entries in prop::collection::vec(-2i64..=2, 18), shape in (1usize..=2, 1usize..=2)) {
        let g = group(&orders);
        let n = g.order();
        let (a, b) = shape;
        let mut it = entries.iter().cycle();
        let matrix: Vec<Vec<GroupRingElement>> = (0..b)
            .map(|_| (0..a).map(|_| {
                let c: Vec<i64> = (0..n).map(|_| *it.next().unwrap()).collect();
                GroupRingElement::from_i64(&g, &c).unwrap()
            }).collect())
            .collect();
        let f = ModuleMap::new(FPModule::free(&g, a), FPModule::free(&g, b), matrix).unwrap();
        let (_, incl) = ker_map(&f).unwrap();
        prop_assert!(incl.is_injective());
        prop_assert!(incl.then(&f).unwrap().is_zero());
        prop_assert_eq!(incl.image_lattice(), f.kernel_lattice());
        let c = coker_map(&f).unwrap();
        let inv = c.underlying_invariants();
        if let Some(e) = EnumeratedGroup::new(b * n, &f.image_generators().iter().flat_map(|v| flat_translates(&orders, v)).collect::<Vec<_>>(), 1000) {
            prop_assert_eq!(inv.order(), Some(BigInt::from(e.order())));
        }
    }

    #[test]
    fn base_change_along_identity_is_trivial(orders in small_group(), seed in any::<u64>()) {
        let g = group(&orders);
        let m = random_module(&g, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (mb, _) = base_change(&GroupHom::identity(&g), &m).unwrap();
        prop_assert_eq!(mb, m);
    }
}

/// Smallest number of `F_p[G]`-generators found by trying all tuples.
fn brute_min_gens(p: u64, orders: &[u64], n: usize, rels: &[Vec<u64>]) -> usize {
    let els = group_elements(orders);
    let order = els.len();
    let dim = n * order;
    let translates: Vec<Box<dyn Fn(&[u64]) -> Vec<u64>>> = els
        .iter()
        .map(|a| {
            let a = a.clone();
            let els = els.clone();
            let orders = orders.to_vec();
            Box::new(move |v: &[u64]| {
                let mut w = vec![0u64; v.len()];
                for blk in 0..v.len() / order {
                    for (h, eh) in els.iter().enumerate() {
                        let s: Vec<u64> = eh.iter().zip(&a).map(|(x, y)| x + y).collect();
                        w[blk * order + index_of(&orders, &s)] = v[blk * order + h];
                    }
                }
                w
            }) as Box<dyn Fn(&[u64]) -> Vec<u64>>
        })
        .collect();
    let total = (p as usize).pow(dim as u32);
    let all: Vec<Vec<u64>> = (0..total)
        .map(|mut k| {
            (0..dim)
                .map(|_| {
                    let d = (k % p as usize) as u64;
                    k /= p as usize;
                    d
                })
                .collect()
        })
        .collect();
    let generates = |gens: &[Vec<u64>]| {
        let mut g: Vec<Vec<u64>> = rels.to_vec();
        g.extend_from_slice(gens);
        g.push(vec![0; dim]);
        fp_span(p, &g, &translates).len() == total
    };
    if generates(&[]) {
        return 0;
    }
    for x in &all {
        if generates(std::slice::from_ref(x)) {
            return 1;
        }
    }
    for (i, x) in all.iter().enumerate() {
        for y in &all[i + 1..] {
            if generates(&[x.clone(), y.clone()]) {
                return 2;
            }
        }
    }
    3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn min_gens_matches_brute_force(
        case in prop_oneof![
            Just((2u64, vec![2u64], 2usize)),
            Just((2, vec![4], 1)),
            Just((2, vec![2, 2], 1)),
            Just((3, vec![3], 1)),
            Just((2, vec![2], 1)),
        ],
        coeffs in prop::collection::vec(-2i64..=2, 8),
    ) {
        let (p, orders, n) = case;
        let g = group(&orders);
        let ord = g.order();
        let pe = GroupRingElement::one(&g).scale(&BigInt::from(p));
        let zero = GroupRingElement::from_i64(&g, &vec![0; ord]).unwrap();
        let mut rels: Vec<Vec<GroupRingElement>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { pe.clone() } else { zero.clone() }).collect())
            .collect();
        let extra: Vec<GroupRingElement> = (0..n)
            .map(|i| GroupRingElement::from_i64(&g, &coeffs[i * ord..(i + 1) * ord]).unwrap())
            .collect();
        rels.push(extra);
        let m = FPModule::new(&g, n, &rels).unwrap();
        let flat: Vec<Vec<u64>> = m
            .flat_relations()
            .iter()
            .map(|v| v.iter().map(|x| {
                let r = x % BigInt::from(p);
                let r = if r < BigInt::from(0) { r + BigInt::from(p) } else { r };
                u64::try_from(r).unwrap()
            }).collect())
            .collect();
        prop_assert_eq!(min_gens(&m, p).unwrap(), brute_min_gens(p, &orders, n, &flat));
        let b = fs_bound(&m, p).unwrap();
        prop_assert!(b.per_prime.values().all(|&k| k <= n));
    }
}
