use num_bigint::BigInt;
use prolim_core::tower::{Chain, Tower, TowerModule, TowerSpec};
use prolim_core::verify::{
    build_xa, check_kappa, check_tor_ppower, fs_scan, nakayama_lift, random_module, verify_prop_ses,
    DigitSequence, Expectation,
};
use prolim_core::TowerElement;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tower(p: u64, d: usize, m: usize) -> Tower {
    Tower::build(&TowerSpec::new(p, d, m), 128).unwrap()
}

fn cyclic_tower() -> impl Strategy<Value = Tower> {
    prop_oneof![Just((2u64, 5usize)), Just((3, 3)), Just((5, 2)), Just((2, 3))]
        .prop_map(|(p, m)| tower(p, 1, m))
}

#[test]
fn tower_shapes() {
    for (p, d, m) in [(2u64, 1usize, 5usize), (3, 1, 3), (5, 1, 2), (2, 2, 3), (3, 2, 2)] {
        let t = tower(p, d, m);
        for l in 0..=m {
            assert_eq!(t.order(l) as u64, p.pow((l * d) as u32));
            let e = t.idempotent(l);
            assert_eq!(&e.gr_mul(e).unwrap(), e);
            if l > 0 {
                assert_eq!(t.delta(l).order() as u64, p.pow(d as u32));
            }
        }
    }
}

#[test]
fn custom_schedule_tower() {
    let t = Tower::build(&TowerSpec::with_schedule(2, vec![0, 2, 3]), 128).unwrap();
    assert_eq!(t.order(1), 4);
    assert_eq!(t.order(2), 8);
    for m in 0..=2 {
        assert!(verify_prop_ses(&t, m).unwrap().passed);
    }
    let a = DigitSequence::for_tower(&t, vec![3, 1]).unwrap();
    let (_, r) = build_xa(&t, &a).unwrap();
    assert!(r.passed, "{:?}", r.failed_leaves());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn products_of_compatible_elements_are_compatible(t in cyclic_tower(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DigitSequence::random(&t, &mut rng).unwrap();
        let b = DigitSequence::random(&t, &mut rng).unwrap();
        let (xa, ra) = build_xa(&t, &a).unwrap();
        let (xb, rb) = build_xa(&t, &b).unwrap();
        prop_assert!(ra.passed && rb.passed);
        prop_assert!(xa.checked_mul(&xb).unwrap().is_compatible(&t).unwrap());
        prop_assert!(xa.checked_add(&TowerElement::one(&t)).unwrap().is_compatible(&t).unwrap());
    }

    #[test]
    fn random_chains_satisfy_kappa(t in prop_oneof![Just(tower(2, 1, 3)), Just(tower(3, 1, 2))], seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Chain::random(&t, 1, 1, 2, &mut rng).unwrap();
        for a in 0..t.max_level() {
            let r = check_kappa(&t, &c, a).unwrap();
            prop_assert!(r.passed, "{:?}", r.failed_leaves());
        }
    }

    #[test]
    fn tor_ppower_on_tower_levels(t in cyclic_tower(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = 1 + (seed as usize) % t.max_level();
        let g = t.group(m.min(2));
        let module = random_module(g, &mut rng).unwrap();
        let r = check_tor_ppower(&module, t.p(), 1).unwrap();
        prop_assert!(r.passed);
    }
}

#[test]
fn nakayama_on_standard_towers() {
    for (p, d, m) in [(2u64, 1usize, 3usize), (3, 1, 2), (2, 2, 2)] {
        let t = tower(p, d, m);
        for tm in [TowerModule::free(&t, 1).unwrap(), TowerModule::trivial_z(&t).unwrap(), TowerModule::r_mod_p(&t).unwrap()] {
            let (gens, r) = nakayama_lift(&t, &tm, d).unwrap();
            assert!(r.passed, "{} {:?}", tm.name(), r.failed_leaves());
            assert!(gens.len() <= 1 + d);
        }
    }
    let t = tower(2, 1, 3);
    let (_, r) = nakayama_lift(&t, &TowerModule::varpi_ideal(&t).unwrap(), 1).unwrap();
    assert!(!r.passed);
    let p2 = r.find("p2_tower").unwrap();
    assert_eq!(p2.witness["level"], serde_json::json!(1));
    assert_eq!(p2.witness["kernel"]["torsion"], serde_json::json!(["2"]));
}

#[test]
fn scan_and_expectations() {
    let t = tower(3, 1, 3);
    let r = fs_scan(&t, &Chain::varpi(&t).unwrap(), &[0, 1, 2, 3]).unwrap();
    assert_eq!(r.witness["c"], serde_json::json!(2));
    let a = DigitSequence::for_tower(&t, vec![0, 1, 0]).unwrap();
    let (_, r) = build_xa(&t, &a).unwrap();
    assert_eq!(r.expect, Expectation::Fail);
    assert!(!r.passed);
    assert_eq!(BigInt::from(t.order(3)), BigInt::from(27));
}
