
use hom2::cochain::CochainHomotopy;
use hom2::generate::{random_one_mor, random_two_mod};
use hom2::intmod::{BaseRing, FpModule, Matrix};
use hom2::oracle::DEFAULT_CAP;
use hom2::relkc::canonical_trivialization;
use hom2::resolution::*;
use hom2::twomod::{biproduct, OneMor, TwoMod};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_resolutions_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [2u64, 4, 6] {
        let r = BaseRing::zn(n);
        let fam = faithful_test_family(&r, DEFAULT_CAP).unwrap();
        for _ in 0..5 {
            let a = random_two_mod(&r, 2, &mut rng);
            let res = build_resolution(&a, 4, &FreeHull::default()).unwrap();
            for i in res.injectives() {
                assert!(i.deg0().is_zero());
            }
            let rep = validate_resolution(&res, &fam).unwrap();
            assert!(rep.is_valid(), "{rep:?}");
        }
    }
}

#[test]
fn lifts_exist_and_are_homotopic() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for n in [2u64, 4, 6] {
        let r = BaseRing::zn(n);
        for _ in 0..4 {
            let a = random_two_mod(&r, 2, &mut rng);
            let b = random_two_mod(&r, 2, &mut rng);
            let f = random_one_mor(&a, &b, &mut rng).unwrap();
            let ra = build_resolution(&a, 4, &FreeHull::default()).unwrap();
            let rb = build_resolution(&b, 4, &FreeHull { extra: 1 }).unwrap();
            let l1 = lift_morphism(&f, &ra, &rb).unwrap();
            let l2 = lift_morphism_random(&f, &ra, &rb, &mut rng).unwrap();
            assert!(l1.validate().is_valid() && l2.validate().is_valid());
            let h = compare_lifts(&l1, &l2).unwrap();
            assert!(h.validate().is_valid());
            let d = difference_morphism(&l1, &l2, &CochainHomotopy::zero(&l1), 1).unwrap();
            assert!(d.chain_condition_holds());
            let d0 = difference_morphism(&l1, &l1, &CochainHomotopy::zero(&l1), 1).unwrap();
            assert!(d0.is_zero());
        }
    }
}

#[test]
fn identity_lifts_to_identity() {
    let r = BaseRing::zn(4);
    let a = TwoMod::discrete(&FpModule::cyclic(&r, 2));
    let res = build_resolution(&a, 3, &FreeHull::default()).unwrap();
    let l = lift_morphism(&OneMor::identity(&a), &res, &res).unwrap();
    assert!(l.maps().iter().all(|m| m.same_map(&OneMor::identity(m.source()))));
}

#[test]
fn horseshoe_on_discrete_and_split_extensions() {
    let r = BaseRing::zn(4);
    let fam = faithful_test_family(&r, DEFAULT_CAP).unwrap();
    let z2 = TwoMod::discrete(&FpModule::cyclic(&r, 2));
    let z4 = TwoMod::discrete(&FpModule::free(&r, 1));
    let f = OneMor::new(&z2, &z4, Matrix::zeros(0, 0), Matrix::from_i64(1, 1, &[2])).unwrap();
    let g = OneMor::new(&z4, &z2, Matrix::zeros(0, 0), Matrix::from_i64(1, 1, &[1])).unwrap();
    let phi = canonical_trivialization(&f, &g).unwrap();
    let ra = build_resolution(&z2, 4, &FreeHull::default()).unwrap();
    let hs = horseshoe(&f, &phi, &g, &ra, &ra).unwrap();
    assert!(validate_resolution(&hs.resolution, &fam).unwrap().is_valid());

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..4 {
        let a = random_two_mod(&r, 2, &mut rng);
        let c = random_two_mod(&r, 2, &mut rng);
        let bp = biproduct(&a, &c).unwrap();
        let phi = canonical_trivialization(&bp.inj[0], &bp.proj[1]).unwrap();
        let ra = build_resolution(&a, 4, &FreeHull::default()).unwrap();
        let rc = build_resolution(&c, 4, &FreeHull::default()).unwrap();
        let hs = horseshoe(&bp.inj[0], &phi, &bp.proj[1], &ra, &rc).unwrap();
        let rep = validate_resolution(&hs.resolution, &fam).unwrap();
        assert!(rep.is_valid(), "{rep:?}");
    }
}

#[test]
fn not_an_extension_is_rejected() {
    let r = BaseRing::zn(4);
    let z4 = TwoMod::discrete(&FpModule::free(&r, 1));
    let zero = TwoMod::zero(&r);
    let f = OneMor::zero(&z4, &z4);
    let g = OneMor::zero(&z4, &zero);
    let phi = canonical_trivialization(&f, &g).unwrap();
    let ra = build_resolution(&z4, 2, &FreeHull::default()).unwrap();
    let rc = build_resolution(&zero, 2, &FreeHull::default()).unwrap();
    assert!(horseshoe(&f, &phi, &g, &ra, &rc).is_err());
}

#[test]
fn injectivity_is_decided_by_extension_problems() {
    let r = BaseRing::zn(4);
    let fam = faithful_test_family(&r, DEFAULT_CAP).unwrap();
    let z4 = FpModule::free(&r, 1);
    let contractible = TwoMod::from_matrix(&z4, &z4, Matrix::identity(1)).unwrap();
    assert!(check_injective(&contractible, &fam).unwrap().is_injective());
    assert!(check_injective(&TwoMod::one_object(&z4), &fam).unwrap().is_injective());
    let discrete = TwoMod::discrete(&FpModule::cyclic(&r, 2));
    let cert = check_injective(&discrete, &fam).unwrap();
    assert!(!cert.is_injective());
    assert!(!cert.failures.is_empty());
}
