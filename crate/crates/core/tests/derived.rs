use hom2::derived::*;
use hom2::generate::{random_complex, random_complex_mor, random_homotopy, random_two_mod};
use hom2::intmod::{BaseRing, FpModule, Int, Matrix};
use hom2::relkc::canonical_trivialization;
use hom2::resolution::{build_resolution, FreeHull};
use hom2::twomod::{biproduct, OneMor, TwoMod};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn functors(r: &BaseRing) -> Vec<AdditiveTwoFunctor> {
    vec![
        AdditiveTwoFunctor::Identity,
        AdditiveTwoFunctor::HomFrom(FpModule::cyclic(r, 2)),
        AdditiveTwoFunctor::HomFrom(FpModule::free(r, 1)),
        AdditiveTwoFunctor::BaseChange(Int::from(2)),
    ]
}

fn z2_in_z4() -> (OneMor, OneMor) {
    let r = BaseRing::zn(4);
    let z2 = TwoMod::discrete(&FpModule::cyclic(&r, 2));
    let z4 = TwoMod::discrete(&FpModule::free(&r, 1));
    let f = OneMor::new(&z2, &z4, Matrix::zeros(0, 0), Matrix::from_i64(1, 1, &[2])).unwrap();
    let g = OneMor::new(&z4, &z2, Matrix::zeros(0, 0), Matrix::from_i64(1, 1, &[1])).unwrap();
    (f, g)
}

#[test]
fn functors_send_homotopies_to_homotopies() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for n in [2u64, 4, 6] {
        let r = BaseRing::zn(n);
        for t in functors(&r) {
            for _ in 0..3 {
                let a = random_complex(&r, 3, 2, false, &mut rng).unwrap();
                let b = random_complex(&r, 3, 2, false, &mut rng).unwrap();
                let f = random_complex_mor(&a, &b, &mut rng).unwrap();
                let h = random_homotopy(&f, &mut rng).unwrap();
                assert!(apply(&t, &a).unwrap().validate().is_valid());
                assert!(apply_mor(&t, &f).unwrap().validate().is_valid());
                assert!(apply_homotopy(&t, &h).unwrap().validate().is_valid(), "{t}");
            }
        }
    }
}

#[test]
fn products_are_preserved_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let r = BaseRing::zn(4);
    for _ in 0..20 {
        let a = random_two_mod(&r, 2, &mut rng);
        let b = random_two_mod(&r, 2, &mut rng);
        for t in functors(&r) {
            assert!(product_comparison(&t, &a, &b).unwrap().is_equivalence());
        }
    }
}

#[test]
fn ext_of_z2_over_z4() {
    let r = BaseRing::zn(4);
    let a = TwoMod::discrete(&FpModule::cyclic(&r, 2));
    let res = build_resolution(&a, 5, &FreeHull::default()).unwrap();
    let t = AdditiveTwoFunctor::HomFrom(FpModule::cyclic(&r, 2));
    for i in 0..=3 {
        let d = derived_functor(&t, &res, i, Convention::Plain).unwrap();
        assert_eq!(d.pis().pi0.describe(), "Z/2", "degree {i}");
        let expect1 = if i == 0 { "0" } else { "Z/2" };
        assert_eq!(d.pis().pi1.describe(), expect1, "degree {i}");
        let aug = derived_functor(&t, &res, i, Convention::Augmented).unwrap();
        if i >= 1 {
            assert_eq!(aug.pis().pi0.describe(), d.pis().pi0.describe());
        }
        // the augmented variant sees the augmentation in its morphisms
        let aug1 = if i == 1 { "0" } else { "Z/2" };
        if i >= 1 {
            assert_eq!(aug.pis().pi1.describe(), aug1);
        }
    }
    assert!(derived_functor(&t, &res, 4, Convention::Plain).is_err());
}

#[test]
fn identity_functor_recovers_the_input_in_degree_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for n in [2u64, 4, 6] {
        let r = BaseRing::zn(n);
        for _ in 0..4 {
            let a = random_two_mod(&r, 2, &mut rng);
            let res = build_resolution(&a, 4, &FreeHull::default()).unwrap();
            let d = derived_functor(&AdditiveTwoFunctor::Identity, &res, 0, Convention::Plain).unwrap();
            let (p, q) = (d.pis(), a.pi());
            assert_eq!(p.pi0.describe(), q.pi0.describe());
            assert_eq!(p.pi1.describe(), q.pi1.describe());
            let d1 = derived_functor(&AdditiveTwoFunctor::Identity, &res, 1, Convention::Plain).unwrap();
            assert!(d1.pis().pi0.is_zero());
            let d2 = derived_functor(&AdditiveTwoFunctor::Identity, &res, 2, Convention::Plain).unwrap();
            assert!(d2.pis().pi0.is_zero() && d2.pis().pi1.is_zero());
            for i in 0..=2 {
                let aug = derived_functor(&AdditiveTwoFunctor::Identity, &res, i, Convention::Augmented).unwrap();
                assert!(aug.pis().pi0.is_zero() && aug.pis().pi1.is_zero());
            }
        }
    }
}

#[test]
fn independent_of_the_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let r = BaseRing::zn(4);
    for _ in 0..3 {
        let a = random_two_mod(&r, 2, &mut rng);
        let r1 = build_resolution(&a, 4, &FreeHull::default()).unwrap();
        let r2 = build_resolution(&a, 4, &FreeHull { extra: 1 }).unwrap();
        for t in functors(&r) {
            for i in 0..=2 {
                let w = resolution_independence(&t, &r1, &r2, i).unwrap();
                assert!(w.is_valid(), "{t} degree {i}");
            }
        }
    }
}

#[test]
fn left_relative_exactness() {
    let (f, g) = z2_in_z4();
    let phi = canonical_trivialization(&f, &g).unwrap();
    let r = BaseRing::zn(4);
    let seqs = vec![(f.clone(), phi.clone(), g.clone())];
    let hom = check_left_relative_exact(&AdditiveTwoFunctor::HomFrom(FpModule::cyclic(&r, 2)), &seqs).unwrap();
    assert!(hom.iter().all(|c| c.passes()));
    let tensor = check_left_relative_exact(&AdditiveTwoFunctor::BaseChange(Int::from(2)), &seqs).unwrap();
    assert!(!tensor[0].image[0].verdict);

    // not an extension: rejected as input
    let bad = vec![(g.clone(), canonical_trivialization(&g, &OneMor::zero(g.target(), g.target())).unwrap(), OneMor::zero(g.target(), g.target()))];
    assert!(check_left_relative_exact(&AdditiveTwoFunctor::Identity, &bad).is_err());
}

#[test]
fn long_sequence_of_z2_in_z4() {
    let (f, g) = z2_in_z4();
    let phi = canonical_trivialization(&f, &g).unwrap();
    let r = BaseRing::zn(4);
    let ra = build_resolution(f.source(), 6, &FreeHull::default()).unwrap();
    let t = AdditiveTwoFunctor::HomFrom(FpModule::cyclic(&r, 2));
    let ls = long_sequence(&t, &f, &phi, &g, &ra, &ra, 3).unwrap();
    assert!(ls.products_preserved);
    assert!(ls.trivializations.iter().all(|x| x.is_valid()));
    assert!(ls.is_exact(), "{:#?}", ls.certificates.iter().filter(|c| !c.verdict).collect::<Vec<_>>());
    assert_eq!(ls.terms.len(), 13);
    assert_eq!(ls.certificates.len(), 12);
    assert!(long_sequence(&t, &f, &phi, &g, &ra, &ra, 4).is_err());
    for t in functors(&r) {
        let ls = long_sequence(&t, &f, &phi, &g, &ra, &ra, 2).unwrap();
        assert!(ls.is_exact(), "{t}");
    }
}

#[test]
fn trivial_extension_has_zero_connecting_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let r = BaseRing::zn(4);
    let c = random_two_mod(&r, 2, &mut rng);
    let zero = TwoMod::zero(&r);
    let f = OneMor::zero(&zero, &c);
    let g = OneMor::identity(&c);
    let phi = canonical_trivialization(&f, &g).unwrap();
    let ra = build_resolution(&zero, 4, &FreeHull::default()).unwrap();
    let rc = build_resolution(&c, 4, &FreeHull::default()).unwrap();
    let ls = long_sequence(&AdditiveTwoFunctor::HomFrom(FpModule::cyclic(&r, 2)), &f, &phi, &g, &ra, &rc, 1).unwrap();
    assert!(ls.is_exact());
    for (k, m) in ls.maps.iter().enumerate() {
        match k % 3 {
            1 => assert!(m.is_equivalence()),
            2 => assert!(m.is_zero()),
            _ => {}
        }
    }
}

#[test]
fn long_sequences_of_split_extensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for n in [2u64, 4, 6] {
        let r = BaseRing::zn(n);
        for _ in 0..2 {
            let a = random_two_mod(&r, 1, &mut rng);
            let c = random_two_mod(&r, 1, &mut rng);
            let bp = biproduct(&a, &c).unwrap();
            let (f, g) = (bp.inj[0].clone(), bp.proj[1].clone());
            let phi = canonical_trivialization(&f, &g).unwrap();
            let ra = build_resolution(&a, 4, &FreeHull::default()).unwrap();
            let rc = build_resolution(&c, 4, &FreeHull::default()).unwrap();
            for t in functors(&r) {
                let ls = long_sequence(&t, &f, &phi, &g, &ra, &rc, 1).unwrap();
                assert!(ls.products_preserved);
                assert!(ls.is_exact(), "{t} {:#?}", ls.certificates.iter().filter(|c| !c.verdict).collect::<Vec<_>>());
            }
        }
    }
}
