use hom2::intmod::{BaseRing, FpModule, Matrix};
use hom2::oracle::{
    all_free_two_mods, sequence_complex, sequences_through, verify_universal, Instance, UniversalKind, DEFAULT_CAP,
};
use hom2::twomod::TwoMod;

fn ends(r: &BaseRing) -> Vec<TwoMod> {
    let m = FpModule::free(r, 1);
    vec![
        TwoMod::zero(r),
        TwoMod::discrete(&m),
        TwoMod::one_object(&m),
        TwoMod::from_matrix(&m, &m, Matrix::identity(1)).unwrap(),
    ]
}

#[test]
fn every_small_two_module_over_z2() {
    let r = BaseRing::zn(2);
    let mods = all_free_two_mods(&r, 2, DEFAULT_CAP).unwrap();
    assert_eq!(mods.len(), 31);
    let ends = ends(&r);
    let mut checks = 0;
    for b in &mods {
        for inst in sequences_through(b, &ends, usize::MAX, DEFAULT_CAP).unwrap() {
            for kind in [UniversalKind::RelKernel, UniversalKind::RelCokernel] {
                let rep = verify_universal(kind, &inst, DEFAULT_CAP).unwrap();
                assert!(rep.is_ok(), "{kind}: {:?}", rep.mismatches);
                checks += rep.checks;
            }
            let Instance::Sequence { f, g, phi } = &inst else { unreachable!() };
            let c = sequence_complex(f, g, phi).unwrap();
            for n in 0..3 {
                let inst = Instance::Complex { complex: c.clone(), n };
                let rep = verify_universal(UniversalKind::CohomologyDescription, &inst, DEFAULT_CAP).unwrap();
                assert!(rep.is_ok(), "{:?}", rep.mismatches);
                checks += rep.checks;
            }
        }
        for a in &mods {
            let rep = verify_universal(UniversalKind::Biproduct, &Instance::Pair(a.clone(), b.clone()), DEFAULT_CAP).unwrap();
            assert!(rep.is_ok(), "{:?}", rep.mismatches);
        }
    }
    assert!(checks > 0);
}
