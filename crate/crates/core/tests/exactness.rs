use hom2::cochain::CochainComplex;
use hom2::exactness::{check_complex_exact, check_relative_two_exact_with};

/// Instances beyond this are not cross-checked element by element.
const CAP: usize = 1 << 16;
use hom2::generate::{random_complex, random_exact_complex};
use hom2::intmod::BaseRing;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Verdict, and whether it was cross-checked against the definition.
fn check_middle(c: &CochainComplex) -> (bool, bool) {
    let cert = check_relative_two_exact_with(
        &c.diff(0),
        &c.alpha(0).unwrap(),
        &c.diff(1),
        &c.alpha(1).unwrap(),
        &c.diff(2),
        &c.alpha(2).unwrap(),
        &c.diff(3),
        Some(CAP),
    )
    .unwrap();
    assert!(cert.recheck());
    assert_ne!(cert.cross_check, Some(false));
    assert_eq!(cert.verdict, check_complex_exact(c, 2).unwrap().verdict);
    (cert.verdict, cert.cross_check == Some(true))
}

#[test]
fn local_cohomology_agrees_with_the_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = [0usize; 2];
    let mut checked = 0;
    for n in [2u64, 3, 4, 6] {
        let r = BaseRing::zn(n);
        for _ in 0..60 {
            let c = random_complex(&r, 5, 2, false, &mut rng).unwrap();
            let (v, crossed) = check_middle(&c);
            seen[v as usize] += 1;
            checked += crossed as usize;
        }
    }
    assert_eq!(checked, 240, "every instance is cross-checked");
    assert!(seen[0] > 0 && seen[1] > 0, "both verdicts occur: {seen:?}");
}

#[test]
fn perturbed_split_complexes_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut crossed = 0;
    for n in [2u64, 4, 6] {
        let r = BaseRing::zn(n);
        for _ in 0..20 {
            let c = random_exact_complex(&r, 5, 2, &mut rng).unwrap();
            let (v, x) = check_middle(&c);
            assert!(v);
            crossed += x as usize;
            for k in 0..5 {
                assert!(check_complex_exact(&c, k).unwrap().verdict);
            }
        }
    }
    assert!(crossed >= 50, "only {crossed} of 60 cross-checked");
}
