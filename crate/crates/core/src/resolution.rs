//! Injective resolutions over `Z/n`: construction, validation, lifting of
//! morphisms, comparison of lifts and the horseshoe construction.
//!
//! A resolution of `A` is stored as its augmented complex
//! `A → I_0 → I_1 → ... → I_N`; position 0 of that complex is `A`.
//! Every `I_n` built here is `(J_n → 0)` with `J_n` free over `Z/n`.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::cochain::{CochainComplex, CochainHomotopy, ComplexMor, ValidationReport};
use crate::error::{Error, Result};
use crate::exactness::{check_complex_exact, check_two_exact, ExactnessCertificate};
use crate::intmod::{BaseRing, FpModule, HomSystem, Int, Matrix, ModuleHom, SystemBuilder};
use crate::oracle::all_one_morphisms;
use crate::relkc::{canonical_trivialization, factor_through_cokernel, relative_cokernel};
use crate::twomod::{biproduct, OneMor, TwoMod, TwoMor};

/// Chooses a faithful `X → I` into an injective 2-module.
pub trait EmbeddingOracle {
    fn embed(&self, x: &TwoMod) -> Result<OneMor>;
}

/// `X → (J → 0)` embedding `X_1 ≅ ⊕ Z/d_i` into `J = (Z/n)^{k + extra}` by
/// `1 ↦ n/d_i` on the `i`-th summand.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeHull {
    pub extra: usize,
}

fn finite_modulus(ring: &BaseRing) -> Result<Int> {
    ring.modulus()
        .cloned()
        .ok_or_else(|| Error::Unsupported("injective resolutions are only available over Z/n".into()))
}

impl EmbeddingOracle for FreeHull {
    fn embed(&self, x: &TwoMod) -> Result<OneMor> {
        let ring = x.ring();
        let n = finite_modulus(ring)?;
        let (canon, to, _) = x.deg1().simplify();
        let k = canon.generators();
        let j = FpModule::free(ring, k + self.extra);
        let mut m = Matrix::zeros(k + self.extra, k);
        for (i, d) in canon.invariant_factors().iter().enumerate() {
            let order = d.gcd(&n);
            m[(i, i)] = &n / order;
        }
        let iota = ModuleHom::new(&canon, &j, m)?;
        let target = TwoMod::one_object(&j);
        OneMor::from_homs(x, &target, &to.then(&iota), &ModuleHom::zero(x.deg0(), target.deg0()))
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub source: TwoMod,
    /// `A → I_0 → ... → I_N`.
    pub augmented: CochainComplex,
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.augmented.len() - 2
    }

    /// The complex `I_0 → ... → I_N` without `A`.
    pub fn complex(&self) -> CochainComplex {
        self.augmented.tail().expect("a resolution has at least two entries")
    }

    pub fn augmentation(&self) -> OneMor {
        self.augmented.diff(0)
    }

    pub fn injectives(&self) -> &[TwoMod] {
        &self.augmented.entries()[1..]
    }

    pub fn truncate(&self, length: usize) -> Resolution {
        Resolution {
            source: self.source.clone(),
            augmented: self.augmented.truncate(length as isize + 1),
        }
    }
}

/// Resolution `A → I_0 → ... → I_N` with `N = length`: each stage embeds the
/// relative cokernel of the previous two maps.
pub fn build_resolution(a: &TwoMod, length: usize, oracle: &dyn EmbeddingOracle) -> Result<Resolution> {
    finite_modulus(a.ring())?;
    let stage = |s: &'static str| move |e: Error| match e {
        Error::Unsupported(_) => e,
        e => Error::construction(s, e.to_string()),
    };
    let aug = oracle.embed(a).map_err(stage("embedding of A"))?;
    if !aug.is_faithful() {
        return Err(Error::internal("embedding oracle returned a non-faithful map"));
    }
    let zero = TwoMod::zero(a.ring());
    let mut entries = vec![a.clone(), aug.target().clone()];
    let mut diffs = vec![aug];
    let mut alphas: Vec<ModuleHom> = Vec::new();
    for k in 1..=length {
        let (f, phi) = if k == 1 {
            let f = OneMor::zero(&zero, a);
            let phi = canonical_trivialization(&f, &diffs[0])?;
            (f, phi)
        } else {
            let f = diffs[k - 2].clone();
            let phi = TwoMor::from_hom(&f.then(&diffs[k - 1]), &OneMor::zero(f.source(), diffs[k - 1].target()), &alphas[k - 2])?;
            (f, phi)
        };
        let q = relative_cokernel(&f, &diffs[k - 1], &phi).map_err(stage("relative cokernel"))?;
        let e = oracle.embed(&q.q).map_err(stage("embedding of the cokernel"))?;
        let alpha = TwoMor::whisker_left(&e, &q.piw)?;
        entries.push(e.target().clone());
        diffs.push(q.p.then(&e));
        alphas.push(alpha.h().clone());
    }
    let augmented = CochainComplex::new(entries, diffs, alphas).map_err(stage("resolution complex"))?;
    Ok(Resolution {
        source: a.clone(),
        augmented,
    })
}

/// Outcome of the extension test for one candidate injective.
#[derive(Clone, Debug)]
pub struct InjectivityCertificate {
    pub cases: usize,
    pub solved: usize,
    /// Descriptions of unsolvable extension problems.
    pub failures: Vec<String>,
}

impl InjectivityCertificate {
    pub fn is_injective(&self) -> bool {
        self.failures.is_empty() && self.solved == self.cases
    }
}

fn small_modules(ring: &BaseRing) -> Result<Vec<FpModule>> {
    let n = finite_modulus(ring)?
        .to_u64()
        .ok_or_else(|| Error::capacity("modulus too large for the test family"))?;
    let mut out = vec![FpModule::zero(ring)];
    out.extend((2..n).filter(|d| n % d == 0).map(|d| FpModule::cyclic(ring, d)));
    out.push(FpModule::free(ring, 1));
    Ok(out)
}

/// 2-modules with at most one generator in each degree.
pub fn small_two_mods(ring: &BaseRing) -> Result<Vec<TwoMod>> {
    let n = finite_modulus(ring)?.to_i64().unwrap_or(i64::MAX);
    let mods = small_modules(ring)?;
    let mut out = Vec::new();
    for m1 in &mods {
        for m0 in &mods {
            if m1.generators() == 0 || m0.generators() == 0 {
                out.push(TwoMod::new(ModuleHom::zero(m1, m0)));
                continue;
            }
            let mut seen: Vec<ModuleHom> = Vec::new();
            for c in 0..n {
                if let Ok(d) = ModuleHom::new(m1, m0, Matrix::from_i64(1, 1, &[c])) {
                    if !seen.iter().any(|s| s.same_map(&d)) {
                        seen.push(d.clone());
                        out.push(TwoMod::new(d));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Every faithful 1-morphism between the [`small_two_mods`].
pub fn faithful_test_family(ring: &BaseRing, cap: usize) -> Result<Vec<OneMor>> {
    let objs = small_two_mods(ring)?;
    let mut out = Vec::new();
    for a in &objs {
        for b in &objs {
            out.extend(all_one_morphisms(a, b, cap)?.into_iter().filter(|f| f.is_faithful()));
        }
    }
    Ok(out)
}

/// Injectivity of `I` against a family of faithful `F: A → B`: every
/// `G: A → I` extends to `G': B → I` with `G' F ≅ G`. The problem is linear in
/// `G`, so it is solved for a generating set of the chain maps `A → I`.
pub fn check_injective(i: &TwoMod, family: &[OneMor]) -> Result<InjectivityCertificate> {
    let mut cert = InjectivityCertificate {
        cases: 0,
        solved: 0,
        failures: Vec::new(),
    };
    for f in family {
        if !f.is_faithful() {
            return Err(Error::input("test family contains a non-faithful map"));
        }
        let (a, b) = (f.source(), f.target());
        let mut gs = HomSystem::new(a.ring());
        let g1 = gs.add_unknown(a.deg1(), i.deg1());
        let g0 = gs.add_unknown(a.deg0(), i.deg0());
        let t = vec![gs.term(g1, Some(i.d()), None), gs.scaled_term(-1, g0, None, Some(a.d()))];
        gs.add_equation(a.deg1(), i.deg0(), t)?;
        let gens = gs.prepare().homogeneous_generators();

        let mut sys = HomSystem::new(a.ring());
        let x1 = sys.add_unknown(b.deg1(), i.deg1());
        let x0 = sys.add_unknown(b.deg0(), i.deg0());
        let h = sys.add_unknown(a.deg0(), i.deg1());
        let t = vec![sys.term(x1, Some(i.d()), None), sys.scaled_term(-1, x0, None, Some(b.d()))];
        sys.add_equation(b.deg1(), i.deg0(), t)?;
        let t = vec![sys.term(h, Some(i.d()), None), sys.term(x0, None, Some(f.f0()))];
        sys.add_equation(a.deg0(), i.deg0(), t)?;
        let t = vec![sys.term(h, None, Some(a.d())), sys.term(x1, None, Some(f.f1()))];
        sys.add_equation(a.deg1(), i.deg1(), t)?;
        let prepared = sys.prepare();
        for g in gens {
            cert.cases += 1;
            let rhs = vec![
                Matrix::zeros(i.deg0().generators(), b.deg1().generators()),
                g[g0].matrix().clone(),
                g[g1].matrix().clone(),
            ];
            if prepared.solve(&rhs)?.is_some() {
                cert.solved += 1;
            } else {
                cert.failures.push(format!("no extension along {f:?} of G = ({:?}, {:?})", g[g1], g[g0]));
            }
        }
    }
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct ResolutionReport {
    pub complex: ValidationReport,
    pub augmentation_faithful: bool,
    /// Relative 2-exactness at `A, I_0, ..., I_{N-2}`.
    pub exactness: Vec<ExactnessCertificate>,
    pub injectivity: Vec<InjectivityCertificate>,
}

impl ResolutionReport {
    pub fn is_valid(&self) -> bool {
        self.complex.is_valid()
            && self.augmentation_faithful
            && self.exactness.iter().all(|c| c.verdict)
            && self.injectivity.iter().all(|c| c.is_injective())
    }
}

/// Check a resolution. The top two entries have no successors to test
/// exactness against; every injective is tested against `family`.
pub fn validate_resolution(r: &Resolution, family: &[OneMor]) -> Result<ResolutionReport> {
    let c = &r.augmented;
    let exactness = (0..c.len() as isize - 2)
        .map(|k| check_complex_exact(c, k))
        .collect::<Result<Vec<_>>>()?;
    let mut injectivity: Vec<InjectivityCertificate> = Vec::new();
    let mut tested: Vec<(TwoMod, usize)> = Vec::new();
    for i in r.injectives() {
        if let Some((_, k)) = tested.iter().find(|(t, _)| t.same_as(i)) {
            injectivity.push(injectivity[*k].clone());
            continue;
        }
        tested.push((i.clone(), injectivity.len()));
        injectivity.push(check_injective(i, family)?);
    }
    Ok(ResolutionReport {
        complex: c.validate(),
        augmentation_faithful: r.augmentation().is_faithful(),
        exactness,
        injectivity,
    })
}

fn mor_system(a: &CochainComplex, b: &CochainComplex, f: &OneMor) -> Result<(SystemBuilder, Vec<(usize, usize)>, Vec<usize>)> {
    let p = a.len();
    let mut sb = SystemBuilder::new(a.ring());
    // x[k] for k >= 1; x[0] is a placeholder for the fixed F_0
    let mut x = vec![(usize::MAX, usize::MAX)];
    for k in 1..p {
        let (ea, eb) = (&a.entries()[k], &b.entries()[k]);
        let x1 = sb.unknown(ea.deg1(), eb.deg1());
        let x0 = sb.unknown(ea.deg0(), eb.deg0());
        sb.equation(ea.deg1(), eb.deg0(), &[(1, x1, Some(eb.d()), None), (-1, x0, None, Some(ea.d()))], None)?;
        x.push((x1, x0));
    }
    let lam: Vec<usize> = (0..p - 1)
        .map(|k| sb.unknown(a.entries()[k].deg0(), b.entries()[k + 1].deg1()))
        .collect();
    for k in 0..p - 1 {
        let ki = k as isize;
        let (l, m) = (a.diff(ki), b.diff(ki));
        let ea = &a.entries()[k];
        let eb1 = &b.entries()[k + 1];
        // d h + F_{k+1} l - m F_k = 0, in both degrees
        let m0 = m.f0().clone();
        let m1 = m.f1().clone();
        let mut t0 = vec![(1, lam[k], Some(eb1.d()), None), (1, x[k + 1].1, None, Some(l.f0()))];
        let mut t1 = vec![(1, lam[k], None, Some(ea.d())), (1, x[k + 1].0, None, Some(l.f1()))];
        let (k0, k1);
        if k == 0 {
            k0 = Some(f.f0().then(&m0));
            k1 = Some(f.f1().then(&m1));
        } else {
            t0.push((-1, x[k].1, Some(&m0), None));
            t1.push((-1, x[k].0, Some(&m1), None));
            k0 = None;
            k1 = None;
        }
        sb.equation(ea.deg0(), eb1.deg0(), &t0, k0.as_ref())?;
        sb.equation(ea.deg1(), eb1.deg1(), &t1, k1.as_ref())?;
    }
    // F_{k+2,1} h_alpha_k - h_lambda_{k+1} l_{k,0} - m_{k+1,1} h_lambda_k - h_beta_k F_{k,0} = 0
    for k in 0..p.saturating_sub(2) {
        let ki = k as isize;
        let ha = a.alpha_h(ki);
        let hb = b.alpha_h(ki);
        let l0 = a.diff(ki).f0().clone();
        let m1 = b.diff(ki + 1).f1().clone();
        let mut t = vec![
            (1, x[k + 2].0, None, Some(&ha)),
            (-1, lam[k + 1], None, Some(&l0)),
            (-1, lam[k], Some(&m1), None),
        ];
        let known;
        if k == 0 {
            known = Some(f.f0().then(&hb));
        } else {
            t.push((-1, x[k].1, Some(&hb), None));
            known = None;
        }
        sb.equation(a.entries()[k].deg0(), b.entries()[k + 2].deg1(), &t, known.as_ref())?;
    }
    Ok((sb, x, lam))
}

fn assemble_mor(a: &CochainComplex, b: &CochainComplex, f: &OneMor, x: &[(usize, usize)], lam: &[usize], sol: &[ModuleHom]) -> Result<ComplexMor> {
    let mut maps = vec![f.clone()];
    for k in 1..a.len() {
        maps.push(OneMor::from_homs(&a.entries()[k], &b.entries()[k], &sol[x[k].0], &sol[x[k].1])?);
    }
    let lambdas = lam.iter().map(|&h| sol[h].clone()).collect();
    ComplexMor::new(a, b, maps, lambdas)
}

fn matched(ra: &Resolution, rb: &Resolution) -> (CochainComplex, CochainComplex) {
    let n = ra.length().min(rb.length());
    (ra.truncate(n).augmented, rb.truncate(n).augmented)
}

/// A lift of `F: A → B` to a morphism of augmented complexes with first
/// component `F`; the canonical solution of the defining linear system.
/// Lifting an identity between equal resolutions gives the identity.
pub fn lift_morphism(f: &OneMor, ra: &Resolution, rb: &Resolution) -> Result<ComplexMor> {
    check_lift_input(f, ra, rb)?;
    let (a, b) = matched(ra, rb);
    if f.same_map(&OneMor::identity(f.source()))
        && a.entries().iter().zip(b.entries()).all(|(x, y)| x.same_as(y))
        && a.diffs().iter().zip(b.diffs()).all(|(x, y)| x.same_map(y))
        && a.alphas().iter().zip(b.alphas()).all(|(x, y)| x.same_map(y))
    {
        return Ok(ComplexMor::identity(&a));
    }
    let (sb, x, lam) = mor_system(&a, &b, f)?;
    let sol = sb
        .solve()?
        .ok_or_else(|| Error::internal("lifting system has no solution"))?;
    assemble_mor(&a, &b, f, &x, &lam, &sol)
}

/// A random lift; different seeds give independent lifts.
pub fn lift_morphism_random<R: Rng>(f: &OneMor, ra: &Resolution, rb: &Resolution, rng: &mut R) -> Result<ComplexMor> {
    check_lift_input(f, ra, rb)?;
    let (a, b) = matched(ra, rb);
    let (sb, x, lam) = mor_system(&a, &b, f)?;
    let sol = sb
        .solve_random(rng)?
        .ok_or_else(|| Error::internal("lifting system has no solution"))?;
    assemble_mor(&a, &b, f, &x, &lam, &sol)
}

fn check_lift_input(f: &OneMor, ra: &Resolution, rb: &Resolution) -> Result<()> {
    if !f.source().same_as(&ra.source) || !f.target().same_as(&rb.source) {
        return Err(Error::input("F does not go between the resolved 2-modules"));
    }
    Ok(())
}

/// A homotopy between two lifts of the same `F`, with `H_0 = 0` on the
/// augmented complexes. The top `tau` of a finite resolution would need the
/// next injective, so the homotopy is valid below `valid_below`.
#[derive(Clone, Debug)]
pub struct LiftHomotopy {
    pub augmented: CochainHomotopy,
    pub valid_below: isize,
}

impl LiftHomotopy {
    pub fn validate(&self) -> ValidationReport {
        self.augmented.validate().below(self.valid_below)
    }

    /// The homotopy between the lifts on `I → J`, valid below `valid_below - 1`.
    pub fn tail(&self) -> Result<CochainHomotopy> {
        self.augmented.tail()
    }
}

pub fn compare_lifts(f: &ComplexMor, g: &ComplexMor) -> Result<LiftHomotopy> {
    if !f.is_parallel(g) {
        return Err(Error::input("lifts are not parallel"));
    }
    if !f.map(0).same_map(&g.map(0)) {
        return Err(Error::input("lifts of different morphisms"));
    }
    let a = f.source();
    let b = f.target();
    let p = a.len();
    if p < 3 {
        return Err(Error::input("resolution too short to compare lifts"));
    }
    let mut sb = SystemBuilder::new(a.ring());
    // H_k: A_{k+1} → B_k for k = 1..=p-2; H_0 = 0
    let mut hm: Vec<Option<(usize, usize)>> = vec![None];
    for k in 1..p - 1 {
        let (s, t) = (&a.entries()[k + 1], &b.entries()[k]);
        let y1 = sb.unknown(s.deg1(), t.deg1());
        let y0 = sb.unknown(s.deg0(), t.deg0());
        sb.equation(s.deg1(), t.deg0(), &[(1, y1, Some(t.d()), None), (-1, y0, None, Some(s.d()))], None)?;
        hm.push(Some((y1, y0)));
    }
    let h_at = |k: isize| -> Option<(usize, usize)> {
        if k < 0 {
            None
        } else {
            hm.get(k as usize).copied().flatten()
        }
    };
    let taus: Vec<usize> = (0..p - 1)
        .map(|k| sb.unknown(a.entries()[k].deg0(), b.entries()[k].deg1()))
        .collect();
    for k in 0..p - 1 {
        let ki = k as isize;
        let (ea, eb) = (&a.entries()[k], &b.entries()[k]);
        let mp = b.diff(ki - 1);
        let l = a.diff(ki);
        let diff = g.map(ki).sub(&f.map(ki));
        let mut t0 = vec![(1, taus[k], Some(eb.d()), None)];
        let mut t1 = vec![(1, taus[k], None, Some(ea.d()))];
        if let Some((y1, y0)) = h_at(ki - 1) {
            t0.push((-1, y0, Some(mp.f0()), None));
            t1.push((-1, y1, Some(mp.f1()), None));
        }
        if let Some((y1, y0)) = h_at(ki) {
            t0.push((-1, y0, None, Some(l.f0())));
            t1.push((-1, y1, None, Some(l.f1())));
        }
        sb.equation(ea.deg0(), eb.deg0(), &t0, Some(diff.f0()))?;
        sb.equation(ea.deg1(), eb.deg1(), &t1, Some(diff.f1()))?;
    }
    for k in 0..p.saturating_sub(2) {
        let ki = k as isize;
        let l0 = a.diff(ki).f0().clone();
        let m1 = b.diff(ki).f1().clone();
        let ha = a.alpha_h(ki);
        let hb = b.alpha_h(ki - 1);
        let mut t = vec![(-1, taus[k], Some(&m1), None)];
        if k + 1 < taus.len() {
            t.push((1, taus[k + 1], None, Some(&l0)));
        }
        if let Some((y1, _)) = h_at(ki + 1) {
            t.push((1, y1, None, Some(&ha)));
        }
        if let Some((_, y0)) = h_at(ki - 1) {
            t.push((-1, y0, Some(&hb), None));
        }
        if k + 1 == taus.len() {
            // involves the unconstrained top tau
            continue;
        }
        let known = f.lambda_h(ki).sub(&g.lambda_h(ki));
        sb.equation(a.entries()[k].deg0(), b.entries()[k + 1].deg1(), &t, Some(&known))?;
    }
    let sol = sb
        .solve()?
        .ok_or_else(|| Error::internal("comparison system has no solution"))?;
    let hmaps = (0..p - 1)
        .map(|k| match hm[k] {
            Some((y1, y0)) => OneMor::from_homs(&a.entries()[k + 1], &b.entries()[k], &sol[y1], &sol[y0]),
            None => Ok(OneMor::zero(&a.entries()[k + 1], &b.entries()[k])),
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tau_maps: Vec<ModuleHom> = taus.iter().map(|&t| sol[t].clone()).collect();
    tau_maps.push(ModuleHom::zero(a.entries()[p - 1].deg0(), b.entries()[p - 1].deg1()));
    let h = CochainHomotopy::new(f, g, hmaps, tau_maps)?;
    let out = LiftHomotopy {
        augmented: h,
        valid_below: p as isize - 2,
    };
    out.validate().into_result("comparison homotopy")?;
    Ok(out)
}

/// `F_n - G_n - M_{n-1} H_{n-1}` factored through `Coker(alpha_{n-2}, L_{n-1})`
/// of the source, using the data of a homotopy below `n`. For `n = 1` on
/// augmented complexes this is `F_0 - G_0` on the cokernel of the augmentation.
pub fn difference_morphism(f: &ComplexMor, g: &ComplexMor, below: &CochainHomotopy, n: isize) -> Result<OneMor> {
    if !f.is_parallel(g) {
        return Err(Error::input("morphisms are not parallel"));
    }
    let (a, b) = (f.source(), f.target());
    if n < 1 || n > a.top_degree() {
        return Err(Error::input(format!("difference morphism at degree {n} outside 1..={}", a.top_degree())));
    }
    let h_prev = below.hmap(n - 1);
    let diff = f.map(n).sub(&g.map(n)).sub(&h_prev.then(&b.diff(n - 1)));
    let lower = a.diff(n - 1);
    let psi_h = f
        .lambda_h(n - 1)
        .sub(&g.lambda_h(n - 1))
        .add(&below.tau_h(n - 1).then(b.diff(n - 1).f1()))
        .add(&below.hmap(n - 2).f0().then(&b.alpha_h(n - 2)));
    let psi = TwoMor::from_hom(&lower.then(&diff), &OneMor::zero(lower.source(), diff.target()), &psi_h)
        .map_err(|e| Error::precondition(format!("difference does not vanish on the image: {e}")))?;
    let low2 = a.diff(n - 2);
    let alpha = TwoMor::from_hom(&low2.then(&lower), &OneMor::zero(low2.source(), lower.target()), &a.alpha_h(n - 2))?;
    let q = relative_cokernel(&low2, &lower, &alpha)?;
    let (out, _) = factor_through_cokernel(&q, &diff, &psi)?;
    Ok(out)
}

/// Resolution of the middle term of an extension `A →F B →G C` with
/// `I_n ⊕ J_n` in each degree, with the inclusion and projection morphisms
/// of augmented complexes.
#[derive(Clone, Debug)]
pub struct Horseshoe {
    pub resolution: Resolution,
    pub inclusion: ComplexMor,
    pub projection: ComplexMor,
}

/// Horseshoe construction. The connecting maps `sigma_n: J_n → I_{n+1}`,
/// the component `N: B → I_0` of the augmentation and the off-diagonal
/// homotopies are found by solving one linear system.
pub fn horseshoe(f: &OneMor, phi: &TwoMor, g: &OneMor, ra: &Resolution, rc: &Resolution) -> Result<Horseshoe> {
    check_extension(f, phi, g)?;
    if !f.source().same_as(&ra.source) || !g.target().same_as(&rc.source) {
        return Err(Error::input("resolutions do not match the extension"));
    }
    let (ea, ec) = matched(ra, rc);
    let p = ea.len();
    if p < 3 {
        return Err(Error::input("horseshoe needs resolutions of length at least 1"));
    }
    let b = f.target();
    let ring = b.ring();
    let bps = (0..p)
        .map(|k| biproduct(&ea.entries()[k], &ec.entries()[k]))
        .collect::<Result<Vec<_>>>()?;
    let da = |k: usize| ea.diff(k as isize);
    let dc = |k: usize| ec.diff(k as isize);
    let ha = |k: usize| ea.alpha_h(k as isize);
    let hc = |k: usize| ec.alpha_h(k as isize);
    let aug_c = dc(0);
    let gc0 = g.f0().then(aug_c.f0());
    let gc1 = g.f1().then(aug_c.f1());
    let c0 = phi.h().then(aug_c.f1()).neg();

    let mut sb = SystemBuilder::new(ring);
    let i0 = &ea.entries()[1];
    let n1 = sb.unknown(b.deg1(), i0.deg1());
    let n0 = sb.unknown(b.deg0(), i0.deg0());
    sb.equation(b.deg1(), i0.deg0(), &[(1, n1, Some(i0.d()), None), (-1, n0, None, Some(b.d()))], None)?;
    // s[k]: EC_k → EA_{k+1} for k = 1..=p-2
    let mut s: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    for k in 1..p - 1 {
        let (src, tgt) = (&ec.entries()[k], &ea.entries()[k + 1]);
        let s1 = sb.unknown(src.deg1(), tgt.deg1());
        let s0 = sb.unknown(src.deg0(), tgt.deg0());
        sb.equation(src.deg1(), tgt.deg0(), &[(1, s1, Some(tgt.d()), None), (-1, s0, None, Some(src.d()))], None)?;
        s.push((s1, s0));
    }
    // hb[k] for k = 0..=p-3
    let hb: Vec<usize> = (0..p - 2)
        .map(|k| {
            let src = if k == 0 { b.deg0() } else { ec.entries()[k].deg0() };
            sb.unknown(src, ea.entries()[k + 2].deg1())
        })
        .collect();
    let e = sb.unknown(f.source().deg0(), i0.deg1());

    // alpha^B_0, A-row
    {
        let t2 = &ea.entries()[2];
        let d1 = da(1);
        sb.equation(
            b.deg0(),
            t2.deg0(),
            &[(1, hb[0], Some(t2.d()), None), (1, n0, Some(d1.f0()), None), (1, s[1].1, None, Some(&gc0))],
            None,
        )?;
        sb.equation(
            b.deg1(),
            t2.deg1(),
            &[(1, hb[0], None, Some(b.d())), (1, n1, Some(d1.f1()), None), (1, s[1].0, None, Some(&gc1))],
            None,
        )?;
    }
    // alpha^B_k, off-diagonal block
    for k in 1..p - 2 {
        let (src, tgt) = (&ec.entries()[k], &ea.entries()[k + 2]);
        let (dak, dck) = (da(k + 1), dc(k));
        sb.equation(
            src.deg0(),
            tgt.deg0(),
            &[(1, hb[k], Some(tgt.d()), None), (1, s[k].1, Some(dak.f0()), None), (1, s[k + 1].1, None, Some(dck.f0()))],
            None,
        )?;
        sb.equation(
            src.deg1(),
            tgt.deg1(),
            &[(1, hb[k], None, Some(src.d())), (1, s[k].0, Some(dak.f1()), None), (1, s[k + 1].0, None, Some(dck.f1()))],
            None,
        )?;
    }
    // coherence of alpha^B, off-diagonal block
    for k in 0..p.saturating_sub(3) {
        let tgt = &ea.entries()[k + 3];
        let da2 = da(k + 2);
        let ha1 = ha(k + 1);
        let hck = hc(k);
        let mut t: Vec<(i64, usize, Option<&ModuleHom>, Option<&ModuleHom>)> = vec![(1, hb[k], Some(da2.f1()), None)];
        let right_s;
        let right_hb;
        let src;
        if k == 0 {
            src = b.deg0().clone();
            right_s = g.f0().then(&hck);
            right_hb = gc0.clone();
            t.push((-1, n0, Some(&ha1), None));
        } else {
            src = ec.entries()[k].deg0().clone();
            right_s = hck.clone();
            right_hb = dc(k).f0().clone();
            t.push((-1, s[k].1, Some(&ha1), None));
        }
        if k + 2 < p - 1 {
            t.push((1, s[k + 2].0, None, Some(&right_s)));
        }
        if k + 1 < p - 2 {
            t.push((-1, hb[k + 1], None, Some(&right_hb)));
        }
        sb.equation(&src, tgt.deg1(), &t, None)?;
    }
    // lambda_0 of the inclusion, A-component, and its square at 0
    {
        let a = f.source();
        let aug_a = da(0);
        sb.equation(
            a.deg0(),
            i0.deg0(),
            &[(1, e, Some(i0.d()), None), (-1, n0, None, Some(f.f0()))],
            Some(&aug_a.f0().neg()),
        )?;
        sb.equation(
            a.deg1(),
            i0.deg1(),
            &[(1, e, None, Some(a.d())), (-1, n1, None, Some(f.f1()))],
            Some(&aug_a.f1().neg()),
        )?;
        let d1 = da(1);
        sb.equation(
            a.deg0(),
            ea.entries()[2].deg1(),
            &[(1, e, Some(d1.f1()), None), (1, s[1].0, None, Some(&c0)), (1, hb[0], None, Some(f.f0()))],
            Some(&ha(0)),
        )?;
    }
    let sol = sb
        .solve()?
        .ok_or_else(|| Error::internal("horseshoe system has no solution"))?;

    // assemble the middle complex
    let inj = |k: usize, i: usize| &bps[k].inj[i];
    let proj = |k: usize, i: usize| &bps[k].proj[i];
    let nmor = OneMor::from_homs(b, i0, &sol[n1], &sol[n0])?;
    let smor = |k: usize| OneMor::from_homs(&ec.entries()[k], &ea.entries()[k + 1], &sol[s[k].0], &sol[s[k].1]);
    let mut entries = vec![b.clone()];
    entries.extend(bps[1..].iter().map(|bp| bp.sum.clone()));
    let mut diffs = vec![bps[1].pair(&nmor, &g.then(&aug_c))];
    for k in 1..p - 1 {
        let d = proj(k, 0)
            .then(&da(k))
            .then(inj(k + 1, 0))
            .add(&proj(k, 1).then(&smor(k)?).then(inj(k + 1, 0)))
            .add(&proj(k, 1).then(&dc(k)).then(inj(k + 1, 1)));
        diffs.push(d);
    }
    let mut alphas = vec![sol[hb[0]]
        .then(inj(2, 0).f1())
        .add(&g.f0().then(&hc(0)).then(inj(2, 1).f1()))];
    for k in 1..p - 2 {
        alphas.push(
            proj(k, 0)
                .f0()
                .then(&ha(k))
                .then(inj(k + 2, 0).f1())
                .add(&proj(k, 1).f0().then(&sol[hb[k]]).then(inj(k + 2, 0).f1()))
                .add(&proj(k, 1).f0().then(&hc(k)).then(inj(k + 2, 1).f1())),
        );
    }
    let eb = CochainComplex::new(entries, diffs, alphas).map_err(|e| Error::construction("horseshoe complex", e.to_string()))?;

    let mut imaps = vec![f.clone()];
    let mut pmaps = vec![g.clone()];
    for k in 1..p {
        imaps.push(inj(k, 0).clone());
        pmaps.push(proj(k, 1).clone());
    }
    let mut ilam = vec![sol[e].then(inj(1, 0).f1()).add(&c0.then(inj(1, 1).f1()))];
    let mut plam = vec![ModuleHom::zero(b.deg0(), ec.entries()[1].deg1())];
    for k in 1..p - 1 {
        ilam.push(ModuleHom::zero(ea.entries()[k].deg0(), eb.entries()[k + 1].deg1()));
        plam.push(ModuleHom::zero(eb.entries()[k].deg0(), ec.entries()[k + 1].deg1()));
    }
    let inclusion = ComplexMor::new(&ea, &eb, imaps, ilam).map_err(|e| Error::construction("horseshoe inclusion", e.to_string()))?;
    let projection = ComplexMor::new(&eb, &ec, pmaps, plam).map_err(|e| Error::construction("horseshoe projection", e.to_string()))?;
    Ok(Horseshoe {
        resolution: Resolution {
            source: b.clone(),
            augmented: eb,
        },
        inclusion,
        projection,
    })
}

/// `(F, phi, G)` is an extension: `F` faithful, `G` essentially surjective
/// and the sequence 2-exact at `B`.
pub fn check_extension(f: &OneMor, phi: &TwoMor, g: &OneMor) -> Result<()> {
    if !f.is_faithful() {
        return Err(Error::precondition("not an extension: F is not faithful"));
    }
    if !g.is_essentially_surjective() {
        return Err(Error::precondition("not an extension: G is not essentially surjective"));
    }
    let c = check_two_exact(f, phi, g)?;
    if !c.verdict {
        return Err(Error::precondition(format!("not an extension: fails 2-exactness at B: {c}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_of_discrete_z2_over_z4() {
        let r = BaseRing::zn(4);
        let a = TwoMod::discrete(&FpModule::cyclic(&r, 2));
        let res = build_resolution(&a, 3, &FreeHull::default()).unwrap();
        assert_eq!(res.length(), 3);
        // A_1 = 0, so I_0 = 0 and the objects of A reappear as automorphisms in I_1.
        assert!(res.injectives()[0].deg1().is_zero());
        assert_eq!(res.injectives()[1].deg1().describe(), "Z/4");
        let fam = faithful_test_family(&r, 4096).unwrap();
        let rep = validate_resolution(&res, &fam).unwrap();
        assert!(rep.is_valid(), "{rep:?}");
    }

    #[test]
    fn over_the_integers_is_unsupported() {
        let a = TwoMod::discrete(&FpModule::free(&BaseRing::Integers, 1));
        assert!(matches!(build_resolution(&a, 2, &FreeHull::default()), Err(Error::Unsupported(_))));
    }
}
