//! Additive 2-functors applied degreewise, right derived 2-functors and the
//! long 2-exact sequence of an extension.

use std::fmt;

use crate::cochain::{compose_complex_mor, CochainComplex, CochainHomotopy, ComplexMor};
use crate::cohomology::{cohomology, homotopy_witness_between, induced_map_between, CohomologyResult};
use crate::error::{Error, Result};
use crate::exactness::{check_complex_exact, check_relative_two_exact, check_two_exact, ExactnessCertificate};
use crate::intmod::{FpModule, Int, Matrix, ModuleHom};
use crate::oracle::sequence_complex;
use crate::relkc::canonical_trivialization;
use crate::resolution::{check_extension, compare_lifts, horseshoe, lift_morphism, Resolution};
use crate::twomod::{biproduct, OneMor, PiPair, TwoMod, TwoMor};

/// Additive functors on modules, lifted degreewise to 2-modules.
#[derive(Clone, Debug)]
pub enum AdditiveTwoFunctor {
    Identity,
    /// `Hom(M, -)`.
    HomFrom(FpModule),
    /// `- ⊗ Z/m`, i.e. `N ↦ N / mN`, kept over the original ring.
    BaseChange(Int),
}

impl fmt::Display for AdditiveTwoFunctor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdditiveTwoFunctor::Identity => write!(f, "Identity"),
            AdditiveTwoFunctor::HomFrom(m) => write!(f, "Hom({}, -)", m.describe()),
            AdditiveTwoFunctor::BaseChange(m) => write!(f, "- ⊗ Z/{m}"),
        }
    }
}

impl AdditiveTwoFunctor {
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// `Hom(⊕ Z/o_i, N) = ⊕ N[o_i]`, with the inclusions into `N`.
    fn hom_parts(&self, m: &FpModule, n: &FpModule) -> Vec<(FpModule, ModuleHom)> {
        let (canon, _, _) = m.simplify();
        canon
            .invariant_factors()
            .iter()
            .map(|o| ModuleHom::identity(n).scale(o).kernel())
            .collect()
    }

    pub fn on_module(&self, n: &FpModule) -> Result<FpModule> {
        Ok(match self {
            AdditiveTwoFunctor::Identity => n.clone(),
            AdditiveTwoFunctor::HomFrom(m) => {
                let parts: Vec<FpModule> = self.hom_parts(m, n).into_iter().map(|p| p.0).collect();
                FpModule::direct_sum_all(n.ring(), &parts)
            }
            AdditiveTwoFunctor::BaseChange(m) => ModuleHom::identity(n).scale(m).cokernel().0,
        })
    }

    pub fn on_hom(&self, h: &ModuleHom) -> Result<ModuleHom> {
        match self {
            AdditiveTwoFunctor::Identity => Ok(h.clone()),
            AdditiveTwoFunctor::HomFrom(m) => {
                let src = self.hom_parts(m, h.source());
                let tgt = self.hom_parts(m, h.target());
                let mut mat = Matrix::zeros(0, 0);
                for ((_, is), (_, it)) in src.iter().zip(&tgt) {
                    let block = it.lift_through_injection(&is.then(h))?;
                    mat = mat.block_diag(block.matrix());
                }
                ModuleHom::new(&self.on_module(h.source())?, &self.on_module(h.target())?, mat)
            }
            AdditiveTwoFunctor::BaseChange(m) => {
                let (_, ps) = ModuleHom::identity(h.source()).scale(m).cokernel();
                let (_, pt) = ModuleHom::identity(h.target()).scale(m).cokernel();
                ps.factor_through_surjection(&h.then(&pt))
            }
        }
    }

    pub fn on_two_mod(&self, a: &TwoMod) -> Result<TwoMod> {
        Ok(TwoMod::new(self.on_hom(a.d())?))
    }

    pub fn on_one_mor(&self, f: &OneMor) -> Result<OneMor> {
        OneMor::from_homs(
            &self.on_two_mod(f.source())?,
            &self.on_two_mod(f.target())?,
            &self.on_hom(f.f1())?,
            &self.on_hom(f.f0())?,
        )
    }

    pub fn on_two_mor(&self, t: &TwoMor) -> Result<TwoMor> {
        TwoMor::from_hom(&self.on_one_mor(t.from())?, &self.on_one_mor(t.to())?, &self.on_hom(t.h())?)
    }
}

/// `T` applied to every entry, differential and alpha.
pub fn apply(t: &AdditiveTwoFunctor, c: &CochainComplex) -> Result<CochainComplex> {
    let entries = c.entries().iter().map(|e| t.on_two_mod(e)).collect::<Result<Vec<_>>>()?;
    let diffs = c.diffs().iter().map(|d| t.on_one_mor(d)).collect::<Result<Vec<_>>>()?;
    let alphas = c.alphas().iter().map(|a| t.on_hom(a)).collect::<Result<Vec<_>>>()?;
    CochainComplex::new(entries, diffs, alphas)
}

pub fn apply_mor(t: &AdditiveTwoFunctor, f: &ComplexMor) -> Result<ComplexMor> {
    let maps = f.maps().iter().map(|m| t.on_one_mor(m)).collect::<Result<Vec<_>>>()?;
    let lambdas = f.lambdas().iter().map(|l| t.on_hom(l)).collect::<Result<Vec<_>>>()?;
    ComplexMor::unvalidated(&apply(t, f.source())?, &apply(t, f.target())?, maps, lambdas)
}

pub fn apply_homotopy(t: &AdditiveTwoFunctor, h: &CochainHomotopy) -> Result<CochainHomotopy> {
    let hmaps = h.hmaps().iter().map(|m| t.on_one_mor(m)).collect::<Result<Vec<_>>>()?;
    let taus = h.taus().iter().map(|x| t.on_hom(x)).collect::<Result<Vec<_>>>()?;
    CochainHomotopy::new(&apply_mor(t, h.from())?, &apply_mor(t, h.to())?, hmaps, taus)
}

/// The comparison `T(A × B) → T(A) × T(B)`.
pub fn product_comparison(t: &AdditiveTwoFunctor, a: &TwoMod, b: &TwoMod) -> Result<OneMor> {
    let bp = biproduct(a, b)?;
    let tbp = biproduct(&t.on_two_mod(a)?, &t.on_two_mod(b)?)?;
    Ok(tbp.pair(&t.on_one_mor(&bp.proj[0])?, &t.on_one_mor(&bp.proj[1])?))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// `H^i(T(I_0 → I_1 → ...))`.
    #[default]
    Plain,
    /// `H^{i+1}(T(A → I_0 → I_1 → ...))`.
    Augmented,
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Convention::Plain),
            "augmented" => Ok(Convention::Augmented),
            _ => Err(Error::input(format!("unknown convention {s:?} (plain, augmented)"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DerivedResult {
    pub i: usize,
    pub convention: Convention,
    pub value: CohomologyResult,
}

impl DerivedResult {
    pub fn pis(&self) -> &PiPair {
        &self.value.pis
    }
}

/// Largest `i` with `R^i T(A)` computable from a resolution of length `n`.
pub fn max_degree(length: usize) -> Option<usize> {
    length.checked_sub(2)
}

/// `R^i T(A)`.
pub fn derived_functor(t: &AdditiveTwoFunctor, res: &Resolution, i: usize, convention: Convention) -> Result<DerivedResult> {
    if max_degree(res.length()).is_none_or(|m| i > m) {
        return Err(Error::input(format!("degree {i} needs a resolution of length at least {}", i + 2)));
    }
    let value = match convention {
        Convention::Plain => cohomology(&apply(t, &res.complex())?, i as isize)?,
        Convention::Augmented => cohomology(&apply(t, &res.augmented)?, i as isize + 1)?,
    };
    Ok(DerivedResult { i, convention, value })
}

/// Maps between `H^i(T(I))` and `H^i(T(J))` for two resolutions of the same
/// `A`, with 2-morphisms from both composites to the identities.
#[derive(Clone, Debug)]
pub struct IndependenceWitness {
    pub i: usize,
    pub forward: OneMor,
    pub backward: OneMor,
    pub unit: TwoMor,
    pub counit: TwoMor,
}

impl IndependenceWitness {
    pub fn is_valid(&self) -> bool {
        self.forward.is_equivalence()
            && self.backward.is_equivalence()
            && self.unit.is_valid()
            && self.counit.is_valid()
    }
}

fn round_trip(t: &AdditiveTwoFunctor, there: &ComplexMor, back: &ComplexMor, i: usize) -> Result<(OneMor, TwoMor)> {
    let gf = compose_complex_mor(there, back)?;
    let id = ComplexMor::identity(there.source());
    let h = compare_lifts(&gf, &id)?;
    let th = apply_homotopy(t, &h.tail()?)?;
    let c = cohomology(th.from().source(), i as isize)?;
    let w = homotopy_witness_between(&th, &c, &c)?;
    Ok((w.from().clone(), w))
}

pub fn resolution_independence(t: &AdditiveTwoFunctor, r1: &Resolution, r2: &Resolution, i: usize) -> Result<IndependenceWitness> {
    if !r1.source.same_as(&r2.source) {
        return Err(Error::input("resolutions of different 2-modules"));
    }
    let n = r1.length().min(r2.length());
    if max_degree(n).is_none_or(|m| i > m) {
        return Err(Error::input(format!("degree {i} needs resolutions of length at least {}", i + 2)));
    }
    let id = OneMor::identity(&r1.source);
    let f = lift_morphism(&id, r1, r2)?;
    let g = lift_morphism(&id, r2, r1)?;
    let tf = apply_mor(t, &f.tail()?)?;
    let tg = apply_mor(t, &g.tail()?)?;
    let c1 = cohomology(tf.source(), i as isize)?;
    let c2 = cohomology(tf.target(), i as isize)?;
    let forward = induced_map_between(&tf, &c1, &c2)?;
    let backward = induced_map_between(&tg, &c2, &c1)?;
    let (_, unit) = round_trip(t, &f, &g, i)?;
    let (_, counit) = round_trip(t, &g, &f, i)?;
    // the composite of induced maps is the map induced by the composite
    let unit = TwoMor::from_hom(&forward.then(&backward), unit.to(), unit.h())?;
    let counit = TwoMor::from_hom(&backward.then(&forward), counit.to(), counit.h())?;
    if !unit.to().same_map(&OneMor::identity(&c1.h)) || !counit.to().same_map(&OneMor::identity(&c2.h)) {
        return Err(Error::internal("identity lift does not induce the identity"));
    }
    Ok(IndependenceWitness {
        i,
        forward,
        backward,
        unit,
        counit,
    })
}

/// Relative 2-exactness of one test sequence before and after `T`.
#[derive(Clone, Debug)]
pub struct LeftExactnessCase {
    /// At `A` and `B` of `T(A) → T(B) → T(C)`.
    pub image: Vec<ExactnessCertificate>,
}

impl LeftExactnessCase {
    pub fn passes(&self) -> bool {
        self.image.iter().all(|c| c.verdict)
    }
}

/// Each sequence `0 → A →F B →G C → 0` must be relative 2-exact at all three
/// points; `T` passes if every image is relative 2-exact at its first two.
pub fn check_left_relative_exact(t: &AdditiveTwoFunctor, sequences: &[(OneMor, TwoMor, OneMor)]) -> Result<Vec<LeftExactnessCase>> {
    let mut out = Vec::new();
    for (k, (f, phi, g)) in sequences.iter().enumerate() {
        let c = sequence_complex(f, g, phi)?;
        for n in 0..3 {
            let cert = check_complex_exact(&c, n)?;
            if !cert.verdict {
                return Err(Error::input(format!("test sequence {k} is not relative 2-exact at point {n}: {cert}")));
            }
        }
        let tc = apply(t, &c)?;
        let image = (0..2).map(|n| check_complex_exact(&tc, n)).collect::<Result<Vec<_>>>()?;
        out.push(LeftExactnessCase { image });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SequenceTerm {
    pub label: String,
    pub degree: usize,
    pub value: TwoMod,
}

/// `R^0T(A) → R^0T(B) → R^0T(C) → R^1T(A) → ...`, ending at `R^{depth+1}T(A)`.
#[derive(Clone, Debug)]
pub struct LongSequence {
    pub terms: Vec<SequenceTerm>,
    /// `maps[k]: terms[k] → terms[k + 1]`.
    pub maps: Vec<OneMor>,
    /// `trivializations[k]: maps[k + 1] ∘ maps[k] ⇒ 0`.
    pub trivializations: Vec<TwoMor>,
    /// Relative 2-exactness at `R^0 T(A)`, 2-exactness at every later term up
    /// to `R^depth T(C)`.
    pub certificates: Vec<ExactnessCertificate>,
    /// `T(I_n × J_n) → T(I_n) × T(J_n)` is an equivalence for every `n`.
    pub products_preserved: bool,
}

impl LongSequence {
    pub fn is_exact(&self) -> bool {
        self.certificates.iter().all(|c| c.verdict)
    }
}

struct Splitting {
    /// `s_n: T(J_n) → T(K_n)` and `r_n: T(K_n) → T(I_n)`.
    s: Vec<OneMor>,
    r: Vec<OneMor>,
}

/// The long sequence of `R^i T` for an extension, up to `depth`.
#[allow(clippy::too_many_arguments)]
pub fn long_sequence(
    t: &AdditiveTwoFunctor,
    f: &OneMor,
    phi: &TwoMor,
    g: &OneMor,
    ra: &Resolution,
    rc: &Resolution,
    depth: usize,
) -> Result<LongSequence> {
    let stage = |s: &'static str| move |e: Error| Error::construction(s, e.to_string());
    check_extension(f, phi, g)?;
    let n = ra.length().min(rc.length());
    if n < depth + 3 {
        return Err(Error::input(format!("depth {depth} needs resolutions of length at least {}", depth + 3)));
    }
    let hs = horseshoe(f, phi, g, ra, rc).map_err(stage("horseshoe"))?;
    let inc = hs.inclusion.tail()?;
    let proj = hs.projection.tail()?;
    let ti = apply(t, inc.source()).map_err(stage("T(I)"))?;
    let tk = apply(t, inc.target()).map_err(stage("T(K)"))?;
    let tj = apply(t, proj.target()).map_err(stage("T(J)"))?;
    let tinc = apply_mor(t, &inc)?;
    let tproj = apply_mor(t, &proj)?;

    let mut products_preserved = true;
    let mut split = Splitting { s: Vec::new(), r: Vec::new() };
    for k in 0..inc.source().len() {
        let (i_k, j_k) = (&inc.source().entries()[k], &proj.target().entries()[k]);
        products_preserved &= product_comparison(t, i_k, j_k)?.is_equivalence();
        let bp = biproduct(i_k, j_k)?;
        split.s.push(t.on_one_mor(&bp.inj[1])?);
        split.r.push(t.on_one_mor(&bp.proj[0])?);
    }

    let top = depth as isize + 1;
    let coh = |c: &CochainComplex, what: &'static str| -> Result<Vec<CohomologyResult>> {
        (0..=top).map(|i| cohomology(c, i).map_err(stage(what))).collect()
    };
    let hi = coh(&ti, "R T(A)")?;
    let hk = coh(&tk, "R T(B)")?;
    let hj = coh(&tj, "R T(C)")?;

    let mut terms = Vec::new();
    let mut maps = Vec::new();
    let mut trivs = Vec::new();
    for i in 0..=depth {
        let iu = i as isize;
        let a_to_b = induced_map_between(&tinc, &hi[i], &hk[i]).map_err(stage("induced map on A"))?;
        let b_to_c = induced_map_between(&tproj, &hk[i], &hj[i]).map_err(stage("induced map on C"))?;
        let delta = connecting_map(&tk, &split, &hj[i], &hi[i + 1], iu).map_err(stage("connecting map"))?;
        for (x, h) in [("A", &hi[i]), ("B", &hk[i]), ("C", &hj[i])] {
            terms.push(SequenceTerm {
                label: format!("R^{i} T({x})"),
                degree: i,
                value: h.h.clone(),
            });
        }
        trivs.push(canonical_trivialization(&a_to_b, &b_to_c).map_err(stage("trivialization at B"))?);
        trivs.push(delta_after_projection(&b_to_c, &delta, &split, &hk[i], &hi[i + 1], iu).map_err(stage("trivialization at C"))?);
        let next_inc = induced_map_between(&tinc, &hi[i + 1], &hk[i + 1]).map_err(stage("induced map on A"))?;
        trivs.push(inclusion_after_delta(&delta, &next_inc, &split, &hj[i], &hk[i + 1], iu).map_err(stage("trivialization at A"))?);
        maps.extend([a_to_b, b_to_c, delta]);
    }
    terms.push(SequenceTerm {
        label: format!("R^{} T(A)", depth + 1),
        degree: depth + 1,
        value: hi[depth + 1].h.clone(),
    });
    // the last trivialization belongs to the map out of R^{depth+1} T(A)
    trivs.pop();

    let zero = TwoMod::zero(f.ring());
    let mut certificates = Vec::new();
    let into_first = OneMor::zero(&zero, &terms[0].value);
    // nothing maps into the first term, so only relative exactness is asked there
    let from_zero = OneMor::identity(&zero);
    certificates.push(
        check_relative_two_exact(
            &from_zero,
            &canonical_trivialization(&from_zero, &into_first)?,
            &into_first,
            &canonical_trivialization(&into_first, &maps[0])?,
            &maps[0],
            &trivs[0],
            &maps[1],
        )?
        .at(0),
    );
    for k in 1..terms.len() - 1 {
        certificates.push(check_two_exact(&maps[k - 1], &trivs[k - 1], &maps[k])?.at(k));
    }
    Ok(LongSequence {
        terms,
        maps,
        trivializations: trivs,
        certificates,
        products_preserved,
    })
}

fn sigma(tk: &CochainComplex, sp: &Splitting, n: isize) -> OneMor {
    let src = |k: isize| usize::try_from(k).ok().filter(|&k| k < sp.s.len());
    match (src(n), src(n + 1)) {
        (Some(a), Some(b)) => sp.s[a].then(&tk.diff(n)).then(&sp.r[b]),
        _ => {
            let (j, i) = (
                src(n).map(|a| sp.s[a].source().clone()),
                src(n + 1).map(|b| sp.r[b].target().clone()),
            );
            let ring = tk.ring();
            OneMor::zero(&j.unwrap_or_else(|| TwoMod::zero(ring)), &i.unwrap_or_else(|| TwoMod::zero(ring)))
        }
    }
}

fn tau(tk: &CochainComplex, sp: &Splitting, n: isize) -> Option<ModuleHom> {
    let a = usize::try_from(n).ok().filter(|&k| k < sp.s.len())?;
    let b = usize::try_from(n + 2).ok().filter(|&k| k < sp.r.len())?;
    Some(sp.s[a].f0().then(&tk.alpha_h(n)).then(sp.r[b].f1()))
}

/// `δ(x, m) = (σ_{i,0} x, τ_i x - σ_{i+1,1} m)`, `δ[y, c] = [-σ_{i-1,0} y, σ_{i,1} c + τ_{i-1} y]`.
fn connecting_map(tk: &CochainComplex, sp: &Splitting, hj: &CohomologyResult, hi: &CohomologyResult, i: isize) -> Result<OneMor> {
    let xa = hj.kernel.e.f0();
    let ma = hj.kernel.eps.h();
    let s_i = sigma(tk, sp, i);
    let s_next = sigma(tk, sp, i + 1);
    let tau_i = tau(tk, sp, i).ok_or_else(|| Error::input("connecting map beyond the resolution"))?;
    let k0 = hi
        .kernel
        .lift_into(&xa.then(s_i.f0()), &xa.then(&tau_i).sub(&ma.then(s_next.f1())))?;
    let q = &hi.cokernel;
    let s_prev = sigma(tk, sp, i - 1);
    let mut on_b = s_prev.f0().neg().then(q.piw.h());
    if let Some(t) = tau(tk, sp, i - 1) {
        on_b = on_b.add(&t.then(q.p.f1()));
    }
    let on_c = s_i.f1().then(q.p.f1());
    let h1 = hj.cokernel.map_out(&on_b, &on_c)?;
    OneMor::new(&hj.h, &hi.h, h1.matrix().clone(), k0.matrix().clone())
}

/// `δ ∘ H(π) ⇒ 0` with `(x, m) ↦ [-r_{i,0} x, r_{i+1,1} m]`.
fn delta_after_projection(
    b_to_c: &OneMor,
    delta: &OneMor,
    sp: &Splitting,
    hk: &CohomologyResult,
    hi_next: &CohomologyResult,
    i: isize,
) -> Result<TwoMor> {
    let iu = i as usize;
    let xa = hk.kernel.e.f0();
    let ma = hk.kernel.eps.h();
    let q = &hi_next.cokernel;
    let h = xa
        .then(sp.r[iu].f0())
        .neg()
        .then(q.piw.h())
        .add(&ma.then(sp.r[iu + 1].f1()).then(q.p.f1()));
    let comp = b_to_c.then(delta);
    TwoMor::from_hom(&comp, &OneMor::zero(comp.source(), comp.target()), &h)
}

/// `H(ι) ∘ δ ⇒ 0` with `(x, m) ↦ [s_{i,0} x, -s_{i+1,1} m]`.
fn inclusion_after_delta(
    delta: &OneMor,
    next_inc: &OneMor,
    sp: &Splitting,
    hj: &CohomologyResult,
    hk_next: &CohomologyResult,
    i: isize,
) -> Result<TwoMor> {
    let iu = i as usize;
    let xa = hj.kernel.e.f0();
    let ma = hj.kernel.eps.h();
    let q = &hk_next.cokernel;
    let h = xa
        .then(sp.s[iu].f0())
        .then(q.piw.h())
        .sub(&ma.then(sp.s[iu + 1].f1()).then(q.p.f1()));
    let comp = delta.then(next_inc);
    TwoMor::from_hom(&comp, &OneMor::zero(comp.source(), comp.target()), &h)
}
