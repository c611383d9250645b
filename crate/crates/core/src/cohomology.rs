//! Cohomology 2-modules `H^n = Coker(alpha_bar_{n-2}, L'_{n-1})` where
//! `L'_{n-1}: A_{n-1} → Ker(L_n, alpha_n)` is the factorization of `L_{n-1}`.
//!
//! Objects of `H^n` are pairs `(x, m)` with `x ∈ A_{n,0}`, `m ∈ A_{n+1,1}`,
//! `l_{n,0} x + d m = 0` and `l_{n+1,1} m = h_{alpha_n} x`. Morphisms are classes
//! `[y, c]` with `y ∈ A_{n-1,0}`, `c ∈ A_{n,1}`.

use crate::cochain::{CochainComplex, CochainHomotopy, ComplexMor};
use crate::error::{Error, Result};
use crate::relkc::{factor_through_kernel, relative_cokernel, relative_kernel, RelCokernelData, RelKernelData};
use crate::twomod::{OneMor, PiPair, TwoMod, TwoMor};

#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub n: isize,
    pub h: TwoMod,
    pub pis: PiPair,
    /// `Ker(L_n, alpha_n)`.
    pub kernel: RelKernelData,
    /// `L'_{n-1}: A_{n-1} → Ker(L_n, alpha_n)`.
    pub l_prime: OneMor,
    /// `alpha_bar_{n-2}: L'_{n-1} L_{n-2} ⇒ 0`.
    pub alpha_bar: TwoMor,
    pub cokernel: RelCokernelData,
}

fn check_degree(c: &CochainComplex, n: isize) -> Result<()> {
    let top = c.top_degree();
    if n < 0 || n > top {
        return Err(Error::input(format!("degree {n} outside 0..={top}")));
    }
    Ok(())
}

/// `H^n(C)`. Degrees below 2 are computed on the left-padded complex.
pub fn cohomology(c: &CochainComplex, n: isize) -> Result<CohomologyResult> {
    check_degree(c, n)?;
    let padded;
    let c = if n - 2 < c.degree_range().0 {
        padded = c.pad_left();
        &padded
    } else {
        c
    };
    let stage = |s: &'static str| move |e: Error| Error::construction(s, e.to_string());
    let kernel = relative_kernel(&c.diff(n), &c.diff(n + 1), &c.alpha(n)?).map_err(stage("relative kernel"))?;
    let (l_prime, _) =
        factor_through_kernel(&kernel, &c.diff(n - 1), &c.alpha(n - 1)?).map_err(stage("factor through kernel"))?;
    let low = c.diff(n - 2);
    let alpha_bar = TwoMor::new(
        &low.then(&l_prime),
        &OneMor::zero(low.source(), &kernel.k),
        c.alpha_h(n - 2).matrix().clone(),
    )
    .map_err(stage("alpha_bar"))?;
    let cokernel = relative_cokernel(&low, &l_prime, &alpha_bar).map_err(stage("relative cokernel"))?;
    let h = cokernel.q.clone();
    Ok(CohomologyResult {
        n,
        pis: h.pi(),
        h,
        kernel,
        l_prime,
        alpha_bar,
        cokernel,
    })
}

/// All cohomology 2-modules in degrees `0..=top`.
pub fn cohomology_all(c: &CochainComplex) -> Result<Vec<CohomologyResult>> {
    (0..=c.top_degree()).map(|n| cohomology(c, n)).collect()
}

/// `H^n(F)` between precomputed cohomologies.
///
/// Degree 0: `(x, m) ↦ (f_{n,0} x, f_{n+1,1} m - h_{lambda_n} x)`.
/// Degree 1: `[y, c] ↦ [f_{n-1,0} y, f_{n,1} c + h_{lambda_{n-1}} y]`.
pub fn induced_map_between(f: &ComplexMor, ha: &CohomologyResult, hb: &CohomologyResult) -> Result<OneMor> {
    let n = ha.n;
    if hb.n != n {
        return Err(Error::input("cohomology degrees differ"));
    }
    let xa = ha.kernel.e.f0();
    let ma = ha.kernel.eps.h();
    let k0 = hb
        .kernel
        .lift_into(
            &xa.then(f.map(n).f0()),
            &ma.then(f.map(n + 1).f1()).sub(&xa.then(&f.lambda_h(n))),
        )
        .map_err(|e| Error::construction("induced map on objects", e.to_string()))?;
    let qb = &hb.cokernel;
    let on_b = f
        .map(n - 1)
        .f0()
        .then(qb.piw.h())
        .add(&f.lambda_h(n - 1).then(qb.p.f1()));
    let on_c = f.map(n).f1().then(qb.p.f1());
    let h1 = ha
        .cokernel
        .map_out(&on_b, &on_c)
        .map_err(|e| Error::construction("induced map on morphisms", e.to_string()))?;
    OneMor::new(&ha.h, &hb.h, h1.matrix().clone(), k0.matrix().clone())
        .map_err(|e| Error::construction("induced map", e.to_string()))
}

/// `H^n(F)` for a valid complex morphism.
pub fn induced_map(f: &ComplexMor, n: isize) -> Result<OneMor> {
    f.validate().into_result("invalid complex morphism")?;
    let ha = cohomology(f.source(), n)?;
    let hb = cohomology(f.target(), n)?;
    induced_map_between(f, &ha, &hb)
}

/// The 2-morphism `H^n(F) ⇒ H^n(G)` induced by a homotopy, on precomputed
/// cohomologies: `(x, m) ↦ [H_{n-1,0} x, h_{tau_n} x + H_{n,1} m]`.
pub fn homotopy_witness_between(h: &CochainHomotopy, ha: &CohomologyResult, hb: &CohomologyResult) -> Result<TwoMor> {
    let n = ha.n;
    let from = induced_map_between(h.from(), ha, hb)?;
    let to = induced_map_between(h.to(), ha, hb)?;
    let xa = ha.kernel.e.f0();
    let ma = ha.kernel.eps.h();
    let qb = &hb.cokernel;
    let phi = xa
        .then(h.hmap(n - 1).f0())
        .then(qb.piw.h())
        .add(&xa.then(&h.tau_h(n)).add(&ma.then(h.hmap(n).f1())).then(qb.p.f1()));
    TwoMor::from_hom(&from, &to, &phi).map_err(|e| Error::construction("homotopy witness", e.to_string()))
}

/// The 2-morphism `H^n(F) ⇒ H^n(G)` for a valid homotopy `F ~ G`.
pub fn homotopy_witness(h: &CochainHomotopy, n: isize) -> Result<TwoMor> {
    h.validate().into_result("invalid homotopy")?;
    let ha = cohomology(h.from().source(), n)?;
    let hb = cohomology(h.from().target(), n)?;
    homotopy_witness_between(h, &ha, &hb)
}
