//! Relative kernels and relative cokernels of `A --F--> B --G--> C` with a
//! trivialization `phi: G F ⇒ 0` (homotopy `h_phi: A0 → C1`).
//!
//! Kernel: objects are pairs `(x, m)` with `x ∈ A0` and `m: F(x) → 0`
//! (so `f0 x + d m = 0`) such that `G(m) = phi_x`, i.e. `g1 m = h_phi x`.
//! A morphism `(x, m) → (x', m')` is `a: x → x'` with `m = m' + f1 a`.
//!
//! Cokernel: objects of `C`; a morphism `y → y'` is a class `[b, c]` with
//! `y' = y + d c - g0 b`, modulo the classes of
//! `(f0 x + d m, g1 m - h_phi x)` for `x ∈ A0`, `m ∈ B1`.

use crate::error::{Error, Result};
use crate::intmod::{sum_injection, sum_projection, FpModule, Int, Matrix, ModuleHom};
use crate::twomod::{OneMor, TwoMod, TwoMor};

fn check_sequence(f: &OneMor, g: &OneMor, phi: &TwoMor) -> Result<()> {
    if !f.target().same_as(g.source()) {
        return Err(Error::input("F and G are not composable"));
    }
    let gf = f.then(g);
    if !phi.from().same_map(&gf) || !phi.to().is_parallel(&gf) || !phi.to().is_zero() {
        return Err(Error::input("phi is not a 2-morphism G F ⇒ 0"));
    }
    phi.check().map_err(|e| Error::input(format!("invalid phi: {e}")))
}

#[derive(Clone, Debug)]
pub struct RelKernelData {
    pub k: TwoMod,
    pub e: OneMor,
    pub eps: TwoMor,
    pub f: OneMor,
    pub g: OneMor,
    pub phi: TwoMor,
    /// `K0 → A0 ⊕ B1`, injective.
    incl: ModuleHom,
    parts: [FpModule; 2],
}

/// `Ker(F, phi)` with its faithful functor `e` and `eps: F e ⇒ 0`.
pub fn relative_kernel(f: &OneMor, g: &OneMor, phi: &TwoMor) -> Result<RelKernelData> {
    check_sequence(f, g, phi)?;
    let a = f.source();
    let b = f.target();
    let c = g.target();
    let parts = [a.deg0().clone(), b.deg1().clone()];
    let dom = parts[0].direct_sum(&parts[1]);
    let cod = b.deg0().direct_sum(c.deg1());
    // (x, m) ↦ (f0 x + d m, g1 m - h_phi x)
    let top = f.f0().matrix().hstack(b.d().matrix());
    let bottom = phi.h().matrix().neg().hstack(g.f1().matrix());
    let constraint = ModuleHom::new(&dom, &cod, top.vstack(&bottom))?;
    let (_, incl) = constraint.kernel();
    let e0 = incl.then(&sum_projection(&parts, &dom, 0));
    let eps_h = incl.then(&sum_projection(&parts, &dom, 1));

    // d_K(a) = (d a, -f1 a)
    let dk_big = ModuleHom::new(
        a.deg1(),
        &dom,
        a.d().matrix().vstack(&f.f1().matrix().neg()),
    )?;
    let dk = incl
        .lift_through_injection(&dk_big)
        .map_err(|e| Error::internal(format!("relative kernel differential: {e}")))?;
    let k = TwoMod::new(dk);
    let e = OneMor::from_parts(&k, a, Matrix::identity(a.deg1().generators()), e0.matrix().clone());
    let fe = e.then(f);
    let zero = OneMor::zero(&k, b);
    let eps = TwoMor::from_parts(&fe, &zero, eps_h.matrix().clone());
    Ok(RelKernelData {
        k,
        e,
        eps,
        f: f.clone(),
        g: g.clone(),
        phi: phi.clone(),
        incl,
        parts,
    })
}

impl RelKernelData {
    /// The element `(x, m)` of `K0` as a vector on the generators of `K0`.
    pub fn element(&self, x: &[Int], m: &[Int]) -> Option<Vec<Int>> {
        let mut v = x.to_vec();
        v.extend_from_slice(m);
        self.incl.preimage(&v)
    }

    /// `(x, m)` components of an element of `K0`.
    pub fn components(&self, k: &[Int]) -> (Vec<Int>, Vec<Int>) {
        let v = self.incl.apply(k);
        let n = self.parts[0].generators();
        (v[..n].to_vec(), v[n..].to_vec())
    }

    /// Map `X → K0` from components `X → A0` and `X → B1`.
    pub fn lift_into(&self, x_part: &ModuleHom, m_part: &ModuleHom) -> Result<ModuleHom> {
        let dom = self.incl.target();
        let big = ModuleHom::new(
            x_part.source(),
            dom,
            x_part.matrix().vstack(m_part.matrix()),
        )?;
        self.incl.lift_through_injection(&big).map_err(|_| {
            Error::precondition("components do not land in the relative kernel (f0 x + d m = 0, g1 m = h_phi x)")
        })
    }

    /// Inclusion of `K0` into `A0 ⊕ B1`.
    pub fn inclusion(&self) -> &ModuleHom {
        &self.incl
    }
}

/// Factor `T: D → A` with `t: F T ⇒ 0` through `Ker(F, phi)`.
///
/// Requires `G t = phi T`, i.e. `g1 h_t = h_phi t0`. Returns `T'` with
/// `T'0 x = (t0 x, h_t x)`, `T'1 = t1`, and the identity `e T' ⇒ T`.
pub fn factor_through_kernel(data: &RelKernelData, t: &OneMor, tt: &TwoMor) -> Result<(OneMor, TwoMor)> {
    let a = data.f.source();
    if !t.target().same_as(a) {
        return Err(Error::input("T does not land in the source of F"));
    }
    let ft = t.then(&data.f);
    if !tt.from().same_map(&ft) || !tt.to().is_zero() {
        return Err(Error::input("t is not a 2-morphism F T ⇒ 0"));
    }
    tt.check().map_err(|e| Error::input(format!("invalid t: {e}")))?;
    let lhs = tt.h().then(data.g.f1());
    let rhs = t.f0().then(data.phi.h());
    if !lhs.same_map(&rhs) {
        return Err(Error::precondition("compatibility G t = phi T fails: g1 h_t != h_phi t0"));
    }
    let t0 = data.lift_into(t.f0(), tt.h())?;
    let tp = OneMor::from_parts(t.source(), &data.k, t.f1().matrix().clone(), t0.matrix().clone());
    let et = tp.then(&data.e);
    let iso = TwoMor::from_parts(&et, t, Matrix::zeros(a.deg1().generators(), t.source().deg0().generators()));
    Ok((tp, iso))
}

#[derive(Clone, Debug)]
pub struct RelCokernelData {
    pub q: TwoMod,
    pub p: OneMor,
    pub piw: TwoMor,
    pub f: OneMor,
    pub g: OneMor,
    pub phi: TwoMor,
    /// `B0 ⊕ C1 → Q1`, the class map.
    class_map: ModuleHom,
    /// A section of the class map, into `B0 ⊕ C1` modulo the relations.
    section: ModuleHom,
    parts: [FpModule; 2],
}

/// `Coker(phi, G)` with the essentially surjective `p` and `piw: p G ⇒ 0`.
pub fn relative_cokernel(f: &OneMor, g: &OneMor, phi: &TwoMor) -> Result<RelCokernelData> {
    check_sequence(f, g, phi)?;
    let b = f.target();
    let c = g.target();
    let ring = f.ring();
    let parts = [b.deg0().clone(), c.deg1().clone()];
    let sum = parts[0].direct_sum(&parts[1]);
    // W = image of (x, m) ↦ (f0 x + d m, g1 m - h_phi x)
    let top = f.f0().matrix().hstack(b.d().matrix());
    let bottom = phi.h().matrix().neg().hstack(g.f1().matrix());
    let w = top.vstack(&bottom);
    let pres = FpModule::new(ring, sum.generators(), sum.relations().hstack(&w))?;
    let (q1, to, from) = pres.simplify();
    let class_map = ModuleHom::new(&sum, &q1, to.matrix().clone())?;
    let section = ModuleHom::new(&q1, &pres, from.matrix().clone())?;
    // d_Q [b, c] = d c - g0 b
    let dq_big = ModuleHom::new(&pres, c.deg0(), g.f0().matrix().neg().hstack(c.d().matrix()))
        .map_err(|e| Error::internal(format!("relative cokernel differential: {e}")))?;
    let dq = section.then(&dq_big);
    let q = TwoMod::new(dq);
    let p1 = sum_injection(&parts, &sum, 1).then(&class_map);
    let p = OneMor::from_parts(c, &q, p1.matrix().clone(), Matrix::identity(c.deg0().generators()));
    let pg = g.then(&p);
    let zero = OneMor::zero(b, &q);
    let h = sum_injection(&parts, &sum, 0).then(&class_map);
    let piw = TwoMor::from_parts(&pg, &zero, h.matrix().clone());
    Ok(RelCokernelData {
        q,
        p,
        piw,
        f: f.clone(),
        g: g.clone(),
        phi: phi.clone(),
        class_map,
        section,
        parts,
    })
}

impl RelCokernelData {
    /// The class `[b, c]` in `Q1`.
    pub fn class(&self, b: &[Int], c: &[Int]) -> Vec<Int> {
        let mut v = b.to_vec();
        v.extend_from_slice(c);
        self.class_map.apply(&v)
    }

    /// A representative `(b, c)` of a class in `Q1`.
    pub fn representative(&self, q: &[Int]) -> (Vec<Int>, Vec<Int>) {
        let v = self.section.apply(q);
        let n = self.parts[0].generators();
        (v[..n].to_vec(), v[n..].to_vec())
    }

    /// `B0 ⊕ C1 → Q1`.
    pub fn class_map(&self) -> &ModuleHom {
        &self.class_map
    }

    /// `Q1 → (B0 ⊕ C1) / W`, inverse to the class map on the quotient.
    pub fn section(&self) -> &ModuleHom {
        &self.section
    }

    /// Map `Q1 → X` from its values on the two summands: `[b, c] ↦ on_b(b) + on_c(c)`.
    pub fn map_out(&self, on_b: &ModuleHom, on_c: &ModuleHom) -> Result<ModuleHom> {
        let big = on_b.copair(on_c);
        let big = ModuleHom::new(self.section.target(), big.target(), big.matrix().clone()).map_err(|_| {
            Error::precondition("map does not vanish on the relative cokernel relations (f0 x + d m, g1 m - h_phi x)")
        })?;
        Ok(self.section.then(&big))
    }
}

/// Factor `H: C → D` with `psi: H G ⇒ 0` through `Coker(phi, G)`.
///
/// Requires `psi F = H phi`, i.e. `h_psi f0 = h1 h_phi`. Returns `H'` with
/// `H'0 = h0`, `H'1 [b, c] = h1 c + h_psi b`, and the identity `H' p ⇒ H`.
pub fn factor_through_cokernel(data: &RelCokernelData, h: &OneMor, psi: &TwoMor) -> Result<(OneMor, TwoMor)> {
    let c = data.g.target();
    if !h.source().same_as(c) {
        return Err(Error::input("H does not start at the target of G"));
    }
    let hg = data.g.then(h);
    if !psi.from().same_map(&hg) || !psi.to().is_zero() {
        return Err(Error::input("psi is not a 2-morphism H G ⇒ 0"));
    }
    psi.check().map_err(|e| Error::input(format!("invalid psi: {e}")))?;
    let lhs = data.f.f0().then(psi.h());
    let rhs = data.phi.h().then(h.f1());
    if !lhs.same_map(&rhs) {
        return Err(Error::precondition("compatibility psi F = H phi fails: h_psi f0 != h1 h_phi"));
    }
    let h1p = data.map_out(psi.h(), h.f1())?;
    let hp = OneMor::from_parts(&data.q, h.target(), h1p.matrix().clone(), h.f0().matrix().clone());
    let hpp = data.p.then(&hp);
    let iso = TwoMor::from_parts(&hpp, h, Matrix::zeros(h.target().deg1().generators(), c.deg0().generators()));
    Ok((hp, iso))
}

/// The canonical `can: G ∘ F ⇒ 0` when the composite is literally zero.
pub fn canonical_trivialization(f: &OneMor, g: &OneMor) -> Result<TwoMor> {
    let gf = f.then(g);
    if !gf.is_zero() {
        return Err(Error::precondition("composite is not zero; no canonical trivialization"));
    }
    let zero = OneMor::zero(f.source(), g.target());
    TwoMor::new(
        &gf,
        &zero,
        Matrix::zeros(g.target().deg1().generators(), f.source().deg0().generators()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmod::BaseRing;

    #[test]
    fn kernel_of_identity_is_trivial() {
        let r = BaseRing::zn(4);
        let m = FpModule::free(&r, 1);
        let a = TwoMod::new(ModuleHom::new(&m, &m, Matrix::from_i64(1, 1, &[2])).unwrap());
        let id = OneMor::identity(&a);
        let z = TwoMod::zero(&r);
        let g = OneMor::zero(&a, &z);
        let phi = canonical_trivialization(&id, &g).unwrap();
        let k = relative_kernel(&id, &g, &phi).unwrap();
        assert!(k.k.pi().is_zero());
        assert!(k.e.is_faithful());
        let q = relative_cokernel(&id, &g, &phi).unwrap();
        assert!(q.q.pi().is_zero());
        assert!(q.p.is_essentially_surjective());
    }

    #[test]
    fn kernel_picks_up_pi1_of_target() {
        let r = BaseRing::zn(2);
        let z2 = FpModule::free(&r, 1);
        let b = TwoMod::one_object(&z2);
        let z = TwoMod::zero(&r);
        let f = OneMor::zero(&z, &b);
        let g = OneMor::zero(&b, &z);
        let phi = canonical_trivialization(&f, &g).unwrap();
        let k = relative_kernel(&f, &g, &phi).unwrap();
        assert_eq!(k.k.pi().pi0.describe(), "Z/2");
        assert!(k.k.pi().pi1.is_zero());
    }

    #[test]
    fn cokernel_shifts_pi0_into_morphisms() {
        let r = BaseRing::zn(2);
        let z2 = FpModule::free(&r, 1);
        let a = TwoMod::discrete(&z2);
        let z = TwoMod::zero(&r);
        let f = OneMor::zero(&z, &a);
        let g = OneMor::zero(&a, &z);
        let phi = canonical_trivialization(&f, &g).unwrap();
        let q = relative_cokernel(&f, &g, &phi).unwrap();
        assert_eq!(q.q.pi().pi1.describe(), "Z/2");
        assert!(q.q.pi().pi0.is_zero());
    }
}
