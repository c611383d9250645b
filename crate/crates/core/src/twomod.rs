//! Two-term complexes `d: A1 → A0` as 2-modules, with chain maps as
//! 1-morphisms and homotopies as 2-morphisms.
//!
//! Conventions: a morphism `x → y` between objects of `A0` is an `a ∈ A1` with
//! `y = x + d(a)`; a 2-morphism `F ⇒ G` is `h: A0 → B1` with
//! `d_B h = g0 - f0` and `h d_A = g1 - f1`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::intmod::{sum_injection, sum_projection, BaseRing, FpModule, Matrix, ModuleHom};

struct TwoModInner {
    ring: BaseRing,
    d: ModuleHom,
    kernel: OnceLock<(FpModule, ModuleHom)>,
    cokernel: OnceLock<(FpModule, ModuleHom)>,
}

/// A 2-module in the strict chain model.
#[derive(Clone)]
pub struct TwoMod(Arc<TwoModInner>);

/// The homotopy invariants: `pi1 = ker d`, `pi0 = coker d`, canonical forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPair {
    pub pi1: FpModule,
    pub pi0: FpModule,
}

impl PiPair {
    pub fn is_zero(&self) -> bool {
        self.pi0.is_zero() && self.pi1.is_zero()
    }
}

impl fmt::Display for PiPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi0 = {}, pi1 = {}", self.pi0, self.pi1)
    }
}

impl TwoMod {
    pub fn new(d: ModuleHom) -> Self {
        TwoMod(Arc::new(TwoModInner {
            ring: d.ring().clone(),
            d,
            kernel: OnceLock::new(),
            cokernel: OnceLock::new(),
        }))
    }

    pub fn from_matrix(deg1: &FpModule, deg0: &FpModule, d: Matrix) -> Result<Self> {
        Ok(Self::new(ModuleHom::new(deg1, deg0, d)?))
    }

    pub fn zero(ring: &BaseRing) -> Self {
        let z = FpModule::zero(ring);
        Self::new(ModuleHom::zero(&z, &z))
    }

    /// `0 → m`: objects are the elements of `m`, only identity morphisms.
    pub fn discrete(m: &FpModule) -> Self {
        Self::new(ModuleHom::zero(&FpModule::zero(m.ring()), m))
    }

    /// `m → 0`: one object whose automorphisms are `m`.
    pub fn one_object(m: &FpModule) -> Self {
        Self::new(ModuleHom::zero(m, &FpModule::zero(m.ring())))
    }

    pub fn ring(&self) -> &BaseRing {
        &self.0.ring
    }

    pub fn deg1(&self) -> &FpModule {
        self.0.d.source()
    }

    pub fn deg0(&self) -> &FpModule {
        self.0.d.target()
    }

    pub fn d(&self) -> &ModuleHom {
        &self.0.d
    }

    pub fn same_as(&self, other: &TwoMod) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.deg1().same_presentation(other.deg1())
                && self.deg0().same_presentation(other.deg0())
                && self.d().matrix() == other.d().matrix())
    }

    pub fn is_discrete(&self) -> bool {
        self.deg1().is_zero()
    }

    /// `ker d` with its inclusion into `A1`.
    pub fn pi1_data(&self) -> &(FpModule, ModuleHom) {
        self.0.kernel.get_or_init(|| self.0.d.kernel())
    }

    /// `coker d` with the projection from `A0`.
    pub fn pi0_data(&self) -> &(FpModule, ModuleHom) {
        self.0.cokernel.get_or_init(|| self.0.d.cokernel())
    }

    pub fn pi(&self) -> PiPair {
        PiPair {
            pi1: self.pi1_data().0.clone(),
            pi0: self.pi0_data().0.clone(),
        }
    }

    /// Is the object `x ∈ A0` isomorphic to the unit (zero) object?
    pub fn is_trivial_object(&self, x: &[crate::intmod::Int]) -> bool {
        self.pi0_data().0.is_zero_element(&self.pi0_data().1.apply(x))
    }
}

impl fmt::Debug for TwoMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoMod({:?} -> {:?}, d = {})", self.deg1(), self.deg0(), self.d().matrix())
    }
}

impl fmt::Display for TwoMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} -> {})", self.deg1(), self.deg0())
    }
}

/// `pi(A)` as a free function.
pub fn pi(a: &TwoMod) -> PiPair {
    a.pi()
}

/// A chain map `(f1, f0): A → B`.
#[derive(Clone)]
pub struct OneMor {
    source: TwoMod,
    target: TwoMod,
    f1: ModuleHom,
    f0: ModuleHom,
}

impl OneMor {
    /// Checked constructor: shapes, well-definedness and `f0 d_A = d_B f1`.
    pub fn new(source: &TwoMod, target: &TwoMod, f1: Matrix, f0: Matrix) -> Result<Self> {
        let f1 = ModuleHom::new(source.deg1(), target.deg1(), f1).map_err(|e| e.context("f1"))?;
        let f0 = ModuleHom::new(source.deg0(), target.deg0(), f0).map_err(|e| e.context("f0"))?;
        let m = OneMor {
            source: source.clone(),
            target: target.clone(),
            f1,
            f0,
        };
        if !m.chain_condition_holds() {
            return Err(Error::input("chain condition f0 d_A = d_B f1 fails"));
        }
        Ok(m)
    }

    pub fn from_homs(source: &TwoMod, target: &TwoMod, f1: &ModuleHom, f0: &ModuleHom) -> Result<Self> {
        Self::new(source, target, f1.matrix().clone(), f0.matrix().clone())
    }

    /// Constructor for maps known to satisfy all invariants.
    pub(crate) fn from_parts(source: &TwoMod, target: &TwoMod, f1: Matrix, f0: Matrix) -> Self {
        let m = OneMor {
            source: source.clone(),
            target: target.clone(),
            f1: ModuleHom::from_parts(source.deg1().clone(), target.deg1().clone(), f1),
            f0: ModuleHom::from_parts(source.deg0().clone(), target.deg0().clone(), f0),
        };
        debug_assert!(m.f1.is_well_defined() && m.f0.is_well_defined() && m.chain_condition_holds());
        m
    }

    pub fn identity(a: &TwoMod) -> Self {
        Self::from_parts(
            a,
            a,
            Matrix::identity(a.deg1().generators()),
            Matrix::identity(a.deg0().generators()),
        )
    }

    pub fn zero(source: &TwoMod, target: &TwoMod) -> Self {
        Self::from_parts(
            source,
            target,
            Matrix::zeros(target.deg1().generators(), source.deg1().generators()),
            Matrix::zeros(target.deg0().generators(), source.deg0().generators()),
        )
    }

    pub fn source(&self) -> &TwoMod {
        &self.source
    }

    pub fn target(&self) -> &TwoMod {
        &self.target
    }

    pub fn f1(&self) -> &ModuleHom {
        &self.f1
    }

    pub fn f0(&self) -> &ModuleHom {
        &self.f0
    }

    pub fn ring(&self) -> &BaseRing {
        self.source.ring()
    }

    pub fn chain_condition_holds(&self) -> bool {
        self.source.d().then(&self.f0).same_map(&self.f1.then(self.target.d()))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &OneMor) -> OneMor {
        assert!(self.target.same_as(&other.source), "composition of non-composable 1-morphisms");
        OneMor {
            source: self.source.clone(),
            target: other.target.clone(),
            f1: self.f1.then(&other.f1),
            f0: self.f0.then(&other.f0),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OneMor) -> OneMor {
        other.then(self)
    }

    /// Checked composition `g ∘ f`.
    pub fn try_compose(f: &OneMor, g: &OneMor) -> Result<OneMor> {
        if !f.target.same_as(&g.source) {
            return Err(Error::input("1-morphisms are not composable"));
        }
        Ok(f.then(g))
    }

    pub fn is_parallel(&self, other: &OneMor) -> bool {
        self.source.same_as(&other.source) && self.target.same_as(&other.target)
    }

    pub fn add(&self, other: &OneMor) -> OneMor {
        assert!(self.is_parallel(other), "sum of non-parallel 1-morphisms");
        OneMor {
            source: self.source.clone(),
            target: self.target.clone(),
            f1: self.f1.add(&other.f1),
            f0: self.f0.add(&other.f0),
        }
    }

    pub fn neg(&self) -> OneMor {
        OneMor {
            source: self.source.clone(),
            target: self.target.clone(),
            f1: self.f1.neg(),
            f0: self.f0.neg(),
        }
    }

    pub fn sub(&self, other: &OneMor) -> OneMor {
        self.add(&other.neg())
    }

    /// Equality of chain maps.
    pub fn same_map(&self, other: &OneMor) -> bool {
        self.is_parallel(other) && self.f1.same_map(&other.f1) && self.f0.same_map(&other.f0)
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.f0.is_zero()
    }

    /// Induced map on `pi1 = ker d`.
    pub fn pi1_map(&self) -> ModuleHom {
        let (_, ia) = self.source.pi1_data();
        let (_, ib) = self.target.pi1_data();
        ib.lift_through_injection(&ia.then(&self.f1))
            .expect("chain maps preserve kernels")
    }

    /// Induced map on `pi0 = coker d`.
    pub fn pi0_map(&self) -> ModuleHom {
        let (_, pa) = self.source.pi0_data();
        let (_, pb) = self.target.pi0_data();
        pa.factor_through_surjection(&self.f0.then(pb))
            .expect("chain maps preserve images")
    }

    /// Faithful: injective on every hom-set, equivalently on automorphisms of
    /// the unit, i.e. `pi1(F)` injective.
    pub fn is_faithful(&self) -> bool {
        self.pi1_map().is_injective()
    }

    /// Full: every `b: F(x) → F(y)` is `F(a)` for some `a: x → y`.
    ///
    /// With `y - x = v`, such `b` exist iff `f0(v) ∈ im d_B`, and then they form a
    /// coset of `pi1(B)`; morphisms `x → y` exist iff `v ∈ im d_A` and form a
    /// coset of `pi1(A)`. Hence fullness is `pi0(F)` injective (no new
    /// morphisms between non-isomorphic objects) plus `pi1(F)` surjective.
    pub fn is_full(&self) -> bool {
        self.pi0_map().is_injective() && self.pi1_map().is_surjective()
    }

    pub fn is_essentially_surjective(&self) -> bool {
        self.pi0_map().is_surjective()
    }

    pub fn is_equivalence(&self) -> bool {
        self.pi0_map().is_isomorphism() && self.pi1_map().is_isomorphism()
    }
}

impl fmt::Debug for OneMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OneMor({} => {}, f1 = {}, f0 = {})",
            self.source,
            self.target,
            self.f1.matrix(),
            self.f0.matrix()
        )
    }
}

/// A homotopy `h: A0 → B1` from `from` to `to`.
#[derive(Clone)]
pub struct TwoMor {
    from: OneMor,
    to: OneMor,
    h: ModuleHom,
}

impl TwoMor {
    /// Checked constructor: `d_B h = g0 - f0` and `h d_A = g1 - f1`.
    pub fn new(from: &OneMor, to: &OneMor, h: Matrix) -> Result<Self> {
        if !from.is_parallel(to) {
            return Err(Error::input("2-morphism between non-parallel 1-morphisms"));
        }
        let h = ModuleHom::new(from.source.deg0(), from.target.deg1(), h).map_err(|e| e.context("h"))?;
        let t = TwoMor {
            from: from.clone(),
            to: to.clone(),
            h,
        };
        t.check()?;
        Ok(t)
    }

    pub(crate) fn from_parts(from: &OneMor, to: &OneMor, h: Matrix) -> Self {
        let t = TwoMor {
            from: from.clone(),
            to: to.clone(),
            h: ModuleHom::from_parts(from.source.deg0().clone(), from.target.deg1().clone(), h),
        };
        debug_assert!(t.h.is_well_defined() && t.check().is_ok(), "invalid 2-morphism: {:?}", t.check());
        t
    }

    pub fn from_hom(from: &OneMor, to: &OneMor, h: &ModuleHom) -> Result<Self> {
        Self::new(from, to, h.matrix().clone())
    }

    /// Report which defining equation fails, if any.
    pub fn check(&self) -> Result<()> {
        let a = self.from.source();
        let b = self.from.target();
        if !self.h.then(b.d()).same_map(&self.to.f0.sub(&self.from.f0)) {
            return Err(Error::precondition("2-morphism equation d h = g0 - f0 fails"));
        }
        if !a.d().then(&self.h).same_map(&self.to.f1.sub(&self.from.f1)) {
            return Err(Error::precondition("2-morphism equation h d = g1 - f1 fails"));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.h.is_well_defined() && self.check().is_ok()
    }

    /// The identity 2-morphism `F ⇒ F`.
    pub fn identity(f: &OneMor) -> Self {
        Self::from_parts(
            f,
            f,
            Matrix::zeros(f.target.deg1().generators(), f.source.deg0().generators()),
        )
    }

    pub fn from(&self) -> &OneMor {
        &self.from
    }

    pub fn to(&self) -> &OneMor {
        &self.to
    }

    pub fn h(&self) -> &ModuleHom {
        &self.h
    }

    /// `σ` then `τ`: `F ⇒ G ⇒ H`, homotopies add.
    pub fn vcomp(&self, next: &TwoMor) -> Result<TwoMor> {
        if !self.to.same_map(&next.from) {
            return Err(Error::input("vertical composition of non-matching 2-morphisms"));
        }
        Ok(TwoMor {
            from: self.from.clone(),
            to: next.to.clone(),
            h: self.h.add(&next.h),
        })
    }

    pub fn inverse(&self) -> TwoMor {
        TwoMor {
            from: self.to.clone(),
            to: self.from.clone(),
            h: self.h.neg(),
        }
    }

    /// `K ∘ σ: K F ⇒ K G`, homotopy `k1 h`.
    pub fn whisker_left(k: &OneMor, sigma: &TwoMor) -> Result<TwoMor> {
        if !sigma.from.target.same_as(&k.source) {
            return Err(Error::input("whiskering: 1-morphism does not start at the 2-morphism's target"));
        }
        Ok(TwoMor {
            from: sigma.from.then(k),
            to: sigma.to.then(k),
            h: sigma.h.then(&k.f1),
        })
    }

    /// `σ ∘ J: F J ⇒ G J`, homotopy `h j0`.
    pub fn whisker_right(sigma: &TwoMor, j: &OneMor) -> Result<TwoMor> {
        if !j.target.same_as(&sigma.from.source) {
            return Err(Error::input("whiskering: 1-morphism does not end at the 2-morphism's source"));
        }
        Ok(TwoMor {
            from: j.then(&sigma.from),
            to: j.then(&sigma.to),
            h: j.f0.then(&sigma.h),
        })
    }

    /// `σ + τ: F + F' ⇒ G + G'`.
    pub fn add(&self, other: &TwoMor) -> TwoMor {
        TwoMor {
            from: self.from.add(&other.from),
            to: self.to.add(&other.to),
            h: self.h.add(&other.h),
        }
    }

    /// Equality of the underlying homotopies (and endpoints).
    pub fn same(&self, other: &TwoMor) -> bool {
        self.from.same_map(&other.from) && self.to.same_map(&other.to) && self.h.same_map(&other.h)
    }
}

impl fmt::Debug for TwoMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoMor(h = {})", self.h.matrix())
    }
}

/// `A × B` with its injections and projections.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: TwoMod,
    pub inj: [OneMor; 2],
    pub proj: [OneMor; 2],
}

pub fn biproduct(a: &TwoMod, b: &TwoMod) -> Result<Biproduct> {
    if a.ring() != b.ring() {
        return Err(Error::input("biproduct of 2-modules over different rings"));
    }
    let parts1 = [a.deg1().clone(), b.deg1().clone()];
    let parts0 = [a.deg0().clone(), b.deg0().clone()];
    let s1 = parts1[0].direct_sum(&parts1[1]);
    let s0 = parts0[0].direct_sum(&parts0[1]);
    let d = ModuleHom::new(&s1, &s0, a.d().matrix().block_diag(b.d().matrix()))?;
    let sum = TwoMod::new(d);
    let parts = [a, b];
    let inj = [0, 1].map(|i| {
        OneMor::from_parts(
            parts[i],
            &sum,
            sum_injection(&parts1, &s1, i).matrix().clone(),
            sum_injection(&parts0, &s0, i).matrix().clone(),
        )
    });
    let proj = [0, 1].map(|i| {
        OneMor::from_parts(
            &sum,
            parts[i],
            sum_projection(&parts1, &s1, i).matrix().clone(),
            sum_projection(&parts0, &s0, i).matrix().clone(),
        )
    });
    Ok(Biproduct { sum, inj, proj })
}

impl Biproduct {
    /// `(f, g): X → A × B`.
    pub fn pair(&self, f: &OneMor, g: &OneMor) -> OneMor {
        assert!(f.source.same_as(&g.source), "pair: sources differ");
        OneMor::from_parts(
            &f.source,
            &self.sum,
            f.f1.matrix().vstack(g.f1.matrix()),
            f.f0.matrix().vstack(g.f0.matrix()),
        )
    }

    /// `[f, g]: A × B → X`.
    pub fn copair(&self, f: &OneMor, g: &OneMor) -> OneMor {
        assert!(f.target.same_as(&g.target), "copair: targets differ");
        OneMor::from_parts(
            &self.sum,
            &f.target,
            f.f1.matrix().hstack(g.f1.matrix()),
            f.f0.matrix().hstack(g.f0.matrix()),
        )
    }

    /// `f × g: A × B → A' × B'`.
    pub fn product_map(&self, other: &Biproduct, f: &OneMor, g: &OneMor) -> OneMor {
        OneMor::from_parts(
            &self.sum,
            &other.sum,
            f.f1.matrix().block_diag(g.f1.matrix()),
            f.f0.matrix().block_diag(g.f0.matrix()),
        )
    }
}
