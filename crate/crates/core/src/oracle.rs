//! Brute-force element-level oracle for finite instances over Z/n.
//!
//! Modules are enumerated as cosets of the relation subgroup inside the
//! ambient `(Z/n)^g`, found by closure under addition; no Smith normal form is
//! used. Everything is then checked elementwise against the chain-level
//! constructions.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::cochain::CochainComplex;
use crate::cohomology::cohomology;
use crate::error::{Error, Result};
use crate::intmod::{BaseRing, FpModule, Int, Matrix, ModuleHom};
use crate::relkc::{factor_through_cokernel, relative_cokernel, relative_kernel};
use crate::twomod::{biproduct, OneMor, TwoMod, TwoMor};

/// Default bound on enumerated sizes.
pub const DEFAULT_CAP: usize = 4096;

fn modulus_i64(ring: &BaseRing) -> Result<i64> {
    let n = ring
        .modulus()
        .ok_or_else(|| Error::capacity("enumeration needs a finite ring Z/n"))?;
    n.to_i64()
        .filter(|n| *n <= 1 << 20)
        .ok_or_else(|| Error::capacity(format!("modulus {n} too large to enumerate")))
}

fn ambient_size(n: i64, g: usize, cap: usize) -> Result<usize> {
    let mut s: usize = 1;
    for _ in 0..g {
        s = s
            .checked_mul(n as usize)
            .filter(|s| *s <= cap)
            .ok_or_else(|| Error::capacity(format!("(Z/{n})^{g} exceeds the cap {cap}")))?;
    }
    Ok(s)
}

fn to_i64_mod(x: &Int, n: i64) -> i64 {
    let r = (x % Int::from(n)).to_i64().expect("reduced value fits");
    if r < 0 {
        r + n
    } else {
        r
    }
}

/// A finite module with explicit elements; element 0 is zero.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    n: i64,
    gens: usize,
    reps: Vec<Vec<i64>>,
    class_of: HashMap<Vec<i64>, usize>,
}

impl FiniteModule {
    pub fn enumerate(m: &FpModule, cap: usize) -> Result<Self> {
        let n = modulus_i64(m.ring())?;
        let g = m.generators();
        let size = ambient_size(n, g, cap)?;
        let rels: Vec<Vec<i64>> = (0..m.relations().cols())
            .map(|j| m.relations().column(j).iter().map(|x| to_i64_mod(x, n)).collect())
            .collect();
        let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| (x + y) % n).collect() };
        let zero = vec![0i64; g];
        let mut sub: HashSet<Vec<i64>> = HashSet::from([zero.clone()]);
        let mut queue = vec![zero];
        while let Some(v) = queue.pop() {
            for r in &rels {
                let u = add(&v, r);
                if sub.insert(u.clone()) {
                    queue.push(u);
                }
            }
        }
        let mut class_of = HashMap::with_capacity(size);
        let mut reps = Vec::new();
        let mut v = vec![0i64; g];
        for _ in 0..size {
            if !class_of.contains_key(&v) {
                let id = reps.len();
                for w in &sub {
                    class_of.insert(add(&v, w), id);
                }
                reps.push(v.clone());
            }
            for x in v.iter_mut() {
                *x += 1;
                if *x < n {
                    break;
                }
                *x = 0;
            }
        }
        Ok(FiniteModule { n, gens: g, reps, class_of })
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    pub fn id_of(&self, v: &[Int]) -> usize {
        let key: Vec<i64> = v.iter().map(|x| to_i64_mod(x, self.n)).collect();
        self.class_of[&key]
    }

    fn id_of_i64(&self, v: Vec<i64>) -> usize {
        self.class_of[&v]
    }

    pub fn rep(&self, i: usize) -> Vec<Int> {
        self.reps[i].iter().map(|&x| Int::from(x)).collect()
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let v = self.reps[i].iter().zip(&self.reps[j]).map(|(x, y)| (x + y) % self.n).collect();
        self.id_of_i64(v)
    }

    pub fn neg(&self, i: usize) -> usize {
        let v = self.reps[i].iter().map(|x| (self.n - x) % self.n).collect();
        self.id_of_i64(v)
    }

    pub fn sub(&self, i: usize, j: usize) -> usize {
        self.add(i, self.neg(j))
    }
}

/// Value table of a module map on enumerated elements.
pub fn table(h: &ModuleHom, source: &FiniteModule, target: &FiniteModule) -> Vec<usize> {
    let n = target.n;
    let m: Vec<Vec<i64>> = h
        .matrix()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| to_i64_mod(x, n)).collect())
        .collect();
    source
        .reps
        .iter()
        .map(|v| {
            let img: Vec<i64> = m
                .iter()
                .map(|row| row.iter().zip(v).fold(0i64, |acc, (a, b)| (acc + a * b) % n))
                .collect();
            debug_assert_eq!(img.len(), target.gens);
            target.id_of_i64(img)
        })
        .collect()
}

/// Objects are elements of `A0`; a morphism `x → y` is `a ∈ A1` with `y = x + d a`.
#[derive(Clone, Debug)]
pub struct EnumeratedTwoMod {
    pub a1: FiniteModule,
    pub a0: FiniteModule,
    pub d: Vec<usize>,
}

pub fn enumerate(a: &TwoMod, cap: usize) -> Result<EnumeratedTwoMod> {
    let n = modulus_i64(a.ring())?;
    let s1 = ambient_size(n, a.deg1().generators(), cap)?;
    let s0 = ambient_size(n, a.deg0().generators(), cap)?;
    if s1.saturating_mul(s0) > cap {
        return Err(Error::capacity(format!("|A1| * |A0| ambient size {} exceeds the cap {cap}", s1 * s0)));
    }
    let a1 = FiniteModule::enumerate(a.deg1(), cap)?;
    let a0 = FiniteModule::enumerate(a.deg0(), cap)?;
    let d = table(a.d(), &a1, &a0);
    Ok(EnumeratedTwoMod { a1, a0, d })
}

impl EnumeratedTwoMod {
    pub fn object_count(&self) -> usize {
        self.a0.size()
    }

    pub fn morphisms(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.a1.size()).filter(|&a| self.a0.add(x, self.d[a]) == y).collect()
    }

    /// Number of isomorphism classes of objects.
    pub fn pi0_size(&self) -> usize {
        let mut class = vec![usize::MAX; self.a0.size()];
        let mut count = 0;
        for start in 0..self.a0.size() {
            if class[start] != usize::MAX {
                continue;
            }
            class[start] = count;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &da in &self.d {
                    let y = self.a0.add(x, da);
                    if class[y] == usize::MAX {
                        class[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        count
    }

    /// Number of automorphisms of the zero object.
    pub fn pi1_size(&self) -> usize {
        self.morphisms(0, 0).len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UniversalKind {
    RelKernel,
    RelCokernel,
    Biproduct,
    CohomologyDescription,
}

impl UniversalKind {
    pub const ALL: [UniversalKind; 4] = [
        UniversalKind::RelKernel,
        UniversalKind::RelCokernel,
        UniversalKind::Biproduct,
        UniversalKind::CohomologyDescription,
    ];
}

impl fmt::Display for UniversalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UniversalKind::RelKernel => "rel_kernel",
            UniversalKind::RelCokernel => "rel_cokernel",
            UniversalKind::Biproduct => "biproduct",
            UniversalKind::CohomologyDescription => "cohomology_description",
        })
    }
}

impl FromStr for UniversalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        UniversalKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::input(format!("unknown oracle kind {s:?}")))
    }
}

/// Input to [`verify_universal`].
#[derive(Clone, Debug)]
pub enum Instance {
    /// `A --F--> B --G--> C` with `phi: G F ⇒ 0`.
    Sequence { f: OneMor, g: OneMor, phi: TwoMor },
    Pair(TwoMod, TwoMod),
    Complex { complex: CochainComplex, n: isize },
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub kind: UniversalKind,
    pub checks: usize,
    pub mismatches: Vec<String>,
}

impl OracleReport {
    fn new(kind: UniversalKind) -> Self {
        OracleReport {
            kind,
            checks: 0,
            mismatches: Vec::new(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.mismatches.push(msg());
        }
    }

    pub fn merge(&mut self, other: OracleReport) {
        self.checks += other.checks;
        self.mismatches.extend(other.mismatches);
    }
}

/// Exhaustively compare a chain-level construction with its element-level description.
pub fn verify_universal(kind: UniversalKind, instance: &Instance, cap: usize) -> Result<OracleReport> {
    let mut r = OracleReport::new(kind);
    match (kind, instance) {
        (UniversalKind::RelKernel, Instance::Sequence { f, g, phi }) => verify_rel_kernel(f, g, phi, cap, &mut r)?,
        (UniversalKind::RelCokernel, Instance::Sequence { f, g, phi }) => verify_rel_cokernel(f, g, phi, cap, &mut r)?,
        (UniversalKind::Biproduct, Instance::Pair(a, b)) => verify_biproduct(a, b, cap, &mut r)?,
        (UniversalKind::CohomologyDescription, Instance::Complex { complex, n }) => {
            verify_cohomology(complex, *n, cap, &mut r)?
        }
        _ => return Err(Error::input(format!("instance does not fit oracle kind {kind}"))),
    }
    Ok(r)
}

fn verify_rel_kernel(f: &OneMor, g: &OneMor, phi: &TwoMor, cap: usize, r: &mut OracleReport) -> Result<()> {
    let ea = enumerate(f.source(), cap)?;
    let eb = enumerate(f.target(), cap)?;
    let ec = enumerate(g.target(), cap)?;
    let f0 = table(f.f0(), &ea.a0, &eb.a0);
    let f1 = table(f.f1(), &ea.a1, &eb.a1);
    let g1 = table(g.f1(), &eb.a1, &ec.a1);
    let hphi = table(phi.h(), &ea.a0, &ec.a1);
    // objects: x with m: F x → 0 such that G m = phi_x
    let mut objects = HashSet::new();
    for x in 0..ea.a0.size() {
        for m in 0..eb.a1.size() {
            if eb.a0.add(f0[x], eb.d[m]) == 0 && g1[m] == hphi[x] {
                objects.insert((x, m));
            }
        }
    }
    let data = relative_kernel(f, g, phi)?;
    let k0 = FiniteModule::enumerate(data.k.deg0(), cap)?;
    let mut pairs = Vec::with_capacity(k0.size());
    let mut seen = HashSet::new();
    for k in 0..k0.size() {
        let (x, m) = data.components(&k0.rep(k));
        let key = (ea.a0.id_of(&x), eb.a1.id_of(&m));
        r.check(objects.contains(&key), || format!("rel_kernel: object {k} is not a trivialized object"));
        r.check(seen.insert(key), || format!("rel_kernel: object {k} repeats a pair"));
        pairs.push(key);
    }
    r.check(seen.len() == objects.len(), || {
        format!("rel_kernel: {} chain objects vs {} element objects", seen.len(), objects.len())
    });
    let dk = table(data.k.d(), &ea.a1, &k0);
    for (k, &(x, m)) in pairs.iter().enumerate() {
        for a in 0..ea.a1.size() {
            let got = pairs[k0.add(k, dk[a])];
            let want = (ea.a0.add(x, ea.d[a]), eb.a1.sub(m, f1[a]));
            r.check(got == want, || format!("rel_kernel: morphism {a} out of object {k} has the wrong target"));
        }
    }
    Ok(())
}

fn verify_rel_cokernel(f: &OneMor, g: &OneMor, phi: &TwoMor, cap: usize, r: &mut OracleReport) -> Result<()> {
    let ea = enumerate(f.source(), cap)?;
    let eb = enumerate(f.target(), cap)?;
    let ec = enumerate(g.target(), cap)?;
    let f0 = table(f.f0(), &ea.a0, &eb.a0);
    let g0 = table(g.f0(), &eb.a0, &ec.a0);
    let g1 = table(g.f1(), &eb.a1, &ec.a1);
    let hphi = table(phi.h(), &ea.a0, &ec.a1);
    // pairs (b, c) equivalent to zero: (f0 x + d m, g1 m - h_phi x)
    let mut trivial = HashSet::new();
    for x in 0..ea.a0.size() {
        for m in 0..eb.a1.size() {
            trivial.insert((eb.a0.add(f0[x], eb.d[m]), ec.a1.sub(g1[m], hphi[x])));
        }
    }
    let data = relative_cokernel(f, g, phi)?;
    r.check(data.q.deg0().same_presentation(g.target().deg0()), || {
        "rel_cokernel: objects differ from those of C".into()
    });
    let q1 = FiniteModule::enumerate(data.q.deg1(), cap)?;
    let dq = table(data.q.d(), &q1, &ec.a0);
    let mut fiber = HashSet::new();
    let mut image = HashSet::new();
    for b in 0..eb.a0.size() {
        for c in 0..ec.a1.size() {
            let q = q1.id_of(&data.class(&eb.a0.rep(b), &ec.a1.rep(c)));
            image.insert(q);
            if q == 0 {
                fiber.insert((b, c));
            }
            let want = ec.a0.sub(ec.d[c], g0[b]);
            r.check(dq[q] == want, || format!("rel_cokernel: class of ({b}, {c}) has the wrong endpoints"));
        }
    }
    r.check(fiber == trivial, || {
        format!(
            "rel_cokernel: {} pairs identified with zero vs {} element-level",
            fiber.len(),
            trivial.len()
        )
    });
    r.check(image.len() == q1.size(), || "rel_cokernel: class map is not surjective".into());
    Ok(())
}

fn verify_biproduct(a: &TwoMod, b: &TwoMod, cap: usize, r: &mut OracleReport) -> Result<()> {
    let bp = biproduct(a, b)?;
    let es = enumerate(&bp.sum, cap)?;
    let ea = enumerate(a, cap)?;
    let eb = enumerate(b, cap)?;
    let degrees: [(&FiniteModule, &FiniteModule, &FiniteModule, bool); 2] =
        [(&es.a0, &ea.a0, &eb.a0, false), (&es.a1, &ea.a1, &eb.a1, true)];
    for (s, ma, mb, one) in degrees {
        let pick = |m: &OneMor| if one { m.f1().clone() } else { m.f0().clone() };
        let p0 = table(&pick(&bp.proj[0]), s, ma);
        let p1 = table(&pick(&bp.proj[1]), s, mb);
        let i0 = table(&pick(&bp.inj[0]), ma, s);
        let i1 = table(&pick(&bp.inj[1]), mb, s);
        let pairs: HashSet<(usize, usize)> = (0..s.size()).map(|x| (p0[x], p1[x])).collect();
        r.check(pairs.len() == s.size() && s.size() == ma.size() * mb.size(), || {
            format!("biproduct: degree {} is not the product", if one { 1 } else { 0 })
        });
        for x in 0..ma.size() {
            r.check(p0[i0[x]] == x && p1[i0[x]] == 0, || "biproduct: p inj(a) != (a, 0)".into());
        }
        for y in 0..mb.size() {
            r.check(p0[i1[y]] == 0 && p1[i1[y]] == y, || "biproduct: p inj(b) != (0, b)".into());
        }
    }
    let p0 = table(bp.proj[0].f0(), &es.a0, &ea.a0);
    let p1 = table(bp.proj[1].f0(), &es.a0, &eb.a0);
    let q0 = table(bp.proj[0].f1(), &es.a1, &ea.a1);
    let q1 = table(bp.proj[1].f1(), &es.a1, &eb.a1);
    for s in 0..es.a1.size() {
        let ds = es.d[s];
        r.check(p0[ds] == ea.d[q0[s]] && p1[ds] == eb.d[q1[s]], || {
            "biproduct: morphisms are not componentwise".into()
        });
    }
    Ok(())
}

/// Element-level data of `H^n` from the explicit description, without any
/// chain-level construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementCohomology {
    pub objects: usize,
    pub pi0_size: usize,
    pub pi1_size: usize,
}

struct CohomologyTables {
    en: EnumeratedTwoMod,
    en1: EnumeratedTwoMod,
    enm1: EnumeratedTwoMod,
    objects: HashSet<(usize, usize)>,
    /// `(y, c) ↦ (d c - l y, -l c - h_alpha y)`.
    delta: HashMap<(usize, usize), (usize, usize)>,
    /// `(l z + d w, l w - h_alpha z)`.
    trivial: HashSet<(usize, usize)>,
}

fn cohomology_tables(c: &CochainComplex, n: isize, cap: usize) -> Result<CohomologyTables> {
    let e: Vec<EnumeratedTwoMod> = (n - 2..=n + 2)
        .map(|k| enumerate(&c.entry(k), cap))
        .collect::<Result<_>>()?;
    let [em2, em1, en, en1, en2] = <[EnumeratedTwoMod; 5]>::try_from(e).expect("five degrees");
    let l_m2_0 = table(c.diff(n - 2).f0(), &em2.a0, &em1.a0);
    let l_m1_0 = table(c.diff(n - 1).f0(), &em1.a0, &en.a0);
    let l_m1_1 = table(c.diff(n - 1).f1(), &em1.a1, &en.a1);
    let l_n_0 = table(c.diff(n).f0(), &en.a0, &en1.a0);
    let l_n_1 = table(c.diff(n).f1(), &en.a1, &en1.a1);
    let l_n1_1 = table(c.diff(n + 1).f1(), &en1.a1, &en2.a1);
    let h_n = table(&c.alpha_h(n), &en.a0, &en2.a1);
    let h_m1 = table(&c.alpha_h(n - 1), &em1.a0, &en1.a1);
    let h_m2 = table(&c.alpha_h(n - 2), &em2.a0, &en.a1);

    let mut objects = HashSet::new();
    for x in 0..en.a0.size() {
        for m in 0..en1.a1.size() {
            if en1.a0.add(l_n_0[x], en1.d[m]) == 0 && l_n1_1[m] == h_n[x] {
                objects.insert((x, m));
            }
        }
    }
    let mut delta = HashMap::new();
    for y in 0..em1.a0.size() {
        for cc in 0..en.a1.size() {
            let dx = en.a0.sub(en.d[cc], l_m1_0[y]);
            let dm = en1.a1.sub(en1.a1.neg(l_n_1[cc]), h_m1[y]);
            delta.insert((y, cc), (dx, dm));
        }
    }
    let mut trivial = HashSet::new();
    for z in 0..em2.a0.size() {
        for w in 0..em1.a1.size() {
            trivial.insert((em1.a0.add(l_m2_0[z], em1.d[w]), en.a1.sub(l_m1_1[w], h_m2[z])));
        }
    }
    Ok(CohomologyTables {
        en,
        en1,
        enm1: em1,
        objects,
        delta,
        trivial,
    })
}

/// Sizes of `pi0` and `pi1` of `H^n` counted from the explicit description.
pub fn enumerate_cohomology(c: &CochainComplex, n: isize, cap: usize) -> Result<ElementCohomology> {
    if n < 0 || n > c.top_degree() {
        return Err(Error::input(format!("degree {n} outside 0..={}", c.top_degree())));
    }
    let t = cohomology_tables(c, n, cap)?;
    let reachable: HashSet<(usize, usize)> = t.delta.values().copied().collect();
    let loops = t.delta.values().filter(|&&v| v == (0, 0)).count();
    Ok(ElementCohomology {
        objects: t.objects.len(),
        pi0_size: t.objects.len() / reachable.len(),
        pi1_size: loops / t.trivial.len(),
    })
}

fn card(m: &FpModule) -> usize {
    m.cardinality().and_then(|c| c.to_usize()).unwrap_or(usize::MAX)
}

fn verify_cohomology(c: &CochainComplex, n: isize, cap: usize, r: &mut OracleReport) -> Result<()> {
    let t = cohomology_tables(c, n, cap)?;
    let res = cohomology(c, n)?;
    let reachable: HashSet<(usize, usize)> = t.delta.values().copied().collect();
    r.check(reachable.is_subset(&t.objects), || {
        "cohomology: a morphism leaves the object set".into()
    });
    let h0 = FiniteModule::enumerate(res.h.deg0(), cap)?;
    let h1 = FiniteModule::enumerate(res.h.deg1(), cap)?;
    let mut pairs = Vec::with_capacity(h0.size());
    let mut seen = HashSet::new();
    for k in 0..h0.size() {
        let (x, m) = res.kernel.components(&h0.rep(k));
        let key = (t.en.a0.id_of(&x), t.en1.a1.id_of(&m));
        r.check(t.objects.contains(&key), || format!("cohomology: object {k} outside the description"));
        r.check(seen.insert(key), || format!("cohomology: object {k} repeats a pair"));
        pairs.push(key);
    }
    r.check(seen.len() == t.objects.len(), || {
        format!("cohomology: {} chain objects vs {} element objects", seen.len(), t.objects.len())
    });
    let dh = table(res.h.d(), &h1, &h0);
    let mut fiber = HashSet::new();
    let mut image = HashSet::new();
    for (&(y, cc), &want) in &t.delta {
        let q = h1.id_of(&res.cokernel.class(&t.enm1.a0.rep(y), &t.en.a1.rep(cc)));
        image.insert(q);
        if q == 0 {
            fiber.insert((y, cc));
        }
        r.check(pairs[dh[q]] == want, || format!("cohomology: morphism ({y}, {cc}) has the wrong endpoints"));
    }
    r.check(fiber == t.trivial, || "cohomology: morphism equivalence differs".into());
    r.check(image.len() == h1.size(), || "cohomology: morphism classes not all hit".into());
    let loops = t.delta.values().filter(|&&v| v == (0, 0)).count();
    let pi0 = t.objects.len() / reachable.len().max(1);
    let pi1 = loops / t.trivial.len().max(1);
    r.check(card(&res.pis.pi0) == pi0 && card(&res.pis.pi1) == pi1, || {
        format!(
            "cohomology: |pi0|, |pi1| = {}, {} but enumeration gives {pi0}, {pi1}",
            card(&res.pis.pi0),
            card(&res.pis.pi1)
        )
    });
    Ok(())
}

/// All matrices with entries in `0..n`, capped in number.
fn all_matrices(rows: usize, cols: usize, n: i64, cap: usize) -> Result<Vec<Matrix>> {
    let count = ambient_size(n, rows * cols, cap)?;
    let mut out = Vec::with_capacity(count);
    let mut v = vec![0i64; rows * cols];
    for _ in 0..count {
        out.push(Matrix::from_i64(rows, cols, &v));
        for x in v.iter_mut() {
            *x += 1;
            if *x < n {
                break;
            }
            *x = 0;
        }
    }
    Ok(out)
}

/// Every 1-morphism `A → B`, by exhaustive search over matrices.
pub fn all_one_morphisms(a: &TwoMod, b: &TwoMod, cap: usize) -> Result<Vec<OneMor>> {
    let n = modulus_i64(a.ring())?;
    let m1 = all_matrices(b.deg1().generators(), a.deg1().generators(), n, cap)?;
    let m0 = all_matrices(b.deg0().generators(), a.deg0().generators(), n, cap)?;
    if m1.len().saturating_mul(m0.len()) > cap {
        return Err(Error::capacity("too many candidate 1-morphisms"));
    }
    let mut out = Vec::new();
    for f1 in &m1 {
        for f0 in &m0 {
            if let Ok(f) = OneMor::new(a, b, f1.clone(), f0.clone()) {
                if !out.iter().any(|g: &OneMor| g.same_map(&f)) {
                    out.push(f);
                }
            }
        }
    }
    Ok(out)
}

/// Every 2-morphism `from ⇒ to`.
pub fn all_two_morphisms(from: &OneMor, to: &OneMor, cap: usize) -> Result<Vec<TwoMor>> {
    let n = modulus_i64(from.ring())?;
    let hs = all_matrices(from.target().deg1().generators(), from.source().deg0().generators(), n, cap)?;
    let mut out: Vec<TwoMor> = Vec::new();
    for h in hs {
        if let Ok(t) = TwoMor::new(from, to, h) {
            if !out.iter().any(|s| s.h().same_map(t.h())) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// A quasi-inverse `G` with `unit: 1 ⇒ G F` and `counit: F G ⇒ 1`.
#[derive(Clone, Debug)]
pub struct QuasiInverse {
    pub g: OneMor,
    pub unit: TwoMor,
    pub counit: TwoMor,
}

/// Exhaustive search for a quasi-inverse of `F`.
pub fn find_quasi_inverse(f: &OneMor, cap: usize) -> Result<Option<QuasiInverse>> {
    let a = f.source();
    let b = f.target();
    let id_a = OneMor::identity(a);
    let id_b = OneMor::identity(b);
    for g in all_one_morphisms(b, a, cap)? {
        let units = all_two_morphisms(&id_a, &f.then(&g), cap)?;
        let Some(unit) = units.into_iter().next() else { continue };
        let counits = all_two_morphisms(&g.then(f), &id_b, cap)?;
        if let Some(counit) = counits.into_iter().next() {
            return Ok(Some(QuasiInverse { g, unit, counit }));
        }
    }
    Ok(None)
}

/// All 2-modules `d: (Z/n)^a → (Z/n)^b` with `a, b ≤ max_gens`.
pub fn all_free_two_mods(ring: &BaseRing, max_gens: usize, cap: usize) -> Result<Vec<TwoMod>> {
    let n = modulus_i64(ring)?;
    let mut out = Vec::new();
    for a in 0..=max_gens {
        for b in 0..=max_gens {
            let m1 = FpModule::free(ring, a);
            let m0 = FpModule::free(ring, b);
            for d in all_matrices(b, a, n, cap)? {
                out.push(TwoMod::from_matrix(&m1, &m0, d)?);
            }
        }
    }
    Ok(out)
}

/// Sequences `A → B → C` with `phi: G F ⇒ 0` around each middle term `B`,
/// with ends drawn from `ends`. At most `per_pair` maps on each side are kept.
pub fn sequences_through(b: &TwoMod, ends: &[TwoMod], per_pair: usize, cap: usize) -> Result<Vec<Instance>> {
    fn spread(v: Vec<OneMor>, k: usize) -> Vec<OneMor> {
        if v.len() <= k {
            return v;
        }
        let step = (v.len() - 1) as f64 / (k - 1).max(1) as f64;
        (0..k).map(|i| v[(i as f64 * step).round() as usize].clone()).collect()
    }
    let mut out = Vec::new();
    for a in ends {
        let fs = spread(all_one_morphisms(a, b, cap)?, per_pair);
        for c in ends {
            let gs = spread(all_one_morphisms(b, c, cap)?, per_pair);
            for f in &fs {
                for g in &gs {
                    let gf = f.then(g);
                    let zero = OneMor::zero(a, c);
                    for phi in all_two_morphisms(&gf, &zero, cap)? {
                        out.push(Instance::Sequence {
                            f: f.clone(),
                            g: g.clone(),
                            phi,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The three-term complex `A → B → C` of a sequence, with `alpha_0 = phi`.
pub fn sequence_complex(f: &OneMor, g: &OneMor, phi: &TwoMor) -> Result<CochainComplex> {
    CochainComplex::new(
        vec![f.source().clone(), f.target().clone(), g.target().clone()],
        vec![f.clone(), g.clone()],
        vec![phi.h().clone()],
    )
}

/// Relative 2-exactness at `B` of `X →L A →F B →G C →M D` straight from the
/// definition: `G': Coker(alpha, F) → C` is faithful and `gamma_bar`-full.
///
/// Morphism sets are cosets, so both conditions are checked on differences:
/// faithful means no nonzero `q: 0 → 0` with `G'q = 0`; `gamma_bar`-full means
/// every `c: G'x → G'y` with `gamma_bar_y ∘ M c = gamma_bar_x` is some `G'q`.
#[allow(clippy::too_many_arguments)]
pub fn direct_relative_exactness(
    l: &OneMor,
    alpha: &TwoMor,
    f: &OneMor,
    phi: &TwoMor,
    g: &OneMor,
    gamma: &TwoMor,
    m: &OneMor,
    cap: usize,
) -> Result<bool> {
    let q = relative_cokernel(l, f, alpha)?;
    let (gp, _) = factor_through_cokernel(&q, g, phi)?;
    let qe = enumerate(&q.q, cap)?;
    let c1 = FiniteModule::enumerate(g.target().deg1(), cap)?;
    let c0 = FiniteModule::enumerate(g.target().deg0(), cap)?;
    let d1 = FiniteModule::enumerate(m.target().deg1(), cap)?;
    let g1 = table(gp.f1(), &qe.a1, &c1);
    let g0 = table(gp.f0(), &qe.a0, &c0);
    let dc = table(g.target().d(), &c1, &c0);
    let m1 = table(m.f1(), &c1, &d1);
    let hg = table(gamma.h(), &qe.a0, &d1);
    if (1..qe.a1.size()).any(|a| qe.d[a] == 0 && g1[a] == 0) {
        return Ok(false);
    }
    let reached: HashSet<(usize, usize)> = (0..qe.a1.size()).map(|a| (qe.d[a], g1[a])).collect();
    for v in 0..qe.a0.size() {
        for c in 0..c1.size() {
            if dc[c] == g0[v] && m1[c] == d1.neg(hg[v]) && !reached.contains(&(v, c)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> BaseRing {
        BaseRing::zn(n)
    }

    #[test]
    fn enumeration_examples() {
        let r = z(2);
        let m = FpModule::free(&r, 1);
        let disc = enumerate(&TwoMod::discrete(&m), DEFAULT_CAP).unwrap();
        assert_eq!(disc.object_count(), 2);
        assert_eq!(disc.morphisms(0, 0).len(), 1);
        assert_eq!(disc.morphisms(0, 1).len(), 0);
        let one = enumerate(&TwoMod::one_object(&m), DEFAULT_CAP).unwrap();
        assert_eq!(one.object_count(), 1);
        assert_eq!(one.pi1_size(), 2);
        let r4 = z(4);
        let m4 = FpModule::free(&r4, 1);
        let t = TwoMod::from_matrix(&m4, &m4, Matrix::from_i64(1, 1, &[2])).unwrap();
        let e = enumerate(&t, DEFAULT_CAP).unwrap();
        assert_eq!(e.object_count(), 4);
        assert!((0..4).all(|x| (0..4).map(|y| e.morphisms(x, y).len()).sum::<usize>() == 4));
        assert_eq!(e.pi0_size(), 2);
    }

    #[test]
    fn quotient_enumeration() {
        let m = FpModule::cyclic(&z(4), 2);
        let f = FiniteModule::enumerate(&m, DEFAULT_CAP).unwrap();
        assert_eq!(f.size(), 2);
        assert_eq!(f.add(1, 1), 0);
    }

    #[test]
    fn capacity_is_enforced() {
        let m = FpModule::free(&z(4), 7);
        assert!(matches!(FiniteModule::enumerate(&m, DEFAULT_CAP), Err(Error::Capacity(_))));
        assert!(matches!(FiniteModule::enumerate(&FpModule::free(&BaseRing::Integers, 1), 10), Err(Error::Capacity(_))));
    }

    #[test]
    fn quasi_inverse_search() {
        let r = z(2);
        let m = FpModule::free(&r, 1);
        let a = TwoMod::discrete(&m);
        let id = OneMor::identity(&a);
        assert!(find_quasi_inverse(&id, DEFAULT_CAP).unwrap().is_some());
        let contractible = TwoMod::from_matrix(&m, &m, Matrix::identity(1)).unwrap();
        let zero = TwoMod::zero(&r);
        let to_zero = OneMor::zero(&contractible, &zero);
        assert!(to_zero.is_equivalence());
        assert!(find_quasi_inverse(&to_zero, DEFAULT_CAP).unwrap().is_some());
        let kill = OneMor::zero(&a, &zero);
        assert!(!kill.is_equivalence());
        assert!(find_quasi_inverse(&kill, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn all_kinds_on_a_small_instance() {
        let r = z(2);
        let m = FpModule::free(&r, 1);
        let b = TwoMod::one_object(&m);
        let ends = [TwoMod::discrete(&m), TwoMod::zero(&r)];
        for inst in sequences_through(&b, &ends, 3, DEFAULT_CAP).unwrap() {
            for kind in [UniversalKind::RelKernel, UniversalKind::RelCokernel] {
                let rep = verify_universal(kind, &inst, DEFAULT_CAP).unwrap();
                assert!(rep.is_ok(), "{:?}", rep.mismatches);
            }
            let Instance::Sequence { f, g, phi } = &inst else { unreachable!() };
            let c = sequence_complex(f, g, phi).unwrap();
            for n in 0..3 {
                let rep = verify_universal(
                    UniversalKind::CohomologyDescription,
                    &Instance::Complex { complex: c.clone(), n },
                    DEFAULT_CAP,
                )
                .unwrap();
                assert!(rep.is_ok(), "{:?}", rep.mismatches);
            }
        }
        let rep = verify_universal(UniversalKind::Biproduct, &Instance::Pair(b.clone(), ends[0].clone()), DEFAULT_CAP).unwrap();
        assert!(rep.is_ok());
    }
}
