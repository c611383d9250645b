//! Random instances: modules, 2-modules, complexes, complex morphisms and
//! homotopic pairs. Every generator returns validated data; randomness comes
//! from solving the defining linear equations with random kernel components.

use rand::Rng;

use crate::cochain::{CochainComplex, CochainHomotopy, ComplexMor};
use crate::error::{Error, Result};
use crate::intmod::{BaseRing, FpModule, HomSystem, Int, Matrix, ModuleHom};
use crate::twomod::{biproduct, OneMor, TwoMod, TwoMor};

fn no_solution(what: &str) -> Error {
    Error::internal(format!("homogeneous system for {what} has no solution"))
}

/// A module with at most `max_gens` generators and random relations.
pub fn random_module<R: Rng>(ring: &BaseRing, max_gens: usize, rng: &mut R) -> FpModule {
    let g = rng.gen_range(0..=max_gens);
    if g == 0 || rng.gen_bool(0.5) {
        return FpModule::free(ring, g);
    }
    let k = rng.gen_range(1..=g);
    let mut rels = Matrix::zeros(g, k);
    for i in 0..g {
        for j in 0..k {
            rels[(i, j)] = match ring {
                BaseRing::Integers => Int::from(rng.gen_range(-4i64..=4)),
                BaseRing::IntegersMod(_) => ring.random_element(rng),
            };
        }
    }
    FpModule::new(ring, g, rels).expect("relations have the right shape")
}

/// A uniformly random homomorphism `P → Q` (bounded entries over Z).
pub fn random_hom<R: Rng>(p: &FpModule, q: &FpModule, rng: &mut R) -> ModuleHom {
    let mut sys = HomSystem::new(p.ring());
    sys.add_unknown(p, q);
    sys.solve_random(&[], rng)
        .ok()
        .flatten()
        .map(|mut v| v.remove(0))
        .unwrap_or_else(|| ModuleHom::zero(p, q))
}

pub fn random_two_mod<R: Rng>(ring: &BaseRing, max_gens: usize, rng: &mut R) -> TwoMod {
    let a1 = random_module(ring, max_gens, rng);
    let a0 = random_module(ring, max_gens, rng);
    TwoMod::new(random_hom(&a1, &a0, rng))
}

/// A random 1-morphism `A → B`.
pub fn random_one_mor<R: Rng>(a: &TwoMod, b: &TwoMod, rng: &mut R) -> Result<OneMor> {
    let mut sys = HomSystem::new(a.ring());
    let x1 = sys.add_unknown(a.deg1(), b.deg1());
    let x0 = sys.add_unknown(a.deg0(), b.deg0());
    let terms = vec![sys.term(x1, Some(b.d()), None), sys.scaled_term(-1, x0, None, Some(a.d()))];
    sys.add_equation(a.deg1(), b.deg0(), terms)?;
    let sol = sys
        .solve_random(&sys.zero_rhs(), rng)?
        .ok_or_else(|| no_solution("a chain map"))?;
    OneMor::from_homs(a, b, &sol[x1], &sol[x0])
}

/// A random 2-morphism out of `F`, together with its target.
pub fn random_two_mor<R: Rng>(f: &OneMor, rng: &mut R) -> Result<TwoMor> {
    let h = random_hom(f.source().deg0(), f.target().deg1(), rng);
    let g0 = f.f0().add(&h.then(f.target().d()));
    let g1 = f.f1().add(&f.source().d().then(&h));
    let g = OneMor::from_homs(f.source(), f.target(), &g1, &g0)?;
    TwoMor::from_hom(f, &g, &h)
}

/// A random 2-cochain complex with `len` entries. With `strict`, all alphas vanish.
pub fn random_complex<R: Rng>(
    ring: &BaseRing,
    len: usize,
    max_gens: usize,
    strict: bool,
    rng: &mut R,
) -> Result<CochainComplex> {
    let entries: Vec<TwoMod> = (0..len.max(1)).map(|_| random_two_mod(ring, max_gens, rng)).collect();
    random_complex_on(&entries, strict, rng)
}

/// A random complex structure on the given entries.
pub fn random_complex_on<R: Rng>(entries: &[TwoMod], strict: bool, rng: &mut R) -> Result<CochainComplex> {
    let len = entries.len();
    let mut diffs: Vec<OneMor> = Vec::new();
    let mut alphas: Vec<ModuleHom> = Vec::new();
    if len >= 2 {
        diffs.push(random_one_mor(&entries[0], &entries[1], rng)?);
    }
    for n in 0..len.saturating_sub(2) {
        let (a, b, c) = (&entries[n], &entries[n + 1], &entries[n + 2]);
        let l = &diffs[n];
        let mut sys = HomSystem::new(a.ring());
        let x1 = sys.add_unknown(b.deg1(), c.deg1());
        let x0 = sys.add_unknown(b.deg0(), c.deg0());
        let h = (!strict).then(|| sys.add_unknown(a.deg0(), c.deg1()));
        let t = vec![sys.term(x1, Some(c.d()), None), sys.scaled_term(-1, x0, None, Some(b.d()))];
        sys.add_equation(b.deg1(), c.deg0(), t)?;
        // l0 l_{n,0} + d h = 0 and l1 l_{n,1} + h d = 0
        let mut t = vec![sys.term(x0, None, Some(l.f0()))];
        if let Some(h) = h {
            t.push(sys.term(h, Some(c.d()), None));
        }
        sys.add_equation(a.deg0(), c.deg0(), t)?;
        let mut t = vec![sys.term(x1, None, Some(l.f1()))];
        if let Some(h) = h {
            t.push(sys.term(h, None, Some(a.d())));
        }
        sys.add_equation(a.deg1(), c.deg1(), t)?;
        // coherence with the previous alpha: l1 h_{alpha_{n-1}} = h l_{n-1,0}
        if n >= 1 {
            let prev = &entries[n - 1];
            let mut t = vec![sys.term(x1, None, Some(&alphas[n - 1]))];
            if let Some(h) = h {
                t.push(sys.scaled_term(-1, h, None, Some(diffs[n - 1].f0())));
            }
            sys.add_equation(prev.deg0(), c.deg1(), t)?;
        }
        let sol = sys
            .solve_random(&sys.zero_rhs(), rng)?
            .ok_or_else(|| no_solution("a complex"))?;
        diffs.push(OneMor::from_homs(b, c, &sol[x1], &sol[x0])?);
        alphas.push(match h {
            Some(h) => sol[h].clone(),
            None => ModuleHom::zero(a.deg0(), c.deg1()),
        });
    }
    CochainComplex::new(entries.to_vec(), diffs, alphas)
}

/// A random morphism of complexes `A → B` (equal lengths).
pub fn random_complex_mor<R: Rng>(a: &CochainComplex, b: &CochainComplex, rng: &mut R) -> Result<ComplexMor> {
    if a.len() != b.len() {
        return Err(Error::input("complexes of different lengths"));
    }
    let n = a.len();
    let mut sys = HomSystem::new(a.ring());
    let mut f = Vec::new();
    for k in 0..n {
        let (ea, eb) = (a.entry(k as isize), b.entry(k as isize));
        let x1 = sys.add_unknown(ea.deg1(), eb.deg1());
        let x0 = sys.add_unknown(ea.deg0(), eb.deg0());
        let t = vec![sys.term(x1, Some(eb.d()), None), sys.scaled_term(-1, x0, None, Some(ea.d()))];
        sys.add_equation(ea.deg1(), eb.deg0(), t)?;
        f.push((x1, x0));
    }
    let mut lam = Vec::new();
    for k in 0..n - 1 {
        let ki = k as isize;
        let ea = a.entry(ki);
        let eb1 = b.entry(ki + 1);
        let h = sys.add_unknown(ea.deg0(), eb1.deg1());
        lam.push(h);
        // d h = m_{k,0} f_{k,0} - f_{k+1,0} l_{k,0}
        let t = vec![
            sys.term(h, Some(eb1.d()), None),
            sys.scaled_term(-1, f[k].1, Some(b.diff(ki).f0()), None),
            sys.term(f[k + 1].1, None, Some(a.diff(ki).f0())),
        ];
        sys.add_equation(ea.deg0(), eb1.deg0(), t)?;
        // h d = m_{k,1} f_{k,1} - f_{k+1,1} l_{k,1}
        let t = vec![
            sys.term(h, None, Some(ea.d())),
            sys.scaled_term(-1, f[k].0, Some(b.diff(ki).f1()), None),
            sys.term(f[k + 1].0, None, Some(a.diff(ki).f1())),
        ];
        sys.add_equation(ea.deg1(), eb1.deg1(), t)?;
    }
    // f_{k+2,1} h_alpha_k = h_lambda_{k+1} l_{k,0} + m_{k+1,1} h_lambda_k + h_beta_k f_{k,0}
    for k in 0..n.saturating_sub(2) {
        let ki = k as isize;
        let mut t = vec![
            sys.term(f[k + 2].0, None, Some(&a.alpha_h(ki))),
            sys.scaled_term(-1, lam[k], Some(b.diff(ki + 1).f1()), None),
            sys.scaled_term(-1, f[k].1, Some(&b.alpha_h(ki)), None),
        ];
        if k + 1 < lam.len() {
            t.push(sys.scaled_term(-1, lam[k + 1], None, Some(a.diff(ki).f0())));
        }
        sys.add_equation(a.entry(ki).deg0(), b.entry(ki + 2).deg1(), t)?;
    }
    let sol = sys
        .solve_random(&sys.zero_rhs(), rng)?
        .ok_or_else(|| no_solution("a complex morphism"))?;
    let maps = (0..n)
        .map(|k| OneMor::from_homs(&a.entries()[k], &b.entries()[k], &sol[f[k].0], &sol[f[k].1]))
        .collect::<Result<Vec<_>>>()?;
    let lambdas = lam.iter().map(|&h| sol[h].clone()).collect();
    ComplexMor::new(a, b, maps, lambdas)
}

/// Random `H_n`, `tau_n` and the morphism `G` they connect `F` to.
pub fn random_homotopy<R: Rng>(f: &ComplexMor, rng: &mut R) -> Result<CochainHomotopy> {
    let a = f.source();
    let b = f.target();
    let n = a.len();
    let hmaps = (0..n.saturating_sub(1))
        .map(|k| random_one_mor(&a.entries()[k + 1], &b.entries()[k], rng))
        .collect::<Result<Vec<_>>>()?;
    let taus: Vec<ModuleHom> = (0..n)
        .map(|k| random_hom(a.entries()[k].deg0(), b.entries()[k].deg1(), rng))
        .collect();
    let hm = |k: isize| -> OneMor {
        if k >= 0 && (k as usize) < hmaps.len() {
            hmaps[k as usize].clone()
        } else {
            OneMor::zero(&a.entry(k + 1), &b.entry(k))
        }
    };
    let tau = |k: isize| -> ModuleHom {
        if k >= 0 && (k as usize) < n {
            taus[k as usize].clone()
        } else {
            ModuleHom::zero(a.entry(k).deg0(), b.entry(k).deg1())
        }
    };
    let mut maps = Vec::with_capacity(n);
    for k in 0..n as isize {
        // G = F + delta(tau) - (M H_{k-1} + H_k L)
        let corr = hm(k - 1).then(&b.diff(k - 1)).add(&a.diff(k).then(&hm(k)));
        let t = tau(k);
        let fk = f.map(k);
        let g0 = fk.f0().add(&t.then(b.entry(k).d())).sub(corr.f0());
        let g1 = fk.f1().add(&a.entry(k).d().then(&t)).sub(corr.f1());
        maps.push(OneMor::from_homs(&a.entries()[k as usize], &b.entries()[k as usize], &g1, &g0)?);
    }
    let mut lambdas = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n as isize - 1 {
        // h_mu = h_lambda - (h_tau_{k+1} l_{k,0} - m_{k,1} h_tau_k + H_{k+1,1} h_alpha_k - h_beta_{k-1} H_{k-1,0})
        let lhs = a
            .diff(k)
            .f0()
            .then(&tau(k + 1))
            .sub(&tau(k).then(b.diff(k).f1()))
            .add(&a.alpha_h(k).then(hm(k + 1).f1()))
            .sub(&hm(k - 1).f0().then(&b.alpha_h(k - 1)));
        lambdas.push(f.lambda_h(k).sub(&lhs));
    }
    let g = ComplexMor::unvalidated(a, b, maps, lambdas)?;
    CochainHomotopy::new(f, &g, hmaps, taus)
}

/// A relative 2-exact complex: split pieces `X_k → X_k` made non-strict by
/// a random homotopy perturbation of each differential.
pub fn random_exact_complex<R: Rng>(ring: &BaseRing, len: usize, max_gens: usize, rng: &mut R) -> Result<CochainComplex> {
    let len = len.max(1);
    let zero = TwoMod::zero(ring);
    let xs: Vec<TwoMod> = (0..len - 1).map(|_| random_two_mod(ring, max_gens, rng)).collect();
    let x = |k: isize| -> &TwoMod {
        if k >= 0 && (k as usize) < xs.len() {
            &xs[k as usize]
        } else {
            &zero
        }
    };
    let bps = (0..len as isize)
        .map(|k| biproduct(x(k), x(k - 1)))
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<TwoMod> = bps.iter().map(|b| b.sum.clone()).collect();
    // L_k (a, b) = (0, a)
    let strict: Vec<OneMor> = (0..len - 1)
        .map(|k| bps[k].proj[0].then(&bps[k + 1].inj[1]))
        .collect();
    let ks: Vec<ModuleHom> = (0..len - 1)
        .map(|k| random_hom(entries[k].deg0(), entries[k + 1].deg1(), rng))
        .collect();
    let diffs: Vec<OneMor> = (0..len - 1)
        .map(|k| Ok(random_two_mor_with(&strict[k], &ks[k])?.to().clone()))
        .collect::<Result<_>>()?;
    // alpha_k = -(l'_{k+1,1} k_k + k_{k+1} l_{k,0})
    let alphas = (0..len.saturating_sub(2))
        .map(|k| {
            ks[k]
                .then(diffs[k + 1].f1())
                .add(&strict[k].f0().then(&ks[k + 1]))
                .neg()
        })
        .collect();
    CochainComplex::new(entries, diffs, alphas)
}

fn random_two_mor_with(f: &OneMor, h: &ModuleHom) -> Result<TwoMor> {
    let g0 = f.f0().add(&h.then(f.target().d()));
    let g1 = f.f1().add(&f.source().d().then(h));
    let g = OneMor::from_homs(f.source(), f.target(), &g1, &g0)?;
    TwoMor::from_hom(f, &g, h)
}
