//! 2-cochain complexes, their morphisms and 2-cochain homotopies.
//!
//! Homotopy data (`alpha`, `lambda`, `tau`) is stored as raw module maps so that
//! invalid data can be represented and reported; validity is decided by
//! [`CochainComplex::validate`], [`ComplexMor::validate`] and
//! [`check_homotopy`]. Entries outside the stored range are zero.
//!
//! Equations checked, all as maps into the degree-1 part of the target:
//! - complex: `l_{n+2,1} h_{alpha_n} = h_{alpha_{n+1}} l_{n,0}`
//! - morphism: `f_{n+2,1} h_{alpha_n} = h_{lambda_{n+1}} l_{n,0} + m_{n+1,1} h_{lambda_n} + h_{beta_n} f_{n,0}`
//! - homotopy: `h_{tau_{n+1}} l_{n,0} - m_{n,1} h_{tau_n} + H_{n+1,1} h_{alpha_n} - h_{beta_{n-1}} H_{n-1,0}
//!   = h_{lambda_n} - h_{mu_n}`

use std::fmt;

use crate::error::{Error, Result};
use crate::intmod::{BaseRing, ModuleHom};
use crate::twomod::{OneMor, TwoMod, TwoMor};

/// One failed equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: &'static str,
    pub index: isize,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {}", self.kind, self.index, self.detail)
    }
}

/// Every violated equation, with indices in degrees. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, kind: &'static str, index: isize, detail: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            index,
            detail: detail.into(),
        });
    }

    /// Only the violations with index below `n`.
    pub fn below(&self, n: isize) -> ValidationReport {
        ValidationReport {
            violations: self.violations.iter().filter(|v| v.index < n).cloned().collect(),
        }
    }

    /// `Ok` if valid, otherwise a precondition error listing the violations.
    pub fn into_result(self, what: &str) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::precondition(format!("{what}: {}", parts.join("; "))))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// `A_0 → A_1 → ... → A_N` with `alpha_n: L_{n+1} L_n ⇒ 0`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    ring: BaseRing,
    entries: Vec<TwoMod>,
    diffs: Vec<OneMor>,
    alphas: Vec<ModuleHom>,
    /// Number of zero entries prepended by `pad_left`.
    pad: usize,
}

impl CochainComplex {
    /// Validated constructor. `diffs[n]: A_n → A_{n+1}`, `alphas[n]: A_{n,0} → A_{n+2,1}`.
    pub fn new(entries: Vec<TwoMod>, diffs: Vec<OneMor>, alphas: Vec<ModuleHom>) -> Result<Self> {
        let c = Self::unvalidated(entries, diffs, alphas)?;
        c.validate().into_result("invalid complex")?;
        Ok(c)
    }

    /// Shape-checked constructor that does not check the equations.
    pub fn unvalidated(entries: Vec<TwoMod>, diffs: Vec<OneMor>, alphas: Vec<ModuleHom>) -> Result<Self> {
        let ring = entries
            .first()
            .map(|e| e.ring().clone())
            .ok_or_else(|| Error::input("complex needs at least one entry"))?;
        let n = entries.len();
        if diffs.len() != n - 1 {
            return Err(Error::input(format!("{} entries need {} differentials, got {}", n, n - 1, diffs.len())));
        }
        if alphas.len() != n.saturating_sub(2) {
            return Err(Error::input(format!(
                "{} entries need {} alphas, got {}",
                n,
                n.saturating_sub(2),
                alphas.len()
            )));
        }
        for (i, l) in diffs.iter().enumerate() {
            if !l.source().same_as(&entries[i]) || !l.target().same_as(&entries[i + 1]) {
                return Err(Error::input(format!("differential {i} has the wrong endpoints")));
            }
        }
        for (i, a) in alphas.iter().enumerate() {
            if !a.source().same_presentation(entries[i].deg0()) || !a.target().same_presentation(entries[i + 2].deg1()) {
                return Err(Error::input(format!("alpha {i} has the wrong shape")));
            }
        }
        Ok(CochainComplex {
            ring,
            entries,
            diffs,
            alphas,
            pad: 0,
        })
    }

    /// A complex whose composites `L_{n+1} L_n` vanish, with zero alphas.
    pub fn strict(entries: Vec<TwoMod>, diffs: Vec<OneMor>) -> Result<Self> {
        let n = entries.len();
        let alphas = (0..n.saturating_sub(2))
            .map(|i| ModuleHom::zero(entries[i].deg0(), entries[i + 2].deg1()))
            .collect();
        Self::new(entries, diffs, alphas)
    }

    pub fn zero(ring: &BaseRing, len: usize) -> Self {
        let entries: Vec<TwoMod> = (0..len.max(1)).map(|_| TwoMod::zero(ring)).collect();
        let diffs = (1..entries.len())
            .map(|i| OneMor::zero(&entries[i - 1], &entries[i]))
            .collect();
        Self::strict(entries, diffs).expect("zero complex is valid")
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    /// Number of stored entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Zero entries prepended by padding.
    pub fn padding(&self) -> usize {
        self.pad
    }

    /// Highest degree stored.
    pub fn top_degree(&self) -> isize {
        self.entries.len() as isize - 1 - self.pad as isize
    }

    fn idx(&self, degree: isize) -> isize {
        degree + self.pad as isize
    }

    fn stored(&self, i: isize) -> Option<usize> {
        (i >= 0 && (i as usize) < self.entries.len()).then_some(i as usize)
    }

    /// `A_n`, zero outside the stored range.
    pub fn entry(&self, degree: isize) -> TwoMod {
        match self.stored(self.idx(degree)) {
            Some(i) => self.entries[i].clone(),
            None => TwoMod::zero(&self.ring),
        }
    }

    /// `L_n: A_n → A_{n+1}`.
    pub fn diff(&self, degree: isize) -> OneMor {
        let i = self.idx(degree);
        match self.stored(i) {
            Some(i) if i < self.diffs.len() => self.diffs[i].clone(),
            _ => OneMor::zero(&self.entry(degree), &self.entry(degree + 1)),
        }
    }

    /// `h_{alpha_n}: A_{n,0} → A_{n+2,1}`.
    pub fn alpha_h(&self, degree: isize) -> ModuleHom {
        let i = self.idx(degree);
        match self.stored(i) {
            Some(i) if i < self.alphas.len() => self.alphas[i].clone(),
            _ => ModuleHom::zero(self.entry(degree).deg0(), self.entry(degree + 2).deg1()),
        }
    }

    /// `alpha_n` as a 2-morphism, if valid.
    pub fn alpha(&self, degree: isize) -> Result<TwoMor> {
        let ll = self.diff(degree).then(&self.diff(degree + 1));
        let zero = OneMor::zero(&self.entry(degree), &self.entry(degree + 2));
        TwoMor::from_hom(&ll, &zero, &self.alpha_h(degree))
    }

    pub fn entries(&self) -> &[TwoMod] {
        &self.entries
    }

    pub fn diffs(&self) -> &[OneMor] {
        &self.diffs
    }

    pub fn alphas(&self) -> &[ModuleHom] {
        &self.alphas
    }

    /// Lowest and highest degree (inclusive) with stored data.
    pub fn degree_range(&self) -> (isize, isize) {
        (-(self.pad as isize), self.top_degree())
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let (lo, hi) = self.degree_range();
        for n in lo..=hi {
            if let Err(e) = self.alpha(n) {
                r.push("alpha", n, e.to_string());
            }
        }
        for n in lo..=hi {
            let lhs = self.alpha_h(n).then(self.diff(n + 2).f1());
            let rhs = self.diff(n).f0().then(&self.alpha_h(n + 1));
            if !lhs.same_map(&rhs) {
                r.push("coherence", n, "l_{n+2,1} h_alpha_n != h_alpha_{n+1} l_{n,0}");
            }
        }
        r
    }

    /// Prepend `0 → 0 →` in front of `A_0` with zero (canonical) 2-morphisms.
    pub fn pad_left(&self) -> CochainComplex {
        let z = TwoMod::zero(&self.ring);
        let mut entries = vec![z.clone(), z.clone()];
        entries.extend(self.entries.iter().cloned());
        let mut diffs = vec![OneMor::zero(&z, &z), OneMor::zero(&z, &self.entries[0])];
        diffs.extend(self.diffs.iter().cloned());
        let mut alphas = vec![
            ModuleHom::zero(z.deg0(), self.entries[0].deg1()),
            ModuleHom::zero(z.deg0(), entries.get(3).unwrap_or(&z).deg1()),
        ];
        alphas.extend(self.alphas.iter().cloned());
        alphas.truncate(entries.len().saturating_sub(2));
        CochainComplex {
            ring: self.ring.clone(),
            entries,
            diffs,
            alphas,
            pad: self.pad + 2,
        }
    }

    /// Keep degrees up to `top` (inclusive).
    pub fn truncate(&self, top: isize) -> CochainComplex {
        let keep = (self.idx(top) + 1).clamp(1, self.entries.len() as isize) as usize;
        CochainComplex {
            ring: self.ring.clone(),
            entries: self.entries[..keep].to_vec(),
            diffs: self.diffs[..keep - 1].to_vec(),
            alphas: self.alphas[..keep.saturating_sub(2)].to_vec(),
            pad: self.pad,
        }
    }

    /// Drop the first stored entry, shifting degrees down by one.
    pub fn tail(&self) -> Result<CochainComplex> {
        if self.entries.len() < 2 {
            return Err(Error::input("tail of a complex with a single entry"));
        }
        Ok(CochainComplex {
            ring: self.ring.clone(),
            entries: self.entries[1..].to_vec(),
            diffs: self.diffs[1..].to_vec(),
            alphas: self.alphas.get(1..).map(|a| a.to_vec()).unwrap_or_default(),
            pad: self.pad.saturating_sub(1),
        })
    }
}

pub fn validate_complex(c: &CochainComplex) -> ValidationReport {
    c.validate()
}

/// `(F_n, lambda_n): A → B` with `lambda_n: F_{n+1} L_n ⇒ M_n F_n`.
#[derive(Clone, Debug)]
pub struct ComplexMor {
    source: CochainComplex,
    target: CochainComplex,
    maps: Vec<OneMor>,
    lambdas: Vec<ModuleHom>,
}

impl ComplexMor {
    /// Validated constructor; `maps[i]` and `lambdas[i]` are indexed by stored position.
    pub fn new(source: &CochainComplex, target: &CochainComplex, maps: Vec<OneMor>, lambdas: Vec<ModuleHom>) -> Result<Self> {
        let m = Self::unvalidated(source, target, maps, lambdas)?;
        m.validate().into_result("invalid complex morphism")?;
        Ok(m)
    }

    pub fn unvalidated(
        source: &CochainComplex,
        target: &CochainComplex,
        maps: Vec<OneMor>,
        lambdas: Vec<ModuleHom>,
    ) -> Result<Self> {
        if source.len() != target.len() || source.pad != target.pad {
            return Err(Error::input("complex morphism between complexes of different lengths"));
        }
        let n = source.len();
        if maps.len() != n || lambdas.len() != n - 1 {
            return Err(Error::input(format!(
                "complex morphism needs {} maps and {} lambdas, got {} and {}",
                n,
                n - 1,
                maps.len(),
                lambdas.len()
            )));
        }
        for (i, f) in maps.iter().enumerate() {
            if !f.source().same_as(&source.entries[i]) || !f.target().same_as(&target.entries[i]) {
                return Err(Error::input(format!("map {i} has the wrong endpoints")));
            }
        }
        for (i, l) in lambdas.iter().enumerate() {
            if !l.source().same_presentation(source.entries[i].deg0())
                || !l.target().same_presentation(target.entries[i + 1].deg1())
            {
                return Err(Error::input(format!("lambda {i} has the wrong shape")));
            }
        }
        Ok(ComplexMor {
            source: source.clone(),
            target: target.clone(),
            maps,
            lambdas,
        })
    }

    /// Morphism commuting strictly with the differentials, zero lambdas.
    pub fn strict(source: &CochainComplex, target: &CochainComplex, maps: Vec<OneMor>) -> Result<Self> {
        let lambdas = (0..source.len().saturating_sub(1))
            .map(|i| ModuleHom::zero(source.entries[i].deg0(), target.entries[i + 1].deg1()))
            .collect();
        Self::new(source, target, maps, lambdas)
    }

    pub fn identity(c: &CochainComplex) -> Self {
        let maps = c.entries.iter().map(OneMor::identity).collect();
        Self::strict(c, c, maps).expect("identity is a complex morphism")
    }

    pub fn zero(source: &CochainComplex, target: &CochainComplex) -> Result<Self> {
        let maps = source
            .entries
            .iter()
            .zip(&target.entries)
            .map(|(a, b)| OneMor::zero(a, b))
            .collect();
        Self::strict(source, target, maps)
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn maps(&self) -> &[OneMor] {
        &self.maps
    }

    pub fn lambdas(&self) -> &[ModuleHom] {
        &self.lambdas
    }

    /// `F_n`, zero outside the stored range.
    pub fn map(&self, degree: isize) -> OneMor {
        match self.source.stored(self.source.idx(degree)) {
            Some(i) => self.maps[i].clone(),
            None => OneMor::zero(&self.source.entry(degree), &self.target.entry(degree)),
        }
    }

    /// `h_{lambda_n}: A_{n,0} → B_{n+1,1}`.
    pub fn lambda_h(&self, degree: isize) -> ModuleHom {
        match self.source.stored(self.source.idx(degree)) {
            Some(i) if i < self.lambdas.len() => self.lambdas[i].clone(),
            _ => ModuleHom::zero(self.source.entry(degree).deg0(), self.target.entry(degree + 1).deg1()),
        }
    }

    pub fn lambda(&self, degree: isize) -> Result<TwoMor> {
        let from = self.source.diff(degree).then(&self.map(degree + 1));
        let to = self.map(degree).then(&self.target.diff(degree));
        TwoMor::from_hom(&from, &to, &self.lambda_h(degree))
    }

    pub fn is_parallel(&self, other: &ComplexMor) -> bool {
        self.source.len() == other.source.len()
            && self.maps.iter().zip(&other.maps).all(|(a, b)| a.is_parallel(b))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let (lo, hi) = self.source.degree_range();
        for n in lo..=hi {
            if let Err(e) = self.lambda(n) {
                r.push("lambda", n, e.to_string());
            }
        }
        let a = &self.source;
        let b = &self.target;
        for n in lo..=hi {
            let lhs = a.alpha_h(n).then(self.map(n + 2).f1());
            let rhs = a
                .diff(n)
                .f0()
                .then(&self.lambda_h(n + 1))
                .add(&self.lambda_h(n).then(b.diff(n + 1).f1()))
                .add(&self.map(n).f0().then(&b.alpha_h(n)));
            if !lhs.same_map(&rhs) {
                r.push(
                    "square",
                    n,
                    "f_{n+2,1} h_alpha_n != h_lambda_{n+1} l_{n,0} + m_{n+1,1} h_lambda_n + h_beta_n f_{n,0}",
                );
            }
        }
        r
    }

    pub fn pad_left(&self) -> ComplexMor {
        let s = self.source.pad_left();
        let t = self.target.pad_left();
        let mut maps = vec![OneMor::zero(&s.entries[0], &t.entries[0]), OneMor::zero(&s.entries[1], &t.entries[1])];
        maps.extend(self.maps.iter().cloned());
        let mut lambdas = vec![
            ModuleHom::zero(s.entries[0].deg0(), t.entries[1].deg1()),
            ModuleHom::zero(s.entries[1].deg0(), t.entries[2].deg1()),
        ];
        lambdas.extend(self.lambdas.iter().cloned());
        ComplexMor {
            source: s,
            target: t,
            maps,
            lambdas,
        }
    }

    pub fn truncate(&self, top: isize) -> ComplexMor {
        let s = self.source.truncate(top);
        let t = self.target.truncate(top);
        let k = s.len();
        ComplexMor {
            source: s,
            target: t,
            maps: self.maps[..k].to_vec(),
            lambdas: self.lambdas[..k - 1].to_vec(),
        }
    }

    /// Restriction to the tails of source and target.
    pub fn tail(&self) -> Result<ComplexMor> {
        Ok(ComplexMor {
            source: self.source.tail()?,
            target: self.target.tail()?,
            maps: self.maps[1..].to_vec(),
            lambdas: self.lambdas[1..].to_vec(),
        })
    }
}

pub fn validate_complex_mor(f: &ComplexMor) -> ValidationReport {
    f.validate()
}

/// `(G_n, mu_n) ∘ (F_n, lambda_n)` with 2-morphisms `g_{n+1,1} h_lambda + h_mu f_{n,0}`.
pub fn compose_complex_mor(f: &ComplexMor, g: &ComplexMor) -> Result<ComplexMor> {
    if f.target.len() != g.source.len() || !f.target.entries.iter().zip(&g.source.entries).all(|(a, b)| a.same_as(b)) {
        return Err(Error::input("complex morphisms are not composable"));
    }
    let maps: Vec<OneMor> = f.maps.iter().zip(&g.maps).map(|(a, b)| a.then(b)).collect();
    let lambdas = (0..f.lambdas.len())
        .map(|i| {
            f.lambdas[i]
                .then(g.maps[i + 1].f1())
                .add(&f.maps[i].f0().then(&g.lambdas[i]))
        })
        .collect();
    ComplexMor::unvalidated(&f.source, &g.target, maps, lambdas)
}

/// `(H_{n-1}: A_n → B_{n-1}, tau_n: F_n ⇒ M_{n-1} H_{n-1} + H_n L_n + G_n)`.
#[derive(Clone, Debug)]
pub struct CochainHomotopy {
    from: ComplexMor,
    to: ComplexMor,
    /// `hmaps[i]` is `H_n` for the stored position `i = n`: `A_{n+1} → B_n`.
    hmaps: Vec<OneMor>,
    taus: Vec<ModuleHom>,
}

impl CochainHomotopy {
    /// Shape-checked constructor; use [`check_homotopy`] for the equations.
    pub fn new(from: &ComplexMor, to: &ComplexMor, hmaps: Vec<OneMor>, taus: Vec<ModuleHom>) -> Result<Self> {
        if !from.is_parallel(to) {
            return Err(Error::input("homotopy between non-parallel complex morphisms"));
        }
        let a = &from.source;
        let b = &from.target;
        let n = a.len();
        if hmaps.len() != n - 1 || taus.len() != n {
            return Err(Error::input(format!(
                "homotopy needs {} maps H and {} taus, got {} and {}",
                n - 1,
                n,
                hmaps.len(),
                taus.len()
            )));
        }
        for (i, h) in hmaps.iter().enumerate() {
            if !h.source().same_as(&a.entries[i + 1]) || !h.target().same_as(&b.entries[i]) {
                return Err(Error::input(format!("homotopy map {i} has the wrong endpoints")));
            }
        }
        for (i, t) in taus.iter().enumerate() {
            if !t.source().same_presentation(a.entries[i].deg0()) || !t.target().same_presentation(b.entries[i].deg1()) {
                return Err(Error::input(format!("tau {i} has the wrong shape")));
            }
        }
        Ok(CochainHomotopy {
            from: from.clone(),
            to: to.clone(),
            hmaps,
            taus,
        })
    }

    /// The zero homotopy from `f` to itself.
    pub fn zero(f: &ComplexMor) -> Self {
        let a = &f.source;
        let b = &f.target;
        let hmaps = (1..a.len()).map(|i| OneMor::zero(&a.entries[i], &b.entries[i - 1])).collect();
        let taus = (0..a.len())
            .map(|i| ModuleHom::zero(a.entries[i].deg0(), b.entries[i].deg1()))
            .collect();
        CochainHomotopy {
            from: f.clone(),
            to: f.clone(),
            hmaps,
            taus,
        }
    }

    pub fn from(&self) -> &ComplexMor {
        &self.from
    }

    pub fn to(&self) -> &ComplexMor {
        &self.to
    }

    pub fn hmaps(&self) -> &[OneMor] {
        &self.hmaps
    }

    pub fn taus(&self) -> &[ModuleHom] {
        &self.taus
    }

    /// Replace one tau; used to build perturbed homotopies.
    pub fn with_tau(&self, degree: isize, tau: ModuleHom) -> Result<Self> {
        let i = self
            .from
            .source
            .stored(self.from.source.idx(degree))
            .ok_or_else(|| Error::input("tau index out of range"))?;
        let mut taus = self.taus.clone();
        taus[i] = tau;
        Self::new(&self.from, &self.to, self.hmaps.clone(), taus)
    }

    /// `H_n: A_{n+1} → B_n`, zero outside the stored range.
    pub fn hmap(&self, degree: isize) -> OneMor {
        let a = &self.from.source;
        match a.stored(a.idx(degree)) {
            Some(i) if i < self.hmaps.len() => self.hmaps[i].clone(),
            _ => OneMor::zero(&a.entry(degree + 1), &self.from.target.entry(degree)),
        }
    }

    pub fn tau_h(&self, degree: isize) -> ModuleHom {
        let a = &self.from.source;
        match a.stored(a.idx(degree)) {
            Some(i) => self.taus[i].clone(),
            None => ModuleHom::zero(a.entry(degree).deg0(), self.from.target.entry(degree).deg1()),
        }
    }

    /// The 1-morphism `M_{n-1} H_{n-1} + H_n L_n + G_n`.
    pub fn tau_target(&self, degree: isize) -> OneMor {
        let a = &self.from.source;
        let b = &self.from.target;
        self.hmap(degree - 1)
            .then(&b.diff(degree - 1))
            .add(&a.diff(degree).then(&self.hmap(degree)))
            .add(&self.to.map(degree))
    }

    pub fn tau(&self, degree: isize) -> Result<TwoMor> {
        TwoMor::from_hom(&self.from.map(degree), &self.tau_target(degree), &self.tau_h(degree))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let a = &self.from.source;
        let b = &self.from.target;
        let (lo, hi) = a.degree_range();
        let mut bad = std::collections::BTreeSet::new();
        for n in lo..=hi {
            if let Err(e) = self.tau(n) {
                r.push("tau", n, e.to_string());
                bad.insert(n);
            }
        }
        for n in lo..=hi {
            if bad.contains(&n) || bad.contains(&(n + 1)) {
                continue;
            }
            let lhs = a
                .diff(n)
                .f0()
                .then(&self.tau_h(n + 1))
                .sub(&self.tau_h(n).then(b.diff(n).f1()))
                .add(&a.alpha_h(n).then(self.hmap(n + 1).f1()))
                .sub(&self.hmap(n - 1).f0().then(&b.alpha_h(n - 1)));
            let rhs = self.from.lambda_h(n).sub(&self.to.lambda_h(n));
            if !lhs.same_map(&rhs) {
                r.push(
                    "homotopy",
                    n,
                    "h_tau_{n+1} l_{n,0} - m_{n,1} h_tau_n + H_{n+1,1} h_alpha_n - h_beta_{n-1} H_{n-1,0} != h_lambda_n - h_mu_n",
                );
            }
        }
        r
    }

    pub fn pad_left(&self) -> CochainHomotopy {
        let from = self.from.pad_left();
        let to = self.to.pad_left();
        let a = &from.source;
        let b = &from.target;
        let mut hmaps = vec![
            OneMor::zero(&a.entries[1], &b.entries[0]),
            OneMor::zero(&a.entries[2], &b.entries[1]),
        ];
        hmaps.extend(self.hmaps.iter().cloned());
        let mut taus = vec![
            ModuleHom::zero(a.entries[0].deg0(), b.entries[0].deg1()),
            ModuleHom::zero(a.entries[1].deg0(), b.entries[1].deg1()),
        ];
        taus.extend(self.taus.iter().cloned());
        CochainHomotopy { from, to, hmaps, taus }
    }

    pub fn truncate(&self, top: isize) -> CochainHomotopy {
        let from = self.from.truncate(top);
        let to = self.to.truncate(top);
        let k = from.source.len();
        CochainHomotopy {
            from,
            to,
            hmaps: self.hmaps[..k - 1].to_vec(),
            taus: self.taus[..k].to_vec(),
        }
    }

    /// Restriction to the tails; meaningful when `H` at the first stored
    /// position vanishes.
    pub fn tail(&self) -> Result<CochainHomotopy> {
        Ok(CochainHomotopy {
            from: self.from.tail()?,
            to: self.to.tail()?,
            hmaps: self.hmaps[1..].to_vec(),
            taus: self.taus[1..].to_vec(),
        })
    }
}

/// Report every violated homotopy equation. A `tau_n` that is not a valid
/// 2-morphism is reported once and the equations touching it are skipped.
pub fn check_homotopy(h: &CochainHomotopy) -> ValidationReport {
    h.validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmod::{FpModule, Matrix};

    fn times_two_complex() -> CochainComplex {
        let r = BaseRing::zn(4);
        let m = FpModule::free(&r, 1);
        let a: Vec<TwoMod> = (0..3).map(|_| TwoMod::discrete(&m)).collect();
        let diffs = (0..2)
            .map(|i| OneMor::new(&a[i], &a[i + 1], Matrix::zeros(0, 0), Matrix::from_i64(1, 1, &[2])).unwrap())
            .collect();
        CochainComplex::strict(a, diffs).unwrap()
    }

    #[test]
    fn strict_discrete_complex_validates() {
        let c = times_two_complex();
        assert!(c.validate().is_valid());
        let id = ComplexMor::identity(&c);
        assert!(id.validate().is_valid());
        assert!(check_homotopy(&CochainHomotopy::zero(&id)).is_valid());
    }

    #[test]
    fn padding_is_bookkeeping() {
        let c = times_two_complex();
        let p = c.pad_left();
        assert_eq!(p.len(), c.len() + 2);
        assert!(p.validate().is_valid());
        assert_eq!(p.degree_range(), (-2, 2));
        let pp = p.pad_left();
        assert_eq!(pp.degree_range(), (-4, 2));
        for n in 0..=2 {
            assert_eq!(pp.entry(n).pi(), c.entry(n).pi());
        }
    }

    #[test]
    fn compose_with_identity() {
        let c = times_two_complex();
        let id = ComplexMor::identity(&c);
        let comp = compose_complex_mor(&id, &id).unwrap();
        assert!(comp.validate().is_valid());
        for n in 0..3 {
            assert!(comp.map(n).same_map(&id.map(n)));
        }
    }
}
