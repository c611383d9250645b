//! Manifest schema v1: named data plus a command, stored as TOML.

use std::collections::BTreeMap;

use hom2::cochain::{CochainComplex, CochainHomotopy, ComplexMor};
use hom2::derived::AdditiveTwoFunctor;
use hom2::intmod::{BaseRing, FpModule, Int, Matrix, ModuleHom};
use hom2::relkc::canonical_trivialization;
use hom2::twomod::{OneMor, TwoMod, TwoMor};
use hom2::Error;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = "v1";

/// An integer entry: a TOML integer, or a decimal string when it does not fit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Small(i64),
    Big(String),
}

impl Num {
    pub fn to_int(&self) -> Result<Int, Error> {
        match self {
            Num::Small(v) => Ok(Int::from(*v)),
            Num::Big(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::input(format!("not an integer: {s:?}"))),
        }
    }

    pub fn from_int(v: &Int) -> Num {
        match i64::try_from(v) {
            Ok(x) => Num::Small(x),
            Err(_) => Num::Big(v.to_string()),
        }
    }

    fn canonical(&self) -> Result<Num, Error> {
        Ok(Num::from_int(&self.to_int()?))
    }
}

pub type Rows = Vec<Vec<Num>>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    /// Cyclic summands; `0` is a free summand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gens: Option<usize>,
    /// One relation per inner list, of length `gens`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<Rows>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoModSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deg0: Option<String>,
    /// Matrix of `d: deg1 → deg0`, one row per generator of `deg0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Rows>,
    /// Shorthand for `0 → M`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrete: Option<String>,
    /// Shorthand for `M → 0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one_object: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<Rows>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoMorphismSpec {
    /// Composite of named 1-morphisms, first applied first.
    pub from: Vec<String>,
    /// Composite of named 1-morphisms; empty means the zero morphism.
    #[serde(default)]
    pub to: Vec<String>,
    /// Omitted: the canonical 2-morphism of a composite that is zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Rows>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub entries: Vec<String>,
    pub diffs: Vec<String>,
    /// Omitted: all zero (the complex must then be strict).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Rows>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMorSpec {
    pub source: String,
    pub target: String,
    pub maps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<Rows>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopySpec {
    pub from: String,
    pub to: String,
    pub hmaps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<Rows>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctorSpec {
    Identity,
    HomFrom { module: String },
    BaseChange { m: Num },
}

/// Parameters of the command; which ones are needed depends on `name`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homotopy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    /// `"Z"` or `"Z/n"`.
    pub ring: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub two_mods: BTreeMap<String, TwoModSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<String, MorphismSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub two_morphisms: BTreeMap<String, TwoMorphismSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complex_morphisms: BTreeMap<String, ComplexMorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homotopies: BTreeMap<String, HomotopySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default)]
    pub command: CommandSpec,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, Error> {
        let m: Manifest = toml::from_str(text).map_err(|e| Error::input(format!("manifest: {e}")))?;
        if m.version != VERSION {
            return Err(Error::input(format!("manifest version {:?}, expected {VERSION:?}", m.version)));
        }
        Ok(m)
    }

    /// Canonical TOML text: sorted names, integers in canonical form.
    pub fn to_canonical_string(&self) -> Result<String, Error> {
        let mut m = self.clone();
        m.canonicalize()?;
        toml::to_string(&m).map_err(|e| Error::internal(format!("serializing manifest: {e}")))
    }

    fn canonicalize(&mut self) -> Result<(), Error> {
        let rows = |r: &mut Rows| -> Result<(), Error> {
            for row in r.iter_mut() {
                for x in row.iter_mut() {
                    *x = x.canonical()?;
                }
            }
            Ok(())
        };
        for m in self.modules.values_mut() {
            if let Some(o) = &mut m.orders {
                for x in o.iter_mut() {
                    *x = x.canonical()?;
                }
            }
            if let Some(r) = &mut m.relations {
                rows(r)?;
            }
        }
        for t in self.two_mods.values_mut() {
            if let Some(d) = &mut t.d {
                rows(d)?;
            }
        }
        for f in self.morphisms.values_mut() {
            for r in [&mut f.f1, &mut f.f0].into_iter().flatten() {
                rows(r)?;
            }
        }
        for t in self.two_morphisms.values_mut() {
            if let Some(h) = &mut t.h {
                rows(h)?;
            }
        }
        for c in self.complexes.values_mut() {
            for r in c.alphas.iter_mut().flatten() {
                rows(r)?;
            }
        }
        for c in self.complex_morphisms.values_mut() {
            for r in c.lambdas.iter_mut().flatten() {
                rows(r)?;
            }
        }
        for h in self.homotopies.values_mut() {
            for r in h.taus.iter_mut().flatten() {
                rows(r)?;
            }
        }
        for f in self.functors.values_mut() {
            if let FunctorSpec::BaseChange { m } = f {
                *m = m.canonical()?;
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> Result<BaseRing, Error> {
        let r = self.ring.trim();
        if r == "Z" {
            return Ok(BaseRing::Integers);
        }
        let n = r
            .strip_prefix("Z/")
            .and_then(|n| n.trim().parse::<Int>().ok())
            .ok_or_else(|| Error::input(format!("ring must be \"Z\" or \"Z/n\", got {:?}", self.ring)))?;
        BaseRing::integers_mod(n)
    }
}

fn matrix(rows: &Rows, shape: (usize, usize), what: &str) -> Result<Matrix, Error> {
    let entries = rows
        .iter()
        .map(|r| r.iter().map(Num::to_int).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if entries.len() != shape.0 || entries.iter().any(|r| r.len() != shape.1) {
        return Err(Error::input(format!("{what}: expected a {}x{} matrix", shape.0, shape.1)));
    }
    Ok(Matrix::from_rows(shape.0, shape.1, &entries).expect("shape checked"))
}

fn hom(source: &FpModule, target: &FpModule, rows: Option<&Rows>, what: &str) -> Result<ModuleHom, Error> {
    match rows {
        None => Ok(ModuleHom::zero(source, target)),
        Some(r) => ModuleHom::new(source, target, matrix(r, (target.generators(), source.generators()), what)?)
            .map_err(|e| e.context(what)),
    }
}

/// A manifest with every name resolved to a validated object.
pub struct Workspace {
    pub ring: BaseRing,
    pub modules: BTreeMap<String, FpModule>,
    pub two_mods: BTreeMap<String, TwoMod>,
    pub morphisms: BTreeMap<String, OneMor>,
    pub two_morphisms: BTreeMap<String, TwoMor>,
    pub complexes: BTreeMap<String, CochainComplex>,
    pub complex_morphisms: BTreeMap<String, ComplexMor>,
    pub homotopies: BTreeMap<String, CochainHomotopy>,
    pub functors: BTreeMap<String, AdditiveTwoFunctor>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, what: &str) -> Result<&'a T, Error> {
    map.get(name)
        .ok_or_else(|| Error::input(format!("unknown {what} {name:?}")))
}

impl Workspace {
    pub fn load(m: &Manifest) -> Result<Workspace, Error> {
        let ring = m.ring()?;
        let mut ws = Workspace {
            ring: ring.clone(),
            modules: BTreeMap::new(),
            two_mods: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            two_morphisms: BTreeMap::new(),
            complexes: BTreeMap::new(),
            complex_morphisms: BTreeMap::new(),
            homotopies: BTreeMap::new(),
            functors: BTreeMap::new(),
        };
        for (name, def) in &m.modules {
            let ctx = format!("module {name}");
            let module = match (&def.orders, def.gens, &def.relations) {
                (Some(o), None, None) => {
                    let orders = o.iter().map(Num::to_int).collect::<Result<Vec<_>, _>>()?;
                    FpModule::cyclic_sum(&ring, &orders)
                }
                (None, Some(g), rels) => {
                    let rels = rels.clone().unwrap_or_default();
                    let cols = rels
                        .iter()
                        .map(|r| {
                            if r.len() != g {
                                return Err(Error::input(format!("{ctx}: relation of length {} for {g} generators", r.len())));
                            }
                            r.iter().map(Num::to_int).collect()
                        })
                        .collect::<Result<Vec<Vec<Int>>, _>>()?;
                    FpModule::new(&ring, g, Matrix::from_columns(g, &cols)).map_err(|e| e.context(&ctx))?
                }
                _ => return Err(Error::input(format!("{ctx}: give either orders, or gens with optional relations"))),
            };
            ws.modules.insert(name.clone(), module);
        }
        let zero = FpModule::zero(&ring);
        for (name, def) in &m.two_mods {
            let ctx = format!("2-module {name}");
            let module = |n: &Option<String>| -> Result<FpModule, Error> {
                match n {
                    None => Ok(zero.clone()),
                    Some(n) => lookup(&ws.modules, n, "module").cloned(),
                }
            };
            let a = match (&def.discrete, &def.one_object) {
                (Some(d), None) if def.deg1.is_none() && def.deg0.is_none() && def.d.is_none() => {
                    TwoMod::discrete(lookup(&ws.modules, d, "module")?)
                }
                (None, Some(o)) if def.deg1.is_none() && def.deg0.is_none() && def.d.is_none() => {
                    TwoMod::one_object(lookup(&ws.modules, o, "module")?)
                }
                (None, None) => {
                    let (m1, m0) = (module(&def.deg1)?, module(&def.deg0)?);
                    TwoMod::new(hom(&m1, &m0, def.d.as_ref(), &ctx)?)
                }
                _ => return Err(Error::input(format!("{ctx}: discrete/one_object exclude the other fields"))),
            };
            ws.two_mods.insert(name.clone(), a);
        }
        for (name, def) in &m.morphisms {
            let ctx = format!("morphism {name}");
            let a = lookup(&ws.two_mods, &def.source, "2-module")?;
            let b = lookup(&ws.two_mods, &def.target, "2-module")?;
            let f1 = hom(a.deg1(), b.deg1(), def.f1.as_ref(), &ctx)?;
            let f0 = hom(a.deg0(), b.deg0(), def.f0.as_ref(), &ctx)?;
            let f = OneMor::from_homs(a, b, &f1, &f0).map_err(|e| e.context(&ctx))?;
            ws.morphisms.insert(name.clone(), f);
        }
        for (name, def) in &m.two_morphisms {
            let ctx = format!("2-morphism {name}");
            let from = ws.composite(&def.from, None).map_err(|e| e.context(&ctx))?;
            let to = ws
                .composite(&def.to, Some(&from))
                .map_err(|e| e.context(&ctx))?;
            if !from.is_parallel(&to) {
                return Err(Error::input(format!("{ctx}: from and to are not parallel")));
            }
            let t = match &def.h {
                Some(h) => {
                    let h = hom(from.source().deg0(), from.target().deg1(), Some(h), &ctx)?;
                    TwoMor::from_hom(&from, &to, &h).map_err(|e| e.context(&ctx))?
                }
                None if def.from.len() == 2 && def.to.is_empty() => {
                    let f = &ws.morphisms[&def.from[0]];
                    let g = &ws.morphisms[&def.from[1]];
                    canonical_trivialization(f, g).map_err(|e| e.context(&ctx))?
                }
                None if from.same_map(&to) => TwoMor::identity(&from),
                None => return Err(Error::input(format!("{ctx}: h is required"))),
            };
            ws.two_morphisms.insert(name.clone(), t);
        }
        for (name, def) in &m.complexes {
            let ctx = format!("complex {name}");
            let entries = def
                .entries
                .iter()
                .map(|e| lookup(&ws.two_mods, e, "2-module").cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let diffs = def
                .diffs
                .iter()
                .map(|d| lookup(&ws.morphisms, d, "morphism").cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let c = match &def.alphas {
                None => CochainComplex::strict(entries, diffs),
                Some(al) => {
                    if al.len() != entries.len().saturating_sub(2) {
                        return Err(Error::input(format!("{ctx}: expected {} alphas", entries.len().saturating_sub(2))));
                    }
                    let alphas = al
                        .iter()
                        .enumerate()
                        .map(|(i, r)| hom(entries[i].deg0(), entries[i + 2].deg1(), Some(r), &ctx))
                        .collect::<Result<Vec<_>, _>>()?;
                    CochainComplex::new(entries, diffs, alphas)
                }
            }
            .map_err(|e| e.context(&ctx))?;
            ws.complexes.insert(name.clone(), c);
        }
        for (name, def) in &m.complex_morphisms {
            let ctx = format!("complex morphism {name}");
            let a = lookup(&ws.complexes, &def.source, "complex")?;
            let b = lookup(&ws.complexes, &def.target, "complex")?;
            let maps = def
                .maps
                .iter()
                .map(|d| lookup(&ws.morphisms, d, "morphism").cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let f = match &def.lambdas {
                None => ComplexMor::strict(a, b, maps),
                Some(ls) => {
                    if ls.len() != a.len().saturating_sub(1) {
                        return Err(Error::input(format!("{ctx}: expected {} lambdas", a.len().saturating_sub(1))));
                    }
                    let lambdas = ls
                        .iter()
                        .enumerate()
                        .map(|(i, r)| hom(a.entries()[i].deg0(), b.entries()[i + 1].deg1(), Some(r), &ctx))
                        .collect::<Result<Vec<_>, _>>()?;
                    ComplexMor::new(a, b, maps, lambdas)
                }
            }
            .map_err(|e| e.context(&ctx))?;
            ws.complex_morphisms.insert(name.clone(), f);
        }
        for (name, def) in &m.homotopies {
            let ctx = format!("homotopy {name}");
            let from = lookup(&ws.complex_morphisms, &def.from, "complex morphism")?;
            let to = lookup(&ws.complex_morphisms, &def.to, "complex morphism")?;
            let hmaps = def
                .hmaps
                .iter()
                .map(|d| lookup(&ws.morphisms, d, "morphism").cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let (a, b) = (from.source(), from.target());
            let taus = (0..a.len())
                .map(|i| {
                    let r = def.taus.as_ref().map(|t| t.get(i)).unwrap_or(None);
                    if def.taus.as_ref().is_some_and(|t| t.len() != a.len()) {
                        return Err(Error::input(format!("{ctx}: expected {} taus", a.len())));
                    }
                    hom(a.entries()[i].deg0(), b.entries()[i].deg1(), r, &ctx)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let h = CochainHomotopy::new(from, to, hmaps, taus).map_err(|e| e.context(&ctx))?;
            ws.homotopies.insert(name.clone(), h);
        }
        for (name, def) in &m.functors {
            let t = match def {
                FunctorSpec::Identity => AdditiveTwoFunctor::Identity,
                FunctorSpec::HomFrom { module } => AdditiveTwoFunctor::HomFrom(lookup(&ws.modules, module, "module")?.clone()),
                FunctorSpec::BaseChange { m } => AdditiveTwoFunctor::BaseChange(m.to_int()?),
            };
            ws.functors.insert(name.clone(), t);
        }
        Ok(ws)
    }

    /// Composite of named morphisms; empty gives the zero map parallel to `like`.
    fn composite(&self, names: &[String], like: Option<&OneMor>) -> Result<OneMor, Error> {
        let Some((first, rest)) = names.split_first() else {
            return like
                .map(|f| OneMor::zero(f.source(), f.target()))
                .ok_or_else(|| Error::input("empty composite"));
        };
        let mut f = lookup(&self.morphisms, first, "morphism")?.clone();
        for n in rest {
            f = OneMor::try_compose(&f, lookup(&self.morphisms, n, "morphism")?)?;
        }
        Ok(f)
    }

    pub fn two_mod(&self, name: &str) -> Result<&TwoMod, Error> {
        lookup(&self.two_mods, name, "2-module")
    }

    pub fn morphism(&self, name: &str) -> Result<&OneMor, Error> {
        lookup(&self.morphisms, name, "morphism")
    }

    pub fn two_morphism(&self, name: &str) -> Result<&TwoMor, Error> {
        lookup(&self.two_morphisms, name, "2-morphism")
    }

    pub fn complex(&self, name: &str) -> Result<&CochainComplex, Error> {
        lookup(&self.complexes, name, "complex")
    }

    pub fn homotopy(&self, name: &str) -> Result<&CochainHomotopy, Error> {
        lookup(&self.homotopies, name, "homotopy")
    }

    pub fn functor(&self, name: &str) -> Result<&AdditiveTwoFunctor, Error> {
        lookup(&self.functors, name, "functor")
    }
}
