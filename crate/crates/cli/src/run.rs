//! Command dispatch and the output document.

use hom2::cochain::{check_homotopy, ValidationReport};
use hom2::cohomology::{cohomology, CohomologyResult};
use hom2::derived::{derived_functor, long_sequence, max_degree, Convention};
use hom2::exactness::{check_complex_exact, check_two_exact, ExactnessCertificate};
use hom2::intmod::{FpModule, Int, ModuleHom};
use hom2::oracle::{verify_universal, Instance, UniversalKind, DEFAULT_CAP};
use hom2::relkc::{relative_cokernel, relative_kernel};
use hom2::resolution::{
    build_resolution, check_injective, compare_lifts, faithful_test_family, lift_morphism, lift_morphism_random,
    validate_resolution, FreeHull, Resolution,
};
use hom2::twomod::{OneMor, PiPair, TwoMod, TwoMor};
use hom2::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::manifest::{CommandSpec, Manifest, Workspace};

pub const COMMANDS: [&str; 13] = [
    "pi",
    "relker",
    "relcoker",
    "cohomology",
    "check-exact",
    "check-homotopy",
    "resolve",
    "lift",
    "compare-lifts",
    "derive",
    "long-seq",
    "check-injective",
    "oracle-verify",
];

const DEFAULT_LENGTH: usize = 4;
const DEFAULT_DEPTH: usize = 3;
const SHOWN_FAILURES: usize = 5;

/// Command-line values that override the manifest's `[command]` table.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<i64>,
    pub length: Option<usize>,
    pub depth: Option<usize>,
    pub convention: Option<String>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: bool,
    pub document: Value,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.verdict {
            0
        } else {
            1
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Capacity(_) => 3,
        _ => 2,
    }
}

fn need<'a>(v: &'a Option<String>, what: &str, cmd: &str) -> Result<&'a str, Error> {
    v.as_deref()
        .ok_or_else(|| Error::input(format!("{cmd} needs `{what}` in [command]")))
}

pub fn run(manifest: &Manifest, command: Option<&str>, o: &Overrides) -> Result<Outcome, Error> {
    let mut p = manifest.command.clone();
    p.n = o.n.or(p.n);
    p.length = o.length.or(p.length);
    p.depth = o.depth.or(p.depth);
    p.convention = o.convention.clone().or(p.convention);
    p.cap = o.cap.or(p.cap);
    p.seed = o.seed.or(p.seed);
    let name = command
        .map(str::to_string)
        .or(p.name.clone())
        .ok_or_else(|| Error::input(format!("no command given (one of {})", COMMANDS.join(", "))))?;
    let ws = Workspace::load(manifest)?;
    let (verdict, body) = match name.as_str() {
        "pi" => pi(&ws, &p)?,
        "relker" => relker(&ws, &p, false)?,
        "relcoker" => relker(&ws, &p, true)?,
        "cohomology" => cohomology_cmd(&ws, &p)?,
        "check-exact" => check_exact(&ws, &p)?,
        "check-homotopy" => check_homotopy_cmd(&ws, &p)?,
        "resolve" => resolve(&ws, &p)?,
        "lift" => lift(&ws, &p)?,
        "compare-lifts" => compare(&ws, &p)?,
        "derive" => derive(&ws, &p)?,
        "long-seq" => long_seq(&ws, &p)?,
        "check-injective" => injective(&ws, &p)?,
        "oracle-verify" => oracle(&ws, &p)?,
        other => {
            return Err(Error::input(format!(
                "unknown command {other:?} (one of {})",
                COMMANDS.join(", ")
            )))
        }
    };
    let mut doc = Map::new();
    doc.insert("version".into(), json!(crate::manifest::VERSION));
    doc.insert("command".into(), json!(name));
    doc.insert("ring".into(), json!(manifest.ring.trim()));
    doc.insert("verdict".into(), json!(verdict));
    doc.insert("result".into(), body);
    Ok(Outcome {
        verdict,
        document: Value::Object(doc),
    })
}

/// Output text: TOML by default, JSON on request.
pub fn render(doc: &Value, as_json: bool) -> Result<String, Error> {
    if as_json {
        let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    } else {
        toml::to_string(doc).map_err(|e| Error::internal(format!("rendering TOML: {e}")))
    }
}

fn int(v: &Int) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn rows(h: &ModuleHom) -> Value {
    Value::Array(
        h.matrix()
            .to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(int).collect()))
            .collect(),
    )
}

fn module(m: &FpModule) -> Value {
    json!(m.describe())
}

fn pis(p: &PiPair) -> Value {
    json!({ "pi0": module(&p.pi0), "pi1": module(&p.pi1) })
}

fn two_mod(a: &TwoMod) -> Value {
    let p = a.pi();
    json!({
        "deg1": module(a.deg1()),
        "deg0": module(a.deg0()),
        "pi0": module(&p.pi0),
        "pi1": module(&p.pi1),
    })
}

fn one_mor(f: &OneMor) -> Value {
    json!({ "f1": rows(f.f1()), "f0": rows(f.f0()) })
}

fn report(r: &ValidationReport) -> Value {
    let v: Vec<String> = r.violations.iter().map(|v| v.to_string()).collect();
    json!({ "valid": r.is_valid(), "violations": v })
}

fn certificate(c: &ExactnessCertificate) -> Value {
    let mut m = Map::new();
    m.insert("point".into(), json!(c.point));
    m.insert("verdict".into(), json!(c.verdict));
    m.insert("evidence".into(), json!(c.to_string()));
    if let Some(x) = &c.counterexample {
        m.insert("counterexample".into(), json!(x.to_string()));
    }
    if let Some(x) = c.cross_check {
        m.insert("cross_checked".into(), json!(x));
    }
    Value::Object(m)
}

fn coh(h: &CohomologyResult) -> Value {
    json!({ "n": h.n, "pi0": module(&h.pis.pi0), "pi1": module(&h.pis.pi1) })
}

fn sequence<'a>(ws: &'a Workspace, p: &CommandSpec, cmd: &str) -> Result<(&'a OneMor, &'a TwoMor, &'a OneMor), Error> {
    Ok((
        ws.morphism(need(&p.f, "f", cmd)?)?,
        ws.two_morphism(need(&p.phi, "phi", cmd)?)?,
        ws.morphism(need(&p.g, "g", cmd)?)?,
    ))
}

fn resolve_object(a: &TwoMod, length: usize) -> Result<Resolution, Error> {
    build_resolution(a, length, &FreeHull::default())
}

type CmdResult = Result<(bool, Value), Error>;

fn pi(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let a = ws.two_mod(need(&p.object, "object", "pi")?)?;
    Ok((true, pis(&a.pi())))
}

fn relker(ws: &Workspace, p: &CommandSpec, co: bool) -> CmdResult {
    let cmd = if co { "relcoker" } else { "relker" };
    let (f, phi, g) = sequence(ws, p, cmd)?;
    let (obj, faithful) = if co {
        let q = relative_cokernel(f, g, phi)?;
        (q.q.clone(), q.p.is_essentially_surjective())
    } else {
        let k = relative_kernel(f, g, phi)?;
        (k.k.clone(), k.e.is_faithful())
    };
    let key = if co { "essentially_surjective" } else { "faithful" };
    Ok((true, json!({ "object": two_mod(&obj), key: faithful })))
}

fn cohomology_cmd(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let c = ws.complex(need(&p.complex, "complex", "cohomology")?)?;
    let degrees: Vec<isize> = match p.n {
        Some(n) => vec![n as isize],
        None => (0..=c.top_degree()).collect(),
    };
    let hs = degrees
        .iter()
        .map(|&n| cohomology(c, n).map(|h| coh(&h)))
        .collect::<Result<Vec<_>, _>>()?;
    let body = if hs.len() == 1 {
        hs.into_iter().next().expect("one degree")
    } else {
        json!({ "degrees": hs })
    };
    Ok((true, body))
}

fn check_exact(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let certs = if let Some(name) = &p.complex {
        let c = ws.complex(name)?;
        match p.n {
            Some(n) => vec![check_complex_exact(c, n as isize)?],
            None => (0..=c.top_degree())
                .map(|n| check_complex_exact(c, n))
                .collect::<Result<Vec<_>, _>>()?,
        }
    } else {
        let (f, phi, g) = sequence(ws, p, "check-exact")?;
        vec![check_two_exact(f, phi, g)?]
    };
    let verdict = certs.iter().all(|c| c.verdict);
    Ok((verdict, json!({ "points": certs.iter().map(certificate).collect::<Vec<_>>() })))
}

fn check_homotopy_cmd(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let h = ws.homotopy(need(&p.homotopy, "homotopy", "check-homotopy")?)?;
    let from = h.from().validate();
    let to = h.to().validate();
    let r = check_homotopy(h);
    let verdict = from.is_valid() && to.is_valid() && r.is_valid();
    Ok((
        verdict,
        json!({ "from": report(&from), "to": report(&to), "homotopy": report(&r) }),
    ))
}

fn resolve(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let a = ws.two_mod(need(&p.object, "object", "resolve")?)?;
    let res = resolve_object(a, p.length.unwrap_or(DEFAULT_LENGTH))?;
    let family = faithful_test_family(&ws.ring, p.cap.unwrap_or(DEFAULT_CAP))?;
    let rep = validate_resolution(&res, &family)?;
    let inj: Vec<Value> = res
        .injectives()
        .iter()
        .zip(&rep.injectivity)
        .enumerate()
        .map(|(n, (i, c))| {
            json!({
                "n": n,
                "object": two_mod(i),
                "injective": c.is_injective(),
                "extension_problems": c.cases,
            })
        })
        .collect();
    Ok((
        rep.is_valid(),
        json!({
            "length": res.length(),
            "complex": report(&rep.complex),
            "augmentation_faithful": rep.augmentation_faithful,
            "exactness": rep.exactness.iter().map(certificate).collect::<Vec<_>>(),
            "injectives": inj,
        }),
    ))
}

fn lift(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let f = ws.morphism(need(&p.morphism, "morphism", "lift")?)?;
    let n = p.length.unwrap_or(DEFAULT_LENGTH);
    let ra = resolve_object(f.source(), n)?;
    let rb = resolve_object(f.target(), n)?;
    let l = lift_morphism(f, &ra, &rb)?;
    let v = l.validate();
    let maps: Vec<Value> = l.tail()?.maps().iter().map(one_mor).collect();
    Ok((v.is_valid(), json!({ "validation": report(&v), "maps": maps })))
}

fn compare(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let f = ws.morphism(need(&p.morphism, "morphism", "compare-lifts")?)?;
    let n = p.length.unwrap_or(DEFAULT_LENGTH);
    let ra = resolve_object(f.source(), n)?;
    let rb = resolve_object(f.target(), n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed.unwrap_or(0));
    let l1 = lift_morphism(f, &ra, &rb)?;
    let l2 = lift_morphism_random(f, &ra, &rb, &mut rng)?;
    let h = compare_lifts(&l1, &l2)?;
    let v = h.validate();
    Ok((
        v.is_valid() && l1.validate().is_valid() && l2.validate().is_valid(),
        json!({ "valid_below": h.valid_below, "homotopy": report(&v) }),
    ))
}

fn convention(p: &CommandSpec) -> Result<Convention, Error> {
    p.convention.as_deref().map_or(Ok(Convention::Plain), str::parse)
}

fn derive(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let t = ws.functor(need(&p.functor, "functor", "derive")?)?;
    let a = ws.two_mod(need(&p.object, "object", "derive")?)?;
    let conv = convention(p)?;
    let degrees: Vec<usize> = match p.n {
        Some(n) if n < 0 => return Err(Error::input("degree must be non-negative")),
        Some(n) => vec![n as usize],
        None => (0..=p.depth.unwrap_or(DEFAULT_DEPTH)).collect(),
    };
    let top = *degrees.iter().max().expect("nonempty");
    let length = p.length.unwrap_or(top + 2).max(top + 2);
    let res = resolve_object(a, length)?;
    debug_assert!(max_degree(res.length()).is_some_and(|m| m >= top));
    let values = degrees
        .iter()
        .map(|&i| {
            derived_functor(t, &res, i, conv).map(|d| json!({ "i": i, "pi0": module(&d.pis().pi0), "pi1": module(&d.pis().pi1) }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let conv_name = match conv {
        Convention::Plain => "plain",
        Convention::Augmented => "augmented",
    };
    Ok((
        true,
        json!({ "functor": t.name(), "convention": conv_name, "resolution_length": length, "degrees": values }),
    ))
}

fn long_seq(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let t = ws.functor(need(&p.functor, "functor", "long-seq")?)?;
    let (f, phi, g) = sequence(ws, p, "long-seq")?;
    let depth = p.depth.unwrap_or(DEFAULT_DEPTH);
    let length = p.length.unwrap_or(depth + 3).max(depth + 3);
    let ra = resolve_object(f.source(), length)?;
    let rc = resolve_object(g.target(), length)?;
    let ls = long_sequence(t, f, phi, g, &ra, &rc, depth)?;
    let terms: Vec<Value> = ls
        .terms
        .iter()
        .map(|x| {
            let p = x.value.pi();
            json!({ "label": x.label, "pi0": module(&p.pi0), "pi1": module(&p.pi1) })
        })
        .collect();
    let pi0_ranks: Vec<Value> = ls
        .maps
        .iter()
        .map(|m| {
            let (img, _) = m.pi0_map().image();
            json!(img.describe())
        })
        .collect();
    let verdict = ls.is_exact() && ls.products_preserved && ls.trivializations.iter().all(|x| x.is_valid());
    Ok((
        verdict,
        json!({
            "functor": t.name(),
            "depth": depth,
            "products_preserved": ls.products_preserved,
            "terms": terms,
            "pi0_images": pi0_ranks,
            "certificates": ls.certificates.iter().map(certificate).collect::<Vec<_>>(),
        }),
    ))
}

fn injective(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let i = ws.two_mod(need(&p.object, "object", "check-injective")?)?;
    let family = faithful_test_family(&ws.ring, p.cap.unwrap_or(DEFAULT_CAP))?;
    let c = check_injective(i, &family)?;
    Ok((
        c.is_injective(),
        json!({
            "cases": c.cases,
            "solved": c.solved,
            "failure_count": c.failures.len(),
            "failures": c.failures.iter().take(SHOWN_FAILURES).collect::<Vec<_>>(),
        }),
    ))
}

fn oracle(ws: &Workspace, p: &CommandSpec) -> CmdResult {
    let kind: UniversalKind = need(&p.kind, "kind", "oracle-verify")?.parse()?;
    let instance = match kind {
        UniversalKind::RelKernel | UniversalKind::RelCokernel => {
            let (f, phi, g) = sequence(ws, p, "oracle-verify")?;
            Instance::Sequence {
                f: f.clone(),
                g: g.clone(),
                phi: phi.clone(),
            }
        }
        UniversalKind::Biproduct => {
            let names = p
                .objects
                .as_ref()
                .filter(|o| o.len() == 2)
                .ok_or_else(|| Error::input("biproduct needs `objects = [A, B]`"))?;
            Instance::Pair(ws.two_mod(&names[0])?.clone(), ws.two_mod(&names[1])?.clone())
        }
        UniversalKind::CohomologyDescription => {
            let c = ws.complex(need(&p.complex, "complex", "oracle-verify")?)?;
            let n = p.n.ok_or_else(|| Error::input("cohomology_description needs `n`"))?;
            Instance::Complex {
                complex: c.clone(),
                n: n as isize,
            }
        }
    };
    let r = verify_universal(kind, &instance, p.cap.unwrap_or(DEFAULT_CAP))?;
    Ok((
        r.is_ok(),
        json!({ "kind": kind.to_string(), "checks": r.checks, "mismatches": r.mismatches }),
    ))
}
