use std::path::PathBuf;
use std::process::{Command, Output};

use hom2_cli::Manifest;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hom2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hom2"))
        .args(args)
        .output()
        .expect("run hom2")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = hom2(&a);
    let code = out.status.code().expect("exit code");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, doc)
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn pi_of_times_two_over_the_integers() {
    let (code, doc) = json(&[&path("pi_times_two.toml")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["pi0"], "Z/2");
    assert_eq!(doc["result"]["pi1"], "0");
    let text = String::from_utf8(hom2(&[&path("pi_times_two.toml")]).stdout).unwrap();
    assert!(text.contains("pi0 = \"Z/2\""), "{text}");
}

#[test]
fn cohomology_of_the_discrete_complex() {
    let (code, doc) = json(&[&path("discrete_times_two.toml"), "--n", "1"]);
    assert_eq!(code, 0);
    // ker 2 = im 2 in Z/4, so no objects survive; the automorphisms are Z/4 / 2
    assert_eq!(doc["result"]["pi0"], "0");
    assert_eq!(doc["result"]["pi1"], "Z/2");
    let (_, all) = json(&[&path("discrete_times_two.toml")]);
    assert_eq!(all["result"]["degrees"].as_array().unwrap().len(), 3);
}

#[test]
fn lonely_object_is_not_exact() {
    let (code, doc) = json(&[&path("lonely.toml")]);
    assert_eq!(code, 1);
    assert_eq!(doc["verdict"], false);
    assert!(doc["result"]["points"][0]["counterexample"].is_string());
}

#[test]
fn input_and_capacity_errors() {
    let dir = std::env::temp_dir().join(format!("hom2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "version = \"v1\"\nring = \"Z/4\"\n[two_mods]\nA = { discrete = \"missing\" }\n").unwrap();
    assert_eq!(hom2(&[bad.to_str().unwrap(), "pi"]).status.code(), Some(2));
    let old = dir.join("old.toml");
    std::fs::write(&old, "version = \"v0\"\nring = \"Z/4\"\n").unwrap();
    assert_eq!(hom2(&[old.to_str().unwrap(), "pi"]).status.code(), Some(2));
    assert_eq!(hom2(&[&path("extension.toml"), "no-such-command"]).status.code(), Some(2));
    assert_eq!(hom2(&[&path("oracle_kernel.toml"), "--cap", "1"]).status.code(), Some(3));
    assert_eq!(hom2(&[&path("pi_times_two.toml"), "resolve"]).status.code(), Some(2));
}

#[test]
fn oracle_verify_passes() {
    let (code, doc) = json(&[&path("oracle_kernel.toml")]);
    assert_eq!(code, 0);
    assert!(doc["result"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn extension_commands() {
    let m = path("extension.toml");
    let (code, doc) = json(&[&m, "long-seq"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["certificates"].as_array().unwrap().len(), 12);
    let (code, doc) = json(&[&m, "derive", "--depth", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["degrees"][2]["pi0"], "Z/2");
    let (_, aug) = json(&[&m, "derive", "--n", "1", "--convention", "augmented"]);
    assert_eq!(aug["result"]["degrees"][0]["pi1"], "0");
    for cmd in ["resolve", "lift", "compare-lifts", "relker", "relcoker", "check-exact"] {
        let (code, _) = json(&[&m, cmd]);
        assert_eq!(code, 0, "{cmd}");
    }
    // a discrete object is not injective
    let (code, doc) = json(&[&m, "check-injective"]);
    assert_eq!(code, 1);
    assert!(doc["result"]["failure_count"].as_u64().unwrap() > 0);
}

#[test]
fn output_is_deterministic() {
    let m = path("extension.toml");
    let a = hom2(&[&m, "compare-lifts", "--seed", "7"]).stdout;
    let b = hom2(&[&m, "compare-lifts", "--seed", "7"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn canonical_manifests_round_trip() {
    for name in ["pi_times_two.toml", "discrete_times_two.toml", "lonely.toml", "extension.toml", "oracle_kernel.toml"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let canon = Manifest::parse(&text).unwrap().to_canonical_string().unwrap();
        let again = Manifest::parse(&canon).unwrap().to_canonical_string().unwrap();
        assert_eq!(canon, again, "{name}");
        let out = hom2(&[&path(name), "fmt"]);
        assert_eq!(String::from_utf8(out.stdout).unwrap(), canon);
    }
}

#[test]
fn big_integers_survive() {
    let text = "version = \"v1\"\nring = \"Z\"\n[modules]\nM = { orders = [\"123456789012345678901234567890\"] }\n";
    let canon = Manifest::parse(text).unwrap().to_canonical_string().unwrap();
    assert!(canon.contains("\"123456789012345678901234567890\""));
    let small = Manifest::parse("version = \"v1\"\nring = \"Z\"\n[modules]\nM = { orders = [\"12\"] }\n").unwrap();
    assert!(small.to_canonical_string().unwrap().contains("orders = [12]"));
}

#[test]
fn homotopies_are_checked() {
    let m = path("discrete_times_two.toml");
    let ok = hom2(&[&m, "check-homotopy"]);
    assert_eq!(ok.status.code(), Some(2), "no homotopy named");
    let dir = std::env::temp_dir().join(format!("hom2-cli-h-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(data("discrete_times_two.toml")).unwrap();
    for (name, code) in [("trivial", 0), ("wrong", 1)] {
        let f = dir.join(format!("{name}.toml"));
        std::fs::write(&f, text.replace("complex = \"C\"", &format!("complex = \"C\"\nhomotopy = \"{name}\""))).unwrap();
        assert_eq!(hom2(&[f.to_str().unwrap(), "check-homotopy"]).status.code(), Some(code), "{name}");
    }
}
