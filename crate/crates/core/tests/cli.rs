use stdist::catalog::load_catalog;
use stdist::cli::main_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stdist").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn value<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    out.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

#[test]
fn decide_split_orthogonal() {
    let (code, out, _) = run(&["decide", "PGL3/PO3"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "quasi_split"), Some("true"));
    assert_eq!(value(&out, "st_chi0"), Some("true"));
    assert_eq!(value(&out, "dual"), Some("true"));
}

#[test]
fn decide_odd_levi_exception() {
    let (code, out, _) = run(&["decide", "PGL5/P(GL2xGL3)"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "quasi_split"), Some("true"));
    assert_eq!(value(&out, "st_chi0"), Some("false"));
    assert_eq!(value(&out, "dual"), Some("false"));
    assert_eq!(value(&out, "jordan_partition[A4]"), Some("4,1"));
}

#[test]
fn decide_with_character() {
    let (_, out, _) = run(&["decide", "PGL2/N", "--character", "chi0"]);
    assert_eq!(value(&out, "st_chi"), Some("true"));
    let (_, out, _) = run(&["decide", "PGL2/N", "--character", "0"]);
    assert_eq!(value(&out, "st_chi"), Some("false"));
    let (_, out, _) = run(&["decide", "PGL2/T", "--character", "1/2"]);
    assert_eq!(value(&out, "st_chi"), Some("true"));
    let (code, _, err) = run(&["decide", "PGL2/T", "--character", "1/3"]);
    assert_eq!(code, 2);
    assert!(err.contains("1/3"));
}

#[test]
fn rational_harmonic_dimension() {
    let (code, out, _) = run(&["harmonic", "SL2/Gm", "--mode", "rational"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "dim"), Some("3"));
    assert_eq!(out.lines().filter(|l| l.starts_with("basis[")).count(), 3);
}

#[test]
fn support_output() {
    let (code, out, _) = run(&["support", "PGL3/PO3"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "S"), Some("v4"));
    assert_eq!(value(&out, "s(v1)"), Some("1*v4"));
    assert_eq!(value(&out, "s(v2)"), Some("-1*v4"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["harmonic"]).0, 1);
    assert_eq!(run(&["export", "PGL3/PO3", "--format", "svg"]).0, 1);
    assert_eq!(run(&["decide", "no/such"]).0, 2);
    assert_eq!(run(&["harmonic", "PGL3/PO3", "--mode", "rational"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, _, err) = run(&["verify-all"]);
    assert_eq!(code, 3);
    assert!(err.contains("criteria failed"));
}

#[test]
fn verify_all_is_deterministic() {
    let a = run(&["verify-all"]);
    let b = run(&["verify-all"]);
    assert_eq!(a, b);
    assert_eq!(a.1.lines().count(), 9);
}

#[test]
fn json_round_trips() {
    let (code, out, _) = run(&["catalog", "list", "--json"]);
    assert_eq!(code, 0);
    let entries = load_catalog(&out).unwrap();
    assert_eq!(entries.len(), 13);
    for name in ["PSp4/PGL2/mirror", "PGL2/T x PGL3/PO3", "SL2/Gm"] {
        let (code, out, _) = run(&["export", name, "--format", "json"]);
        assert_eq!(code, 0);
        let one = load_catalog(&out).unwrap();
        assert_eq!(one[0].name, name);
    }
}

#[test]
fn alternative_catalog_file() {
    let (_, out, _) = run(&["export", "PGL3/PO3", "--format", "json"]);
    let dir = std::env::temp_dir().join(format!("stdist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("one.json");
    std::fs::write(&path, out).unwrap();
    let (code, list, _) = run(&["--catalog", path.to_str().unwrap(), "catalog", "list"]);
    assert_eq!(code, 0);
    assert_eq!(list.lines().count(), 1);
    std::fs::write(&path, "{").unwrap();
    assert_eq!(run(&["--catalog", path.to_str().unwrap(), "catalog", "list"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dot_export() {
    let (code, out, _) = run(&["export", "PGL3/PGL2", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("graph "));
    assert!(out.contains("\"v5\" -- \"v5\""));
}

#[test]
fn shapes() {
    let (code, out, _) = run(&["shape", "rectangle", "--cols", "3"]);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "vertices"), Some("6"));
    let (code, out, _) = run(&["shape", "box", "--cols", "2", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(run(&["shape", "rectangle", "--rows", "3", "--cols", "2"]).0, 2);
}
