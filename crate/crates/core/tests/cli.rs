//! The command-line front end, driven through `netcontain::cli::run`.

use netcontain::cli::run;
use serde_json::Value;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("netcontain").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.json");
    let (code, out, _) = invoke(&["construct", "--base", "2", "-m", "2", "-d", "2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with('\n'));
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = invoke(&["verify", "--input", path.to_str().unwrap(), "--base", "2", "-m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"is_net\":true}\n");
    let (code, out, _) = invoke(&["verify", "--input", path.to_str().unwrap(), "-m", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["is_net"], false);
    assert_eq!(json(&out)["violation"]["kind"], "size");
}

#[test]
fn impossible_net_is_a_domain_error() {
    let (code, out, err) = invoke(&["construct", "--base", "2", "-m", "2", "-d", "4"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("cannot exist if m≥2 and d≥b+2"), "{err}");
}

#[test]
fn bounds_output() {
    let (code, out, _) = invoke(&["bounds", "--base", "2", "-d", "2", "-m", "1", "-N", "4"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["pz_lower"].as_f64().unwrap() - 0.601093).abs() < 1e-6);
    assert_eq!(v["markov_upper"].as_f64().unwrap(), 0.859375);
    assert_eq!(v["exact"].as_f64().unwrap(), 0.765625);
    assert!(v["mean_count"]["log10"].is_f64());
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = invoke(&["construct", "--bogus"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(invoke(&["frobnicate"]).0, 2);
    assert_eq!(invoke(&["simulate", "-b", "2", "-m", "1", "-d", "2", "-N", "4", "--trials", "10"]).0, 2);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("sweep"));
}

#[test]
fn stochastic_commands_are_reproducible() {
    for args in [
        &["sample", "-b", "2", "-m", "2", "-d", "3", "-N", "20", "--seed", "9"][..],
        &["simulate", "-b", "2", "-m", "1", "-d", "2", "-N", "4", "--trials", "2000", "--seed", "9"],
        &["sweep", "-b", "2", "-m", "1", "-d", "2", "-N", "2,4,8", "--trials", "500", "--seed", "9", "--format", "csv"],
    ] {
        let first = invoke(args);
        assert_eq!(first.0, 0, "{args:?}: {}", first.2);
        assert_eq!(first, invoke(args));
        let mut threaded = args.to_vec();
        threaded.extend(["--threads", "3"]);
        assert_eq!(first.1, invoke(&threaded).1);
    }
}

#[test]
fn sweep_csv_header() {
    let (code, out, _) = invoke(&["sweep", "-b", "2", "-m", "1", "-d", "2", "-N", "2,4", "--trials", "100", "--seed", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("b,m,d,N,trials,successes,p_hat,ci_low,ci_high,pz_lower,markov_upper,exact,seed")
    );
    assert_eq!(lines.count(), 2);
    let (_, empty, _) = invoke(&["sweep", "-b", "2", "-m", "1", "-d", "2", "--trials", "100", "--seed", "1", "--format", "csv"]);
    assert_eq!(empty.lines().count(), 1);
    let (code, _, _) = invoke(&["sweep", "-b", "2", "-m", "1", "-d", "2", "-N", "4,2", "--trials", "10", "--seed", "1"]);
    assert_eq!(code, 1);
}

#[test]
fn patterns_and_thresholds() {
    let (_, out, _) = invoke(&["patterns", "count", "-b", "2", "-m", "2", "-d", "2"]);
    let v = json(&out);
    assert_eq!(v["exact_d2"]["exact"], "16");
    assert_eq!(v["enumerated"], 16);
    let (_, out, _) = invoke(&["patterns", "enumerate", "-b", "2", "-m", "1", "-d", "2"]);
    assert_eq!(out, "[{\"b\":2,\"m\":1,\"d\":2,\"cells\":[[0,0],[1,1]]},{\"b\":2,\"m\":1,\"d\":2,\"cells\":[[0,1],[1,0]]}]\n");
    let patterns: Vec<netcontain::patterns::Pattern> = serde_json::from_str(&out).unwrap();
    assert_eq!(patterns.len(), 2);
    let (_, out, _) = invoke(&["patterns", "census", "-b", "2", "-m", "1", "-d", "3"]);
    assert_eq!(json(&out)["n_ell"][0], 6);
    let (code, _, _) = invoke(&["patterns", "enumerate", "-b", "2", "-m", "5", "-d", "2"]);
    assert_eq!(code, 1);
    let (_, out, _) = invoke(&["thresholds", "-b", "2", "-m", "2", "-d", "2", "--eps", "0.1"]);
    let v = json(&out);
    assert_eq!(v["sufficient_N"], 25);
    assert!((v["necessary_N"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn find_and_discrepancy_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.json");
    std::fs::write(&path, r#"{"d":2,"points":[[0.9,0.9],[0.1,0.1],[0.6,0.2]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = invoke(&["find", "--input", p, "-b", "2", "-m", "1", "--strategy", "backtrack"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{\"found\":true,\"pattern\":[[0,0],[1,1]],\"point_indices\":[1,0]}\n");
    let (code, out, _) = invoke(&["discrepancy", "--input", p]);
    assert_eq!(code, 0);
    assert!(json(&out)["star_discrepancy"].as_f64().unwrap() > 0.0);
    let out_path = dir.path().join("found.json");
    let (code, stdout, _) = invoke(&["find", "--input", p, "-b", "2", "-m", "2", "--out", out_path.to_str().unwrap()]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(out_path).unwrap(), "{\"found\":false,\"pattern\":[],\"point_indices\":[]}\n");
    assert_eq!(invoke(&["discrepancy", "--input", "/nonexistent.json"]).0, 1);
}
