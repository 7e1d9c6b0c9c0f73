use std::process::{Command, Output};

use hurwitz_cycles::certify::Certificate;
use hurwitz_cycles::covers::GraphCover;
use hurwitz_cycles::strata::equal12_graph;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-cycles"))
        .args(args)
        .env_remove("HURWITZ_CYCLES_BOUNDS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn tau_and_coefficients() {
    let o = bin(&["tau", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-24\n");
    assert_eq!(stdout(&bin(&["ad", "2"])), "1\n");
    assert_eq!(bin(&["tau", "nope"]).status.code(), Some(2));
}

#[test]
fn certify_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let o = bin(&["certify", "--g", "14", "--h", "1", "--d", "3", "--m2", "2", "--emit", p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin(&["verify", p]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "valid\n".to_string()));

    let mut cert = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert.base.m2 += 1;
    std::fs::write(&path, cert.to_json()).unwrap();
    let o = bin(&["verify", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(bin(&["verify", p]).status.code(), Some(2));
}

#[test]
fn certify_refusal_names_the_failed_bound() {
    let o = bin(&["certify", "--g", "3", "--h", "2", "--d", "2", "--m2", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("g >= 2h"), "{err}");
}

#[test]
fn cover_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cover.json");
    let p = path.to_str().unwrap();
    std::fs::write(&path, GraphCover::identity(&equal12_graph(2, 10)).to_json()).unwrap();
    assert_eq!(stdout(&bin(&["validate-cover", p])), "valid\n");
    let o = bin(&["cover-dim", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim().parse::<u64>().is_ok());
    let o = bin(&["cover-mult", p, "--a-edges", "0"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "1\n".to_string()));
    assert_eq!(bin(&["cover-mult", p, "--a-edges", "7"]).status.code(), Some(2));
}

#[test]
fn classify_and_bounds() {
    let o = bin(&["classify-equal12", "--g", "2", "--m2", "10", "--d", "3", "--candidates-only"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);

    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz-cycles"))
        .args(["classify-equal12", "--g", "2", "--m2", "10", "--d", "3"])
        .env("HURWITZ_CYCLES_BOUNDS", "strata-degree=2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = bin(&["classify-equal12", "--g", "2", "--m2", "10", "--d", "3", "--max-degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn hurwitz_and_lattices() {
    let o = bin(&["hurwitz", "--degree", "2", "--target-genus", "1", "--connected"]);
    assert_eq!(stdout(&o), "weighted: 3/2\nclasses: 3\n");
    assert_eq!(stdout(&bin(&["sublattices", "3"])).lines().count(), 4);
    assert_eq!(stdout(&bin(&["--threads", "2", "scan-ad", "50"])), "");
}
