use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sidlab-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn sidlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidlab")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, file: &str, text: &str) -> String {
    let p = dir.join(file);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn construct_certify_verify() {
    let dir = workdir("roundtrip");
    let g = dir.join("inc.json").to_string_lossy().into_owned();
    let c = dir.join("cert.json").to_string_lossy().into_owned();
    assert_eq!(code(&sidlab(&["construct", "incidence", "--n", "4", "--uniformities", "2", "-o", &g])), 0);
    assert_eq!(code(&sidlab(&["certify", &g, "--pool", "reflection", "-o", &c])), 0);
    let out = sidlab(&["verify", &g, &c]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"valid\": true"));

    let cert = fs::read_to_string(&c).unwrap();
    let broken = cert.replacen("\"trajectory\"", "\"trajectory_\"", 1);
    let b = write(&dir, "broken.json", &broken);
    assert_eq!(code(&sidlab(&["verify", &g, &b])), 1);
}

#[test]
fn certify_outcomes() {
    let dir = workdir("certify");
    let edge = write(&dir, "edge.json", r#"{"v1":["x"],"v2":["y"],"edges":[["x","y"]]}"#);
    assert_eq!(code(&sidlab(&["certify", &edge, "--mode", "edge"])), 0);
    let rigid = write(&dir, "path.json", r#"{"v1":["x","z"],"v2":["y","w"],"edges":[["x","y"],["z","y"],["z","w"]]}"#);
    let out = sidlab(&["certify", &rigid]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("explored"));
}

#[test]
fn testers_exit_codes_and_determinism() {
    let dir = workdir("test");
    let c4 = dir.join("c4.json").to_string_lossy().into_owned();
    assert_eq!(code(&sidlab(&["construct", "cycle4", "-o", &c4])), 0);
    let args = ["test", "sidorenko", c4.as_str(), "--trials", "50", "--seed", "7"];
    let (a, b) = (sidlab(&args), sidlab(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let lone = write(&dir, "lone.json", r#"{"v1":["x","z"],"v2":["y"],"edges":[["x","y"]]}"#);
    assert_eq!(code(&sidlab(&["test", "strong-sidorenko", &lone, "--trials", "50"])), 3);
    let empty = write(&dir, "empty.json", r#"{"v1":["x"],"v2":["y"],"edges":[]}"#);
    assert_eq!(code(&sidlab(&["test", "strong-sidorenko", &empty])), 4);
    assert_eq!(code(&sidlab(&["test", "jensen", "--n", "3", "--trials", "20"])), 0);
    assert_eq!(code(&sidlab(&["test", "no-such-property", &c4])), 1);
    assert_eq!(code(&sidlab(&["test", "sidorenko"])), 1);
}

#[test]
fn checkers() {
    let dir = workdir("check");
    assert_eq!(code(&sidlab(&["check", "largeright", "--v1", "4", "--profile", "2:6,3:4"])), 0);
    assert_eq!(code(&sidlab(&["check", "conlonlee", "--v1", "4", "--profile", "2:7"])), 3);

    let b2 = dir.join("b2.json").to_string_lossy().into_owned();
    assert_eq!(code(&sidlab(&["construct", "book", "--k", "2", "-o", &b2])), 0);
    let good = write(&dir, "good.json", r#"{"bags":[["p","q","a1","b1"],["p","q","a2","b2"]],"tree_edges":[[0,1]]}"#);
    let out = sidlab(&["check", "rtd", &b2, &good]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"valid\": true"));
    let bad = write(&dir, "bad.json", r#"{"bags":[["p","q","a1","b1"],["p","q","a2"]],"tree_edges":[[0,1]]}"#);
    assert_eq!(code(&sidlab(&["check", "rtd", &b2, &bad])), 3);

    let h = write(&dir, "h.json", r#"{"v1":["x"],"v2":["y"],"edges":[["x","y"]]}"#);
    assert_eq!(code(&sidlab(&["check", "orbits", &b2, &h])), 4);
}
