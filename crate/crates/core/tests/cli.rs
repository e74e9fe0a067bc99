use std::process::Command;

fn dlchar(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dlchar")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("dlchar-{}-{name}", std::process::id()))
}

#[test]
fn group_summary() {
    let (code, text) = dlchar(&["group", "--family", "SL", "--n", "2", "--q", "3"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("SL_2(F_3): |G| = 24, 7 classes"), "{text}");
}

#[test]
fn spec_verify_examples_exit_zero() {
    assert_eq!(dlchar(&["verify", "rel-bruhat", "--type", "A3"]).0, 0);
    assert_eq!(dlchar(&["verify", "indep-rational", "--family", "GL", "--n", "3", "--q", "2"]).0, 0);
    assert_eq!(dlchar(&["verify", "howlett-lehrer", "--family", "SL", "--n", "2", "--q", "3"]).0, 0);
}

#[test]
fn exit_codes() {
    assert_eq!(dlchar(&["verify", "no-such-suite"]).0, 2);
    assert_eq!(dlchar(&["group", "--family", "SL", "--n", "2", "--q", "6"]).0, 2);
    assert_eq!(dlchar(&["hc-ind", "--family", "GL", "--n", "3", "--q", "2", "--levi", "2,2"]).0, 2);
    assert_eq!(dlchar(&["frobnicate"]).0, 2);
    assert_eq!(dlchar(&["group", "--family", "GL", "--n", "4", "--q", "3"]).0, 3);
    // the literal convolution identity has no constant
    assert_eq!(dlchar(&["verify", "springer-convolution", "--family", "SL", "--q", "3"]).0, 1);
}

#[test]
fn reports_are_byte_stable() {
    let (a, b) = (temp_path("a.json"), temp_path("b.json"));
    for p in [&a, &b] {
        let code = dlchar(&["verify", "double-trace", "--family", "GL", "--n", "2", "--q", "3", "--out", p.to_str().unwrap()]).0;
        assert_eq!(code, 0);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let doc: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["status"], "pass");
    assert!(doc.get("seconds").is_none());
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn dl_char_and_intertwiner_documents() {
    let p = temp_path("dl.json");
    let (code, text) = dlchar(&["dl-char", "--family", "SL", "--n", "2", "--q", "3", "--torus", "2", "--theta", "0", "--out", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(text.contains("θ0: norm 2, χ0 - χ6"), "{text}");
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    assert_eq!(doc["characters"].as_array().unwrap().len(), 1);
    let _ = std::fs::remove_file(p);
    let (code, text) = dlchar(&["intertwiner", "--family", "GL", "--n", "2", "--q", "2", "--levi", "1,1"]);
    assert_eq!(code, 0);
    assert!(text.contains("3×3 matrix"), "{text}");
}
