use std::process::Command;

fn gq(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gq"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf8"),
    )
}

#[test]
fn hodge_of_the_surface() {
    let (code, out) = gq(&["hodge", "--grassmannian", "2,7", "--codim", "8"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["diamond_rows"][2], serde_json::json!([13, 98, 13]));
    assert_eq!(v["deformations"]["h1"], 56);
}

#[test]
fn quotient_by_seven() {
    let (code, out) = gq(&["quotient", "--order", "7"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["quotient"]["e_top"], 18);
    let (code, _) = gq(&[
        "quotient",
        "--grassmannian",
        "3,6",
        "--codim",
        "6",
        "--order",
        "7",
        "--h11",
        "1",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn build_exports_equations() {
    let (code, out) = gq(&["build", "--model", "Z"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v.is_object());
}

#[test]
fn dual_run_passes() {
    let (code, out) = gq(&["dual", "--format", "markdown"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("dual.annihilator"));
}

#[test]
fn bad_configuration_is_inconclusive() {
    let (code, _) = gq(&["run", "--model", "S_Z", "--free-primes", "31"]);
    assert_eq!(code, 2);
    let (code, _) = gq(&[
        "run",
        "--model",
        "Z",
        "--group",
        "F21",
        "--skip",
        "smoothness",
    ]);
    assert_eq!(code, 2);
}
