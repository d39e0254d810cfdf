use std::path::PathBuf;
use std::process::Command;

/// `cargo test` builds every example next to the test binaries.
fn example(name: &str) -> String {
    let exe = std::env::current_exe().unwrap();
    let dir: PathBuf = exe.parent().and_then(|d| d.parent()).unwrap().join("examples");
    let out = Command::new(dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX)))
        .output()
        .unwrap_or_else(|e| panic!("cannot run example {name}: {e}"));
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(out.status.success(), "{name} failed:\n{stdout}\n{}", String::from_utf8_lossy(&out.stderr));
    stdout
}

#[test]
fn exact_arithmetic() {
    let out = example("exact_arithmetic");
    assert!(out.contains("(x^2 - 1) / (x - 1) = x + 1"), "{out}");
    assert!(out.contains("equals the series to order 24: true"), "{out}");
}

#[test]
fn symbolic_expressions() {
    let out = example("symbolic_expressions");
    assert!(out.contains("f(u, v) f(v, u) = 1.000000000000+0.000000000000i"), "{out}");
}

#[test]
fn qalg_roundtrip() {
    let out = example("qalg_roundtrip");
    assert!(out.contains("round trip preserves the document: true"), "{out}");
    assert!(out.contains("random spec survives printing: true"), "{out}");
    assert_eq!(out.matches(": pass [").count(), 3, "{out}");
}

#[test]
fn fock_space() {
    let out = example("fock_space");
    assert!(out.contains("zero-mode reordering scalar: z^(2)"), "{out}");
}

#[test]
fn discrete_ope() {
    let out = example("discrete_ope");
    assert!(out.contains("exchange relations holding: 2/9"), "{out}");
    assert!(out.contains("exchange relations holding: 9/9"), "{out}");
}

#[test]
fn continuum_exchange() {
    let out = example("continuum_exchange");
    assert_eq!(out.matches(": pass max error").count(), 18, "{out}");
    assert!(!out.contains("FAIL"), "{out}");
}

#[test]
fn hopf_family() {
    let out = example("hopf_family");
    let (zero, nonzero) = out.split_once("levels [0,1,2,0,1]").unwrap();
    assert!(!zero.contains("FAIL"), "{out}");
    assert!(nonzero.contains("counit+: pass"), "{out}");
}

#[test]
fn verify_report() {
    let out = example("verify_report");
    assert!(out.contains("## discrete-exact") && out.contains("## param-maps"), "{out}");
    assert!(out.contains("exit code for this run: 0"), "{out}");
}
