use std::process::{Command, Output};

fn legpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_legpath")).args(args).output().expect("run legpath")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn flat_verify_passes() {
    for n in ["1", "2", "3"] {
        let o = legpath(&["flat", "verify", "--n", n]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("[PASS] chart_identity"));
    }
}

#[test]
fn rep_verify_prints_ledgers() {
    let o = legpath(&["rep", "verify", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("50 = 35+10+5"), "{out}");
    assert!(out.contains("6 = 5+1"), "{out}");
}

#[test]
fn frobenius_verdicts_and_exit_codes() {
    let o = legpath(&["frobenius", "kind = path_system; n = 2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = legpath(&["frobenius", "kind = path_system; n = 2; F[1][1][1] = x2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("d(x1) /\\ d(x2)"), "{}", stdout(&o));
    let o = legpath(&["frobenius", "kind = path_system; n = 2; F[1][1][1] = x1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let o = legpath(&["frobenius", "does-not-exist.lpg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = legpath(&["normalize-torsion", "kind = torsion; n = 2; Ta[1][2][1] = 1"]);
    assert_eq!(o.status.code(), Some(2), "asymmetric Ta must be rejected");
    assert!(String::from_utf8_lossy(&o.stderr).contains("Ta[1][2][1]"));
}

#[test]
fn osculation_pipeline() {
    let f = "x1^3 + x1*x2^2 - 2*x2^4";
    for cmd in ["nullcheck", "symdiff", "developable"] {
        let o = legpath(&[cmd, f]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
    }
    let o = legpath(&["developable", f, "--format", "structured"]);
    assert!(stdout(&o).contains("value.u = -2*x2^4 + x1^3 + x1*x2^2"), "{}", stdout(&o));
}

#[test]
fn osculate_emits_a_loadable_family() {
    let o = legpath(&["osculate", "x1^2*x2", "--at", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let quad = stdout(&o);
    assert!(quad.contains("kind = quadric_family"));
    let dir = std::env::temp_dir().join(format!("legpath-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("quad.lpg");
    std::fs::write(&path, &quad).unwrap();
    let o = legpath(&["lagrangian", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn inline_wins_over_file_with_warning() {
    let dir = std::env::temp_dir().join(format!("legpath-inline-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("x1"), "format_version = 1\nkind = function\ncoords = x1\nf = x1^5\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_legpath"))
        .current_dir(&dir)
        .args(["developable", "x1", "--format", "structured"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value.u = x1\n"), "{}", stdout(&o));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn torsion_normalization_reports_parameters() {
    let o = legpath(&["normalize-torsion", "kind = torsion; n = 2; Ta[1][1][1] = 2; Tb[1][2][1][2] = 1; Tb[2][1][1][2] = 1; Tb[1][2][2][1] = 1; Tb[2][1][2][1] = 1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("[PASS] first_normalization"));
    assert!(out.contains("[PASS] residual_p_gauge"));
    assert!(out.contains("c1[1]:"));
}

#[test]
fn lemma_audit_n4() {
    let o = legpath(&["lemma-audit", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dims: 5, 10, 14"));
}

#[test]
fn suite_is_reproducible() {
    let a = legpath(&["suite", "--criterion", "3", "--format", "structured", "--seed", "5"]);
    let b = legpath(&["suite", "--criterion", "3", "--format", "structured", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
