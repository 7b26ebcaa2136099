mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::EQ;

fn orbi(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbi"))
        .args(args)
        .current_dir(dir)
        .env("ORBI_COLOR", "never")
        .output()
        .unwrap()
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("orbi-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    fs::write(d.join("eq.orbi"), EQ).unwrap();
    d
}

fn text(b: &[u8]) -> String {
    String::from_utf8(b.to_vec()).unwrap()
}

#[test]
fn check_corpus() {
    let d = scratch("check");
    let o = orbi(&["check", "eq.orbi"], &d);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty() && o.stderr.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    let d = scratch("usage");
    assert_eq!(orbi(&["check", "/nonexistent.orbi"], &d).status.code(), Some(2));
    assert_eq!(orbi(&["translate", "eq.orbi"], &d).status.code(), Some(2));
    assert_eq!(orbi(&["translate", "--target", "coq", "eq.orbi"], &d).status.code(), Some(2));
    assert_eq!(orbi(&["check"], &d).status.code(), Some(2));
    assert_eq!(orbi(&["frobnicate", "eq.orbi"], &d).status.code(), Some(2));
    assert_eq!(orbi(&["translate", "-t", "ab", "--out-dir", "missing", "eq.orbi"], &d).status.code(), Some(2));
    assert_eq!(orbi(&["--help"], &d).status.code(), Some(0));
}

#[test]
fn translate_writes_named_outputs() {
    let d = scratch("translate");
    for t in ["ab", "hy", "bel", "tw"] {
        let o = orbi(&["translate", "--target", t, "eq.orbi"], &d);
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
        let out = fs::read_to_string(d.join(format!("eq.{t}.out"))).unwrap();
        assert!(out.ends_with('\n') && !out.contains('\r'));
    }
    let ab = fs::read_to_string(d.join("eq.ab.out")).unwrap();
    assert!(ab.contains("deq M M :- is_tm M.\n"));
    fs::create_dir(d.join("out")).unwrap();
    assert_eq!(orbi(&["translate", "-t", "ab", "-o", "out", "eq.orbi"], &d).status.code(), Some(0));
    assert_eq!(fs::read_to_string(d.join("out/eq.ab.out")).unwrap(), ab);
    let leftovers: Vec<_> = fs::read_dir(&d).unwrap().filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp")).collect();
    assert!(leftovers.is_empty());
}

#[test]
fn errors_exit_1_with_located_lines() {
    let d = scratch("errors");
    fs::write(d.join("bad.orbi"), EQ.replace("de_s: deq N M", "de_s: deq N lam")).unwrap();
    let o = orbi(&["check", "bad.orbi"], &d);
    assert_eq!(o.status.code(), Some(1));
    let err = text(&o.stderr);
    assert!(err.starts_with("bad.orbi:16:1: [E-TYPE] "), "{err}");
    let o = orbi(&["translate", "-t", "ab", "bad.orbi"], &d);
    assert_eq!(o.status.code(), Some(1));
    assert!(!d.join("bad.ab.out").exists());
}

#[test]
fn json_records() {
    let d = scratch("json");
    fs::write(d.join("bad.orbi"), EQ.replace("de_s: deq N M", "de_s: deq N lam")).unwrap();
    let o = orbi(&["check", "--json", "bad.orbi", "eq.orbi"], &d);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<serde_json::Value> = text(&o.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["file"], "bad.orbi");
    assert_eq!(lines[0]["code"], "E-TYPE");
    assert_eq!(lines[0]["severity"], "error");
    assert_eq!(lines[0]["span"]["line"], 16);
}

#[test]
fn lint_warnings() {
    let d = scratch("lint");
    fs::write(d.join("w.orbi"), EQ.replace("de_r: deq M M.", "de_r: ({x:tm} deq M M) -> deq M M.")).unwrap();
    let o = orbi(&["lint", "w.orbi"], &d);
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o.stderr).contains("[L3]"));
    assert_eq!(orbi(&["lint", "-W", "w.orbi"], &d).status.code(), Some(1));
    assert_eq!(orbi(&["lint", "-W", "eq.orbi"], &d).status.code(), Some(0));
}

#[test]
fn fmt_is_a_fixpoint() {
    let d = scratch("fmt");
    let messy = EQ.replace("app: tm -> tm -> tm.", "app :   tm->tm ->  tm .").replace("de_r: deq M M.", "de_r: (deq M M).");
    fs::write(d.join("m.orbi"), &messy).unwrap();
    let once = text(&orbi(&["fmt", "m.orbi"], &d).stdout);
    assert_eq!(once, EQ);
    assert_eq!(orbi(&["fmt", "--in-place", "m.orbi"], &d).status.code(), Some(0));
    assert_eq!(fs::read_to_string(d.join("m.orbi")).unwrap(), once);
    assert_eq!(text(&orbi(&["fmt", "m.orbi"], &d).stdout), once);
}

#[test]
fn color_follows_env() {
    let d = scratch("color");
    fs::write(d.join("bad.orbi"), EQ.replace("de_s: deq N M", "de_s: deq N lam")).unwrap();
    let run = |mode: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_orbi"))
            .args(["check", "bad.orbi"])
            .current_dir(&d)
            .env("ORBI_COLOR", mode)
            .output()
            .unwrap();
        text(&o.stderr)
    };
    assert!(run("always").contains("\x1b[31m[E-TYPE]\x1b[0m"));
    assert!(!run("never").contains('\x1b'));
    assert!(!run("auto").contains('\x1b'));
}

#[test]
fn many_files_report_in_argument_order() {
    let d = scratch("many");
    let names: Vec<String> = (0..8).map(|i| format!("b{i}.orbi")).collect();
    for n in &names {
        fs::write(d.join(n), EQ.replace("de_s: deq N M", "de_s: deq N lam")).unwrap();
    }
    let mut args = vec!["check"];
    args.extend(names.iter().map(String::as_str));
    let first = orbi(&args, &d);
    let files: Vec<String> = text(&first.stderr).lines().map(|l| l.split(':').next().unwrap().to_string()).collect();
    assert_eq!(files, names);
    assert_eq!(orbi(&args, &d).stderr, first.stderr);
}
