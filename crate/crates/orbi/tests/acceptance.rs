//! Acceptance criteria. Runs without the libtest harness and prints one line per criterion.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use orbi::check::{check_source, Checked};
use orbi::diag::Code;
use orbi::lf::{infer_type, normalize, reconstruct_implicits, tp_equal, TypingCtx};
use orbi::lint::lint;
use orbi::parser::{parse_spec, parse_term};
use orbi::syntax::subst::free_names;
use orbi::syntax::{Decl, Pretty, SystemId, Term, Tp};
use orbi::translate::{render_clause_ab, translate_rule, translate_spec, Clause, Goal, Names};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn corpus_check() -> Outcome {
    let start = Instant::now();
    let checked = check_source(EQ).map_err(|e| format!("{e:?}"))?;
    let warnings = lint(&checked);
    let elapsed = start.elapsed();
    let spec = &checked.spec;
    ensure!(warnings.is_empty(), "lint: {warnings:?}");
    ensure!(spec.syntax_decls.len() == 3, "syntax decls {}", spec.syntax_decls.len());
    ensure!(spec.judgment_decls.len() == 2, "judgments {}", spec.judgment_decls.len());
    ensure!(spec.rules.len() == 7, "rules {}", spec.rules.len());
    ensure!(spec.schemas.len() == 4, "schemas {}", spec.schemas.len());
    let rels: Vec<&str> = spec.definitions.iter().map(|d| d.name.as_str()).collect();
    ensure!(rels == ["Rxa", "Rda"], "relations {rels:?}");
    let thms: Vec<&str> = spec.theorems.iter().map(|t| t.name.as_str()).collect();
    ensure!(thms == ["reflG", "ceqG", "reflR", "ceqR"], "theorems {thms:?}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("0 errors, 0 warnings in {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("orbi-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn golden_reproduction() -> Outcome {
    let dir = scratch_dir("acceptance");
    let input = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/eq.orbi");
    for t in ["ab", "hy", "bel"] {
        let status = Command::new(env!("CARGO_BIN_EXE_orbi"))
            .args(["translate", "--target", t, "--out-dir"])
            .arg(&dir)
            .arg(&input)
            .status()
            .map_err(|e| e.to_string())?;
        ensure!(status.code() == Some(0), "translate {t} exited {status}");
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&golden)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "golden"))
        .collect();
    files.sort();
    ensure!(files.len() == 7, "{} golden files", files.len());
    for f in &files {
        let name = f.file_stem().unwrap().to_string_lossy();
        let target = name.split('_').next().unwrap();
        let want = std::fs::read_to_string(f).unwrap();
        let want = want.strip_suffix('\n').unwrap_or(&want);
        let got = std::fs::read_to_string(dir.join(format!("eq.{target}.out"))).unwrap();
        ensure!(got.contains(want), "{name} not reproduced");
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{} golden files reproduced", files.len()))
}

fn mentions(g: &Goal, x: &str) -> bool {
    match g {
        Goal::Atom(_, args) => args.iter().any(|t| free_names(t).contains(x)),
        Goal::Pi(y, b) => y != x && mentions(b, x),
        Goal::Implies(h, b) => mentions(h, x) || mentions(b, x),
    }
}

/// Drops `is_*` atoms, then any `pi` whose variable no longer occurs.
fn strip(g: &Goal) -> Option<Goal> {
    match g {
        Goal::Atom(f, _) if f.starts_with("is_") => None,
        Goal::Atom(..) => Some(g.clone()),
        Goal::Pi(x, b) => {
            let b = strip(b)?;
            Some(if mentions(&b, x) { Goal::Pi(x.clone(), Box::new(b)) } else { b })
        }
        Goal::Implies(h, b) => {
            let b = strip(b)?;
            Some(match strip(h) {
                Some(h) => Goal::Implies(Box::new(h), Box::new(b)),
                None => b,
            })
        }
    }
}

fn stripped(c: &Clause) -> String {
    render_clause_ab(&Clause { body: c.body.iter().filter_map(strip).collect(), ..c.clone() })
}

fn erasure_on(checked: &Checked) -> Result<usize, String> {
    let spec = &checked.spec;
    let mut explicit = orbi::directives::resolve(spec, SystemId::Ab).map_err(|e| format!("{e:?}"))?;
    explicit.explicit_rules = spec.rules.iter().map(|r| r.name().to_string()).collect();
    let mut implicit = explicit.clone();
    implicit.explicit_rules.clear();
    let names = Names::for_spec(&checked.sig, spec);
    let mut n = 0;
    for e in checked.sig.rules() {
        let ex = translate_rule(&checked.sig, &e.decl, &explicit, &names).map_err(|d| d.to_string())?;
        let im = translate_rule(&checked.sig, &e.decl, &implicit, &names).map_err(|d| d.to_string())?;
        let (a, b) = (stripped(&ex), stripped(&im));
        ensure!(a == b, "rule `{}`: erased explicit `{a}` vs implicit `{b}`", e.decl.name());
        n += 1;
    }
    Ok(n)
}

fn erasure() -> Outcome {
    let corpus = erasure_on(&check_source(EQ).unwrap())?;
    let mut random = 0;
    for seed in 0..20u64 {
        let mut r = rng(1000 + seed);
        let js = judgments(&mut r);
        let rules = rules(&mut r, &js, 1);
        let src = format!(
            "{BASE_SYNTAX}%% Judgments\n{}%% Rules\n{}: {}.\n%% Directives\n%% wf [ab] in tm\n%% wf [ab] in ty\n",
            judgment_decls(&js),
            rules[0].0,
            rules[0].1
        );
        let checked = check_source(&src).map_err(|e| format!("generated rule rejected: {e:?}\n{src}"))?;
        random += erasure_on(&checked)?;
    }
    ensure!(corpus == 7 && random == 20, "{corpus} corpus, {random} random");
    Ok(format!("{corpus} corpus rules and {random} generated rules"))
}

enum Stage {
    Check,
    Translate,
}

const MUTANTS: &[(&str, &str, Code, Stage)] = &[
    ("app: tm -> tm -> tm.", "app: tm -> tmm -> tm.", Code::Unbound, Stage::Check),
    ("lam: (tm -> tm) -> tm.", "lam: (tm -> tm) -> tm tm.", Code::Kind, Stage::Check),
    ("app: tm -> tm -> tm.", "app: tm -> tm -> tm$", Code::Lex, Stage::Check),
    ("aeq: tm -> tm -> type.", "aeq: tm -> aeq -> type.", Code::Unbound, Stage::Check),
    ("deq: tm -> tm -> type.", "deq: aeq -> tm -> type.", Code::Kind, Stage::Check),
    ("de_r: deq M M.", "de_r: tm.", Code::Level, Stage::Check),
    ("de_r: deq M M.", "de_r: deq M M", Code::Parse, Stage::Check),
    ("%% Rules", "%% Rulez", Code::Section, Stage::Check),
    ("de_s: deq N M", "de_s: deq N lam", Code::Type, Stage::Check),
    ("ae_a: aeq M1 N1", "ae_a: aeq M1 aeq", Code::Type, Stage::Check),
    ("de_t: deq M L -> deq L N", "de_t: deq M L -> deq L app", Code::Type, Stage::Check),
    ("-> aeq (M x) (N x)) -> aeq", "-> aeq (M x x) (N x)) -> aeq", Code::Recon, Stage::Check),
    ("aeq (lam (\\x. M x)) (lam (\\x. N x))", "aeq (lam (\\x. M)) (lam (\\x. N x))", Code::Recon, Stage::Check),
    ("de_s:", "de_r:", Code::Duplicate, Stage::Check),
    ("schema xG = block (x:tm);", "schema xG = block (x:tmm);", Code::Unbound, Stage::Check),
    ("schema xaG = block (x:tm, u:aeq x x);", "schema xaG = block (x:tm, u:aeq x y);", Code::Unbound, Stage::Check),
    ("schema xdG = block (x:tm, u:deq x x);", "schema xdG = block (x:tm, u:deq x);", Code::Kind, Stage::Check),
    ("u:deq x x, v:aeq x x", "u:deq x x, x:aeq x x", Code::Duplicate, Stage::Check),
    ("schema xdG =", "schema xaG =", Code::Duplicate, Stage::Check),
    ("inductive Rxa : {g:xG}", "inductive Rxa : {g:xxG}", Code::UnknownSchema, Stage::Check),
    ("[h, b:block (x:tm, u:aeq x x)];\ninductive Rda", "[h, b:block (x:tm, u:deq x x)];\ninductive Rda", Code::SchemaMismatch, Stage::Check),
    ("| Rxa_cs: Rxa [g] [h]", "| Rxa_cs: Rya [g] [h]", Code::UnknownRelation, Stage::Check),
    ("Rda [g] [h] -> [g |- deq M N]", "Rda [g] [h] -> [k |- deq M N]", Code::UnknownCtxVar, Stage::Check),
    ("| Rxa_nl: Rxa [] []", "| Rxa_nl: Rxa []", Code::Arity, Stage::Check),
    ("%% explicit [hy,ab] in de_l", "%% explicit [hy,ab] in de_q", Code::UnknownDest, Stage::Check),
    ("%% implicit [hy,ab] in xdG", "%% implicit [hy,ab] in xG", Code::Conflict, Stage::Check),
    ("%% wf [hy,ab] in tm", "%% wf [hy,ab] in aeq", Code::Directive, Stage::Check),
    ("%% explicit [hy,ab] in Rxa.g", "%% explicit [hy,ab] in Rxa.k", Code::UnknownDest, Stage::Check),
    ("%% explicit [hy,ab,bel] in reflG.M", "%% explicit [hy,ab,bel] in reflG.Q", Code::UnknownDest, Stage::Check),
    ("theorem reflG: {h:xaG}{M:tm} [h |-", "theorem reflG: {h:xaG}{M:tm} [k |-", Code::UnknownCtxVar, Stage::Check),
    ("theorem ceqG: {g:daG}", "theorem ceqG: {g:dbG}", Code::UnknownSchema, Stage::Check),
    ("Rxa [g] [h] -> [h |- aeq M M];", "Rxb [g] [h] -> [h |- aeq M M];", Code::UnknownRelation, Stage::Check),
    ("[h |- aeq M N];", "[h |- aeq M K];", Code::Unbound, Stage::Check),
    ("[g |- deq M N] -> [g |- aeq M N];", "[g |- deq M] -> [g |- aeq M N];", Code::Arity, Stage::Check),
    ("{g:daG}{M:tm}", "{g:daG}{M:aeq}", Code::Kind, Stage::Check),
    ("aeq: tm -> tm -> type.", "aeq: tm -> tm -> tm.", Code::Level, Stage::Check),
    ("%% explicit [hy,ab] in xG", "%% implicit [hy,ab] in xG", Code::EmptyRendering, Stage::Translate),
];

fn mutation_suite() -> Outcome {
    let mut rejected = 0;
    for (i, (from, to, code, stage)) in MUTANTS.iter().enumerate() {
        ensure!(EQ.matches(from).count() == 1, "mutant {i}: `{from}` does not occur once");
        let src = EQ.replacen(from, to, 1);
        let diags = match (check_source(&src), stage) {
            (Err(es), _) => es,
            (Ok(_), Stage::Check) => return Err(format!("mutant {i} (`{to}`) accepted")),
            (Ok(c), Stage::Translate) => match translate_spec(&c, SystemId::Ab) {
                Ok(_) => return Err(format!("mutant {i} (`{to}`) translated")),
                Err(es) => es,
            },
        };
        let codes: Vec<Code> = diags.iter().map(|d| d.code).collect();
        ensure!(codes.contains(code), "mutant {i} (`{to}`): expected {code}, got {codes:?}");
        rejected += 1;
    }
    ensure!(rejected >= 30, "only {rejected} mutants");
    Ok(format!("{rejected}/{} mutants rejected with the expected code", MUTANTS.len()))
}

fn round_trip() -> Outcome {
    let mut n = 0;
    let sources = std::iter::once(EQ.to_string()).chain((0..100u64).map(spec));
    for src in sources {
        let a = parse_spec(&src).map_err(|e| format!("{e:?}\n{src}"))?;
        let printed = a.pretty();
        let b = parse_spec(&printed).map_err(|e| format!("reparse: {e:?}\n{printed}"))?;
        ensure!(a == b, "round trip changed\n{src}\n---\n{printed}");
        ensure!(b.pretty() == printed, "pretty is not a fixpoint\n{printed}");
        check_source(&src).map_err(|e| format!("generated spec rejected: {e:?}\n{src}"))?;
        n += 1;
    }
    Ok(format!("{n} specifications"))
}

fn prefix(d: &Decl) -> Vec<(String, String)> {
    let Decl::Const { tp, .. } = d else { return vec![] };
    let mut out = Vec::new();
    let mut a = tp;
    while let Tp::Pi(x, dom, cod) = a {
        out.push((x.clone(), dom.pretty()));
        a = cod;
    }
    out
}

fn reconstruction() -> Outcome {
    let checked = check_source(EQ).unwrap();
    let rule = |n: &str| checked.spec.rules.iter().find(|r| r.name() == n).unwrap().clone();
    let ae_a = prefix(&reconstruct_implicits(&checked.sig, &rule("ae_a")).map_err(|e| e.to_string())?);
    let ae_l = prefix(&reconstruct_implicits(&checked.sig, &rule("ae_l")).map_err(|e| e.to_string())?);
    let set = |v: &[(String, String)]| v.iter().cloned().collect::<BTreeSet<_>>();
    let tm = |xs: &[&str], t: &str| xs.iter().map(|x| (x.to_string(), t.to_string())).collect::<BTreeSet<_>>();
    ensure!(ae_a.len() == 4 && set(&ae_a) == tm(&["M1", "N1", "M2", "N2"], "tm"), "ae_a: {ae_a:?}");
    ensure!(ae_l.len() == 2 && set(&ae_l) == tm(&["M", "N"], "tm -> tm"), "ae_l: {ae_l:?}");
    Ok("ae_a {M1,N1,M2,N2}:tm, ae_l {M,N}:tm -> tm".into())
}

fn has_redex(t: &Term) -> bool {
    match t {
        Term::App(f, a) => matches!(**f, Term::Lam(..)) || has_redex(f) || has_redex(a),
        Term::Lam(_, b) => has_redex(b),
        _ => false,
    }
}

fn normalization() -> Outcome {
    let src = format!("{BASE_SYNTAX}%% Judgments\nj: tm -> type.\n");
    let sig = check_source(&src).map_err(|e| format!("{e:?}"))?.sig;
    let ctx = TypingCtx::new();
    let mut r = rng(7);
    let mut redexes = 0;
    for i in 0..500 {
        let text = TermGen::new(&mut r).infer(Ty::Tm, &mut Vec::new(), 5);
        let t = parse_term(&text).map_err(|e| format!("{e:?}: {text}"))?;
        let a = infer_type(&sig, &ctx, &t).map_err(|e| format!("term {i} `{text}` ill-typed: {e}"))?;
        redexes += usize::from(has_redex(&t));
        let n = normalize(&t);
        ensure!(!has_redex(&n), "term {i}: `{}` is not normal", n.pretty());
        ensure!(normalize(&n) == n, "term {i}: normalize not idempotent on `{text}`");
        let b = infer_type(&sig, &ctx, &n).map_err(|e| format!("term {i}: normal form ill-typed: {e}"))?;
        ensure!(tp_equal(&a, &b), "term {i}: type changed from `{}` to `{}`", a.pretty(), b.pretty());
    }
    ensure!(redexes > 50, "only {redexes} terms had redexes");
    Ok(format!("500 terms, {redexes} with redexes"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("corpus check", corpus_check),
        ("verbatim reproduction", golden_reproduction),
        ("erasure", erasure),
        ("mutation suite", mutation_suite),
        ("round trip", round_trip),
        ("reconstruction", reconstruction),
        ("normalization and typing", normalization),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
