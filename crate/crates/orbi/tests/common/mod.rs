//! Random well-formed ORBI fragments for property tests.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const EQ: &str = include_str!("../../examples/eq.orbi");

pub const BASE_SYNTAX: &str = "\
tm: type.
app: tm -> tm -> tm.
lam: (tm -> tm) -> tm.
c0: tm.
ty: type.
arr: ty -> ty -> ty.
base: ty.
";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Tm,
    Ty,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::Tm => "tm",
            Base::Ty => "ty",
        }
    }
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Judgment families `j1 .. jn`, each indexed by one or two syntax types.
pub fn judgments(r: &mut StdRng) -> Vec<(String, Vec<Base>)> {
    (1..=r.gen_range(1..=3))
        .map(|i| {
            let args = (0..r.gen_range(1..=2))
                .map(|_| if r.gen_bool(0.7) { Base::Tm } else { Base::Ty })
                .collect();
            (format!("j{i}"), args)
        })
        .collect()
}

pub fn judgment_decls(js: &[(String, Vec<Base>)]) -> String {
    js.iter()
        .map(|(j, args)| {
            let ks: Vec<&str> = args.iter().map(|b| b.name()).collect();
            format!("{j}: {} -> type.\n", ks.join(" -> "))
        })
        .collect()
}

/// Builds one rule; schematic variables are `M1, M2, ...`, eigenvariables `x1, x2, ...`.
pub struct RuleGen<'a> {
    pub r: &'a mut StdRng,
    pub js: &'a [(String, Vec<Base>)],
    /// Name, number of `tm` arguments, result type.
    pub schematic: Vec<(String, usize, Base)>,
    next_eigen: usize,
}

impl<'a> RuleGen<'a> {
    pub fn new(r: &'a mut StdRng, js: &'a [(String, Vec<Base>)]) -> Self {
        RuleGen { r, js, schematic: Vec::new(), next_eigen: 0 }
    }

    fn eigen(&mut self) -> String {
        self.next_eigen += 1;
        format!("x{}", self.next_eigen)
    }

    fn schematic_use(&mut self, b: Base, scope: &[(String, Base)]) -> String {
        let tms: Vec<&String> = scope.iter().filter(|(_, t)| *t == Base::Tm).map(|(x, _)| x).collect();
        let reusable: Vec<(String, usize)> = self
            .schematic
            .iter()
            .filter(|(_, k, t)| *t == b && *k <= tms.len())
            .map(|(m, k, _)| (m.clone(), *k))
            .collect();
        let (m, k) = if !reusable.is_empty() && self.r.gen_bool(0.4) {
            reusable.choose(self.r).unwrap().clone()
        } else {
            let k = self.r.gen_range(0..=tms.len().min(2));
            let m = format!("M{}", self.schematic.len() + 1);
            self.schematic.push((m.clone(), k, b));
            (m, k)
        };
        if k == 0 {
            return m;
        }
        let mut args = tms.clone();
        args.shuffle(self.r);
        let args: Vec<&str> = args[..k].iter().map(|s| s.as_str()).collect();
        format!("({m} {})", args.join(" "))
    }

    pub fn term(&mut self, b: Base, scope: &mut Vec<(String, Base)>, depth: u32) -> String {
        if depth == 0 || self.r.gen_bool(0.35) {
            let vars: Vec<String> = scope.iter().filter(|(_, t)| *t == b).map(|(x, _)| x.clone()).collect();
            return match self.r.gen_range(0..4) {
                0 if !vars.is_empty() => vars.choose(self.r).unwrap().clone(),
                1 => match b {
                    Base::Tm => "c0".into(),
                    Base::Ty => "base".into(),
                },
                _ => self.schematic_use(b, scope),
            };
        }
        match b {
            Base::Tm if self.r.gen_bool(0.5) => {
                let x = self.eigen();
                scope.push((x.clone(), Base::Tm));
                let body = self.term(Base::Tm, scope, depth - 1);
                scope.pop();
                format!("(lam (\\{x}. {body}))")
            }
            Base::Tm => {
                let a = self.term(Base::Tm, scope, depth - 1);
                let c = self.term(Base::Tm, scope, depth - 1);
                format!("(app {a} {c})")
            }
            Base::Ty => {
                let a = self.term(Base::Ty, scope, depth - 1);
                let c = self.term(Base::Ty, scope, depth - 1);
                format!("(arr {a} {c})")
            }
        }
    }

    pub fn atom(&mut self, scope: &mut Vec<(String, Base)>, depth: u32) -> String {
        let (j, args) = self.js.choose(self.r).unwrap().clone();
        let ts: Vec<String> = args.iter().map(|b| self.term(*b, scope, depth)).collect();
        format!("{j} {}", ts.join(" "))
    }

    /// `{x:tm} H -> ... -> A`, depth at most `depth`.
    pub fn premise(&mut self, scope: &mut Vec<(String, Base)>, depth: u32) -> String {
        if depth == 0 || self.r.gen_bool(0.3) {
            return self.atom(scope, 2);
        }
        if self.r.gen_bool(0.6) {
            let b = if self.r.gen_bool(0.8) { Base::Tm } else { Base::Ty };
            let x = self.eigen();
            scope.push((x.clone(), b));
            let body = self.premise(scope, depth - 1);
            scope.pop();
            format!("{{{x}:{}}} {body}", b.name())
        } else {
            let h = self.atom(scope, 1);
            let body = self.premise(scope, depth - 1);
            format!("{h} -> {body}")
        }
    }

    /// The type of a rule: premises, then the conclusion.
    pub fn rule(&mut self) -> String {
        let concl = self.atom(&mut Vec::new(), 2);
        let mut parts = Vec::new();
        for _ in 0..self.r.gen_range(0..=2) {
            parts.push(format!("({})", self.premise(&mut Vec::new(), 3)));
        }
        parts.push(concl);
        parts.join(" -> ")
    }
}

/// A random rule set `r1 .. rn` over [`BASE_SYNTAX`] and `js`.
pub fn rules(r: &mut StdRng, js: &[(String, Vec<Base>)], n: usize) -> Vec<(String, String)> {
    (1..=n).map(|i| (format!("r{i}"), RuleGen::new(r, js).rule())).collect()
}

/// A block binding `x:tm` or `x:ty` and one or two assumptions about it.
fn block(r: &mut StdRng, js: &[(String, Vec<Base>)]) -> String {
    let mut entries = Vec::new();
    let b = if r.gen_bool(0.8) { Base::Tm } else { Base::Ty };
    entries.push(format!("x:{}", b.name()));
    let usable: Vec<&(String, Vec<Base>)> = js.iter().filter(|(_, a)| a.contains(&b)).collect();
    let labels = ["u", "v"];
    for l in labels.iter().take(r.gen_range(0..=2)) {
        let Some((j, args)) = usable.choose(r) else { break };
        let ts: Vec<&str> = args
            .iter()
            .map(|a| if *a == b { "x" } else if *a == Base::Tm { "c0" } else { "base" })
            .collect();
        entries.push(format!("{l}:{j} {}", ts.join(" ")));
    }
    format!("block ({})", entries.join(", "))
}

/// A complete, well-formed specification exercising every section.
pub fn spec(seed: u64) -> String {
    let mut r = rng(seed);
    let r = &mut r;
    let js = judgments(r);
    let mut out = String::from("%% Syntax\n");
    out.push_str(BASE_SYNTAX);
    out.push_str("\n%% Judgments\n");
    out.push_str(&judgment_decls(&js));
    out.push_str("\n%% Rules\n");
    let n = r.gen_range(1..=4);
    for (name, tp) in rules(r, &js, n) {
        out.push_str(&format!("{name}: {tp}.\n"));
    }
    out.push_str("\n%% Schemas\n");
    let mut schemas: Vec<(String, Vec<String>)> = Vec::new();
    for i in 1..=r.gen_range(1..=3) {
        let alts: Vec<String> = (0..r.gen_range(1..=2)).map(|_| block(r, &js)).collect();
        out.push_str(&format!("schema s{i} = {};\n", alts.join(" + ")));
        schemas.push((format!("s{i}"), alts));
    }
    out.push_str("\n%% Definitions\n");
    let (s1, a1) = schemas[0].clone();
    let (s2, a2) = schemas.choose(r).unwrap().clone();
    let b1 = a1.choose(r).unwrap();
    let b2 = a2.choose(r).unwrap();
    out.push_str(&format!(
        "inductive R : {{g:{s1}}} {{h:{s2}}} prop =\n| R_nl: R [] []\n| R_cs: R [g] [h] -> R [g, b:{b1}] [h, b:{b2}];\n"
    ));
    out.push_str("\n%% Directives\n");
    out.push_str("%% wf [ab,hy] in tm\n");
    if r.gen_bool(0.5) {
        out.push_str("%% wf [ab] in ty\n");
    }
    out.push_str(&format!("%% explicit [ab,hy] in r{}\n", r.gen_range(1..=n)));
    out.push_str(&format!("%% explicit [ab,hy,bel] in {s1}\n"));
    out.push_str("%% explicit [ab,hy] in R.g\n");
    out.push_str("\n%% Theorems\n");
    let (j, args) = js.choose(r).unwrap().clone();
    let vars: Vec<String> = (1..=args.len()).map(|i| format!("N{i}")).collect();
    let binders: String = vars.iter().zip(&args).map(|(v, b)| format!("{{{v}:{}}}", b.name())).collect();
    let judg = format!("[g |- {j} {}]", vars.join(" "));
    let stmt = match r.gen_range(0..4) {
        0 => format!("{judg} -> {judg}"),
        1 => format!("{judg} & true -> {judg} || false"),
        2 => format!("R [g] [h] -> {judg} -> <K:tm> [h |- {j} {}]", vars.join(" ")),
        _ => format!("{judg} -> {} = {}", vars[0], vars[0]),
    };
    out.push_str(&format!("theorem t1: {{g:{s1}}}{{h:{s2}}}{binders} {stmt};\n"));
    out
}

// Closed terms over the `eq` syntax, with redexes, for normalization tests.

pub struct TermGen<'a> {
    pub r: &'a mut StdRng,
    next: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Tm,
    Fun,
}

impl<'a> TermGen<'a> {
    pub fn new(r: &'a mut StdRng) -> Self {
        TermGen { r, next: 0 }
    }

    fn var(&mut self, base: &str) -> String {
        self.next += 1;
        format!("{base}{}", self.next)
    }

    fn pick(&mut self, scope: &[(String, Ty)], t: Ty) -> Option<String> {
        let vs: Vec<&String> = scope.iter().filter(|(_, u)| *u == t).map(|(x, _)| x).collect();
        vs.choose(self.r).map(|s| s.to_string())
    }

    /// A term whose type can be inferred.
    pub fn infer(&mut self, t: Ty, scope: &mut Vec<(String, Ty)>, depth: u32) -> String {
        if t == Ty::Fun {
            return match self.r.gen_range(0..3) {
                0 => self.pick(scope, Ty::Fun).unwrap_or_else(|| "(app c0)".into()),
                1 if depth > 0 => format!("(app {})", self.infer(Ty::Tm, scope, depth - 1)),
                _ => "(app c0)".into(),
            };
        }
        if depth == 0 {
            return self.pick(scope, Ty::Tm).unwrap_or_else(|| "c0".into());
        }
        match self.r.gen_range(0..7) {
            0 => self.pick(scope, Ty::Tm).unwrap_or_else(|| "c0".into()),
            1 => format!("(app {} {})", self.infer(Ty::Tm, scope, depth - 1), self.infer(Ty::Tm, scope, depth - 1)),
            2 => format!("(lam {})", self.check(Ty::Fun, scope, depth - 1)),
            3 => {
                let f = self.infer(Ty::Fun, scope, depth - 1);
                format!("({f} {})", self.check(Ty::Tm, scope, depth - 1))
            }
            4 => {
                let x = self.var("x");
                let arg = self.infer(Ty::Tm, scope, depth - 1);
                scope.push((x.clone(), Ty::Tm));
                let body = self.infer(Ty::Tm, scope, depth - 1);
                scope.pop();
                format!("((\\{x}. {body}) {arg})")
            }
            5 => {
                let f = self.var("f");
                let arg = self.infer(Ty::Fun, scope, depth - 1);
                scope.push((f.clone(), Ty::Fun));
                let body = self.infer(Ty::Tm, scope, depth - 1);
                scope.pop();
                format!("((\\{f}. {body}) {arg})")
            }
            _ => "c0".into(),
        }
    }

    /// A term checked against `t`; may be a bare abstraction.
    pub fn check(&mut self, t: Ty, scope: &mut Vec<(String, Ty)>, depth: u32) -> String {
        if t == Ty::Fun && (depth == 0 || self.r.gen_bool(0.6)) {
            let x = self.var("y");
            scope.push((x.clone(), Ty::Tm));
            let body = self.infer(Ty::Tm, scope, depth.saturating_sub(1));
            scope.pop();
            return format!("(\\{x}. {body})");
        }
        self.infer(t, scope, depth)
    }
}

/// Applies `f` and reports a panic as a failure message.
pub fn catch(f: impl FnOnce() + std::panic::UnwindSafe) -> Result<(), String> {
    std::panic::catch_unwind(f).map_err(|e| {
        e.downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())
    })
}
