//! Test programs: a handful of curated files and a seeded, type-directed
//! generator of well-typed programs and configurations.
//!
//! The generator threads the linear variables in scope through every
//! construct so that each is consumed exactly once; leftovers are disposed of
//! explicitly (`discard`, unpacking, applying to a dummy argument). Output is
//! still run through the typechecker, and rejected candidates are skipped.

use std::fmt::Write;

use eclnl_core::diagram::{apply_generator, FreshLabels};
use eclnl_core::parser::{parse_raw_term, resolve_in_scope};
use eclnl_core::syntax::substitute_many;
use eclnl_core::{
    check_configuration, infer, Label, LabelContext, LabelTuple, LabelledDiagram, Name, Signature, Term,
    TermKind, Type, VarContext,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Example programs shipped with the crate, by file stem.
pub const CURATED: &[(&str, &str)] = &[
    ("hadamard", include_str!("../examples/hadamard.eclnl")),
    ("diverge", include_str!("../examples/diverge.eclnl")),
    ("constructivity", include_str!("../examples/constructivity.eclnl")),
    ("bell", include_str!("../examples/bell.eclnl")),
    ("twice", include_str!("../examples/twice.eclnl")),
    ("ghz", include_str!("../examples/ghz.eclnl")),
    ("controlled", include_str!("../examples/controlled.eclnl")),
    ("negate", include_str!("../examples/negate.eclnl")),
    ("search", include_str!("../examples/search.eclnl")),
];

/// Which types generated programs may mention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    /// Qubits, circuits and boxed diagrams over the demo signature.
    Circuits,
    /// Only `0`, `I`, `+`, `*`, `-o` and `!`, with small carriers.
    DiagramFree,
}

fn ty(s: &str) -> Type {
    eclnl_core::parse_type(s).expect("corpus types parse")
}

impl Universe {
    pub fn types(self) -> Vec<Type> {
        let srcs: &[&str] = match self {
            Universe::Circuits => &[
                "I",
                "I + I",
                "qubit",
                "qubit * qubit",
                "qubit -o qubit",
                "!(qubit -o qubit)",
                "Diag(qubit, qubit)",
                "Diag(qubit * qubit, qubit * qubit)",
                "!I",
                "I + I -o Diag(qubit, qubit)",
                "!(I + I -o Diag(qubit, qubit))",
                "qubit * (I + I)",
            ],
            Universe::DiagramFree => &[
                "I",
                "I + I",
                "(I + I) * (I + I)",
                "!I",
                "!(I + I)",
                "I + I -o I + I",
                "!(I + I -o I + I)",
                "I -o I",
            ],
        };
        srcs.iter().map(|s| ty(s)).collect()
    }
}

/// A generated closed program.
#[derive(Clone, Debug)]
pub struct Program {
    pub src: String,
    pub term: Term,
    pub ty: Type,
}

/// A generated configuration `Q |- (S, m) : A; Q'`.
#[derive(Clone, Debug)]
pub struct GeneratedConfiguration {
    pub diagram: LabelledDiagram,
    pub term: Term,
    pub ty: Type,
    /// Outputs of the diagram that the term leaves alone.
    pub untouched: LabelContext,
}

type Scope = Vec<(String, Type)>;

pub struct Generator {
    rng: ChaCha8Rng,
    fresh: usize,
    universe: Vec<Type>,
    int: Scope,
    sig: Signature,
}

fn qubit() -> Type {
    Type::wire("qubit")
}

impl Generator {
    pub fn new(seed: u64, universe: Universe) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            fresh: 0,
            universe: universe.types(),
            int: Vec::new(),
            sig: Signature::demo(),
        }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn pick_type(&mut self) -> Type {
        self.universe.choose(&mut self.rng).expect("nonempty universe").clone()
    }

    fn split(&mut self, lin: Scope) -> (Scope, Scope) {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for v in lin {
            if self.rng.gen_bool(0.5) {
                a.push(v);
            } else {
                b.push(v);
            }
        }
        (a, b)
    }

    /// Runs `f` with extra intuitionistic variables in scope.
    fn with_int<R>(&mut self, vars: Scope, f: impl FnOnce(&mut Self) -> R) -> R {
        let n = self.int.len();
        self.int.extend(vars);
        let r = f(self);
        self.int.truncate(n);
        r
    }

    /// Binds a variable: linear ones join `lin`, the rest go in scope.
    fn bind<R>(&mut self, x: &str, t: &Type, mut lin: Scope, f: impl FnOnce(&mut Self, Scope) -> R) -> R {
        if t.is_linear() {
            lin.push((x.to_string(), t.clone()));
            f(self, lin)
        } else {
            self.with_int(vec![(x.to_string(), t.clone())], |g| f(g, lin))
        }
    }

    /// A term of type `I` that consumes `x : t`.
    fn dispose(&mut self, x: &str, t: &Type) -> String {
        if !t.is_linear() {
            return "*".to_string();
        }
        match t {
            Type::Wire(_) => format!("discard {x}"),
            Type::Tensor(a, b) => {
                let (p, q) = (self.fresh("p"), self.fresh("p"));
                let da = self.dispose(&p, a);
                let db = self.dispose(&q, b);
                format!("let <{p}, {q}> = {x} in {da}; {db}")
            }
            Type::Sum(a, b) => {
                let (p, q) = (self.fresh("p"), self.fresh("p"));
                let da = self.dispose(&p, a);
                let db = self.dispose(&q, b);
                format!("case {x} of {{ left {p} -> {da} | right {q} -> {db} }}")
            }
            Type::Lollipop(a, b) => {
                let arg = self.gen(a, 0, Vec::new());
                let r = self.fresh("r");
                let dr = self.dispose(&r, b);
                format!("let {r} = {x} ({arg}) in {dr}")
            }
            _ => unreachable!("linear types are handled above"),
        }
    }

    /// `dispose(l1); dispose(l2); ...; body`
    fn dispose_all(&mut self, lin: Scope, body: String) -> String {
        let mut s = String::new();
        for (x, t) in lin {
            let d = self.dispose(&x, &t);
            let _ = write!(s, "{d}; ");
        }
        s.push_str(&body);
        s
    }

    /// A term of type `t` that uses every variable of `lin` exactly once.
    pub fn gen(&mut self, t: &Type, depth: usize, mut lin: Scope) -> String {
        if let Some(pos) = lin.iter().position(|(_, a)| a == t) {
            if depth == 0 || self.rng.gen_bool(0.4) {
                let (x, _) = lin.remove(pos);
                return self.dispose_all(lin, x);
            }
        }
        if depth == 0 {
            return self.intro(t, 0, lin);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..14) {
            0 | 1 => {
                let a = self.pick_type();
                let x = self.fresh("v");
                let (l1, l2) = self.split(lin);
                let m = self.gen(&a, d, l1);
                let n = self.bind(&x, &a, l2, |g, l2| g.gen(t, d, l2));
                format!("let {x} = {m} in {n}")
            }
            2 => {
                let sums: Vec<Type> = self.universe.iter().filter(|a| matches!(a, Type::Sum(..))).cloned().collect();
                let Some(Type::Sum(a, b)) = sums.choose(&mut self.rng).cloned() else { return self.intro(t, d, lin) };
                let (l1, l2) = self.split(lin);
                let s = self.gen(&Type::Sum(a.clone(), b.clone()), d, l1);
                let (x, y) = (self.fresh("u"), self.fresh("u"));
                let n = self.bind(&x, &a, l2.clone(), |g, l| g.gen(t, d, l));
                let p = self.bind(&y, &b, l2, |g, l| g.gen(t, d, l));
                format!("case {s} of {{ left {x} -> {n} | right {y} -> {p} }}")
            }
            3 => {
                let pairs: Vec<Type> =
                    self.universe.iter().filter(|a| matches!(a, Type::Tensor(..))).cloned().collect();
                let Some(Type::Tensor(a, b)) = pairs.choose(&mut self.rng).cloned() else { return self.intro(t, d, lin) };
                let (l1, l2) = self.split(lin);
                let s = self.gen(&Type::Tensor(a.clone(), b.clone()), d, l1);
                let (x, y) = (self.fresh("a"), self.fresh("b"));
                let n = self.bind(&x, &a, l2, |g, l| g.bind(&y, &b, l, |g, l| g.gen(t, d, l)));
                format!("let <{x}, {y}> = {s} in {n}")
            }
            4 => {
                let (l1, l2) = self.split(lin);
                let m = self.gen(&Type::Unit, d, l1);
                let n = self.gen(t, d, l2);
                format!("{m}; {n}")
            }
            5 => {
                let a = self.pick_type();
                let x = self.fresh("v");
                let (l1, l2) = self.split(lin);
                let arg = self.gen(&a, d, l1);
                let body = self.bind(&x, &a, l2, |g, l| g.gen(t, d, l));
                format!("(\\{x}:{a}. {body}) ({arg})")
            }
            6 => {
                // A function from the intuitionistic scope, or a lifted one.
                let fns: Vec<(String, Type)> = self
                    .int
                    .iter()
                    .filter(|(_, a)| matches!(a, Type::Bang(f) if matches!(&**f, Type::Lollipop(_, r) if **r == *t)))
                    .cloned()
                    .collect();
                match fns.choose(&mut self.rng).cloned() {
                    Some((f, Type::Bang(fty))) => {
                        let Type::Lollipop(a, _) = *fty else { unreachable!() };
                        let arg = self.gen(&a, d, lin);
                        format!("force {f} ({arg})")
                    }
                    _ => {
                        let m = self.gen(t, d, Vec::new());
                        self.dispose_all(lin, format!("force (lift ({m}))"))
                    }
                }
            }
            7 if self.rng.gen_bool(0.5) => {
                let f = self.fresh("f");
                let bang = Type::bang(t.clone());
                let body = self.with_int(vec![(f.clone(), bang.clone())], |g| g.gen(t, d, Vec::new()));
                self.dispose_all(lin, format!("rec {f}:{bang}. {body}"))
            }
            8 | 9 => self.circuit_step(t, d, lin),
            _ => self.intro(t, d, lin),
        }
    }

    /// Gates, `apply` and the intuitionistic scope, where they fit `t`.
    fn circuit_step(&mut self, t: &Type, d: usize, lin: Scope) -> String {
        let q = qubit();
        let qq = Type::tensor(q.clone(), q.clone());
        let diags: Vec<(String, Type, Type)> = self
            .int
            .iter()
            .filter_map(|(x, a)| match a {
                Type::Diag(i, o) if o.to_type() == *t => Some((x.clone(), i.to_type(), o.to_type())),
                _ => None,
            })
            .collect();
        if let Some((dv, i, _)) = diags.choose(&mut self.rng).cloned() {
            if self.rng.gen_bool(0.6) {
                let arg = self.gen(&i, d, lin);
                return format!("apply({dv}, {arg})");
            }
        }
        if *t == q {
            return match self.rng.gen_range(0..3) {
                0 => format!("h ({})", self.gen(&q, d, lin)),
                1 => format!("x ({})", self.gen(&q, d, lin)),
                _ => {
                    let diag = Type::Diag(q.as_mtype().unwrap(), q.as_mtype().unwrap());
                    let dv = self.gen(&diag, d, Vec::new());
                    let arg = self.gen(&q, d, lin);
                    format!("apply({dv}, {arg})")
                }
            };
        }
        if *t == qq && self.universe.contains(&qq) {
            return format!("cnot ({})", self.gen(&qq, d, lin));
        }
        if let Some((x, a)) = self.int.choose(&mut self.rng).cloned() {
            if a == *t {
                return self.dispose_all(lin, x);
            }
        }
        self.intro(t, d, lin)
    }

    /// An introduction form for `t`.
    fn intro(&mut self, t: &Type, d: usize, lin: Scope) -> String {
        if lin.is_empty() || t.is_linear() || self.rng.gen_bool(0.3) {
            if let Some((x, _)) = self.int.iter().filter(|(_, a)| a == t).collect::<Vec<_>>().choose(&mut self.rng) {
                if self.rng.gen_bool(0.3) {
                    let x = x.clone();
                    return self.dispose_all(lin, x);
                }
            }
        }
        match t {
            Type::Unit => {
                if !lin.is_empty() && self.rng.gen_bool(0.5) {
                    // Consume the scope through a qubit when there is one.
                    if let Some(pos) = lin.iter().position(|(_, a)| *a == qubit()) {
                        let mut lin = lin;
                        let (x, _) = lin.remove(pos);
                        let q = self.gen(&qubit(), d, {
                            lin.push((x, qubit()));
                            lin
                        });
                        return format!("discard ({q})");
                    }
                }
                self.dispose_all(lin, "*".to_string())
            }
            Type::Sum(a, b) => {
                if self.rng.gen_bool(0.5) {
                    format!("left[{a}, {b}] ({})", self.gen(a, d, lin))
                } else {
                    format!("right[{a}, {b}] ({})", self.gen(b, d, lin))
                }
            }
            Type::Tensor(a, b) => {
                let (l1, l2) = self.split(lin);
                let m = self.gen(a, d, l1);
                let n = self.gen(b, d, l2);
                format!("<{m}, {n}>")
            }
            Type::Lollipop(a, b) => {
                let x = self.fresh("v");
                let body = self.bind(&x, a, lin, |g, l| g.gen(b, d, l));
                format!("\\{x}:{a}. {body}")
            }
            Type::Bang(a) => {
                let m = self.gen(a, d, Vec::new());
                self.dispose_all(lin, format!("lift ({m})"))
            }
            Type::Wire(_) => {
                if lin.is_empty() || self.rng.gen_bool(0.2) {
                    self.dispose_all(lin, "new *".to_string())
                } else {
                    // Gates keep the scope flowing into the result.
                    format!("h ({})", self.gen(t, d, lin))
                }
            }
            Type::Diag(i, o) => {
                let f = Type::bang(Type::lolli(i.to_type(), o.to_type()));
                let m = self.gen(&f, d, Vec::new());
                self.dispose_all(lin, format!("box[{i}] ({m})"))
            }
            Type::Zero => unreachable!("0 is not in any universe"),
        }
    }

    /// A closed program of a random type from the universe, with generation
    /// depth `depth`, or `None` if the typechecker rejects it.
    pub fn program(&mut self, depth: usize) -> Option<Program> {
        let t = self.pick_type();
        self.program_at(&t, depth)
    }

    pub fn program_at(&mut self, t: &Type, depth: usize) -> Option<Program> {
        let src = self.gen(t, depth, Vec::new());
        let term = eclnl_core::parse_term(&src, &self.sig).ok()?;
        let d = infer(&self.sig, &VarContext::new(), &LabelContext::new(), &term).ok()?;
        (d.ty == *t).then_some(Program { src, term, ty: d.ty })
    }

    /// A random circuit from nothing to a few qubits, then a term that
    /// consumes some of its outputs.
    pub fn configuration(&mut self, depth: usize) -> Option<GeneratedConfiguration> {
        let mut fresh = FreshLabels::new();
        let mut s = LabelledDiagram::identity(&LabelContext::new());
        let gen = |n: &str| self.sig.generator(n).cloned().expect("demo generator");
        let (new, h, cnot) = (gen("new"), gen("h"), gen("cnot"));
        let k = self.rng.gen_range(0..=3);
        for _ in 0..k {
            (s, _) = apply_generator(&s, &new, &LabelTuple::Star, &mut fresh)?;
        }
        for _ in 0..self.rng.gen_range(0..=3) {
            let outs: Vec<Label> = s.cod().labels().cloned().collect();
            if outs.len() >= 2 && self.rng.gen_bool(0.5) {
                let mut two: Vec<Label> = outs.choose_multiple(&mut self.rng, 2).cloned().collect();
                two.shuffle(&mut self.rng);
                let k = LabelTuple::pair(LabelTuple::Lbl(two[0].clone()), LabelTuple::Lbl(two[1].clone()));
                (s, _) = apply_generator(&s, &cnot, &k, &mut fresh)?;
            } else if let Some(l) = outs.choose(&mut self.rng) {
                (s, _) = apply_generator(&s, &h, &LabelTuple::Lbl(l.clone()), &mut fresh)?;
            }
        }
        let used: Vec<Label> = s.cod().labels().filter(|_| self.rng.gen_bool(0.7)).cloned().collect();
        let vars: Vec<(String, Type)> = used.iter().map(|_| (self.fresh("w"), qubit())).collect();
        let t = self.pick_type();
        let src = self.gen(&t, depth, vars.clone());
        let names: Vec<Name> = vars.iter().map(|(x, _)| Name::new(x)).collect();
        let raw = parse_raw_term(&src).ok()?;
        let m = resolve_in_scope(&raw, &self.sig, &src, &names).ok()?;
        let subst: Vec<(Name, Term)> = names
            .into_iter()
            .zip(&used)
            .map(|(x, l)| (x, Term::new(TermKind::Label(l.clone()), Default::default())))
            .collect();
        let term = substitute_many(&m, &subst);
        let (untouched, _) = check_configuration(&self.sig, &LabelContext::new(), &s, &term, &t).ok()?;
        Some(GeneratedConfiguration { diagram: s, term, ty: t, untouched })
    }
}

/// Nesting depth of a term.
pub fn term_depth(m: &Term) -> usize {
    let mut d = 0;
    m.for_each_child(&mut |c| d = d.max(term_depth(c)));
    d + 1
}

/// `n` distinct-seeded programs of depth at most `max_depth`, drawn by
/// rejection.
pub fn programs(seed: u64, n: usize, universe: Universe, max_depth: usize) -> Vec<Program> {
    let mut g = Generator::new(seed, universe);
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        assert!(tries < 100 * n + 1000, "generator rejects too many candidates");
        let depth = g.rng.gen_range(1..=4);
        if let Some(p) = g.program(depth) {
            if term_depth(&p.term) <= max_depth {
                out.push(p);
            }
        }
    }
    out
}

pub fn configurations(seed: u64, n: usize, max_depth: usize) -> Vec<GeneratedConfiguration> {
    let mut g = Generator::new(seed, Universe::Circuits);
    let mut out = Vec::with_capacity(n);
    let mut tries = 0;
    while out.len() < n {
        tries += 1;
        assert!(tries < 100 * n + 1000, "generator rejects too many candidates");
        let depth = g.rng.gen_range(1..=4);
        if let Some(c) = g.configuration(depth) {
            if term_depth(&c.term) <= max_depth {
                out.push(c);
            }
        }
    }
    out
}

/// The curated programs, parsed and resolved against the demo signature.
pub fn curated() -> Vec<(&'static str, Term)> {
    CURATED
        .iter()
        .map(|(name, src)| {
            let p = eclnl_core::parse_program(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            (*name, p.to_term(&Signature::demo(), src).unwrap_or_else(|e| panic!("{name}: {e}")))
        })
        .collect()
}
