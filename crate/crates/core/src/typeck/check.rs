use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::{Derivation, Rule, TypeError, TypeErrorKind as K, TypingDerivation};
use crate::diagram::{LabelledDiagram, Signature};
use crate::syntax::{free_labels, BoxedDiagram, Label, LabelContext, LabelTuple, MType, Name, Span, Term, TermKind, Type, VarContext};

type Id = u32;

#[derive(Default)]
struct Usage {
    vars: BTreeSet<Id>,
    labels: BTreeSet<Label>,
}

impl Usage {
    fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.labels.is_empty()
    }
}

struct Checker<'a> {
    sig: &'a Signature,
    q: &'a LabelContext,
    /// Scope stack; lookups search from the end so inner binders shadow.
    env: Vec<(Name, Id, Type)>,
    names: Vec<Name>,
}

type Out = Result<(Derivation, Usage), TypeError>;

impl<'a> Checker<'a> {
    fn new(sig: &'a Signature, q: &'a LabelContext) -> Self {
        Checker { sig, q, env: Vec::new(), names: Vec::new() }
    }

    fn bind(&mut self, x: &Name, t: Type) -> Id {
        let id = self.names.len() as Id;
        self.names.push(x.clone());
        self.env.push((x.clone(), id, t));
        id
    }

    /// Leaves the scope of `id`, which must have been consumed if linear.
    fn unbind(&mut self, id: Id, usage: &mut Usage, span: Span, rule: &'static str) -> Result<(), TypeError> {
        let (x, got, t) = self.env.pop().expect("scope stack is balanced");
        debug_assert_eq!(got, id);
        if !t.is_intuitionistic() && !usage.vars.remove(&id) {
            return Err(TypeError::new(K::LinearVarUnused, span).named(x).in_rule(rule));
        }
        Ok(())
    }

    fn join(&self, mut a: Usage, b: Usage, span: Span, rule: &'static str) -> Result<Usage, TypeError> {
        for v in b.vars {
            if !a.vars.insert(v) {
                return Err(TypeError::new(K::LinearVarReused, span).named(&self.names[v as usize]).in_rule(rule));
            }
        }
        for l in b.labels {
            if a.labels.contains(&l) {
                return Err(TypeError::new(K::LabelReused, span).named(l).in_rule(rule));
            }
            a.labels.insert(l);
        }
        Ok(a)
    }

    fn intuitionistic(&self, u: &Usage, span: Span, rule: &'static str) -> Result<(), TypeError> {
        if let Some(v) = u.vars.iter().next() {
            return Err(TypeError::new(K::LinearVarInIntuitionisticPosition, span)
                .named(&self.names[*v as usize])
                .in_rule(rule));
        }
        if let Some(l) = u.labels.iter().next() {
            return Err(TypeError::new(K::LinearVarInIntuitionisticPosition, span).named(l).in_rule(rule));
        }
        Ok(())
    }

    fn node(&self, rule: Rule, ty: Type, u: Usage, span: Span, premises: Vec<Derivation>) -> (Derivation, Usage) {
        let vars = u.vars.iter().map(|v| self.names[*v as usize].clone()).collect();
        let labels = u.labels.iter().cloned().collect();
        (Derivation { rule, ty, vars, labels, span, premises }, u)
    }

    fn go(&mut self, m: &Term, expected: Option<&Type>) -> Out {
        let (d, u) = self.go_inner(m, expected)?;
        if let Some(e) = expected {
            if *e != d.ty {
                return Err(TypeError::new(K::TypeMismatch, m.span)
                    .types(Some(e.clone()), Some(d.ty.clone()))
                    .in_rule(d.rule.name()));
            }
        }
        Ok((d, u))
    }

    fn go_inner(&mut self, m: &Term, expected: Option<&Type>) -> Out {
        let span = m.span;
        match &m.kind {
            TermKind::Var(x) => {
                let Some((_, id, t)) = self.env.iter().rev().find(|(y, _, _)| y == x) else {
                    return Err(TypeError::new(K::UnknownVariable, span).named(x).in_rule("var"));
                };
                let mut u = Usage::default();
                if !t.is_intuitionistic() {
                    u.vars.insert(*id);
                }
                let t = t.clone();
                Ok(self.node(Rule::Var(x.clone()), t, u, span, vec![]))
            }
            TermKind::Const(c) => {
                let Some(t) = self.sig.constant_type(c.as_str()) else {
                    return Err(TypeError::new(K::UnknownConstant, span).named(c).in_rule("const"));
                };
                Ok(self.node(Rule::Const(c.clone()), t, Usage::default(), span, vec![]))
            }
            TermKind::Label(l) => {
                let Some(w) = self.q.get(l) else {
                    return Err(TypeError::new(K::UnknownLabel, span).named(l).in_rule("label"));
                };
                let mut u = Usage::default();
                u.labels.insert(l.clone());
                Ok(self.node(Rule::Label(l.clone()), Type::Wire(w.clone()), u, span, vec![]))
            }
            TermKind::Star => Ok(self.node(Rule::Star, Type::Unit, Usage::default(), span, vec![])),
            TermKind::Let(x, a, b) => {
                let (da, ua) = self.go(a, None)?;
                let id = self.bind(x, da.ty.clone());
                let (db, mut ub) = self.go(b, expected)?;
                self.unbind(id, &mut ub, span, "let")?;
                let u = self.join(ua, ub, span, "let")?;
                let t = db.ty.clone();
                Ok(self.node(Rule::Let(x.clone()), t, u, span, vec![da, db]))
            }
            TermKind::Initial(c, a) => {
                let (da, ua) = self.go(a, None)?;
                if da.ty != Type::Zero {
                    return Err(TypeError::new(K::NotEmpty, a.span).types(Some(Type::Zero), Some(da.ty)).in_rule("initial"));
                }
                Ok(self.node(Rule::Initial, c.clone(), ua, span, vec![da]))
            }
            TermKind::Left(annot, a) | TermKind::Right(annot, a) => {
                let left = matches!(m.kind, TermKind::Left(..));
                let rule = if left { Rule::Left } else { Rule::Right };
                let (s, t) = match (annot, expected) {
                    (Some((s, t)), _) => (s.clone(), t.clone()),
                    (None, Some(Type::Sum(s, t))) => ((**s).clone(), (**t).clone()),
                    (None, Some(other)) => {
                        return Err(TypeError::new(K::NotASum, span).types(None, Some(other.clone())).in_rule(rule.name()))
                    }
                    (None, None) => return Err(TypeError::new(K::MissingAnnotation, span).in_rule(rule.name())),
                };
                let (da, ua) = self.go(a, Some(if left { &s } else { &t }))?;
                Ok(self.node(rule, Type::sum(s, t), ua, span, vec![da]))
            }
            TermKind::Case(s, x, n, y, p) => {
                let (ds, us) = self.go(s, None)?;
                let Type::Sum(a, b) = &ds.ty else {
                    return Err(TypeError::new(K::NotASum, s.span).types(None, Some(ds.ty.clone())).in_rule("case"));
                };
                let (a, b) = ((**a).clone(), (**b).clone());
                let branch = |me: &mut Self, z: &Name, t: &Type, body: &Term, exp: Option<&Type>| -> Out {
                    let id = me.bind(z, t.clone());
                    let (d, mut u) = me.go(body, exp)?;
                    me.unbind(id, &mut u, span, "case")?;
                    Ok((d, u))
                };
                let ((dn, un), (dp, up)) = match expected {
                    Some(_) => (branch(self, x, &a, n, expected)?, branch(self, y, &b, p, expected)?),
                    None => match branch(self, x, &a, n, None) {
                        Ok((dn, un)) => {
                            let c = dn.ty.clone();
                            ((dn, un), branch(self, y, &b, p, Some(&c))?)
                        }
                        Err(e) if e.kind == K::MissingAnnotation => {
                            let (dp, up) = branch(self, y, &b, p, None)?;
                            let c = dp.ty.clone();
                            (branch(self, x, &a, n, Some(&c))?, (dp, up))
                        }
                        Err(e) => return Err(e),
                    },
                };
                if un.vars != up.vars || un.labels != up.labels {
                    let odd_var = un.vars.symmetric_difference(&up.vars).next().map(|v| self.names[*v as usize].clone());
                    let odd = match odd_var {
                        Some(v) => alloc::format!("{v}"),
                        None => alloc::format!("{}", un.labels.symmetric_difference(&up.labels).next().unwrap()),
                    };
                    return Err(TypeError::new(K::CaseBranchResourceMismatch, span).named(odd).in_rule("case"));
                }
                let u = self.join(us, un, span, "case")?;
                let c = dn.ty.clone();
                Ok(self.node(Rule::Case(x.clone(), y.clone()), c, u, span, vec![ds, dn, dp]))
            }
            TermKind::Seq(a, b) => {
                let (da, ua) = self.go(a, Some(&Type::Unit))?;
                let (db, ub) = self.go(b, expected)?;
                let u = self.join(ua, ub, span, "seq")?;
                let t = db.ty.clone();
                Ok(self.node(Rule::Seq, t, u, span, vec![da, db]))
            }
            TermKind::Pair(a, b) => {
                let (ea, eb) = match expected {
                    Some(Type::Tensor(x, y)) => (Some(&**x), Some(&**y)),
                    _ => (None, None),
                };
                let (da, ua) = self.go(a, ea)?;
                let (db, ub) = self.go(b, eb)?;
                let u = self.join(ua, ub, span, "pair")?;
                let t = Type::tensor(da.ty.clone(), db.ty.clone());
                Ok(self.node(Rule::Pair, t, u, span, vec![da, db]))
            }
            TermKind::LetPair(x, y, a, b) => {
                let (da, ua) = self.go(a, None)?;
                let Type::Tensor(s, t) = &da.ty else {
                    return Err(TypeError::new(K::NotATensor, a.span).types(None, Some(da.ty.clone())).in_rule("let-pair"));
                };
                let (s, t) = ((**s).clone(), (**t).clone());
                let ix = self.bind(x, s);
                let iy = self.bind(y, t);
                let (db, mut ub) = self.go(b, expected)?;
                self.unbind(iy, &mut ub, span, "let-pair")?;
                self.unbind(ix, &mut ub, span, "let-pair")?;
                let u = self.join(ua, ub, span, "let-pair")?;
                let ty = db.ty.clone();
                Ok(self.node(Rule::LetPair(x.clone(), y.clone()), ty, u, span, vec![da, db]))
            }
            TermKind::Lambda(x, a, body) => {
                let eb = match expected {
                    Some(Type::Lollipop(s, t)) if **s == *a => Some(&**t),
                    _ => None,
                };
                let id = self.bind(x, a.clone());
                let (db, mut ub) = self.go(body, eb)?;
                self.unbind(id, &mut ub, span, "abs")?;
                let t = Type::lolli(a.clone(), db.ty.clone());
                Ok(self.node(Rule::Abs(x.clone()), t, ub, span, vec![db]))
            }
            TermKind::App(f, a) => {
                let (df, uf) = self.go(f, None)?;
                let Type::Lollipop(s, t) = &df.ty else {
                    return Err(TypeError::new(K::NotAFunction, f.span).types(None, Some(df.ty.clone())).in_rule("app"));
                };
                let (s, t) = ((**s).clone(), (**t).clone());
                let (da, ua) = self.go(a, Some(&s))?;
                let u = self.join(uf, ua, span, "app")?;
                Ok(self.node(Rule::App, t, u, span, vec![df, da]))
            }
            TermKind::Lift(a) => {
                let ea = match expected {
                    Some(Type::Bang(t)) => Some(&**t),
                    _ => None,
                };
                let (da, ua) = self.go(a, ea)?;
                self.intuitionistic(&ua, span, "lift")?;
                let t = Type::bang(da.ty.clone());
                Ok(self.node(Rule::Lift, t, ua, span, vec![da]))
            }
            TermKind::Force(a) => {
                let ea = expected.map(|t| Type::bang(t.clone()));
                let (da, ua) = self.go(a, ea.as_ref())?;
                let Type::Bang(t) = &da.ty else {
                    return Err(TypeError::new(K::NotABang, a.span).types(None, Some(da.ty.clone())).in_rule("force"));
                };
                let t = (**t).clone();
                Ok(self.node(Rule::Force, t, ua, span, vec![da]))
            }
            TermKind::Box(t, a) => {
                let ea = match expected {
                    Some(Type::Diag(s, u)) if s == t => Some(Type::bang(Type::lolli(s.to_type(), u.to_type()))),
                    _ => None,
                };
                let (da, ua) = self.go(a, ea.as_ref())?;
                let bad = |kind| TypeError::new(kind, a.span).types(None, Some(da.ty.clone())).in_rule("box");
                let Type::Bang(f) = &da.ty else { return Err(bad(K::NotABang)) };
                let Type::Lollipop(s, u) = &**f else { return Err(bad(K::NotAFunction)) };
                let (Some(u), true) = (u.as_mtype(), **s == t.to_type()) else {
                    let want = Type::bang(Type::lolli(t.to_type(), (**u).clone()));
                    return Err(TypeError::new(K::TypeMismatch, a.span).types(Some(want), Some(da.ty.clone())).in_rule("box"));
                };
                Ok(self.node(Rule::Box, Type::Diag(t.clone(), u), ua, span, vec![da]))
            }
            TermKind::Apply(a, b) => {
                let (da, ua) = self.go(a, None)?;
                let Type::Diag(t, u) = &da.ty else {
                    return Err(TypeError::new(K::NotADiag, a.span).types(None, Some(da.ty.clone())).in_rule("apply"));
                };
                let (t, u) = (t.to_type(), u.to_type());
                let (db, ub) = self.go(b, Some(&t))?;
                let usage = self.join(ua, ub, span, "apply")?;
                Ok(self.node(Rule::Apply, u, usage, span, vec![da, db]))
            }
            TermKind::BoxedDiag(bd) => {
                let t = boxed_type(bd).map_err(|why| TypeError::new(K::MalformedDiagram, span).named(why).in_rule("diag"))?;
                Ok(self.node(Rule::Diag, t, Usage::default(), span, vec![]))
            }
            TermKind::Rec(x, t, body) => {
                let Type::Bang(a) = t else {
                    return Err(TypeError::new(K::NotABang, span).types(None, Some(t.clone())).in_rule("rec"));
                };
                let a = (**a).clone();
                let id = self.bind(x, t.clone());
                let (db, mut ub) = self.go(body, Some(&a))?;
                self.unbind(id, &mut ub, span, "rec")?;
                self.intuitionistic(&ub, span, "rec")?;
                Ok(self.node(Rule::Rec(x.clone()), a, ub, span, vec![db]))
            }
        }
    }
}

/// `Diag(T, U)` for a boxed diagram value whose boundary tuples enumerate
/// its domain and codomain.
fn boxed_type(bd: &BoxedDiagram) -> Result<Type, alloc::string::String> {
    let side = |tuple: &LabelTuple, q: &LabelContext| -> Result<MType, alloc::string::String> {
        let ls = tuple.labels();
        if !tuple.is_linear() || ls.len() != q.len() || !ls.iter().all(|l| q.contains(l)) {
            return Err(alloc::format!("tuple {tuple} does not enumerate {q}"));
        }
        Ok(tuple.mtype(&|l| q.get(l).cloned()).expect("labels are in q"))
    };
    let d: &LabelledDiagram = &bd.diagram;
    d.under().validate().map_err(|e| alloc::format!("{e}"))?;
    let t = side(&bd.inputs, d.dom())?;
    let u = side(&bd.outputs, d.cod())?;
    Ok(Type::Diag(t, u))
}

fn run(
    sig: &Signature,
    gamma: &VarContext,
    q: &LabelContext,
    m: &Term,
    expected: Option<&Type>,
) -> Result<TypingDerivation, TypeError> {
    let mut c = Checker::new(sig, q);
    for (x, t) in gamma.iter() {
        c.bind(x, t.clone());
    }
    let (tree, mut u) = c.go(m, expected)?;
    for (id, (x, t)) in gamma.iter().enumerate() {
        if !t.is_intuitionistic() && !u.vars.remove(&(id as Id)) {
            return Err(TypeError::new(K::LinearVarUnused, m.span).named(x));
        }
    }
    for l in q.labels() {
        if !u.labels.remove(l) {
            return Err(TypeError::new(K::LabelUnused, m.span).named(l));
        }
    }
    debug_assert!(u.is_empty());
    Ok(TypingDerivation { gamma: gamma.clone(), q: q.clone(), term: m.clone(), ty: tree.ty.clone(), tree })
}

/// Checks `gamma; q |- m : expected`.
pub fn check(
    sig: &Signature,
    gamma: &VarContext,
    q: &LabelContext,
    m: &Term,
    expected: &Type,
) -> Result<TypingDerivation, TypeError> {
    run(sig, gamma, q, m, Some(expected))
}

/// Synthesizes the type of `m`. Unannotated injections need an expected
/// type and are rejected here unless a surrounding form supplies one.
pub fn infer(sig: &Signature, gamma: &VarContext, q: &LabelContext, m: &Term) -> Result<TypingDerivation, TypeError> {
    run(sig, gamma, q, m, None)
}

/// Checks `q |- (s, m) : a; q'` and returns `(q', q'')`, where `q''` are the
/// outputs of `s` consumed by `m` and `q'` the rest.
pub fn check_configuration(
    sig: &Signature,
    q: &LabelContext,
    s: &LabelledDiagram,
    m: &Term,
    a: &Type,
) -> Result<(LabelContext, LabelContext), TypeError> {
    if !s.dom().same_as(q) {
        return Err(TypeError::new(K::ConfigurationMismatch, m.span).named(alloc::format!("{} vs {q}", s.dom())));
    }
    let used = free_labels(m);
    if let Some(l) = used.iter().find(|l| !s.cod().contains(l)) {
        return Err(TypeError::new(K::DanglingLabel, m.span).named(l));
    }
    let q2 = s.cod().filter(|l| used.contains(l));
    let q1 = s.cod().filter(|l| !used.contains(l));
    check(sig, &VarContext::new(), &q2, m, a)?;
    Ok((q1, q2))
}
