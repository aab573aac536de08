use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{Label, Name, Term, TermKind};

pub fn free_vars(m: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_fv(m, &mut Vec::new(), &mut out);
    out
}

fn collect_fv(m: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    let under = |names: &[&Name], body: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>| {
        let n = bound.len();
        bound.extend(names.iter().map(|x| (*x).clone()));
        collect_fv(body, bound, out);
        bound.truncate(n);
    };
    match &m.kind {
        TermKind::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        TermKind::Let(x, a, body) => {
            collect_fv(a, bound, out);
            under(&[x], body, bound, out);
        }
        TermKind::Case(s, x, n, y, p) => {
            collect_fv(s, bound, out);
            under(&[x], n, bound, out);
            under(&[y], p, bound, out);
        }
        TermKind::LetPair(x, y, a, body) => {
            collect_fv(a, bound, out);
            under(&[x, y], body, bound, out);
        }
        TermKind::Lambda(x, _, body) | TermKind::Rec(x, _, body) => under(&[x], body, bound, out),
        _ => m.for_each_child(&mut |c| collect_fv(c, bound, out)),
    }
}

/// Labels occurring in `m` outside boxed diagrams. A boxed diagram
/// `(l, S, l')` is closed: its labels name the boundary of `S` only.
pub fn free_labels(m: &Term) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    collect_labels(m, &mut out);
    out
}

fn collect_labels(m: &Term, out: &mut BTreeSet<Label>) {
    match &m.kind {
        TermKind::Label(l) => {
            out.insert(l.clone());
        }
        TermKind::BoxedDiag(_) => {}
        _ => m.for_each_child(&mut |c| collect_labels(c, out)),
    }
}

pub fn is_value(m: &Term) -> bool {
    match &m.kind {
        TermKind::Var(_)
        | TermKind::Const(_)
        | TermKind::Star
        | TermKind::Lambda(..)
        | TermKind::Lift(_)
        | TermKind::Label(_)
        | TermKind::BoxedDiag(_) => true,
        TermKind::Left(_, v) | TermKind::Right(_, v) => is_value(v),
        TermKind::Pair(v, w) => is_value(v) && is_value(w),
        _ => false,
    }
}

/// A name derived from `base` that is not in `avoid`.
pub fn fresh_name(base: &Name, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.as_str().split('_').next().unwrap_or("x");
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|i| Name::from(format!("{stem}_{i}")))
        .find(|n| !avoid.contains(n))
        .unwrap()
}

/// Capture-avoiding `m[v / x]`.
pub fn substitute(m: &Term, v: &Term, x: &Name) -> Term {
    substitute_many(m, &[(x.clone(), v.clone())])
}

/// Simultaneous capture-avoiding substitution `m[v1/x1, ..., vn/xn]`.
pub fn substitute_many(m: &Term, subst: &[(Name, Term)]) -> Term {
    let mut fvs = BTreeSet::new();
    for (_, v) in subst {
        fvs.extend(free_vars(v));
    }
    let map: Vec<(Name, Term)> = subst.to_vec();
    go(m, &map, &fvs)
}

fn go(m: &Term, map: &[(Name, Term)], fvs: &BTreeSet<Name>) -> Term {
    if map.is_empty() {
        return m.clone();
    }
    let span = m.span;
    let r = |t: &Term| alloc::boxed::Box::new(go(t, map, fvs));
    let kind = match &m.kind {
        TermKind::Var(y) => match map.iter().find(|(x, _)| x == y) {
            Some((_, v)) => return v.clone(),
            None => TermKind::Var(y.clone()),
        },
        TermKind::Let(y, a, body) => {
            let (y, body) = binder(&[y], body, map, fvs);
            TermKind::Let(y[0].clone(), r(a), alloc::boxed::Box::new(body))
        }
        TermKind::Case(s, x, n, y, p) => {
            let (x, n) = binder(&[x], n, map, fvs);
            let (y, p) = binder(&[y], p, map, fvs);
            TermKind::Case(r(s), x[0].clone(), alloc::boxed::Box::new(n), y[0].clone(), alloc::boxed::Box::new(p))
        }
        TermKind::LetPair(x, y, a, body) => {
            let (xy, body) = binder(&[x, y], body, map, fvs);
            TermKind::LetPair(xy[0].clone(), xy[1].clone(), r(a), alloc::boxed::Box::new(body))
        }
        TermKind::Lambda(x, t, body) => {
            let (x, body) = binder(&[x], body, map, fvs);
            TermKind::Lambda(x[0].clone(), t.clone(), alloc::boxed::Box::new(body))
        }
        TermKind::Rec(x, t, body) => {
            let (x, body) = binder(&[x], body, map, fvs);
            TermKind::Rec(x[0].clone(), t.clone(), alloc::boxed::Box::new(body))
        }
        TermKind::Const(c) => TermKind::Const(c.clone()),
        TermKind::Star => TermKind::Star,
        TermKind::Label(l) => TermKind::Label(l.clone()),
        TermKind::BoxedDiag(d) => TermKind::BoxedDiag(d.clone()),
        TermKind::Initial(t, a) => TermKind::Initial(t.clone(), r(a)),
        TermKind::Left(t, a) => TermKind::Left(t.clone(), r(a)),
        TermKind::Right(t, a) => TermKind::Right(t.clone(), r(a)),
        TermKind::Lift(a) => TermKind::Lift(r(a)),
        TermKind::Force(a) => TermKind::Force(r(a)),
        TermKind::Box(t, a) => TermKind::Box(t.clone(), r(a)),
        TermKind::Seq(a, c) => TermKind::Seq(r(a), r(c)),
        TermKind::Pair(a, c) => TermKind::Pair(r(a), r(c)),
        TermKind::App(a, c) => TermKind::App(r(a), r(c)),
        TermKind::Apply(a, c) => TermKind::Apply(r(a), r(c)),
    };
    Term::new(kind, span)
}

/// Pushes the substitution under binders `ys`, renaming any binder that
/// would capture a free variable of the substituted values.
fn binder(ys: &[&Name], body: &Term, map: &[(Name, Term)], fvs: &BTreeSet<Name>) -> (Vec<Name>, Term) {
    let inner: Vec<(Name, Term)> = map.iter().filter(|(x, _)| !ys.contains(&x)).cloned().collect();
    let names: Vec<Name> = ys.iter().map(|y| (*y).clone()).collect();
    if inner.is_empty() {
        return (names, body.clone());
    }
    let body_fv = free_vars(body);
    if !inner.iter().any(|(x, _)| body_fv.contains(x)) {
        return (names, body.clone());
    }
    if !names.iter().any(|y| fvs.contains(y)) {
        return (names, go(body, &inner, fvs));
    }
    let mut avoid = fvs.clone();
    avoid.extend(body_fv.iter().cloned());
    avoid.extend(inner.iter().map(|(x, _)| x.clone()));
    avoid.extend(names.iter().cloned());
    let mut renamed = Vec::new();
    let mut renaming = Vec::new();
    for y in &names {
        if fvs.contains(y) {
            let z = fresh_name(y, &avoid);
            avoid.insert(z.clone());
            renaming.push((y.clone(), Term::from(TermKind::Var(z.clone()))));
            renamed.push(z);
        } else {
            renamed.push(y.clone());
        }
    }
    let body = substitute_many(body, &renaming);
    (renamed, go(&body, &inner, fvs))
}
