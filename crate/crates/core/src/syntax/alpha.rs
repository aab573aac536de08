use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{BoxedDiagram, Name, Term, TermKind};

/// Equality up to renaming of bound variables.
///
/// Bound occurrences are compared by de Bruijn index computed on the fly;
/// boxed diagrams are compared up to renaming of their internal labels.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    eq(a, b, &mut Vec::new(), &mut Vec::new())
}

fn index_of(env: &[Name], x: &Name) -> Option<usize> {
    env.iter().rev().position(|y| y == x)
}

fn under(names_a: &[&Name], a: &Term, names_b: &[&Name], b: &Term, ea: &mut Vec<Name>, eb: &mut Vec<Name>) -> bool {
    let (na, nb) = (ea.len(), eb.len());
    ea.extend(names_a.iter().map(|x| (*x).clone()));
    eb.extend(names_b.iter().map(|x| (*x).clone()));
    let r = eq(a, b, ea, eb);
    ea.truncate(na);
    eb.truncate(nb);
    r
}

fn eq(a: &Term, b: &Term, ea: &mut Vec<Name>, eb: &mut Vec<Name>) -> bool {
    use TermKind as K;
    match (&a.kind, &b.kind) {
        (K::Var(x), K::Var(y)) => match (index_of(ea, x), index_of(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (K::Const(x), K::Const(y)) => x == y,
        (K::Star, K::Star) => true,
        (K::Label(l), K::Label(k)) => l == k,
        (K::BoxedDiag(d), K::BoxedDiag(e)) => boxed_eq(d, e),
        (K::Let(x, m, n), K::Let(y, p, q)) => eq(m, p, ea, eb) && under(&[x], n, &[y], q, ea, eb),
        (K::Initial(s, m), K::Initial(t, n)) => s == t && eq(m, n, ea, eb),
        (K::Left(s, m), K::Left(t, n)) | (K::Right(s, m), K::Right(t, n)) => s == t && eq(m, n, ea, eb),
        (K::Case(m, x, n, y, p), K::Case(m2, x2, n2, y2, p2)) => {
            eq(m, m2, ea, eb) && under(&[x], n, &[x2], n2, ea, eb) && under(&[y], p, &[y2], p2, ea, eb)
        }
        (K::Seq(m, n), K::Seq(p, q))
        | (K::Pair(m, n), K::Pair(p, q))
        | (K::App(m, n), K::App(p, q))
        | (K::Apply(m, n), K::Apply(p, q)) => eq(m, p, ea, eb) && eq(n, q, ea, eb),
        (K::LetPair(x, y, m, n), K::LetPair(x2, y2, p, q)) => {
            eq(m, p, ea, eb) && under(&[x, y], n, &[x2, y2], q, ea, eb)
        }
        (K::Lambda(x, s, m), K::Lambda(y, t, n)) | (K::Rec(x, s, m), K::Rec(y, t, n)) => {
            s == t && under(&[x], m, &[y], n, ea, eb)
        }
        (K::Lift(m), K::Lift(n)) | (K::Force(m), K::Force(n)) => eq(m, n, ea, eb),
        (K::Box(s, m), K::Box(t, n)) => s == t && eq(m, n, ea, eb),
        _ => false,
    }
}

fn boxed_eq(d: &BoxedDiagram, e: &BoxedDiagram) -> bool {
    if !d.inputs.same_shape(&e.inputs) || !d.outputs.same_shape(&e.outputs) {
        return false;
    }
    let dom: BTreeMap<_, _> = d.inputs.labels().into_iter().zip(e.inputs.labels()).collect();
    let cod: BTreeMap<_, _> = d.outputs.labels().into_iter().zip(e.outputs.labels()).collect();
    match d.diagram.rename_boundary(&dom, &cod) {
        Ok(renamed) => renamed.morphism_eq(&e.diagram),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Type;

    #[test]
    fn renaming_bound_variables() {
        let a = Term::lam("x", Type::Unit, Term::var("x"));
        let b = Term::lam("y", Type::Unit, Term::var("y"));
        assert!(alpha_eq(&a, &b));
        let c = Term::lam("y", Type::Unit, Term::var("x"));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn free_variables_compared_by_name() {
        assert!(alpha_eq(&Term::var("z"), &Term::var("z")));
        assert!(!alpha_eq(&Term::var("z"), &Term::var("w")));
        // A free name must not match a bound one.
        let a = Term::lam("x", Type::Unit, Term::var("z"));
        let b = Term::lam("z", Type::Unit, Term::var("z"));
        assert!(!alpha_eq(&a, &b));
    }

    #[test]
    fn let_pair_and_case_binders() {
        let a = Term::let_pair("a", "b", Term::var("p"), Term::pair(Term::var("b"), Term::var("a")));
        let b = Term::let_pair("u", "v", Term::var("p"), Term::pair(Term::var("v"), Term::var("u")));
        let c = Term::let_pair("u", "v", Term::var("p"), Term::pair(Term::var("u"), Term::var("v")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
        let s = Term::case(Term::var("s"), "x", Term::var("x"), "y", Term::var("y"));
        let t = Term::case(Term::var("s"), "p", Term::var("p"), "q", Term::var("q"));
        assert!(alpha_eq(&s, &t));
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        let a = Term::lam("x", Type::Unit, Term::lam("x", Type::Unit, Term::var("x")));
        let b = Term::lam("y", Type::Unit, Term::lam("z", Type::Unit, Term::var("z")));
        let c = Term::lam("y", Type::Unit, Term::lam("z", Type::Unit, Term::var("y")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }
}
