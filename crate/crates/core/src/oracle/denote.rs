use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::domain::{Domain, Elem, View, BOTTOM};
use super::{Oracle, OracleError, StrictMap};
use crate::syntax::{free_vars, Name, Term, TermKind, Type};
use crate::typeck::{Derivation, TypingDerivation};

impl Oracle {
    /// The denotation of a derivation `Gamma |- m : A` as a strict map from
    /// the smash product of `Gamma` to `A`.
    pub fn denote_term(&self, d: &TypingDerivation) -> Result<StrictMap, OracleError> {
        let names: Vec<Name> = d.gamma.iter().map(|(x, _)| x.clone()).collect();
        let types: Vec<Type> = d.gamma.iter().map(|(_, t)| t.clone()).collect();
        let dom = self.denote_type(&Oracle::context_type(&types))?;
        let cod = self.denote_type(&d.ty)?;
        let comps: Vec<Arc<Domain>> = types.iter().map(|t| self.denote_type(t)).collect::<Result<_, _>>()?;
        let mut den = Denoter { oracle: self, env: Vec::new(), memo: BTreeMap::new() };
        let mut table = Vec::with_capacity(dom.size());
        for x in dom.elements() {
            if x == BOTTOM {
                table.push(BOTTOM);
                continue;
            }
            let vals = if comps.is_empty() { Vec::new() } else { split_context(&dom, comps.len(), x) };
            den.env = names.iter().cloned().zip(comps.iter().cloned()).zip(vals).map(|((n, c), v)| (n, c, v)).collect();
            table.push(den.eval(&d.term, &d.tree)?);
        }
        let m = StrictMap::new(dom, cod, table)?;
        Ok(m)
    }

    /// The point denoted by a closed term, read off at the defined point of `I`.
    pub fn denote_closed(&self, d: &TypingDerivation) -> Result<Elem, OracleError> {
        Ok(self.denote_term(d)?.at(1))
    }
}

/// Undoes the left fold of a context element into its components.
fn split_context(dom: &Domain, n: usize, x: Elem) -> Vec<Elem> {
    if n == 1 {
        return alloc::vec![x];
    }
    let View::Pair(rest, last) = dom.view(x) else { unreachable!("defined context point") };
    let crate::oracle::Shape::Tensor(left, _) = &dom.shape else { unreachable!() };
    let mut out = split_context(left, n - 1, rest);
    out.push(last);
    out
}

struct Denoter<'a> {
    oracle: &'a Oracle,
    env: Vec<(Name, Arc<Domain>, Elem)>,
    /// Fixpoints already computed, keyed by the rec node and its free variables.
    memo: BTreeMap<(usize, Vec<Elem>), Elem>,
}

impl Denoter<'_> {
    fn ty(&self, t: &Type) -> Result<Arc<Domain>, OracleError> {
        self.oracle.denote_type(t)
    }

    fn lookup(&self, x: &Name) -> Elem {
        self.env.iter().rev().find(|(y, _, _)| y == x).map(|(_, _, v)| *v).expect("typed terms have bound variables")
    }

    fn bind<R>(&mut self, binds: &[(Name, Arc<Domain>, Elem)], f: impl FnOnce(&mut Self) -> R) -> R {
        let n = self.env.len();
        self.env.extend_from_slice(binds);
        let r = f(self);
        self.env.truncate(n);
        r
    }

    /// The value at the current (defined) environment.
    fn eval(&mut self, m: &Term, d: &Derivation) -> Result<Elem, OracleError> {
        let p = &d.premises;
        Ok(match &m.kind {
            TermKind::Var(x) => self.lookup(x),
            TermKind::Star => 1,
            TermKind::Let(x, a, b) => {
                let v = self.eval(a, &p[0])?;
                if v == BOTTOM {
                    return Ok(BOTTOM);
                }
                let da = self.ty(&p[0].ty)?;
                self.bind(&[(x.clone(), da, v)], |s| s.eval(b, &p[1]))?
            }
            TermKind::Initial(_, a) => {
                self.eval(a, &p[0])?;
                BOTTOM
            }
            TermKind::Left(_, a) => {
                let v = self.eval(a, &p[0])?;
                self.ty(&d.ty)?.inl(v)
            }
            TermKind::Right(_, a) => {
                let v = self.eval(a, &p[0])?;
                self.ty(&d.ty)?.inr(v)
            }
            TermKind::Case(s, x, n, y, q) => {
                let ds = self.ty(&p[0].ty)?;
                let v = self.eval(s, &p[0])?;
                let crate::oracle::Shape::Sum(da, db) = &ds.shape else { unreachable!() };
                match ds.view(v) {
                    View::Inl(a) => self.bind(&[(x.clone(), da.clone(), a)], |s| s.eval(n, &p[1]))?,
                    View::Inr(b) => self.bind(&[(y.clone(), db.clone(), b)], |s| s.eval(q, &p[2]))?,
                    _ => BOTTOM,
                }
            }
            TermKind::Seq(a, b) => {
                if self.eval(a, &p[0])? == BOTTOM {
                    return Ok(BOTTOM);
                }
                self.eval(b, &p[1])?
            }
            TermKind::Pair(a, b) => {
                let va = self.eval(a, &p[0])?;
                let vb = self.eval(b, &p[1])?;
                self.ty(&d.ty)?.pair(va, vb)
            }
            TermKind::LetPair(x, y, a, b) => {
                let dp = self.ty(&p[0].ty)?;
                let v = self.eval(a, &p[0])?;
                let crate::oracle::Shape::Tensor(da, db) = &dp.shape else { unreachable!() };
                match dp.view(v) {
                    View::Pair(va, vb) => {
                        let binds = [(x.clone(), da.clone(), va), (y.clone(), db.clone(), vb)];
                        self.bind(&binds, |s| s.eval(b, &p[1]))?
                    }
                    _ => BOTTOM,
                }
            }
            TermKind::Lambda(x, a, body) => {
                let da = self.ty(a)?;
                let df = self.ty(&d.ty)?;
                let mut table = Vec::with_capacity(da.size());
                for v in da.elements() {
                    if v == BOTTOM {
                        table.push(BOTTOM);
                    } else {
                        table.push(self.bind(&[(x.clone(), da.clone(), v)], |s| s.eval(body, &p[0]))?);
                    }
                }
                let (_, _, fs) = df.fun_space().expect("function type");
                fs.index_of(&table).ok_or_else(|| OracleError::NotAStrictMap("lambda body is not monotone".into()))?
            }
            TermKind::App(f, a) => {
                let df = self.ty(&p[0].ty)?;
                let vf = self.eval(f, &p[0])?;
                let va = self.eval(a, &p[1])?;
                df.apply(vf, va)
            }
            TermKind::Lift(a) => {
                let v = self.eval(a, &p[0])?;
                self.ty(&d.ty)?.up(v)
            }
            TermKind::Force(a) => {
                let db = self.ty(&p[0].ty)?;
                match db.view(self.eval(a, &p[0])?) {
                    View::Up(v) => v,
                    _ => BOTTOM,
                }
            }
            TermKind::Rec(x, bang_a, body) => self.fixpoint(m, x, bang_a, body, d)?,
            TermKind::Const(c) => return Err(OracleError::Unsupported(alloc::format!("constant {c}"))),
            TermKind::Label(l) => return Err(OracleError::Unsupported(alloc::format!("label {l}"))),
            TermKind::Box(..) => return Err(OracleError::Unsupported("box".into())),
            TermKind::Apply(..) => return Err(OracleError::Unsupported("apply".into())),
            TermKind::BoxedDiag(_) => return Err(OracleError::Unsupported("boxed diagram".into())),
        })
    }

    /// Kleene iteration of `f |-> m . (id * !f) . (id * lift) . copy` from
    /// bottom. The iterate at an environment only reads its own previous
    /// value there, so each environment point is iterated on its own.
    fn fixpoint(&mut self, m: &Term, x: &Name, bang_a: &Type, body: &Term, d: &Derivation) -> Result<Elem, OracleError> {
        let key_vars: Vec<Elem> = free_vars(m).iter().map(|y| self.lookup(y)).collect();
        let key = (m as *const Term as usize, key_vars);
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        let dx = self.ty(bang_a)?;
        let da = self.ty(&d.ty)?;
        let bound = da.height() + 1;
        let mut cur = BOTTOM;
        let mut steps = 0;
        loop {
            let next = self.bind(&[(x.clone(), dx.clone(), dx.up(cur))], |s| s.eval(body, &d.premises[0]))?;
            if next == cur {
                break;
            }
            assert!(da.leq(cur, next), "Kleene iterates must ascend");
            steps += 1;
            assert!(steps <= bound, "Kleene iteration exceeded the chain bound {bound}");
            cur = next;
        }
        self.memo.insert(key, cur);
        Ok(cur)
    }
}
