use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::OracleError;
use crate::syntax::Type;

/// An element of a [`Domain`], by index. Index 0 is always bottom.
pub type Elem = u32;

pub const BOTTOM: Elem = 0;

/// Above this many elements a carrier is not materialized.
pub const MAX_CARRIER: usize = 1_000_000;

/// The pointed finite poset interpreting a diagram-free type.
///
/// Elements are numbered so that index order is a linear extension of the
/// partial order:
///
/// * `I`: `0 = bot`, `1 = *`.
/// * `A + B` (coalesced): `inl a = a`, `inr b = |A| - 1 + b`.
/// * `A * B` (smash): `(a, b) = 1 + (a - 1)(|B| - 1) + (b - 1)`.
/// * `!A` (lift keeping the order of `A`): `up a = 1 + a`.
/// * `A -o B`: the strict monotone maps, in lexicographic order of tables.
#[derive(Debug)]
pub struct Domain {
    pub ty: Type,
    pub shape: Shape,
    size: usize,
}

#[derive(Debug)]
pub enum Shape {
    Zero,
    Unit,
    Sum(Arc<Domain>, Arc<Domain>),
    Tensor(Arc<Domain>, Arc<Domain>),
    Bang(Arc<Domain>),
    Fun(Arc<Domain>, Arc<Domain>, FunSpace),
}

/// All strict monotone maps between two domains.
#[derive(Debug)]
pub struct FunSpace {
    tables: Vec<Vec<Elem>>,
    index: BTreeMap<Vec<Elem>, Elem>,
}

impl FunSpace {
    pub fn table(&self, f: Elem) -> &[Elem] {
        &self.tables[f as usize]
    }

    pub fn index_of(&self, table: &[Elem]) -> Option<Elem> {
        self.index.get(table).copied()
    }
}

/// A view of an element by its structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum View {
    Bottom,
    Star,
    Inl(Elem),
    Inr(Elem),
    Pair(Elem, Elem),
    Up(Elem),
    Fun(Elem),
}

impl Domain {
    pub(crate) fn zero() -> Self {
        Domain { ty: Type::Zero, shape: Shape::Zero, size: 1 }
    }

    pub(crate) fn unit() -> Self {
        Domain { ty: Type::Unit, shape: Shape::Unit, size: 2 }
    }

    pub(crate) fn sum(a: Arc<Domain>, b: Arc<Domain>) -> Result<Self, OracleError> {
        let size = a.size + b.size - 1;
        let ty = Type::sum(a.ty.clone(), b.ty.clone());
        guard(size, &ty)?;
        Ok(Domain { ty, shape: Shape::Sum(a, b), size })
    }

    pub(crate) fn tensor(a: Arc<Domain>, b: Arc<Domain>) -> Result<Self, OracleError> {
        let size = (a.size - 1).checked_mul(b.size - 1).and_then(|n| n.checked_add(1)).unwrap_or(usize::MAX);
        let ty = Type::tensor(a.ty.clone(), b.ty.clone());
        guard(size, &ty)?;
        Ok(Domain { ty, shape: Shape::Tensor(a, b), size })
    }

    pub(crate) fn bang(a: Arc<Domain>) -> Result<Self, OracleError> {
        let size = a.size + 1;
        let ty = Type::bang(a.ty.clone());
        guard(size, &ty)?;
        Ok(Domain { ty, shape: Shape::Bang(a), size })
    }

    pub(crate) fn fun(a: Arc<Domain>, b: Arc<Domain>) -> Result<Self, OracleError> {
        let ty = Type::lolli(a.ty.clone(), b.ty.clone());
        let tables = strict_monotone_maps(&a, &b, &ty)?;
        let index = tables.iter().enumerate().map(|(i, t)| (t.clone(), i as Elem)).collect();
        let size = tables.len();
        Ok(Domain { ty, shape: Shape::Fun(a, b, FunSpace { tables, index }), size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size as Elem
    }

    pub fn view(&self, e: Elem) -> View {
        if e == BOTTOM {
            return View::Bottom;
        }
        match &self.shape {
            Shape::Zero => unreachable!("0 has only bottom"),
            Shape::Unit => View::Star,
            Shape::Sum(a, _) => {
                let na = a.size as Elem;
                if e < na {
                    View::Inl(e)
                } else {
                    View::Inr(e - na + 1)
                }
            }
            Shape::Tensor(_, b) => {
                let nb = (b.size - 1) as Elem;
                let k = e - 1;
                View::Pair(k / nb + 1, k % nb + 1)
            }
            Shape::Bang(_) => View::Up(e - 1),
            Shape::Fun(..) => View::Fun(e),
        }
    }

    pub fn inl(&self, a: Elem) -> Elem {
        debug_assert!(matches!(self.shape, Shape::Sum(..)));
        a
    }

    pub fn inr(&self, b: Elem) -> Elem {
        let Shape::Sum(a, _) = &self.shape else { panic!("inr outside a sum") };
        if b == BOTTOM {
            BOTTOM
        } else {
            a.size as Elem - 1 + b
        }
    }

    /// The smash pair: bottom if either side is.
    pub fn pair(&self, a: Elem, b: Elem) -> Elem {
        let Shape::Tensor(_, db) = &self.shape else { panic!("pair outside a tensor") };
        if a == BOTTOM || b == BOTTOM {
            BOTTOM
        } else {
            1 + (a - 1) * (db.size as Elem - 1) + (b - 1)
        }
    }

    pub fn up(&self, a: Elem) -> Elem {
        debug_assert!(matches!(self.shape, Shape::Bang(_)));
        a + 1
    }

    pub fn star(&self) -> Elem {
        debug_assert!(matches!(self.shape, Shape::Unit));
        1
    }

    pub fn fun_space(&self) -> Option<(&Arc<Domain>, &Arc<Domain>, &FunSpace)> {
        match &self.shape {
            Shape::Fun(a, b, fs) => Some((a, b, fs)),
            _ => None,
        }
    }

    /// Applies a function element to an argument.
    pub fn apply(&self, f: Elem, a: Elem) -> Elem {
        let (_, _, fs) = self.fun_space().expect("apply on a function space");
        fs.table(f)[a as usize]
    }

    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        if x == BOTTOM || x == y {
            return true;
        }
        if y == BOTTOM {
            return false;
        }
        match (&self.shape, self.view(x), self.view(y)) {
            (Shape::Sum(a, _), View::Inl(p), View::Inl(q)) => a.leq(p, q),
            (Shape::Sum(_, b), View::Inr(p), View::Inr(q)) => b.leq(p, q),
            (Shape::Tensor(a, b), View::Pair(p1, p2), View::Pair(q1, q2)) => a.leq(p1, q1) && b.leq(p2, q2),
            (Shape::Bang(a), View::Up(p), View::Up(q)) => a.leq(p, q),
            (Shape::Fun(_, b, fs), _, _) => {
                fs.table(x).iter().zip(fs.table(y)).all(|(p, q)| b.leq(*p, *q))
            }
            _ => false,
        }
    }

    /// Number of elements in a longest chain, minus one.
    pub fn height(&self) -> usize {
        match &self.shape {
            Shape::Zero => 0,
            Shape::Unit => 1,
            Shape::Sum(a, b) => a.height().max(b.height()),
            Shape::Tensor(a, b) => {
                if a.size == 1 || b.size == 1 {
                    0
                } else {
                    a.height() + b.height() - 1
                }
            }
            Shape::Bang(a) => a.height() + 1,
            Shape::Fun(a, b, _) => (a.size - 1) * b.height(),
        }
    }

    pub fn describe(&self, e: Elem) -> String {
        match (self.view(e), &self.shape) {
            (View::Bottom, _) => String::from("bot"),
            (View::Star, _) => String::from("*"),
            (View::Inl(a), Shape::Sum(da, _)) => alloc::format!("inl {}", da.describe_atom(a)),
            (View::Inr(b), Shape::Sum(_, db)) => alloc::format!("inr {}", db.describe_atom(b)),
            (View::Pair(a, b), Shape::Tensor(da, db)) => alloc::format!("<{}, {}>", da.describe(a), db.describe(b)),
            (View::Up(a), Shape::Bang(da)) => alloc::format!("up {}", da.describe_atom(a)),
            (View::Fun(f), Shape::Fun(da, db, fs)) => {
                let mut s = String::from("{");
                let mut first = true;
                for (x, y) in fs.table(f).iter().enumerate() {
                    if *y == BOTTOM {
                        continue;
                    }
                    if !first {
                        s.push_str(", ");
                    }
                    first = false;
                    s.push_str(&alloc::format!("{} => {}", da.describe(x as Elem), db.describe(*y)));
                }
                s.push('}');
                s
            }
            _ => unreachable!(),
        }
    }

    fn describe_atom(&self, e: Elem) -> String {
        let s = self.describe(e);
        if s.contains(' ') && !s.starts_with('<') && !s.starts_with('{') {
            alloc::format!("({s})")
        } else {
            s
        }
    }

    /// The explicit poset, for checking the order axioms.
    pub fn poset(&self) -> FinPoset {
        let n = self.size;
        let mut leq = Vec::with_capacity(n * n);
        for x in 0..n as Elem {
            for y in 0..n as Elem {
                leq.push(self.leq(x, y));
            }
        }
        FinPoset { size: n, leq }
    }
}

fn guard(size: usize, ty: &Type) -> Result<(), OracleError> {
    if size > MAX_CARRIER {
        Err(OracleError::CarrierTooLarge(ty.clone()))
    } else {
        Ok(())
    }
}

/// Backtracking over tables in index order of the domain, which is a linear
/// extension of its order: each new entry only has to dominate the entries
/// of the elements below it.
fn strict_monotone_maps(a: &Domain, b: &Domain, ty: &Type) -> Result<Vec<Vec<Elem>>, OracleError> {
    let n = a.size;
    let below: Vec<Vec<Elem>> =
        (0..n as Elem).map(|x| (0..x).filter(|&y| a.leq(y, x)).collect()).collect();
    let mut out = Vec::new();
    let mut table = alloc::vec![BOTTOM; n];
    fn go(
        x: usize,
        table: &mut Vec<Elem>,
        below: &[Vec<Elem>],
        b: &Domain,
        out: &mut Vec<Vec<Elem>>,
        ty: &Type,
    ) -> Result<(), OracleError> {
        if x == table.len() {
            if out.len() >= MAX_CARRIER {
                return Err(OracleError::CarrierTooLarge(ty.clone()));
            }
            out.push(table.clone());
            return Ok(());
        }
        for y in b.elements() {
            if below[x].iter().all(|&w| b.leq(table[w as usize], y)) {
                table[x] = y;
                go(x + 1, table, below, b, out, ty)?;
            }
        }
        Ok(())
    }
    if n == 0 {
        return Ok(out);
    }
    // Strictness fixes the first entry.
    go(1, &mut table, &below, b, &mut out, ty)?;
    Ok(out)
}

/// A finite poset given by its order relation, with element 0 as bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    size: usize,
    leq: Vec<bool>,
}

impl FinPoset {
    /// Builds a poset from a relation and checks reflexivity, antisymmetry,
    /// transitivity and that element 0 is least.
    pub fn new(size: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self, OracleError> {
        let mut m = Vec::with_capacity(size * size);
        for x in 0..size {
            for y in 0..size {
                m.push(leq(x, y));
            }
        }
        let p = FinPoset { size, leq: m };
        p.validate()?;
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.size + y]
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        let bad = |why: &str| Err(OracleError::NotAPoset(String::from(why)));
        if self.size == 0 {
            return bad("empty carrier");
        }
        for x in 0..self.size {
            if !self.leq(x, x) {
                return bad("not reflexive");
            }
            if !self.leq(0, x) {
                return bad("element 0 is not least");
            }
            for y in 0..self.size {
                if x != y && self.leq(x, y) && self.leq(y, x) {
                    return bad("not antisymmetric");
                }
                if self.leq(x, y) {
                    for z in 0..self.size {
                        if self.leq(y, z) && !self.leq(x, z) {
                            return bad("not transitive");
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
