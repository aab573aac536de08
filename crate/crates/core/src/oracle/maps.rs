use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::domain::{Domain, Elem, View, BOTTOM};
use super::{Oracle, OracleError};

/// A strict monotone map between two domains, as a table.
#[derive(Clone, Debug)]
pub struct StrictMap {
    dom: Arc<Domain>,
    cod: Arc<Domain>,
    table: Vec<Elem>,
}

impl PartialEq for StrictMap {
    fn eq(&self, other: &Self) -> bool {
        self.dom.ty == other.dom.ty && self.cod.ty == other.cod.ty && self.table == other.table
    }
}

impl Eq for StrictMap {}

impl StrictMap {
    /// Checks totality, strictness and monotonicity.
    pub fn new(dom: Arc<Domain>, cod: Arc<Domain>, table: Vec<Elem>) -> Result<Self, OracleError> {
        let bad = |why: &str| Err(OracleError::NotAStrictMap(String::from(why)));
        if table.len() != dom.size() {
            return bad("table is not total");
        }
        if table.iter().any(|&y| y as usize >= cod.size()) {
            return bad("value outside the codomain");
        }
        if table[0] != BOTTOM {
            return bad("bottom is not preserved");
        }
        for x in dom.elements() {
            for y in dom.elements() {
                if dom.leq(x, y) && !cod.leq(table[x as usize], table[y as usize]) {
                    return bad("not monotone");
                }
            }
        }
        Ok(StrictMap { dom, cod, table })
    }

    pub(crate) fn from_fn(dom: &Arc<Domain>, cod: &Arc<Domain>, f: impl Fn(Elem) -> Elem) -> Self {
        let table = dom.elements().map(f).collect();
        let m = StrictMap { dom: dom.clone(), cod: cod.clone(), table };
        debug_assert!(StrictMap::new(m.dom.clone(), m.cod.clone(), m.table.clone()).is_ok());
        m
    }

    pub fn dom(&self) -> &Arc<Domain> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<Domain> {
        &self.cod
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn at(&self, x: Elem) -> Elem {
        self.table[x as usize]
    }

    pub fn is_bottom(&self) -> bool {
        self.table.iter().all(|&y| y == BOTTOM)
    }

    pub fn identity(a: &Arc<Domain>) -> Self {
        StrictMap::from_fn(a, a, |x| x)
    }

    /// The zero morphism.
    pub fn bottom(a: &Arc<Domain>, b: &Arc<Domain>) -> Self {
        StrictMap::from_fn(a, b, |_| BOTTOM)
    }

    /// `self ; next`, that is `next . self`.
    pub fn then(&self, next: &StrictMap) -> Result<Self, OracleError> {
        if self.cod.ty != next.dom.ty {
            return Err(OracleError::DomainMismatch(self.cod.ty.clone(), next.dom.ty.clone()));
        }
        Ok(StrictMap::from_fn(&self.dom, &next.cod, |x| next.at(self.at(x))))
    }

    /// `f . g`.
    pub fn compose(f: &StrictMap, g: &StrictMap) -> Result<Self, OracleError> {
        g.then(f)
    }

    /// The element of the function space `dom -o cod` with this table.
    pub fn as_element(&self, o: &Oracle) -> Result<Elem, OracleError> {
        let fd = o.fun_domain(&self.dom, &self.cod)?;
        let (_, _, fs) = fd.fun_space().expect("function domain");
        Ok(fs.index_of(&self.table).expect("strict monotone tables are enumerated"))
    }
}

impl Oracle {
    pub fn tensor_map(&self, f: &StrictMap, g: &StrictMap) -> Result<StrictMap, OracleError> {
        let dom = self.tensor_domain(&f.dom, &g.dom)?;
        let cod = self.tensor_domain(&f.cod, &g.cod)?;
        Ok(StrictMap::from_fn(&dom, &cod, |x| match dom.view(x) {
            View::Pair(a, b) => cod.pair(f.at(a), g.at(b)),
            _ => BOTTOM,
        }))
    }

    pub fn bang_map(&self, f: &StrictMap) -> Result<StrictMap, OracleError> {
        let dom = self.bang_domain(&f.dom)?;
        let cod = self.bang_domain(&f.cod)?;
        Ok(StrictMap::from_fn(&dom, &cod, |x| match dom.view(x) {
            View::Up(a) => cod.up(f.at(a)),
            _ => BOTTOM,
        }))
    }

    /// `lift_P : P -> !P`, sending each defined point to its lifted copy.
    pub fn lift(&self, p: &Arc<Domain>) -> Result<StrictMap, OracleError> {
        intuitionistic(p)?;
        let cod = self.bang_domain(p)?;
        Ok(StrictMap::from_fn(p, &cod, |x| if x == BOTTOM { BOTTOM } else { cod.up(x) }))
    }

    /// `eps_A : !A -> A`.
    pub fn counit(&self, a: &Arc<Domain>) -> Result<StrictMap, OracleError> {
        let dom = self.bang_domain(a)?;
        Ok(StrictMap::from_fn(&dom, a, |x| match dom.view(x) {
            View::Up(y) => y,
            _ => BOTTOM,
        }))
    }

    /// `discard_P : P -> I`.
    pub fn discard(&self, p: &Arc<Domain>) -> Result<StrictMap, OracleError> {
        intuitionistic(p)?;
        let unit = self.unit_domain();
        Ok(StrictMap::from_fn(p, &unit, |x| if x == BOTTOM { BOTTOM } else { unit.star() }))
    }

    /// `copy_P : P -> P * P`.
    pub fn copy(&self, p: &Arc<Domain>) -> Result<StrictMap, OracleError> {
        intuitionistic(p)?;
        let cod = self.tensor_domain(p, p)?;
        Ok(StrictMap::from_fn(p, &cod, |x| cod.pair(x, x)))
    }

    /// Every strict monotone map between two domains.
    pub fn all_maps(&self, a: &Arc<Domain>, b: &Arc<Domain>) -> Result<Vec<StrictMap>, OracleError> {
        let fd = self.fun_domain(a, b)?;
        let (_, _, fs) = fd.fun_space().expect("function domain");
        Ok(fd
            .elements()
            .map(|f| StrictMap { dom: a.clone(), cod: b.clone(), table: fs.table(f).to_vec() })
            .collect())
    }
}

fn intuitionistic(p: &Domain) -> Result<(), OracleError> {
    if p.ty.is_intuitionistic() {
        Ok(())
    } else {
        Err(OracleError::NotIntuitionistic(p.ty.clone()))
    }
}
