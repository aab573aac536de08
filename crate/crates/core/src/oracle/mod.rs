//! A finite model of the diagram-free fragment: pointed finite posets and
//! strict monotone maps, with `!` as lifting.
//!
//! Denotations are tables, so equality of denotations is decidable and the
//! checks in [`verdict`] compare source terms against the values they
//! evaluate to.

mod denote;
mod domain;
mod maps;
mod verdict;

#[cfg(test)]
mod tests;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use core::cell::RefCell;
use core::fmt;

use crate::syntax::Type;
use crate::typeck::TypeError;

pub use domain::{Domain, Elem, FinPoset, FunSpace, Shape, View, BOTTOM, MAX_CARRIER};
pub use maps::StrictMap;
pub use verdict::{check_adequacy, check_linear_fixpoint, check_soundness, Adequacy, Soundness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    /// Wire types, diagram types, labels, constants, box and apply.
    Unsupported(String),
    CarrierTooLarge(Type),
    NotAPoset(String),
    NotAStrictMap(String),
    NotIntuitionistic(Type),
    DomainMismatch(Type, Type),
    IllTyped(alloc::boxed::Box<TypeError>),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Unsupported(what) => write!(f, "outside the oracle's fragment: {what}"),
            OracleError::CarrierTooLarge(t) => write!(f, "carrier of {t} exceeds {MAX_CARRIER} elements"),
            OracleError::NotAPoset(why) => write!(f, "not a pointed poset: {why}"),
            OracleError::NotAStrictMap(why) => write!(f, "not a strict monotone map: {why}"),
            OracleError::NotIntuitionistic(t) => write!(f, "{t} is not intuitionistic"),
            OracleError::DomainMismatch(a, b) => write!(f, "cannot compose through {a} and {b}"),
            OracleError::IllTyped(e) => write!(f, "{e}"),
        }
    }
}

impl From<TypeError> for OracleError {
    fn from(e: TypeError) -> Self {
        OracleError::IllTyped(alloc::boxed::Box::new(e))
    }
}

/// Interprets types as domains, caching each one.
///
/// The cache is confined to one thread; denotations do not depend on it.
#[derive(Default)]
pub struct Oracle {
    cache: RefCell<BTreeMap<Type, Arc<Domain>>>,
}

impl Oracle {
    pub fn new() -> Self {
        Oracle::default()
    }

    pub fn denote_type(&self, a: &Type) -> Result<Arc<Domain>, OracleError> {
        if let Some(d) = self.cache.borrow().get(a) {
            return Ok(d.clone());
        }
        let d = Arc::new(match a {
            Type::Zero => Domain::zero(),
            Type::Unit => Domain::unit(),
            Type::Sum(x, y) => Domain::sum(self.denote_type(x)?, self.denote_type(y)?)?,
            Type::Tensor(x, y) => Domain::tensor(self.denote_type(x)?, self.denote_type(y)?)?,
            Type::Bang(x) => Domain::bang(self.denote_type(x)?)?,
            Type::Lollipop(x, y) => Domain::fun(self.denote_type(x)?, self.denote_type(y)?)?,
            Type::Wire(_) | Type::Diag(..) => {
                return Err(OracleError::Unsupported(alloc::format!("type {a}")));
            }
        });
        self.cache.borrow_mut().insert(a.clone(), d.clone());
        Ok(d)
    }

    pub fn unit_domain(&self) -> Arc<Domain> {
        self.denote_type(&Type::Unit).expect("I is always denotable")
    }

    pub fn tensor_domain(&self, a: &Domain, b: &Domain) -> Result<Arc<Domain>, OracleError> {
        self.denote_type(&Type::tensor(a.ty.clone(), b.ty.clone()))
    }

    pub fn bang_domain(&self, a: &Domain) -> Result<Arc<Domain>, OracleError> {
        self.denote_type(&Type::bang(a.ty.clone()))
    }

    pub fn fun_domain(&self, a: &Domain, b: &Domain) -> Result<Arc<Domain>, OracleError> {
        self.denote_type(&Type::lolli(a.ty.clone(), b.ty.clone()))
    }

    /// The smash product of a context, folded to the left; `I` when empty.
    pub fn context_type(types: &[Type]) -> Type {
        let mut it = types.iter().cloned();
        match it.next() {
            None => Type::Unit,
            Some(first) => it.fold(first, Type::tensor),
        }
    }
}
