use alloc::vec::Vec;
use core::fmt;

use super::{Label, Name, Type};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextError {
    DuplicateVariable(Name),
    DuplicateLabel(Label),
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextError::DuplicateVariable(x) => write!(f, "variable `{x}` bound twice"),
            ContextError::DuplicateLabel(l) => write!(f, "label `{l}` occurs twice"),
        }
    }
}

/// `x1: A1, ..., xn: An` with distinct names, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarContext {
    entries: Vec<(Name, Type)>,
}

impl VarContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Name, Type)>>(it: I) -> Result<Self, ContextError> {
        let mut ctx = Self::new();
        for (x, t) in it {
            ctx.push(x, t)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, x: Name, t: Type) -> Result<(), ContextError> {
        if self.get(&x).is_some() {
            return Err(ContextError::DuplicateVariable(x));
        }
        self.entries.push((x, t));
        Ok(())
    }

    pub fn get(&self, x: &Name) -> Option<&Type> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, Type)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_intuitionistic(&self) -> bool {
        self.entries.iter().all(|(_, t)| t.is_intuitionistic())
    }
}

/// A finite typed set of labels, `l1: a1, ..., ln: an`.
///
/// The order of entries is the port order used when the context is the
/// boundary of a diagram; context equality in the calculus is [`same_as`],
/// which ignores order.
///
/// [`same_as`]: LabelContext::same_as
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabelContext {
    entries: Vec<(Label, Name)>,
}

impl LabelContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Label, Name)>>(it: I) -> Result<Self, ContextError> {
        let mut q = Self::new();
        for (l, w) in it {
            q.push(l, w)?;
        }
        Ok(q)
    }

    pub fn singleton(l: Label, wire: Name) -> Self {
        LabelContext { entries: alloc::vec![(l, wire)] }
    }

    pub fn push(&mut self, l: Label, wire: Name) -> Result<(), ContextError> {
        if self.contains(&l) {
            return Err(ContextError::DuplicateLabel(l));
        }
        self.entries.push((l, wire));
        Ok(())
    }

    pub fn get(&self, l: &Label) -> Option<&Name> {
        self.entries.iter().find(|(k, _)| k == l).map(|(_, w)| w)
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.get(l).is_some()
    }

    pub fn position(&self, l: &Label) -> Option<usize> {
        self.entries.iter().position(|(k, _)| k == l)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Label, Name)> {
        self.entries.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.entries.iter().map(|(l, _)| l)
    }

    pub fn wires(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(_, w)| w)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_disjoint(&self, other: &LabelContext) -> bool {
        self.labels().all(|l| !other.contains(l))
    }

    /// Disjoint union; entries of `other` follow those of `self`.
    pub fn union(&self, other: &LabelContext) -> Result<LabelContext, ContextError> {
        let mut out = self.clone();
        for (l, w) in other.iter() {
            out.push(l.clone(), w.clone())?;
        }
        Ok(out)
    }

    /// Equality as finite maps, ignoring entry order.
    pub fn same_as(&self, other: &LabelContext) -> bool {
        self.len() == other.len() && self.iter().all(|(l, w)| other.get(l) == Some(w))
    }

    /// Entries whose label satisfies `keep`, in order.
    pub fn filter(&self, mut keep: impl FnMut(&Label) -> bool) -> LabelContext {
        LabelContext { entries: self.entries.iter().filter(|(l, _)| keep(l)).cloned().collect() }
    }
}

impl fmt::Display for LabelContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, w)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}: {w}")?;
        }
        f.write_str("}")
    }
}
