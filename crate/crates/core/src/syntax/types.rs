use alloc::boxed::Box;
use core::fmt;

use super::Name;

/// Types of the calculus, including wire types and diagram types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Zero,
    Sum(Box<Type>, Box<Type>),
    Unit,
    Tensor(Box<Type>, Box<Type>),
    Lollipop(Box<Type>, Box<Type>),
    Bang(Box<Type>),
    Wire(Name),
    Diag(MType, MType),
}

/// Types that denote objects of the diagram category: wires, unit and tensor.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MType {
    Wire(Name),
    Unit,
    Tensor(Box<MType>, Box<MType>),
}

impl Type {
    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Type, b: Type) -> Type {
        Type::Tensor(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: Type, b: Type) -> Type {
        Type::Lollipop(Box::new(a), Box::new(b))
    }

    pub fn bang(a: Type) -> Type {
        Type::Bang(Box::new(a))
    }

    pub fn wire(name: &str) -> Type {
        Type::Wire(Name::new(name))
    }

    /// `I + I`, the usual encoding of booleans.
    pub fn bool() -> Type {
        Type::sum(Type::Unit, Type::Unit)
    }

    /// Intuitionistic types are generated by `0`, `+`, `I`, `*`, `!A` and
    /// `Diag(T, U)`. Everything else (every `-o`, every wire) is linear.
    pub fn is_intuitionistic(&self) -> bool {
        match self {
            Type::Zero | Type::Unit | Type::Bang(_) | Type::Diag(..) => true,
            Type::Sum(a, b) | Type::Tensor(a, b) => a.is_intuitionistic() && b.is_intuitionistic(),
            Type::Lollipop(..) | Type::Wire(_) => false,
        }
    }

    pub fn is_linear(&self) -> bool {
        !self.is_intuitionistic()
    }

    /// True when the type mentions no wire and no diagram type.
    pub fn is_diagram_free(&self) -> bool {
        match self {
            Type::Zero | Type::Unit => true,
            Type::Wire(_) | Type::Diag(..) => false,
            Type::Bang(a) => a.is_diagram_free(),
            Type::Sum(a, b) | Type::Tensor(a, b) | Type::Lollipop(a, b) => {
                a.is_diagram_free() && b.is_diagram_free()
            }
        }
    }

    pub fn as_mtype(&self) -> Option<MType> {
        MType::from_type(self)
    }

    pub fn depth(&self) -> usize {
        match self {
            Type::Zero | Type::Unit | Type::Wire(_) => 1,
            Type::Diag(t, u) => 1 + t.to_type().depth().max(u.to_type().depth()),
            Type::Bang(a) => 1 + a.depth(),
            Type::Sum(a, b) | Type::Tensor(a, b) | Type::Lollipop(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    /// Visits every wire name mentioned by the type.
    pub fn for_each_wire(&self, f: &mut impl FnMut(&Name)) {
        match self {
            Type::Zero | Type::Unit => {}
            Type::Wire(w) => f(w),
            Type::Diag(t, u) => {
                t.for_each_wire(f);
                u.for_each_wire(f);
            }
            Type::Bang(a) => a.for_each_wire(f),
            Type::Sum(a, b) | Type::Tensor(a, b) | Type::Lollipop(a, b) => {
                a.for_each_wire(f);
                b.for_each_wire(f);
            }
        }
    }
}

impl MType {
    pub fn tensor(a: MType, b: MType) -> MType {
        MType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn wire(name: &str) -> MType {
        MType::Wire(Name::new(name))
    }

    pub fn to_type(&self) -> Type {
        match self {
            MType::Wire(w) => Type::Wire(w.clone()),
            MType::Unit => Type::Unit,
            MType::Tensor(a, b) => Type::tensor(a.to_type(), b.to_type()),
        }
    }

    pub fn from_type(t: &Type) -> Option<MType> {
        match t {
            Type::Wire(w) => Some(MType::Wire(w.clone())),
            Type::Unit => Some(MType::Unit),
            Type::Tensor(a, b) => Some(MType::tensor(Self::from_type(a)?, Self::from_type(b)?)),
            _ => None,
        }
    }

    /// Right-nested tensor of the given wires; `I` when empty.
    pub fn from_wires(wires: &[Name]) -> MType {
        match wires {
            [] => MType::Unit,
            [w] => MType::Wire(w.clone()),
            [w, rest @ ..] => MType::tensor(MType::Wire(w.clone()), Self::from_wires(rest)),
        }
    }

    /// Wire leaves, left to right.
    pub fn wires(&self) -> alloc::vec::Vec<Name> {
        let mut out = alloc::vec::Vec::new();
        self.for_each_wire(&mut |w| out.push(w.clone()));
        out
    }

    pub fn for_each_wire(&self, f: &mut impl FnMut(&Name)) {
        match self {
            MType::Wire(w) => f(w),
            MType::Unit => {}
            MType::Tensor(a, b) => {
                a.for_each_wire(f);
                b.for_each_wire(f);
            }
        }
    }
}

// Precedence, loosest first: -o (right assoc), + (left), * (left), ! (prefix).
fn fmt_type(t: &Type, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let open = match t {
        Type::Lollipop(..) => prec > 0,
        Type::Sum(..) => prec > 1,
        Type::Tensor(..) => prec > 2,
        _ => false,
    };
    if open {
        f.write_str("(")?;
    }
    match t {
        Type::Zero => f.write_str("0")?,
        Type::Unit => f.write_str("I")?,
        Type::Wire(w) => write!(f, "{w}")?,
        Type::Diag(a, b) => write!(f, "Diag({a}, {b})")?,
        Type::Bang(a) => {
            f.write_str("!")?;
            fmt_type(a, 3, f)?;
        }
        Type::Lollipop(a, b) => {
            fmt_type(a, 1, f)?;
            f.write_str(" -o ")?;
            fmt_type(b, 0, f)?;
        }
        Type::Sum(a, b) => {
            fmt_type(a, 1, f)?;
            f.write_str(" + ")?;
            fmt_type(b, 2, f)?;
        }
        Type::Tensor(a, b) => {
            fmt_type(a, 2, f)?;
            f.write_str(" * ")?;
            fmt_type(b, 3, f)?;
        }
    }
    if open {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, 0, f)
    }
}

impl fmt::Display for MType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(&self.to_type(), 0, f)
    }
}
