use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{MType, Name, Type};

/// A generating morphism `name : ins -> outs` of the monoidal signature.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub name: Name,
    pub ins: Vec<Name>,
    pub outs: Vec<Name>,
}

impl Generator {
    pub fn new(name: &str, ins: &[&str], outs: &[&str]) -> Self {
        Generator {
            name: Name::new(name),
            ins: ins.iter().map(|w| Name::new(w)).collect(),
            outs: outs.iter().map(|w| Name::new(w)).collect(),
        }
    }

    pub fn input_type(&self) -> MType {
        MType::from_wires(&self.ins)
    }

    pub fn output_type(&self) -> MType {
        MType::from_wires(&self.outs)
    }

    /// The type of the constant exposed to programs, `tensor(ins) -o tensor(outs)`.
    pub fn constant_type(&self) -> Type {
        Type::lolli(self.input_type().to_type(), self.output_type().to_type())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureError {
    DuplicateWire(Name),
    DuplicateGenerator(Name),
    UnknownWire { generator: Name, wire: Name },
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::DuplicateWire(w) => write!(f, "wire type `{w}` declared twice"),
            SignatureError::DuplicateGenerator(g) => write!(f, "generator `{g}` declared twice"),
            SignatureError::UnknownWire { generator, wire } => {
                write!(f, "generator `{generator}` uses undeclared wire type `{wire}`")
            }
        }
    }
}

/// Wire types and generators of the diagram category. Each generator is
/// also a constant of the language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    wires: BTreeSet<Name>,
    generators: Vec<Arc<Generator>>,
    by_name: BTreeMap<Name, usize>,
}

impl Signature {
    pub fn new(wires: Vec<Name>, generators: Vec<Generator>) -> Result<Self, SignatureError> {
        let mut wire_set = BTreeSet::new();
        for w in wires {
            if !wire_set.insert(w.clone()) {
                return Err(SignatureError::DuplicateWire(w));
            }
        }
        let mut by_name = BTreeMap::new();
        let mut gens = Vec::new();
        for g in generators {
            for w in g.ins.iter().chain(&g.outs) {
                if !wire_set.contains(w) {
                    return Err(SignatureError::UnknownWire { generator: g.name.clone(), wire: w.clone() });
                }
            }
            if by_name.insert(g.name.clone(), gens.len()).is_some() {
                return Err(SignatureError::DuplicateGenerator(g.name));
            }
            gens.push(Arc::new(g));
        }
        Ok(Signature { wires: wire_set, generators: gens, by_name })
    }

    /// One `qubit` wire with state preparation, two single-qubit gates, a
    /// controlled-not and a discard. No measurement.
    pub fn demo() -> Self {
        Signature::new(
            alloc::vec![Name::new("qubit")],
            alloc::vec![
                Generator::new("new", &[], &["qubit"]),
                Generator::new("h", &["qubit"], &["qubit"]),
                Generator::new("x", &["qubit"], &["qubit"]),
                Generator::new("cnot", &["qubit", "qubit"], &["qubit", "qubit"]),
                Generator::new("discard", &["qubit"], &[]),
            ],
        )
        .expect("demo signature is well formed")
    }

    pub fn empty() -> Self {
        Signature::new(Vec::new(), Vec::new()).unwrap()
    }

    pub fn has_wire(&self, w: &Name) -> bool {
        self.wires.contains(w)
    }

    pub fn wires(&self) -> impl Iterator<Item = &Name> {
        self.wires.iter()
    }

    pub fn generator(&self, name: &str) -> Option<&Arc<Generator>> {
        self.by_name.get(name).map(|&i| &self.generators[i])
    }

    /// Generators in declaration order.
    pub fn generators(&self) -> impl Iterator<Item = &Arc<Generator>> {
        self.generators.iter()
    }

    pub fn constant_type(&self, name: &str) -> Option<Type> {
        self.generator(name).map(|g| g.constant_type())
    }
}
