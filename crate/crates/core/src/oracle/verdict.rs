use alloc::string::String;

use super::{Oracle, OracleError, StrictMap, BOTTOM};
use crate::diagram::Signature;
use crate::eval::{eval, Configuration, Outcome};
use crate::syntax::{LabelContext, Term, TermKind, Type, VarContext};
use crate::typeck::{check, TypingDerivation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Soundness {
    /// Source and value denote the same point.
    Pass { denotation: String },
    Fail { source: String, value: String },
    /// Evaluation ran out of fuel.
    Inconclusive,
    /// Evaluation got stuck.
    RuntimeError(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Adequacy {
    /// Defined denotation and termination.
    Pass { denotation: String },
    /// Bottom denotation and fuel ran out.
    PassPresumedDivergent,
    Fail(String),
}

impl Soundness {
    pub fn passed(&self) -> bool {
        matches!(self, Soundness::Pass { .. })
    }
}

impl Adequacy {
    pub fn passed(&self) -> bool {
        !matches!(self, Adequacy::Fail(_))
    }
}

fn closed(m: &Term, a: &Type) -> Result<TypingDerivation, OracleError> {
    Ok(check(&Signature::empty(), &VarContext::new(), &LabelContext::new(), m, a)?)
}

/// Evaluates a closed diagram-free term and compares the denotations of the
/// term and of its value.
pub fn check_soundness(o: &Oracle, m: &Term, a: &Type, fuel: u64) -> Result<Soundness, OracleError> {
    let dm = closed(m, a)?;
    let source = o.denote_term(&dm)?;
    let value = match eval(Configuration::new(&LabelContext::new(), m.clone()), &Signature::empty(), fuel) {
        Outcome::Value(c) => c.term,
        Outcome::FuelExhausted => return Ok(Soundness::Inconclusive),
        Outcome::Error(e) => return Ok(Soundness::RuntimeError(alloc::format!("{e}"))),
    };
    let dv = o.denote_term(&closed(&value, a)?)?;
    let cod = source.cod().clone();
    Ok(if source == dv {
        Soundness::Pass { denotation: cod.describe(source.at(1)) }
    } else {
        Soundness::Fail { source: cod.describe(source.at(1)), value: cod.describe(dv.at(1)) }
    })
}

/// Compares definedness of the denotation with termination.
pub fn check_adequacy(o: &Oracle, m: &Term, p: &Type, fuel: u64) -> Result<Adequacy, OracleError> {
    if !p.is_intuitionistic() {
        return Err(OracleError::NotIntuitionistic(p.clone()));
    }
    let dm = closed(m, p)?;
    let point = o.denote_closed(&dm)?;
    let dom = o.denote_type(p)?;
    let outcome = eval(Configuration::new(&LabelContext::new(), m.clone()), &Signature::empty(), fuel);
    Ok(match (point == BOTTOM, outcome) {
        (false, Outcome::Value(_)) => Adequacy::Pass { denotation: dom.describe(point) },
        (true, Outcome::FuelExhausted) => Adequacy::PassPresumedDivergent,
        (false, Outcome::FuelExhausted) => {
            Adequacy::Fail(alloc::format!("denotes {} but did not terminate within {fuel} steps", dom.describe(point)))
        }
        (true, Outcome::Value(c)) => {
            Adequacy::Fail(alloc::format!("terminated with {} but denotes bottom", crate::parser::print_term(&c.term)))
        }
        (_, Outcome::Error(e)) => Adequacy::Fail(alloc::format!("runtime error: {e}")),
    })
}

/// For a derivation whose term is `rec x. m`, compares its denotation with
/// one unfolding through the body, `m . (id * !rec) . (id * lift) . copy`,
/// where the context part is omitted when the context is empty.
pub fn check_linear_fixpoint(o: &Oracle, d: &TypingDerivation) -> Result<bool, OracleError> {
    let TermKind::Rec(x, bang_a, body) = &d.term.kind else {
        return Err(OracleError::Unsupported(String::from("not a rec term")));
    };
    let rec = o.denote_term(d)?;
    let mut gamma = d.gamma.clone();
    gamma.push(x.clone(), bang_a.clone()).map_err(|e| OracleError::Unsupported(alloc::format!("{e}")))?;
    let body_d = TypingDerivation {
        gamma,
        q: d.q.clone(),
        term: (**body).clone(),
        ty: d.tree.premises[0].ty.clone(),
        tree: d.tree.premises[0].clone(),
    };
    let m = o.denote_term(&body_d)?;
    let phi = rec.dom().clone();
    let unfolded = if d.gamma.is_empty() {
        o.lift(&phi)?.then(&o.bang_map(&rec)?)?.then(&m)?
    } else {
        let id = StrictMap::identity(&phi);
        o.copy(&phi)?
            .then(&o.tensor_map(&id, &o.lift(&phi)?)?)?
            .then(&o.tensor_map(&id, &o.bang_map(&rec)?)?)?
            .then(&m)?
    };
    Ok(unfolded == rec)
}
