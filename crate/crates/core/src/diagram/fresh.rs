use alloc::format;

use super::labelled::mtype_leaves;
use crate::syntax::{Label, LabelContext, LabelTuple, MType};

/// Monotone counter handing out labels `#l0, #l1, ...`.
///
/// One source is threaded through a whole evaluation, including the
/// sub-evaluations inside `box`, so labels never collide.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreshLabels {
    next: u64,
}

impl FreshLabels {
    pub fn new() -> Self {
        Self::default()
    }

    /// Continues after every label of the form `#lN` in `used`.
    pub fn after<'a>(used: impl IntoIterator<Item = &'a Label>) -> Self {
        let next = used
            .into_iter()
            .filter_map(|l| l.as_str().strip_prefix("#l")?.parse::<u64>().ok())
            .map(|n| n + 1)
            .max()
            .unwrap_or(0);
        FreshLabels { next }
    }

    pub fn fresh(&mut self) -> Label {
        let l = Label::from_string(format!("#l{}", self.next));
        self.next += 1;
        l
    }

    pub fn peek(&self) -> u64 {
        self.next
    }
}

impl Label {
    fn from_string(s: alloc::string::String) -> Label {
        Label(crate::syntax::Name::from(s))
    }
}

/// One fresh label per wire leaf of `t`, and the tuple mirroring `t`'s shape
/// (with `*` at unit leaves), such that `.; Q |- tuple : t`.
pub fn freshlabels(t: &MType, gen: &mut FreshLabels) -> (LabelContext, LabelTuple) {
    let mut q = LabelContext::new();
    let tuple = go(t, gen, &mut q);
    debug_assert_eq!(q.len(), mtype_leaves(t));
    (q, tuple)
}

fn go(t: &MType, gen: &mut FreshLabels, q: &mut LabelContext) -> LabelTuple {
    match t {
        MType::Unit => LabelTuple::Star,
        MType::Wire(w) => {
            let l = gen.fresh();
            q.push(l.clone(), w.clone()).expect("fresh labels are distinct");
            LabelTuple::Lbl(l)
        }
        MType::Tensor(a, b) => {
            let a = go(a, gen, q);
            let b = go(b, gen, q);
            LabelTuple::pair(a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Name;

    #[test]
    fn unit_has_no_labels() {
        let mut g = FreshLabels::new();
        let (q, l) = freshlabels(&MType::Unit, &mut g);
        assert!(q.is_empty());
        assert_eq!(l, LabelTuple::Star);
    }

    #[test]
    fn single_wire() {
        let mut g = FreshLabels::new();
        let (q, l) = freshlabels(&MType::wire("qubit"), &mut g);
        assert_eq!(q, LabelContext::singleton(Label::new("#l0"), Name::new("qubit")));
        assert_eq!(l, LabelTuple::Lbl(Label::new("#l0")));
    }

    #[test]
    fn nested_shape() {
        let mut g = FreshLabels::new();
        let t = MType::tensor(MType::wire("a"), MType::tensor(MType::Unit, MType::wire("b")));
        let (q, l) = freshlabels(&t, &mut g);
        let expected_q = LabelContext::from_pairs([
            (Label::new("#l0"), Name::new("a")),
            (Label::new("#l1"), Name::new("b")),
        ])
        .unwrap();
        assert_eq!(q, expected_q);
        let expected = LabelTuple::pair(
            LabelTuple::Lbl(Label::new("#l0")),
            LabelTuple::pair(LabelTuple::Star, LabelTuple::Lbl(Label::new("#l1"))),
        );
        assert_eq!(l, expected);
        // Re-reading the tuple's type through Q gives back t.
        assert_eq!(l.mtype(&|x| q.get(x).cloned()), Some(t));
    }

    #[test]
    fn successive_calls_share_no_labels() {
        let mut g = FreshLabels::new();
        let t = MType::tensor(MType::wire("a"), MType::wire("a"));
        let (q1, _) = freshlabels(&t, &mut g);
        let (q2, _) = freshlabels(&t, &mut g);
        assert!(q1.is_disjoint(&q2));
    }

    #[test]
    fn after_skips_used_labels() {
        let used = [Label::new("#l3"), Label::new("x"), Label::new("#l10")];
        let mut g = FreshLabels::after(used.iter());
        assert_eq!(g.fresh(), Label::new("#l11"));
    }
}
