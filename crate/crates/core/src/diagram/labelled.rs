use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::graph::{Diagram, Source, Target};
use super::{freshlabels, DiagramError, FreshLabels, Generator};
use crate::syntax::{Label, LabelContext, LabelTuple, MType, Name};

/// A morphism `Q -> Q'` of labelled diagrams. Port `i` of the underlying
/// diagram carries the `i`-th label of the boundary context.
#[derive(Clone, PartialEq, Eq)]
pub struct LabelledDiagram {
    dom: LabelContext,
    cod: LabelContext,
    under: Diagram,
}

pub(crate) fn mtype_leaves(t: &MType) -> usize {
    match t {
        MType::Unit => 0,
        MType::Wire(_) => 1,
        MType::Tensor(a, b) => mtype_leaves(a) + mtype_leaves(b),
    }
}

impl LabelledDiagram {
    pub fn new(dom: LabelContext, cod: LabelContext, under: Diagram) -> Result<Self, DiagramError> {
        let matches = |q: &LabelContext, ports: &[Name]| q.len() == ports.len() && q.wires().zip(ports).all(|(a, b)| a == b);
        if !matches(&dom, under.inputs()) || !matches(&cod, under.outputs()) {
            return Err(DiagramError::Malformed(alloc::format!(
                "boundary {dom} -> {cod} does not fit the port types"
            )));
        }
        under.validate()?;
        Ok(LabelledDiagram { dom, cod, under })
    }

    pub fn identity(q: &LabelContext) -> Self {
        LabelledDiagram { dom: q.clone(), cod: q.clone(), under: Diagram::identity(q.wires().cloned().collect()) }
    }

    /// A single node `g` with the given boundary labels, in pin order.
    pub fn generator(g: &Arc<Generator>, inputs: &[Label], outputs: &[Label]) -> Result<Self, DiagramError> {
        if inputs.len() != g.ins.len() || outputs.len() != g.outs.len() {
            return Err(DiagramError::Malformed(alloc::format!(
                "generator {} takes {} inputs and {} outputs",
                g.name,
                g.ins.len(),
                g.outs.len()
            )));
        }
        let dom = context(inputs.iter().cloned().zip(g.ins.iter().cloned()))?;
        let cod = context(outputs.iter().cloned().zip(g.outs.iter().cloned()))?;
        let mut nodes = BTreeMap::new();
        nodes.insert(0, g.clone());
        let mut edges = BTreeMap::new();
        for p in 0..g.ins.len() {
            edges.insert(Target::Node(0, p), Source::Input(p));
        }
        for p in 0..g.outs.len() {
            edges.insert(Target::Output(p), Source::Node(0, p));
        }
        let under = Diagram::from_parts_unchecked(g.ins.clone(), g.outs.clone(), nodes, edges);
        Ok(LabelledDiagram { dom, cod, under })
    }

    pub fn dom(&self) -> &LabelContext {
        &self.dom
    }

    pub fn cod(&self) -> &LabelContext {
        &self.cod
    }

    pub fn under(&self) -> &Diagram {
        &self.under
    }

    pub fn node_count(&self) -> usize {
        self.under.node_count()
    }

    /// Side-by-side juxtaposition; ports of `other` follow those of `self`.
    pub fn tensor(&self, other: &LabelledDiagram) -> Result<Self, DiagramError> {
        let dom = self.dom.union(&other.dom).map_err(clash)?;
        let cod = self.cod.union(&other.cod).map_err(clash)?;
        let shift = self.under.next_node_id();
        let (ni, no) = (self.under.inputs().len(), self.under.outputs().len());
        let mut nodes = self.under.nodes().clone();
        nodes.extend(other.under.nodes().iter().map(|(&n, g)| (n + shift, g.clone())));
        let mut edges = self.under.edge_map().clone();
        for (t, s) in other.under.edge_map() {
            let t = match *t {
                Target::Output(i) => Target::Output(i + no),
                Target::Node(n, p) => Target::Node(n + shift, p),
            };
            let s = match *s {
                Source::Input(i) => Source::Input(i + ni),
                Source::Node(n, p) => Source::Node(n + shift, p),
            };
            edges.insert(t, s);
        }
        let mut inputs = self.under.inputs().to_vec();
        inputs.extend_from_slice(other.under.inputs());
        let mut outputs = self.under.outputs().to_vec();
        outputs.extend_from_slice(other.under.outputs());
        let under = Diagram::from_parts_unchecked(inputs, outputs, nodes, edges);
        Ok(LabelledDiagram { dom, cod, under })
    }

    /// `self ; next`, gluing each output of `self` to the input of `next`
    /// with the same label.
    pub fn compose(&self, next: &LabelledDiagram) -> Result<Self, DiagramError> {
        if !self.cod.same_as(&next.dom) {
            return Err(DiagramError::BoundaryMismatch { left: self.cod.clone(), right: next.dom.clone() });
        }
        let shift = self.under.next_node_id();
        let mut nodes = self.under.nodes().clone();
        nodes.extend(next.under.nodes().iter().map(|(&n, g)| (n + shift, g.clone())));
        let mut edges: BTreeMap<Target, Source> =
            self.under.edge_map().iter().filter(|(t, _)| !matches!(t, Target::Output(_))).map(|(t, s)| (*t, *s)).collect();
        for (t, s) in next.under.edge_map() {
            let t = match *t {
                Target::Output(i) => Target::Output(i),
                Target::Node(n, p) => Target::Node(n + shift, p),
            };
            let s = match *s {
                Source::Input(j) => {
                    let label = &next.dom.iter().nth(j).expect("port has a label").0;
                    let p = self.cod.position(label).expect("boundaries agree");
                    self.under.source_of(Target::Output(p)).expect("outputs are connected")
                }
                Source::Node(n, p) => Source::Node(n + shift, p),
            };
            edges.insert(t, s);
        }
        let under =
            Diagram::from_parts_unchecked(self.under.inputs().to_vec(), next.under.outputs().to_vec(), nodes, edges);
        Ok(LabelledDiagram { dom: self.dom.clone(), cod: next.cod.clone(), under })
    }

    /// Renames boundary labels on both sides; labels outside the map stay.
    pub fn rename(&self, map: &BTreeMap<Label, Label>) -> Result<Self, DiagramError> {
        self.rename_boundary(map, map)
    }

    pub fn rename_boundary(
        &self,
        dom_map: &BTreeMap<Label, Label>,
        cod_map: &BTreeMap<Label, Label>,
    ) -> Result<Self, DiagramError> {
        let apply = |q: &LabelContext, m: &BTreeMap<Label, Label>| {
            context(q.iter().map(|(l, w)| (m.get(l).unwrap_or(l).clone(), w.clone())))
        };
        Ok(LabelledDiagram { dom: apply(&self.dom, dom_map)?, cod: apply(&self.cod, cod_map)?, under: self.under.clone() })
    }

    /// The same morphism with ports listed in the order of the given
    /// contexts, which must equal the boundaries up to order.
    pub fn reorder(&self, dom: &LabelContext, cod: &LabelContext) -> Option<Self> {
        if !self.dom.same_as(dom) || !self.cod.same_as(cod) {
            return None;
        }
        let in_perm: Vec<usize> = dom.labels().map(|l| self.dom.position(l).unwrap()).collect();
        let mut in_new = alloc::vec![0; in_perm.len()];
        for (new, &old) in in_perm.iter().enumerate() {
            in_new[old] = new;
        }
        let out_perm: Vec<usize> = cod.labels().map(|l| self.cod.position(l).unwrap()).collect();
        let mut edges = BTreeMap::new();
        for (t, s) in self.under.edge_map() {
            let s = match *s {
                Source::Input(i) => Source::Input(in_new[i]),
                s => s,
            };
            match *t {
                Target::Output(_) => {}
                t => {
                    edges.insert(t, s);
                }
            }
        }
        for (new, &old) in out_perm.iter().enumerate() {
            let s = match self.under.source_of(Target::Output(old)).unwrap() {
                Source::Input(i) => Source::Input(in_new[i]),
                s => s,
            };
            edges.insert(Target::Output(new), s);
        }
        let under = Diagram::from_parts_unchecked(
            dom.wires().cloned().collect(),
            cod.wires().cloned().collect(),
            self.under.nodes().clone(),
            edges,
        );
        Some(LabelledDiagram { dom: dom.clone(), cod: cod.clone(), under })
    }

    /// Equality as morphisms of the labelled category: same boundary
    /// contexts and the same diagram once ports are matched by label.
    pub fn morphism_eq(&self, other: &LabelledDiagram) -> bool {
        match self.reorder(&other.dom, &other.cod) {
            Some(me) => me.under.canonical() == other.under.canonical(),
            None => false,
        }
    }

    /// Every label on either side of the boundary.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.dom.labels().chain(self.cod.labels()).cloned().collect()
    }
}

impl fmt::Debug for LabelledDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} --[", self.dom)?;
        for (i, (n, g)) in self.under.nodes().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{}", g.name)?;
        }
        write!(f, "]--> {}", self.cod)
    }
}

fn clash(e: crate::syntax::ContextError) -> DiagramError {
    match e {
        crate::syntax::ContextError::DuplicateLabel(l) => DiagramError::LabelClash(l),
        crate::syntax::ContextError::DuplicateVariable(x) => DiagramError::Malformed(alloc::format!("{x}")),
    }
}

fn context(it: impl IntoIterator<Item = (Label, Name)>) -> Result<LabelContext, DiagramError> {
    LabelContext::from_pairs(it).map_err(clash)
}

/// Positional equality: the same graph up to node renumbering, with ports
/// matched by position and labels ignored.
pub fn diagram_eq(a: &LabelledDiagram, b: &LabelledDiagram) -> bool {
    a.under.canonical() == b.under.canonical()
}

/// Glues `d` onto the outputs of `s` named by `d`'s domain, leaving the
/// other outputs of `s` in place. New outputs come last.
fn paste(s: &LabelledDiagram, d: &LabelledDiagram) -> Option<LabelledDiagram> {
    let rest = s.cod.filter(|l| !d.dom.contains(l));
    LabelledDiagram::identity(&rest).tensor(d).ok().and_then(|side| s.compose(&side).ok())
}

/// Pastes the boxed diagram `(l, d, l2)` onto the outputs `k` of `s2`,
/// renaming `d`'s outputs to fresh labels. Returns the new diagram and the
/// tuple of fresh labels, or `None` when the tuples do not fit.
pub fn append(
    s2: &LabelledDiagram,
    k: &LabelTuple,
    l: &LabelTuple,
    d: &LabelledDiagram,
    l2: &LabelTuple,
    gen: &mut FreshLabels,
) -> Option<(LabelledDiagram, LabelTuple)> {
    if !enumerates(l, &d.dom) || !enumerates(l2, &d.cod) || !k.same_shape(l) || !k.is_linear() {
        return None;
    }
    let mut dom_map = BTreeMap::new();
    for (li, ki) in l.labels().into_iter().zip(k.labels()) {
        if s2.cod.get(&ki)? != d.dom.get(&li)? {
            return None;
        }
        dom_map.insert(li, ki);
    }
    let mut cod_map = BTreeMap::new();
    let k2 = l2.map(&mut |x| {
        let fresh = gen.fresh();
        cod_map.insert(x.clone(), fresh.clone());
        fresh
    });
    let renamed = d.rename_boundary(&dom_map, &cod_map).ok()?;
    Some((paste(s2, &renamed)?, k2))
}

fn enumerates(t: &LabelTuple, q: &LabelContext) -> bool {
    let ls = t.labels();
    t.is_linear() && ls.len() == q.len() && ls.iter().all(|l| q.contains(l))
}

/// Applies generator `g` to the outputs `k` of `s`. The argument tuple must
/// have the generator's input type; the result tuple mirrors its output
/// type with fresh labels.
pub fn apply_generator(
    s: &LabelledDiagram,
    g: &Arc<Generator>,
    k: &LabelTuple,
    gen: &mut FreshLabels,
) -> Option<(LabelledDiagram, LabelTuple)> {
    if !k.is_linear() || k.mtype(&|x| s.cod.get(x).cloned())? != g.input_type() {
        return None;
    }
    let (q, out) = freshlabels(&g.output_type(), gen);
    let outs: Vec<Label> = q.labels().cloned().collect();
    let node = LabelledDiagram::generator(g, &k.labels(), &outs).ok()?;
    Some((paste(s, &node)?, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{NodeId, Signature};
    use proptest::prelude::*;

    fn lbl(s: &str) -> Label {
        Label::new(s)
    }

    fn q(pairs: &[(&str, &str)]) -> LabelContext {
        LabelContext::from_pairs(pairs.iter().map(|(l, w)| (lbl(l), Name::new(w)))).unwrap()
    }

    fn sig() -> Signature {
        Signature::demo()
    }

    fn gate(name: &str, ins: &[&str], outs: &[&str]) -> LabelledDiagram {
        let s = sig();
        let g = s.generator(name).unwrap();
        let ins: Vec<Label> = ins.iter().map(|x| lbl(x)).collect();
        let outs: Vec<Label> = outs.iter().map(|x| lbl(x)).collect();
        LabelledDiagram::generator(g, &ins, &outs).unwrap()
    }

    /// Exhaustive search for a node bijection making the graphs equal with
    /// ports fixed.
    fn brute_iso(a: &Diagram, b: &Diagram) -> bool {
        if a.inputs() != b.inputs() || a.outputs() != b.outputs() || a.node_count() != b.node_count() {
            return false;
        }
        let an: Vec<NodeId> = a.nodes().keys().copied().collect();
        let bn: Vec<NodeId> = b.nodes().keys().copied().collect();
        let mut perm: Vec<usize> = (0..bn.len()).collect();
        let ea: BTreeSet<(Source, Target)> = a.edges().collect();
        let eb: BTreeSet<(Source, Target)> = b.edges().collect();
        loop {
            let map: BTreeMap<NodeId, NodeId> = an.iter().zip(&perm).map(|(&x, &i)| (x, bn[i])).collect();
            let names_ok = an.iter().all(|x| a.nodes()[x].name == b.nodes()[&map[x]].name);
            if names_ok {
                let mapped: BTreeSet<(Source, Target)> = ea
                    .iter()
                    .map(|(s, t)| {
                        let s = match *s {
                            Source::Node(n, p) => Source::Node(map[&n], p),
                            s => s,
                        };
                        let t = match *t {
                            Target::Node(n, p) => Target::Node(map[&n], p),
                            t => t,
                        };
                        (s, t)
                    })
                    .collect();
                if mapped == eb {
                    return true;
                }
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        if p.len() < 2 {
            return false;
        }
        let mut i = p.len() - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = p.len() - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    /// Builds a diagram on `width` input qubits by applying a list of gates
    /// to chosen open wires.
    fn build(width: usize, steps: &[(u8, u8, u8)]) -> LabelledDiagram {
        let mut gen = FreshLabels::new();
        let mut dom = LabelContext::new();
        for _ in 0..width {
            dom.push(gen.fresh(), Name::new("qubit")).unwrap();
        }
        extend(&LabelledDiagram::identity(&dom), steps, &mut gen)
    }

    fn arb_diagram(max_nodes: usize) -> impl Strategy<Value = LabelledDiagram> {
        (0usize..3, proptest::collection::vec((0u8..5, any::<u8>(), any::<u8>()), 0..=max_nodes))
            .prop_map(|(w, steps)| build(w, &steps))
    }

    #[test]
    fn identity_of_empty_context() {
        let d = LabelledDiagram::identity(&LabelContext::new());
        assert_eq!(d.node_count(), 0);
        assert!(d.under().inputs().is_empty() && d.under().outputs().is_empty());
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let a = LabelledDiagram::identity(&q(&[("l", "a")]));
        let b = LabelledDiagram::identity(&q(&[("k", "b")]));
        assert_eq!(a.tensor(&b).unwrap(), LabelledDiagram::identity(&q(&[("l", "a"), ("k", "b")])));
    }

    #[test]
    fn tensor_counts_add() {
        let a = gate("h", &["a"], &["b"]);
        let b = gate("cnot", &["c", "d"], &["e", "f"]);
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.node_count(), 2);
        assert_eq!(t.dom().len(), 3);
        assert_eq!(t.cod().len(), 3);
    }

    #[test]
    fn tensor_rejects_shared_labels() {
        let a = gate("h", &["a"], &["b"]);
        assert_eq!(a.tensor(&a), Err(DiagramError::LabelClash(lbl("a"))));
    }

    #[test]
    fn compose_chain() {
        let h1 = gate("h", &["l"], &["k"]);
        let h2 = gate("h", &["k"], &["j"]);
        let c = h1.compose(&h2).unwrap();
        assert_eq!(c.node_count(), 2);
        assert_eq!(c.dom(), &q(&[("l", "qubit")]));
        assert_eq!(c.cod(), &q(&[("j", "qubit")]));
        // Oracle: a hand-built chain.
        let s = sig();
        let h = s.generator("h").unwrap().clone();
        let nodes = [(0, h.clone()), (1, h)].into_iter().collect();
        let edges = [
            (Source::Input(0), Target::Node(0, 0)),
            (Source::Node(0, 0), Target::Node(1, 0)),
            (Source::Node(1, 0), Target::Output(0)),
        ];
        let chain = Diagram::new(alloc::vec![Name::new("qubit")], alloc::vec![Name::new("qubit")], nodes, edges).unwrap();
        assert!(brute_iso(c.under(), &chain));
    }

    #[test]
    fn compose_rejects_mismatch() {
        let h1 = gate("h", &["l"], &["k"]);
        let h2 = gate("h", &["m"], &["j"]);
        assert!(matches!(h1.compose(&h2), Err(DiagramError::BoundaryMismatch { .. })));
    }

    #[test]
    fn compose_matches_by_label_not_position() {
        let c = gate("cnot", &["a", "b"], &["c", "d"]);
        let swap_back = LabelledDiagram::identity(&q(&[("d", "qubit"), ("c", "qubit")]));
        let composed = c.compose(&swap_back).unwrap();
        assert!(composed.morphism_eq(&c));
        assert!(!diagram_eq(&composed, &c));
    }

    #[test]
    fn renamed_diagram_is_equal() {
        let d = build(2, &[(3, 0, 1), (1, 0, 0), (0, 0, 0), (3, 1, 2)]);
        let map: BTreeMap<Label, Label> =
            d.labels().into_iter().enumerate().map(|(i, l)| (l, Label::new(&alloc::format!("r{i}")))).collect();
        let r = d.rename(&map).unwrap();
        assert!(diagram_eq(&d, &r));
        assert!(!d.morphism_eq(&r));
    }

    #[test]
    fn hh_differs_from_h() {
        let h = gate("h", &["a"], &["b"]);
        let hh = h.compose(&gate("h", &["b"], &["c"])).unwrap();
        assert!(!diagram_eq(&h, &hh));
    }

    #[test]
    fn append_single_gate() {
        let s = LabelledDiagram::identity(&q(&[("l", "qubit")]));
        let h = gate("h", &["a"], &["b"]);
        let mut gen = FreshLabels::new();
        gen.fresh();
        let (out, k2) = append(&s, &LabelTuple::Lbl(lbl("l")), &LabelTuple::Lbl(lbl("a")), &h, &LabelTuple::Lbl(lbl("b")), &mut gen)
            .unwrap();
        assert_eq!(k2, LabelTuple::Lbl(lbl("#l1")));
        // Oracle: rename then compose.
        let renamed = gate("h", &["l"], &["#l1"]);
        let expect = s.compose(&renamed).unwrap();
        assert_eq!(out.dom(), expect.dom());
        assert_eq!(out.cod(), expect.cod());
        assert!(brute_iso(out.under(), expect.under()));
    }

    #[test]
    fn append_rejects_unknown_label() {
        let s = LabelledDiagram::identity(&q(&[("l", "qubit")]));
        let h = gate("h", &["a"], &["b"]);
        let mut gen = FreshLabels::new();
        let r = append(&s, &LabelTuple::Lbl(lbl("zz")), &LabelTuple::Lbl(lbl("a")), &h, &LabelTuple::Lbl(lbl("b")), &mut gen);
        assert!(r.is_none());
    }

    #[test]
    fn append_rejects_shape_mismatch() {
        let s = LabelledDiagram::identity(&q(&[("l", "qubit"), ("k", "qubit")]));
        let h = gate("h", &["a"], &["b"]);
        let mut gen = FreshLabels::new();
        let k = LabelTuple::pair(LabelTuple::Lbl(lbl("l")), LabelTuple::Lbl(lbl("k")));
        assert!(append(&s, &k, &LabelTuple::Lbl(lbl("a")), &h, &LabelTuple::Lbl(lbl("b")), &mut gen).is_none());
    }

    #[test]
    fn append_rejects_wrong_wire_type() {
        let s = LabelledDiagram::identity(&q(&[("l", "bit")]));
        let h = gate("h", &["a"], &["b"]);
        let mut gen = FreshLabels::new();
        let r = append(&s, &LabelTuple::Lbl(lbl("l")), &LabelTuple::Lbl(lbl("a")), &h, &LabelTuple::Lbl(lbl("b")), &mut gen);
        assert!(r.is_none());
    }

    #[test]
    fn apply_generator_state_preparation() {
        let s = LabelledDiagram::identity(&LabelContext::new());
        let mut gen = FreshLabels::new();
        let new = sig().generator("new").unwrap().clone();
        let (d, k) = apply_generator(&s, &new, &LabelTuple::Star, &mut gen).unwrap();
        assert_eq!(k, LabelTuple::Lbl(lbl("#l0")));
        assert_eq!(d.node_count(), 1);
        assert!(apply_generator(&d, &new, &LabelTuple::Lbl(lbl("#l0")), &mut gen).is_none());
    }

    #[test]
    fn brute_force_agrees_on_tensor_orders() {
        let a = gate("h", &["a"], &["b"]);
        let b = gate("x", &["c"], &["d"]);
        let ab = a.tensor(&b).unwrap();
        let ba = b.tensor(&a).unwrap();
        assert_eq!(diagram_eq(&ab, &ba), brute_iso(ab.under(), ba.under()));
        assert!(!diagram_eq(&ab, &ba));
        let a2 = gate("h", &["c"], &["d"]);
        let aa = a.tensor(&a2).unwrap();
        let aa2 = a2.tensor(&a).unwrap();
        assert!(diagram_eq(&aa, &aa2));
        assert!(brute_iso(aa.under(), aa2.under()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn canonical_form_matches_brute_force(a in arb_diagram(4), b in arb_diagram(4)) {
            prop_assert_eq!(diagram_eq(&a, &b), brute_iso(a.under(), b.under()));
        }

        #[test]
        fn canonical_form_invariant_under_relabelling(a in arb_diagram(4), steps in proptest::collection::vec(any::<u8>(), 0..4)) {
            // Permuting node ids keeps the canonical form.
            let ids: Vec<NodeId> = a.under().nodes().keys().copied().collect();
            let mut perm: Vec<NodeId> = ids.iter().map(|i| i * 3 + 11).collect();
            for s in steps {
                if perm.len() > 1 {
                    let i = s as usize % perm.len();
                    let n = perm.len();
                    perm.swap(i, (i + 1) % n);
                }
            }
            let map: BTreeMap<NodeId, NodeId> = ids.iter().copied().zip(perm).collect();
            let nodes = a.under().nodes().iter().map(|(n, g)| (map[n], g.clone())).collect();
            let edges = a.under().edges().map(|(s, t)| {
                let s = match s { Source::Node(n, p) => Source::Node(map[&n], p), s => s };
                let t = match t { Target::Node(n, p) => Target::Node(map[&n], p), t => t };
                (s, t)
            });
            let moved = Diagram::new(a.under().inputs().to_vec(), a.under().outputs().to_vec(), nodes, edges).unwrap();
            prop_assert_eq!(a.under().canonical(), moved.canonical());
        }

        #[test]
        fn identity_laws(a in arb_diagram(4)) {
            let l = LabelledDiagram::identity(a.dom()).compose(&a).unwrap();
            let r = a.compose(&LabelledDiagram::identity(a.cod())).unwrap();
            prop_assert!(diagram_eq(&l, &a) && l.morphism_eq(&a));
            prop_assert!(diagram_eq(&r, &a) && r.morphism_eq(&a));
            let u = LabelledDiagram::identity(&LabelContext::new()).tensor(&a).unwrap();
            prop_assert_eq!(&u, &a);
        }

        #[test]
        fn associativity(a in arb_diagram(3), b_steps in proptest::collection::vec((0u8..5, any::<u8>(), any::<u8>()), 0..3),
                         c_steps in proptest::collection::vec((0u8..5, any::<u8>(), any::<u8>()), 0..3)) {
            // Continue a with b-steps and c-steps, read off the pieces.
            let mut gen = FreshLabels::after(a.labels().iter());
            let b = extend(&LabelledDiagram::identity(a.cod()), &b_steps, &mut gen);
            let c = extend(&LabelledDiagram::identity(b.cod()), &c_steps, &mut gen);
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert!(left.morphism_eq(&right));
            prop_assert!(diagram_eq(&left, &right));
        }

        #[test]
        fn interchange(a1 in arb_diagram(2), b1 in arb_diagram(2),
                       s1 in proptest::collection::vec((0u8..5, any::<u8>(), any::<u8>()), 0..2),
                       s2 in proptest::collection::vec((0u8..5, any::<u8>(), any::<u8>()), 0..2)) {
            let mut pre = BTreeMap::new();
            for l in b1.labels() {
                pre.insert(l.clone(), Label::new(&alloc::format!("{l}'")));
            }
            let b1 = b1.rename(&pre).unwrap();
            let mut gen = FreshLabels::after(a1.labels().iter().chain(b1.labels().iter()));
            gen.fresh();
            let mut gen2 = FreshLabels::new();
            let a2 = extend(&LabelledDiagram::identity(a1.cod()), &s1, &mut gen);
            let b2 = extend(&LabelledDiagram::identity(b1.cod()), &s2, &mut gen2);
            let mut post = BTreeMap::new();
            for l in b2.cod().labels() {
                if !b1.cod().contains(l) {
                    post.insert(l.clone(), Label::new(&alloc::format!("{l}''")));
                }
            }
            let b2 = b2.rename_boundary(&BTreeMap::new(), &post).unwrap();
            let lhs = a1.compose(&a2).unwrap().tensor(&b1.compose(&b2).unwrap()).unwrap();
            let rhs = a1.tensor(&b1).unwrap().compose(&a2.tensor(&b2).unwrap()).unwrap();
            prop_assert!(lhs.morphism_eq(&rhs));
            prop_assert!(diagram_eq(&lhs, &rhs));
        }

        #[test]
        fn append_identity_box(a in arb_diagram(4), pick in any::<u8>()) {
            // Paste an identity boxed diagram onto one output.
            let open: Vec<(Label, Name)> = a.cod().iter().cloned().collect();
            prop_assume!(!open.is_empty());
            let (k, w) = open[pick as usize % open.len()].clone();
            let mut gen = FreshLabels::after(a.labels().iter());
            let boxed = LabelledDiagram::identity(&LabelContext::singleton(Label::new("x"), w));
            let t = LabelTuple::Lbl(Label::new("x"));
            let (out, k2) = append(&a, &LabelTuple::Lbl(k.clone()), &t, &boxed, &t, &mut gen).unwrap();
            let LabelTuple::Lbl(k2) = k2 else { unreachable!() };
            let back = out.rename_boundary(&BTreeMap::new(), &[(k2, k)].into_iter().collect()).unwrap();
            prop_assert!(back.morphism_eq(&a));
            prop_assert_eq!(back.node_count(), a.node_count());
        }

        #[test]
        fn operations_preserve_invariants(a in arb_diagram(5)) {
            prop_assert_eq!(a.under().validate(), Ok(()));
            prop_assert!(LabelledDiagram::new(a.dom().clone(), a.cod().clone(), a.under().clone()).is_ok());
        }
    }

    fn extend(base: &LabelledDiagram, steps: &[(u8, u8, u8)], gen: &mut FreshLabels) -> LabelledDiagram {
        let s = sig();
        let names = ["new", "h", "x", "cnot", "discard"];
        let mut d = base.clone();
        for &(g, a, b) in steps {
            let g = s.generator(names[g as usize % names.len()]).unwrap();
            let open: Vec<Label> = d.cod().labels().cloned().collect();
            let arg = match g.ins.len() {
                0 => LabelTuple::Star,
                1 if !open.is_empty() => LabelTuple::Lbl(open[a as usize % open.len()].clone()),
                2 if open.len() >= 2 => {
                    let i = a as usize % open.len();
                    let mut j = b as usize % open.len();
                    if j == i {
                        j = (j + 1) % open.len();
                    }
                    LabelTuple::pair(LabelTuple::Lbl(open[i].clone()), LabelTuple::Lbl(open[j].clone()))
                }
                _ => continue,
            };
            d = apply_generator(&d, g, &arg, gen).unwrap().0;
        }
        d
    }
}
