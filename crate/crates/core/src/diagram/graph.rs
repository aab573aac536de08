use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{DiagramError, Generator};
use crate::syntax::Name;

pub type NodeId = u32;

/// Where a wire starts: a diagram input port or a node output pin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Input(usize),
    Node(NodeId, usize),
}

/// Where a wire ends: a diagram output port or a node input pin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Output(usize),
    Node(NodeId, usize),
}

/// An acyclic port graph with ordered input and output ports.
///
/// Every port and pin carries exactly one wire; the edge map is keyed by the
/// wire's end so that uniqueness at targets is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    inputs: Vec<Name>,
    outputs: Vec<Name>,
    nodes: BTreeMap<NodeId, Arc<Generator>>,
    edges: BTreeMap<Target, Source>,
}

impl Diagram {
    pub fn new(
        inputs: Vec<Name>,
        outputs: Vec<Name>,
        nodes: BTreeMap<NodeId, Arc<Generator>>,
        edges: impl IntoIterator<Item = (Source, Target)>,
    ) -> Result<Self, DiagramError> {
        let mut map = BTreeMap::new();
        for (s, t) in edges {
            if map.insert(t, s).is_some() {
                return Err(DiagramError::Malformed(format!("{t:?} has two incoming wires")));
            }
        }
        let d = Diagram { inputs, outputs, nodes, edges: map };
        d.validate()?;
        Ok(d)
    }

    /// Plain wires from input `i` to output `i`.
    pub fn identity(wires: Vec<Name>) -> Self {
        let edges = (0..wires.len()).map(|i| (Target::Output(i), Source::Input(i))).collect();
        Diagram { inputs: wires.clone(), outputs: wires, nodes: BTreeMap::new(), edges }
    }

    pub(crate) fn from_parts_unchecked(
        inputs: Vec<Name>,
        outputs: Vec<Name>,
        nodes: BTreeMap<NodeId, Arc<Generator>>,
        edges: BTreeMap<Target, Source>,
    ) -> Self {
        let d = Diagram { inputs, outputs, nodes, edges };
        debug_assert_eq!(d.validate(), Ok(()));
        d
    }

    pub fn inputs(&self) -> &[Name] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Name] {
        &self.outputs
    }

    pub fn nodes(&self) -> &BTreeMap<NodeId, Arc<Generator>> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn edge_map(&self) -> &BTreeMap<Target, Source> {
        &self.edges
    }

    /// Wires as `(source, target)` pairs, ordered by target.
    pub fn edges(&self) -> impl Iterator<Item = (Source, Target)> + '_ {
        self.edges.iter().map(|(t, s)| (*s, *t))
    }

    pub fn source_of(&self, t: Target) -> Option<Source> {
        self.edges.get(&t).copied()
    }

    /// Inverse of the edge map.
    pub fn targets(&self) -> BTreeMap<Source, Target> {
        self.edges.iter().map(|(t, s)| (*s, *t)).collect()
    }

    pub fn next_node_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(0, |n| n + 1)
    }

    fn source_type(&self, s: Source) -> Option<&Name> {
        match s {
            Source::Input(i) => self.inputs.get(i),
            Source::Node(n, p) => self.nodes.get(&n)?.outs.get(p),
        }
    }

    fn target_type(&self, t: Target) -> Option<&Name> {
        match t {
            Target::Output(i) => self.outputs.get(i),
            Target::Node(n, p) => self.nodes.get(&n)?.ins.get(p),
        }
    }

    /// Checks wire linearity, endpoint typing and acyclicity.
    pub fn validate(&self) -> Result<(), DiagramError> {
        let bad = |why: alloc::string::String| Err(DiagramError::Malformed(why));
        let mut expected_targets = 0usize;
        let mut expected_sources = self.inputs.len();
        for i in 0..self.outputs.len() {
            if !self.edges.contains_key(&Target::Output(i)) {
                return bad(format!("output {i} is not connected"));
            }
        }
        expected_targets += self.outputs.len();
        for (&n, g) in &self.nodes {
            for p in 0..g.ins.len() {
                if !self.edges.contains_key(&Target::Node(n, p)) {
                    return bad(format!("input pin {p} of node {n} ({}) is not connected", g.name));
                }
            }
            expected_targets += g.ins.len();
            expected_sources += g.outs.len();
        }
        if self.edges.len() != expected_targets {
            return bad(format!("{} wires end outside the diagram", self.edges.len() - expected_targets.min(self.edges.len())));
        }
        let mut seen = BTreeSet::new();
        for (&t, &s) in &self.edges {
            let Some(st) = self.source_type(s) else {
                return bad(format!("wire into {t:?} starts at missing {s:?}"));
            };
            let tt = self.target_type(t).expect("targets were checked above");
            if st != tt {
                return bad(format!("wire {s:?} -> {t:?} joins {st} to {tt}"));
            }
            if !seen.insert(s) {
                return bad(format!("{s:?} has two outgoing wires"));
            }
        }
        if seen.len() != expected_sources {
            return bad(format!("{} sources are left unconnected", expected_sources - seen.len()));
        }
        self.topological_order().map(|_| ())
    }

    /// Node ids in an order where every node follows its predecessors.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, DiagramError> {
        let mut indegree: BTreeMap<NodeId, usize> = self.nodes.keys().map(|&n| (n, 0)).collect();
        let mut succ: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
        for (t, s) in &self.edges {
            if let (Source::Node(a, _), Target::Node(b, _)) = (s, t) {
                *indegree.get_mut(b).unwrap() += 1;
                succ.entry(*a).or_default().push(*b);
            }
        }
        let mut ready: VecDeque<NodeId> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(n) = ready.pop_front() {
            order.push(n);
            for m in succ.get(&n).into_iter().flatten() {
                let d = indegree.get_mut(m).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.push_back(*m);
                }
            }
        }
        if order.len() != self.nodes.len() {
            return Err(DiagramError::Malformed(format!("cycle through {} nodes", self.nodes.len() - order.len())));
        }
        Ok(order)
    }

    /// A representation invariant under renumbering of nodes. Two diagrams
    /// are isomorphic (respecting port order, pin order and generator
    /// names) iff their canonical forms are equal.
    ///
    /// Nodes reachable from the boundary are numbered by a breadth-first walk
    /// from the ordered ports, which is deterministic. Components not
    /// touching the boundary are encoded from every possible start node and
    /// the least encoding is kept.
    pub fn canonical(&self) -> CanonicalForm {
        let fwd = self.targets();
        let mut numbering = BTreeMap::new();
        let mut roots = Vec::new();
        for i in 0..self.inputs.len() {
            if let Some(Target::Node(n, _)) = fwd.get(&Source::Input(i)) {
                roots.push(*n);
            }
        }
        for o in 0..self.outputs.len() {
            if let Some(Source::Node(n, _)) = self.edges.get(&Target::Output(o)) {
                roots.push(*n);
            }
        }
        self.walk(&roots, &fwd, &mut numbering);
        let main = self.encode(&numbering, true);

        let mut components = Vec::new();
        let mut claimed: BTreeSet<NodeId> = numbering.keys().copied().collect();
        for &start in self.nodes.keys() {
            if claimed.contains(&start) {
                continue;
            }
            let mut comp = BTreeMap::new();
            self.walk(&[start], &fwd, &mut comp);
            claimed.extend(comp.keys().copied());
            let best = comp
                .keys()
                .map(|&s| {
                    let mut local = BTreeMap::new();
                    self.walk(&[s], &fwd, &mut local);
                    self.encode(&local, false)
                })
                .min()
                .expect("component is non-empty");
            components.push(best);
        }
        components.sort();
        CanonicalForm {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            main,
            closed: components,
        }
    }

    fn walk(&self, roots: &[NodeId], fwd: &BTreeMap<Source, Target>, numbering: &mut BTreeMap<NodeId, u32>) {
        let mut queue = VecDeque::new();
        let visit = |n: NodeId, numbering: &mut BTreeMap<NodeId, u32>, queue: &mut VecDeque<NodeId>| {
            if !numbering.contains_key(&n) {
                let k = numbering.len() as u32;
                numbering.insert(n, k);
                queue.push_back(n);
            }
        };
        for &r in roots {
            visit(r, numbering, &mut queue);
        }
        while let Some(n) = queue.pop_front() {
            let g = &self.nodes[&n];
            for p in 0..g.ins.len() {
                if let Some(Source::Node(m, _)) = self.edges.get(&Target::Node(n, p)) {
                    visit(*m, numbering, &mut queue);
                }
            }
            for p in 0..g.outs.len() {
                if let Some(Target::Node(m, _)) = fwd.get(&Source::Node(n, p)) {
                    visit(*m, numbering, &mut queue);
                }
            }
        }
    }

    fn encode(&self, numbering: &BTreeMap<NodeId, u32>, with_boundary: bool) -> Encoding {
        let mut gens = alloc::vec![Name::new(""); numbering.len()];
        for (n, &k) in numbering {
            gens[k as usize] = self.nodes[n].name.clone();
        }
        let mut wires = Vec::new();
        for (t, s) in &self.edges {
            let src = match *s {
                Source::Input(i) => CanonEnd::Port(i),
                Source::Node(n, p) => match numbering.get(&n) {
                    Some(&k) => CanonEnd::Node(k, p),
                    None => continue,
                },
            };
            let dst = match *t {
                Target::Output(i) => CanonEnd::Port(i),
                Target::Node(n, p) => match numbering.get(&n) {
                    Some(&k) => CanonEnd::Node(k, p),
                    None => continue,
                },
            };
            let boundary = matches!(src, CanonEnd::Port(_)) || matches!(dst, CanonEnd::Port(_));
            if boundary && !with_boundary {
                continue;
            }
            wires.push((src, dst));
        }
        wires.sort();
        Encoding { gens, wires }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum CanonEnd {
    Port(usize),
    Node(u32, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Encoding {
    gens: Vec<Name>,
    wires: Vec<(CanonEnd, CanonEnd)>,
}

/// See [`Diagram::canonical`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalForm {
    inputs: Vec<Name>,
    outputs: Vec<Name>,
    main: Encoding,
    closed: Vec<Encoding>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(name: &str, ins: usize, outs: usize) -> Arc<Generator> {
        let q = ["q"; 4];
        Arc::new(Generator::new(name, &q[..ins], &q[..outs]))
    }

    fn qs(n: usize) -> Vec<Name> {
        (0..n).map(|_| Name::new("q")).collect()
    }

    #[test]
    fn rejects_dangling_pin() {
        let nodes = [(0, gen("h", 1, 1))].into_iter().collect();
        let err = Diagram::new(qs(1), qs(1), nodes, [(Source::Input(0), Target::Node(0, 0))]);
        assert!(matches!(err, Err(DiagramError::Malformed(_))));
    }

    #[test]
    fn rejects_cycles() {
        let nodes = [(0, gen("f", 2, 2)), (1, gen("g", 1, 1))].into_iter().collect();
        let edges = [
            (Source::Input(0), Target::Node(0, 0)),
            (Source::Node(1, 0), Target::Node(0, 1)),
            (Source::Node(0, 1), Target::Node(1, 0)),
            (Source::Node(0, 0), Target::Output(0)),
        ];
        let err = Diagram::new(qs(1), qs(1), nodes, edges).unwrap_err();
        assert!(matches!(err, DiagramError::Malformed(ref s) if s.contains("cycle")), "{err:?}");
    }

    #[test]
    fn rejects_type_mismatch() {
        let g = Arc::new(Generator::new("m", &["q"], &["bit"]));
        let nodes = [(0, g)].into_iter().collect();
        let edges = [(Source::Input(0), Target::Node(0, 0)), (Source::Node(0, 0), Target::Output(0))];
        assert!(Diagram::new(qs(1), qs(1), nodes, edges).is_err());
    }

    #[test]
    fn rejects_fanout() {
        let edges = [(Source::Input(0), Target::Output(0)), (Source::Input(0), Target::Output(1))];
        assert!(Diagram::new(qs(1), qs(2), BTreeMap::new(), edges).is_err());
    }

    #[test]
    fn canonical_form_ignores_node_ids() {
        let build = |a: NodeId, b: NodeId| {
            let nodes = [(a, gen("h", 1, 1)), (b, gen("x", 1, 1))].into_iter().collect();
            let edges = [
                (Source::Input(0), Target::Node(a, 0)),
                (Source::Node(a, 0), Target::Node(b, 0)),
                (Source::Node(b, 0), Target::Output(0)),
            ];
            Diagram::new(qs(1), qs(1), nodes, edges).unwrap()
        };
        assert_eq!(build(0, 1).canonical(), build(7, 3).canonical());
    }

    #[test]
    fn closed_components_compared_up_to_iso() {
        // new ; discard loops with different ids and insertion order.
        let build = |a: NodeId, b: NodeId, c: NodeId, d: NodeId| {
            let nodes = [(a, gen("new", 0, 1)), (b, gen("del", 1, 0)), (c, gen("new", 0, 1)), (d, gen("h", 1, 1))]
                .into_iter()
                .collect::<BTreeMap<_, _>>();
            let e = [
                (Source::Node(a, 0), Target::Node(b, 0)),
                (Source::Node(c, 0), Target::Node(d, 0)),
                (Source::Node(d, 0), Target::Output(0)),
            ];
            Diagram::new(qs(0), qs(1), nodes, e).unwrap()
        };
        assert_eq!(build(0, 1, 2, 3).canonical(), build(3, 2, 0, 1).canonical());
    }

    #[test]
    fn topological_order_respects_edges() {
        let nodes = [(5, gen("a", 1, 1)), (2, gen("b", 1, 1))].into_iter().collect();
        let edges = [
            (Source::Input(0), Target::Node(5, 0)),
            (Source::Node(5, 0), Target::Node(2, 0)),
            (Source::Node(2, 0), Target::Output(0)),
        ];
        let d = Diagram::new(qs(1), qs(1), nodes, edges).unwrap();
        assert_eq!(d.topological_order().unwrap(), alloc::vec![5, 2]);
    }
}
