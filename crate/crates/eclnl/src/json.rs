//! JSON formats: signature files and the diagram exchange schema.
//!
//! A diagram is written as
//!
//! ```json
//! {"dom": [["#l0", "qubit"]], "cod": [["#l1", "qubit"]],
//!  "nodes": [[0, "h"]],
//!  "edges": [[["in", 0], ["node", 0, 0]], [["node", 0, 0], ["out", 0]]]}
//! ```
//!
//! Nodes are listed by id and edges by target, so equal diagrams serialize
//! to identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use eclnl_core::diagram::{Source, Target};
use eclnl_core::{Diagram, Generator, Label, LabelContext, LabelledDiagram, Name, Signature};
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureFile {
    pub wires: Vec<String>,
    pub generators: Vec<GeneratorFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub name: String,
    pub ins: Vec<String>,
    pub outs: Vec<String>,
}

impl SignatureFile {
    pub fn to_signature(&self) -> Result<Signature, Error> {
        let wires = self.wires.iter().map(|w| Name::new(w)).collect();
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let ins: Vec<&str> = g.ins.iter().map(String::as_str).collect();
                let outs: Vec<&str> = g.outs.iter().map(String::as_str).collect();
                Generator::new(&g.name, &ins, &outs)
            })
            .collect();
        Ok(Signature::new(wires, gens)?)
    }

    pub fn from_signature(sig: &Signature) -> Self {
        SignatureFile {
            wires: sig.wires().map(|w| w.to_string()).collect(),
            generators: sig
                .generators()
                .map(|g| GeneratorFile {
                    name: g.name.to_string(),
                    ins: g.ins.iter().map(|w| w.to_string()).collect(),
                    outs: g.outs.iter().map(|w| w.to_string()).collect(),
                })
                .collect(),
        }
    }
}

pub fn parse_signature(text: &str) -> Result<Signature, Error> {
    let file: SignatureFile = serde_json::from_str(text)?;
    file.to_signature()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Port {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pin {
    Node,
}

/// `["in", i]`, `["out", i]` or `["node", id, pin]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Endpoint {
    Port(Port, usize),
    Pin(Pin, u32, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramFile {
    pub dom: Vec<(String, String)>,
    pub cod: Vec<(String, String)>,
    pub nodes: Vec<(u32, String)>,
    pub edges: Vec<(Endpoint, Endpoint)>,
}

fn boundary(q: &LabelContext) -> Vec<(String, String)> {
    q.iter().map(|(l, w)| (l.to_string(), w.to_string())).collect()
}

impl DiagramFile {
    pub fn from_diagram(d: &LabelledDiagram) -> Self {
        let under = d.under();
        let source = |s: Source| match s {
            Source::Input(i) => Endpoint::Port(Port::In, i),
            Source::Node(n, p) => Endpoint::Pin(Pin::Node, n, p),
        };
        let target = |t: Target| match t {
            Target::Output(i) => Endpoint::Port(Port::Out, i),
            Target::Node(n, p) => Endpoint::Pin(Pin::Node, n, p),
        };
        DiagramFile {
            dom: boundary(d.dom()),
            cod: boundary(d.cod()),
            nodes: under.nodes().iter().map(|(id, g)| (*id, g.name.to_string())).collect(),
            edges: under.edges().map(|(s, t)| (source(s), target(t))).collect(),
        }
    }

    pub fn to_diagram(&self, sig: &Signature) -> Result<LabelledDiagram, Error> {
        let context = |side: &[(String, String)]| -> Result<LabelContext, Error> {
            LabelContext::from_pairs(side.iter().map(|(l, w)| (Label::new(l), Name::new(w))))
                .map_err(|e| Error::Format(e.to_string()))
        };
        let dom = context(&self.dom)?;
        let cod = context(&self.cod)?;
        let mut nodes: BTreeMap<u32, Arc<Generator>> = BTreeMap::new();
        for (id, name) in &self.nodes {
            let g = sig.generator(name).ok_or_else(|| Error::Format(format!("unknown generator `{name}`")))?;
            if nodes.insert(*id, g.clone()).is_some() {
                return Err(Error::Format(format!("node {id} listed twice")));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (s, t) in &self.edges {
            let s = match *s {
                Endpoint::Port(Port::In, i) => Source::Input(i),
                Endpoint::Pin(_, n, p) => Source::Node(n, p),
                Endpoint::Port(Port::Out, _) => return Err(Error::Format("an edge starts at an output port".into())),
            };
            let t = match *t {
                Endpoint::Port(Port::Out, i) => Target::Output(i),
                Endpoint::Pin(_, n, p) => Target::Node(n, p),
                Endpoint::Port(Port::In, _) => return Err(Error::Format("an edge ends at an input port".into())),
            };
            edges.push((s, t));
        }
        let wires = |q: &LabelContext| q.wires().cloned().collect::<Vec<_>>();
        let under = Diagram::new(wires(&dom), wires(&cod), nodes, edges)?;
        Ok(LabelledDiagram::new(dom, cod, under)?)
    }
}

pub fn diagram_to_json(d: &LabelledDiagram) -> String {
    serde_json::to_string_pretty(&DiagramFile::from_diagram(d)).expect("diagram files always serialize")
}

pub fn diagram_from_json(text: &str, sig: &Signature) -> Result<LabelledDiagram, Error> {
    let file: DiagramFile = serde_json::from_str(text)?;
    file.to_diagram(sig)
}
