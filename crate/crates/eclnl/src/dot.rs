//! Graphviz output.

use std::fmt::Write;

use eclnl_core::diagram::{Source, Target};
use eclnl_core::LabelledDiagram;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// A left-to-right digraph: boundary ports are plaintext nodes showing their
/// label and wire type, generators are boxes, and each wire is an edge
/// labelled with its type. Pins are shown when a generator has several.
pub fn diagram_to_dot(d: &LabelledDiagram, name: &str) -> String {
    let under = d.under();
    let mut s = String::new();
    let _ = writeln!(s, "digraph {} {{", quote(name));
    s.push_str("  rankdir=LR;\n  node [shape=box];\n");
    for (i, (l, w)) in d.dom().iter().enumerate() {
        let _ = writeln!(s, "  in{i} [shape=plaintext, label={}];", quote(&format!("{l} : {w}")));
    }
    for (id, g) in under.nodes() {
        let _ = writeln!(s, "  n{id} [label={}];", quote(g.name.as_str()));
    }
    for (i, (l, w)) in d.cod().iter().enumerate() {
        let _ = writeln!(s, "  out{i} [shape=plaintext, label={}];", quote(&format!("{l} : {w}")));
    }
    for (src, dst) in under.edges() {
        let (from, wire, tail) = match src {
            Source::Input(i) => (format!("in{i}"), under.inputs()[i].clone(), None),
            Source::Node(n, p) => {
                let g = &under.nodes()[&n];
                (format!("n{n}"), g.outs[p].clone(), (g.outs.len() > 1).then_some(p))
            }
        };
        let (to, head) = match dst {
            Target::Output(i) => (format!("out{i}"), None),
            Target::Node(n, p) => (format!("n{n}"), (under.nodes()[&n].ins.len() > 1).then_some(p)),
        };
        let mut attrs = vec![format!("label={}", quote(wire.as_str()))];
        if let Some(p) = tail {
            attrs.push(format!("taillabel=\"{p}\""));
        }
        if let Some(p) = head {
            attrs.push(format!("headlabel=\"{p}\""));
        }
        let _ = writeln!(s, "  {from} -> {to} [{}];", attrs.join(", "));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use eclnl_core::diagram::{apply_generator, FreshLabels};
    use eclnl_core::{Label, LabelContext, LabelTuple, Name, Signature};

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote(r#"a"b\c"#), r#""a\"b\\c""#);
    }

    #[test]
    fn cnot_pins_are_labelled() {
        let sig = Signature::demo();
        let q = LabelContext::from_pairs([(Label::new("a"), Name::new("qubit")), (Label::new("b"), Name::new("qubit"))])
            .unwrap();
        let k = LabelTuple::pair(LabelTuple::Lbl(Label::new("a")), LabelTuple::Lbl(Label::new("b")));
        let (d, _) =
            apply_generator(&LabelledDiagram::identity(&q), sig.generator("cnot").unwrap(), &k, &mut FreshLabels::new())
                .unwrap();
        let dot = diagram_to_dot(&d, "c");
        assert!(dot.starts_with("digraph \"c\" {"));
        assert!(dot.contains("in0 -> n0 [label=\"qubit\", headlabel=\"0\"];"));
        assert!(dot.contains("in1 -> n0 [label=\"qubit\", headlabel=\"1\"];"));
        assert!(dot.contains("n0 -> out1 [label=\"qubit\", taillabel=\"1\"];"));
        assert!(dot.contains("in0 [shape=plaintext, label=\"a : qubit\"];"));
    }
}
