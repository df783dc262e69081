//! DOT rendering of multiset diagrams: one node per object listing its
//! points with denominator strings, one edge per arrow labeled with its
//! classification flags.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::multiset::{FiniteMultiset, MultisetArrow, MultisetError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DotError {
    #[error("arrow {arrow:?} references unknown object {object:?}")]
    UnknownObject { arrow: String, object: String },
    #[error(transparent)]
    Multiset(#[from] MultisetError),
}

/// A named diagram: objects keyed by id, arrows referencing them.
#[derive(Debug, Clone, Deserialize)]
pub struct Diagram {
    pub objects: BTreeMap<String, FiniteMultiset>,
    #[serde(default)]
    pub arrows: Vec<DiagramArrow>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DiagramArrow {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub map: BTreeMap<String, String>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders the diagram as a `digraph`; arrows are validated first so every
/// edge label carries honest classification flags.
pub fn render(diagram: &Diagram) -> Result<String, DotError> {
    let mut out = String::from("digraph multisets {\n  rankdir=LR;\n  node [shape=box];\n");
    for (name, object) in &diagram.objects {
        let mut label = escape(name);
        for (id, d) in object.points() {
            label.push_str("\\n");
            label.push_str(&escape(&format!("{id}: {d}")));
        }
        out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", escape(name), label));
    }
    for arrow in &diagram.arrows {
        let dom = diagram
            .objects
            .get(&arrow.dom)
            .ok_or_else(|| DotError::UnknownObject {
                arrow: arrow.name.clone(),
                object: arrow.dom.clone(),
            })?;
        let cod = diagram
            .objects
            .get(&arrow.cod)
            .ok_or_else(|| DotError::UnknownObject {
                arrow: arrow.name.clone(),
                object: arrow.cod.clone(),
            })?;
        let checked = MultisetArrow::check(dom.clone(), cod.clone(), arrow.map.clone())?;
        let flags = checked.classify().flags();
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{} [{}]\"];\n",
            escape(&arrow.dom),
            escape(&arrow.cod),
            escape(&arrow.name),
            flags
        ));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supernat::{Exponent, SupernaturalNumber};

    #[test]
    fn renders_objects_and_flags() {
        let d12 = FiniteMultiset::dn(12).unwrap();
        let with_inf = FiniteMultiset::new([
            ("a".to_string(), SupernaturalNumber::one()),
            (
                "b".to_string(),
                SupernaturalNumber::new(Exponent::Finite(0), [(2, Exponent::Infinite)]).unwrap(),
            ),
        ])
        .unwrap();
        let diagram = Diagram {
            objects: [("X".to_string(), d12), ("Y".to_string(), with_inf)].into(),
            arrows: vec![DiagramArrow {
                name: "f".to_string(),
                dom: "X".to_string(),
                cod: "Y".to_string(),
                map: [("0", "a"), ("1", "a")]
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .into(),
            }],
        };
        let dot = render(&diagram).unwrap();
        assert!(dot.contains("1: 2^2·3"));
        assert!(dot.contains("b: 2^∞"));
        assert!(dot.contains("f [plain]"));
        // identical input renders identical bytes
        assert_eq!(dot, render(&diagram).unwrap());
    }

    #[test]
    fn unknown_object_is_reported() {
        let diagram = Diagram {
            objects: [("X".to_string(), FiniteMultiset::two())].into(),
            arrows: vec![DiagramArrow {
                name: "f".to_string(),
                dom: "X".to_string(),
                cod: "Z".to_string(),
                map: BTreeMap::new(),
            }],
        };
        assert_eq!(
            render(&diagram).unwrap_err(),
            DotError::UnknownObject {
                arrow: "f".into(),
                object: "Z".into()
            }
        );
    }
}
