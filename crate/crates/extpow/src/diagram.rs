//! Weight-diagram emitter: the basis of the m-th exterior power drawn as a
//! graph whose edges are the simple-root actions, with optional highlighting
//! of one root's paths and optional commutator-class annotations.

use crate::index::{WeightIndex, WeightPair};
use crate::transvect::{classify_commutator, CommutatorClass};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagramFormat {
    Dot,
    Tikz,
    Json,
}

impl DiagramFormat {
    pub fn from_name(s: &str) -> Result<DiagramFormat, Error> {
        match s {
            "dot" => Ok(DiagramFormat::Dot),
            "tikz" => Ok(DiagramFormat::Tikz),
            "json" => Ok(DiagramFormat::Json),
            other => Err(Error::Parse(format!("unknown diagram format: {other}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiagramSpec {
    pub n: u32,
    pub m: u32,
    /// Simple root given as the adjacent index pair (k, k+1).
    pub highlight_root: Option<(u32, u32)>,
    pub format: DiagramFormat,
    /// Annotate the commutator class of [t_{I,J}, wedge t] per simple root
    /// (JSON output only).
    pub classify: Option<WeightPair>,
}

#[derive(Debug, Clone)]
struct Edge {
    root: u32,
    from: WeightIndex,
    to: WeightIndex,
    highlighted: bool,
}

fn edges(spec: &DiagramSpec) -> Result<Vec<Edge>, Error> {
    if spec.m < 1 || spec.m >= spec.n {
        return Err(Error::InvalidIndex(format!(
            "diagram requires 1 <= m < n, got n={}, m={}",
            spec.n, spec.m
        )));
    }
    if let Some((i, j)) = spec.highlight_root {
        if j != i + 1 || i < 1 || j >= spec.n + 1 || i > spec.n - 1 {
            return Err(Error::InvalidIndex(format!(
                "highlight root must be an adjacent pair (k, k+1) with 1 <= k < n, got ({i}, {j})"
            )));
        }
    }
    let mut out = Vec::new();
    // Root alpha_k moves e_{k+1} to e_k: an edge from every index containing
    // k+1 but not k, sorted by root then by source.
    for k in 1..spec.n {
        for from in WeightIndex::enumerate(spec.n, spec.m) {
            if !from.elems().contains(&(k + 1)) || from.elems().contains(&k) {
                continue;
            }
            let to_elems: Vec<u32> = {
                let mut e: Vec<u32> =
                    from.elems().iter().map(|&x| if x == k + 1 { k } else { x }).collect();
                e.sort_unstable();
                e
            };
            let to = WeightIndex::new(spec.n, &to_elems).expect("valid shifted index");
            let highlighted = spec.highlight_root == Some((k, k + 1));
            out.push(Edge { root: k, from, to, highlighted });
        }
    }
    Ok(out)
}

fn classify_name(c: &CommutatorClass) -> &'static str {
    match c {
        CommutatorClass::Vanishes => "vanishes",
        CommutatorClass::SingleShift { .. } => "single-shift",
        CommutatorClass::TripleProduct { .. } => "triple-product",
        CommutatorClass::Degenerate => "degenerate",
    }
}

/// Render the weight diagram in the requested format. Output is fully
/// determined by the spec: vertices in lex order, edges sorted by root then
/// source.
pub fn emit_diagram(spec: &DiagramSpec) -> Result<String, Error> {
    let es = edges(spec)?;
    let vertices = WeightIndex::enumerate(spec.n, spec.m);
    match spec.format {
        DiagramFormat::Dot => {
            let mut s = String::from("digraph weights {\n  rankdir=LR;\n");
            for v in &vertices {
                s.push_str(&format!("  \"{}\";\n", v.label()));
            }
            for e in &es {
                let attrs = if e.highlighted {
                    format!(" [label=\"{}\", color=red, penwidth=2]", e.root)
                } else {
                    format!(" [label=\"{}\"]", e.root)
                };
                s.push_str(&format!("  \"{}\" -> \"{}\"{};\n", e.from.label(), e.to.label(), attrs));
            }
            s.push_str("}\n");
            Ok(s)
        }
        DiagramFormat::Tikz => {
            let mut s = String::from("\\begin{tikzpicture}\n");
            for (i, v) in vertices.iter().enumerate() {
                s.push_str(&format!(
                    "  \\node (v{}) at ({}, 0) {{{}}};\n",
                    v.label(),
                    i,
                    v.label()
                ));
            }
            for e in &es {
                let style = if e.highlighted { "->, thick, red" } else { "->" };
                s.push_str(&format!(
                    "  \\draw[{}] (v{}) -- node[above] {{{}}} (v{});\n",
                    style,
                    e.from.label(),
                    e.root,
                    e.to.label()
                ));
            }
            s.push_str("\\end{tikzpicture}\n");
            Ok(s)
        }
        DiagramFormat::Json => {
            let edge_vals: Vec<serde_json::Value> = es
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "root": e.root,
                        "from": e.from.label(),
                        "to": e.to.label(),
                        "highlighted": e.highlighted,
                    })
                })
                .collect();
            let mut doc = serde_json::json!({
                "n": spec.n,
                "m": spec.m,
                "vertices": vertices.iter().map(|v| v.label()).collect::<Vec<_>>(),
                "edges": edge_vals,
            });
            if let Some(pair) = &spec.classify {
                if pair.row.n() != spec.n || pair.row.m() != spec.m {
                    return Err(Error::ShapeMismatch);
                }
                let mut ann = serde_json::Map::new();
                for k in 1..spec.n {
                    let cls = classify_commutator(pair, k, k + 1)?;
                    ann.insert(k.to_string(), classify_name(&cls).into());
                }
                doc["classification"] = serde_json::json!({
                    "pair": format!("{},{}", pair.row.label(), pair.col.label()),
                    "by_root": ann,
                });
            }
            Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: u32, m: u32, hl: Option<(u32, u32)>, format: DiagramFormat) -> DiagramSpec {
        DiagramSpec { n, m, highlight_root: hl, format, classify: None }
    }

    #[test]
    fn counts_match_closed_forms() {
        for (n, m) in [(5u32, 2u32), (6, 3), (6, 2), (7, 3)] {
            let es = edges(&spec(n, m, Some((2, 3)), DiagramFormat::Dot)).unwrap();
            let per_root = binomial_u64(n - 2, m - 1);
            for k in 1..n {
                assert_eq!(
                    es.iter().filter(|e| e.root == k).count() as u64,
                    per_root,
                    "root {k} at ({n},{m})"
                );
            }
            assert_eq!(es.iter().filter(|e| e.highlighted).count() as u64, per_root);
        }
    }

    fn binomial_u64(n: u32, m: u32) -> u64 {
        let mut r = 1u64;
        for k in 0..m as u64 {
            r = r * (n as u64 - k) / (k + 1);
        }
        r
    }

    #[test]
    fn highlighted_paths_example() {
        let es = edges(&spec(5, 2, Some((2, 3)), DiagramFormat::Dot)).unwrap();
        let hl: Vec<(String, String)> = es
            .iter()
            .filter(|e| e.highlighted)
            .map(|e| (e.from.label(), e.to.label()))
            .collect();
        assert_eq!(
            hl,
            vec![
                ("13".into(), "12".into()),
                ("34".into(), "24".into()),
                ("35".into(), "25".into())
            ]
        );
    }

    #[test]
    fn path_graph_for_vector_representation() {
        let es = edges(&spec(3, 1, None, DiagramFormat::Dot)).unwrap();
        let vs = WeightIndex::enumerate(3, 1);
        assert_eq!(vs.len(), 3);
        assert_eq!(es.len(), 2);
    }

    #[test]
    fn deterministic_output_all_formats() {
        for format in [DiagramFormat::Dot, DiagramFormat::Tikz, DiagramFormat::Json] {
            let a = emit_diagram(&spec(6, 3, Some((4, 5)), format)).unwrap();
            let b = emit_diagram(&spec(6, 3, Some((4, 5)), format)).unwrap();
            assert_eq!(a, b);
            assert!(!a.is_empty());
        }
    }

    #[test]
    fn json_shape_and_classification() {
        let pair = WeightPair::new(
            WeightIndex::new(5, &[1, 2]).unwrap(),
            WeightIndex::new(5, &[3, 4]).unwrap(),
        )
        .unwrap();
        let mut s = spec(5, 2, Some((2, 3)), DiagramFormat::Json);
        s.classify = Some(pair);
        let doc: serde_json::Value = serde_json::from_str(&emit_diagram(&s).unwrap()).unwrap();
        assert_eq!(doc["vertices"].as_array().unwrap().len(), 10);
        assert_eq!(
            doc["edges"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|e| e["highlighted"].as_bool().unwrap())
                .count(),
            3
        );
        let by_root = doc["classification"]["by_root"].as_object().unwrap();
        assert_eq!(by_root.len(), 4);
        for (_, v) in by_root {
            assert!(matches!(
                v.as_str().unwrap(),
                "vanishes" | "single-shift" | "triple-product" | "degenerate"
            ));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(edges(&spec(5, 0, None, DiagramFormat::Dot)).is_err());
        assert!(edges(&spec(5, 5, None, DiagramFormat::Dot)).is_err());
        assert!(edges(&spec(5, 2, Some((2, 4)), DiagramFormat::Dot)).is_err());
        assert!(DiagramFormat::from_name("svg").is_err());
    }
}
