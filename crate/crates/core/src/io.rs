//! graph6, JSON and DOT serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph, GraphError, RoleLabel, VertexId};

const G6_HEADER: &str = ">>graph6<<";

fn g6_size(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// Encodes the upper triangle column by column (x(0,1), x(0,2), x(1,2), ...),
/// six bits per printable byte.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    g6_size(n, &mut out);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ascii")
}

pub fn decode_graph6(input: &str) -> Result<Graph, GraphError> {
    let malformed = |msg: &str| GraphError::MalformedGraph6(msg.to_string());
    let s = input.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(G6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(malformed("empty input"));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(malformed(&format!(
            "byte {b:#04x} outside the printable range"
        )));
    }
    let sixes = |chunk: &[u8]| {
        chunk
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize)
    };
    let (n, body) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] == 126 {
        if bytes.len() < 8 {
            return Err(malformed("truncated size field"));
        }
        (sixes(&bytes[2..8]), &bytes[8..])
    } else {
        if bytes.len() < 4 {
            return Err(malformed("truncated size field"));
        }
        (sixes(&bytes[1..4]), &bytes[4..])
    };
    let nbits = n * n.saturating_sub(1) / 2;
    if body.len() != nbits.div_ceil(6) {
        return Err(malformed(&format!(
            "expected {} data bytes for {n} vertices, found {}",
            nbits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (nbits..body.len() * 6).any(bit) {
        return Err(malformed("non-zero padding bits"));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push(Edge::new(i, j));
            }
            k += 1;
        }
    }
    Graph::with_vertices(n, edges)
}

/// The JSON interchange form: `{"n": .., "edges": [[u,v],..], "labels": {"v": {"role": ..}}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[VertexId; 2]>,
    #[serde(default)]
    pub labels: BTreeMap<VertexId, RoleLabel>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&e| e.into()).collect(),
            labels: g.labels().clone(),
        }
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson::from(&g)
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        Graph::with_vertices(j.n, j.edges.into_iter().map(Edge::from))?.with_labels(j.labels)
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphJson::from(g)).expect("graph json is serializable")
}

pub fn from_json(s: &str) -> Result<Graph, GraphError> {
    let j: GraphJson =
        serde_json::from_str(s).map_err(|e| GraphError::MalformedJson(e.to_string()))?;
    Graph::try_from(j)
}

/// Graphviz output; labelled vertices carry their role name as `label`.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph {name} {{").unwrap();
    for v in g.vertices() {
        let label = g.label(v);
        if label == RoleLabel::Plain {
            writeln!(out, "  {v};").unwrap();
        } else {
            writeln!(out, "  {v} [label=\"{}\"];", label.short_name(v)).unwrap();
        }
    }
    for e in g.edges() {
        writeln!(out, "  {} -- {};", e.lo(), e.hi()).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_is_bg() {
        let p3 = Graph::path(3);
        assert_eq!(encode_graph6(&p3), "Bg");
        assert_eq!(decode_graph6("Bg").unwrap(), p3);
        assert_eq!(decode_graph6(">>graph6<<Bg\n").unwrap(), p3);
    }

    #[test]
    fn known_small_encodings() {
        // K4 is "C~", the empty graph on one vertex is "@".
        assert_eq!(encode_graph6(&Graph::complete(4)), "C~");
        assert_eq!(encode_graph6(&Graph::empty(1)), "@");
        assert_eq!(encode_graph6(&Graph::empty(0)), "?");
    }

    #[test]
    fn long_form_header() {
        let g = Graph::path(70);
        let s = encode_graph6(&g);
        assert_eq!(&s.as_bytes()[..4], &[126, 63, 64, 63 + 6]);
        assert_eq!(decode_graph6(&s).unwrap(), g);
    }

    #[test]
    fn garbage_rejected() {
        assert!(matches!(
            decode_graph6("garbage\x01"),
            Err(GraphError::MalformedGraph6(_))
        ));
        assert!(matches!(
            decode_graph6(""),
            Err(GraphError::MalformedGraph6(_))
        ));
        assert!(matches!(
            decode_graph6("Bgg"),
            Err(GraphError::MalformedGraph6(_))
        ));
        // "Bh" sets a padding bit.
        assert!(matches!(
            decode_graph6("Bh"),
            Err(GraphError::MalformedGraph6(_))
        ));
    }

    #[test]
    fn json_shape() {
        let g = Graph::path(3)
            .with_labels([
                (0, RoleLabel::TerminalA),
                (1, RoleLabel::Bottleneck { index: 3 }),
            ])
            .unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&g)).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["edges"], serde_json::json!([[0, 1], [1, 2]]));
        assert_eq!(v["labels"]["0"]["role"], "TerminalA");
        assert_eq!(v["labels"]["1"]["index"], 3);
        assert_eq!(from_json(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn dot_labels() {
        let g = Graph::path(2)
            .with_labels([
                (0, RoleLabel::TerminalA),
                (
                    1,
                    RoleLabel::PathVertex {
                        path: 2,
                        position: 5,
                    },
                ),
            ])
            .unwrap();
        let dot = to_dot(&g, "G");
        assert!(dot.contains("0 [label=\"a*\"]"));
        assert!(dot.contains("1 [label=\"u[2,5]\"]"));
        assert!(dot.contains("0 -- 1;"));
    }
}
