//! DIMACS edge format and JSON `{labels, edges}` for graphs.
//!
//! DIMACS output carries vertex labels in `c label <i> <text>` comment
//! lines, so a file written here reads back to the identical graph and
//! re-exports byte for byte.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

pub fn to_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    for (i, l) in g.labels().iter().enumerate() {
        writeln!(out, "c label {} {}", i + 1, l).expect("writing to a String");
    }
    writeln!(out, "p edge {} {}", g.n(), g.edge_count()).expect("writing to a String");
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a String");
    }
    out
}

pub fn from_dimacs(text: &str) -> Result<Graph, GraphError> {
    let err = |line: usize, message: &str| GraphError::Parse {
        line,
        message: message.to_string(),
    };
    let mut labels: Vec<(usize, String)> = Vec::new();
    let mut graph: Option<Graph> = None;
    let mut declared_edges = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("c label ") {
            let (index, label) = rest
                .split_once(' ')
                .ok_or_else(|| err(line_no, "label line needs an index and a label"))?;
            let index: usize = index
                .parse()
                .map_err(|_| err(line_no, "label index is not a number"))?;
            labels.push((index, label.to_string()));
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("c") => {}
            Some("p") => {
                if graph.is_some() {
                    return Err(err(line_no, "duplicate problem line"));
                }
                if fields.next() != Some("edge") {
                    return Err(err(line_no, "expected `p edge <n> <m>`"));
                }
                let n: usize = parse_field(fields.next(), line_no)?;
                declared_edges = parse_field(fields.next(), line_no)?;
                let mut names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
                for (index, label) in labels.drain(..) {
                    if index == 0 || index > n {
                        return Err(err(line_no, "label index out of range"));
                    }
                    names[index - 1] = label;
                }
                graph = Some(Graph::new(names)?);
            }
            Some("e") => {
                let g = graph
                    .as_mut()
                    .ok_or_else(|| err(line_no, "edge before problem line"))?;
                let u: usize = parse_field(fields.next(), line_no)?;
                let v: usize = parse_field(fields.next(), line_no)?;
                if u == 0 || v == 0 {
                    return Err(err(line_no, "DIMACS vertices are 1-based"));
                }
                g.add_edge(u - 1, v - 1)?;
            }
            Some(other) => return Err(err(line_no, &format!("unknown line type {other:?}"))),
            None => {}
        }
    }
    let g = graph.ok_or_else(|| err(0, "missing problem line"))?;
    if g.edge_count() != declared_edges {
        return Err(err(
            0,
            &format!(
                "problem line declares {declared_edges} edges, found {}",
                g.edge_count()
            ),
        ));
    }
    Ok(g)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize) -> Result<T, GraphError> {
    field
        .and_then(|f| f.parse().ok())
        .ok_or_else(|| GraphError::Parse {
            line,
            message: "missing or malformed number".to_string(),
        })
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    labels: Vec<String>,
    edges: Vec<[usize; 2]>,
}

pub fn to_json(g: &Graph) -> String {
    let doc = GraphJson {
        labels: g.labels().to_vec(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

pub fn from_json(text: &str) -> Result<Graph, GraphError> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let mut g = Graph::new(doc.labels)?;
    for [u, v] in doc.edges {
        g.add_edge(u, v)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::strong_product;

    #[test]
    fn dimacs_round_trip_is_byte_exact() {
        let g = strong_product(&Graph::cycle(5), &Graph::complete(2));
        let text = to_dimacs(&g);
        let back = from_dimacs(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_dimacs(&back), text);
    }

    #[test]
    fn json_round_trip_is_byte_exact() {
        let g = Graph::cycle(7);
        let text = to_json(&g);
        let back = from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn plain_dimacs_without_labels() {
        let g = from_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn malformed_dimacs() {
        assert!(from_dimacs("e 1 2\n").is_err());
        assert!(from_dimacs("p edge 2 1\ne 0 1\n").is_err());
        assert!(from_dimacs("p edge 2 2\ne 1 2\n").is_err());
        assert!(from_dimacs("p edge 2 1\ne 1 1\n").is_err());
        assert!(from_dimacs("x\n").is_err());
    }
}
