//! Text formats: graphs, multicolored independent set inputs and solution
//! JSON. Tree decompositions live in [`crate::treewidth::decomposition`].
//!
//! Writers always emit the canonical layout (comments, then label lines,
//! then the header, then records sorted ascending), and reading a canonical
//! file and writing it back reproduces it byte for byte.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::generators::MisInstance;
use crate::graph::{Digraph, Vertex};
use crate::oracle::{Algorithm, Solution, Status};

/// A parsed graph file: the graph plus its free-form comment lines
/// (without the leading `c `).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Digraph,
    pub comments: Vec<String>,
}

const LABEL_PREFIX: &str = "label ";

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.ok_or_else(|| ParseError::syntax(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| ParseError::syntax(line, format!("bad {what}")))
}

fn one_based(v: usize, n: usize, line: usize) -> Result<Vertex, ParseError> {
    if v == 0 || v > n {
        return Err(ParseError::syntax(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

fn comment_body(line: &str) -> Option<&str> {
    if line == "c" {
        Some("")
    } else {
        line.strip_prefix("c ")
    }
}

/// Parses `p kfvd <n> <m>` followed by `m` lines `<tail> <head>` (1-based).
/// Comment lines of the form `c label <id> <name>` name vertices.
pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut comments = Vec::new();
    let mut labels: Vec<(usize, usize, String)> = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = comment_body(line) {
            if let Some(rest) = body.strip_prefix(LABEL_PREFIX) {
                let mut it = rest.splitn(2, ' ');
                let id = parse_usize(it.next(), line_no, "label vertex")?;
                let name = it
                    .next()
                    .filter(|s| !s.is_empty())
                    .ok_or_else(|| ParseError::syntax(line_no, "missing label"))?;
                labels.push((line_no, id, name.to_string()));
            } else {
                comments.push(body.to_string());
            }
            continue;
        }
        let mut it = line.split_whitespace();
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::syntax(line_no, "duplicate header"));
            }
            it.next();
            if it.next() != Some("kfvd") {
                return Err(ParseError::syntax(line_no, "expected `p kfvd <n> <m>`"));
            }
            let n = parse_usize(it.next(), line_no, "vertex count")?;
            let m = parse_usize(it.next(), line_no, "arc count")?;
            header = Some((n, m));
            continue;
        }
        let (n, _) = header.ok_or(ParseError::MissingHeader("p kfvd"))?;
        let u = one_based(parse_usize(it.next(), line_no, "tail")?, n, line_no)?;
        let v = one_based(parse_usize(it.next(), line_no, "head")?, n, line_no)?;
        if it.next().is_some() {
            return Err(ParseError::syntax(line_no, "trailing tokens"));
        }
        if u == v {
            return Err(ParseError::syntax(line_no, "self-loop"));
        }
        arcs.push((u, v));
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader("p kfvd"))?;
    if arcs.len() != m {
        return Err(ParseError::CountMismatch {
            what: "arcs",
            declared: m,
            found: arcs.len(),
        });
    }
    let mut graph = Digraph::from_arcs(n, arcs)?;
    if graph.arc_count() != m {
        return Err(ParseError::syntax(0, "duplicate arcs"));
    }
    if !labels.is_empty() {
        let mut names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        for (line_no, id, name) in labels {
            let v = one_based(id, n, line_no)?;
            names[v] = name;
        }
        graph = graph.with_labels(names)?;
    }
    Ok(GraphFile { graph, comments })
}

pub fn write_graph(file: &GraphFile) -> String {
    let g = &file.graph;
    let mut out = String::new();
    for c in &file.comments {
        if c.is_empty() {
            out.push_str("c\n");
        } else {
            let _ = writeln!(out, "c {c}");
        }
    }
    if !g.has_default_labels() {
        for v in g.vertices() {
            if g.label(v) != (v + 1).to_string() {
                let _ = writeln!(out, "c {LABEL_PREFIX}{} {}", v + 1, g.label(v));
            }
        }
    }
    let _ = writeln!(out, "p kfvd {} {}", g.n(), g.arc_count());
    for (u, v) in g.arcs() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

/// Shorthand for writing a bare graph without comments.
pub fn graph_to_string(g: &Digraph) -> String {
    write_graph(&GraphFile {
        graph: g.clone(),
        comments: Vec::new(),
    })
}

/// Parses `p mis <n> <m> <k>`, then `l <v> <class>` and `e <u> <v>` lines
/// (vertices and classes 1-based).
pub fn parse_mis(text: &str) -> Result<MisInstance, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut class_of: Vec<Option<usize>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() || comment_body(line).is_some() {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("p") => {
                if it.next() != Some("mis") {
                    return Err(ParseError::syntax(line_no, "expected `p mis <n> <m> <k>`"));
                }
                let n = parse_usize(it.next(), line_no, "vertex count")?;
                let m = parse_usize(it.next(), line_no, "edge count")?;
                let k = parse_usize(it.next(), line_no, "class count")?;
                header = Some((n, m, k));
                class_of = vec![None; n];
            }
            Some("l") => {
                let (n, _, k) = header.ok_or(ParseError::MissingHeader("p mis"))?;
                let v = one_based(parse_usize(it.next(), line_no, "vertex")?, n, line_no)?;
                let c = parse_usize(it.next(), line_no, "class")?;
                if c == 0 || c > k {
                    return Err(ParseError::syntax(line_no, format!("class {c} outside 1..={k}")));
                }
                class_of[v] = Some(c - 1);
            }
            Some("e") => {
                let (n, _, _) = header.ok_or(ParseError::MissingHeader("p mis"))?;
                let u = one_based(parse_usize(it.next(), line_no, "endpoint")?, n, line_no)?;
                let v = one_based(parse_usize(it.next(), line_no, "endpoint")?, n, line_no)?;
                edges.push((u, v));
            }
            _ => return Err(ParseError::syntax(line_no, "unknown record")),
        }
    }
    let (n, m, k) = header.ok_or(ParseError::MissingHeader("p mis"))?;
    if edges.len() != m {
        return Err(ParseError::CountMismatch {
            what: "edges",
            declared: m,
            found: edges.len(),
        });
    }
    let classes = class_of
        .iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| ParseError::syntax(0, format!("vertex {} has no class", v + 1))))
        .collect::<Result<Vec<_>, _>>()?;
    MisInstance::new(n, edges, classes, k).map_err(|e| ParseError::syntax(0, e.to_string()))
}

pub fn write_mis(mis: &MisInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p mis {} {} {}", mis.n(), mis.edges().len(), mis.k());
    for v in 0..mis.n() {
        let _ = writeln!(out, "l {} {}", v + 1, mis.class_of(v) + 1);
    }
    for &(u, v) in mis.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Serialized form of a [`Solution`]; vertices are given by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub status: Status,
    pub k: usize,
    pub deleted: Vec<String>,
    pub sinks: Vec<String>,
    pub algorithm: Algorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_sizes: Option<Vec<usize>>,
}

impl SolutionRecord {
    pub fn from_solution(g: &Digraph, k: usize, sol: &Solution) -> Self {
        SolutionRecord {
            status: sol.status,
            k,
            deleted: sol.deleted.iter().map(|&v| g.label(v).to_string()).collect(),
            sinks: sol.sinks.iter().map(|&v| g.label(v).to_string()).collect(),
            algorithm: sol.algorithm,
            kernel_sizes: None,
        }
    }

    /// Resolves the deleted labels against `g`.
    pub fn deleted_ids(&self, g: &Digraph) -> Result<Vec<Vertex>, ParseError> {
        self.deleted
            .iter()
            .map(|l| {
                g.vertex_by_label(l)
                    .ok_or_else(|| ParseError::syntax(0, format!("unknown vertex label `{l}`")))
            })
            .collect()
    }
}

pub fn write_solution(rec: &SolutionRecord) -> String {
    let mut s = serde_json::to_string(rec).expect("solution records always serialize");
    s.push('\n');
    s
}

pub fn parse_solution(text: &str) -> Result<SolutionRecord, ParseError> {
    serde_json::from_str(text.trim_end()).map_err(|e| ParseError::Json(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "c a wait-for snapshot\np kfvd 3 3\n1 2\n2 1\n2 3\n";
        let file = parse_graph(text).unwrap();
        assert_eq!(file.graph.n(), 3);
        assert_eq!(file.comments, vec!["a wait-for snapshot".to_string()]);
        assert_eq!(write_graph(&file), text);
    }

    #[test]
    fn labels_round_trip() {
        let g = Digraph::from_arcs(2, [(0, 1)])
            .unwrap()
            .with_labels(vec!["w_1".into(), "2".into()])
            .unwrap();
        let text = graph_to_string(&g);
        assert_eq!(text, "c label 1 w_1\np kfvd 2 1\n1 2\n");
        assert_eq!(parse_graph(&text).unwrap().graph, g);
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_graph("1 2\n"), Err(ParseError::MissingHeader(_))));
        assert!(parse_graph("p kfvd 2 1\n1 3\n").is_err());
        assert!(parse_graph("p kfvd 2 1\n1 1\n").is_err());
        assert!(matches!(
            parse_graph("p kfvd 2 2\n1 2\n"),
            Err(ParseError::CountMismatch { .. })
        ));
        assert!(parse_graph("p kfvd 2 2\n1 2\n1 2\n").is_err());
    }

    #[test]
    fn solution_json_has_stable_key_order() {
        let g = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        let sol = Solution::yes(&g, [0], Algorithm::BruteForce);
        let rec = SolutionRecord::from_solution(&g, 1, &sol);
        let text = write_solution(&rec);
        assert_eq!(
            text,
            "{\"status\":\"yes\",\"k\":1,\"deleted\":[\"1\"],\"sinks\":[\"2\"],\"algorithm\":\"bruteforce\"}\n"
        );
        assert_eq!(parse_solution(&text).unwrap(), rec);
        assert_eq!(rec.deleted_ids(&g).unwrap(), vec![0]);
    }

    #[test]
    fn mis_round_trip() {
        let text = "p mis 3 1 2\nl 1 1\nl 2 1\nl 3 2\ne 1 3\n";
        let mis = parse_mis(text).unwrap();
        assert_eq!(mis.k(), 2);
        assert_eq!(write_mis(&mis), text);
        assert!(parse_mis("p mis 2 0 2\nl 1 1\n").is_err());
    }
}
