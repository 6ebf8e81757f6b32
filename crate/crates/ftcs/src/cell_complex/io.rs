//! Line-oriented text format and JSON mirror for complexes and syndrome
//! graphs. Both round-trip losslessly.
//!
//! Complex text layout:
//!
//! ```text
//! ftcs-complex v1
//! size 2
//! counts 8 24 24 8
//! vertex <id> <x> <y> <z>            # rationals, "p/q" or "p"
//! edge <id> <u> <v> <wx> <wy> <wz>
//! face <id> <edge>+ <edge>- ...      # oriented boundary walk
//! cell <id> <face> <face> ...
//! ```
//!
//! Syndrome graph text replaces the element lines with
//! `edge <id> <u> <v> <cx> <cy> <cz> <valence>`; vertices are implicit.

use super::{
    Cell, CellComplex3, Edge, Face, FaceStep, GraphEdge, Orientation, SyndromeGraph, Vertex,
};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Parse { line, message: message.into() })
}

pub fn write_complex_text(c: &CellComplex3) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ftcs-complex v1");
    let _ = writeln!(out, "size {}", c.size);
    let _ = writeln!(out, "counts {} {} {} {}", c.vertices.len(), c.edges.len(), c.faces.len(), c.cells.len());
    for (i, v) in c.vertices.iter().enumerate() {
        let _ = writeln!(out, "vertex {} {} {} {}", i, v.pos[0], v.pos[1], v.pos[2]);
    }
    for (i, e) in c.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "edge {} {} {} {} {} {}",
            i, e.ends[0], e.ends[1], e.wrap[0], e.wrap[1], e.wrap[2]
        );
    }
    for (i, f) in c.faces.iter().enumerate() {
        let _ = write!(out, "face {}", i);
        for s in &f.walk {
            let sign = match s.dir {
                Orientation::Forward => '+',
                Orientation::Reverse => '-',
            };
            let _ = write!(out, " {}{}", s.edge, sign);
        }
        let _ = writeln!(out);
    }
    for (i, cell) in c.cells.iter().enumerate() {
        let _ = write!(out, "cell {}", i);
        for f in &cell.faces {
            let _ = write!(out, " {}", f);
        }
        let _ = writeln!(out);
    }
    out
}

pub fn parse_complex_text(text: &str) -> Result<CellComplex3, FormatError> {
    let mut size = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut faces = Vec::new();
    let mut cells = Vec::new();
    let mut header_seen = false;

    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != "ftcs-complex v1" {
                return parse_err(ln, "expected header 'ftcs-complex v1'");
            }
            header_seen = true;
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "size" => size = Some(parse_num::<u32>(tok.next(), ln, "size")?),
            "counts" => { /* informational */ }
            "vertex" => {
                expect_id(tok.next(), vertices.len(), ln, "vertex")?;
                let mut pos = [Rational64::from_integer(0); 3];
                for p in &mut pos {
                    *p = parse_ratio(tok.next(), ln)?;
                }
                vertices.push(Vertex { pos });
            }
            "edge" => {
                expect_id(tok.next(), edges.len(), ln, "edge")?;
                let u = parse_num::<u32>(tok.next(), ln, "endpoint")?;
                let v = parse_num::<u32>(tok.next(), ln, "endpoint")?;
                let mut wrap = [0i8; 3];
                for w in &mut wrap {
                    *w = parse_num::<i8>(tok.next(), ln, "wrap")?;
                }
                edges.push(Edge { ends: [u, v], wrap });
            }
            "face" => {
                expect_id(tok.next(), faces.len(), ln, "face")?;
                let mut walk = Vec::new();
                for t in tok {
                    walk.push(parse_step(t, ln)?);
                }
                faces.push(Face { walk });
            }
            "cell" => {
                expect_id(tok.next(), cells.len(), ln, "cell")?;
                let mut fs = Vec::new();
                for t in tok {
                    fs.push(
                        t.parse::<u32>()
                            .map_err(|_| FormatError::Parse { line: ln, message: format!("bad face id '{t}'") })?,
                    );
                }
                cells.push(Cell { faces: fs });
            }
            other => return parse_err(ln, format!("unknown record '{other}'")),
        }
    }
    let size = match size {
        Some(s) => s,
        None => return parse_err(0, "missing 'size' record"),
    };
    Ok(CellComplex3 { size, vertices, edges, faces, cells })
}

fn expect_id(tok: Option<&str>, expected: usize, line: usize, kind: &str) -> Result<(), FormatError> {
    let id = parse_num::<usize>(tok, line, "id")?;
    if id != expected {
        return parse_err(line, format!("{kind} ids must be sequential: expected {expected}, got {id}"));
    }
    Ok(())
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    match tok {
        Some(t) => t
            .parse::<T>()
            .map_err(|_| FormatError::Parse { line, message: format!("bad {what} '{t}'") }),
        None => parse_err(line, format!("missing {what}")),
    }
}

fn parse_ratio(tok: Option<&str>, line: usize) -> Result<Rational64, FormatError> {
    let t = match tok {
        Some(t) => t,
        None => return parse_err(line, "missing coordinate"),
    };
    let parse = |s: &str| -> Option<i64> { s.parse().ok() };
    let r = match t.split_once('/') {
        Some((p, q)) => match (parse(p), parse(q)) {
            (Some(p), Some(q)) if q != 0 => Rational64::new(p, q),
            _ => return parse_err(line, format!("bad rational '{t}'")),
        },
        None => match parse(t) {
            Some(p) => Rational64::from_integer(p),
            None => return parse_err(line, format!("bad rational '{t}'")),
        },
    };
    Ok(r)
}

fn parse_step(t: &str, line: usize) -> Result<FaceStep, FormatError> {
    let (id, dir) = match t.as_bytes().last() {
        Some(b'+') => (&t[..t.len() - 1], Orientation::Forward),
        Some(b'-') => (&t[..t.len() - 1], Orientation::Reverse),
        _ => return parse_err(line, format!("walk token '{t}' must end in + or -")),
    };
    let edge = id
        .parse::<u32>()
        .map_err(|_| FormatError::Parse { line, message: format!("bad edge id '{id}'") })?;
    Ok(FaceStep { edge, dir })
}

// JSON mirror documents.

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    format: String,
    size: u32,
    vertices: Vec<[String; 3]>,
    edges: Vec<EdgeDoc>,
    faces: Vec<Vec<String>>,
    cells: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    ends: [u32; 2],
    wrap: [i8; 3],
}

pub fn complex_to_json(c: &CellComplex3) -> String {
    let doc = ComplexDoc {
        format: "ftcs-complex v1".into(),
        size: c.size,
        vertices: c
            .vertices
            .iter()
            .map(|v| [v.pos[0].to_string(), v.pos[1].to_string(), v.pos[2].to_string()])
            .collect(),
        edges: c.edges.iter().map(|e| EdgeDoc { ends: e.ends, wrap: e.wrap }).collect(),
        faces: c
            .faces
            .iter()
            .map(|f| {
                f.walk
                    .iter()
                    .map(|s| {
                        let sign = if s.dir == Orientation::Forward { '+' } else { '-' };
                        format!("{}{}", s.edge, sign)
                    })
                    .collect()
            })
            .collect(),
        cells: c.cells.iter().map(|cl| cl.faces.clone()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("complex documents always serialize")
}

pub fn complex_from_json(text: &str) -> Result<CellComplex3, FormatError> {
    let doc: ComplexDoc = serde_json::from_str(text)?;
    if doc.format != "ftcs-complex v1" {
        return parse_err(0, format!("unsupported format '{}'", doc.format));
    }
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for v in &doc.vertices {
        let mut pos = [Rational64::from_integer(0); 3];
        for (a, s) in v.iter().enumerate() {
            pos[a] = parse_ratio(Some(s), 0)?;
        }
        vertices.push(Vertex { pos });
    }
    let edges = doc.edges.iter().map(|e| Edge { ends: e.ends, wrap: e.wrap }).collect();
    let mut faces = Vec::with_capacity(doc.faces.len());
    for f in &doc.faces {
        let mut walk = Vec::with_capacity(f.len());
        for t in f {
            walk.push(parse_step(t, 0)?);
        }
        faces.push(Face { walk });
    }
    let cells = doc.cells.into_iter().map(|faces| Cell { faces }).collect();
    Ok(CellComplex3 { size: doc.size, vertices, edges, faces, cells })
}

pub fn write_graph_text(g: &SyndromeGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ftcs-graph v1");
    let _ = writeln!(out, "size {}", g.size);
    let _ = writeln!(out, "counts {} {}", g.vertex_count, g.edges.len());
    for (i, e) in g.edges.iter().enumerate() {
        let _ = writeln!(
            out,
            "edge {} {} {} {} {} {} {}",
            i, e.ends[0], e.ends[1], e.crossing[0], e.crossing[1], e.crossing[2], e.valence
        );
    }
    out
}

pub fn parse_graph_text(text: &str) -> Result<SyndromeGraph, FormatError> {
    let mut size = None;
    let mut vertex_count = None;
    let mut edges = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let ln = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != "ftcs-graph v1" {
                return parse_err(ln, "expected header 'ftcs-graph v1'");
            }
            header_seen = true;
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next().unwrap() {
            "size" => size = Some(parse_num::<u32>(tok.next(), ln, "size")?),
            "counts" => {
                vertex_count = Some(parse_num::<u32>(tok.next(), ln, "vertex count")?);
            }
            "edge" => {
                expect_id(tok.next(), edges.len(), ln, "edge")?;
                let u = parse_num::<u32>(tok.next(), ln, "endpoint")?;
                let v = parse_num::<u32>(tok.next(), ln, "endpoint")?;
                let mut crossing = [0i8; 3];
                for c in &mut crossing {
                    *c = parse_num::<i8>(tok.next(), ln, "crossing")?;
                }
                let valence = parse_num::<u32>(tok.next(), ln, "valence")?;
                edges.push(GraphEdge { ends: [u, v], crossing, valence });
            }
            other => return parse_err(ln, format!("unknown record '{other}'")),
        }
    }
    match (size, vertex_count) {
        (Some(s), Some(v)) => Ok(SyndromeGraph::new(s, v, edges)),
        _ => parse_err(0, "missing 'size' or 'counts' record"),
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    format: String,
    size: u32,
    vertex_count: u32,
    edges: Vec<GraphEdge>,
}

pub fn graph_to_json(g: &SyndromeGraph) -> String {
    let doc = GraphDoc {
        format: "ftcs-graph v1".into(),
        size: g.size,
        vertex_count: g.vertex_count,
        edges: g.edges.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("graph documents always serialize")
}

pub fn graph_from_json(text: &str) -> Result<SyndromeGraph, FormatError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    if doc.format != "ftcs-graph v1" {
        return parse_err(0, format!("unsupported format '{}'", doc.format));
    }
    Ok(SyndromeGraph::new(doc.size, doc.vertex_count, doc.edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell_complex::{extract_syndrome_graph, Side};
    use crate::lattices::cubic;

    #[test]
    fn complex_text_round_trip() {
        let c = cubic(2);
        let text = write_complex_text(&c);
        let back = parse_complex_text(&text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn complex_json_round_trip() {
        let c = cubic(3);
        let back = complex_from_json(&complex_to_json(&c)).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn graph_round_trips() {
        let g = extract_syndrome_graph(&cubic(2), Side::Primal).unwrap();
        let t = parse_graph_text(&write_graph_text(&g)).unwrap();
        assert_eq!(g, t);
        let j = graph_from_json(&graph_to_json(&g)).unwrap();
        assert_eq!(g, j);
    }

    #[test]
    fn parse_error_carries_line_number() {
        let text = "ftcs-complex v1\nsize 2\nvertex 0 zero 0 0\n";
        match parse_complex_text(text) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
