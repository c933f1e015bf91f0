//! JSON interchange for graphs and divisors, CSV/SVG emission for functions.
//!
//! A graph file looks like
//!
//! ```json
//! {
//!   "vertices": ["v0", "v1"],
//!   "edges": [{"id": "e", "u": "v0", "v": "v1", "length": 1.0}]
//! }
//! ```
//!
//! and a divisor file like
//!
//! ```json
//! {
//!   "points": [
//!     {"vertex": "v0", "mass": 1.0},
//!     {"edge": "e", "offset": 0.25, "mass": 2.0}
//!   ]
//! }
//! ```
//!
//! Self-loops in the input are split at their midpoint during construction,
//! so a graph is always re-emitted in its split form; divisor coordinates
//! given on an original loop id are remapped transparently when *reading*.
//!
//! Emitted numbers are rounded to 12 significant digits so that output is
//! stable across runs and platforms.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::divisor::RDivisor;
use crate::error::{Error, Result};
use crate::graph::{EdgeSpec, Loc, MetricGraph, PointOnGraph, Tolerances};
use crate::pwl::PwlFunction;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub u: String,
    pub v: String,
    pub length: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DivisorJson {
    pub points: Vec<DivisorPointJson>,
}

/// One divisor entry: either a vertex or an interior point of an edge.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DivisorPointJson {
    Vertex { vertex: String, mass: f64 },
    Edge { edge: String, offset: f64, mass: f64 },
}

/// Round to 12 significant digits; keeps emitted JSON stable while staying
/// well below every tolerance the crate works with.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific notation round-trips")
}

/// Format a scalar with a decimal point (`1.0`, not `1`), rounded to 12
/// significant digits.
pub fn format_scalar(x: f64) -> String {
    let r = round_sig(x);
    let s = format!("{r}");
    if s.contains('.') || s.contains('e') || s.contains('E') || !r.is_finite() {
        s
    } else {
        format!("{s}.0")
    }
}

/// Build a graph from its JSON form.
pub fn graph_from_json(doc: &GraphJson, tol: Tolerances) -> Result<MetricGraph> {
    let edges = doc
        .edges
        .iter()
        .map(|e| EdgeSpec::new(&e.id, &e.u, &e.v, e.length))
        .collect();
    MetricGraph::build(doc.vertices.clone(), edges, tol)
}

/// Emit a graph (in split form, see the module docs).
pub fn graph_to_json(g: &MetricGraph) -> GraphJson {
    GraphJson {
        vertices: g.vertex_ids().map(str::to_owned).collect(),
        edges: g
            .edge_specs()
            .map(|(id, u, v, length)| EdgeJson {
                id: id.to_owned(),
                u: u.to_owned(),
                v: v.to_owned(),
                length: round_sig(length),
            })
            .collect(),
    }
}

pub fn load_graph(path: &Path, tol: Tolerances) -> Result<MetricGraph> {
    let text = std::fs::read_to_string(path)?;
    let doc: GraphJson = serde_json::from_str(&text)?;
    graph_from_json(&doc, tol)
}

/// Build a divisor from its JSON form.
pub fn divisor_from_json(g: &MetricGraph, doc: &DivisorJson) -> Result<RDivisor> {
    let mut entries = Vec::with_capacity(doc.points.len());
    for p in &doc.points {
        let (point, mass) = match p {
            DivisorPointJson::Vertex { vertex, mass } => (g.vertex_point(vertex)?, *mass),
            DivisorPointJson::Edge { edge, offset, mass } => (g.locate(edge, *offset)?, *mass),
        };
        entries.push((point, mass));
    }
    RDivisor::new(g, entries)
}

/// Emit a divisor, vertices first (by id), then interior points by
/// (edge id, offset).
pub fn divisor_to_json(g: &MetricGraph, d: &RDivisor) -> DivisorJson {
    let mut vertex_points: Vec<(String, f64)> = Vec::new();
    let mut edge_points: Vec<(String, f64, f64)> = Vec::new();
    for (p, mass) in d.entries() {
        match p.loc {
            Loc::Vertex(v) => vertex_points.push((g.vertex_id(v).to_owned(), *mass)),
            Loc::Interior { edge, offset } => {
                edge_points.push((g.edge(edge).id.clone(), offset, *mass))
            }
        }
    }
    vertex_points.sort_by(|a, b| a.0.cmp(&b.0));
    edge_points.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut points = Vec::new();
    for (vertex, mass) in vertex_points {
        points.push(DivisorPointJson::Vertex { vertex, mass: round_sig(mass) });
    }
    for (edge, offset, mass) in edge_points {
        points.push(DivisorPointJson::Edge {
            edge,
            offset: round_sig(offset),
            mass: round_sig(mass),
        });
    }
    DivisorJson { points }
}

pub fn load_divisor(path: &Path, g: &MetricGraph) -> Result<RDivisor> {
    let text = std::fs::read_to_string(path)?;
    let doc: DivisorJson = serde_json::from_str(&text)?;
    divisor_from_json(g, &doc)
}

/// Parse a point written as `v3` (vertex id) or `e1:0.25` (edge id and
/// offset from the edge's `u` endpoint).
pub fn parse_point(g: &MetricGraph, text: &str) -> Result<PointOnGraph> {
    if let Some((edge, offset)) = text.rsplit_once(':') {
        let offset: f64 = offset
            .parse()
            .map_err(|_| Error::Parse(format!("invalid offset in point '{text}'")))?;
        g.locate(edge, offset)
    } else {
        g.vertex_point(text)
    }
}

/// Sample a function to CSV: every breakpoint plus `samples` uniform points
/// per edge, one `edge_id,offset,value` line each.
pub fn function_to_csv(g: &MetricGraph, f: &PwlFunction, samples: usize) -> Result<String> {
    f.check_graph(g)?;
    let mut out = String::from("edge_id,offset,value\n");
    for idx in 0..g.edge_count() {
        let id = &g.edge(idx).id;
        let len = g.edge(idx).length;
        let mut offsets: Vec<f64> = f.edge_breakpoints(idx).iter().map(|&(x, _)| x).collect();
        for i in 0..samples.max(2) {
            offsets.push(len * i as f64 / (samples.max(2) - 1) as f64);
        }
        offsets.sort_by(f64::total_cmp);
        offsets.dedup_by(|a, b| (*a - *b).abs() <= g.len_tol());
        for x in offsets {
            let p = g.point_at(idx, x)?;
            let v = f.eval(g, &p)?;
            out.push_str(&format!("{id},{},{}\n", format_scalar(x), format_scalar(v)));
        }
    }
    Ok(out)
}

/// Render a function as a standalone SVG: one panel per edge, the polyline
/// of the function over that edge, axes annotated with the edge id and the
/// global value range.
pub fn function_to_svg(g: &MetricGraph, f: &PwlFunction) -> Result<String> {
    f.check_graph(g)?;
    let (vmin, vmax) = f.value_range();
    let span = (vmax - vmin).max(1e-12);
    let cols = (g.edge_count() as f64).sqrt().ceil() as usize;
    let rows = g.edge_count().div_ceil(cols);
    let (pw, ph, margin) = (220.0, 140.0, 34.0);
    let width = cols as f64 * (pw + margin) + margin;
    let height = rows as f64 * (ph + margin) + margin;
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"monospace\" font-size=\"10\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for idx in 0..g.edge_count() {
        let (col, row) = (idx % cols, idx / cols);
        let x0 = margin + col as f64 * (pw + margin);
        let y0 = margin + row as f64 * (ph + margin);
        let edge = g.edge(idx);
        let scale_x = pw / edge.length;
        let pts: String = f
            .edge_breakpoints(idx)
            .iter()
            .map(|&(x, v)| {
                let px = x0 + x * scale_x;
                let py = y0 + ph - (v - vmin) / span * ph;
                format!("{},{}", format_scalar(px), format_scalar(py))
            })
            .collect::<Vec<_>>()
            .join(" ");
        svg.push_str(&format!(
            "<rect x=\"{x0}\" y=\"{y0}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" \
             stroke=\"#999\"/>\n\
             <polyline points=\"{pts}\" fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"1.5\"/>\n\
             <text x=\"{x0}\" y=\"{ty}\">{id} (len {len})</text>\n",
            ty = y0 - 6.0,
            id = edge.id,
            len = format_scalar(edge.length),
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{margin}\" y=\"{y}\">value range [{lo}, {hi}]</text>\n</svg>\n",
        y = height - 10.0,
        lo = format_scalar(vmin),
        hi = format_scalar(vmax),
    ));
    Ok(svg)
}
