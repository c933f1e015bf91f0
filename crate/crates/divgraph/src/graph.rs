//! Compact connected metric graphs and points on them.
//!
//! A metric graph is a finite multigraph in which every edge carries a
//! positive length; the geometric realization glues an interval `[0, length]`
//! per edge along the incidences. Parallel edges are allowed. Self-loops are
//! accepted on input but split at their midpoint during construction, so
//! internally every edge has two distinct endpoints; coordinates given on an
//! original loop edge are remapped onto the two halves transparently.
//!
//! Points are addressed as `(edge id, offset from the edge's u-endpoint)` or
//! as a bare vertex id. Offsets within the length tolerance of an endpoint
//! are snapped to the vertex, so every point has one canonical encoding.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BinaryHeap, HashMap};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

/// Relative tolerances threaded through all geometric predicates.
///
/// Length comparisons use `len_rel * total_length`; value comparisons use
/// `val_rel * max(1, scale)` where `scale` is the magnitude of the function
/// or mass at hand. The defaults suit double precision at desk scale; both
/// can be overridden per graph (the CLI maps `--tol-len`/`--tol-val` and the
/// `DIVGRAPH_TOL_LEN`/`DIVGRAPH_TOL_VAL` environment variables here).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub len_rel: f64,
    pub val_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { len_rel: 1e-12, val_rel: 1e-9 }
    }
}

/// One edge of the input description.
#[derive(Clone, Debug)]
pub struct EdgeSpec {
    pub id: String,
    pub u: String,
    pub v: String,
    pub length: f64,
}

impl EdgeSpec {
    pub fn new(id: &str, u: &str, v: &str, length: f64) -> Self {
        EdgeSpec { id: id.into(), u: u.into(), v: v.into(), length }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub length: f64,
}

/// Location of a point, relative to a fixed graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Loc {
    Vertex(usize),
    /// Strictly interior to an edge: `0 < offset < length`.
    Interior { edge: usize, offset: f64 },
}

impl Loc {
    /// Total order used to canonicalize divisor supports: vertices first by
    /// index, then interior points by (edge, offset).
    pub(crate) fn sort_key(&self) -> (u8, usize, f64) {
        match *self {
            Loc::Vertex(v) => (0, v, 0.0),
            Loc::Interior { edge, offset } => (1, edge, offset),
        }
    }

    pub(crate) fn cmp_key(&self, other: &Loc) -> Ordering {
        let a = self.sort_key();
        let b = other.sort_key();
        (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2))
    }
}

/// A point of the geometric realization, bound to the graph that produced it.
///
/// Construct through [`MetricGraph::vertex_point`] or [`MetricGraph::locate`];
/// both canonicalize, so two encodings of the same point compare equal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointOnGraph {
    pub(crate) fp: u64,
    pub(crate) loc: Loc,
}

impl PointOnGraph {
    pub fn is_vertex(&self) -> bool {
        matches!(self.loc, Loc::Vertex(_))
    }
}

/// A compact connected metric graph with string-labelled vertices and edges.
#[derive(Clone, Debug)]
pub struct MetricGraph {
    vertex_ids: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    incident: Vec<Vec<usize>>,
    /// Original self-loop id -> (first half, second half) edge indices.
    loop_halves: HashMap<String, (usize, usize)>,
    total_length: f64,
    tol: Tolerances,
    fp: u64,
}

impl MetricGraph {
    /// Convenience constructor; edges are `(id, u, v, length)`.
    pub fn new(vertices: &[&str], edges: &[(&str, &str, &str, f64)]) -> Result<Self> {
        Self::build(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges.iter().map(|&(id, u, v, l)| EdgeSpec::new(id, u, v, l)).collect(),
            Tolerances::default(),
        )
    }

    /// Full constructor. Validates ids, lengths and connectivity, and splits
    /// self-loops at their midpoint (the generated vertex and half-edge ids
    /// derive from the loop id and are kept collision-free).
    pub fn build(vertices: Vec<String>, edges: Vec<EdgeSpec>, tol: Tolerances) -> Result<Self> {
        if vertices.is_empty() || edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut vertex_ids = Vec::with_capacity(vertices.len());
        let mut vertex_index = HashMap::new();
        for id in vertices {
            if vertex_index.insert(id.clone(), vertex_ids.len()).is_some() {
                return Err(Error::DuplicateVertexId { vertex: id });
            }
            vertex_ids.push(id);
        }

        let mut out_edges: Vec<Edge> = Vec::with_capacity(edges.len());
        let mut edge_index = HashMap::new();
        let mut loop_halves = HashMap::new();
        // Reserve all user ids first so generated ids can avoid them.
        let mut taken_edge_ids: std::collections::HashSet<String> =
            edges.iter().map(|e| e.id.clone()).collect();

        let push_edge = |out_edges: &mut Vec<Edge>,
                             edge_index: &mut HashMap<String, usize>,
                             id: String,
                             u: usize,
                             v: usize,
                             length: f64|
         -> Result<usize> {
            if edge_index.insert(id.clone(), out_edges.len()).is_some() {
                return Err(Error::DuplicateEdgeId { edge: id });
            }
            out_edges.push(Edge { id, u, v, length });
            Ok(out_edges.len() - 1)
        };

        for spec in edges {
            if !(spec.length.is_finite() && spec.length > 0.0) {
                return Err(Error::NonPositiveEdgeLength { edge: spec.id, length: spec.length });
            }
            let u = *vertex_index
                .get(&spec.u)
                .ok_or_else(|| Error::UnknownVertex { vertex: spec.u.clone() })?;
            let v = *vertex_index
                .get(&spec.v)
                .ok_or_else(|| Error::UnknownVertex { vertex: spec.v.clone() })?;
            if u != v {
                push_edge(&mut out_edges, &mut edge_index, spec.id, u, v, spec.length)?;
                continue;
            }
            // Self-loop: insert a midpoint vertex and two half edges.
            let mid_id = fresh_id(&format!("{}.mid", spec.id), |s| !vertex_index.contains_key(s));
            let mid = vertex_ids.len();
            vertex_index.insert(mid_id.clone(), mid);
            vertex_ids.push(mid_id);
            let a_id = fresh_id(&format!("{}.a", spec.id), |s| !taken_edge_ids.contains(s));
            taken_edge_ids.insert(a_id.clone());
            let b_id = fresh_id(&format!("{}.b", spec.id), |s| !taken_edge_ids.contains(s));
            taken_edge_ids.insert(b_id.clone());
            let half = spec.length / 2.0;
            let ia = push_edge(&mut out_edges, &mut edge_index, a_id, u, mid, half)?;
            let ib = push_edge(&mut out_edges, &mut edge_index, b_id, mid, v, half)?;
            loop_halves.insert(spec.id, (ia, ib));
        }

        let mut incident = vec![Vec::new(); vertex_ids.len()];
        for (i, e) in out_edges.iter().enumerate() {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }

        // Connectivity by BFS over vertices.
        let mut seen = vec![false; vertex_ids.len()];
        let mut queue = vec![0usize];
        seen[0] = true;
        while let Some(v) = queue.pop() {
            for &ei in &incident[v] {
                let e = &out_edges[ei];
                for w in [e.u, e.v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push(w);
                    }
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::DisconnectedGraph);
        }

        let total_length: f64 = out_edges.iter().map(|e| e.length).sum();

        let mut h = DefaultHasher::new();
        vertex_ids.hash(&mut h);
        for e in &out_edges {
            e.id.hash(&mut h);
            e.u.hash(&mut h);
            e.v.hash(&mut h);
            e.length.to_bits().hash(&mut h);
        }
        tol.len_rel.to_bits().hash(&mut h);
        tol.val_rel.to_bits().hash(&mut h);
        let fp = h.finish();

        Ok(MetricGraph {
            vertex_ids,
            vertex_index,
            edges: out_edges,
            edge_index,
            incident,
            loop_halves,
            total_length,
            tol,
            fp,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// Absolute length tolerance: offsets closer than this coincide.
    pub fn len_tol(&self) -> f64 {
        self.tol.len_rel * self.total_length
    }

    /// Absolute value tolerance at a given magnitude scale.
    pub fn val_tol(&self, scale: f64) -> f64 {
        self.tol.val_rel * scale.abs().max(1.0)
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &str> {
        self.vertex_ids.iter().map(|s| s.as_str())
    }

    /// Edges as `(id, u id, v id, length)`, in construction order (split
    /// loop halves appear where the loop was declared).
    pub fn edge_specs(&self) -> impl Iterator<Item = (&str, &str, &str, f64)> {
        self.edges.iter().map(move |e| {
            (e.id.as_str(), self.vertex_ids[e.u].as_str(), self.vertex_ids[e.v].as_str(), e.length)
        })
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.fp
    }

    pub(crate) fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    pub(crate) fn incident_edges(&self, vertex: usize) -> &[usize] {
        &self.incident[vertex]
    }

    pub(crate) fn vertex_id(&self, idx: usize) -> &str {
        &self.vertex_ids[idx]
    }

    pub fn edge_length(&self, edge_id: &str) -> Result<f64> {
        match self.edge_index.get(edge_id) {
            Some(&i) => Ok(self.edges[i].length),
            None => match self.loop_halves.get(edge_id) {
                Some(&(a, b)) => Ok(self.edges[a].length + self.edges[b].length),
                None => Err(Error::UnknownEdge { edge: edge_id.into() }),
            },
        }
    }

    /// The point sitting at a vertex.
    pub fn vertex_point(&self, id: &str) -> Result<PointOnGraph> {
        let &v = self
            .vertex_index
            .get(id)
            .ok_or_else(|| Error::UnknownVertex { vertex: id.into() })?;
        Ok(PointOnGraph { fp: self.fp, loc: Loc::Vertex(v) })
    }

    /// The point at `offset` from the u-endpoint of `edge_id`.
    ///
    /// Accepts original self-loop ids (offsets beyond the midpoint land on the
    /// second half). Offsets within the length tolerance of an endpoint snap
    /// to that vertex, which makes the encoding canonical.
    pub fn locate(&self, edge_id: &str, offset: f64) -> Result<PointOnGraph> {
        let (edge, offset) = match self.edge_index.get(edge_id) {
            Some(&i) => (i, offset),
            None => match self.loop_halves.get(edge_id) {
                Some(&(a, b)) => {
                    let half = self.edges[a].length;
                    if offset <= half {
                        (a, offset)
                    } else {
                        (b, offset - half)
                    }
                }
                None => return Err(Error::UnknownEdge { edge: edge_id.into() }),
            },
        };
        self.point_at(edge, offset)
    }

    pub(crate) fn point_at(&self, edge: usize, offset: f64) -> Result<PointOnGraph> {
        let e = &self.edges[edge];
        let tol = self.len_tol();
        if !offset.is_finite() || offset < -tol || offset > e.length + tol {
            return Err(Error::PointNotOnGraph);
        }
        let loc = if offset <= tol {
            Loc::Vertex(e.u)
        } else if offset >= e.length - tol {
            Loc::Vertex(e.v)
        } else {
            Loc::Interior { edge, offset }
        };
        Ok(PointOnGraph { fp: self.fp, loc })
    }

    /// Human-readable form: the vertex id, or `edge:offset`.
    pub fn describe_point(&self, p: &PointOnGraph) -> String {
        match p.loc {
            Loc::Vertex(v) => self.vertex_ids[v].clone(),
            Loc::Interior { edge, offset } => format!("{}:{}", self.edges[edge].id, offset),
        }
    }

    pub(crate) fn check_point(&self, p: &PointOnGraph) -> Result<()> {
        if p.fp != self.fp {
            return Err(Error::PointNotOnGraph);
        }
        Ok(())
    }

    /// Anchor vertices of a point with the cost of reaching them: a vertex
    /// anchors to itself at cost 0, an interior point to both endpoints of
    /// its edge.
    fn anchors(&self, p: &PointOnGraph) -> Vec<(usize, f64)> {
        match p.loc {
            Loc::Vertex(v) => vec![(v, 0.0)],
            Loc::Interior { edge, offset } => {
                let e = &self.edges[edge];
                vec![(e.u, offset), (e.v, e.length - offset)]
            }
        }
    }

    /// Shortest-path (geodesic) distance between two points.
    pub fn dist(&self, p: &PointOnGraph, q: &PointOnGraph) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p.loc == q.loc {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        // Direct hop when both points share an edge (relevant with parallel
        // edges, where going through vertices may or may not be shorter).
        if let (Loc::Interior { edge: e1, offset: x }, Loc::Interior { edge: e2, offset: y }) =
            (p.loc, q.loc)
        {
            if e1 == e2 {
                best = (x - y).abs();
            }
        }
        let sources = self.anchors(p);
        let dv = self.multi_source_distances(&sources);
        for (qv, qc) in self.anchors(q) {
            best = best.min(dv[qv] + qc);
        }
        Ok(best)
    }

    /// Dijkstra over the vertex skeleton from a set of seeded costs.
    fn multi_source_distances(&self, sources: &[(usize, f64)]) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Entry(f64, usize);
        impl Eq for Entry {}
        impl PartialOrd for Entry {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Entry {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0) // min-heap
            }
        }

        let mut dist = vec![f64::INFINITY; self.vertex_ids.len()];
        let mut heap = BinaryHeap::new();
        for &(v, c) in sources {
            if c < dist[v] {
                dist[v] = c;
                heap.push(Entry(c, v));
            }
        }
        while let Some(Entry(c, v)) = heap.pop() {
            if c > dist[v] {
                continue;
            }
            for &ei in &self.incident[v] {
                let e = &self.edges[ei];
                let w = if e.u == v { e.v } else { e.u };
                let nc = c + e.length;
                if nc < dist[w] {
                    dist[w] = nc;
                    heap.push(Entry(nc, w));
                }
            }
        }
        dist
    }
}

fn fresh_id(base: &str, is_free: impl Fn(&str) -> bool) -> String {
    if is_free(base) {
        return base.to_string();
    }
    let mut candidate = base.to_string();
    loop {
        candidate.push('_');
        if is_free(&candidate) {
            return candidate;
        }
    }
}
