//! Attributed, simple, undirected graphs.
//!
//! Vertices are dense indices `0..n`. Every vertex and edge carries a discrete
//! label (an opaque token) and a vector of real attributes. Within one graph all
//! vertex attribute vectors share a length, and likewise for edges.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("vertex index {index} out of range for graph with {count} vertices")]
    VertexOutOfRange { index: usize, count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {index} has {found} attributes, expected {expected}")]
    VertexArity {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("edge ({u}, {v}) has {found} attributes, expected {expected}")]
    EdgeArity {
        u: usize,
        v: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {0} appears twice in subset")]
    RepeatedVertex(usize),
}

/// A simple undirected graph with labeled, attributed vertices and edges.
///
/// Immutable once built; construct through [`GraphBuilder`].
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    id: String,
    class: Option<String>,
    vertex_labels: Vec<String>,
    vertex_attrs: Vec<Vec<f64>>,
    /// Endpoints with `u < v`, in insertion order.
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<String>,
    edge_attrs: Vec<Vec<f64>>,
    /// Row-major `n * n`, holding the edge index of each adjacent pair.
    adjacency: Vec<Option<u32>>,
}

impl AttributedGraph {
    /// The graph with no vertices.
    pub fn empty(id: impl Into<String>) -> Self {
        GraphBuilder::new(id).build().expect("empty graph is valid")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn class(&self) -> Option<&str> {
        self.class.as_deref()
    }

    pub fn with_class(mut self, class: Option<String>) -> Self {
        self.class = class;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertex_labels[v]
    }

    pub fn vertex_attrs(&self, v: usize) -> &[f64] {
        &self.vertex_attrs[v]
    }

    /// Edges as `(u, v)` with `u < v`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_label_at(&self, e: usize) -> &str {
        &self.edge_labels[e]
    }

    pub fn edge_attrs_at(&self, e: usize) -> &[f64] {
        &self.edge_attrs[e]
    }

    /// Index of the edge joining `u` and `v`, if any. Panics on out-of-range input.
    #[inline]
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let n = self.vertex_count();
        assert!(u < n && v < n, "vertex index out of range");
        self.adjacency[u * n + v].map(|e| e as usize)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    /// Length shared by all vertex attribute vectors (0 for the empty graph).
    pub fn vertex_arity(&self) -> usize {
        self.vertex_attrs.first().map_or(0, Vec::len)
    }

    pub fn edge_arity(&self) -> usize {
        self.edge_attrs.first().map_or(0, Vec::len)
    }

    /// Vertices adjacent to `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        self.check_vertex(v)?;
        Ok((0..self.vertex_count()).filter(|&u| self.has_edge(v, u)).collect())
    }

    /// The subgraph induced by `vertices`, whose vertex `i` is `vertices[i]` of
    /// this graph. Labels and attributes are copied.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<AttributedGraph, GraphError> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        for &v in vertices {
            self.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::RepeatedVertex(v));
            }
        }
        let mut b = GraphBuilder::new(self.id.clone());
        b.class = self.class.clone();
        for &v in vertices {
            b.add_vertex(self.vertex_labels[v].clone(), self.vertex_attrs[v].clone());
        }
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if let Some(e) = self.edge_index(vertices[i], vertices[j]) {
                    b.add_edge(i, j, self.edge_labels[e].clone(), self.edge_attrs[e].clone());
                }
            }
        }
        b.build()
    }

    /// True iff every pair of vertices is joined by a path. The empty graph is
    /// considered connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for (w, seen_w) in seen.iter_mut().enumerate() {
                if !*seen_w && self.has_edge(u, w) {
                    *seen_w = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == n
    }

    /// True iff every pair of distinct vertices is adjacent.
    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.edge_count() == n * n.saturating_sub(1) / 2
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                index: v,
                count: self.vertex_count(),
            })
        }
    }
}

/// Incremental construction of an [`AttributedGraph`]. Invariants are checked
/// in [`GraphBuilder::build`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    id: String,
    class: Option<String>,
    vertex_labels: Vec<String>,
    vertex_attrs: Vec<Vec<f64>>,
    edges: Vec<(usize, usize, String, Vec<f64>)>,
}

impl GraphBuilder {
    pub fn new(id: impl Into<String>) -> Self {
        GraphBuilder {
            id: id.into(),
            ..Default::default()
        }
    }

    pub fn class(mut self, class: impl Into<String>) -> Self {
        self.class = Some(class.into());
        self
    }

    pub fn set_class(&mut self, class: Option<String>) {
        self.class = class;
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    /// Appends a vertex and returns its index.
    pub fn add_vertex(&mut self, label: impl Into<String>, attrs: Vec<f64>) -> usize {
        self.vertex_labels.push(label.into());
        self.vertex_attrs.push(attrs);
        self.vertex_labels.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, label: impl Into<String>, attrs: Vec<f64>) {
        self.edges.push((u, v, label.into(), attrs));
    }

    pub fn build(self) -> Result<AttributedGraph, GraphError> {
        let n = self.vertex_labels.len();
        if let Some(expected) = self.vertex_attrs.first().map(Vec::len) {
            for (index, a) in self.vertex_attrs.iter().enumerate() {
                if a.len() != expected {
                    return Err(GraphError::VertexArity {
                        index,
                        expected,
                        found: a.len(),
                    });
                }
            }
        }
        let mut adjacency = vec![None; n * n];
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut edge_labels = Vec::with_capacity(self.edges.len());
        let mut edge_attrs: Vec<Vec<f64>> = Vec::with_capacity(self.edges.len());
        for (u, v, label, attrs) in self.edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { index: x, count: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let (a, b) = (u.min(v), u.max(v));
            if adjacency[a * n + b].is_some() {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            if let Some(first) = edge_attrs.first() {
                if first.len() != attrs.len() {
                    return Err(GraphError::EdgeArity {
                        u,
                        v,
                        expected: first.len(),
                        found: attrs.len(),
                    });
                }
            }
            let e = Some(edges.len() as u32);
            adjacency[a * n + b] = e;
            adjacency[b * n + a] = e;
            edges.push((a, b));
            edge_labels.push(label);
            edge_attrs.push(attrs);
        }
        Ok(AttributedGraph {
            id: self.id,
            class: self.class,
            vertex_labels: self.vertex_labels,
            vertex_attrs: self.vertex_attrs,
            edges,
            edge_labels,
            edge_attrs,
            adjacency,
        })
    }
}

/// Builds a graph with the given vertex labels and label-`"-"` edges, no attributes.
pub fn labeled_graph(id: &str, labels: &[&str], edges: &[(usize, usize)]) -> Result<AttributedGraph, GraphError> {
    let mut b = GraphBuilder::new(id);
    for l in labels {
        b.add_vertex(*l, Vec::new());
    }
    for &(u, v) in edges {
        b.add_edge(u, v, "-", Vec::new());
    }
    b.build()
}
