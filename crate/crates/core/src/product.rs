//! Weighted (modular) product graphs.
//!
//! Product vertices are vertex pairs `(v1, v2)` with positive vertex-kernel
//! value. Two product vertices `(u1, u2)`, `(v1, v2)` are adjacent iff
//! `u1 != v1`, `u2 != v2` and the edge kernel on `((u1, v1), (u2, v2))` is
//! positive. An edge is a c-edge when both underlying pairs are edges and a
//! d-edge when neither is.

use std::io::{self, Write};

use crate::graph::{AttributedGraph, GraphError};
use crate::kernels::{EdgeKernel, VertexKernel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// Common adjacency.
    C,
    /// Common non-adjacency.
    D,
}

impl EdgeClass {
    fn as_str(self) -> &'static str {
        match self {
            EdgeClass::C => "C",
            EdgeClass::D => "D",
        }
    }
}

#[derive(Debug, Clone)]
pub struct WeightedProductGraph<'g> {
    g1: &'g AttributedGraph,
    g2: &'g AttributedGraph,
    pairs: Vec<(usize, usize)>,
    vertex_weights: Vec<f64>,
    /// Dense `n * n` edge weights, 0 where there is no edge.
    edge_weights: Vec<f64>,
    /// Parallel to `edge_weights`; meaningful only where the weight is positive.
    c_edge: Vec<bool>,
    /// Sorted adjacency lists.
    neighbors: Vec<Vec<u32>>,
}

/// Builds the weighted product graph of `g1` and `g2`.
///
/// `ke` is evaluated once per unordered pair of product vertices, oriented as
/// `((u1, v1), (u2, v2))` for product vertices `p < q` with `p = (u1, u2)` and
/// `q = (v1, v2)`.
///
/// Debug builds assert that `ke` vanishes on mixed edge/non-edge pairs.
pub fn build_wpg<'g, V, E>(g1: &'g AttributedGraph, g2: &'g AttributedGraph, kv: &V, ke: &E) -> WeightedProductGraph<'g>
where
    V: VertexKernel + ?Sized,
    E: EdgeKernel + ?Sized,
{
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    let mut pairs = Vec::new();
    let mut vertex_weights = Vec::new();
    for v1 in 0..n1 {
        for v2 in 0..n2 {
            let w = kv.eval(g1, v1, g2, v2);
            debug_assert!(
                w <= 0.0 || kv.eval(g2, v2, g1, v1) == w,
                "vertex kernel {} is not symmetric",
                kv.name()
            );
            if w > 0.0 {
                pairs.push((v1, v2));
                vertex_weights.push(w);
            }
        }
    }

    let n = pairs.len();
    let mut edge_weights = vec![0.0; n * n];
    let mut c_edge = vec![false; n * n];
    let mut neighbors = vec![Vec::new(); n];
    for p in 0..n {
        let (u1, u2) = pairs[p];
        for q in p + 1..n {
            let (v1, v2) = pairs[q];
            if u1 == v1 || u2 == v2 {
                continue;
            }
            let w = ke.eval(g1, (u1, v1), g2, (u2, v2));
            let in1 = g1.has_edge(u1, v1);
            let in2 = g2.has_edge(u2, v2);
            debug_assert!(
                in1 == in2 || w <= 0.0,
                "edge kernel {} is positive on a mixed edge/non-edge pair",
                ke.name()
            );
            if w > 0.0 && in1 == in2 {
                edge_weights[p * n + q] = w;
                edge_weights[q * n + p] = w;
                c_edge[p * n + q] = in1;
                c_edge[q * n + p] = in1;
                neighbors[p].push(q as u32);
                neighbors[q].push(p as u32);
            }
        }
    }
    for list in &mut neighbors {
        list.sort_unstable();
    }

    WeightedProductGraph {
        g1,
        g2,
        pairs,
        vertex_weights,
        edge_weights,
        c_edge,
        neighbors,
    }
}

impl<'g> WeightedProductGraph<'g> {
    pub fn vertex_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The two factor graphs.
    pub fn graphs(&self) -> (&'g AttributedGraph, &'g AttributedGraph) {
        (self.g1, self.g2)
    }

    /// The vertex pair underlying product vertex `p`.
    pub fn pair(&self, p: usize) -> (usize, usize) {
        self.pairs[p]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn vertex_weight(&self, p: usize) -> f64 {
        self.vertex_weights[p]
    }

    /// Weight of the edge `{p, q}`, 0 if absent.
    #[inline]
    pub fn edge_weight(&self, p: usize, q: usize) -> f64 {
        self.edge_weights[p * self.pairs.len() + q]
    }

    /// Class of the edge `{p, q}`, `None` if absent.
    pub fn edge_class(&self, p: usize, q: usize) -> Option<EdgeClass> {
        let i = p * self.pairs.len() + q;
        if self.edge_weights[i] > 0.0 {
            Some(if self.c_edge[i] { EdgeClass::C } else { EdgeClass::D })
        } else {
            None
        }
    }

    #[inline]
    pub(crate) fn is_c_edge(&self, p: usize, q: usize) -> bool {
        self.c_edge[p * self.pairs.len() + q]
    }

    pub(crate) fn neighbor_list(&self, p: usize) -> &[u32] {
        &self.neighbors[p]
    }

    pub fn neighbors(&self, p: usize) -> Result<Vec<usize>, GraphError> {
        self.check(p)?;
        Ok(self.neighbors[p].iter().map(|&q| q as usize).collect())
    }

    /// Neighbors of `p` joined to it by a c-edge.
    pub fn c_neighbors(&self, p: usize) -> Result<Vec<usize>, GraphError> {
        self.check(p)?;
        Ok(self.neighbors[p]
            .iter()
            .map(|&q| q as usize)
            .filter(|&q| self.is_c_edge(p, q))
            .collect())
    }

    /// Edges as `(p, q, weight, class)` with `p < q`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64, EdgeClass)> + '_ {
        (0..self.pairs.len()).flat_map(move |p| {
            self.neighbors[p]
                .iter()
                .map(|&q| q as usize)
                .filter(move |&q| q > p)
                .map(move |q| {
                    let class = if self.is_c_edge(p, q) {
                        EdgeClass::C
                    } else {
                        EdgeClass::D
                    };
                    (p, q, self.edge_weight(p, q), class)
                })
        })
    }

    /// Writes one line `u v weight class` per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (p, q, w, class) in self.edges() {
            writeln!(out, "{p} {q} {w:.16e} {}", class.as_str())?;
        }
        Ok(())
    }

    fn check(&self, p: usize) -> Result<(), GraphError> {
        if p < self.pairs.len() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                index: p,
                count: self.pairs.len(),
            })
        }
    }
}
