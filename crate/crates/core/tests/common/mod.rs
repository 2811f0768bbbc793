#![allow(dead_code)]

use rand::Rng;
use smkernel::graph::{AttributedGraph, GraphBuilder};
use smkernel::points::Point;

pub const VERTEX_LABELS: [&str; 3] = ["a", "b", "c"];
pub const EDGE_LABELS: [&str; 2] = ["-", "="];

#[derive(Clone, Copy)]
pub struct GraphShape {
    pub max_n: usize,
    pub density: f64,
    pub labels: usize,
    /// Draw one vertex attribute uniformly from `[0, vertex_attr]`.
    pub vertex_attr: Option<f64>,
    /// Draw one edge attribute uniformly from `[0, edge_attr]`.
    pub edge_attr: Option<f64>,
}

impl GraphShape {
    pub fn labeled(max_n: usize) -> Self {
        GraphShape {
            max_n,
            density: 0.5,
            labels: 3,
            vertex_attr: None,
            edge_attr: None,
        }
    }

    pub fn attributed(max_n: usize) -> Self {
        GraphShape {
            vertex_attr: Some(4.0),
            edge_attr: Some(1.0),
            ..Self::labeled(max_n)
        }
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, id: &str, shape: GraphShape) -> AttributedGraph {
    let n = rng.gen_range(1..=shape.max_n);
    let mut b = GraphBuilder::new(id);
    for _ in 0..n {
        let label = VERTEX_LABELS[rng.gen_range(0..shape.labels)];
        let attrs = shape
            .vertex_attr
            .map(|x| vec![rng.gen_range(0.0..=x)])
            .unwrap_or_default();
        b.add_vertex(label, attrs);
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(shape.density) {
                let label = EDGE_LABELS[rng.gen_range(0..EDGE_LABELS.len())];
                let attrs = shape
                    .edge_attr
                    .map(|x| vec![rng.gen_range(0.0..=x)])
                    .unwrap_or_default();
                b.add_edge(u, v, label, attrs);
            }
        }
    }
    b.build().expect("random graph is valid")
}

pub fn random_points<R: Rng>(rng: &mut R, min: usize, max: usize, side: f64) -> Vec<Point> {
    let n = rng.gen_range(min..=max);
    (0..n)
        .map(|_| {
            let label = VERTEX_LABELS[rng.gen_range(0..2)];
            Point::new(
                label,
                [
                    rng.gen_range(0.0..side),
                    rng.gen_range(0.0..side),
                    rng.gen_range(0.0..side),
                ],
            )
        })
        .collect()
}

/// `|a - b| <= tol * max(|a|, |b|)`; exact zeros compare equal.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}
