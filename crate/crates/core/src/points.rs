//! Labeled 3D point sets and their complete distance graphs.

use thiserror::Error;

use crate::graph::{AttributedGraph, GraphBuilder};

/// Label carried by every edge of a distance graph. The distance itself is the
/// edge's single attribute.
pub const DISTANCE_EDGE_LABEL: &str = "dist";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("point {index} has a non-finite coordinate")]
pub struct NonFinitePoint {
    pub index: usize,
}

/// A feature at a position in space.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub label: String,
    pub position: [f64; 3],
}

impl Point {
    pub fn new(label: impl Into<String>, position: [f64; 3]) -> Self {
        Point {
            label: label.into(),
            position,
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        let [dx, dy, dz] = [0, 1, 2].map(|i| self.position[i] - other.position[i]);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

/// The complete graph on `points`: vertex `i` carries `points[i].label`, and
/// the edge `{i, j}` carries the Euclidean distance between the two points as
/// its only attribute.
pub fn build_distance_graph(id: &str, points: &[Point]) -> Result<AttributedGraph, NonFinitePoint> {
    if let Some(index) = points.iter().position(|p| p.position.iter().any(|x| !x.is_finite())) {
        return Err(NonFinitePoint { index });
    }
    let mut b = GraphBuilder::new(id);
    for p in points {
        b.add_vertex(p.label.clone(), Vec::new());
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            b.add_edge(i, j, DISTANCE_EDGE_LABEL, vec![points[i].distance(&points[j])]);
        }
    }
    Ok(b.build().expect("complete graph on distinct indices is valid"))
}
