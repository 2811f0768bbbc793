//! Line-oriented dataset files.
//!
//! ```text
//! # comment
//! graph <id> [<class>]
//! v <index> <label> [<real>...]
//! e <u> <v> <label> [<real>...]
//! end
//! graph <id> [<class>]
//! point <label> <x> <y> <z>
//! end
//! ```
//!
//! Vertex indices must be consecutive from 0, and an edge may only reference
//! vertices declared above it. A block holds either `v`/`e`
//! lines or `point` lines; a point block becomes the complete distance graph
//! of its points.

use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;

use crate::graph::{AttributedGraph, GraphBuilder, GraphError};
use crate::points::{build_distance_graph, Point};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, DatasetError> {
    Err(DatasetError::Parse {
        line,
        message: message.into(),
    })
}

/// An ordered collection of graphs with unique ids.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    graphs: Vec<AttributedGraph>,
    /// The source points of graphs given as point sets.
    point_sets: Vec<Option<Vec<Point>>>,
}

impl Dataset {
    /// `None` if two graphs share an id.
    pub fn new(graphs: Vec<AttributedGraph>) -> Option<Self> {
        let n = graphs.len();
        Self::with_points(graphs, vec![None; n])
    }

    fn with_points(graphs: Vec<AttributedGraph>, point_sets: Vec<Option<Vec<Point>>>) -> Option<Self> {
        let mut seen = HashSet::new();
        if graphs.iter().all(|g| seen.insert(g.id().to_string())) {
            Some(Dataset { graphs, point_sets })
        } else {
            None
        }
    }

    /// Builds a dataset of distance graphs, one per point set.
    pub fn from_point_sets(sets: Vec<(String, Vec<Point>)>) -> Result<Self, String> {
        let mut graphs = Vec::with_capacity(sets.len());
        let mut points = Vec::with_capacity(sets.len());
        for (id, pts) in sets {
            graphs.push(build_distance_graph(&id, &pts).map_err(|e| format!("{id}: {e}"))?);
            points.push(Some(pts));
        }
        Self::with_points(graphs, points).ok_or_else(|| "duplicate graph id".to_string())
    }

    pub fn graphs(&self) -> &[AttributedGraph] {
        &self.graphs
    }

    pub fn ids(&self) -> Vec<String> {
        self.graphs.iter().map(|g| g.id().to_string()).collect()
    }

    /// Source points of graph `i`, when it was given as a point set.
    pub fn points(&self, i: usize) -> Option<&[Point]> {
        self.point_sets[i].as_deref()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dataset(&text)
}

enum BlockKind {
    Undecided,
    Graph,
    Points,
}

struct Block {
    id: String,
    class: Option<String>,
    opened_at: usize,
    kind: BlockKind,
    builder: GraphBuilder,
    edges: HashSet<(usize, usize)>,
    vertex_arity: Option<usize>,
    edge_arity: Option<usize>,
    points: Vec<Point>,
}

pub fn parse_dataset(text: &str) -> Result<Dataset, DatasetError> {
    let mut graphs = Vec::new();
    let mut point_sets = Vec::new();
    let mut ids = HashSet::new();
    let mut block: Option<Block> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().expect("nonempty line has a token");
        let rest: Vec<&str> = tokens.collect();
        match directive {
            "graph" => {
                if let Some(open) = &block {
                    return parse_err(
                        line,
                        format!("graph `{}` opened at line {} is not closed", open.id, open.opened_at),
                    );
                }
                let (id, class) = match rest.as_slice() {
                    [id] => (*id, None),
                    [id, class] => (*id, Some(class.to_string())),
                    _ => return parse_err(line, "expected `graph <id> [<class>]`"),
                };
                if !ids.insert(id.to_string()) {
                    return parse_err(line, format!("duplicate graph id `{id}`"));
                }
                let mut builder = GraphBuilder::new(id);
                builder.set_class(class.clone());
                block = Some(Block {
                    id: id.to_string(),
                    class,
                    opened_at: line,
                    kind: BlockKind::Undecided,
                    builder,
                    edges: HashSet::new(),
                    vertex_arity: None,
                    edge_arity: None,
                    points: Vec::new(),
                });
            }
            "v" => {
                let b = open_block(&mut block, line, BlockKind::Graph)?;
                let [index, label, attrs @ ..] = rest.as_slice() else {
                    return parse_err(line, "expected `v <index> <label> [<real>...]`");
                };
                let index = parse_index(index, line)?;
                if index != b.builder.vertex_count() {
                    return parse_err(
                        line,
                        format!(
                            "vertex index {index} out of order, expected {}",
                            b.builder.vertex_count()
                        ),
                    );
                }
                let attrs = parse_reals(attrs, line)?;
                match b.vertex_arity {
                    Some(k) if k != attrs.len() => {
                        return parse_err(line, format!("vertex has {} attributes, expected {k}", attrs.len()))
                    }
                    _ => b.vertex_arity = Some(attrs.len()),
                }
                b.builder.add_vertex(*label, attrs);
            }
            "e" => {
                let b = open_block(&mut block, line, BlockKind::Graph)?;
                let [u, v, label, attrs @ ..] = rest.as_slice() else {
                    return parse_err(line, "expected `e <u> <v> <label> [<real>...]`");
                };
                let (u, v) = (parse_index(u, line)?, parse_index(v, line)?);
                let attrs = parse_reals(attrs, line)?;
                // Checked here rather than at `end` so the error names this line.
                let n = b.builder.vertex_count();
                if u >= n || v >= n {
                    return parse_err(
                        line,
                        format!("edge ({u}, {v}) references an undeclared vertex (have {n})"),
                    );
                }
                if u == v {
                    return parse_err(line, format!("self-loop on vertex {u}"));
                }
                if !b.edges.insert((u.min(v), u.max(v))) {
                    return parse_err(line, format!("duplicate edge ({u}, {v})"));
                }
                match b.edge_arity {
                    Some(k) if k != attrs.len() => {
                        return parse_err(line, format!("edge has {} attributes, expected {k}", attrs.len()))
                    }
                    _ => b.edge_arity = Some(attrs.len()),
                }
                b.builder.add_edge(u, v, *label, attrs);
            }
            "point" => {
                let b = open_block(&mut block, line, BlockKind::Points)?;
                let [label, x, y, z] = rest.as_slice() else {
                    return parse_err(line, "expected `point <label> <x> <y> <z>`");
                };
                let coords = parse_reals(&[x, y, z], line)?;
                b.points.push(Point::new(*label, [coords[0], coords[1], coords[2]]));
            }
            "end" => {
                if !rest.is_empty() {
                    return parse_err(line, "unexpected tokens after `end`");
                }
                let Some(b) = block.take() else {
                    return parse_err(line, "`end` without an open graph");
                };
                match b.kind {
                    BlockKind::Points => {
                        let g = build_distance_graph(&b.id, &b.points).map_err(|e| DatasetError::Parse {
                            line,
                            message: e.to_string(),
                        })?;
                        graphs.push(g.with_class(b.class));
                        point_sets.push(Some(b.points));
                    }
                    BlockKind::Graph | BlockKind::Undecided => {
                        let g = b.builder.build().map_err(|e: GraphError| DatasetError::Parse {
                            line,
                            message: e.to_string(),
                        })?;
                        graphs.push(g);
                        point_sets.push(None);
                    }
                }
            }
            other => return parse_err(line, format!("unknown directive `{other}`")),
        }
    }
    if let Some(b) = block {
        return parse_err(b.opened_at, format!("graph `{}` is never closed", b.id));
    }
    Ok(Dataset::with_points(graphs, point_sets).expect("ids checked during parsing"))
}

fn open_block(block: &mut Option<Block>, line: usize, kind: BlockKind) -> Result<&mut Block, DatasetError> {
    let Some(b) = block.as_mut() else {
        return parse_err(line, "line outside a graph block");
    };
    match (&b.kind, &kind) {
        (BlockKind::Undecided, _) => b.kind = kind,
        (BlockKind::Graph, BlockKind::Graph) | (BlockKind::Points, BlockKind::Points) => {}
        _ => return parse_err(line, "cannot mix `point` lines with `v`/`e` lines"),
    }
    Ok(b)
}

fn parse_index(token: &str, line: usize) -> Result<usize, DatasetError> {
    token
        .parse()
        .or_else(|_| parse_err(line, format!("invalid index `{token}`")))
}

fn parse_reals(tokens: &[&str], line: usize) -> Result<Vec<f64>, DatasetError> {
    tokens
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => parse_err(line, format!("invalid real `{t}`")),
        })
        .collect()
}
