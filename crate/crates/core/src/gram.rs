//! Gram matrices over datasets.
//!
//! Output format: a header line `# ids: id1,id2,...` followed by one
//! comma-separated row per graph, values written with 17 significant digits.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::Dataset;
use crate::graph::AttributedGraph;
use crate::kernels::{AttrKernel, EdgeAdapter, KernelError};
use crate::matching::{
    csi_kernel, pharmacophore_kernel, sm_kernel, subgraph_kernel, KernelResult, MatchingError, MatchingOptions,
    SizeWeights,
};
use crate::oracle::{self, OracleError};

#[derive(Debug, Error)]
pub enum GramError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("graph `{graph}`: {reason}")]
    Incompatible { graph: String, reason: String },
    #[error("pair ({a}, {b}): {source}")]
    Pair {
        a: String,
        b: String,
        #[source]
        source: PairError,
    },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("matrix is not square: {0}")]
    NotSquare(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum PairError {
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Other(String),
}

/// Which member of the subgraph matching kernel family to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// General subgraph matching kernel.
    Sm,
    /// Subgraph matching kernel restricted to connected matchings.
    Csm,
    /// Common subgraph isomorphism kernel (Dirac kernels).
    Csi,
    /// Subgraph kernel via automorphism-corrected CSI weights.
    Subgraph,
    /// Pharmacophore kernel on complete distance graphs.
    Pharmacophore,
}

impl FromStr for KernelKind {
    type Err = GramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "sm" => KernelKind::Sm,
            "csm" => KernelKind::Csm,
            "csi" => KernelKind::Csi,
            "subgraph" => KernelKind::Subgraph,
            "pharmacophore" => KernelKind::Pharmacophore,
            _ => return Err(GramError::Config(format!("unknown kernel `{s}`"))),
        })
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelKind::Sm => "sm",
            KernelKind::Csm => "csm",
            KernelKind::Csi => "csi",
            KernelKind::Subgraph => "subgraph",
            KernelKind::Pharmacophore => "pharmacophore",
        })
    }
}

/// `uniform` (λ ≡ 1 up to the maximum size) or an explicit list `w1,...,wK`.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Uniform,
    Explicit(Vec<f64>),
}

impl FromStr for Weights {
    type Err = GramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(Weights::Uniform);
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|w| w.is_finite() && *w >= 0.0)
                    .ok_or_else(|| GramError::Config(format!("invalid weight `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Weights::Explicit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    pub kind: KernelKind,
    pub max_size: usize,
    pub vertex_kernel: AttrKernel,
    /// Compares edge labels/attributes; lifted to vertex pairs with
    /// [`EdgeAdapter`].
    pub edge_kernel: AttrKernel,
    /// Weight of common non-adjacency.
    pub d_weight: f64,
    pub weights: Weights,
}

impl KernelConfig {
    /// The CSI kernel with uniform weights.
    pub fn csi(max_size: usize) -> Self {
        KernelConfig {
            kind: KernelKind::Csi,
            max_size,
            vertex_kernel: AttrKernel::Dirac,
            edge_kernel: AttrKernel::Dirac,
            d_weight: 1.0,
            weights: Weights::Uniform,
        }
    }

    pub fn sm(max_size: usize, vertex_kernel: AttrKernel, edge_kernel: AttrKernel) -> Self {
        KernelConfig {
            kind: KernelKind::Sm,
            vertex_kernel,
            edge_kernel,
            ..Self::csi(max_size)
        }
    }

    pub fn csm(max_size: usize, vertex_kernel: AttrKernel, edge_kernel: AttrKernel) -> Self {
        KernelConfig {
            kind: KernelKind::Csm,
            ..Self::sm(max_size, vertex_kernel, edge_kernel)
        }
    }

    pub fn subgraph(max_size: usize) -> Self {
        KernelConfig {
            kind: KernelKind::Subgraph,
            ..Self::csi(max_size)
        }
    }

    /// Size and weights are fixed (3 and `λ(3) = 6`).
    pub fn pharmacophore(feature_kernel: AttrKernel, distance_kernel: AttrKernel) -> Self {
        KernelConfig {
            kind: KernelKind::Pharmacophore,
            max_size: 3,
            vertex_kernel: feature_kernel,
            edge_kernel: distance_kernel,
            d_weight: 1.0,
            weights: Weights::Explicit(SizeWeights::pharmacophore().as_slice().to_vec()),
        }
    }

    /// `λ` (or `λ_s` for the subgraph kernel) by size.
    pub fn size_weights(&self) -> Result<SizeWeights, GramError> {
        if self.kind == KernelKind::Pharmacophore {
            return Ok(SizeWeights::pharmacophore());
        }
        match &self.weights {
            Weights::Uniform => Ok(SizeWeights::uniform(self.max_size)),
            Weights::Explicit(w) if w.len() != self.max_size => Err(GramError::Config(format!(
                "{} weights given for maximum size {}",
                w.len(),
                self.max_size
            ))),
            Weights::Explicit(w) => SizeWeights::new(w.clone()).map_err(|e| GramError::Config(e.to_string())),
        }
    }

    pub fn validate(&self) -> Result<(), GramError> {
        if self.max_size == 0 {
            return Err(GramError::Config("maximum size must be at least 1".into()));
        }
        self.vertex_kernel.validate()?;
        self.edge_kernel.validate()?;
        if !(self.d_weight.is_finite() && self.d_weight >= 0.0) {
            return Err(GramError::Config(format!("invalid d-weight {}", self.d_weight)));
        }
        match self.kind {
            KernelKind::Csi | KernelKind::Subgraph => {
                if self.vertex_kernel != AttrKernel::Dirac || self.edge_kernel != AttrKernel::Dirac {
                    return Err(GramError::Config(format!(
                        "the {} kernel uses Dirac kernels only",
                        self.kind
                    )));
                }
                if self.d_weight != 1.0 {
                    return Err(GramError::Config(format!(
                        "the {} kernel fixes the d-weight to 1",
                        self.kind
                    )));
                }
            }
            KernelKind::Pharmacophore if self.max_size != 3 => {
                return Err(GramError::Config("the pharmacophore kernel has maximum size 3".into()));
            }
            _ => {}
        }
        if self.kind == KernelKind::Subgraph && self.max_size > oracle::MAX_ORACLE_VERTICES {
            return Err(GramError::Config(format!(
                "the subgraph kernel supports maximum size up to {}",
                oracle::MAX_ORACLE_VERTICES
            )));
        }
        self.size_weights().map(drop)
    }

    /// Whether the weight depends on matching size only, so that per-size
    /// matrices are meaningful.
    pub fn is_size_based(&self) -> bool {
        self.kind != KernelKind::Subgraph
    }

    /// Checks that `g` carries the attributes and shape the kernels need.
    pub fn check_graph(&self, g: &AttributedGraph) -> Result<(), GramError> {
        let incompatible = |reason: String| GramError::Incompatible {
            graph: g.id().to_string(),
            reason,
        };
        if let Some(i) = self.vertex_kernel.max_attr_index() {
            if g.vertex_count() > 0 && i >= g.vertex_arity() {
                return Err(incompatible(format!(
                    "vertex kernel reads attribute {i}, vertices have {}",
                    g.vertex_arity()
                )));
            }
        }
        if let Some(i) = self.edge_kernel.max_attr_index() {
            if g.edge_count() > 0 && i >= g.edge_arity() {
                return Err(incompatible(format!(
                    "edge kernel reads attribute {i}, edges have {}",
                    g.edge_arity()
                )));
            }
        }
        if self.kind == KernelKind::Pharmacophore && !g.is_complete() {
            return Err(incompatible(
                "pharmacophore kernel needs a complete distance graph".into(),
            ));
        }
        Ok(())
    }
}

/// The configured kernel on one pair of graphs.
pub fn pair_kernel(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    config: &KernelConfig,
) -> Result<KernelResult, MatchingError> {
    let weights = SizeWeights::new(match config.kind {
        KernelKind::Pharmacophore => SizeWeights::pharmacophore().as_slice().to_vec(),
        _ => match &config.weights {
            Weights::Uniform => vec![1.0; config.max_size],
            Weights::Explicit(w) => w.clone(),
        },
    })?;
    let edge = || EdgeAdapter::new(config.edge_kernel.clone()).with_d_weight(config.d_weight);
    match config.kind {
        KernelKind::Sm | KernelKind::Csm => {
            let opts = MatchingOptions::new(config.max_size, &weights)?.connected(config.kind == KernelKind::Csm);
            Ok(sm_kernel(g1, g2, &config.vertex_kernel, &edge()?, &opts))
        }
        KernelKind::Csi => csi_kernel(g1, g2, &weights, config.max_size, false),
        KernelKind::Subgraph => subgraph_kernel(g1, g2, &weights, config.max_size),
        KernelKind::Pharmacophore => pharmacophore_kernel(g1, g2, &config.vertex_kernel, &config.edge_kernel),
    }
}

/// The configured kernel on one pair, evaluated by the exhaustive oracles.
pub fn pair_kernel_oracle(data: &Dataset, i: usize, j: usize, config: &KernelConfig) -> Result<f64, PairError> {
    let (g1, g2) = (&data.graphs()[i], &data.graphs()[j]);
    let weights = config.size_weights().map_err(|e| PairError::Other(e.to_string()))?;
    let edge = EdgeAdapter::new(config.edge_kernel.clone())
        .with_d_weight(config.d_weight)
        .map_err(MatchingError::from)?;
    Ok(match config.kind {
        KernelKind::Sm | KernelKind::Csm | KernelKind::Csi => oracle::brute_force_sm(
            g1,
            g2,
            &config.vertex_kernel,
            &edge,
            &weights,
            config.max_size,
            config.kind == KernelKind::Csm,
        )?,
        KernelKind::Subgraph => oracle::brute_force_subgraph_kernel(g1, g2, &weights, config.max_size)?,
        KernelKind::Pharmacophore => {
            let (Some(m1), Some(m2)) = (data.points(i), data.points(j)) else {
                return Err(PairError::Other(
                    "pharmacophore oracle needs graphs given as point sets".into(),
                ));
            };
            oracle::brute_force_pharmacophore(m1, m2, &config.vertex_kernel, &config.edge_kernel)?
        }
    })
}

/// Per-size kernel matrices with the size weights they are summed with.
#[derive(Debug, Clone, PartialEq)]
pub struct PerSizeStack {
    pub weights: Vec<f64>,
    /// `matrices[s - 1]`: row-major matrix of unweighted size-`s` sums.
    pub matrices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    ids: Vec<String>,
    values: Vec<f64>,
    per_size: Option<PerSizeStack>,
}

impl GramMatrix {
    /// Row-major `values` of an `ids.len()` square matrix.
    pub fn new(ids: Vec<String>, values: Vec<f64>) -> Result<Self, GramError> {
        if values.len() != ids.len() * ids.len() {
            return Err(GramError::NotSquare(format!(
                "{} values for {} ids",
                values.len(),
                ids.len()
            )));
        }
        Ok(GramMatrix {
            ids,
            values,
            per_size: None,
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ids.len() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn per_size(&self) -> Option<&PerSizeStack> {
        self.per_size.as_ref()
    }

    pub fn max_diagonal(&self) -> f64 {
        (0..self.len()).map(|i| self.get(i, i)).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

fn check_dataset(data: &Dataset, config: &KernelConfig) -> Result<(), GramError> {
    if data.is_empty() {
        return Err(GramError::EmptyDataset);
    }
    config.validate()?;
    data.graphs().iter().try_for_each(|g| config.check_graph(g))
}

/// Computes the Gram matrix of `data` using `threads` workers.
///
/// Each unordered pair (diagonal included) is evaluated once and mirrored.
/// Each pair is evaluated the same way on any worker and results are
/// assembled by pair index, so the output does not depend on `threads`.
pub fn compute_gram(data: &Dataset, config: &KernelConfig, threads: usize) -> Result<GramMatrix, GramError> {
    check_dataset(data, config)?;
    let n = data.len();
    let pairs = upper_pairs(n);
    let graphs = data.graphs();
    let evaluate = |&(i, j): &(usize, usize)| {
        pair_kernel(&graphs[i], &graphs[j], config).map_err(|e| GramError::Pair {
            a: graphs[i].id().to_string(),
            b: graphs[j].id().to_string(),
            source: e.into(),
        })
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| GramError::Config(format!("cannot start worker pool: {e}")))?;
    let results: Vec<KernelResult> = pool.install(|| pairs.par_iter().map(evaluate).collect::<Result<_, _>>())?;

    let mut values = vec![0.0; n * n];
    let size_based = config.is_size_based();
    let k = config.max_size;
    let mut matrices = if size_based {
        vec![vec![0.0; n * n]; k]
    } else {
        Vec::new()
    };
    for (&(i, j), r) in pairs.iter().zip(&results) {
        values[i * n + j] = r.total;
        values[j * n + i] = r.total;
        for (s, m) in matrices.iter_mut().enumerate() {
            m[i * n + j] = r.per_size[s];
            m[j * n + i] = r.per_size[s];
        }
    }
    let per_size = if size_based {
        Some(PerSizeStack {
            weights: config.size_weights()?.as_slice().to_vec(),
            matrices,
        })
    } else {
        None
    };
    Ok(GramMatrix {
        ids: data.ids(),
        values,
        per_size,
    })
}

/// The Gram matrix computed by the exhaustive oracles, single-threaded. Only
/// for small graphs; there is no per-size breakdown.
pub fn compute_gram_oracle(data: &Dataset, config: &KernelConfig) -> Result<GramMatrix, GramError> {
    check_dataset(data, config)?;
    let n = data.len();
    let mut values = vec![0.0; n * n];
    for (i, j) in upper_pairs(n) {
        let v = pair_kernel_oracle(data, i, j, config).map_err(|source| GramError::Pair {
            a: data.graphs()[i].id().to_string(),
            b: data.graphs()[j].id().to_string(),
            source,
        })?;
        values[i * n + j] = v;
        values[j * n + i] = v;
    }
    GramMatrix::new(data.ids(), values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    None,
    /// `k_ij / sqrt(k_ii k_jj)`, 0 when either diagonal entry is 0.
    Cosine,
    /// Cosine-normalize each per-size matrix, then sum them scaled by the
    /// size weights.
    PerSize,
}

impl FromStr for Normalization {
    type Err = GramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "none" => Normalization::None,
            "cosine" => Normalization::Cosine,
            "per-size" => Normalization::PerSize,
            _ => return Err(GramError::Config(format!("unknown normalization `{s}`"))),
        })
    }
}

fn cosine(n: usize, values: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let d = values[i * n + i] * values[j * n + j];
            out[i * n + j] = if d > 0.0 { values[i * n + j] / d.sqrt() } else { 0.0 };
        }
    }
    out
}

pub fn normalize_gram(m: &GramMatrix, mode: Normalization) -> Result<GramMatrix, GramError> {
    let n = m.len();
    let values = match mode {
        Normalization::None => return Ok(m.clone()),
        Normalization::Cosine => cosine(n, &m.values),
        Normalization::PerSize => {
            let stack = m
                .per_size
                .as_ref()
                .ok_or_else(|| GramError::Config("per-size normalization needs a size-based weight function".into()))?;
            let mut sum = vec![0.0; n * n];
            for (w, mat) in stack.weights.iter().zip(&stack.matrices) {
                if *w == 0.0 {
                    continue;
                }
                for (acc, v) in sum.iter_mut().zip(cosine(n, mat)) {
                    *acc += w * v;
                }
            }
            sum
        }
    };
    GramMatrix::new(m.ids.clone(), values)
}

/// Smallest eigenvalue of the symmetrized matrix `(M + Mᵀ) / 2`; `+∞` for
/// the empty matrix.
pub fn min_eigenvalue(m: &GramMatrix) -> f64 {
    min_eigenvalue_dense(m.len(), &m.values).expect("gram matrix is square")
}

/// As [`min_eigenvalue`] for a row-major `n * n` slice.
pub fn min_eigenvalue_dense(n: usize, values: &[f64]) -> Result<f64, GramError> {
    if values.len() != n * n {
        return Err(GramError::NotSquare(format!("{} values for order {n}", values.len())));
    }
    if n == 0 {
        return Ok(f64::INFINITY);
    }
    let a = DMatrix::from_row_slice(n, n, values);
    let sym = (&a + a.transpose()) * 0.5;
    Ok(SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min))
}

pub fn gram_to_string(m: &GramMatrix) -> Result<String, GramError> {
    if let Some(id) = m.ids.iter().find(|id| id.contains([',', '\n', '\r'])) {
        return Err(GramError::Config(format!(
            "id `{id}` cannot be written: contains a separator"
        )));
    }
    let mut out = format!("# ids: {}\n", m.ids.join(","));
    let n = m.len();
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.16e}", m.get(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_gram(text: &str) -> Result<GramMatrix, GramError> {
    let format_err = |line: usize, message: String| GramError::Format { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| format_err(1, "missing `# ids:` header".into()))?;
    let ids_text = header
        .strip_prefix("# ids:")
        .ok_or_else(|| format_err(1, "missing `# ids:` header".into()))?
        .trim();
    let ids: Vec<String> = if ids_text.is_empty() {
        Vec::new()
    } else {
        ids_text.split(',').map(|s| s.trim().to_string()).collect()
    };
    let n = ids.len();
    let mut values = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line, l) in lines {
        if l.is_empty() {
            continue;
        }
        if rows == n {
            return Err(GramError::NotSquare(format!("line {line}: more than {n} rows")));
        }
        let before = values.len();
        for t in l.split(',') {
            let v = t
                .trim()
                .parse::<f64>()
                .map_err(|_| format_err(line, format!("invalid number `{}`", t.trim())))?;
            values.push(v);
        }
        if values.len() - before != n {
            return Err(GramError::NotSquare(format!(
                "line {line}: row has {} values, expected {n}",
                values.len() - before
            )));
        }
        rows += 1;
    }
    if rows != n {
        return Err(GramError::NotSquare(format!("{rows} rows for {n} ids")));
    }
    GramMatrix::new(ids, values)
}

pub fn write_gram(m: &GramMatrix, path: impl AsRef<Path>) -> Result<(), GramError> {
    let path = path.as_ref();
    fs::write(path, gram_to_string(m)?).map_err(|source| GramError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_gram(path: impl AsRef<Path>) -> Result<GramMatrix, GramError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| GramError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_gram(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::labeled_graph;

    fn k3(id: &str) -> AttributedGraph {
        labeled_graph(id, &["a"; 3], &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn k3_pair() -> Dataset {
        Dataset::new(vec![k3("x"), k3("y")]).unwrap()
    }

    #[test]
    fn single_graph_gives_self_kernel() {
        let d = Dataset::new(vec![k3("x")]).unwrap();
        let m = compute_gram(&d, &KernelConfig::csi(3), 1).unwrap();
        assert_eq!(m.values(), &[33.0]);
    }

    #[test]
    fn k3_pair_csi() {
        let m = compute_gram(&k3_pair(), &KernelConfig::csi(3), 2).unwrap();
        assert_eq!(m.values(), &[33.0; 4]);
        assert!(m.is_symmetric());
        let stack = m.per_size().unwrap();
        assert_eq!(stack.matrices[0], vec![9.0; 4]);
        assert_eq!(stack.matrices[1], vec![18.0; 4]);
        assert_eq!(stack.matrices[2], vec![6.0; 4]);
    }

    #[test]
    fn empty_dataset_rejected() {
        let d = Dataset::new(vec![]).unwrap();
        assert!(matches!(
            compute_gram(&d, &KernelConfig::csi(3), 1),
            Err(GramError::EmptyDataset)
        ));
    }

    #[test]
    fn normalizations() {
        let m = compute_gram(&k3_pair(), &KernelConfig::csi(3), 1).unwrap();
        assert_eq!(normalize_gram(&m, Normalization::None).unwrap(), m);
        let c = normalize_gram(&m, Normalization::Cosine).unwrap();
        assert_eq!(c.values(), &[1.0; 4]);
        let p = normalize_gram(&m, Normalization::PerSize).unwrap();
        assert_eq!(p.values(), &[3.0; 4]);

        let sub = compute_gram(&k3_pair(), &KernelConfig::subgraph(3), 1).unwrap();
        assert!(sub.per_size().is_none());
        assert!(normalize_gram(&sub, Normalization::PerSize).is_err());
    }

    #[test]
    fn cosine_zero_diagonal_maps_to_zero() {
        let m = GramMatrix::new(vec!["a".into(), "b".into()], vec![0.0, 0.0, 0.0, 4.0]).unwrap();
        let c = normalize_gram(&m, Normalization::Cosine).unwrap();
        assert_eq!(c.values(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn eigenvalue_examples() {
        let ids = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        let eye = GramMatrix::new(ids(3), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((min_eigenvalue(&eye) - 1.0).abs() < 1e-12);
        let ones = GramMatrix::new(ids(2), vec![1.0; 4]).unwrap();
        assert!(min_eigenvalue(&ones).abs() < 1e-12);
        let diag = GramMatrix::new(ids(2), vec![3.0, 0.0, 0.0, -1.0]).unwrap();
        assert!((min_eigenvalue(&diag) + 1.0).abs() < 1e-12);
        assert!(min_eigenvalue_dense(2, &[1.0, 2.0, 3.0]).is_err());
        assert_eq!(min_eigenvalue_dense(0, &[]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn text_round_trip() {
        let m = GramMatrix::new(
            vec!["a".into(), "b".into()],
            vec![1.0 / 3.0, -0.0, std::f64::consts::PI, 1e-300],
        )
        .unwrap();
        let text = gram_to_string(&m).unwrap();
        assert!(text.starts_with("# ids: a,b\n"));
        let back = parse_gram(&text).unwrap();
        assert_eq!(back.ids(), m.ids());
        for (x, y) in back.values().iter().zip(m.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(
            parse_gram("# ids: a,b\n1,2\n3\n"),
            Err(GramError::NotSquare(_))
        ));
        assert!(matches!(parse_gram("# ids: a,b\n1,2\n"), Err(GramError::NotSquare(_))));
        assert!(matches!(parse_gram("# ids: a\n1\n2\n"), Err(GramError::NotSquare(_))));
        assert!(matches!(parse_gram("1,2\n3,4\n"), Err(GramError::Format { .. })));
        assert!(matches!(
            parse_gram("# ids: a\nx\n"),
            Err(GramError::Format { line: 2, .. })
        ));
        assert!(matches!(parse_gram(""), Err(GramError::Format { .. })));
        assert!(parse_gram("# ids:\n").unwrap().is_empty());
    }

    #[test]
    fn ids_with_separators_not_written() {
        let m = GramMatrix::new(vec!["a,b".into()], vec![1.0]).unwrap();
        assert!(gram_to_string(&m).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(KernelConfig::csi(0).validate().is_err());
        let mut c = KernelConfig::csi(3);
        c.vertex_kernel = AttrKernel::brownian(3.0).unwrap();
        assert!(c.validate().is_err());
        let mut c = KernelConfig::csi(3);
        c.weights = Weights::Explicit(vec![1.0, 2.0]);
        assert!(c.validate().is_err());
        c.weights = Weights::Explicit(vec![1.0, 2.0, 0.5]);
        assert!(c.validate().is_ok());
        assert!(KernelConfig::subgraph(9).validate().is_err());
        let mut p = KernelConfig::pharmacophore(AttrKernel::Dirac, AttrKernel::triangular(0.5).unwrap());
        assert!(p.validate().is_ok());
        p.max_size = 4;
        assert!(p.validate().is_err());
    }

    #[test]
    fn weights_parse() {
        assert_eq!("uniform".parse::<Weights>().unwrap(), Weights::Uniform);
        assert_eq!(
            "1,0.5, 2".parse::<Weights>().unwrap(),
            Weights::Explicit(vec![1.0, 0.5, 2.0])
        );
        assert!("1,-1".parse::<Weights>().is_err());
        assert!("".parse::<Weights>().is_err());
        assert!("1,,2".parse::<Weights>().is_err());
    }

    #[test]
    fn incompatible_attributes_name_the_graph() {
        let d = Dataset::new(vec![k3("plain")]).unwrap();
        let cfg = KernelConfig::sm(2, AttrKernel::brownian(3.0).unwrap(), AttrKernel::Dirac);
        match compute_gram(&d, &cfg, 1) {
            Err(GramError::Incompatible { graph, .. }) => assert_eq!(graph, "plain"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn oracle_backend_agrees_on_small_dataset() {
        let p = labeled_graph("p", &["a", "b", "a"], &[(0, 1), (1, 2)]).unwrap();
        let d = Dataset::new(vec![k3("x"), p]).unwrap();
        for cfg in [
            KernelConfig::csi(3),
            KernelConfig::subgraph(3),
            KernelConfig::csm(3, AttrKernel::Dirac, AttrKernel::Dirac),
        ] {
            let fast = compute_gram(&d, &cfg, 1).unwrap();
            let slow = compute_gram_oracle(&d, &cfg).unwrap();
            for (a, b) in fast.values().iter().zip(slow.values()) {
                assert!((a - b).abs() < 1e-9, "{cfg:?}: {a} vs {b}");
            }
        }
    }
}
