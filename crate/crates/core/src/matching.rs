//! Subgraph matching kernels by weighted clique enumeration.
//!
//! Cliques of the weighted product graph correspond one-to-one to bijections
//! between vertex subsets of the two factor graphs whose vertex and edge
//! kernel values are all positive. [`smkernel`] enumerates the cliques of size
//! `1..=k`, each exactly once, and sums
//!
//! ```text
//! λ(C) · Π_{v ∈ C} c(v) · Π_{{u, v} ⊆ C} c(u, v)
//! ```
//!
//! Each unordered clique edge contributes its weight once. The empty clique
//! contributes nothing.
//!
//! With `connected_only`, a vertex may join the clique only if it is joined to
//! some clique vertex by a c-edge, so exactly the c-cliques (connected common
//! subgraphs) are enumerated.

use std::collections::HashMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::graph::AttributedGraph;
use crate::kernels::{AttrKernel, BaseKernel, EdgeAdapter, EdgeKernel, KernelError, VertexKernel};
use crate::oracle;
use crate::product::{build_wpg, WeightedProductGraph};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchingError {
    #[error("maximum matching size must be at least 1")]
    InvalidMaxSize,
    #[error("size weight {index} is {value}; weights must be finite and nonnegative")]
    InvalidWeight { index: usize, value: f64 },
    #[error("graph `{0}` is not complete; the pharmacophore kernel needs distance graphs")]
    NotComplete(String),
    #[error("subgraph kernel supports sizes up to {limit}, got {size}")]
    SizeTooLarge { size: usize, limit: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A matching between two graphs: the pairs `(v1, v2)` of a product-graph
/// clique, in enumeration order.
#[derive(Debug, Clone, Copy)]
pub struct Matching<'a> {
    pub g1: &'a AttributedGraph,
    pub g2: &'a AttributedGraph,
    pub pairs: &'a [(usize, usize)],
}

impl<'a> Matching<'a> {
    pub fn new(g1: &'a AttributedGraph, g2: &'a AttributedGraph, pairs: &'a [(usize, usize)]) -> Self {
        Matching { g1, g2, pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Domain in `g1`, ascending.
    pub fn sorted_domain(&self) -> Vec<usize> {
        let mut d: Vec<_> = self.pairs.iter().map(|p| p.0).collect();
        d.sort_unstable();
        d
    }
}

/// The weight `λ` of a matching. Must be finite, nonnegative and depend only
/// on the set of matched pairs, not their order.
pub trait WeightFunction: Send + Sync {
    fn weight(&self, m: &Matching<'_>) -> f64;

    /// `Some(λ(s))` when the weight depends on the matching size `s` alone.
    /// Lets the engine skip building matchings and lets callers rescale
    /// per-size sums.
    fn size_weight(&self, _size: usize) -> Option<f64> {
        None
    }

    fn name(&self) -> String;
}

/// Weights indexed by matching size: entry `s - 1` is `λ(s)`; sizes past the
/// end weigh 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeWeights(Vec<f64>);

impl SizeWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self, MatchingError> {
        if let Some((index, &value)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(MatchingError::InvalidWeight { index, value });
        }
        Ok(SizeWeights(weights))
    }

    /// `λ ≡ 1` on sizes `1..=max_size`.
    pub fn uniform(max_size: usize) -> Self {
        SizeWeights(vec![1.0; max_size])
    }

    /// `λ = 6` on size 3, 0 elsewhere.
    pub fn pharmacophore() -> Self {
        SizeWeights(vec![0.0, 0.0, 6.0])
    }

    pub fn get(&self, size: usize) -> f64 {
        size.checked_sub(1).and_then(|i| self.0.get(i)).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl WeightFunction for SizeWeights {
    fn weight(&self, m: &Matching<'_>) -> f64 {
        self.get(m.len())
    }

    fn size_weight(&self, size: usize) -> Option<f64> {
        Some(self.get(size))
    }

    fn name(&self) -> String {
        format!("size{:?}", self.0)
    }
}

/// `λ(φ) = λ_s(|φ|) / |Aut(G1[dom φ])|`. Under Dirac kernels this turns the
/// count of common subgraph isomorphisms into the count of isomorphic
/// induced-subgraph pairs.
///
/// Automorphism counts are memoized by domain, so one instance must only be
/// used with a single first graph.
#[derive(Debug)]
pub struct AutomorphismCorrected {
    lambda_s: SizeWeights,
    cache: Mutex<HashMap<Vec<usize>, u64>>,
}

impl AutomorphismCorrected {
    pub fn new(lambda_s: SizeWeights) -> Self {
        AutomorphismCorrected {
            lambda_s,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl WeightFunction for AutomorphismCorrected {
    fn weight(&self, m: &Matching<'_>) -> f64 {
        let ls = self.lambda_s.get(m.len());
        if ls == 0.0 {
            return 0.0;
        }
        let domain = m.sorted_domain();
        let mut cache = self.cache.lock().expect("automorphism cache poisoned");
        let aut = match cache.get(&domain) {
            Some(&a) => a,
            None => {
                let sub = m.g1.induced_subgraph(&domain).expect("matching domain is valid");
                let a = oracle::automorphism_count(&sub).expect("matching size within oracle limit");
                cache.insert(domain, a);
                a
            }
        };
        ls / aut as f64
    }

    fn name(&self) -> String {
        format!("aut-corrected({})", self.lambda_s.name())
    }
}

#[derive(Clone, Copy)]
pub struct MatchingOptions<'w> {
    max_size: usize,
    connected_only: bool,
    weight: &'w dyn WeightFunction,
}

impl<'w> MatchingOptions<'w> {
    pub fn new(max_size: usize, weight: &'w dyn WeightFunction) -> Result<Self, MatchingError> {
        if max_size == 0 {
            return Err(MatchingError::InvalidMaxSize);
        }
        Ok(MatchingOptions {
            max_size,
            connected_only: false,
            weight,
        })
    }

    /// Restricts enumeration to c-cliques.
    pub fn connected(mut self, connected_only: bool) -> Self {
        self.connected_only = connected_only;
        self
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn connected_only(&self) -> bool {
        self.connected_only
    }
}

/// Kernel value together with its breakdown by matching size.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelResult {
    pub total: f64,
    /// Entry `s - 1`: summed clique weights of size `s`, before `λ`.
    pub per_size: Vec<f64>,
    /// Entry `s - 1`: summed `λ`-weighted clique weights of size `s`.
    pub per_size_weighted: Vec<f64>,
    /// Number of nonempty cliques visited.
    pub cliques_visited: u64,
}

impl KernelResult {
    fn zero(max_size: usize) -> Self {
        KernelResult {
            total: 0.0,
            per_size: vec![0.0; max_size],
            per_size_weighted: vec![0.0; max_size],
            cliques_visited: 0,
        }
    }
}

struct Enumerator<'p, 'g> {
    wpg: &'p WeightedProductGraph<'g>,
    max_size: usize,
    connected_only: bool,
    weight: &'p dyn WeightFunction,
    size_weights: Option<Vec<f64>>,
    clique: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    result: KernelResult,
}

impl Enumerator<'_, '_> {
    /// Adds `v` to the clique whose weight is `w`, records the new clique and
    /// returns its weight.
    fn push(&mut self, v: usize, w: f64) -> f64 {
        let mut w = w * self.wpg.vertex_weight(v);
        for &u in &self.clique {
            w *= self.wpg.edge_weight(u, v);
        }
        self.clique.push(v);
        self.pairs.push(self.wpg.pair(v));

        let size = self.clique.len();
        let lambda = match &self.size_weights {
            Some(sw) => sw[size - 1],
            None => {
                let (g1, g2) = self.wpg.graphs();
                self.weight.weight(&Matching::new(g1, g2, &self.pairs))
            }
        };
        self.result.per_size[size - 1] += w;
        self.result.per_size_weighted[size - 1] += w * lambda;
        self.result.cliques_visited += 1;
        w
    }

    fn pop(&mut self) {
        self.clique.pop();
        self.pairs.pop();
    }

    /// Explores all extensions of the current clique (weight `w`).
    ///
    /// `candidates` are adjacent to every clique vertex and may be added now;
    /// `pending` (connected mode only) are adjacent to every clique vertex but
    /// not yet joined to it by any c-edge. Both are ascending and disjoint.
    fn extend(&mut self, w: f64, candidates: &[u32], pending: &[u32]) {
        for (i, &v) in candidates.iter().enumerate() {
            let v = v as usize;
            let wv = self.push(v, w);
            if self.clique.len() < self.max_size {
                let later = &candidates[i + 1..];
                let adjacent = |x: &&u32| self.wpg.edge_weight(v, **x as usize) > 0.0;
                let (next, next_pending) = if self.connected_only {
                    let c_adjacent = |x: &u32| self.wpg.is_c_edge(v, *x as usize);
                    let mut reached: Vec<u32> = pending.iter().filter(adjacent).copied().collect();
                    let still_pending = reached.iter().copied().filter(|x| !c_adjacent(x)).collect();
                    reached.retain(c_adjacent);
                    (merge(later.iter().filter(adjacent).copied(), reached), still_pending)
                } else {
                    (later.iter().filter(adjacent).copied().collect(), Vec::new())
                };
                if !next.is_empty() {
                    self.extend(wv, &next, &next_pending);
                }
            }
            self.pop();
        }
    }

    fn run(&mut self) {
        let n = self.wpg.vertex_count();
        for v in 0..n {
            let wv = self.push(v, 1.0);
            if self.max_size > 1 {
                let later = self.wpg.neighbor_list(v).iter().copied().filter(|&q| q as usize > v);
                if self.connected_only {
                    let (c, d): (Vec<u32>, Vec<u32>) = later.partition(|&q| self.wpg.is_c_edge(v, q as usize));
                    if !c.is_empty() {
                        self.extend(wv, &c, &d);
                    }
                } else {
                    let next: Vec<u32> = later.collect();
                    self.extend(wv, &next, &[]);
                }
            }
            self.pop();
        }
    }
}

fn merge(a: impl Iterator<Item = u32>, b: Vec<u32>) -> Vec<u32> {
    let mut out: Vec<u32> = a.collect();
    if !b.is_empty() {
        out.extend(b);
        out.sort_unstable();
    }
    out
}

/// Enumerates the cliques of `wpg` of size `1..=k` and sums their weights.
pub fn smkernel(wpg: &WeightedProductGraph<'_>, opts: &MatchingOptions<'_>) -> KernelResult {
    let size_weights: Option<Vec<f64>> = (1..=opts.max_size).map(|s| opts.weight.size_weight(s)).collect();
    let mut e = Enumerator {
        wpg,
        max_size: opts.max_size,
        connected_only: opts.connected_only,
        weight: opts.weight,
        size_weights,
        clique: Vec::with_capacity(opts.max_size),
        pairs: Vec::with_capacity(opts.max_size),
        result: KernelResult::zero(opts.max_size),
    };
    e.run();
    let mut result = e.result;
    result.total = result.per_size_weighted.iter().sum();
    result
}

/// Builds the product graph under `kv`, `ke` and runs [`smkernel`].
pub fn sm_kernel<V, E>(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    kv: &V,
    ke: &E,
    opts: &MatchingOptions<'_>,
) -> KernelResult
where
    V: VertexKernel + ?Sized,
    E: EdgeKernel + ?Sized,
{
    smkernel(&build_wpg(g1, g2, kv, ke), opts)
}

/// The common subgraph isomorphism kernel: Dirac kernels on vertex and edge
/// labels, common non-adjacency weighted 1.
pub fn csi_kernel(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    weight: &dyn WeightFunction,
    max_size: usize,
    connected_only: bool,
) -> Result<KernelResult, MatchingError> {
    let opts = MatchingOptions::new(max_size, weight)?.connected(connected_only);
    Ok(sm_kernel(
        g1,
        g2,
        &AttrKernel::Dirac,
        &EdgeAdapter::new(AttrKernel::Dirac),
        &opts,
    ))
}

/// The subgraph kernel restricted to subgraphs of at most `max_size`
/// vertices: the `λ_s`-weighted number of pairs of isomorphic induced
/// subgraphs. Computed as a CSI kernel with automorphism-corrected weights.
pub fn subgraph_kernel(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    lambda_s: &SizeWeights,
    max_size: usize,
) -> Result<KernelResult, MatchingError> {
    if max_size > oracle::MAX_ORACLE_VERTICES {
        return Err(MatchingError::SizeTooLarge {
            size: max_size,
            limit: oracle::MAX_ORACLE_VERTICES,
        });
    }
    let weight = AutomorphismCorrected::new(lambda_s.clone());
    csi_kernel(g1, g2, &weight, max_size, false)
}

/// The pharmacophore kernel on two complete distance graphs: the subgraph
/// matching kernel with `λ = 6` on size 3 and 0 elsewhere.
pub fn pharmacophore_kernel<F, D>(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    k_feat: &F,
    k_dist: &D,
) -> Result<KernelResult, MatchingError>
where
    F: BaseKernel + ?Sized,
    D: BaseKernel + ?Sized,
{
    for g in [g1, g2] {
        if !g.is_complete() {
            return Err(MatchingError::NotComplete(g.id().to_string()));
        }
    }
    let weight = SizeWeights::pharmacophore();
    let opts = MatchingOptions::new(3, &weight)?;
    Ok(sm_kernel(g1, g2, k_feat, &EdgeAdapter::new(k_dist), &opts))
}

/// `C(k) = Σ_{i=0..k} i! · binom(n1, i) · binom(n2, i)`, an upper bound on
/// the number of product-graph cliques of size at most `k` (counting the
/// empty clique). Saturates at `u128::MAX`.
pub fn clique_count_bound(n1: usize, n2: usize, max_size: usize) -> u128 {
    let (n1, n2) = (n1 as u128, n2 as u128);
    let mut total: u128 = 1;
    // term_i = i! * b1 * b2, updated incrementally:
    // term_{i} = term_{i-1} * (n1 - i + 1) * (n2 - i + 1) / i
    let mut term: u128 = 1;
    for i in 1..=max_size as u128 {
        if i > n1 || i > n2 {
            break;
        }
        term = match term.checked_mul(n1 - i + 1).and_then(|t| t.checked_mul(n2 - i + 1)) {
            Some(t) => t / i,
            None => return u128::MAX,
        };
        total = match total.checked_add(term) {
            Some(t) => t,
            None => return u128::MAX,
        };
    }
    total
}
