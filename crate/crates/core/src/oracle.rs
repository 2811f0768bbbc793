//! Exhaustive reference implementations.
//!
//! Each function evaluates its defining sum directly, by enumerating vertex
//! subsets, bijections and permutations. They are exponential and guarded by
//! hard size limits; their purpose is to check the clique-enumeration engine
//! on small inputs.
//!
//! Edge-kernel products run over unordered pairs of the bijection's domain,
//! each pair once, matching the engine.

use thiserror::Error;

use crate::graph::{AttributedGraph, GraphError};
use crate::kernels::{BaseKernel, EdgeKernel, Item, VertexKernel};
use crate::matching::{Matching, SizeWeights, WeightFunction};
use crate::points::{Point, DISTANCE_EDGE_LABEL};

/// Largest graph the graph oracles accept.
pub const MAX_ORACLE_VERTICES: usize = 8;
/// Largest point set the pharmacophore oracle accepts.
pub const MAX_ORACLE_POINTS: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} has {size} elements, oracle limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("maximum matching size must be at least 1")]
    InvalidMaxSize,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A bijection between a vertex subset of one graph and a vertex subset of
/// another, as a list of `(v1, v2)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bijection(Vec<(usize, usize)>);

impl Bijection {
    /// `None` if either coordinate repeats.
    pub fn new(pairs: Vec<(usize, usize)>) -> Option<Self> {
        for (i, a) in pairs.iter().enumerate() {
            for b in &pairs[..i] {
                if a.0 == b.0 || a.1 == b.1 {
                    return None;
                }
            }
        }
        Some(Bijection(pairs))
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn domain(&self) -> Vec<usize> {
        self.0.iter().map(|p| p.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<(), OracleError> {
    if size > limit {
        Err(OracleError::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}

/// Calls `f` on every `size`-element subset of `0..n`, ascending.
fn for_each_subset(n: usize, size: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, f);
            cur.pop();
        }
    }
    rec(0, n, size, &mut Vec::with_capacity(size), f);
}

/// Calls `f` on every injective sequence of length `len` over `0..n`.
fn for_each_injection(n: usize, len: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(n: usize, len: usize, used: &mut [bool], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == len {
            f(cur);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, len, used, cur, f);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, len, &mut vec![false; n], &mut Vec::with_capacity(len), f);
}

/// Every nonempty bijection between vertex subsets of sizes `1..=max_size`.
/// Domains are ascending; images range over all injections.
pub fn bijections(n1: usize, n2: usize, max_size: usize) -> Vec<Bijection> {
    let mut out = Vec::new();
    for size in 1..=max_size.min(n1).min(n2) {
        for_each_subset(n1, size, &mut |dom| {
            for_each_injection(n2, size, &mut |img| {
                out.push(Bijection(dom.iter().copied().zip(img.iter().copied()).collect()));
            });
        });
    }
    out
}

/// The subgraph matching kernel by direct summation over bijections of size
/// `1..=max_size`. With `connected_only`, only bijections whose domain induces
/// a connected subgraph of `g1` contribute.
#[allow(clippy::too_many_arguments)]
pub fn brute_force_sm<V, E, W>(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    kv: &V,
    ke: &E,
    weight: &W,
    max_size: usize,
    connected_only: bool,
) -> Result<f64, OracleError>
where
    V: VertexKernel + ?Sized,
    E: EdgeKernel + ?Sized,
    W: WeightFunction + ?Sized,
{
    guard("first graph", g1.vertex_count(), MAX_ORACLE_VERTICES)?;
    guard("second graph", g2.vertex_count(), MAX_ORACLE_VERTICES)?;
    if max_size == 0 {
        return Err(OracleError::InvalidMaxSize);
    }
    let mut total = 0.0;
    for phi in bijections(g1.vertex_count(), g2.vertex_count(), max_size) {
        if connected_only && !g1.induced_subgraph(&phi.domain())?.is_connected() {
            continue;
        }
        let pairs = phi.pairs();
        let mut score = 1.0;
        for &(a, b) in pairs {
            score *= kv.eval(g1, a, g2, b);
        }
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                score *= ke.eval(g1, (pairs[i].0, pairs[j].0), g2, (pairs[i].1, pairs[j].1));
            }
        }
        if score == 0.0 {
            continue;
        }
        total += weight.weight(&Matching::new(g1, g2, pairs)) * score;
    }
    Ok(total)
}

/// True iff `perm` maps `g1` onto `g2` preserving adjacency, vertex labels and
/// edge labels.
fn is_isomorphism(g1: &AttributedGraph, g2: &AttributedGraph, perm: &[usize]) -> bool {
    let n = perm.len();
    for (v, &p) in perm.iter().enumerate() {
        if g1.vertex_label(v) != g2.vertex_label(p) {
            return false;
        }
    }
    for u in 0..n {
        for v in u + 1..n {
            match (g1.edge_index(u, v), g2.edge_index(perm[u], perm[v])) {
                (None, None) => {}
                (Some(e1), Some(e2)) if g1.edge_label_at(e1) == g2.edge_label_at(e2) => {}
                _ => return false,
            }
        }
    }
    true
}

fn count_isomorphisms(g1: &AttributedGraph, g2: &AttributedGraph, stop_at_first: bool) -> u64 {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return 0;
    }
    let mut count = 0u64;
    let mut done = false;
    for_each_injection(n, n, &mut |perm| {
        if !done && is_isomorphism(g1, g2, perm) {
            count += 1;
            done = stop_at_first;
        }
    });
    count
}

/// |Aut(G)|: the number of label- and adjacency-preserving permutations,
/// found by checking all `n!` of them.
pub fn automorphism_count(g: &AttributedGraph) -> Result<u64, OracleError> {
    guard("graph", g.vertex_count(), MAX_ORACLE_VERTICES)?;
    Ok(count_isomorphisms(g, g, false))
}

/// Number of isomorphisms from `g1` onto `g2`.
pub fn isomorphism_count(g1: &AttributedGraph, g2: &AttributedGraph) -> Result<u64, OracleError> {
    guard("first graph", g1.vertex_count(), MAX_ORACLE_VERTICES)?;
    guard("second graph", g2.vertex_count(), MAX_ORACLE_VERTICES)?;
    Ok(count_isomorphisms(g1, g2, false))
}

/// The subgraph kernel: `λ_s(|S1|)` summed over all pairs of isomorphic
/// induced subgraphs `G1[S1]`, `G2[S2]` with `1 <= |S1| <= max_size`.
pub fn brute_force_subgraph_kernel(
    g1: &AttributedGraph,
    g2: &AttributedGraph,
    lambda_s: &SizeWeights,
    max_size: usize,
) -> Result<f64, OracleError> {
    guard("first graph", g1.vertex_count(), MAX_ORACLE_VERTICES)?;
    guard("second graph", g2.vertex_count(), MAX_ORACLE_VERTICES)?;
    if max_size == 0 {
        return Err(OracleError::InvalidMaxSize);
    }
    let mut subgraphs2 = Vec::new();
    let mut total = 0.0;
    for size in 1..=max_size.min(g1.vertex_count()).min(g2.vertex_count()) {
        subgraphs2.clear();
        for_each_subset(g2.vertex_count(), size, &mut |s| {
            subgraphs2.push(g2.induced_subgraph(s).expect("valid subset"));
        });
        let w = lambda_s.get(size);
        for_each_subset(g1.vertex_count(), size, &mut |s| {
            let h1 = g1.induced_subgraph(s).expect("valid subset");
            for h2 in &subgraphs2 {
                if count_isomorphisms(&h1, h2, true) > 0 {
                    total += w;
                }
            }
        });
    }
    Ok(total)
}

/// The pharmacophore kernel: over all ordered triples of distinct points
/// `(a1, a2, a3)` of `m1` and `(b1, b2, b3)` of `m2`, the sum of
/// `Π k_feat(l(a_i), l(b_i)) · Π k_dist(|a_i a_{i+1}|, |b_i b_{i+1}|)` with
/// indices mod 3.
///
/// Features are passed to `k_feat` as items with no attributes; distances are
/// passed to `k_dist` as items labeled [`DISTANCE_EDGE_LABEL`] whose only
/// attribute is the distance.
pub fn brute_force_pharmacophore<F, D>(m1: &[Point], m2: &[Point], k_feat: &F, k_dist: &D) -> Result<f64, OracleError>
where
    F: BaseKernel + ?Sized,
    D: BaseKernel + ?Sized,
{
    guard("first point set", m1.len(), MAX_ORACLE_POINTS)?;
    guard("second point set", m2.len(), MAX_ORACLE_POINTS)?;
    let euclid = |a: &Point, b: &Point| {
        let mut s = 0.0;
        for i in 0..3 {
            s += (a.position[i] - b.position[i]).powi(2);
        }
        s.sqrt()
    };
    let mut triples1 = Vec::new();
    for_each_injection(m1.len(), 3, &mut |t| triples1.push([t[0], t[1], t[2]]));
    let mut triples2 = Vec::new();
    for_each_injection(m2.len(), 3, &mut |t| triples2.push([t[0], t[1], t[2]]));

    let mut total = 0.0;
    for p in &triples1 {
        for q in &triples2 {
            let mut ki = 1.0;
            for i in 0..3 {
                ki *= k_feat.eval(Item::new(&m1[p[i]].label, &[]), Item::new(&m2[q[i]].label, &[]));
            }
            let mut ks = 1.0;
            for i in 0..3 {
                let j = (i + 1) % 3;
                let d1 = [euclid(&m1[p[i]], &m1[p[j]])];
                let d2 = [euclid(&m2[q[i]], &m2[q[j]])];
                ks *= k_dist.eval(Item::new(DISTANCE_EDGE_LABEL, &d1), Item::new(DISTANCE_EDGE_LABEL, &d2));
            }
            total += ki * ks;
        }
    }
    Ok(total)
}
