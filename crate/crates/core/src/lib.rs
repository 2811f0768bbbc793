//! Subgraph matching kernels for attributed graphs.
//!
//! The kernel counts pairs of matching subgraphs of two graphs, scoring each
//! bijection by vertex and edge kernels and a weight function. It is computed
//! by enumerating cliques of size at most `k` in a weighted product graph.
//!
//! ```
//! use smkernel::{graph::labeled_graph, matching::{csi_kernel, SizeWeights}};
//!
//! let k3 = labeled_graph("k3", &["a"; 3], &[(0, 1), (1, 2), (0, 2)]).unwrap();
//! let r = csi_kernel(&k3, &k3, &SizeWeights::uniform(3), 3, false).unwrap();
//! assert_eq!(r.total, 33.0);
//! ```

pub mod dataset;
pub mod gram;
pub mod graph;
pub mod kernels;
pub mod matching;
pub mod oracle;
pub mod points;
pub mod product;

pub use dataset::{parse_dataset, read_dataset, Dataset, DatasetError};
pub use gram::{
    compute_gram, min_eigenvalue, normalize_gram, read_gram, write_gram, GramMatrix, KernelConfig, KernelKind,
    Normalization,
};
pub use graph::{AttributedGraph, GraphBuilder, GraphError};
pub use kernels::{AttrKernel, BaseKernel, EdgeAdapter, EdgeKernel, VertexKernel};
pub use matching::{
    clique_count_bound, sm_kernel, smkernel, KernelResult, MatchingOptions, SizeWeights, WeightFunction,
};
pub use product::{build_wpg, WeightedProductGraph};
