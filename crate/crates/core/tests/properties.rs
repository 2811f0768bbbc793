mod common;

use common::rel_close;
use proptest::collection::vec;
use proptest::prelude::*;
use smkernel::dataset::{parse_dataset, Dataset};
use smkernel::gram::{
    compute_gram, gram_to_string, min_eigenvalue, normalize_gram, parse_gram, GramMatrix, KernelConfig, Normalization,
};
use smkernel::graph::{AttributedGraph, GraphBuilder};
use smkernel::kernels::{AttrKernel, BaseKernel, EdgeAdapter, EdgeKernel, Item};
use smkernel::matching::{sm_kernel, AutomorphismCorrected, MatchingOptions, SizeWeights};
use smkernel::oracle::{automorphism_count, brute_force_sm, brute_force_subgraph_kernel, isomorphism_count};
use smkernel::points::{build_distance_graph, Point};
use smkernel::product::{build_wpg, EdgeClass};

const LABELS: [&str; 3] = ["a", "b", "c"];
const EDGE_LABELS: [&str; 2] = ["-", "="];

#[derive(Debug, Clone)]
struct Raw {
    labels: Vec<usize>,
    attrs: Vec<f64>,
    edges: Vec<Option<(usize, f64)>>,
}

impl Raw {
    fn build(&self, id: &str) -> AttributedGraph {
        let n = self.labels.len();
        let mut b = GraphBuilder::new(id);
        for (l, x) in self.labels.iter().zip(&self.attrs) {
            b.add_vertex(LABELS[*l], vec![*x]);
        }
        let mut slots = self.edges.iter();
        for u in 0..n {
            for v in u + 1..n {
                if let Some(Some((l, d))) = slots.next() {
                    b.add_edge(u, v, EDGE_LABELS[*l], vec![*d]);
                }
            }
        }
        b.build().unwrap()
    }
}

fn raw_graph(min_n: usize, max_n: usize, density: f64) -> impl Strategy<Value = Raw> {
    (min_n..=max_n).prop_flat_map(move |n| {
        let m = n * n.saturating_sub(1) / 2;
        (
            vec(0..3usize, n),
            vec(0.0..4.0f64, n),
            vec(proptest::option::weighted(density, (0..2usize, 0.0..1.0f64)), m),
        )
            .prop_map(|(labels, attrs, edges)| Raw { labels, attrs, edges })
    })
}

fn graph(max_n: usize) -> impl Strategy<Value = AttributedGraph> {
    raw_graph(0, max_n, 0.5).prop_map(|r| r.build("g"))
}

fn pair(max_n: usize) -> impl Strategy<Value = (AttributedGraph, AttributedGraph)> {
    (raw_graph(0, max_n, 0.5), raw_graph(0, max_n, 0.5)).prop_map(|(a, b)| (a.build("g1"), b.build("g2")))
}

fn base_kernel() -> impl Strategy<Value = AttrKernel> {
    prop_oneof![
        Just(AttrKernel::Dirac),
        (0.05..2.0f64).prop_map(|c| AttrKernel::triangular(c).unwrap()),
        (0.5..4.0f64).prop_map(|c| AttrKernel::brownian(c).unwrap()),
        (0.1..3.0f64).prop_map(|s| AttrKernel::rbf(s).unwrap()),
    ]
}

fn kernel_spec() -> impl Strategy<Value = AttrKernel> {
    base_kernel().prop_recursive(2, 6, 3, |inner| {
        vec(inner, 1..3).prop_map(|v| AttrKernel::product(v).unwrap())
    })
}

fn permuted(g: &AttributedGraph, perm: &[usize]) -> AttributedGraph {
    // vertex v of g becomes vertex perm[v]
    let n = g.vertex_count();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut b = GraphBuilder::new("perm");
    for &v in &inv {
        b.add_vertex(g.vertex_label(v), g.vertex_attrs(v).to_vec());
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        b.add_edge(perm[u], perm[v], g.edge_label_at(e), g.edge_attrs_at(e).to_vec());
    }
    b.build().unwrap()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn neighbors_are_symmetric(g in graph(8)) {
        for v in 0..g.vertex_count() {
            for u in g.neighbors(v).unwrap() {
                prop_assert!(g.neighbors(u).unwrap().contains(&v));
            }
        }
    }

    #[test]
    fn induced_subgraph_restricts_edges(g in graph(8), mask in vec(any::<bool>(), 8)) {
        let s: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask[v]).collect();
        let h = g.induced_subgraph(&s).unwrap();
        prop_assert_eq!(h.vertex_count(), s.len());
        for (i, &a) in s.iter().enumerate() {
            prop_assert_eq!(h.vertex_label(i), g.vertex_label(a));
            prop_assert_eq!(h.vertex_attrs(i), g.vertex_attrs(a));
            for (j, &b) in s.iter().enumerate() {
                prop_assert_eq!(h.has_edge(i, j), g.has_edge(a, b));
                if let (Some(e), Some(f)) = (h.edge_index(i, j), g.edge_index(a, b)) {
                    prop_assert_eq!(h.edge_label_at(e), g.edge_label_at(f));
                    prop_assert_eq!(h.edge_attrs_at(e), g.edge_attrs_at(f));
                }
            }
        }
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let same = g.induced_subgraph(&all).unwrap();
        prop_assert_eq!(same.edge_count(), g.edge_count());
        prop_assert_eq!(same.edges(), g.edges());
    }

    #[test]
    fn base_kernels_symmetric_and_maximal_on_diagonal(k in base_kernel(), x in -5.0..5.0f64, y in -5.0..5.0f64) {
        let (ax, ay) = ([x], [y]);
        let (a, b) = (Item::new("a", &ax), Item::new("a", &ay));
        prop_assert_eq!(k.eval(a, b), k.eval(b, a));
        prop_assert!(k.eval(a, b) <= k.eval(a, a));
        let top = match &k {
            AttrKernel::Brownian { c, .. } => *c,
            _ => 1.0,
        };
        prop_assert_eq!(k.eval(a, a), top);
    }

    #[test]
    fn base_kernel_gram_is_psd(k in base_kernel(), xs in vec(-3.0..3.0f64, 20), ls in vec(0..3usize, 20)) {
        let attrs: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        let values: Vec<f64> = (0..20)
            .flat_map(|i| {
                let (k, attrs) = (&k, &attrs);
                let ls = &ls;
                (0..20).map(move |j| k.eval(Item::new(LABELS[ls[i]], &attrs[i]), Item::new(LABELS[ls[j]], &attrs[j])))
            })
            .collect();
        let ids = (0..20).map(|i| i.to_string()).collect();
        let m = GramMatrix::new(ids, values).unwrap();
        prop_assert!(min_eigenvalue(&m) >= -1e-9);
    }

    #[test]
    fn kernel_specs_round_trip(k in kernel_spec()) {
        let back: AttrKernel = k.to_string().parse().unwrap();
        prop_assert_eq!(back, k);
    }

    #[test]
    fn edge_adapter_zero_on_mixed_membership((g1, g2) in pair(6), probes in vec((0..6usize, 0..6usize, 0..6usize, 0..6usize), 100)) {
        let ke = EdgeAdapter::new(AttrKernel::triangular(0.5).unwrap());
        let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
        prop_assume!(n1 >= 2 && n2 >= 2);
        for (a, b, c, d) in probes {
            let (u1, v1, u2, v2) = (a % n1, b % n1, c % n2, d % n2);
            if u1 == v1 || u2 == v2 {
                continue;
            }
            let w = ke.eval(&g1, (u1, v1), &g2, (u2, v2));
            if g1.has_edge(u1, v1) != g2.has_edge(u2, v2) {
                prop_assert_eq!(w, 0.0);
            }
            prop_assert_eq!(w, ke.eval(&g2, (u2, v2), &g1, (u1, v1)));
            prop_assert_eq!(w, ke.eval(&g1, (v1, u1), &g2, (v2, u2)));
        }
    }

    #[test]
    fn dirac_product_edges_are_two_vertex_csis((g1, g2) in pair(6)) {
        let wpg = build_wpg(&g1, &g2, &AttrKernel::Dirac, &EdgeAdapter::new(AttrKernel::Dirac));
        let pairs = wpg.pairs();
        for p in 0..pairs.len() {
            for q in 0..pairs.len() {
                let ((u1, u2), (v1, v2)) = (pairs[p], pairs[q]);
                if u1 == v1 || u2 == v2 {
                    prop_assert_eq!(wpg.edge_weight(p, q), 0.0);
                    continue;
                }
                let csi = match (g1.edge_index(u1, v1), g2.edge_index(u2, v2)) {
                    (Some(e), Some(f)) => g1.edge_label_at(e) == g2.edge_label_at(f),
                    (None, None) => true,
                    _ => false,
                };
                prop_assert_eq!(wpg.edge_weight(p, q) > 0.0, csi);
            }
        }
        // every label-compatible pair is a product vertex
        let compatible = (0..g1.vertex_count())
            .flat_map(|a| (0..g2.vertex_count()).map(move |b| (a, b)))
            .filter(|&(a, b)| g1.vertex_label(a) == g2.vertex_label(b))
            .count();
        prop_assert_eq!(pairs.len(), compatible);
    }

    #[test]
    fn product_graph_swap_symmetry((g1, g2) in pair(6)) {
        let kv = AttrKernel::product(vec![AttrKernel::Dirac, AttrKernel::brownian(3.0).unwrap()]).unwrap();
        let ke = EdgeAdapter::new(AttrKernel::triangular(0.5).unwrap());
        let a = build_wpg(&g1, &g2, &kv, &ke);
        let b = build_wpg(&g2, &g1, &kv, &ke);
        prop_assert_eq!(a.vertex_count(), b.vertex_count());
        prop_assert_eq!(a.edge_count(), b.edge_count());
        let mut wa: Vec<f64> = (0..a.vertex_count()).map(|p| a.vertex_weight(p)).collect();
        let mut wb: Vec<f64> = (0..b.vertex_count()).map(|p| b.vertex_weight(p)).collect();
        wa.sort_by(f64::total_cmp);
        wb.sort_by(f64::total_cmp);
        prop_assert_eq!(wa, wb);
        let mut ea: Vec<(f64, EdgeClass)> = a.edges().map(|(_, _, w, c)| (w, c)).collect();
        let mut eb: Vec<(f64, EdgeClass)> = b.edges().map(|(_, _, w, c)| (w, c)).collect();
        ea.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1 == EdgeClass::C).cmp(&(y.1 == EdgeClass::C))));
        eb.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1 == EdgeClass::C).cmp(&(y.1 == EdgeClass::C))));
        prop_assert_eq!(ea, eb);
    }

    #[test]
    fn complete_graphs_have_no_d_edges(
        p1 in vec((0..2usize, 0.0..2.0f64, 0.0..2.0f64, 0.0..2.0f64), 0..6),
        p2 in vec((0..2usize, 0.0..2.0f64, 0.0..2.0f64, 0.0..2.0f64), 0..6),
    ) {
        let pts = |v: &[(usize, f64, f64, f64)]| -> Vec<Point> {
            v.iter().map(|&(l, x, y, z)| Point::new(LABELS[l], [x, y, z])).collect()
        };
        let g1 = build_distance_graph("m1", &pts(&p1)).unwrap();
        let g2 = build_distance_graph("m2", &pts(&p2)).unwrap();
        prop_assert!(g1.is_complete() && g2.is_complete());
        let wpg = build_wpg(&g1, &g2, &AttrKernel::Dirac, &EdgeAdapter::new(AttrKernel::triangular(1.0).unwrap()));
        prop_assert!(wpg.edges().all(|(_, _, _, c)| c == EdgeClass::C));
    }

    #[test]
    fn kernel_symmetric_under_swap((g1, g2) in pair(6), k in 1..5usize, connected in any::<bool>()) {
        let kv = AttrKernel::brownian(3.0).unwrap();
        let ke = EdgeAdapter::new(AttrKernel::triangular(0.25).unwrap());
        let w = SizeWeights::new((1..=k).map(|s| 1.0 / s as f64).collect()).unwrap();
        let opts = MatchingOptions::new(k, &w).unwrap().connected(connected);
        let a = sm_kernel(&g1, &g2, &kv, &ke, &opts);
        let b = sm_kernel(&g2, &g1, &kv, &ke, &opts);
        prop_assert!(rel_close(a.total, b.total, 1e-12), "{} vs {}", a.total, b.total);
        prop_assert_eq!(a.cliques_visited, b.cliques_visited);
    }

    #[test]
    fn kernel_monotone_in_k((g1, g2) in pair(6), connected in any::<bool>()) {
        let kv = AttrKernel::brownian(3.0).unwrap();
        let ke = EdgeAdapter::new(AttrKernel::triangular(0.5).unwrap());
        let mut last = 0.0;
        for k in 1..=5 {
            let w = SizeWeights::uniform(k);
            let r = sm_kernel(&g1, &g2, &kv, &ke, &MatchingOptions::new(k, &w).unwrap().connected(connected));
            prop_assert!(r.total >= last);
            last = r.total;
        }
    }

    #[test]
    fn dirac_oracle_counts_are_integers((g1, g2) in pair(5), k in 1..5usize) {
        let w = SizeWeights::uniform(k);
        let v = brute_force_sm(&g1, &g2, &AttrKernel::Dirac, &EdgeAdapter::new(AttrKernel::Dirac), &w, k, false).unwrap();
        prop_assert_eq!(v.fract(), 0.0);
    }

    #[test]
    fn automorphisms_divide_isomorphisms(g in graph(6), perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let perm: Vec<usize> = perm.into_iter().filter(|&p| p < g.vertex_count()).collect();
        let h = permuted(&g, &perm);
        let aut = automorphism_count(&g).unwrap();
        let iso = isomorphism_count(&g, &h).unwrap();
        prop_assert!(aut >= 1 && iso >= 1);
        prop_assert_eq!(iso % aut, 0);
        prop_assert_eq!(iso, aut);
    }

    #[test]
    fn self_subgraph_kernel_counts_every_subgraph(g in graph(6), k in 1..5usize) {
        let v = brute_force_subgraph_kernel(&g, &g, &SizeWeights::uniform(k), k).unwrap();
        let n = g.vertex_count();
        let subsets: f64 = (1..=k.min(n)).map(|i| binom(n, i)).sum();
        prop_assert!(v >= subsets);
    }

    #[test]
    fn oracles_agree_on_subgraph_kernel((g1, g2) in pair(5), k in 1..5usize) {
        let lambda = SizeWeights::new((1..=k).map(|s| s as f64).collect()).unwrap();
        let corrected = AutomorphismCorrected::new(lambda.clone());
        let via_sm = brute_force_sm(&g1, &g2, &AttrKernel::Dirac, &EdgeAdapter::new(AttrKernel::Dirac), &corrected, k, false).unwrap();
        let direct = brute_force_subgraph_kernel(&g1, &g2, &lambda, k).unwrap();
        prop_assert!((via_sm - direct).abs() <= 1e-9 * direct.max(1.0), "{} vs {}", via_sm, direct);
    }

    #[test]
    fn gram_text_round_trips(values in vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 9)) {
        let m = GramMatrix::new(vec!["a".into(), "b".into(), "c".into()], values).unwrap();
        let back = parse_gram(&gram_to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(back.ids(), m.ids());
        for (x, y) in back.values().iter().zip(m.values()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn parse_dataset_never_panics(text in "(graph [a-z]{1,3}\n|v [0-9] [ab]( -?[0-9.e]{1,4})?\n|e [0-9] [0-9] -( [0-9.]{1,3})?\n|point a [0-9] [0-9] [0-9]\n|end\n|#.*\n|[ -~]{0,8}\n){0,12}") {
        let _ = parse_dataset(&text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gram_is_thread_independent_and_psd(raws in vec(raw_graph(1, 7, 0.5), 2..8), k in 1..4usize) {
        let graphs = raws.iter().enumerate().map(|(i, r)| r.build(&format!("g{i}"))).collect();
        let data = Dataset::new(graphs).unwrap();
        let config = KernelConfig::csm(k, AttrKernel::brownian(3.0).unwrap(), AttrKernel::triangular(0.25).unwrap());
        let one = compute_gram(&data, &config, 1).unwrap();
        let many = compute_gram(&data, &config, 3).unwrap();
        prop_assert_eq!(gram_to_string(&one).unwrap(), gram_to_string(&many).unwrap());
        prop_assert!(one.is_symmetric());
        for mode in [Normalization::None, Normalization::Cosine, Normalization::PerSize] {
            let m = normalize_gram(&one, mode).unwrap();
            prop_assert!(min_eigenvalue(&m) >= -1e-8 * m.max_diagonal().max(1.0));
        }
    }
}
