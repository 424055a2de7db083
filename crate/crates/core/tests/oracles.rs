mod common;

use std::collections::BTreeSet;

use common::*;
use motifcover::info::numerics::{log2_binomial_exact, log2_binomial_lgamma};
use motifcover::motif::pattern::Layout;
use motifcover::*;

fn class(name: &str, directed: bool) -> MotifClass {
    MotifClass::new(named_motif(name, directed).unwrap())
}

fn pattern_edges(m: &MotifClass) -> Vec<(usize, usize)> {
    m.canonical.pattern().edges().map(|(a, b)| (a as usize, b as usize)).collect()
}

#[test]
fn catalog_counts_match_pairwise_isomorphism() {
    for directed in [false, true] {
        let cat = generate_catalog(4, directed, CatalogFilter::Connected).unwrap();
        for k in 2..=4 {
            let ours = cat.classes().iter().filter(|c| c.size == k).count();
            assert_eq!(ours, connected_classes(k, directed), "k={k} directed={directed}");
        }
    }
}

#[test]
fn automorphism_orders_match_brute_force() {
    for directed in [false, true] {
        for c in generate_catalog(4, directed, CatalogFilter::Connected).unwrap().classes() {
            let want = automorphisms(c.size, &pattern_edges(c), directed);
            assert_eq!(c.aut_size as usize, want, "{}", c.canonical);
            for o in &c.orbits {
                assert_eq!(c.aut_size as usize % o.len(), 0);
            }
        }
    }
}

#[test]
fn ffl_has_one_canonical_form() {
    let ffl = [(0, 1), (0, 2), (1, 2)];
    let forms: BTreeSet<String> = permutations(3)
        .iter()
        .map(|p| {
            let e: Vec<_> = ffl.iter().map(|&(u, v)| (p[u], p[v])).collect();
            canonical_form(&Pattern::from_edges(3, true, &e).unwrap()).to_string()
        })
        .collect();
    assert_eq!(forms.len(), 1);
    // Six relabelings, one automorphism: all labelings are distinct masks.
    let layout = Layout::get(3, true);
    let masks: BTreeSet<u64> = permutations(3)
        .iter()
        .map(|p| ffl.iter().fold(0u64, |m, &(u, v)| m | 1 << layout.bit(p[u], p[v])))
        .collect();
    assert_eq!(masks.len(), 6);
}

#[test]
fn enumeration_matches_brute_force() {
    let motifs: Vec<MotifClass> = [false, true]
        .iter()
        .flat_map(|&d| generate_catalog(4, d, CatalogFilter::Connected).unwrap().classes().to_vec())
        .collect();
    for seed in 0..24u64 {
        let directed = seed % 2 == 1;
        let n = 5 + (seed % 4) as usize;
        let g = random_graph(seed, n, if directed { 0.3 } else { 0.5 }, directed);
        for m in motifs.iter().filter(|m| m.directed == directed) {
            let ours: BTreeSet<Vec<EdgeKey>> = find_instances(&g, m, None).unwrap().map(|i| i.edges).collect();
            assert_eq!(
                ours,
                brute_force_instances(&g, m.size, &pattern_edges(m)),
                "seed {seed} motif {}",
                m.canonical
            );
        }
    }
}

#[test]
fn placement_count_by_direct_enumeration() {
    // Count distinct triangle edge sets over all vertex triples of 5 vertices.
    let tri = class("triangle", false);
    let g = Graph::from_edges(5, false, (0..5u32).flat_map(|i| (i + 1..5).map(move |j| (i, j)))).unwrap();
    assert_eq!(placements(&tri, 5).unwrap(), Some(count_instances(&g, &tri).unwrap() as u128));
    // Directed 3-cycles on K4 with both arcs everywhere: 4 triples x 2 orientations.
    let c3 = class("cycle3", true);
    let all: Vec<(u32, u32)> = (0..4u32).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let dk4 = Graph::from_edges(4, true, all).unwrap();
    assert_eq!(placements(&c3, 4).unwrap(), Some(count_instances(&dk4, &c3).unwrap() as u128));
}

#[test]
fn binomials_match_naive() {
    for &(n, k) in &[(10u64, 5u64), (1000, 3), (5000, 20), (40000, 700), (999_983, 41)] {
        let want = log2_binomial_naive(n, k);
        assert!(((log2_binomial_exact(n, k) - want) / want).abs() < 1e-12);
        assert!(((log2_binomial_lgamma(n as u128, k as u128) - want) / want).abs() < 1e-12);
    }
}

#[test]
fn epsilon_examples() {
    let ls = |n| log_star(n, LogStarVariant::Universal).unwrap();
    let edge = class("edge", false);
    assert!((edge.epsilon_bits - (ls(2) + ls(1))).abs() < 1e-12);
    let tri = class("triangle", false);
    assert!((tri.epsilon_bits - 2.0 * ls(3)).abs() < 1e-12);
    let ffl = class("ffl", true);
    assert!((ffl.epsilon_bits - (2.0 * ls(3) + 20f64.log2())).abs() < 1e-12);
}

#[test]
fn stirling_diagnostic_sweep() {
    let tri = class("triangle", false);
    // Relative error shrinks as n grows at fixed density.
    let mut last = f64::INFINITY;
    for n in [100usize, 1000, 10_000, 100_000] {
        let count = (n / 10) as u64;
        let exact = entropy_s(&tri, count, n).unwrap();
        let rel = ((entropy_stirling(&tri, count, n).unwrap() - exact) / exact).abs();
        assert!(rel < last);
        last = rel;
    }
    // One instance: within O(log N) of the exact value.
    let n = 10_000usize;
    let one = entropy_stirling(&tri, 1, n).unwrap();
    assert!((one - entropy_s(&tri, 1, n).unwrap()).abs() < (n as f64).log2());
}

#[test]
fn small_instance_gap_against_exhaustive_search() {
    // Exhaustive search over every set of instances from a 3-motif catalog
    // that covers all edges; the greedy result is compared, not bounded.
    let cat = MotifCatalog::from_classes(
        false,
        [MotifClass::single_edge(false), class("triangle", false), class("path3", false)],
    )
    .unwrap()
    .0;
    let cost = CostModel::default();
    let mut compared = 0;
    for seed in 0..40u64 {
        let g = random_graph(seed, 6, 0.4, false);
        if g.edge_count() == 0 || g.edge_count() > 8 {
            continue;
        }
        let pool: Vec<Instance> = cat
            .classes()
            .iter()
            .flat_map(|m| find_instances(&g, m, None).unwrap().collect::<Vec<_>>())
            .collect();
        if pool.len() > 16 {
            continue;
        }
        compared += 1;
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << pool.len()) {
            let chosen: Vec<Instance> = (0..pool.len()).filter(|&b| mask >> b & 1 == 1).map(|b| pool[b].clone()).collect();
            let c = Cover::from_instances(&g, chosen);
            if c.is_complete(&g) {
                best = best.min(total_information(&c.summary(), None, &cost).unwrap());
            }
        }
        let sol = greedy_cover(&g, &SolverConfig::new(cat.clone())).unwrap();
        let gap = sol.report.sigma - best;
        assert!(gap >= -1e-9, "greedy beat exhaustive search");
        println!("seed {seed}: |E|={} greedy {:.3} optimum {:.3} gap {:.3}", g.edge_count(), sol.report.sigma, best, gap);
    }
    assert!(compared >= 5, "only {compared} graphs compared");
}
