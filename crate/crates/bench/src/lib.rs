//! Inputs shared by the benchmarks.

use motifcover::{generate_bjr, realize_uniform_cover, named_motif, Graph, MotifClass, PlantSpec, PlantTarget};

/// Undirected random graph with about `mean_degree * n / 2` edges.
pub fn random_graph(n: usize, mean_degree: f64, seed: u64) -> Graph {
    let plan = vec![(MotifClass::single_edge(false), PlantTarget::Density(mean_degree / 2.0))];
    generate_bjr(&PlantSpec { n, directed: false, plan, seed }).expect("feasible density").graph
}

/// Triangles, claws and edges planted on `n` vertices.
pub fn planted_graph(n: usize, seed: u64) -> Graph {
    let plan = [("triangle", 60), ("claw", 40), ("edge", 120)]
        .into_iter()
        .map(|(m, c)| (MotifClass::new(named_motif(m, false).expect("known motif")), PlantTarget::Count(c)))
        .collect();
    realize_uniform_cover(&PlantSpec { n, directed: false, plan, seed }).expect("feasible plan").graph
}
