//! Network motifs as compression: subgraph covers of a graph that minimize
//! total information, the bit-cost model behind them, and generators for the
//! random graphs they describe.
//!
//! ```
//! use motifcover::{generate_catalog, greedy_cover, CatalogFilter, Graph, SolverConfig};
//!
//! let g = Graph::from_edges(6, false, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
//! let catalog = generate_catalog(3, false, CatalogFilter::Connected).unwrap();
//! let solution = greedy_cover(&g, &SolverConfig::new(catalog)).unwrap();
//! assert!(solution.report.sigma <= solution.report.eri);
//! ```

pub mod cover;
pub mod enumerate;
pub mod generate;
pub mod graph;
pub mod info;
pub mod motif;
pub mod solver;

pub use cover::{cover_from_json, cover_to_json, role_sequence, Cover, CoverError, CoverSummary, RoleSequence};
pub use enumerate::{
    count_instances, enumerate_connected_vertex_sets, find_instances, EnumerationError, Instance, InstanceStream,
    MAX_ENUMERATION_SIZE,
};
pub use generate::{generate_bjr, realize_uniform_cover, GenerateError, PlantSpec, PlantTarget, PlantedResult};
pub use graph::{load_edge_list, write_edge_list, EdgeKey, EdgeSet, Graph, GraphError, LoadedGraph};
pub use info::{
    c_score, delta_sigma, edge_cover_information, entropy_s, entropy_stirling, information_report, log2_placements,
    log_star, placements, significance_profile, total_information, CostModel, EpsilonMode, InfoError,
    InformationReport, LogStarVariant, MotifRow,
};
pub use motif::{
    automorphism_group, canonical_form, generate_catalog, is_biconnected, max_catalog_size, named_motif,
    CanonicalForm, CatalogFilter, MotifCatalog, MotifClass, MotifError, Pattern,
};
pub use solver::{
    derive_seed, efficiency, greedy_cover, optimal_instance_set, Solution, SolverConfig, SolverError, Step,
};
