//! Synthetic graphs from planted motif placements.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use thiserror::Error;

use crate::cover::Cover;
use crate::enumerate::Instance;
use crate::graph::{EdgeKey, Graph, GraphError};
use crate::info::placements;
use crate::motif::MotifClass;

/// Populations up to this size are sampled by drawing distinct placement
/// indices; larger ones by rejection of duplicate placements.
const INDEXED_LIMIT: u128 = 1_000_000;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("{motif}: {count} instances requested but only {placements} placements exist on {n} vertices")]
    Infeasible { motif: String, count: u64, placements: String, n: usize },
    #[error("{motif}: density {density} gives placement probability {p} > 1 on {n} vertices")]
    InfeasibleDensity { motif: String, density: f64, p: f64, n: usize },
    #[error("{motif}: too many duplicate placements while sampling {count} instances; use more vertices")]
    TooDense { motif: String, count: u64 },
    #[error("{0}")]
    Spec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlantTarget {
    /// Exact number of distinct instances.
    Count(u64),
    /// Density `k`; each placement appears with probability `k |Aut| / N^(|m|-1)`.
    Density(f64),
}

#[derive(Debug, Clone)]
pub struct PlantSpec {
    pub n: usize,
    pub directed: bool,
    pub plan: Vec<(MotifClass, PlantTarget)>,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct PlantedResult {
    pub graph: Graph,
    pub planted: Cover,
    /// Planted edges that landed on an edge already present.
    pub collisions: usize,
}

/// Draws `count` distinct placements of `m` on `n` vertices, uniformly.
fn sample_placements(
    m: &MotifClass,
    count: u64,
    n: usize,
    directed: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<EdgeKey>>, GenerateError> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let pop = placements(m, n).map_err(|e| GenerateError::Spec(e.to_string()))?;
    if let Some(p) = pop {
        if count as u128 > p {
            return Err(GenerateError::Infeasible {
                motif: m.id(),
                count,
                placements: p.to_string(),
                n,
            });
        }
        if p <= INDEXED_LIMIT {
            return Ok(sample_indexed(m, count as usize, n, p as usize, directed, rng));
        }
    }
    let local: Vec<(u8, u8)> = m.canonical.pattern().edges().collect();
    let budget = 20 * count + 1000;
    let mut seen = HashSet::with_capacity(count as usize);
    let mut out = Vec::with_capacity(count as usize);
    let mut tuple = Vec::with_capacity(m.size);
    let mut draws = 0;
    while (out.len() as u64) < count {
        draws += 1;
        if draws > budget {
            return Err(GenerateError::TooDense { motif: m.id(), count });
        }
        tuple.clear();
        while tuple.len() < m.size {
            let v = rng.random_range(0..n as u32);
            if !tuple.contains(&v) {
                tuple.push(v);
            }
        }
        let mut edges: Vec<EdgeKey> = local
            .iter()
            .map(|&(i, j)| EdgeKey::new(tuple[i as usize], tuple[j as usize], directed))
            .collect();
        edges.sort_unstable();
        if seen.insert(edges.clone()) {
            out.push(edges);
        }
    }
    Ok(out)
}

/// Exact sampling without replacement over an enumerated placement space:
/// index `r * copies + c` is the `c`-th labeled copy of `m` on the `r`-th
/// vertex subset in lexicographic order.
fn sample_indexed(
    m: &MotifClass,
    count: usize,
    n: usize,
    total: usize,
    directed: bool,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<EdgeKey>> {
    let p = m.canonical.pattern();
    let layout = p.layout();
    let table = layout.perm_table();
    let mut copies: Vec<u64> = (0..table.len()).map(|i| table.apply(i, p.mask)).collect();
    copies.sort_unstable();
    copies.dedup();
    let per = copies.len();
    let mut picks: Vec<usize> = index::sample(rng, total, count).into_vec();
    picks.sort_unstable();

    let k = m.size;
    let mut subset: Vec<u32> = (0..k as u32).collect();
    let mut rank = 0usize;
    let mut out = Vec::with_capacity(count);
    for idx in picks {
        let (want, c) = (idx / per, idx % per);
        while rank < want {
            next_subset(&mut subset, n as u32);
            rank += 1;
        }
        let mut edges: Vec<EdgeKey> = layout
            .edges(copies[c])
            .map(|(i, j)| EdgeKey::new(subset[i as usize], subset[j as usize], directed))
            .collect();
        edges.sort_unstable();
        out.push(edges);
    }
    // Shuffle so that instance order carries no information about position.
    use rand::seq::SliceRandom;
    out.shuffle(rng);
    out
}

fn next_subset(s: &mut [u32], n: u32) {
    let k = s.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if s[i] < n - (k - i) as u32 {
            s[i] += 1;
            for j in i + 1..k {
                s[j] = s[j - 1] + 1;
            }
            return;
        }
    }
}

fn check_spec(spec: &PlantSpec) -> Result<(), GenerateError> {
    for (m, _) in &spec.plan {
        if m.directed != spec.directed {
            return Err(GenerateError::Spec(format!("motif {} has the wrong directedness", m.id())));
        }
        if !m.connected || m.edge_count == 0 {
            return Err(GenerateError::Spec(format!("motif {} must be connected", m.id())));
        }
        if m.size > spec.n {
            return Err(GenerateError::Spec(format!("motif {} does not fit on {} vertices", m.id(), spec.n)));
        }
    }
    Ok(())
}

fn assemble(spec: &PlantSpec, drawn: Vec<(&MotifClass, Vec<Vec<EdgeKey>>)>) -> Result<PlantedResult, GenerateError> {
    let mut all: Vec<EdgeKey> = Vec::new();
    for (_, placements) in &drawn {
        for p in placements {
            all.extend_from_slice(p);
        }
    }
    let planted_edges = all.len();
    all.sort_unstable();
    all.dedup();
    let collisions = planted_edges - all.len();
    let graph = Graph::from_edges(spec.n, spec.directed, all.iter().map(|e| (e.0, e.1)))?;
    let mut cover = Cover::new(&graph);
    for (m, placements) in drawn {
        for edges in placements {
            let mut vertices: Vec<u32> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            cover.push(Instance { motif: m.canonical, vertices, edges });
        }
    }
    Ok(PlantedResult { graph, planted: cover, collisions })
}

/// Realization of the uniform cover ensemble with the exact counts of `spec`.
pub fn realize_uniform_cover(spec: &PlantSpec) -> Result<PlantedResult, GenerateError> {
    check_spec(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut drawn = Vec::with_capacity(spec.plan.len());
    for (m, target) in &spec.plan {
        let PlantTarget::Count(c) = *target else {
            return Err(GenerateError::Spec("uniform covers take exact counts".into()));
        };
        drawn.push((m, sample_placements(m, c, spec.n, spec.directed, &mut rng)?));
    }
    assemble(spec, drawn)
}

/// Placement probability `k |Aut(m)| / N^(|m|-1)` of the homogeneous model.
pub fn placement_probability(m: &MotifClass, density: f64, n: usize) -> f64 {
    density * m.aut_size as f64 / (n as f64).powi(m.size as i32 - 1)
}

/// Homogeneous clustered random graph: every distinct placement of each motif
/// is added independently with its placement probability. The number of
/// placements is drawn first, then that many distinct placements uniformly.
pub fn generate_bjr(spec: &PlantSpec) -> Result<PlantedResult, GenerateError> {
    check_spec(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut drawn = Vec::with_capacity(spec.plan.len());
    for (m, target) in &spec.plan {
        let PlantTarget::Density(k) = *target else {
            return Err(GenerateError::Spec("the random model takes densities".into()));
        };
        if !k.is_finite() || k < 0.0 {
            return Err(GenerateError::Spec(format!("density for {} must be non-negative", m.id())));
        }
        let p = placement_probability(m, k, spec.n);
        if p > 1.0 {
            return Err(GenerateError::InfeasibleDensity { motif: m.id(), density: k, p, n: spec.n });
        }
        let count = if p == 0.0 {
            0
        } else {
            match placements(m, spec.n).map_err(|e| GenerateError::Spec(e.to_string()))? {
                Some(pop) if pop <= u64::MAX as u128 => Binomial::new(pop as u64, p)
                    .map_err(|e| GenerateError::Spec(e.to_string()))?
                    .sample(&mut rng),
                // Binomial with a population beyond u64 and a tiny p.
                _ => {
                    let lambda = crate::info::log2_placements(m, spec.n)
                        .map_err(|e| GenerateError::Spec(e.to_string()))?
                        .exp2()
                        * p;
                    Poisson::new(lambda)
                        .map_err(|e| GenerateError::Spec(e.to_string()))?
                        .sample(&mut rng) as u64
                }
            }
        };
        drawn.push((m, sample_placements(m, count, spec.n, spec.directed, &mut rng)?));
    }
    assemble(spec, drawn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motif::named_motif;

    fn class(name: &str, directed: bool) -> MotifClass {
        MotifClass::new(named_motif(name, directed).unwrap())
    }

    fn spec(n: usize, plan: Vec<(MotifClass, PlantTarget)>, seed: u64) -> PlantSpec {
        let directed = plan.first().is_some_and(|(m, _)| m.directed);
        PlantSpec { n, directed, plan, seed }
    }

    #[test]
    fn single_triangle() {
        let r = realize_uniform_cover(&spec(3, vec![(class("triangle", false), PlantTarget::Count(1))], 0)).unwrap();
        assert_eq!(r.graph.edge_count(), 3);
        assert_eq!(r.planted.len(), 1);
        r.planted.validate(&r.graph).unwrap();
    }

    #[test]
    fn distinct_edges() {
        for seed in 0..20 {
            let r = realize_uniform_cover(&spec(100, vec![(class("edge", false), PlantTarget::Count(5))], seed)).unwrap();
            assert_eq!(r.graph.edge_count(), 5);
            assert_eq!(r.collisions, 0);
            r.planted.validate(&r.graph).unwrap();
        }
    }

    #[test]
    fn exhausts_small_population() {
        // All 10 triangles on 5 vertices.
        let r = realize_uniform_cover(&spec(5, vec![(class("triangle", false), PlantTarget::Count(10))], 3)).unwrap();
        assert_eq!(r.planted.len(), 10);
        let distinct: HashSet<_> = r.planted.instances().iter().map(|i| i.edges.clone()).collect();
        assert_eq!(distinct.len(), 10);
        assert_eq!(r.graph.edge_count(), 10);
    }

    #[test]
    fn infeasible_counts() {
        let e = realize_uniform_cover(&spec(4, vec![(class("triangle", false), PlantTarget::Count(5))], 0));
        assert!(matches!(e, Err(GenerateError::Infeasible { .. })));
        let e = generate_bjr(&spec(4, vec![(class("triangle", false), PlantTarget::Density(100.0))], 0));
        assert!(matches!(e, Err(GenerateError::InfeasibleDensity { .. })));
    }

    #[test]
    fn rejection_path_mixed_plan() {
        let plan = vec![
            (class("triangle", false), PlantTarget::Count(50)),
            (class("claw", false), PlantTarget::Count(100)),
            (class("edge", false), PlantTarget::Count(200)),
        ];
        let a = realize_uniform_cover(&spec(1000, plan.clone(), 9)).unwrap();
        let b = realize_uniform_cover(&spec(1000, plan, 9)).unwrap();
        a.planted.validate(&a.graph).unwrap();
        assert_eq!(a.planted, b.planted);
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.planted.len(), 350);
        assert_eq!(a.graph.edge_count() + a.collisions, 150 + 300 + 200);
    }

    #[test]
    fn zero_density_is_empty() {
        let r = generate_bjr(&spec(50, vec![(class("triangle", false), PlantTarget::Density(0.0))], 1)).unwrap();
        assert_eq!(r.graph.edge_count(), 0);
        assert!(r.planted.is_empty());
    }

    #[test]
    fn directed_edge_density() {
        let r = generate_bjr(&spec(2000, vec![(class("edge", true), PlantTarget::Density(2.0))], 5)).unwrap();
        // Expected 2 * 1999 arcs; standard deviation about 63.
        let arcs = r.graph.edge_count() as f64;
        assert!((arcs - 3998.0).abs() < 300.0, "{arcs}");
        assert!(r.graph.is_directed());
    }

    #[test]
    fn subset_walk() {
        let mut s = vec![0, 1, 2];
        let mut count = 1;
        while s != vec![2, 3, 4] {
            next_subset(&mut s, 5);
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
