//! Greedy Σ-minimizing cover construction.
//!
//! Each step evaluates every live candidate motif: a randomized greedy picks
//! instances that are pairwise disjoint on the still uncovered edges, the
//! prefix with the best efficiency (bits per newly covered edge) is kept, and
//! the step is admissible only if it does not raise the total information of
//! the partial cover, where uncovered edges are priced as single-edge
//! subgraphs. The most efficient admissible motif is applied.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cover::{Cover, CoverSummary};
use crate::enumerate::{census, find_instances, CensusEntry, EnumerationError, Instance, InstanceTable};
use crate::graph::{EdgeSet, Graph};
use crate::info::{information_report, total_information, CostModel, InfoError, InformationReport};
use crate::motif::{CanonicalForm, MotifCatalog, MotifClass};

pub const DEFAULT_RESTARTS: usize = 5;
pub const DEFAULT_INSTANCE_CAP: usize = 10_000_000;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("candidate catalog lacks the single-edge motif")]
    MissingSingleEdge,
    #[error("catalog directedness does not match the graph")]
    Directedness,
    #[error("{0}")]
    Config(String),
    #[error("step set covers no new edge")]
    NoNewEdges,
    #[error("no admissible step with {0} edges uncovered")]
    Stuck(usize),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Info(#[from] InfoError),
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub catalog: MotifCatalog,
    pub seed: u64,
    /// Randomized greedy passes per motif and step.
    pub restarts: usize,
    pub cost: CostModel,
    /// Motifs with more instances than this are re-enumerated every step
    /// instead of being held in memory.
    pub instance_cap: usize,
    pub biconnected_only: bool,
}

impl SolverConfig {
    pub fn new(catalog: MotifCatalog) -> Self {
        SolverConfig {
            catalog,
            seed: 0,
            restarts: DEFAULT_RESTARTS,
            cost: CostModel::default(),
            instance_cap: DEFAULT_INSTANCE_CAP,
            biconnected_only: false,
        }
    }
}

/// One applied greedy step.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub motif: CanonicalForm,
    pub instances: usize,
    pub new_edges: usize,
    /// Bits per newly covered edge.
    pub efficiency: f64,
    /// Partial-cover total information after the step.
    pub sigma: f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub cover: Cover,
    pub report: InformationReport,
    pub steps: Vec<Step>,
    /// Partial-cover Σ before the first step and after each step.
    pub trace: Vec<f64>,
}

/// Mixes a base seed with a sequence of stream identifiers.
pub fn derive_seed(seed: u64, stream: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    stream.iter().fold(mix(seed), |acc, &s| mix(acc ^ mix(s)))
}

/// `σ = (S(m, |S|) + ε(m) + log*|S|) / |E(S) - E(C)|`.
pub fn efficiency(
    g: &Graph,
    m: &MotifClass,
    step: &[Instance],
    covered: &EdgeSet,
    cost: &CostModel,
) -> Result<f64, SolverError> {
    let mut fresh = EdgeSet::new(g.edge_count());
    for e in step.iter().flat_map(|i| &i.edges) {
        if let Some(id) = g.edge_id(e.0, e.1) {
            if !covered.contains(id) {
                fresh.insert(id);
            }
        }
    }
    if fresh.is_empty() {
        return Err(SolverError::NoNewEdges);
    }
    let bits = cost.motif_block(m, step.len() as u64, g.vertex_count())?;
    Ok(bits / fresh.len() as f64)
}

/// Incremental `ln C(P, k)` along k = 1, 2, ...
struct LnBinomialWalk {
    p: f64,
    k: f64,
    value: f64,
}

impl LnBinomialWalk {
    fn new(m: &MotifClass, n: usize) -> Result<Self, InfoError> {
        let p = crate::info::log2_placements(m, n)?.exp2();
        Ok(LnBinomialWalk { p, k: 0.0, value: 0.0 })
    }

    fn next(&mut self) -> f64 {
        self.k += 1.0;
        self.value += ((self.p - self.k + 1.0) / self.k).ln();
        self.value
    }
}

/// Best prefix of a greedy pick: returns `(k, σ)` for the k minimizing σ.
fn best_prefix(
    m: &MotifClass,
    n: usize,
    cost: &CostModel,
    cumulative_new: &[usize],
) -> Result<(usize, f64), SolverError> {
    let eps = cost.epsilon(m);
    let mut walk = LnBinomialWalk::new(m, n)?;
    let mut best = (0, f64::INFINITY);
    for (i, &fresh) in cumulative_new.iter().enumerate() {
        let k = i + 1;
        let s = walk.next() / std::f64::consts::LN_2;
        let sigma = (s.max(0.0) + eps + cost.log_star(k as u64)?) / fresh as f64;
        if sigma < best.1 {
            best = (k, sigma);
        }
    }
    Ok(best)
}

/// A proposed step for one motif.
#[derive(Debug, Clone)]
struct Proposal {
    rows: Vec<Vec<u32>>,
    new_edges: usize,
    sigma: f64,
}

/// Randomized greedy independent set over a stored instance table.
fn pick_from_table(
    g: &Graph,
    m: &MotifClass,
    table: &InstanceTable,
    covered: &EdgeSet,
    cost: &CostModel,
    restarts: usize,
    seed: u64,
) -> Result<Option<Proposal>, SolverError> {
    let rows = table.len();
    if rows == 0 {
        return Ok(None);
    }
    let mut usage = vec![0u32; g.edge_count()];
    let mut fresh = Vec::with_capacity(rows);
    for r in table.iter() {
        let mut f = 0u32;
        for &e in r {
            if !covered.contains(e) {
                usage[e as usize] += 1;
                f += 1;
            }
        }
        fresh.push(f);
    }
    let conflict: Vec<u64> = table
        .iter()
        .map(|r| {
            r.iter()
                .filter(|&&e| !covered.contains(e))
                .map(|&e| (usage[e as usize] - 1) as u64)
                .sum()
        })
        .collect();
    // Most new edges first, then fewest competitors; ties are shuffled per restart.
    let mut order: Vec<u32> = (0..rows as u32).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(fresh[i as usize]), conflict[i as usize], i));
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=rows {
        let same = i < rows && {
            let (a, b) = (order[start] as usize, order[i] as usize);
            fresh[a] == fresh[b] && conflict[a] == conflict[b]
        };
        if !same {
            groups.push(start..i);
            start = i;
        }
    }

    let mut taken = vec![0u32; g.edge_count()];
    let mut best: Option<(Vec<u32>, usize, f64)> = None;
    for restart in 0..restarts.max(1) {
        let stamp = restart as u32 + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[restart as u64]));
        for gr in &groups {
            order[gr.clone()].shuffle(&mut rng);
        }
        let mut picked = Vec::new();
        let mut cumulative = Vec::new();
        let mut total = 0usize;
        for &i in &order {
            let r = table.get(i as usize);
            let free = r.iter().all(|&e| covered.contains(e) || taken[e as usize] != stamp);
            if !free {
                continue;
            }
            for &e in r {
                if !covered.contains(e) {
                    taken[e as usize] = stamp;
                }
            }
            total += fresh[i as usize] as usize;
            picked.push(i);
            cumulative.push(total);
        }
        let (k, sigma) = best_prefix(m, g.vertex_count(), cost, &cumulative)?;
        if best.as_ref().is_none_or(|b| sigma < b.2) {
            picked.truncate(k);
            best = Some((picked, cumulative[k - 1], sigma));
        }
    }
    Ok(best.map(|(picked, new_edges, sigma)| Proposal {
        rows: picked.iter().map(|&i| table.get(i as usize).to_vec()).collect(),
        new_edges,
        sigma,
    }))
}

/// Single greedy pass over a fresh enumeration, for motifs too numerous to
/// store: instances made only of uncovered edges are taken first, then any
/// remaining instance that still adds an edge.
fn pick_from_stream(
    g: &Graph,
    m: &MotifClass,
    covered: &EdgeSet,
    cost: &CostModel,
) -> Result<Option<Proposal>, SolverError> {
    let mut taken = EdgeSet::new(g.edge_count());
    let mut rows = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0;
    for pass in 0..2 {
        for inst in find_instances(g, m, Some(covered))? {
            let ids: Vec<u32> = inst
                .edges
                .iter()
                .map(|e| g.edge_id(e.0, e.1).expect("instance edge in graph"))
                .collect();
            let open: Vec<u32> = ids.iter().copied().filter(|&e| !covered.contains(e)).collect();
            if open.iter().any(|&e| taken.contains(e)) || (pass == 0 && open.len() < ids.len()) {
                continue;
            }
            if pass == 1 && open.len() == ids.len() {
                continue;
            }
            open.iter().for_each(|&e| {
                taken.insert(e);
            });
            total += open.len();
            rows.push(ids);
            cumulative.push(total);
        }
    }
    if rows.is_empty() {
        return Ok(None);
    }
    let (k, sigma) = best_prefix(m, g.vertex_count(), cost, &cumulative)?;
    rows.truncate(k);
    Ok(Some(Proposal { rows, new_edges: cumulative[k - 1], sigma }))
}

enum Source {
    Table(InstanceTable),
    Stream,
}

struct Candidate<'c> {
    class: &'c MotifClass,
    /// Position in the catalog; orders ties and seeds the motif's stream.
    pos: usize,
    source: Source,
}

impl Candidate<'_> {
    fn propose(
        &self,
        g: &Graph,
        covered: &EdgeSet,
        config: &SolverConfig,
        step: usize,
    ) -> Result<Option<Proposal>, SolverError> {
        match &self.source {
            Source::Table(t) => {
                let seed = derive_seed(config.seed, &[step as u64, self.pos as u64]);
                pick_from_table(g, self.class, t, covered, &config.cost, config.restarts, seed)
            }
            Source::Stream => pick_from_stream(g, self.class, covered, &config.cost),
        }
    }
}

fn check_config(g: &Graph, config: &SolverConfig) -> Result<(), SolverError> {
    if config.catalog.directed() != g.is_directed() {
        return Err(SolverError::Directedness);
    }
    if config.catalog.single_edge().is_none() {
        return Err(SolverError::MissingSingleEdge);
    }
    if config.restarts == 0 {
        return Err(SolverError::Config("restarts must be positive".into()));
    }
    Ok(())
}

/// Instance set of `m` chosen by the greedy heuristic against the covered
/// edges, trimmed to its most efficient prefix. Empty when no instance adds
/// an uncovered edge.
pub fn optimal_instance_set(
    g: &Graph,
    m: &MotifClass,
    covered: &EdgeSet,
    config: &SolverConfig,
) -> Result<Vec<Instance>, SolverError> {
    if m.directed != g.is_directed() {
        return Err(SolverError::Directedness);
    }
    find_instances(g, m, None)?; // validates the motif
    let source = match census(g, &[m], config.instance_cap, Some(covered)).pop() {
        Some(CensusEntry::Stored(t)) => Source::Table(t),
        _ => Source::Stream,
    };
    let cand = Candidate { class: m, pos: 0, source };
    Ok(cand
        .propose(g, covered, config, 0)?
        .map(|p| p.rows.iter().map(|r| Instance::from_edge_ids(g, m.canonical, r)).collect())
        .unwrap_or_default())
}

/// Greedy cover of `g` over the configured catalog.
pub fn greedy_cover(g: &Graph, config: &SolverConfig) -> Result<Solution, SolverError> {
    check_config(g, config)?;
    if g.edge_count() == 0 {
        return Err(SolverError::NoEdges);
    }
    let catalog = &config.catalog;
    let edge_pos = catalog.single_edge().expect("checked");
    let edge_class = &catalog.classes()[edge_pos];
    let cost = &config.cost;
    let n = g.vertex_count();

    let positions: Vec<usize> = (0..catalog.len())
        .filter(|&i| {
            let c = &catalog.classes()[i];
            c.size <= n && (!config.biconnected_only || c.biconnected || i == edge_pos)
        })
        .collect();
    let classes: Vec<&MotifClass> = positions.iter().map(|&i| &catalog.classes()[i]).collect();
    for c in &classes {
        if c.size > crate::enumerate::MAX_ENUMERATION_SIZE {
            return Err(EnumerationError::TooLarge(c.size).into());
        }
        if !c.connected {
            return Err(EnumerationError::Disconnected(c.id()).into());
        }
    }
    let mut candidates: Vec<Candidate> = census(g, &classes, config.instance_cap, None)
        .into_iter()
        .zip(positions.iter().zip(&classes))
        .filter_map(|(entry, (&pos, &class))| {
            let source = match entry {
                CensusEntry::Stored(t) if t.len() == 0 => return None,
                CensusEntry::Stored(t) => Source::Table(t),
                CensusEntry::OverCap(_) => Source::Stream,
            };
            Some(Candidate { class, pos, source })
        })
        .collect();

    let mut covered = EdgeSet::new(g.edge_count());
    let mut uncovered = g.edge_count();
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    let mut instances = Vec::new();
    let partial_sigma = |counts: &BTreeMap<usize, u64>, uncovered: usize| -> Result<f64, InfoError> {
        let mut s = CoverSummary::new(n, g.is_directed());
        for (&pos, &c) in counts {
            s.add(catalog.classes()[pos].canonical, c);
        }
        s.add(edge_class.canonical, uncovered as u64);
        total_information(&s, Some(catalog), cost)
    };
    let block = |m: &MotifClass, c: u64| cost.motif_block(m, c, n);

    let mut sigma = partial_sigma(&counts, uncovered)?;
    let mut trace = vec![sigma];
    let mut steps = Vec::new();
    let mut step = 0usize;
    while uncovered > 0 {
        let proposals: Vec<Option<Proposal>> = candidates
            .par_iter()
            .map(|c| c.propose(g, &covered, config, step))
            .collect::<Result<_, _>>()?;

        let edges_now = counts.get(&edge_pos).copied().unwrap_or(0) + uncovered as u64;
        let mut best: Option<(usize, Proposal)> = None;
        for (ci, p) in proposals.into_iter().enumerate() {
            let Some(p) = p else { continue };
            let cand = &candidates[ci];
            let k = p.rows.len() as u64;
            let admissible = if cand.pos == edge_pos {
                true
            } else {
                let have = counts.get(&cand.pos).copied().unwrap_or(0);
                let delta = block(cand.class, have + k)? - block(cand.class, have)?
                    + block(edge_class, edges_now - p.new_edges as u64)?
                    - block(edge_class, edges_now)?;
                delta <= 0.0
            };
            if !admissible {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bi, bp)) => {
                    let b = &candidates[*bi];
                    (p.sigma, cand.class.size, cand.pos) < (bp.sigma, b.class.size, b.pos)
                }
            };
            if better {
                best = Some((ci, p));
            }
        }
        let (ci, p) = best.ok_or(SolverError::Stuck(uncovered))?;
        let cand = &candidates[ci];
        for r in &p.rows {
            for &e in r {
                if covered.insert(e) {
                    uncovered -= 1;
                }
            }
            instances.push(Instance::from_edge_ids(g, cand.class.canonical, r));
        }
        *counts.entry(cand.pos).or_insert(0) += p.rows.len() as u64;
        sigma = partial_sigma(&counts, uncovered)?;
        trace.push(sigma);
        steps.push(Step {
            motif: cand.class.canonical,
            instances: p.rows.len(),
            new_edges: p.new_edges,
            efficiency: p.sigma,
            sigma,
        });

        // Eligibility only shrinks as edges get covered.
        for c in &mut candidates {
            if let Source::Table(t) = &mut c.source {
                t.retain(|r| r.iter().any(|&e| !covered.contains(e)));
            }
        }
        candidates.retain(|c| !matches!(&c.source, Source::Table(t) if t.len() == 0));
        step += 1;
    }

    let cover = Cover::from_instances(g, instances);
    let report = information_report(g, &cover, cost)?;
    Ok(Solution { cover, report, steps, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeKey;
    use crate::motif::{generate_catalog, named_motif, CatalogFilter};

    fn undirected_catalog(k: usize) -> MotifCatalog {
        generate_catalog(k, false, CatalogFilter::Connected).unwrap()
    }

    fn edge_only(directed: bool) -> MotifCatalog {
        MotifCatalog::from_classes(directed, [MotifClass::single_edge(directed)]).unwrap().0
    }

    fn triangles(k: u32) -> Graph {
        let edges = (0..k).flat_map(|t| {
            let b = 3 * t;
            [(b, b + 1), (b + 1, b + 2), (b, b + 2)]
        });
        Graph::from_edges(3 * k as usize, false, edges).unwrap()
    }

    fn class(name: &str) -> MotifClass {
        MotifClass::new(named_motif(name, false).unwrap())
    }

    #[test]
    fn seeds_differ_by_stream() {
        assert_ne!(derive_seed(1, &[0, 0]), derive_seed(1, &[0, 1]));
        assert_ne!(derive_seed(1, &[0, 1]), derive_seed(1, &[1, 0]));
        assert_eq!(derive_seed(7, &[3]), derive_seed(7, &[3]));
    }

    #[test]
    fn efficiency_examples() {
        let cost = CostModel::default();
        let g = triangles(2);
        let tri = class("triangle");
        let edge = MotifClass::single_edge(false);
        let none = EdgeSet::new(g.edge_count());
        let one = [Instance::from_edge_ids(&g, edge.canonical, &[0])];
        let want = cost.motif_block(&edge, 1, 6).unwrap();
        assert!((efficiency(&g, &edge, &one, &none, &cost).unwrap() - want).abs() < 1e-12);

        let both = [
            Instance::from_edge_ids(&g, tri.canonical, &[0, 1, 2]),
            Instance::from_edge_ids(&g, tri.canonical, &[3, 4, 5]),
        ];
        let want = cost.motif_block(&tri, 2, 6).unwrap() / 6.0;
        assert!((efficiency(&g, &tri, &both, &none, &cost).unwrap() - want).abs() < 1e-12);

        let mut partial = EdgeSet::new(g.edge_count());
        partial.insert(0);
        partial.insert(1);
        let want = cost.motif_block(&tri, 1, 6).unwrap();
        assert!((efficiency(&g, &tri, &both[..1], &partial, &cost).unwrap() - want).abs() < 1e-12);
        partial.insert(2);
        assert!(matches!(efficiency(&g, &tri, &both[..1], &partial, &cost), Err(SolverError::NoNewEdges)));
    }

    #[test]
    fn instance_sets() {
        let cfg = SolverConfig::new(undirected_catalog(3));
        let tri = class("triangle");

        let g = triangles(2);
        let s = optimal_instance_set(&g, &tri, &EdgeSet::new(6), &cfg).unwrap();
        assert_eq!(s.len(), 2);

        let bowtie = Graph::from_edges(5, false, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        let s = optimal_instance_set(&bowtie, &tri, &EdgeSet::new(6), &cfg).unwrap();
        assert_eq!(s.len(), 2);

        let k4 = Graph::from_edges(4, false, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let s = optimal_instance_set(&k4, &tri, &EdgeSet::new(6), &cfg).unwrap();
        assert_eq!(s.len(), 1);

        let s = optimal_instance_set(&g, &tri, &EdgeSet::full(6), &cfg).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn edge_only_catalog_gives_edge_cover() {
        let g = triangles(4);
        let sol = greedy_cover(&g, &SolverConfig::new(edge_only(false))).unwrap();
        sol.cover.validate(&g).unwrap();
        assert_eq!(sol.cover.summary(), CoverSummary::edge_cover(&g));
        assert_eq!(sol.report.sigma, sol.report.eri);
        assert_eq!(sol.report.delta_sigma, 0.0);
    }

    #[test]
    fn disjoint_triangles_found() {
        let g = triangles(40);
        let sol = greedy_cover(&g, &SolverConfig::new(undirected_catalog(3))).unwrap();
        sol.cover.validate(&g).unwrap();
        let tri = named_motif("triangle", false).unwrap();
        assert_eq!(sol.cover.summary().counts, BTreeMap::from([(tri, 40)]));
        assert!(sol.report.sigma < sol.report.eri);
        assert!(sol.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*sol.trace.last().unwrap(), sol.report.sigma);
        assert_eq!(sol.trace[0], sol.report.eri);
    }

    #[test]
    fn deterministic_and_complete() {
        let edges: Vec<(u32, u32)> = (0..60u32)
            .flat_map(|i| [(i, (i + 1) % 60), (i, (i + 7) % 60), (i, (i + 2) % 60)])
            .collect();
        let g = Graph::from_edges(60, false, edges).unwrap();
        let mut cfg = SolverConfig::new(undirected_catalog(4));
        cfg.seed = 11;
        let a = greedy_cover(&g, &cfg).unwrap();
        let b = greedy_cover(&g, &cfg).unwrap();
        a.cover.validate(&g).unwrap();
        assert_eq!(a.cover, b.cover);
        assert_eq!(a.trace, b.trace);
        assert!(a.report.sigma <= a.report.eri);
    }

    #[test]
    fn directed_and_biconnected() {
        let g = Graph::from_edges(6, true, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]).unwrap();
        let mut cfg = SolverConfig::new(generate_catalog(3, true, CatalogFilter::Connected).unwrap());
        cfg.biconnected_only = true;
        let sol = greedy_cover(&g, &cfg).unwrap();
        sol.cover.validate(&g).unwrap();
        assert!(sol.cover.instances().iter().all(|i| {
            let c = MotifClass::new(i.motif);
            c.biconnected
        }));
        assert!(sol.cover.instances().iter().any(|i| i.edges.contains(&EdgeKey(0, 3))));
    }

    #[test]
    fn config_errors() {
        let g = triangles(1);
        assert!(matches!(greedy_cover(&g, &SolverConfig::new(edge_only(true))), Err(SolverError::Directedness)));
        let empty = Graph::empty(3, false);
        assert!(matches!(greedy_cover(&empty, &SolverConfig::new(edge_only(false))), Err(SolverError::NoEdges)));
        let mut cfg = SolverConfig::new(edge_only(false));
        cfg.restarts = 0;
        assert!(greedy_cover(&g, &cfg).is_err());
    }

    #[test]
    fn streaming_matches_when_capped() {
        let g = triangles(10);
        let mut cfg = SolverConfig::new(undirected_catalog(3));
        cfg.instance_cap = 1;
        let sol = greedy_cover(&g, &cfg).unwrap();
        sol.cover.validate(&g).unwrap();
        let tri = named_motif("triangle", false).unwrap();
        assert_eq!(sol.cover.summary().counts, BTreeMap::from([(tri, 10)]));
    }
}
