//! Subgraph covers, their motif counts, role sequences and the JSON cover format.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::Instance;
use crate::graph::{EdgeKey, EdgeSet, Graph, LoadedGraph};
use crate::motif::{canonical_form, find_isomorphism, named_motif, CanonicalForm, MotifClass, Pattern};

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("cover leaves {} edge(s) uncovered: {}", .0.len(), list_edges(.0))]
    Incomplete(Vec<EdgeKey>),
    #[error("instance {index}: {reason}")]
    InvalidInstance { index: usize, reason: String },
    #[error("cover JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn list_edges(edges: &[EdgeKey]) -> String {
    let shown: Vec<String> = edges.iter().take(20).map(|e| format!("({}, {})", e.0, e.1)).collect();
    let more = if edges.len() > 20 { ", ..." } else { "" };
    format!("{}{more}", shown.join(", "))
}

/// Motif counts of a cover on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSummary {
    pub n: usize,
    pub directed: bool,
    pub counts: BTreeMap<CanonicalForm, u64>,
}

impl CoverSummary {
    pub fn new(n: usize, directed: bool) -> Self {
        CoverSummary { n, directed, counts: BTreeMap::new() }
    }

    /// The all-single-edge summary of `g`.
    pub fn edge_cover(g: &Graph) -> Self {
        let mut s = Self::new(g.vertex_count(), g.is_directed());
        if g.edge_count() > 0 {
            s.counts.insert(MotifClass::single_edge(g.is_directed()).canonical, g.edge_count() as u64);
        }
        s
    }

    pub fn add(&mut self, motif: CanonicalForm, n: u64) {
        if n > 0 {
            *self.counts.entry(motif).or_insert(0) += n;
        }
    }
}

/// A set of subgraphs of one host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    n: usize,
    directed: bool,
    instances: Vec<Instance>,
}

impl Cover {
    pub fn new(g: &Graph) -> Self {
        Cover { n: g.vertex_count(), directed: g.is_directed(), instances: Vec::new() }
    }

    pub fn from_instances(g: &Graph, instances: Vec<Instance>) -> Self {
        Cover { n: g.vertex_count(), directed: g.is_directed(), instances }
    }

    /// One single-edge instance per edge of `g`.
    pub fn edge_cover(g: &Graph) -> Self {
        let edge = MotifClass::single_edge(g.is_directed()).canonical;
        let instances = (0..g.edge_count() as u32)
            .map(|e| Instance::from_edge_ids(g, edge, &[e]))
            .collect();
        Self::from_instances(g, instances)
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn push(&mut self, inst: Instance) {
        self.instances.push(inst);
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn summary(&self) -> CoverSummary {
        let mut s = CoverSummary::new(self.n, self.directed);
        for i in &self.instances {
            s.add(i.motif, 1);
        }
        s
    }

    /// Motifs present in the cover, in canonical order.
    pub fn motifs(&self) -> Vec<CanonicalForm> {
        self.summary().counts.into_keys().collect()
    }

    /// Union of instance edges. Edges missing from `g` are ignored.
    pub fn covered(&self, g: &Graph) -> EdgeSet {
        let mut s = EdgeSet::new(g.edge_count());
        for e in self.instances.iter().flat_map(|i| &i.edges) {
            if let Some(id) = g.edge_id(e.0, e.1) {
                s.insert(id);
            }
        }
        s
    }

    pub fn is_complete(&self, g: &Graph) -> bool {
        self.covered(g).is_full()
    }

    /// Checks that every instance is a subgraph of `g` realizing its motif and
    /// that the instances cover every edge.
    pub fn validate(&self, g: &Graph) -> Result<(), CoverError> {
        for (index, inst) in self.instances.iter().enumerate() {
            check_instance(g, inst).map_err(|reason| CoverError::InvalidInstance { index, reason })?;
        }
        let covered = self.covered(g);
        if !covered.is_full() {
            return Err(CoverError::Incomplete(covered.complement().map(|e| g.edge(e)).collect()));
        }
        Ok(())
    }
}

fn local_pattern(inst: &Instance, directed: bool) -> Result<Pattern, String> {
    let pos = |v: u32| {
        inst.vertices
            .binary_search(&v)
            .map_err(|_| format!("edge endpoint {v} not among the instance vertices"))
    };
    let mut edges = Vec::with_capacity(inst.edges.len());
    for e in &inst.edges {
        edges.push((pos(e.0)?, pos(e.1)?));
    }
    Pattern::from_edges(inst.vertices.len(), directed, &edges).map_err(|e| e.to_string())
}

fn check_instance(g: &Graph, inst: &Instance) -> Result<(), String> {
    if inst.motif.directed() != g.is_directed() {
        return Err("motif directedness does not match the graph".into());
    }
    if inst.vertices.windows(2).any(|w| w[0] >= w[1]) {
        return Err("vertices must be sorted and distinct".into());
    }
    if inst.vertices.len() != inst.motif.size() {
        return Err(format!(
            "{} vertices for a motif on {}",
            inst.vertices.len(),
            inst.motif.size()
        ));
    }
    for e in &inst.edges {
        if !g.has_edge(e.0, e.1) {
            return Err(format!("edge ({}, {}) is not in the graph", e.0, e.1));
        }
    }
    let p = local_pattern(inst, g.is_directed())?;
    if p.edge_count() != inst.edges.len() {
        return Err("repeated edge".into());
    }
    if canonical_form(&p) != inst.motif {
        return Err(format!("edges do not form motif {}", inst.motif));
    }
    Ok(())
}

/// Per-vertex attachments `(motif, orbit index) -> multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleSequence {
    pub roles: Vec<BTreeMap<(CanonicalForm, u8), u32>>,
}

impl RoleSequence {
    /// Total attachments to `(motif, orbit)` over all vertices.
    pub fn orbit_total(&self, motif: CanonicalForm, orbit: u8) -> u64 {
        self.roles
            .iter()
            .filter_map(|r| r.get(&(motif, orbit)))
            .map(|&c| c as u64)
            .sum()
    }
}

/// The role sequence induced by a complete cover: for each instance, each
/// host vertex is attached to the orbit its motif position belongs to.
pub fn role_sequence(cover: &Cover, g: &Graph) -> Result<RoleSequence, CoverError> {
    let covered = cover.covered(g);
    if !covered.is_full() {
        return Err(CoverError::Incomplete(covered.complement().map(|e| g.edge(e)).collect()));
    }
    let mut classes: HashMap<CanonicalForm, MotifClass> = HashMap::new();
    let mut roles = vec![BTreeMap::new(); g.vertex_count()];
    for (index, inst) in cover.instances.iter().enumerate() {
        let invalid = |reason: String| CoverError::InvalidInstance { index, reason };
        let class = classes
            .entry(inst.motif)
            .or_insert_with(|| MotifClass::new(inst.motif));
        let local = local_pattern(inst, g.is_directed()).map_err(invalid)?;
        let perm = find_isomorphism(class.canonical.pattern(), &local)
            .ok_or_else(|| invalid(format!("edges do not form motif {}", inst.motif)))?;
        // Motif vertex i sits at local position perm[i].
        for (i, &pos) in perm.iter().enumerate() {
            let v = inst.vertices[pos] as usize;
            *roles[v].entry((inst.motif, class.orbit_of[i])).or_insert(0) += 1;
        }
    }
    Ok(RoleSequence { roles })
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    motif: String,
    vertices: Vec<u64>,
    edges: Vec<[u64; 2]>,
}

/// Serializes a cover as a JSON array of `{motif, vertices, edges}` using the
/// original vertex labels when given.
pub fn cover_to_json(cover: &Cover, labels: Option<&[u64]>) -> String {
    let lab = |v: u32| labels.map_or(v as u64, |l| l[v as usize]);
    let rows: Vec<JsonInstance> = cover
        .instances
        .iter()
        .map(|i| JsonInstance {
            motif: i.motif.to_string(),
            vertices: i.vertices.iter().map(|&v| lab(v)).collect(),
            edges: i.edges.iter().map(|e| [lab(e.0), lab(e.1)]).collect(),
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("cover serializes")
}

/// Parses the JSON cover format against a loaded graph, mapping labels back
/// to vertex ids. Structural problems are reported per instance; coverage is
/// not checked here (see [`Cover::validate`]).
pub fn cover_from_json(text: &str, lg: &LoadedGraph) -> Result<Cover, CoverError> {
    let rows: Vec<JsonInstance> = serde_json::from_str(text)?;
    let g = &lg.graph;
    let mut instances = Vec::with_capacity(rows.len());
    for (index, row) in rows.into_iter().enumerate() {
        let invalid = |reason: String| CoverError::InvalidInstance { index, reason };
        let motif = named_motif(&row.motif, g.is_directed()).map_err(|e| invalid(e.to_string()))?;
        let map = |x: u64| lg.vertex_of(x).ok_or_else(|| invalid(format!("unknown vertex {x}")));
        let mut vertices = row.vertices.iter().map(|&v| map(v)).collect::<Result<Vec<_>, _>>()?;
        vertices.sort_unstable();
        let mut edges = Vec::with_capacity(row.edges.len());
        for [u, v] in row.edges {
            edges.push(EdgeKey::new(map(u)?, map(v)?, g.is_directed()));
        }
        edges.sort_unstable();
        instances.push(Instance { motif, vertices, edges });
    }
    Ok(Cover::from_instances(g, instances))
}
