//! Instances of small motifs inside a host graph.
//!
//! Connected vertex sets are enumerated first (ESU-style extension from the
//! smallest vertex of each set), then every spanning edge subset of the
//! induced subgraph is classified against the candidate motifs of that size.
//! Instances are non-induced: one vertex set can host several instances of
//! the same motif, each identified by its edge set.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeKey, EdgeSet, Graph};
use crate::motif::pattern::{BitIter, Layout};
use crate::motif::{CanonicalForm, MotifClass};

pub const MAX_ENUMERATION_SIZE: usize = 6;

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error("motif size {0} exceeds the enumeration limit of {MAX_ENUMERATION_SIZE}")]
    TooLarge(usize),
    #[error("motif {0} is disconnected")]
    Disconnected(String),
    #[error("motif directedness does not match the graph")]
    Directedness,
}

/// One concrete subgraph realizing a motif.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub motif: CanonicalForm,
    /// Sorted vertex ids.
    pub vertices: Vec<u32>,
    /// Sorted edges.
    pub edges: Vec<EdgeKey>,
}

impl Instance {
    /// Builds an instance from host edge ids; vertices are derived.
    pub fn from_edge_ids(g: &Graph, motif: CanonicalForm, ids: &[u32]) -> Self {
        let mut edges: Vec<EdgeKey> = ids.iter().map(|&e| g.edge(e)).collect();
        edges.sort_unstable();
        let mut vertices: Vec<u32> = edges.iter().flat_map(|e| [e.0, e.1]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        Instance { motif, vertices, edges }
    }
}

/// Connected vertex sets of a fixed size, each yielded once, sorted ascending.
pub struct ConnectedSets<'g> {
    g: &'g Graph,
    k: usize,
    next_root: u32,
    end: u32,
    root: u32,
    sub: Vec<u32>,
    // One extension list per element of `sub`.
    stack: Vec<Vec<u32>>,
}

impl<'g> ConnectedSets<'g> {
    pub fn new(g: &'g Graph, k: usize) -> Self {
        Self::with_roots(g, k, 0..g.vertex_count() as u32)
    }

    /// Only sets whose smallest vertex lies in `roots`.
    pub fn with_roots(g: &'g Graph, k: usize, roots: Range<u32>) -> Self {
        ConnectedSets {
            g,
            k,
            next_root: roots.start,
            end: roots.end,
            root: 0,
            sub: Vec::with_capacity(k),
            stack: Vec::with_capacity(k),
        }
    }

    fn excluded(&self, u: u32) -> bool {
        u <= self.root || self.sub.iter().any(|&s| s == u || self.g.is_adjacent(s, u))
    }
}

impl Iterator for ConnectedSets<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.k == 0 {
            return None;
        }
        loop {
            if self.stack.is_empty() {
                if self.next_root >= self.end {
                    return None;
                }
                self.root = self.next_root;
                self.next_root += 1;
                self.sub.clear();
                self.sub.push(self.root);
                if self.k == 1 {
                    return Some(self.sub.clone());
                }
                let ext: Vec<u32> = self
                    .g
                    .neighbors(self.root)
                    .iter()
                    .copied()
                    .filter(|&u| u > self.root)
                    .collect();
                self.stack.push(ext);
                continue;
            }
            let Some(w) = self.stack.last_mut().unwrap().pop() else {
                self.stack.pop();
                self.sub.pop();
                continue;
            };
            if self.sub.len() + 1 == self.k {
                let mut out = self.sub.clone();
                out.push(w);
                out.sort_unstable();
                return Some(out);
            }
            let mut ext = self.stack.last().unwrap().clone();
            for &u in self.g.neighbors(w) {
                if !self.excluded(u) {
                    ext.push(u);
                }
            }
            self.sub.push(w);
            self.stack.push(ext);
        }
    }
}

/// Every connected (in the underlying undirected sense) vertex set of size `k`.
pub fn enumerate_connected_vertex_sets(g: &Graph, k: usize) -> ConnectedSets<'_> {
    ConnectedSets::new(g, k)
}

enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

const NO_CLASS: u32 = u32::MAX;
const DENSE_BITS: usize = 20;

/// Classifies edge subsets of a `k`-vertex set against a group of motifs
/// of size `k`.
pub(crate) struct LocalMatcher {
    k: usize,
    directed: bool,
    layout: &'static Layout,
    lookup: Lookup,
    copies: Vec<(u64, u32)>,
}

impl LocalMatcher {
    /// All classes must share size and directedness.
    pub(crate) fn new(classes: &[&MotifClass]) -> Self {
        let first = classes[0];
        let (k, directed) = (first.size, first.directed);
        let layout = Layout::get(k, directed);
        let table = layout.perm_table();
        let mut copies = Vec::new();
        let mut lookup = if layout.bits() <= DENSE_BITS {
            Lookup::Dense(vec![NO_CLASS; 1 << layout.bits()])
        } else {
            Lookup::Sparse(HashMap::new())
        };
        for (slot, c) in classes.iter().enumerate() {
            debug_assert!(c.size == k && c.directed == directed);
            for p in 0..table.len() {
                let img = table.apply(p, c.canonical.mask());
                let fresh = match &mut lookup {
                    Lookup::Dense(v) => {
                        let e = &mut v[img as usize];
                        let fresh = *e == NO_CLASS;
                        *e = slot as u32;
                        fresh
                    }
                    Lookup::Sparse(m) => m.insert(img, slot as u32).is_none(),
                };
                if fresh {
                    copies.push((img, slot as u32));
                }
            }
        }
        LocalMatcher { k, directed, layout, lookup, copies }
    }

    #[inline]
    fn class_of(&self, mask: u64) -> u32 {
        match &self.lookup {
            Lookup::Dense(v) => v[mask as usize],
            Lookup::Sparse(m) => m.get(&mask).copied().unwrap_or(NO_CLASS),
        }
    }

    /// Induced local mask of `set`, filling `bit_edges` with host edge ids.
    fn induced(&self, g: &Graph, set: &[u32], bit_edges: &mut [u32]) -> u64 {
        let mut mask = 0u64;
        for i in 0..self.k {
            let j0 = if self.directed { 0 } else { i + 1 };
            for j in j0..self.k {
                if i == j {
                    continue;
                }
                if let Some(e) = g.find_edge(set[i], set[j]) {
                    let b = self.layout.bit(i, j);
                    mask |= 1 << b;
                    bit_edges[b] = e;
                }
            }
        }
        mask
    }

    /// Calls `f(slot, mask)` for every edge subset of `induced` that is a
    /// labeled copy of one of the classes.
    fn for_each_match(&self, induced: u64, mut f: impl FnMut(u32, u64)) {
        let e = induced.count_ones() as usize;
        let min_edges = self.k as u32 - 1;
        if e < 63 && (1usize << e) <= self.copies.len() {
            let mut sub = induced;
            while sub != 0 {
                if sub.count_ones() >= min_edges {
                    let c = self.class_of(sub);
                    if c != NO_CLASS {
                        f(c, sub);
                    }
                }
                sub = (sub - 1) & induced;
            }
        } else {
            for &(m, c) in &self.copies {
                if m & !induced == 0 {
                    f(c, m);
                }
            }
        }
    }
}

fn check_motif(g: &Graph, m: &MotifClass) -> Result<(), EnumerationError> {
    if m.size > MAX_ENUMERATION_SIZE {
        return Err(EnumerationError::TooLarge(m.size));
    }
    if !m.connected {
        return Err(EnumerationError::Disconnected(m.id()));
    }
    if m.directed != g.is_directed() {
        return Err(EnumerationError::Directedness);
    }
    Ok(())
}

/// Lazy stream of the instances of one motif.
pub struct InstanceStream<'g> {
    g: &'g Graph,
    motif: CanonicalForm,
    sets: ConnectedSets<'g>,
    matcher: LocalMatcher,
    covered: Option<&'g EdgeSet>,
    pending: Vec<Instance>,
    bit_edges: Vec<u32>,
}

impl Iterator for InstanceStream<'_> {
    type Item = Instance;

    fn next(&mut self) -> Option<Instance> {
        loop {
            if let Some(i) = self.pending.pop() {
                return Some(i);
            }
            let set = self.sets.next()?;
            let induced = self.matcher.induced(self.g, &set, &mut self.bit_edges);
            let mut found = Vec::new();
            self.matcher.for_each_match(induced, |_, mask| found.push(mask));
            // Reverse so instances pop in discovery order.
            for mask in found.into_iter().rev() {
                let ids: Vec<u32> = BitIter(mask).map(|b| self.bit_edges[b]).collect();
                if let Some(cov) = self.covered {
                    if ids.iter().all(|&e| cov.contains(e)) {
                        continue;
                    }
                }
                self.pending.push(Instance::from_edge_ids(self.g, self.motif, &ids));
            }
        }
    }
}

/// Instances of `m` in `g`. With `covered`, instances made only of covered
/// edges are skipped.
pub fn find_instances<'g>(
    g: &'g Graph,
    m: &MotifClass,
    covered: Option<&'g EdgeSet>,
) -> Result<InstanceStream<'g>, EnumerationError> {
    check_motif(g, m)?;
    Ok(InstanceStream {
        g,
        motif: m.canonical,
        sets: ConnectedSets::new(g, m.size),
        matcher: LocalMatcher::new(&[m]),
        covered,
        pending: Vec::new(),
        bit_edges: vec![0; Layout::get(m.size, m.directed).bits()],
    })
}

pub fn count_instances(g: &Graph, m: &MotifClass) -> Result<u64, EnumerationError> {
    Ok(find_instances(g, m, None)?.count() as u64)
}

/// Instances of one motif stored flat: `edges[i*stride..(i+1)*stride]` are
/// the host edge ids of instance `i`.
#[derive(Debug, Clone, Default)]
pub(crate) struct InstanceTable {
    pub stride: usize,
    pub edges: Vec<u32>,
}

impl InstanceTable {
    pub fn len(&self) -> usize {
        self.edges.len().checked_div(self.stride).unwrap_or(0)
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.edges[i * self.stride..(i + 1) * self.stride]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.edges.chunks_exact(self.stride.max(1))
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&[u32]) -> bool) {
        let s = self.stride;
        let mut w = 0;
        for r in 0..self.len() {
            if keep(&self.edges[r * s..(r + 1) * s]) {
                self.edges.copy_within(r * s..(r + 1) * s, w * s);
                w += 1;
            }
        }
        self.edges.truncate(w * s);
    }
}

/// Result of a census for one motif.
#[derive(Debug, Clone)]
pub(crate) enum CensusEntry {
    Stored(InstanceTable),
    /// More instances than the cap; only the count is known.
    OverCap(#[allow(dead_code)] usize),
}

const ROOT_CHUNK: u32 = 256;

/// Enumerates instances of several motifs at once, grouped by size and
/// parallel over root chunks. Chunk results merge in root order, so the
/// output does not depend on the worker count. Motifs with more than `cap`
/// instances are reported by count only.
pub(crate) fn census(
    g: &Graph,
    classes: &[&MotifClass],
    cap: usize,
    covered: Option<&EdgeSet>,
) -> Vec<CensusEntry> {
    let mut out: Vec<Option<CensusEntry>> = vec![None; classes.len()];
    let mut sizes: Vec<usize> = classes.iter().map(|c| c.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    for k in sizes {
        let slots: Vec<usize> = (0..classes.len()).filter(|&i| classes[i].size == k).collect();
        let group: Vec<&MotifClass> = slots.iter().map(|&i| classes[i]).collect();
        let matcher = LocalMatcher::new(&group);
        let counters: Vec<AtomicUsize> = group.iter().map(|_| AtomicUsize::new(0)).collect();
        let n = g.vertex_count() as u32;
        let chunks: Vec<Range<u32>> = (0..n)
            .step_by(ROOT_CHUNK as usize)
            .map(|s| s..(s + ROOT_CHUNK).min(n))
            .collect();
        let bits = matcher.layout.bits();
        let parts: Vec<Vec<Vec<u32>>> = chunks
            .into_par_iter()
            .map(|roots| {
                let mut local: Vec<Vec<u32>> = vec![Vec::new(); group.len()];
                let mut bit_edges = vec![0u32; bits];
                for set in ConnectedSets::with_roots(g, k, roots) {
                    let induced = matcher.induced(g, &set, &mut bit_edges);
                    matcher.for_each_match(induced, |slot, mask| {
                        let slot = slot as usize;
                        if let Some(cov) = covered {
                            if BitIter(mask).all(|b| cov.contains(bit_edges[b])) {
                                return;
                            }
                        }
                        let seen = counters[slot].fetch_add(1, Ordering::Relaxed);
                        if seen < cap {
                            local[slot].extend(BitIter(mask).map(|b| bit_edges[b]));
                        }
                    });
                }
                local
            })
            .collect();
        for (gi, &slot) in slots.iter().enumerate() {
            let total = counters[gi].load(Ordering::Relaxed);
            let entry = if total > cap {
                CensusEntry::OverCap(total)
            } else {
                let mut edges = Vec::with_capacity(total * group[gi].edge_count);
                for p in &parts {
                    edges.extend_from_slice(&p[gi]);
                }
                CensusEntry::Stored(InstanceTable { stride: group[gi].edge_count, edges })
            };
            out[slot] = Some(entry);
        }
    }
    out.into_iter().map(|e| e.expect("every class visited")).collect()
}
