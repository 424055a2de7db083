//! Host graph representation and the edge-list text format.
//!
//! Edge lists are UTF-8 text, one edge per line as two whitespace separated
//! integer ids. `#` starts a comment. A `# vertices <N>` header fixes the
//! vertex count (and so allows isolated vertices); without it ids are
//! compacted to `0..N` in ascending order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A normalized edge: sorted endpoints when undirected, `(tail, head)` when directed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey(pub u32, pub u32);

impl EdgeKey {
    pub fn new(u: u32, v: u32, directed: bool) -> Self {
        if directed || u <= v {
            EdgeKey(u, v)
        } else {
            EdgeKey(v, u)
        }
    }

    fn packed(self) -> u64 {
        ((self.0 as u64) << 32) | self.1 as u64
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.0, self.1)
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: u64 },
    #[error("self-loop on vertex {0}")]
    SelfLoopEdge(u32),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// A simple directed or undirected graph on vertices `0..n`.
///
/// Edges are stored sorted and addressed by their index (the edge id).
/// Immutable after construction.
#[derive(Clone)]
pub struct Graph {
    directed: bool,
    n: usize,
    edges: Vec<EdgeKey>,
    index: HashMap<u64, u32>,
    // (neighbor, edge id), sorted by neighbor. Out-arcs when directed.
    out: Vec<Vec<(u32, u32)>>,
    // In-arcs; empty lists when undirected.
    inc: Vec<Vec<(u32, u32)>>,
    // Neighbors in the underlying undirected graph, sorted.
    nbrs: Vec<Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed && self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("directed", &self.directed)
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from raw endpoint pairs. Duplicates collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, directed: bool, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w as u64, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoopEdge(u));
            }
            set.insert(EdgeKey::new(u, v, directed));
        }
        Ok(Self::from_sorted(n, directed, set.into_iter().collect()))
    }

    fn from_sorted(n: usize, directed: bool, edges: Vec<EdgeKey>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); if directed { n } else { 0 }];
        let mut nbrs = vec![Vec::new(); n];
        let mut index = HashMap::with_capacity(edges.len());
        for (id, &e) in edges.iter().enumerate() {
            let id = id as u32;
            let EdgeKey(u, v) = e;
            index.insert(e.packed(), id);
            out[u as usize].push((v, id));
            if directed {
                inc[v as usize].push((u, id));
            } else {
                out[v as usize].push((u, id));
            }
            nbrs[u as usize].push(v);
            nbrs[v as usize].push(u);
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort_unstable();
        }
        for list in nbrs.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        Graph { directed, n, edges, index, out, inc, nbrs }
    }

    pub fn empty(n: usize, directed: bool) -> Self {
        Self::from_sorted(n, directed, Vec::new())
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges, sorted; position in this slice is the edge id.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn edge(&self, id: u32) -> EdgeKey {
        self.edges[id as usize]
    }

    /// Id of the edge `u -> v` (or `{u, v}` when undirected).
    pub fn edge_id(&self, u: u32, v: u32) -> Option<u32> {
        self.index
            .get(&EdgeKey::new(u, v, self.directed).packed())
            .copied()
    }

    /// Same as [`Self::edge_id`] but by binary search in the adjacency of `u`.
    #[inline]
    pub fn find_edge(&self, u: u32, v: u32) -> Option<u32> {
        let list = &self.out[u as usize];
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edge_id(u, v).is_some()
    }

    /// Out-neighbors (all neighbors when undirected) with edge ids.
    pub fn out_edges(&self, v: u32) -> &[(u32, u32)] {
        &self.out[v as usize]
    }

    /// In-neighbors with edge ids; empty for undirected graphs.
    pub fn in_edges(&self, v: u32) -> &[(u32, u32)] {
        if self.directed {
            &self.inc[v as usize]
        } else {
            &[]
        }
    }

    /// Neighbors in the underlying undirected graph.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.nbrs[v as usize]
    }

    pub fn is_adjacent(&self, u: u32, v: u32) -> bool {
        self.nbrs[u as usize].binary_search(&v).is_ok()
    }

    /// Undirected degree, or out-degree plus in-degree when directed.
    pub fn degree(&self, v: u32) -> usize {
        self.out_edges(v).len() + self.in_edges(v).len()
    }

    /// The underlying undirected graph; mutual arcs collapse to one edge.
    pub fn underlying_undirected(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let set: BTreeSet<EdgeKey> = self
            .edges
            .iter()
            .map(|e| EdgeKey::new(e.0, e.1, false))
            .collect();
        Self::from_sorted(self.n, false, set.into_iter().collect())
    }
}

/// A set of edges of one host graph, as a bitset over edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    words: Vec<u64>,
    len: usize,
    universe: usize,
}

impl EdgeSet {
    pub fn new(edge_count: usize) -> Self {
        EdgeSet { words: vec![0; edge_count.div_ceil(64)], len: 0, universe: edge_count }
    }

    pub fn full(edge_count: usize) -> Self {
        let mut s = Self::new(edge_count);
        (0..edge_count as u32).for_each(|e| {
            s.insert(e);
        });
        s
    }

    /// Builds the set from edge keys; keys absent from `g` are returned as errors.
    pub fn from_keys<'a, I>(g: &Graph, keys: I) -> Result<Self, EdgeKey>
    where
        I: IntoIterator<Item = &'a EdgeKey>,
    {
        let mut s = Self::new(g.edge_count());
        for k in keys {
            let id = g.edge_id(k.0, k.1).ok_or(*k)?;
            s.insert(id);
        }
        Ok(s)
    }

    #[inline]
    pub fn contains(&self, e: u32) -> bool {
        self.words[(e / 64) as usize] >> (e % 64) & 1 == 1
    }

    /// Returns true when `e` was not present.
    #[inline]
    pub fn insert(&mut self, e: u32) -> bool {
        let w = &mut self.words[(e / 64) as usize];
        let bit = 1u64 << (e % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.universe
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.universe as u32).filter(|&e| self.contains(e))
    }

    /// Edge ids not in the set.
    pub fn complement(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.universe as u32).filter(|&e| !self.contains(e))
    }
}

/// A graph read from an edge list, with the original vertex labels.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `labels[v]` is the id vertex `v` carried in the input.
    pub labels: Vec<u64>,
    /// Number of input lines that repeated an edge already seen.
    pub duplicates: usize,
}

impl LoadedGraph {
    /// Maps an input label back to the internal vertex id.
    pub fn vertex_of(&self, label: u64) -> Option<u32> {
        self.labels.binary_search(&label).ok().map(|v| v as u32)
    }
}

fn parse_header(rest: &str) -> Option<&str> {
    let mut it = rest.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some("vertices"), Some(n), None) => Some(n),
        _ => None,
    }
}

/// Reads an edge list. See the module docs for the format.
pub fn load_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<LoadedGraph, GraphError> {
    let mut header_n: Option<usize> = None;
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(tok) = parse_header(rest) {
                let n = tok.parse::<usize>().map_err(|_| GraphError::Parse {
                    line: lineno,
                    msg: format!("bad vertex count {tok:?}"),
                })?;
                header_n = Some(n);
            }
            continue;
        }
        let content = trimmed.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let (a, b) = match (toks.next(), toks.next(), toks.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("expected two vertex ids, got {trimmed:?}"),
                })
            }
        };
        let parse = |t: &str| {
            t.parse::<u64>().map_err(|_| GraphError::Parse {
                line: lineno,
                msg: format!("invalid vertex id {t:?}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u == v {
            return Err(GraphError::SelfLoop { line: lineno, vertex: u });
        }
        raw.push((u, v));
    }

    let labels: Vec<u64> = match header_n {
        Some(n) => {
            if let Some(&(u, v)) = raw.iter().find(|&&(u, v)| u.max(v) >= n as u64) {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
            }
            (0..n as u64).collect()
        }
        None => {
            let set: BTreeSet<u64> = raw.iter().flat_map(|&(u, v)| [u, v]).collect();
            set.into_iter().collect()
        }
    };
    if labels.len() > u32::MAX as usize {
        return Err(GraphError::Parse { line: 0, msg: "too many vertices".into() });
    }
    let map = |x: u64| labels.binary_search(&x).expect("label present") as u32;
    let mut set = BTreeSet::new();
    let mut duplicates = 0;
    for &(u, v) in &raw {
        if !set.insert(EdgeKey::new(map(u), map(v), directed)) {
            duplicates += 1;
        }
    }
    let graph = Graph::from_sorted(labels.len(), directed, set.into_iter().collect());
    Ok(LoadedGraph { graph, labels, duplicates })
}

/// Writes `g` as an edge list with edges in sorted order. A `# vertices`
/// header is emitted only when some vertex is isolated.
pub fn write_edge_list<W: Write>(g: &Graph, mut sink: W) -> io::Result<()> {
    if (0..g.n as u32).any(|v| g.degree(v) == 0) {
        writeln!(sink, "# vertices {}", g.n)?;
    }
    for e in &g.edges {
        writeln!(sink, "{} {}", e.0, e.1)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str, directed: bool) -> Result<LoadedGraph, GraphError> {
        load_edge_list(text.as_bytes(), directed)
    }

    fn written(g: &Graph) -> String {
        let mut buf = Vec::new();
        write_edge_list(g, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn triangle_loads() {
        let g = load("0 1\n1 2\n0 2\n", false).unwrap().graph;
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(2, 0));
    }

    #[test]
    fn duplicates_collapse() {
        let lg = load("0 1\n0 1\n1 0\n", false).unwrap();
        assert_eq!(lg.graph.edge_count(), 1);
        assert_eq!(lg.duplicates, 2);
        let lg = load("0 1\n1 0\n", true).unwrap();
        assert_eq!(lg.graph.edge_count(), 2);
    }

    #[test]
    fn self_loop_rejected() {
        match load("0 1\n3 3\n", false) {
            Err(GraphError::SelfLoop { line: 2, vertex: 3 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_number() {
        match load("0 1\n# ok\n1 x\n", false) {
            Err(GraphError::Parse { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(load("1 2 3\n", false), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(load("-1 2\n", false), Err(GraphError::Parse { line: 1, .. })));
    }

    #[test]
    fn ids_are_compacted() {
        let lg = load("10 20\n20 35\n", false).unwrap();
        assert_eq!(lg.graph.vertex_count(), 3);
        assert_eq!(lg.labels, vec![10, 20, 35]);
        assert!(lg.graph.has_edge(1, 2));
        assert_eq!(lg.vertex_of(35), Some(2));
    }

    #[test]
    fn header_sets_vertex_count() {
        let lg = load("# vertices 5\n0 3\n", false).unwrap();
        assert_eq!(lg.graph.vertex_count(), 5);
        assert!(lg.graph.has_edge(0, 3));
        assert!(matches!(
            load("# vertices 2\n0 3\n", false),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 2 })
        ));
    }

    #[test]
    fn write_sorted() {
        let g = load("1 2\n2 0\n0 1\n", false).unwrap().graph;
        assert_eq!(written(&g), "0 1\n0 2\n1 2\n");
        assert_eq!(written(&Graph::empty(0, false)), "");
    }

    #[test]
    fn isolated_vertices_round_trip() {
        let g = Graph::from_edges(4, false, [(0, 2)]).unwrap();
        let text = written(&g);
        assert!(text.starts_with("# vertices 4\n"));
        assert_eq!(load(&text, false).unwrap().graph, g);
    }

    #[test]
    fn underlying_of_directed() {
        let g = Graph::from_edges(2, true, [(0, 1), (1, 0)]).unwrap();
        let u = g.underlying_undirected();
        assert!(!u.is_directed());
        assert_eq!(u.edge_count(), 1);
        let cyc = Graph::from_edges(3, true, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(cyc.underlying_undirected().edge_count(), 3);
        assert_eq!(Graph::empty(4, true).underlying_undirected().edge_count(), 0);
    }

    #[test]
    fn degree_sums() {
        let g = Graph::from_edges(4, true, [(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
        let total: usize = (0..4).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edge_count());
        assert_eq!(g.out_edges(0).len() + g.in_edges(0).len(), 3);
    }
}
