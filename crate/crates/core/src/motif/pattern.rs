//! Small labeled graphs (up to 8 vertices) packed into a `u64` adjacency mask.
//!
//! Each ordered pair `(i, j)` (directed) or unordered pair `i < j`
//! (undirected) owns one bit. Bit positions follow row-major pair order, so
//! the layout depends only on the vertex count and directedness.

use std::sync::OnceLock;

pub const MAX_PATTERN_SIZE: usize = 8;

/// Bit layout and permutation tables for one `(size, directed)` shape.
pub struct Layout {
    pub size: usize,
    pub directed: bool,
    pairs: Vec<(u8, u8)>,
    index: [[u8; MAX_PATTERN_SIZE]; MAX_PATTERN_SIZE],
    perms: OnceLock<PermTable>,
}

/// Every permutation of `0..size` plus, for each, the induced map on bits.
pub struct PermTable {
    pub perms: Vec<[u8; MAX_PATTERN_SIZE]>,
    bit_maps: Vec<u8>,
    bits: usize,
}

const NO_BIT: u8 = u8::MAX;

impl Layout {
    fn new(size: usize, directed: bool) -> Self {
        let mut pairs = Vec::new();
        let mut index = [[NO_BIT; MAX_PATTERN_SIZE]; MAX_PATTERN_SIZE];
        for i in 0..size {
            let start = if directed { 0 } else { i + 1 };
            for j in start..size {
                if i == j {
                    continue;
                }
                index[i][j] = pairs.len() as u8;
                if !directed {
                    index[j][i] = pairs.len() as u8;
                }
                pairs.push((i as u8, j as u8));
            }
        }
        Layout { size, directed, pairs, index, perms: OnceLock::new() }
    }

    /// Shared layout for the given shape.
    pub fn get(size: usize, directed: bool) -> &'static Layout {
        static LAYOUTS: OnceLock<Vec<Layout>> = OnceLock::new();
        assert!(size <= MAX_PATTERN_SIZE, "pattern size {size} above {MAX_PATTERN_SIZE}");
        let all = LAYOUTS.get_or_init(|| {
            (0..=MAX_PATTERN_SIZE)
                .flat_map(|k| [Layout::new(k, false), Layout::new(k, true)])
                .collect()
        });
        &all[size * 2 + directed as usize]
    }

    /// Number of bits (possible edges).
    pub fn bits(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, bit: usize) -> (u8, u8) {
        self.pairs[bit]
    }

    /// Bit for edge `i -> j` (or `{i, j}`).
    pub fn bit(&self, i: usize, j: usize) -> usize {
        let b = self.index[i][j];
        debug_assert!(b != NO_BIT, "no bit for pair ({i}, {j})");
        b as usize
    }

    pub fn perm_table(&self) -> &PermTable {
        self.perms.get_or_init(|| PermTable::new(self))
    }

    /// Edges of `mask` as vertex pairs in bit order.
    pub fn edges(&self, mask: u64) -> impl Iterator<Item = (u8, u8)> + '_ {
        BitIter(mask).map(move |b| self.pairs[b])
    }

    /// Adjacency of the underlying undirected graph, one `u8` row per vertex.
    pub fn undirected_rows(&self, mask: u64) -> [u8; MAX_PATTERN_SIZE] {
        let mut rows = [0u8; MAX_PATTERN_SIZE];
        for (i, j) in self.edges(mask) {
            rows[i as usize] |= 1 << j;
            rows[j as usize] |= 1 << i;
        }
        rows
    }

    /// Bitset of vertices touched by at least one edge.
    pub fn support(&self, mask: u64) -> u8 {
        self.edges(mask).fold(0u8, |acc, (i, j)| acc | (1 << i) | (1 << j))
    }

    /// True when the underlying undirected graph is connected (weak
    /// connectivity). Graphs on fewer than two vertices count as connected.
    pub fn is_connected(&self, mask: u64) -> bool {
        let rows = self.undirected_rows(mask);
        let all = if self.size == 8 { u8::MAX } else { (1u8 << self.size) - 1 };
        reach(&rows, all, 0) == all
    }

    /// True when connected, at least three vertices, and no single vertex
    /// removal disconnects the underlying undirected graph.
    pub fn is_biconnected(&self, mask: u64) -> bool {
        if self.size < 3 || !self.is_connected(mask) {
            return false;
        }
        let rows = self.undirected_rows(mask);
        let all = if self.size == 8 { u8::MAX } else { (1u8 << self.size) - 1 };
        (0..self.size).all(|cut| {
            let alive = all & !(1 << cut);
            let start = if cut == 0 { 1 } else { 0 };
            reach(&rows, alive, start) == alive
        })
    }
}

fn reach(rows: &[u8; MAX_PATTERN_SIZE], alive: u8, start: usize) -> u8 {
    if alive == 0 {
        return 0;
    }
    let mut seen = 1u8 << start;
    let mut frontier = seen;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let next = rows[v] & alive & !seen;
        seen |= next;
        frontier |= next;
    }
    seen
}

impl PermTable {
    fn new(layout: &Layout) -> Self {
        let k = layout.size;
        let mut perms = Vec::new();
        let mut cur: Vec<u8> = (0..k as u8).collect();
        loop {
            let mut p = [0u8; MAX_PATTERN_SIZE];
            p[..k].copy_from_slice(&cur);
            perms.push(p);
            if !next_permutation(&mut cur) {
                break;
            }
        }
        let bits = layout.bits();
        let mut bit_maps = Vec::with_capacity(perms.len() * bits);
        for p in &perms {
            for b in 0..bits {
                let (i, j) = layout.pairs[b];
                bit_maps.push(layout.bit(p[i as usize] as usize, p[j as usize] as usize) as u8);
            }
        }
        PermTable { perms, bit_maps, bits }
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    /// Relabels `mask` by permutation `p` (vertex `i` becomes `perms[p][i]`).
    #[inline]
    pub fn apply(&self, p: usize, mask: u64) -> u64 {
        let map = &self.bit_maps[p * self.bits..(p + 1) * self.bits];
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            out |= 1u64 << map[b];
        }
        out
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Iterator over set bit positions, lowest first.
#[derive(Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}
