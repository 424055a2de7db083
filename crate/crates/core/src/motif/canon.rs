//! Canonical forms and automorphism groups by exhaustive relabeling.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::pattern::{BitIter, Layout, MAX_PATTERN_SIZE};
use super::MotifError;
use crate::graph::Graph;

/// A labeled small graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub size: usize,
    pub directed: bool,
    pub mask: u64,
}

impl Pattern {
    pub fn from_edges(size: usize, directed: bool, edges: &[(usize, usize)]) -> Result<Self, MotifError> {
        if size > MAX_PATTERN_SIZE {
            return Err(MotifError::UnsupportedSize(size));
        }
        let layout = Layout::get(size, directed);
        let mut mask = 0u64;
        for &(i, j) in edges {
            if i >= size || j >= size {
                return Err(MotifError::Invalid(format!("edge ({i}, {j}) outside {size} vertices")));
            }
            if i == j {
                return Err(MotifError::Invalid(format!("self-loop on {i}")));
            }
            mask |= 1 << layout.bit(i, j);
        }
        Ok(Pattern { size, directed, mask })
    }

    pub fn from_graph(g: &Graph) -> Result<Self, MotifError> {
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|e| (e.0 as usize, e.1 as usize))
            .collect();
        Self::from_edges(g.vertex_count(), g.is_directed(), &edges)
    }

    pub fn layout(&self) -> &'static Layout {
        Layout::get(self.size, self.directed)
    }

    pub fn edge_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn edges(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        self.layout().edges(self.mask)
    }

    /// Applies a vertex relabeling `i -> perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Pattern {
        let layout = self.layout();
        let mask = self
            .edges()
            .fold(0u64, |m, (i, j)| m | 1 << layout.bit(perm[i as usize], perm[j as usize]));
        Pattern { mask, ..*self }
    }

    pub fn is_connected(&self) -> bool {
        self.layout().is_connected(self.mask)
    }
}

/// Canonical representative of an isomorphism class: the relabeling whose
/// mask is numerically smallest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalForm(Pattern);

/// Orders classes by size, then edge count, then canonical mask.
impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |c: &Self| (c.0.size, c.0.edge_count(), c.0.mask, c.0.directed);
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl CanonicalForm {
    pub fn pattern(&self) -> &Pattern {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size
    }

    pub fn directed(&self) -> bool {
        self.0.directed
    }

    pub fn mask(&self) -> u64 {
        self.0.mask
    }

    pub fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    /// Wraps a mask already known to be canonical.
    pub(crate) fn from_canonical_mask(size: usize, directed: bool, mask: u64) -> Self {
        CanonicalForm(Pattern { size, directed, mask })
    }
}

/// Canonical form of `p`: minimum mask over all relabelings.
pub fn canonical_form(p: &Pattern) -> CanonicalForm {
    let table = p.layout().perm_table();
    let best = (0..table.len()).map(|i| table.apply(i, p.mask)).min().unwrap_or(p.mask);
    CanonicalForm(Pattern { mask: best, ..*p })
}

/// Canonical form for a graph given as a `Graph` value (at most 8 vertices).
pub fn canonical_form_of_graph(g: &Graph) -> Result<CanonicalForm, MotifError> {
    Ok(canonical_form(&Pattern::from_graph(g)?))
}

/// True when no relabeling of `mask` is smaller. Exits at the first smaller image.
pub(crate) fn is_canonical_mask(layout: &Layout, mask: u64) -> bool {
    let table = layout.perm_table();
    (1..table.len()).all(|i| table.apply(i, mask) >= mask)
}

/// Order of the automorphism group and the vertex orbits it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphisms {
    pub order: u64,
    /// Orbits sorted by smallest member; members ascending.
    pub orbits: Vec<Vec<u8>>,
    /// `orbit_of[v]` indexes `orbits`.
    pub orbit_of: Vec<u8>,
}

pub fn automorphism_group(p: &Pattern) -> Automorphisms {
    let k = p.size;
    let table = p.layout().perm_table();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let mut order = 0u64;
    for i in 0..table.len() {
        if table.apply(i, p.mask) != p.mask {
            continue;
        }
        order += 1;
        for (v, &img) in table.perms[i][..k].iter().enumerate() {
            let (a, b) = (find(&mut parent, v), find(&mut parent, img as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    if k <= 1 {
        order = 1;
    }
    let mut orbits: Vec<Vec<u8>> = Vec::new();
    let mut orbit_of = vec![0u8; k];
    let mut root_slot = vec![usize::MAX; k];
    for v in 0..k {
        let r = find(&mut parent, v);
        if root_slot[r] == usize::MAX {
            root_slot[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[root_slot[r]].push(v as u8);
        orbit_of[v] = root_slot[r] as u8;
    }
    Automorphisms { order, orbits, orbit_of }
}

/// A relabeling `perm` with `pattern.relabel(perm) == target`, if the two are
/// isomorphic.
pub fn find_isomorphism(pattern: &Pattern, target: &Pattern) -> Option<Vec<usize>> {
    if pattern.size != target.size
        || pattern.directed != target.directed
        || pattern.edge_count() != target.edge_count()
    {
        return None;
    }
    let table = pattern.layout().perm_table();
    (0..table.len())
        .find(|&i| table.apply(i, pattern.mask) == target.mask)
        .map(|i| table.perms[i][..pattern.size].iter().map(|&x| x as usize).collect())
}

impl fmt::Display for CanonicalForm {
    /// `u3:01.02.12` style: direction flag, size, then dot separated edges.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pattern(&self.0, f)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_pattern(self, f)
    }
}

fn fmt_pattern(p: &Pattern, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{}{}:", if p.directed { 'd' } else { 'u' }, p.size)?;
    let layout = p.layout();
    for (n, b) in BitIter(p.mask).enumerate() {
        let (i, j) = layout.pair(b);
        if n > 0 {
            f.write_str(".")?;
        }
        write!(f, "{i}{j}")?;
    }
    Ok(())
}

impl FromStr for Pattern {
    type Err = MotifError;

    fn from_str(s: &str) -> Result<Self, MotifError> {
        let bad = || MotifError::Invalid(format!("bad motif string {s:?}"));
        let s = s.trim();
        let (head, body) = s.split_once(':').ok_or_else(bad)?;
        let mut chars = head.chars();
        let directed = match chars.next() {
            Some('u') => false,
            Some('d') => true,
            _ => return Err(bad()),
        };
        let size: usize = chars.as_str().parse().map_err(|_| bad())?;
        if size > MAX_PATTERN_SIZE {
            return Err(MotifError::UnsupportedSize(size));
        }
        let mut edges = Vec::new();
        if !body.is_empty() {
            for tok in body.split('.') {
                let d: Vec<usize> = tok
                    .chars()
                    .map(|c| c.to_digit(10).map(|d| d as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(bad)?;
                if d.len() != 2 {
                    return Err(bad());
                }
                edges.push((d[0], d[1]));
            }
        }
        Pattern::from_edges(size, directed, &edges)
    }
}

impl FromStr for CanonicalForm {
    type Err = MotifError;

    /// Parses any labeling and canonicalizes it.
    fn from_str(s: &str) -> Result<Self, MotifError> {
        Ok(canonical_form(&s.parse::<Pattern>()?))
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(size: usize, directed: bool, edges: &[(usize, usize)]) -> Pattern {
        Pattern::from_edges(size, directed, edges).unwrap()
    }

    #[test]
    fn triangle_relabel_invariant() {
        let t = pat(3, false, &[(0, 1), (1, 2), (0, 2)]);
        let moved = t.relabel(&[2, 0, 1]);
        assert_eq!(canonical_form(&t), canonical_form(&moved));
        let path = pat(3, false, &[(0, 1), (1, 2)]);
        assert_ne!(canonical_form(&t), canonical_form(&path));
    }

    #[test]
    fn ffl_single_canonical_form() {
        let ffl = pat(3, true, &[(0, 1), (0, 2), (1, 2)]);
        // All 6 relabelings, computed independently of the perm tables.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let forms: std::collections::HashSet<_> =
            perms.iter().map(|p| canonical_form(&ffl.relabel(p))).collect();
        assert_eq!(forms.len(), 1);
        let images: std::collections::HashSet<u64> = perms.iter().map(|p| ffl.relabel(p).mask).collect();
        assert_eq!(images.len(), 6);
        assert_eq!(canonical_form(&ffl).mask(), *images.iter().min().unwrap());
    }

    #[test]
    fn automorphisms_small() {
        let tri = automorphism_group(&pat(3, false, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!(tri.order, 6);
        assert_eq!(tri.orbits, vec![vec![0, 1, 2]]);

        let claw = automorphism_group(&pat(4, false, &[(0, 1), (0, 2), (0, 3)]));
        assert_eq!(claw.order, 6);
        assert_eq!(claw.orbits, vec![vec![0], vec![1, 2, 3]]);

        let cyc = automorphism_group(&pat(3, true, &[(0, 1), (1, 2), (2, 0)]));
        assert_eq!(cyc.order, 3);
        assert_eq!(cyc.orbits.len(), 1);

        assert_eq!(automorphism_group(&pat(2, false, &[(0, 1)])).order, 2);
        assert_eq!(automorphism_group(&pat(2, true, &[(0, 1)])).order, 1);
    }

    #[test]
    fn string_round_trip() {
        let ffl = canonical_form(&pat(3, true, &[(0, 1), (0, 2), (1, 2)]));
        let s = ffl.to_string();
        assert!(s.starts_with("d3:"));
        assert_eq!(s.parse::<CanonicalForm>().unwrap(), ffl);
        assert_eq!("u2:01".parse::<CanonicalForm>().unwrap().to_string(), "u2:01");
        assert!("x3:01".parse::<Pattern>().is_err());
        assert!("u3:0".parse::<Pattern>().is_err());
        assert!("u3:03".parse::<Pattern>().is_err());
        assert!(matches!("u9:01".parse::<Pattern>(), Err(MotifError::UnsupportedSize(9))));
    }

    #[test]
    fn isomorphism_maps_pattern() {
        let a = pat(4, false, &[(0, 1), (0, 2), (0, 3)]);
        let b = pat(4, false, &[(2, 0), (2, 1), (2, 3)]);
        let perm = find_isomorphism(&a, &b).unwrap();
        assert_eq!(a.relabel(&perm), b);
        assert_eq!(perm[0], 2);
    }

    #[test]
    fn oversized_graph_rejected() {
        let g = Graph::from_edges(9, false, [(0, 1)]).unwrap();
        assert!(matches!(canonical_form_of_graph(&g), Err(MotifError::UnsupportedSize(9))));
    }
}
