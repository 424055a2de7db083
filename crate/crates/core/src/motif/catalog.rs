use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;

use super::canon::{automorphism_group, canonical_form, is_canonical_mask, CanonicalForm, Pattern};
use super::pattern::{Layout, MAX_PATTERN_SIZE};
use super::MotifError;
use crate::info::numerics::{log2_binomial_exact, log_star, LogStarVariant};

/// One isomorphism class with everything the cost model needs.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifClass {
    pub canonical: CanonicalForm,
    pub size: usize,
    pub edge_count: usize,
    pub directed: bool,
    pub aut_size: u64,
    pub orbits: Vec<Vec<u8>>,
    /// Orbit index of each vertex of the canonical labeling.
    pub orbit_of: Vec<u8>,
    pub connected: bool,
    pub biconnected: bool,
    /// Edge-list code length of the motif, in bits.
    pub epsilon_bits: f64,
}

impl MotifClass {
    pub fn new(canonical: CanonicalForm) -> Self {
        let p = *canonical.pattern();
        let aut = automorphism_group(&p);
        let connected = p.size >= 2 && p.is_connected();
        let biconnected = connected && biconnected_unchecked(&p);
        let mut class = MotifClass {
            canonical,
            size: p.size,
            edge_count: p.edge_count(),
            directed: p.directed,
            aut_size: aut.order,
            orbits: aut.orbits,
            orbit_of: aut.orbit_of,
            connected,
            biconnected,
            epsilon_bits: 0.0,
        };
        class.epsilon_bits = effective_complexity(&class, LogStarVariant::Universal);
        class
    }

    pub fn from_pattern(p: &Pattern) -> Self {
        Self::new(canonical_form(p))
    }

    /// The single-edge motif (one arc when directed).
    pub fn single_edge(directed: bool) -> Self {
        let p = Pattern::from_edges(2, directed, &[(0, 1)]).expect("valid edge");
        Self::from_pattern(&p)
    }

    pub fn is_single_edge(&self) -> bool {
        self.size == 2 && self.edge_count == 1
    }

    pub fn id(&self) -> String {
        self.canonical.to_string()
    }
}

/// Edge-list code length: `log*|V| + log*|E| + log2 C(slots, |E|)` where
/// `slots` is the number of vertex pairs (ordered when directed).
pub fn effective_complexity(m: &MotifClass, variant: LogStarVariant) -> f64 {
    let v = m.size as u64;
    let e = m.edge_count as u64;
    let slots = if m.directed { v * (v - 1) } else { v * (v - 1) / 2 };
    log_star(v, variant).unwrap_or(0.0) + log_star(e.max(1), variant).unwrap_or(0.0) + log2_binomial_exact(slots, e)
}

// Two-vertex motifs count as biconnected (both the single arc and the
// mutual pair); this convention gives 7585 directed classes up to size 5.
fn biconnected_unchecked(p: &Pattern) -> bool {
    p.size == 2 || p.layout().is_biconnected(p.mask)
}

/// Biconnectivity of a connected pattern, on its underlying undirected graph.
pub fn is_biconnected(p: &Pattern) -> Result<bool, MotifError> {
    if p.size < 2 || !p.is_connected() {
        return Err(MotifError::Disconnected);
    }
    Ok(biconnected_unchecked(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFilter {
    Connected,
    Biconnected,
}

impl FromStr for CatalogFilter {
    type Err = MotifError;

    fn from_str(s: &str) -> Result<Self, MotifError> {
        match s {
            "connected" => Ok(CatalogFilter::Connected),
            "biconnected" => Ok(CatalogFilter::Biconnected),
            _ => Err(MotifError::Invalid(format!("unknown filter {s:?}"))),
        }
    }
}

impl fmt::Display for CatalogFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogFilter::Connected => "connected",
            CatalogFilter::Biconnected => "biconnected",
        })
    }
}

/// An ordered, deduplicated set of candidate motifs.
#[derive(Debug, Clone)]
pub struct MotifCatalog {
    directed: bool,
    classes: Vec<MotifClass>,
    index: HashMap<CanonicalForm, usize>,
}

impl MotifCatalog {
    /// Builds a catalog from arbitrary classes: deduplicates, sorts by
    /// canonical form (size, edge count, mask) and injects the single-edge motif if missing.
    /// The flag reports whether that injection happened.
    pub fn from_classes<I>(directed: bool, classes: I) -> Result<(Self, bool), MotifError>
    where
        I: IntoIterator<Item = MotifClass>,
    {
        let mut seen = HashMap::new();
        let mut list = Vec::new();
        for c in classes {
            if c.directed != directed {
                return Err(MotifError::Invalid(format!(
                    "motif {} does not match catalog directedness",
                    c.id()
                )));
            }
            if !c.connected {
                return Err(MotifError::Invalid(format!("motif {} is disconnected", c.id())));
            }
            if seen.insert(c.canonical, ()).is_none() {
                list.push(c);
            }
        }
        let injected = !list.iter().any(|c| c.is_single_edge());
        if injected {
            list.push(MotifClass::single_edge(directed));
        }
        Ok((Self::sorted(directed, list), injected))
    }

    fn sorted(directed: bool, mut classes: Vec<MotifClass>) -> Self {
        classes.sort_by_key(|c| c.canonical);
        let index = classes.iter().enumerate().map(|(i, c)| (c.canonical, i)).collect();
        MotifCatalog { directed, classes, index }
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn classes(&self) -> &[MotifClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.classes.iter().map(|c| c.size).max().unwrap_or(0)
    }

    pub fn position(&self, c: &CanonicalForm) -> Option<usize> {
        self.index.get(c).copied()
    }

    pub fn get(&self, c: &CanonicalForm) -> Option<&MotifClass> {
        self.position(c).map(|i| &self.classes[i])
    }

    pub fn single_edge(&self) -> Option<usize> {
        self.classes.iter().position(|c| c.is_single_edge())
    }

    /// Keeps only biconnected classes (the single edge always stays).
    pub fn biconnected_only(&self) -> Self {
        let kept = self
            .classes
            .iter()
            .filter(|c| c.biconnected || c.is_single_edge())
            .cloned()
            .collect();
        Self::sorted(self.directed, kept)
    }

    /// Text form: one class per line,
    /// `canonical | size | edges | aut | orbits | flags`.
    pub fn write<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "# motif catalog: {} classes, {}",
            self.classes.len(),
            if self.directed { "directed" } else { "undirected" }
        )?;
        writeln!(w, "# canonical | size | edges | aut | orbits | flags")?;
        for c in &self.classes {
            let orbits: Vec<String> = c
                .orbits
                .iter()
                .map(|o| o.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
                .collect();
            let mut flags = Vec::new();
            if c.connected {
                flags.push("connected");
            }
            if c.biconnected {
                flags.push("biconnected");
            }
            writeln!(
                w,
                "{} | {} | {} | {} | {} | {}",
                c.id(),
                c.size,
                c.edge_count,
                c.aut_size,
                orbits.join(";"),
                flags.join(",")
            )?;
        }
        Ok(())
    }

    /// Parses the text form. Class properties are recomputed from the
    /// canonical edge list and checked against the recorded columns.
    /// The single-edge motif is injected if absent; see [`Self::from_classes`].
    pub fn read<R: BufRead>(r: R) -> Result<(Self, bool), MotifError> {
        let mut classes = Vec::new();
        let mut directed = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let err = |msg: String| MotifError::CatalogParse { line: lineno, msg };
            let cols: Vec<&str> = t.split('|').map(str::trim).collect();
            let canon: CanonicalForm = cols[0].parse().map_err(|e: MotifError| err(e.to_string()))?;
            let class = MotifClass::new(canon);
            if cols.len() >= 4 {
                let expect = [class.size as u64, class.edge_count as u64, class.aut_size];
                for (col, want) in cols[1..4].iter().zip(expect) {
                    let got: u64 = col.parse().map_err(|_| err(format!("bad number {col:?}")))?;
                    if got != want {
                        return Err(err(format!("column value {got} disagrees with computed {want}")));
                    }
                }
            }
            if *directed.get_or_insert(class.directed) != class.directed {
                return Err(err("mixed directed and undirected motifs".into()));
            }
            classes.push(class);
        }
        let directed = directed.ok_or_else(|| MotifError::CatalogParse {
            line: 0,
            msg: "catalog is empty".into(),
        })?;
        Self::from_classes(directed, classes)
    }
}

/// Largest supported catalog size for the given directedness.
pub fn max_catalog_size(directed: bool) -> usize {
    if directed {
        5
    } else {
        6
    }
}

/// Enumerates every connected (or biconnected) class on 2..=max_size vertices.
///
/// Each labeled graph is kept only when it is its own canonical form, so no
/// deduplication pass is needed; masks are checked in parallel.
pub fn generate_catalog(
    max_size: usize,
    directed: bool,
    filter: CatalogFilter,
) -> Result<MotifCatalog, MotifError> {
    if !(2..=max_catalog_size(directed)).contains(&max_size) {
        return Err(MotifError::UnsupportedSize(max_size));
    }
    debug_assert!(max_size <= MAX_PATTERN_SIZE);
    let mut classes = Vec::new();
    for k in 2..=max_size {
        let layout = Layout::get(k, directed);
        let _ = layout.perm_table();
        let masks: Vec<u64> = (0..1u64 << layout.bits())
            .into_par_iter()
            .filter(|&m| {
                layout.is_connected(m)
                    && match filter {
                        CatalogFilter::Connected => true,
                        CatalogFilter::Biconnected => k == 2 || layout.is_biconnected(m),
                    }
                    && is_canonical_mask(layout, m)
            })
            .collect();
        classes.par_extend(
            masks
                .into_par_iter()
                .map(|m| MotifClass::new(CanonicalForm::from_canonical_mask(k, directed, m))),
        );
    }
    Ok(MotifCatalog::sorted(directed, classes))
}
