//! Bit costs of covers: placement counts, entropies, total information,
//! compression against the edge cover, c-scores and significance profiles.

pub mod numerics;

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use numerics::{log2_binomial, log_star, LogStarVariant, LOG_STAR_C0};

use crate::cover::{Cover, CoverSummary};
use crate::graph::{EdgeKey, Graph};
use crate::motif::{effective_complexity, CanonicalForm, MotifCatalog, MotifClass};

#[derive(Debug, Error, PartialEq)]
pub enum InfoError {
    #[error("{0}")]
    Domain(String),
    #[error("motif {0} is not in the catalog")]
    UnknownMotif(CanonicalForm),
    #[error("{count} instances of {motif} exceed the {placements} possible placements")]
    TooManyInstances { motif: CanonicalForm, count: u64, placements: String },
    #[error("significance profile undefined: every c-score is zero")]
    UndefinedProfile,
}

/// How the effective complexity ε(m) of a motif is priced.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "bits")]
pub enum EpsilonMode {
    /// Edge-list code length.
    #[default]
    EdgeList,
    /// Maximum-likelihood mode: motifs are free.
    Zero,
    /// Every motif costs the same number of bits (a frequency threshold).
    Constant(f64),
}

impl fmt::Display for EpsilonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonMode::EdgeList => f.write_str("edge-list"),
            EpsilonMode::Zero => f.write_str("zero"),
            EpsilonMode::Constant(x) => write!(f, "const:{x}"),
        }
    }
}

impl FromStr for EpsilonMode {
    type Err = InfoError;

    fn from_str(s: &str) -> Result<Self, InfoError> {
        match s {
            "edge-list" => Ok(EpsilonMode::EdgeList),
            "zero" => Ok(EpsilonMode::Zero),
            _ => {
                let x: f64 = s
                    .strip_prefix("const:")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| {
                        InfoError::Domain(format!("epsilon mode `{s}`: expected edge-list, zero or const:<bits>"))
                    })?;
                if !x.is_finite() || x < 0.0 {
                    return Err(InfoError::Domain(format!("epsilon constant must be a non-negative number, got {x}")));
                }
                Ok(EpsilonMode::Constant(x))
            }
        }
    }
}

/// Pricing conventions shared by every cost in a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostModel {
    pub epsilon: EpsilonMode,
    pub log_star: LogStarVariant,
}

impl CostModel {
    pub fn epsilon(&self, m: &MotifClass) -> f64 {
        match self.epsilon {
            EpsilonMode::EdgeList => match self.log_star {
                LogStarVariant::Universal => m.epsilon_bits,
                v => effective_complexity(m, v),
            },
            EpsilonMode::Zero => 0.0,
            EpsilonMode::Constant(x) => x,
        }
    }

    pub fn log_star(&self, n: u64) -> Result<f64, InfoError> {
        log_star(n, self.log_star)
    }

    /// Cost of one motif block `S(m, n) + ε(m) + log* n`; zero when `n == 0`.
    pub fn motif_block(&self, m: &MotifClass, n: u64, vertices: usize) -> Result<f64, InfoError> {
        if n == 0 {
            return Ok(0.0);
        }
        Ok(entropy_s(m, n, vertices)? + self.epsilon(m) + self.log_star(n)?)
    }
}

/// Number of distinct placements of `m` on `n` labeled vertices,
/// `n!/((n-|m|)! |Aut(m)|)`; `None` when it exceeds `u128`.
pub fn placements(m: &MotifClass, n: usize) -> Result<Option<u128>, InfoError> {
    if n < m.size {
        return Err(InfoError::Domain(format!(
            "motif on {} vertices does not fit on {n}",
            m.size
        )));
    }
    let mut falling: u128 = 1;
    for i in 0..m.size {
        match falling.checked_mul((n - i) as u128) {
            Some(x) => falling = x,
            None => return Ok(None),
        }
    }
    Ok(Some(falling / m.aut_size as u128))
}

pub fn log2_placements(m: &MotifClass, n: usize) -> Result<f64, InfoError> {
    Ok(match placements(m, n)? {
        Some(p) => (p as f64).log2(),
        None => log2_placements_real(m, n),
    })
}

fn log2_placements_real(m: &MotifClass, n: usize) -> f64 {
    (0..m.size).map(|i| ((n - i) as f64).log2()).sum::<f64>() - (m.aut_size as f64).log2()
}

/// Entropy `log2 C(P, count)` of a set of `count` distinct instances.
pub fn entropy_s(m: &MotifClass, count: u64, n: usize) -> Result<f64, InfoError> {
    match placements(m, n)? {
        Some(p) => {
            if count as u128 > p {
                return Err(InfoError::TooManyInstances {
                    motif: m.canonical,
                    count,
                    placements: p.to_string(),
                });
            }
            Ok(log2_binomial(p, count as u128))
        }
        None => {
            // The population exceeds 2^128, so any u64 count is far below it.
            let p = log2_placements_real(m, n).exp2();
            Ok(numerics::ln_binomial_real(p, count as f64) / std::f64::consts::LN_2)
        }
    }
}

/// Stirling approximation `n(|m| log2 N - log2|Aut| - log2 n + log2 e)` of
/// [`entropy_s`]. Diagnostic only.
pub fn entropy_stirling(m: &MotifClass, count: u64, n: usize) -> Result<f64, InfoError> {
    if count == 0 || m.size <= 2 {
        return Err(InfoError::Domain("Stirling form needs n_m >= 1 and |m| > 2".into()));
    }
    if let Some(p) = placements(m, n)? {
        if count as u128 > p {
            return Err(InfoError::TooManyInstances { motif: m.canonical, count, placements: p.to_string() });
        }
    }
    let c = count as f64;
    Ok(c * (m.size as f64 * (n as f64).log2() - (m.aut_size as f64).log2() - c.log2()
        + std::f64::consts::E.log2()))
}

/// Resolves a canonical form to its class, through the catalog when given.
fn resolve<'a>(
    cache: &'a mut HashMap<CanonicalForm, MotifClass>,
    catalog: Option<&MotifCatalog>,
    form: CanonicalForm,
) -> Result<&'a MotifClass, InfoError> {
    match cache.entry(form) {
        Entry::Occupied(e) => Ok(e.into_mut()),
        Entry::Vacant(e) => {
            let class = match catalog {
                Some(cat) => cat.get(&form).cloned().ok_or(InfoError::UnknownMotif(form))?,
                None => MotifClass::new(form),
            };
            Ok(e.insert(class))
        }
    }
}

/// Total information `log* N + Σ_m (S(m, n_m) + ε(m) + log* n_m)`.
///
/// Classes are looked up in `catalog` when one is given (unknown motifs are
/// an error), otherwise derived from their canonical forms.
pub fn total_information(
    c: &CoverSummary,
    catalog: Option<&MotifCatalog>,
    model: &CostModel,
) -> Result<f64, InfoError> {
    let mut cache = HashMap::new();
    let mut total = model.log_star(c.n as u64)?;
    for (&form, &count) in &c.counts {
        if form.directed() != c.directed {
            return Err(InfoError::Domain(format!("motif {form} has the wrong directedness")));
        }
        let m = resolve(&mut cache, catalog, form)?;
        total += model.motif_block(m, count, c.n)?;
    }
    Ok(total)
}

/// Total information of the all-single-edge cover (ERI).
pub fn edge_cover_information(g: &Graph, model: &CostModel) -> Result<f64, InfoError> {
    if g.edge_count() == 0 {
        return Err(InfoError::Domain("graph has no edges".into()));
    }
    total_information(&CoverSummary::edge_cover(g), None, model)
}

/// Compression `ERI - Σ(c)`.
pub fn delta_sigma(g: &Graph, c: &CoverSummary, model: &CostModel) -> Result<f64, InfoError> {
    Ok(edge_cover_information(g, model)? - total_information(c, None, model)?)
}

/// Summary of the cover obtained by dissolving every `m` instance into
/// single-edge subgraphs, with set semantics for the single edges.
pub fn dissolve(cover: &Cover, m: CanonicalForm) -> CoverSummary {
    let mut s = cover.summary();
    let Some(removed) = s.counts.remove(&m) else {
        return s;
    };
    let edge = MotifClass::single_edge(s.directed).canonical;
    if m == edge {
        s.counts.insert(m, removed);
        return s;
    }
    let existing: BTreeSet<EdgeKey> = cover
        .instances()
        .iter()
        .filter(|i| i.motif == edge)
        .flat_map(|i| i.edges.iter().copied())
        .collect();
    let fresh: BTreeSet<EdgeKey> = cover
        .instances()
        .iter()
        .filter(|i| i.motif == m)
        .flat_map(|i| i.edges.iter().copied())
        .filter(|e| !existing.contains(e))
        .collect();
    s.add(edge, fresh.len() as u64);
    s
}

/// `Σ(C - m) / Σ(C) - 1`; zero when `m` is not in the cover.
pub fn c_score(cover: &Cover, m: CanonicalForm, model: &CostModel) -> Result<f64, InfoError> {
    let base = cover.summary();
    if !base.counts.contains_key(&m) {
        return Ok(0.0);
    }
    let sigma = total_information(&base, None, model)?;
    let without = total_information(&dissolve(cover, m), None, model)?;
    Ok(without / sigma - 1.0)
}

/// Normalizes a score vector to unit Euclidean norm.
pub fn normalize_scores(
    scores: &BTreeMap<CanonicalForm, f64>,
) -> Result<BTreeMap<CanonicalForm, f64>, InfoError> {
    let norm = scores.values().map(|c| c * c).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(InfoError::UndefinedProfile);
    }
    Ok(scores.iter().map(|(&k, &c)| (k, c / norm)).collect())
}

/// Normalized c-scores over the motifs of the cover.
pub fn significance_profile(
    cover: &Cover,
    model: &CostModel,
) -> Result<BTreeMap<CanonicalForm, f64>, InfoError> {
    let mut scores = BTreeMap::new();
    for m in cover.motifs() {
        scores.insert(m, c_score(cover, m, model)?);
    }
    normalize_scores(&scores)
}

/// Per-motif line of an [`InformationReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifRow {
    pub motif: CanonicalForm,
    pub size: usize,
    pub edges: usize,
    pub aut: u64,
    pub count: u64,
    pub entropy_bits: f64,
    pub epsilon_bits: f64,
    pub log_star_count_bits: f64,
    pub c_score: f64,
    pub normalized_c_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationReport {
    pub vertices: usize,
    pub edges: usize,
    pub directed: bool,
    pub log_star_vertices_bits: f64,
    pub sigma: f64,
    pub eri: f64,
    pub delta_sigma: f64,
    /// `delta_sigma / eri` as a percentage.
    pub compression_percent: f64,
    pub motifs: Vec<MotifRow>,
    pub profile_defined: bool,
}

/// Full cost breakdown of a cover of `g`.
pub fn information_report(g: &Graph, cover: &Cover, model: &CostModel) -> Result<InformationReport, InfoError> {
    let summary = cover.summary();
    let sigma = total_information(&summary, None, model)?;
    let eri = edge_cover_information(g, model)?;
    let mut scores = BTreeMap::new();
    let mut motifs = Vec::new();
    for (&form, &count) in &summary.counts {
        let m = MotifClass::new(form);
        let c = c_score(cover, form, model)?;
        scores.insert(form, c);
        motifs.push(MotifRow {
            motif: form,
            size: m.size,
            edges: m.edge_count,
            aut: m.aut_size,
            count,
            entropy_bits: entropy_s(&m, count, summary.n)?,
            epsilon_bits: model.epsilon(&m),
            log_star_count_bits: model.log_star(count)?,
            c_score: c,
            normalized_c_score: None,
        });
    }
    let profile = normalize_scores(&scores).ok();
    if let Some(p) = &profile {
        for row in &mut motifs {
            row.normalized_c_score = Some(p[&row.motif]);
        }
    }
    let delta = eri - sigma;
    Ok(InformationReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        directed: g.is_directed(),
        log_star_vertices_bits: model.log_star(g.vertex_count() as u64)?,
        sigma,
        eri,
        delta_sigma: delta,
        compression_percent: 100.0 * delta / eri,
        motifs,
        profile_defined: profile.is_some(),
    })
}
