//! Machine-readable reports for `analyze` and `score`.
//!
//! JSON keeps every bit total at full precision. CSV rounds bit columns to
//! the nearest integer for display.

use std::collections::BTreeMap;
use std::io::Write;

use motifcover::{InformationReport, MotifRow, Step};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub input: InputInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigEcho>,
    pub motifs: Vec<ReportRow>,
    pub totals: Totals,
    /// False when every c-score is zero and no profile exists.
    pub profile_defined: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_run: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runs: Option<Vec<RunSummary>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<StepRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    pub vertices: usize,
    pub edges: usize,
    pub directed: bool,
    pub duplicate_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub catalog: CatalogEcho,
    pub seed: u64,
    pub restarts: usize,
    pub runs: usize,
    pub epsilon: String,
    pub log_star: String,
    pub instance_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEcho {
    /// `generated` or `file`.
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub max_size: usize,
    pub filter: String,
    pub classes: usize,
    pub single_edge_injected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub motif: String,
    pub edge_list: Vec<[u8; 2]>,
    pub size: usize,
    pub edges: usize,
    pub aut: u64,
    pub count: u64,
    /// Smallest and largest count over all runs, when more than one ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count_range: Option<[u64; 2]>,
    pub entropy_bits: f64,
    pub epsilon_bits: f64,
    pub log_star_count_bits: f64,
    pub c_score: f64,
    pub normalized_c_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub log_star_vertices_bits: f64,
    pub sigma: f64,
    pub eri: f64,
    pub delta_sigma: f64,
    pub compression_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub sigma: f64,
    pub counts: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub motif: String,
    pub instances: usize,
    pub new_edges: usize,
    pub efficiency: f64,
    pub sigma: f64,
}

impl From<&MotifRow> for ReportRow {
    fn from(r: &MotifRow) -> Self {
        ReportRow {
            motif: r.motif.to_string(),
            edge_list: r.motif.pattern().edges().map(|(a, b)| [a, b]).collect(),
            size: r.size,
            edges: r.edges,
            aut: r.aut,
            count: r.count,
            count_range: None,
            entropy_bits: r.entropy_bits,
            epsilon_bits: r.epsilon_bits,
            log_star_count_bits: r.log_star_count_bits,
            c_score: r.c_score,
            normalized_c_score: r.normalized_c_score,
        }
    }
}

impl From<&Step> for StepRow {
    fn from(s: &Step) -> Self {
        StepRow {
            motif: s.motif.to_string(),
            instances: s.instances,
            new_edges: s.new_edges,
            efficiency: s.efficiency,
            sigma: s.sigma,
        }
    }
}

impl Report {
    /// The parts shared by every command.
    pub fn from_information(command: &str, path: &str, duplicates: usize, info: &InformationReport) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input: InputInfo {
                path: path.to_string(),
                vertices: info.vertices,
                edges: info.edges,
                directed: info.directed,
                duplicate_edges: duplicates,
            },
            config: None,
            motifs: info.motifs.iter().map(ReportRow::from).collect(),
            totals: Totals {
                log_star_vertices_bits: info.log_star_vertices_bits,
                sigma: info.sigma,
                eri: info.eri,
                delta_sigma: info.delta_sigma,
                compression_percent: info.compression_percent,
            },
            profile_defined: info.profile_defined,
            best_run: None,
            runs: None,
            steps: None,
            cover: None,
        }
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    /// One `motif` record per row, then one record per total.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "record",
            "motif",
            "size",
            "edges",
            "aut",
            "count",
            "count_min",
            "count_max",
            "entropy_bits",
            "epsilon_bits",
            "log_star_count_bits",
            "c_score",
            "normalized_c_score",
            "value",
        ])?;
        let bits = |x: f64| format!("{}", x.round() as i64);
        for r in &self.motifs {
            let [lo, hi] = r.count_range.unwrap_or([r.count, r.count]);
            out.write_record([
                "motif".to_string(),
                r.motif.clone(),
                r.size.to_string(),
                r.edges.to_string(),
                r.aut.to_string(),
                r.count.to_string(),
                lo.to_string(),
                hi.to_string(),
                bits(r.entropy_bits),
                bits(r.epsilon_bits),
                bits(r.log_star_count_bits),
                format!("{:.6}", r.c_score),
                r.normalized_c_score.map(|x| format!("{x:.6}")).unwrap_or_default(),
                String::new(),
            ])?;
        }
        let t = &self.totals;
        let totals = [
            ("log_star_vertices_bits", bits(t.log_star_vertices_bits)),
            ("sigma", bits(t.sigma)),
            ("eri", bits(t.eri)),
            ("delta_sigma", bits(t.delta_sigma)),
            ("compression_percent", format!("{:.2}", t.compression_percent)),
        ];
        for (name, value) in totals {
            let mut rec = vec![name.to_string()];
            rec.extend(std::iter::repeat_n(String::new(), 12));
            rec.push(value);
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}
