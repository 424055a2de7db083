//! Small-graph isomorphism machinery: canonical forms, automorphism groups,
//! connectivity classification and motif catalogs.

mod canon;
mod catalog;
mod named;
pub mod pattern;

pub use canon::{
    automorphism_group, canonical_form, canonical_form_of_graph, find_isomorphism, Automorphisms,
    CanonicalForm, Pattern,
};
pub use catalog::{
    effective_complexity, generate_catalog, is_biconnected, max_catalog_size, CatalogFilter, MotifCatalog,
    MotifClass,
};
pub use named::named_motif;
pub use pattern::MAX_PATTERN_SIZE;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MotifError {
    #[error("pattern size {0} is not supported")]
    UnsupportedSize(usize),
    #[error("{0}")]
    Invalid(String),
    #[error("pattern is disconnected")]
    Disconnected,
    #[error("unknown motif {0:?}")]
    Unknown(String),
    #[error("catalog line {line}: {msg}")]
    CatalogParse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
