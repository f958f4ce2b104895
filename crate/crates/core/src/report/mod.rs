//! Tables, figures and the end-to-end report bundle.

mod config;
mod format;
mod run;
mod svg;
mod tables;

pub use config::{parse_lambdas, RunConfig};
pub use format::{format_num, format_p};
pub use run::{
    build_bundle, fit_rows, ingest_corpus, ingest_files, load_dataset, run_all, sha256_hex, write_bundle, Bundle,
    ManifestEntry, RunSummary,
};
pub use svg::{green_ramp, render_scatter, Scatter, ScatterLabels};
pub use tables::{
    correlation_table, fit_table, law_table, steiger_analytic_table, steiger_symbol_table, ties_table_files, FitRow,
    LawRow, TableFiles,
};
