//! Batch front-end over the `teflow` library: price CSV ingestion,
//! date-intersection alignment, and the file outputs of the full analysis.

pub mod align;
pub mod config;
pub mod error;
pub mod ingest;
pub mod output;
pub mod run;

pub use align::{align_panel, AlignReport, AlignedPanel};
pub use config::{default_d_grid, parse_config_file, AlignmentPolicy, PartialConfig, RunConfig};
pub use error::{CliError, Result};
pub use ingest::{ingest_csv, Ingested};
pub use run::{run_analyze, run_gen_fixture, run_sweep, FixtureSpec};
