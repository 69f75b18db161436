//! Writers for the declared output files, all byte-stable for a fixed
//! seed: floats go out at 12 significant digits in CSV and as full doubles
//! in JSON.

use std::path::{Path, PathBuf};

use serde::Serialize;
use teflow::{CrossDirectionSummary, FlowResult, HistogramSet, SurrogateStats, SweepResult};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

const STAGE: &str = "write";

/// 12 significant digits.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path)
        .map_err(|e| CliError::internal(STAGE, format!("{}: {e}", path.display())))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush()
        .map_err(|e| CliError::internal(STAGE, format!("{}: {e}", path.display())))
}

fn record<const N: usize>(
    w: &mut csv::Writer<std::fs::File>,
    path: &Path,
    fields: [&str; N],
) -> Result<()> {
    w.write_record(fields)
        .map_err(|e| CliError::internal(STAGE, format!("{}: {e}", path.display())))
}

/// One row of the state-probability table.
pub struct StateProbRow {
    /// `index` or `stocks_mean`.
    pub series: String,
    pub d: f64,
    pub p: [f64; 3],
}

pub fn write_state_probs(dir: &Path, rows: &[StateProbRow]) -> Result<PathBuf> {
    let path = dir.join("state_probs.csv");
    let mut w = writer(&path)?;
    record(&mut w, &path, ["series", "d", "p0", "p1", "p2"])?;
    for r in rows {
        record(
            &mut w,
            &path,
            [
                &r.series,
                &sig12(r.d),
                &sig12(r.p[0]),
                &sig12(r.p[1]),
                &sig12(r.p[2]),
            ],
        )?;
    }
    finish(w, &path)?;
    Ok(path)
}

pub fn write_sweep(dir: &Path, sweep: &SweepResult) -> Result<PathBuf> {
    let path = dir.join("sweep.csv");
    let mut w = writer(&path)?;
    record(
        &mut w,
        &path,
        [
            "d",
            "mean_te_i_to_s",
            "mean_te_s_to_i",
            "mean_shuffle_i_to_s",
            "mean_shuffle_s_to_i",
        ],
    )?;
    for (i, &d) in sweep.d_grid.iter().enumerate() {
        record(
            &mut w,
            &path,
            [
                &sig12(d),
                &sig12(sweep.mean_te_i_to_s[i]),
                &sig12(sweep.mean_te_s_to_i[i]),
                &sig12(sweep.mean_shuffle_i_to_s[i]),
                &sig12(sweep.mean_shuffle_s_to_i[i]),
            ],
        )?;
    }
    finish(w, &path)?;
    Ok(path)
}

const FLOW_COLUMNS: [&str; 13] = [
    "stock_id",
    "d",
    "te_index_to_stock",
    "te_stock_to_index",
    "surrogate_i_to_s_mean",
    "surrogate_i_to_s_std",
    "surrogate_i_to_s_n",
    "surrogate_i_to_s_seed",
    "surrogate_s_to_i_mean",
    "surrogate_s_to_i_std",
    "surrogate_s_to_i_n",
    "surrogate_s_to_i_seed",
    "sample_count",
];

pub fn write_flows(dir: &Path, flows: &[FlowResult]) -> Result<PathBuf> {
    let path = dir.join("flows.csv");
    let mut w = writer(&path)?;
    record(&mut w, &path, FLOW_COLUMNS)?;
    for f in flows {
        record(
            &mut w,
            &path,
            [
                &f.stock_id,
                &sig12(f.d),
                &sig12(f.te_index_to_stock),
                &sig12(f.te_stock_to_index),
                &sig12(f.surrogate_index_to_stock.mean),
                &sig12(f.surrogate_index_to_stock.std_dev),
                &f.surrogate_index_to_stock.n_surrogates.to_string(),
                &f.surrogate_index_to_stock.seed.to_string(),
                &sig12(f.surrogate_stock_to_index.mean),
                &sig12(f.surrogate_stock_to_index.std_dev),
                &f.surrogate_stock_to_index.n_surrogates.to_string(),
                &f.surrogate_stock_to_index.seed.to_string(),
                &f.sample_count.to_string(),
            ],
        )?;
    }
    finish(w, &path)?;
    Ok(path)
}

/// Re-read a flows table; inverse of [`write_flows`] at the printed
/// precision.
pub fn parse_flows(path: &Path) -> Result<Vec<FlowResult>> {
    let name = path.display();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;
    if headers.iter().ne(FLOW_COLUMNS) {
        return Err(CliError::data(STAGE, format!("{name}: unexpected columns")));
    }
    let mut flows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;
        let field = |i: usize| -> &str { &rec[i] };
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| CliError::data(STAGE, format!("{name}: bad number `{}`", field(i))))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .map_err(|_| CliError::data(STAGE, format!("{name}: bad integer `{}`", field(i))))
        };
        flows.push(FlowResult {
            stock_id: field(0).to_string(),
            d: num(1)?,
            te_index_to_stock: num(2)?,
            te_stock_to_index: num(3)?,
            surrogate_index_to_stock: SurrogateStats {
                mean: num(4)?,
                std_dev: num(5)?,
                n_surrogates: int(6)? as usize,
                seed: int(7)?,
            },
            surrogate_stock_to_index: SurrogateStats {
                mean: num(8)?,
                std_dev: num(9)?,
                n_surrogates: int(10)? as usize,
                seed: int(11)?,
            },
            sample_count: int(12)?,
        });
    }
    Ok(flows)
}

pub fn write_histograms(dir: &Path, hists: &HistogramSet) -> Result<PathBuf> {
    let path = dir.join("histograms.csv");
    let mut w = writer(&path)?;
    record(
        &mut w,
        &path,
        ["table", "bin_index", "bin_lower", "bin_upper", "count"],
    )?;
    for (table, hist) in [
        ("i_to_s", &hists.index_to_stock),
        ("s_to_i", &hists.stock_to_index),
        ("difference", &hists.difference),
    ] {
        for (idx, lower, upper, count) in hist.bins() {
            record(
                &mut w,
                &path,
                [
                    table,
                    &idx.to_string(),
                    &sig12(lower),
                    &sig12(upper),
                    &count.to_string(),
                ],
            )?;
        }
    }
    finish(w, &path)?;
    Ok(path)
}

/// `summary.json` payload.
#[derive(Serialize)]
pub struct SummaryDoc<'a> {
    /// Shared band width of the flow stage; serialized as `null` in
    /// equiprobable mode, where flows.csv carries the per-stock widths.
    pub d: f64,
    pub equiprobable_flows: bool,
    pub n_pairs: usize,
    pub pearson_r: f64,
    pub pearson_r_bootstrap_std: f64,
    pub fraction_reverse_dominant: f64,
    pub top_k_i_to_s: &'a [teflow::RankedStock],
    pub top_k_s_to_i: &'a [teflow::RankedStock],
}

impl<'a> SummaryDoc<'a> {
    pub fn new(d: f64, equiprobable_flows: bool, summary: &'a CrossDirectionSummary) -> Self {
        Self {
            d,
            equiprobable_flows,
            n_pairs: summary.n_pairs,
            pearson_r: summary.pearson_r,
            pearson_r_bootstrap_std: summary.pearson_r_bootstrap_std,
            fraction_reverse_dominant: summary.fraction_reverse_dominant,
            top_k_i_to_s: &summary.top_k_i_to_s,
            top_k_s_to_i: &summary.top_k_s_to_i,
        }
    }
}

pub fn write_json<T: Serialize>(dir: &Path, file: &str, doc: &T) -> Result<PathBuf> {
    let path = dir.join(file);
    let text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::internal(STAGE, format!("{}: {e}", path.display())))?;
    std::fs::write(&path, text + "\n")
        .map_err(|e| CliError::internal(STAGE, format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// `manifest.json` payload: config echo plus what alignment did.
#[derive(Serialize)]
pub struct Manifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: &'a RunConfig,
    /// Instrument ids in the aligned panel, index first.
    pub instruments: Vec<String>,
    pub n_common_days: usize,
    pub n_returns: usize,
    pub dropped_instruments: Vec<DroppedInstrument>,
    /// Dates removed per instrument by the intersection, as counts.
    pub removed_date_counts: std::collections::BTreeMap<String, usize>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct DroppedInstrument {
    pub id: String,
    pub reason: String,
}
