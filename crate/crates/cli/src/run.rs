//! Stage drivers for the subcommands.
//!
//! Every result is computed in memory before the first output byte is
//! written, so a failing stage leaves no partial output files. Surrogate
//! randomness derives from the run seed per stage: sweep = tag 1, flows =
//! tag 2, summary bootstrap = tag 3 (the sweep and flow stages derive
//! further per d value, stock, direction, and replicate).

use std::path::Path;

use chrono::Datelike;
use teflow::rng::derive_seed;
use teflow::{
    cross_direction_summary, d_sweep, discretize, equiprobable_threshold, pairwise_flow,
    state_probabilities, te_histograms, EmbeddingSpec, FlowResult, ShuffleTarget, SurrogateConfig,
    SymbolSeries,
};

use crate::align::{align_panel, AlignReport, AlignedPanel};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::ingest::ingest_csv;
use crate::output::{self, DroppedInstrument, Manifest, StateProbRow, SummaryDoc};

const STAGE_SWEEP: u64 = 1;
const STAGE_FLOWS: u64 = 2;
const STAGE_SUMMARY: u64 = 3;

fn embedding(config: &RunConfig) -> Result<EmbeddingSpec> {
    EmbeddingSpec::new(config.k, config.l).map_err(|e| CliError::usage(e.to_string()))
}

fn surrogate_cfg(config: &RunConfig, stage: u64) -> SurrogateConfig {
    SurrogateConfig {
        n_surrogates: config.surrogates,
        seed: derive_seed(config.seed, &[stage]),
        shuffle: if config.shuffle_both {
            ShuffleTarget::Both
        } else {
            ShuffleTarget::SourceOnly
        },
    }
}

struct LoadedPanel {
    panel: AlignedPanel,
    report: AlignReport,
    warnings: Vec<String>,
}

fn load_panel(config: &RunConfig) -> Result<LoadedPanel> {
    let mut warnings = Vec::new();
    let mut series = Vec::with_capacity(config.inputs.len());
    for path in &config.inputs {
        let ingested = ingest_csv(path)?;
        warnings.extend(ingested.warnings);
        series.push(ingested.series);
    }
    let (panel, report) = align_panel(series, &config.index_id, config.min_return_len())?;

    for w in &warnings {
        eprintln!("warning: {w}");
    }
    for (id, reason) in &report.dropped_instruments {
        eprintln!("warning: dropped {id}: {reason}");
    }
    for (id, dates) in &report.removed_dates {
        let listed: Vec<String> = dates.iter().map(|d| d.to_string()).collect();
        eprintln!(
            "warning: {id}: removed {} dates outside the common support: {}",
            dates.len(),
            listed.join(", ")
        );
    }
    Ok(LoadedPanel {
        panel,
        report,
        warnings,
    })
}

fn manifest<'a>(
    command: &'static str,
    config: &'a RunConfig,
    loaded: &LoadedPanel,
) -> Manifest<'a> {
    let mut instruments = vec![loaded.panel.index.instrument_id().to_string()];
    instruments.extend(
        loaded
            .panel
            .stocks
            .iter()
            .map(|s| s.instrument_id().to_string()),
    );
    Manifest {
        tool: "teflow",
        version: env!("CARGO_PKG_VERSION"),
        command,
        seed: config.seed,
        config,
        instruments,
        n_common_days: loaded.panel.dates.len(),
        n_returns: loaded.panel.index.len(),
        dropped_instruments: loaded
            .report
            .dropped_instruments
            .iter()
            .map(|(id, reason)| DroppedInstrument {
                id: id.clone(),
                reason: reason.clone(),
            })
            .collect(),
        removed_date_counts: loaded
            .report
            .removed_dates
            .iter()
            .map(|(id, dates)| (id.clone(), dates.len()))
            .collect(),
        warnings: loaded.warnings.clone(),
    }
}

fn state_prob_rows(panel: &AlignedPanel, d_grid: &[f64]) -> Result<Vec<StateProbRow>> {
    let stage = |e: teflow::Error| CliError::data("state-probs", e);
    let mut rows = Vec::with_capacity(2 * d_grid.len());
    for &d in d_grid {
        let p_index =
            state_probabilities(&discretize(&panel.index, d).map_err(stage)?).map_err(stage)?;
        let mut mean = [0.0f64; 3];
        for stock in &panel.stocks {
            let p = state_probabilities(&discretize(stock, d).map_err(stage)?).map_err(stage)?;
            for (state, m) in mean.iter_mut().enumerate() {
                *m += p.p(state);
            }
        }
        for m in &mut mean {
            *m /= panel.stocks.len() as f64;
        }
        rows.push(StateProbRow {
            series: "index".into(),
            d,
            p: [p_index.p(0), p_index.p(1), p_index.p(2)],
        });
        rows.push(StateProbRow {
            series: "stocks_mean".into(),
            d,
            p: mean,
        });
    }
    Ok(rows)
}

fn flow_stage(
    panel: &AlignedPanel,
    config: &RunConfig,
    spec: EmbeddingSpec,
) -> Result<Vec<FlowResult>> {
    let stage = |e: teflow::Error| CliError::data("flows", e);
    let (index_symbols, stock_symbols) = if config.equiprobable_flows {
        let index_d = equiprobable_threshold(&panel.index).map_err(stage)?;
        let index_symbols = discretize(&panel.index, index_d).map_err(stage)?;
        let stock_symbols = panel
            .stocks
            .iter()
            .map(|s| {
                let d = equiprobable_threshold(s)?;
                discretize(s, d)
            })
            .collect::<teflow::Result<Vec<SymbolSeries>>>()
            .map_err(stage)?;
        (index_symbols, stock_symbols)
    } else {
        let index_symbols = discretize(&panel.index, config.flows_d).map_err(stage)?;
        let stock_symbols = panel
            .stocks
            .iter()
            .map(|s| discretize(s, config.flows_d))
            .collect::<teflow::Result<Vec<SymbolSeries>>>()
            .map_err(stage)?;
        (index_symbols, stock_symbols)
    };
    pairwise_flow(
        &index_symbols,
        &stock_symbols,
        spec,
        &surrogate_cfg(config, STAGE_FLOWS),
    )
    .map_err(stage)
}

/// The `analyze` subcommand: full pipeline, six output files.
pub fn run_analyze(config: &RunConfig) -> Result<()> {
    let spec = embedding(config)?;
    let loaded = load_panel(config)?;

    let state_rows = state_prob_rows(&loaded.panel, &config.d_grid)?;
    let sweep = d_sweep(
        &loaded.panel.index,
        &loaded.panel.stocks,
        &config.d_grid,
        spec,
        &surrogate_cfg(config, STAGE_SWEEP),
    )
    .map_err(|e| CliError::data("sweep", e))?;
    let flows = flow_stage(&loaded.panel, config, spec)?;
    let hists = te_histograms(&flows, config.hist_bin_width)
        .map_err(|e| CliError::data("histograms", e))?;
    let summary = cross_direction_summary(
        &flows,
        config.top_k,
        derive_seed(config.seed, &[STAGE_SUMMARY]),
    )
    .map_err(|e| CliError::data("summary", e))?;

    // all stages done; only now touch the filesystem
    std::fs::create_dir_all(&config.output_dir).map_err(|e| {
        CliError::internal("write", format!("{}: {e}", config.output_dir.display()))
    })?;
    let dir = config.output_dir.as_path();
    output::write_state_probs(dir, &state_rows)?;
    output::write_sweep(dir, &sweep)?;
    output::write_flows(dir, &flows)?;
    output::write_histograms(dir, &hists)?;
    // in equiprobable mode there is no single shared band width; the
    // per-stock values are in flows.csv and the JSON reports null
    let summary_d = if config.equiprobable_flows {
        f64::NAN
    } else {
        config.flows_d
    };
    output::write_json(
        dir,
        "summary.json",
        &SummaryDoc::new(summary_d, config.equiprobable_flows, &summary),
    )?;
    output::write_json(dir, "manifest.json", &manifest("analyze", config, &loaded))?;
    Ok(())
}

/// The `sweep` subcommand: the band-width sweep table only (plus its
/// manifest).
pub fn run_sweep(config: &RunConfig) -> Result<()> {
    let spec = embedding(config)?;
    let loaded = load_panel(config)?;
    let sweep = d_sweep(
        &loaded.panel.index,
        &loaded.panel.stocks,
        &config.d_grid,
        spec,
        &surrogate_cfg(config, STAGE_SWEEP),
    )
    .map_err(|e| CliError::data("sweep", e))?;

    std::fs::create_dir_all(&config.output_dir).map_err(|e| {
        CliError::internal("write", format!("{}: {e}", config.output_dir.display()))
    })?;
    let dir = config.output_dir.as_path();
    output::write_sweep(dir, &sweep)?;
    output::write_json(dir, "manifest.json", &manifest("sweep", config, &loaded))?;
    Ok(())
}

/// Fixture parameters for `gen-fixture`.
pub struct FixtureSpec {
    pub n_stocks: usize,
    pub coupling: f64,
    pub idiosyncratic_vol: f64,
    pub length: usize,
    pub seed: u64,
}

/// The `gen-fixture` subcommand: emit a toy-market panel as price CSVs
/// ready for `analyze`.
pub fn run_gen_fixture(spec: &FixtureSpec, output_dir: &Path) -> Result<()> {
    let market = teflow::gen_toy_market(
        &teflow::ToyMarketSpec::new(
            spec.n_stocks,
            spec.coupling,
            spec.idiosyncratic_vol,
            spec.length,
            spec.seed,
        )
        .map_err(|e| CliError::usage(e.to_string()))?,
    )
    .map_err(|e| CliError::internal("gen-fixture", e))?;

    std::fs::create_dir_all(output_dir)
        .map_err(|e| CliError::internal("write", format!("{}: {e}", output_dir.display())))?;
    write_prices(output_dir, &market.index)?;
    for stock in &market.stocks {
        write_prices(output_dir, stock)?;
    }
    Ok(())
}

/// Convert a return series to a price CSV starting at 100 on the weekday
/// before the first return date.
fn write_prices(dir: &Path, returns: &teflow::ReturnSeries) -> Result<()> {
    let path = dir.join(format!("{}.csv", returns.instrument_id()));
    let mut w = csv::Writer::from_path(&path)
        .map_err(|e| CliError::internal("write", format!("{}: {e}", path.display())))?;
    let fail = |e: csv::Error| CliError::internal("write", format!("{}: {e}", path.display()));

    let first = returns.values()[0].0;
    let mut day = first.pred_opt().unwrap();
    while day.weekday() == chrono::Weekday::Sat || day.weekday() == chrono::Weekday::Sun {
        day = day.pred_opt().unwrap();
    }

    w.write_record(["date", "close"]).map_err(fail)?;
    let mut price = 100.0f64;
    w.write_record([day.to_string(), price.to_string()])
        .map_err(fail)?;
    for &(date, x) in returns.values() {
        price *= x.exp();
        w.write_record([date.to_string(), price.to_string()])
            .map_err(fail)?;
    }
    w.flush()
        .map_err(|e| CliError::internal("write", format!("{}: {e}", path.display())))?;
    Ok(())
}
