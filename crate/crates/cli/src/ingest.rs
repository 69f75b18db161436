//! Price CSV ingestion.
//!
//! Expected shape: a `date,close` header, ISO-8601 dates, decimal closes.
//! Rows may arrive unsorted (they are sorted with a warning); duplicate
//! dates and nonpositive closes are rejected.

use std::path::Path;

use chrono::NaiveDate;
use teflow::PriceSeries;

use crate::error::{CliError, Result};

const STAGE: &str = "ingest";

/// A parsed price file plus any normalization warnings.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub series: PriceSeries,
    pub warnings: Vec<String>,
}

/// Read one price CSV; the instrument id is the file stem.
pub fn ingest_csv(path: &Path) -> Result<Ingested> {
    let name = path.display();
    let instrument_id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .filter(|s| !s.is_empty())
        .ok_or_else(|| CliError::data(STAGE, format!("{name}: cannot derive instrument id")))?
        .to_string();

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;

    let headers = reader
        .headers()
        .map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;
    if headers.len() != 2 || &headers[0] != "date" || &headers[1] != "close" {
        return Err(CliError::data(
            STAGE,
            format!(
                "{name}: expected header `date,close`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;
        let line = record
            .position()
            .map(|p| p.line().to_string())
            .unwrap_or_else(|| "?".into());
        if record.len() != 2 {
            return Err(CliError::data(
                STAGE,
                format!("{name}:{line}: expected 2 fields, got {}", record.len()),
            ));
        }
        let date: NaiveDate = record[0].parse().map_err(|_| {
            CliError::data(STAGE, format!("{name}:{line}: bad date `{}`", &record[0]))
        })?;
        let close: f64 = record[1].parse().map_err(|_| {
            CliError::data(STAGE, format!("{name}:{line}: bad close `{}`", &record[1]))
        })?;
        if !close.is_finite() || close <= 0.0 {
            return Err(CliError::data(
                STAGE,
                format!("{name}:{line}: nonpositive close {close} on {date}"),
            ));
        }
        rows.push((date, close));
    }

    let mut warnings = Vec::new();
    let sorted = rows.windows(2).all(|w| w[0].0 < w[1].0);
    if !sorted {
        rows.sort_by_key(|&(d, _)| d);
        warnings.push(format!("{name}: rows were not date-sorted; sorted them"));
    }
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(CliError::data(
            STAGE,
            format!("{name}: duplicate date {}", w[0].0),
        ));
    }

    let series = PriceSeries::new(instrument_id, rows)
        .map_err(|e| CliError::data(STAGE, format!("{name}: {e}")))?;
    Ok(Ingested { series, warnings })
}
