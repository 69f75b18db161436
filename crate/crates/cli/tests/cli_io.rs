//! Ingestion, alignment, config, and output round-trip behavior.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use teflow::{PriceSeries, SurrogateConfig};
use teflow_cli::config::{parse_config_file, PartialConfig};
use teflow_cli::output::{parse_flows, sig12, write_flows};
use teflow_cli::{align_panel, ingest_csv, run_analyze, CliError};

fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn day(s: &str) -> NaiveDate {
    s.parse().unwrap()
}

fn prices(id: &str, rows: &[(&str, f64)]) -> PriceSeries {
    PriceSeries::new(id, rows.iter().map(|&(d, c)| (day(d), c)).collect()).unwrap()
}

#[test]
fn ingest_parses_a_two_row_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "abc.csv",
        "date,close\n2020-01-02,100\n2020-01-03,101\n",
    );
    let ingested = ingest_csv(&path).unwrap();
    assert_eq!(ingested.series.instrument_id(), "abc");
    assert_eq!(ingested.series.len(), 2);
    assert!(ingested.warnings.is_empty());
}

#[test]
fn ingest_rejects_duplicate_dates_naming_the_date() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "dup.csv",
        "date,close\n2020-01-02,100\n2020-01-02,101\n",
    );
    let err = ingest_csv(&path).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("2020-01-02"), "{err}");
}

#[test]
fn ingest_sorts_unsorted_rows_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "uns.csv",
        "date,close\n2020-01-03,101\n2020-01-02,100\n",
    );
    let ingested = ingest_csv(&path).unwrap();
    assert_eq!(ingested.series.observations()[0].0, day("2020-01-02"));
    assert_eq!(ingested.warnings.len(), 1);
    assert!(ingested.warnings[0].contains("sorted"));
}

#[test]
fn ingest_reports_malformed_rows_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "bad.csv",
        "date,close\n2020-01-02,100\nnot-a-date,101\n",
    );
    let err = ingest_csv(&path).unwrap_err();
    assert!(err.to_string().contains(":3"), "{err}");
}

#[test]
fn ingest_rejects_nonpositive_close() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "neg.csv",
        "date,close\n2020-01-02,100\n2020-01-03,-5\n",
    );
    let err = ingest_csv(&path).unwrap_err();
    assert!(err.to_string().contains("nonpositive"), "{err}");
    assert!(err.to_string().contains("2020-01-03"), "{err}");
}

#[test]
fn ingest_rejects_wrong_header_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "hdr.csv", "day,price\n2020-01-02,100\n");
    assert!(ingest_csv(&path)
        .unwrap_err()
        .to_string()
        .contains("date,close"));
    let missing = ingest_csv(&dir.path().join("nope.csv")).unwrap_err();
    assert_eq!(missing.exit_code(), 2);
}

#[test]
fn align_keeps_everything_when_supports_match() {
    let rows: Vec<(&str, f64)> = vec![
        ("2020-01-02", 10.0),
        ("2020-01-03", 11.0),
        ("2020-01-06", 12.0),
        ("2020-01-07", 11.5),
        ("2020-01-08", 12.5),
    ];
    let (panel, report) = align_panel(
        vec![prices("idx", &rows), prices("a", &rows), prices("b", &rows)],
        "idx",
        3,
    )
    .unwrap();
    assert_eq!(panel.dates.len(), 5);
    assert_eq!(panel.index.len(), 4);
    assert_eq!(panel.stocks.len(), 2);
    assert!(report.dropped_instruments.is_empty());
    assert!(report.removed_dates.is_empty());
}

#[test]
fn align_removes_a_missing_interior_date_everywhere() {
    let full: Vec<(&str, f64)> = vec![
        ("2020-01-02", 10.0),
        ("2020-01-03", 11.0),
        ("2020-01-06", 12.0),
        ("2020-01-07", 11.5),
        ("2020-01-08", 12.5),
    ];
    let gappy: Vec<(&str, f64)> = vec![
        ("2020-01-02", 20.0),
        ("2020-01-03", 21.0),
        ("2020-01-07", 21.5),
        ("2020-01-08", 22.5),
    ];
    let (panel, report) = align_panel(
        vec![
            prices("idx", &full),
            prices("a", &gappy),
            prices("b", &full),
        ],
        "idx",
        3,
    )
    .unwrap();
    assert_eq!(panel.dates.len(), 4);
    assert!(!panel.dates.contains(&day("2020-01-06")));
    // both full instruments lost that date, the gappy one lost none
    let trimmed: Vec<&str> = report
        .removed_dates
        .iter()
        .map(|(id, _)| id.as_str())
        .collect();
    assert_eq!(trimmed, ["idx", "b"]);
}

#[test]
fn align_rejects_disjoint_supports_and_unknown_index() {
    let a: Vec<(&str, f64)> = vec![
        ("2020-01-02", 10.0),
        ("2020-01-03", 11.0),
        ("2020-01-06", 12.0),
        ("2020-01-07", 13.0),
    ];
    let b: Vec<(&str, f64)> = vec![
        ("2021-01-04", 10.0),
        ("2021-01-05", 11.0),
        ("2021-01-06", 12.0),
        ("2021-01-07", 13.0),
    ];
    let err = align_panel(vec![prices("idx", &a), prices("x", &b)], "idx", 3).unwrap_err();
    assert!(err.to_string().contains("no trading days"), "{err}");

    let err = align_panel(vec![prices("idx", &a), prices("x", &a)], "nope", 3).unwrap_err();
    assert!(err.to_string().contains("nope"), "{err}");
}

#[test]
fn align_drops_hopeless_instruments_with_a_warning() {
    let full: Vec<(&str, f64)> = vec![
        ("2020-01-02", 10.0),
        ("2020-01-03", 11.0),
        ("2020-01-06", 12.0),
        ("2020-01-07", 11.5),
    ];
    let stub: Vec<(&str, f64)> = vec![("2020-01-02", 5.0)];
    let (panel, report) = align_panel(
        vec![
            prices("idx", &full),
            prices("a", &full),
            prices("tiny", &stub),
        ],
        "idx",
        3,
    )
    .unwrap();
    // the one-row instrument must not shrink the panel to a single day
    assert_eq!(panel.dates.len(), 4);
    assert_eq!(report.dropped_instruments.len(), 1);
    assert_eq!(report.dropped_instruments[0].0, "tiny");
}

#[test]
fn config_file_roundtrip_and_unknown_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(
        dir.path(),
        "run.conf",
        "# comment\ninputs = a.csv, b.csv\nindex_id = a\nseed = 7\nd_grid = 0.0, 0.01\noutput_dir = out\nshuffle_both = true\n",
    );
    let cfg = parse_config_file(&path).unwrap();
    let resolved = cfg.resolve().unwrap();
    assert_eq!(resolved.inputs.len(), 2);
    assert_eq!(resolved.seed, 7);
    assert_eq!(resolved.d_grid, vec![0.0, 0.01]);
    assert!(resolved.shuffle_both);

    let bad = write_file(dir.path(), "bad.conf", "frobnicate = 1\n");
    let err = parse_config_file(&bad).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("frobnicate"));
}

#[test]
fn flows_csv_round_trips_at_printed_precision() {
    let market =
        teflow::gen_toy_market(&teflow::ToyMarketSpec::new(3, 0.7, 0.01, 80, 21).unwrap()).unwrap();
    let index = teflow::discretize(&market.index, 0.01).unwrap();
    let stocks: Vec<_> = market
        .stocks
        .iter()
        .map(|s| teflow::discretize(s, 0.01).unwrap())
        .collect();
    let flows = teflow::pairwise_flow(
        &index,
        &stocks,
        teflow::EmbeddingSpec::new(1, 1).unwrap(),
        &SurrogateConfig::new(4, 17),
    )
    .unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = write_flows(dir.path(), &flows).unwrap();
    let parsed = parse_flows(&path).unwrap();
    assert_eq!(parsed.len(), flows.len());
    for (a, b) in flows.iter().zip(&parsed) {
        assert_eq!(a.stock_id, b.stock_id);
        assert_eq!(sig12(a.d), sig12(b.d));
        assert_eq!(sig12(a.te_index_to_stock), sig12(b.te_index_to_stock));
        assert_eq!(sig12(a.te_stock_to_index), sig12(b.te_stock_to_index));
        assert_eq!(
            sig12(a.surrogate_index_to_stock.mean),
            sig12(b.surrogate_index_to_stock.mean)
        );
        assert_eq!(
            sig12(a.surrogate_stock_to_index.std_dev),
            sig12(b.surrogate_stock_to_index.std_dev)
        );
        assert_eq!(
            a.surrogate_index_to_stock.seed,
            b.surrogate_index_to_stock.seed
        );
        assert_eq!(a.sample_count, b.sample_count);
    }
}

#[test]
fn analyze_with_unknown_index_leaves_no_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let rows = "date,close\n2020-01-02,100\n2020-01-03,101\n2020-01-06,102\n2020-01-07,101\n2020-01-08,103\n";
    let a = write_file(dir.path(), "a.csv", rows);
    let b = write_file(dir.path(), "b.csv", rows);
    let out = dir.path().join("out");
    let config = PartialConfig {
        inputs: vec![a, b],
        index_id: Some("missing".into()),
        output_dir: Some(out.clone()),
        surrogates: Some(1),
        d_grid: Some(vec![0.0, 0.01]),
        ..Default::default()
    }
    .resolve()
    .unwrap();
    let err = run_analyze(&config).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(matches!(err, CliError::Data { stage: "align", .. }));
    assert!(!out.exists(), "no partial outputs may be written");
}

#[test]
fn sweep_subcommand_writes_only_its_tables() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/toy");
    let out = dir.path().join("out");
    let config = PartialConfig {
        inputs: vec![fixtures.join("index.csv"), fixtures.join("stock_00.csv")],
        index_id: Some("index".into()),
        output_dir: Some(out.clone()),
        surrogates: Some(2),
        d_grid: Some(vec![0.0, 0.01]),
        seed: Some(5),
        ..Default::default()
    }
    .resolve()
    .unwrap();
    teflow_cli::run_sweep(&config).unwrap();
    assert!(out.join("sweep.csv").exists());
    assert!(out.join("manifest.json").exists());
    assert!(!out.join("flows.csv").exists());
    assert!(!out.join("summary.json").exists());
}

#[test]
fn gen_fixture_output_is_ingestible_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = dir.path().join("f1");
    let out2 = dir.path().join("f2");
    let spec = teflow_cli::FixtureSpec {
        n_stocks: 2,
        coupling: 0.5,
        idiosyncratic_vol: 0.01,
        length: 30,
        seed: 77,
    };
    teflow_cli::run_gen_fixture(&spec, &out1).unwrap();
    teflow_cli::run_gen_fixture(&spec, &out2).unwrap();
    for name in ["index.csv", "stock_00.csv", "stock_01.csv"] {
        let a = fs::read(out1.join(name)).unwrap();
        let b = fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    let ingested = ingest_csv(&out1.join("index.csv")).unwrap();
    assert_eq!(ingested.series.len(), 31); // seed price plus one per return
}

#[test]
fn binary_maps_errors_to_exit_codes() {
    use std::process::Command;
    let bin = env!("CARGO_BIN_EXE_teflow");

    // missing required flags -> usage error
    let status = Command::new(bin)
        .args(["analyze"])
        .output()
        .expect("spawn teflow");
    assert_eq!(status.status.code(), Some(1));

    // nonexistent input file -> data error
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(bin)
        .args(["analyze", "--input", "does_not_exist.csv", "--index-id", "x"])
        .arg("--output-dir")
        .arg(dir.path().join("out"))
        .output()
        .expect("spawn teflow");
    assert_eq!(status.status.code(), Some(2));

    // --help -> success
    let status = Command::new(bin)
        .args(["--help"])
        .output()
        .expect("spawn teflow");
    assert_eq!(status.status.code(), Some(0));
}
