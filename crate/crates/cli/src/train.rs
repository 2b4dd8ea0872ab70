//! Depth × noise training grid.

use std::path::PathBuf;
use std::time::Instant;

use depolar_core::data::scale_and_split;
use depolar_core::fmt_f64;
use depolar_core::qml::{
    boundary_csv, decision_boundary_grid, records_csv, train, BoundaryPoint, Bounds, TrainConfig,
    TrainRecord,
};
use rayon::prelude::*;
use serde_json::json;

use crate::args::TrainArgs;
use crate::manifest::RunManifest;
use crate::{
    check_rates, ensure_dir, load_dataset, thread_pool, write_file, CliError, CliResult, Outcome,
};

pub const SUMMARY_FILE: &str = "summary.csv";
pub const SUMMARY_CSV_HEADER: &str = "depth,p,epochs,train_loss,train_acc,test_acc,precision,f1";

pub fn train_file_name(depth: usize, p: f64) -> String {
    format!("train_d{depth}_p{p}.csv")
}

pub fn boundary_file_name(depth: usize, p: f64) -> String {
    format!("boundary_d{depth}_p{p}.csv")
}

#[derive(Debug, Clone)]
pub struct CellResult {
    pub depth: usize,
    pub p: f64,
    pub records: Vec<TrainRecord>,
    pub boundary: Vec<BoundaryPoint>,
}

impl CellResult {
    pub fn last(&self) -> &TrainRecord {
        self.records.last().expect("at least one epoch")
    }

    pub fn finite(&self) -> bool {
        self.records.iter().all(|r| r.train_loss.is_finite())
    }
}

fn config(args: &TrainArgs, depth: usize, p: f64) -> TrainConfig {
    TrainConfig {
        epochs: args.epochs as usize,
        learning_rate: args.lr,
        p,
        depth,
        seed: args.seed,
        split_fraction: args.split,
        channel: args.channel.into(),
        placement: args.noise_placement.into(),
        repetitions: args.m,
        ..TrainConfig::default()
    }
}

/// Trains every (depth, p) cell; results come back in grid order whatever
/// the worker count.
pub fn run_grid(args: &TrainArgs) -> CliResult<Vec<CellResult>> {
    if args.depths.is_empty() || args.p_list.is_empty() {
        return Err(CliError::Usage(
            "depth and noise lists must be nonempty".into(),
        ));
    }
    if args.boundary_resolution < 2 {
        return Err(CliError::Usage(
            "boundary resolution must be at least 2".into(),
        ));
    }
    check_rates(&args.p_list)?;
    let cells: Vec<(usize, f64)> = args
        .depths
        .iter()
        .flat_map(|&d| args.p_list.iter().map(move |&p| (d, p)))
        .collect();
    for &(d, p) in &cells {
        config(args, d, p).validate()?;
    }
    let dataset = load_dataset(args.data.as_deref())?;
    let (train_set, test_set) = scale_and_split(&dataset, args.split, args.seed)?;
    let pool = thread_pool()?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(depth, p)| {
                let cfg = config(args, depth, p);
                let (params, records) = train(&cfg, &train_set, &test_set)?;
                let boundary = decision_boundary_grid(
                    &params,
                    &cfg.noise()?,
                    Bounds::default(),
                    args.boundary_resolution,
                )?;
                Ok(CellResult {
                    depth,
                    p,
                    records,
                    boundary,
                })
            })
            .collect::<CliResult<Vec<_>>>()
    })
}

pub fn summary_csv(results: &[CellResult]) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for r in results {
        let last = r.last();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.depth,
            fmt_f64(r.p),
            last.epoch,
            fmt_f64(last.train_loss),
            fmt_f64(last.train_accuracy),
            fmt_f64(last.test_accuracy),
            fmt_f64(last.precision),
            fmt_f64(last.f1),
        ));
    }
    out
}

pub fn run(args: &TrainArgs) -> CliResult<Outcome> {
    let started = Instant::now();
    let results = run_grid(args)?;
    ensure_dir(&args.out_dir)?;
    let mut written: Vec<PathBuf> = Vec::with_capacity(2 * results.len() + 1);
    for r in &results {
        let path = args.out_dir.join(train_file_name(r.depth, r.p));
        write_file(&path, &records_csv(&r.records))?;
        written.push(path);
        let path = args.out_dir.join(boundary_file_name(r.depth, r.p));
        write_file(&path, &boundary_csv(&r.boundary))?;
        written.push(path);
    }
    let path = args.out_dir.join(SUMMARY_FILE);
    write_file(&path, &summary_csv(&results))?;
    written.push(path);
    let manifest = RunManifest::new(
        "train",
        args.seed,
        json!({
            "depths": args.depths,
            "p_list": args.p_list,
            "epochs": args.epochs,
            "lr": args.lr,
            "split": args.split,
            "boundary_resolution": args.boundary_resolution,
            "channel": args.channel.to_string(),
            "noise_placement": args.noise_placement.to_string(),
            "m": args.m,
            "data": args.data.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "bundled".into()),
            "out_dir": args.out_dir,
        }),
    );
    let artifacts = manifest.finish(&args.out_dir, written, started)?;

    let mut passed = true;
    let mut report = String::new();
    for r in &results {
        let last = r.last();
        report += &format!(
            "depth {:>2}  p {:<6}  loss {:.4}  train {:.3}  test {:.3}\n",
            r.depth, r.p, last.train_loss, last.train_accuracy, last.test_accuracy
        );
        if !r.finite() {
            eprintln!("non-finite loss at depth {} p {}", r.depth, r.p);
            passed = false;
        }
    }
    Ok(Outcome {
        artifacts,
        passed,
        report,
    })
}
