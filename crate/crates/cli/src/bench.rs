//! Multiplication counts (asserted) and timings (informational).

use std::hint::black_box;
use std::time::Instant;

use depolar_core::channels::{
    depolarize_modified, depolarize_standard, expval_modified_m, expval_standard_m, Observable,
};
use depolar_core::linalg2::{random_density_matrix, MulCounter};
use serde_json::json;

use crate::args::BenchArgs;
use crate::manifest::RunManifest;
use crate::verify::{measure_counts, EXPECTED_COUNTS};
use crate::{ensure_dir, write_file, CliResult, Outcome};

pub const BENCH_FILE: &str = "bench.json";
/// Applications per timed batch.
pub const BATCH: u32 = 1000;
const BENCH_P: f64 = 0.05;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Median nanoseconds per call of `f` over `repetitions` batches.
fn time_ns(repetitions: u64, mut f: impl FnMut()) -> f64 {
    let samples = (0..repetitions)
        .map(|_| {
            let t = Instant::now();
            for _ in 0..BATCH {
                f();
            }
            t.elapsed().as_nanos() as f64 / BATCH as f64
        })
        .collect();
    median(samples)
}

pub fn run(args: &BenchArgs) -> CliResult<Outcome> {
    let started = Instant::now();
    let rho = random_density_matrix(args.seed, false);
    let counts = measure_counts(&rho, BENCH_P)?;
    let z = Observable::pauli_z();

    let standard = time_ns(args.repetitions, || {
        black_box(depolarize_standard(black_box(&rho), BENCH_P, None).ok());
    });
    let modified = time_ns(args.repetitions, || {
        black_box(depolarize_modified(black_box(&rho), BENCH_P, None).ok());
    });
    let standard_exp = time_ns(args.repetitions, || {
        let mut c = MulCounter::new();
        black_box(expval_standard_m(&z, black_box(&rho), BENCH_P, 1, &mut c).ok());
    });
    let modified_exp = time_ns(args.repetitions, || {
        let mut c = MulCounter::new();
        black_box(expval_modified_m(&z, black_box(&rho), BENCH_P, 1, &mut c).ok());
    });

    let pass = counts == EXPECTED_COUNTS;
    let report = json!({
        "pass": pass,
        "repetitions": args.repetitions,
        "batch": BATCH,
        "seed": args.seed,
        "counts": counts,
        "expected_counts": EXPECTED_COUNTS,
        "median_ns": {
            "standard_evolution": standard,
            "modified_evolution": modified,
            "standard_expectation": standard_exp,
            "modified_expectation": modified_exp,
        },
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    ensure_dir(&args.out_dir)?;
    let path = args.out_dir.join(BENCH_FILE);
    write_file(&path, &text)?;
    let manifest = RunManifest::new(
        "bench",
        args.seed,
        json!({ "repetitions": args.repetitions, "p": BENCH_P, "out_dir": args.out_dir }),
    );
    let artifacts = manifest.finish(&args.out_dir, vec![path], started)?;
    if !pass {
        eprintln!("multiplication counts deviate from {EXPECTED_COUNTS:?}: {counts:?}");
    }
    Ok(Outcome {
        artifacts,
        passed: pass,
        report: text,
    })
}
