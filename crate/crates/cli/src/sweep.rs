use std::time::Instant;

use depolar_core::channels::expectation_sweep;
use serde_json::json;

use crate::args::SweepArgs;
use crate::manifest::RunManifest;
use crate::{check_rates, ensure_dir, write_file, CliError, CliResult, Outcome};

pub const SWEEP_FILE: &str = "sweep.csv";

pub fn run(args: &SweepArgs) -> CliResult<Outcome> {
    let started = Instant::now();
    if args.gates.is_empty() || args.p_list.is_empty() || args.m_list.is_empty() {
        return Err(CliError::Usage("sweep lists must be nonempty".into()));
    }
    check_rates(&args.p_list)?;
    let grid = expectation_sweep(
        &args.gates,
        &args.p_list,
        &args.m_list,
        args.seed,
        args.noise_placement.into(),
    )?;
    ensure_dir(&args.out_dir)?;
    let path = args.out_dir.join(SWEEP_FILE);
    write_file(&path, &grid.to_csv())?;
    let manifest = RunManifest::new(
        "sweep",
        args.seed,
        json!({
            "gates": args.gates,
            "p_list": args.p_list,
            "m_list": args.m_list,
            "noise_placement": args.noise_placement.to_string(),
            "out_dir": args.out_dir,
        }),
    );
    let artifacts = manifest.finish(&args.out_dir, vec![path], started)?;
    let report = format!(
        "{} cells, max |diff| = {:e}\n",
        grid.cells.len(),
        grid.max_abs_diff()
    );
    Ok(Outcome {
        artifacts,
        passed: true,
        report,
    })
}
