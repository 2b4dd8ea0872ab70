use std::str::FromStr;
use std::time::Instant;

use depolar_core::data::{encoding_csv, encoding_viz, Dataset, EncodingScheme, Sample, Scaling};
use serde_json::json;

use crate::args::EncodeArgs;
use crate::manifest::RunManifest;
use crate::{ensure_dir, load_dataset, write_file, CliError, CliResult, Outcome};

pub const ENCODING_FILE: &str = "encoding.csv";

pub fn parse_schemes(names: &[String]) -> CliResult<Vec<EncodingScheme>> {
    if names.is_empty() {
        return Err(CliError::Usage("at least one scheme is required".into()));
    }
    names
        .iter()
        .map(|n| {
            EncodingScheme::from_str(n)
                .map_err(|_| CliError::Usage(format!("unknown encoding scheme `{n}`")))
        })
        .collect()
}

/// All samples, min-max scaled onto `[0, π]` with bounds fitted on the full set.
pub fn scaled_dataset(ds: &Dataset) -> CliResult<Dataset> {
    let scaling = Scaling::fit(&ds.samples)?;
    Ok(Dataset {
        samples: ds
            .samples
            .iter()
            .map(|s| Sample {
                features: scaling.scale(s.features),
                label: s.label,
            })
            .collect(),
        scaling: Some(scaling),
    })
}

pub fn run(args: &EncodeArgs) -> CliResult<Outcome> {
    let started = Instant::now();
    let schemes = parse_schemes(&args.schemes)?;
    let ds = scaled_dataset(&load_dataset(args.data.as_deref())?)?;
    let mut rows = Vec::with_capacity(ds.len() * schemes.len());
    for &scheme in &schemes {
        rows.extend(encoding_viz(&ds, scheme)?);
    }
    ensure_dir(&args.out_dir)?;
    let path = args.out_dir.join(ENCODING_FILE);
    write_file(&path, &encoding_csv(&rows))?;
    let manifest = RunManifest::new(
        "encode-viz",
        args.seed,
        json!({
            "schemes": schemes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "data": args.data.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "bundled".into()),
            "out_dir": args.out_dir,
        }),
    );
    let artifacts = manifest.finish(&args.out_dir, vec![path], started)?;
    Ok(Outcome {
        artifacts,
        passed: true,
        report: format!("{} rows\n", rows.len()),
    })
}
