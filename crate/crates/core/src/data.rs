//! Iris ingestion, the Setosa/Virginica subset, `[0, π]` feature scaling,
//! stratified splitting, and Bloch-sphere exports of the encodings.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{expval, DensityMatrix, Observable};
use crate::error::{Error, Result};
use crate::fmt_f64;
use crate::gates::{apply_unitary, Gate};
use crate::linalg2::Complex;

/// The Iris file shipped with the crate (150 rows plus a header line).
pub const BUNDLED_IRIS: &str = include_str!("../data/iris.csv");
/// SHA-256 of [`BUNDLED_IRIS`].
pub const BUNDLED_IRIS_SHA256: &str =
    "09d1766be79ec606b4c045059bc4b0d3e6a693b61d1cdfc6bdd45af42531df65";

pub const ENCODING_CSV_HEADER: &str = "scheme,x,y,z,label";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrisClass {
    Setosa,
    Versicolor,
    Virginica,
}

impl FromStr for IrisClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let name = lower.strip_prefix("iris-").unwrap_or(&lower);
        match name {
            "setosa" => Ok(IrisClass::Setosa),
            "versicolor" | "versicolour" => Ok(IrisClass::Versicolor),
            "virginica" => Ok(IrisClass::Virginica),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrisRow {
    pub features: [f64; 4],
    pub class: IrisClass,
}

/// Class label carried by a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn value(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    /// Sign readout; an exact zero counts as positive.
    pub fn from_output(f: f64) -> Label {
        if f >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "1",
            Label::Negative => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub features: [f64; 2],
    pub label: Label,
}

/// Per-feature min-max map onto `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Scaling {
    /// Fits on `samples`; a constant feature is an error.
    pub fn fit(samples: &[Sample]) -> Result<Scaling> {
        if samples.is_empty() {
            return Err(Error::Input("cannot fit scaling on an empty set".into()));
        }
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for s in samples {
            for k in 0..2 {
                min[k] = min[k].min(s.features[k]);
                max[k] = max[k].max(s.features[k]);
            }
        }
        for k in 0..2 {
            if max[k].partial_cmp(&min[k]) != Some(std::cmp::Ordering::Greater) {
                return Err(Error::Input(format!(
                    "feature {k} is degenerate (min = max)"
                )));
            }
        }
        Ok(Scaling { min, max })
    }

    pub fn scale(&self, x: [f64; 2]) -> [f64; 2] {
        [0, 1].map(|k| (x[k] - self.min[k]) / (self.max[k] - self.min[k]) * PI)
    }

    pub fn unscale(&self, x: [f64; 2]) -> [f64; 2] {
        [0, 1].map(|k| x[k] / PI * (self.max[k] - self.min[k]) + self.min[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    /// Set once the features have been mapped to radians.
    pub scaling: Option<Scaling>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.samples.iter().filter(|s| s.label == label).count()
    }
}

pub fn load_iris(path: &Path) -> Result<Vec<IrisRow>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_iris(&text)
}

/// Parses Iris CSV text: four numeric features and a class name per row.
/// A first line whose first field is not numeric is taken as a header.
/// Rows are numbered from 1 as they appear in the file.
pub fn parse_iris(text: &str) -> Result<Vec<IrisRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 1;
        let record = record.map_err(|e| Error::Row {
            row: line,
            message: e.to_string(),
        })?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if idx == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != 5 {
            return Err(Error::Row {
                row: line,
                message: format!("expected 5 fields, found {}", record.len()),
            });
        }
        let mut features = [0.0; 4];
        for (k, slot) in features.iter_mut().enumerate() {
            let field = &record[k];
            *slot = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Row {
                    row: line,
                    message: format!("field {} is not a number: `{field}`", k + 1),
                })?;
        }
        let class = record[4].parse::<IrisClass>().map_err(|_| Error::Row {
            row: line,
            message: format!("unknown class `{}`", &record[4]),
        })?;
        rows.push(IrisRow { features, class });
    }
    if rows.is_empty() {
        return Err(Error::Input("no data rows found".into()));
    }
    Ok(rows)
}

/// Setosa (+1) and Virginica (−1), sepal length and width only.
pub fn select_binary(rows: &[IrisRow]) -> Result<Dataset> {
    for needed in [IrisClass::Setosa, IrisClass::Virginica] {
        if !rows.iter().any(|r| r.class == needed) {
            return Err(Error::Input(format!("class {needed:?} is absent")));
        }
    }
    let samples = rows
        .iter()
        .filter_map(|r| {
            let label = match r.class {
                IrisClass::Setosa => Label::Positive,
                IrisClass::Virginica => Label::Negative,
                IrisClass::Versicolor => return None,
            };
            Some(Sample {
                features: [r.features[0], r.features[1]],
                label,
            })
        })
        .collect();
    Ok(Dataset {
        samples,
        scaling: None,
    })
}

/// Stratified split, then min-max scaling fitted on the training part only.
///
/// Each label contributes `round(split_fraction · n_label)` samples to the
/// training set. Both parts keep the original sample order.
pub fn scale_and_split(
    dataset: &Dataset,
    split_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(split_fraction > 0.0 && split_fraction < 1.0) {
        return Err(Error::Input(format!(
            "split fraction {split_fraction} must lie in (0, 1)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_idx = BTreeSet::new();
    for label in [Label::Positive, Label::Negative] {
        let mut idx: Vec<usize> = (0..dataset.len())
            .filter(|&i| dataset.samples[i].label == label)
            .collect();
        idx.shuffle(&mut rng);
        let take = (split_fraction * idx.len() as f64).round() as usize;
        train_idx.extend(idx.into_iter().take(take));
    }
    let (train, test): (Vec<_>, Vec<_>) = dataset
        .samples
        .iter()
        .enumerate()
        .partition(|(i, _)| train_idx.contains(i));
    let train: Vec<Sample> = train.into_iter().map(|(_, s)| *s).collect();
    let test: Vec<Sample> = test.into_iter().map(|(_, s)| *s).collect();
    let scaling = Scaling::fit(&train)?;
    let rescale = |set: Vec<Sample>| Dataset {
        samples: set
            .into_iter()
            .map(|s| Sample {
                features: scaling.scale(s.features),
                label: s.label,
            })
            .collect(),
        scaling: Some(scaling),
    };
    Ok((rescale(train), rescale(test)))
}

/// `(x₀|0⟩ + x₁|1⟩)/‖x‖`
pub fn amplitude_encode(x: [f64; 2]) -> Result<DensityMatrix> {
    if x[0] == 0.0 && x[1] == 0.0 {
        return Err(Error::Input(
            "cannot amplitude-encode the zero vector".into(),
        ));
    }
    DensityMatrix::from_pure(Complex::real(x[0]), Complex::real(x[1]))
}

/// `(Tr Xρ, Tr Yρ, Tr Zρ)`
pub fn bloch_coords(rho: &DensityMatrix) -> [f64; 3] {
    [
        Observable::pauli_x(),
        Observable::pauli_y(),
        Observable::pauli_z(),
    ]
    .map(|o| expval(&o, rho.mat(), None).expect("Hermitian state gives a real trace"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingScheme {
    RyRx,
    RzRx,
    RxRy,
    Amplitude,
}

impl EncodingScheme {
    pub const ALL: [EncodingScheme; 4] = [
        EncodingScheme::RyRx,
        EncodingScheme::RzRx,
        EncodingScheme::RxRy,
        EncodingScheme::Amplitude,
    ];

    /// State for a scaled feature pair. Rotation schemes apply the first gate
    /// with `x₀`, then the second with `x₁`, starting from `|0⟩`.
    pub fn encode(self, x: [f64; 2]) -> Result<DensityMatrix> {
        let (first, second) = match self {
            EncodingScheme::RyRx => (Gate::ry(x[0]), Gate::rx(x[1])),
            EncodingScheme::RzRx => (Gate::rz(x[0]), Gate::rx(x[1])),
            EncodingScheme::RxRy => (Gate::rx(x[0]), Gate::ry(x[1])),
            EncodingScheme::Amplitude => return amplitude_encode(x),
        };
        let rho = apply_unitary(&first, &DensityMatrix::ket0(), None);
        Ok(apply_unitary(&second, &rho, None))
    }
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingScheme::RyRx => "RYRX",
            EncodingScheme::RzRx => "RZRX",
            EncodingScheme::RxRy => "RXRY",
            EncodingScheme::Amplitude => "AMPLITUDE",
        })
    }
}

impl FromStr for EncodingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "RYRX" => Ok(EncodingScheme::RyRx),
            "RZRX" => Ok(EncodingScheme::RzRx),
            "RXRY" => Ok(EncodingScheme::RxRy),
            "AMPLITUDE" => Ok(EncodingScheme::Amplitude),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingRow {
    pub scheme: EncodingScheme,
    pub bloch: [f64; 3],
    pub label: Label,
}

/// Bloch coordinates of every sample under `scheme`, in sample order.
pub fn encoding_viz(dataset: &Dataset, scheme: EncodingScheme) -> Result<Vec<EncodingRow>> {
    dataset
        .samples
        .iter()
        .map(|s| {
            Ok(EncodingRow {
                scheme,
                bloch: bloch_coords(&scheme.encode(s.features)?),
                label: s.label,
            })
        })
        .collect()
}

pub fn encoding_csv(rows: &[EncodingRow]) -> String {
    let mut out = String::from(ENCODING_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let [x, y, z] = r.bloch;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.scheme,
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(z),
            r.label
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::channels::{depolarize_modified, validate_density};

    fn canonical() -> Vec<IrisRow> {
        parse_iris(BUNDLED_IRIS).unwrap()
    }

    fn norm(v: [f64; 3]) -> f64 {
        v.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    #[test]
    fn canonical_file_has_150_rows() {
        let rows = canonical();
        assert_eq!(rows.len(), 150);
        assert_eq!(rows[0].features, [5.1, 3.5, 1.4, 0.2]);
        assert_eq!(rows[0].class, IrisClass::Setosa);
        assert_eq!(rows[149].class, IrisClass::Virginica);
    }

    #[test]
    fn malformed_rows_are_named() {
        let text = "5.1,3.5,1.4,0.2,Iris-setosa\n4.9,3.0,1.4,Iris-setosa\n";
        match parse_iris(text) {
            Err(Error::Row { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
        let text = "5.1,3.5,1.4,abc,Iris-setosa\n";
        assert!(matches!(parse_iris(text), Err(Error::Row { row: 1, .. })));
        let text = "5.1,3.5,1.4,0.2,Iris-rosea\n";
        assert!(matches!(parse_iris(text), Err(Error::Row { row: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(parse_iris("").is_err());
        assert!(parse_iris("a,b,c,d,e\n").is_err());
    }

    #[test]
    fn header_is_optional() {
        let with = "sl,sw,pl,pw,class\n5.1,3.5,1.4,0.2,setosa\n";
        let without = "5.1,3.5,1.4,0.2,setosa\n";
        assert_eq!(parse_iris(with).unwrap(), parse_iris(without).unwrap());
    }

    #[test]
    fn missing_file_is_an_error() {
        assert!(matches!(
            load_iris(Path::new("/nonexistent/iris.csv")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn binary_subset_counts() {
        let rows = canonical();
        let ds = select_binary(&rows).unwrap();
        assert_eq!(ds.len(), 100);
        assert_eq!(ds.count(Label::Positive), 50);
        assert_eq!(ds.count(Label::Negative), 50);
        assert_eq!(
            ds.samples[0].features,
            [rows[0].features[0], rows[0].features[1]]
        );
        let versicolor: Vec<_> = rows
            .iter()
            .filter(|r| r.class == IrisClass::Versicolor)
            .collect();
        assert!(!versicolor.is_empty());
        let only_setosa: Vec<_> = rows
            .iter()
            .copied()
            .filter(|r| r.class == IrisClass::Setosa)
            .collect();
        assert!(select_binary(&only_setosa).is_err());
    }

    #[test]
    fn split_is_stratified_and_scaled() {
        let ds = select_binary(&canonical()).unwrap();
        let (train, test) = scale_and_split(&ds, 0.7, 42).unwrap();
        assert_eq!((train.len(), test.len()), (70, 30));
        assert_eq!(train.count(Label::Positive), 35);
        assert_eq!(train.count(Label::Negative), 35);
        assert_eq!(test.count(Label::Positive), 15);
        for k in 0..2 {
            let lo = train
                .samples
                .iter()
                .map(|s| s.features[k])
                .fold(f64::INFINITY, f64::min);
            let hi = train
                .samples
                .iter()
                .map(|s| s.features[k])
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(lo, 0.0);
            assert!((hi - PI).abs() < 1e-15);
        }
        let again = scale_and_split(&ds, 0.7, 42).unwrap();
        assert_eq!(again.0, train);
        assert_eq!(again.1, test);
    }

    #[test]
    fn split_is_a_partition() {
        let ds = select_binary(&canonical()).unwrap();
        let (train, test) = scale_and_split(&ds, 0.6, 3).unwrap();
        let scaling = train.scaling.unwrap();
        let mut recovered: Vec<[f64; 2]> = train
            .samples
            .iter()
            .chain(test.samples.iter())
            .map(|s| scaling.unscale(s.features))
            .collect();
        let mut original: Vec<[f64; 2]> = ds.samples.iter().map(|s| s.features).collect();
        let key =
            |v: &[f64; 2]| (v[0] * 1e6).round() as i64 * 10_000_000 + (v[1] * 1e6).round() as i64;
        recovered.sort_by_key(key);
        original.sort_by_key(key);
        assert_eq!(recovered.len(), original.len());
        for (a, b) in recovered.iter().zip(&original) {
            assert!((a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn split_rejects_bad_fraction_and_degenerate_features() {
        let ds = select_binary(&canonical()).unwrap();
        assert!(scale_and_split(&ds, 0.0, 1).is_err());
        assert!(scale_and_split(&ds, 1.0, 1).is_err());
        let flat = Dataset {
            samples: (0..10)
                .map(|i| Sample {
                    features: [1.0, i as f64],
                    label: if i % 2 == 0 {
                        Label::Positive
                    } else {
                        Label::Negative
                    },
                })
                .collect(),
            scaling: None,
        };
        assert!(scale_and_split(&flat, 0.5, 1).is_err());
    }

    #[test]
    fn amplitude_cases() {
        let zero = amplitude_encode([1.0, 0.0]).unwrap();
        assert_eq!(zero, DensityMatrix::ket0());
        let plus = amplitude_encode([1.0, 1.0]).unwrap();
        assert!(bloch_coords(&plus)[2].abs() < 1e-15);
        assert!(amplitude_encode([0.0, 0.0]).is_err());
        for x in [[0.3, 2.0], [5.0, 0.1], [-1.0, 4.0]] {
            let rho = amplitude_encode(x).unwrap();
            assert!(validate_density(rho.mat(), 1e-12).pass);
        }
    }

    #[test]
    fn bloch_cases() {
        assert_eq!(bloch_coords(&DensityMatrix::ket0()), [0.0, 0.0, 1.0]);
        assert_eq!(
            bloch_coords(&DensityMatrix::maximally_mixed()),
            [0.0, 0.0, 0.0]
        );
        let v = bloch_coords(&EncodingScheme::RyRx.encode([FRAC_PI_2, 0.0]).unwrap());
        assert!((norm(v) - 1.0).abs() < 1e-12);
        assert!((v[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_norm_shrinks_with_noise() {
        let rho = EncodingScheme::RyRx.encode([0.7, 1.9]).unwrap();
        assert!((norm(bloch_coords(&rho)) - 1.0).abs() < 1e-10);
        let mut last = f64::INFINITY;
        for p in [0.0, 0.05, 0.1, 0.2, 0.4, 0.6] {
            let n = norm(bloch_coords(&depolarize_modified(&rho, p, None).unwrap()));
            assert!(n < last);
            last = n;
        }
    }

    #[test]
    fn encoding_rows() {
        let ds = select_binary(&canonical()).unwrap();
        let (train, _) = scale_and_split(&ds, 0.7, 42).unwrap();
        for scheme in EncodingScheme::ALL {
            let rows = encoding_viz(&train, scheme).unwrap();
            assert_eq!(rows.len(), train.len());
            for r in &rows {
                assert!(norm(r.bloch) <= 1.0 + 1e-10);
                if scheme == EncodingScheme::Amplitude {
                    assert_eq!(r.bloch[1], 0.0);
                }
            }
        }
        assert!("RYRZ".parse::<EncodingScheme>().is_err());
        let csv = encoding_csv(&encoding_viz(&train, EncodingScheme::RzRx).unwrap());
        assert_eq!(csv.lines().filter(|l| *l == ENCODING_CSV_HEADER).count(), 1);
        assert_eq!(csv.lines().count(), train.len() + 1);
    }
}
