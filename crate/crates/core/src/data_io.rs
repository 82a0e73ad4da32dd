//! Dataset ingestion (libsvm text format) and seeded synthetic generators.
//!
//! Generators run on a counter-based portable RNG with one substream per
//! artifact (ground-truth vector, features, label flips), so a seed pins the
//! dataset bit-for-bit across platforms.

use std::io::BufRead;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::vecmath::Matrix;

/// Dense feature matrix with ±1 labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<f64>,
    provenance: String,
}

impl Dataset {
    pub fn from_parts(features: Matrix, labels: Vec<f64>, provenance: String) -> Result<Self> {
        if labels.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                expected: features.rows(),
                got: labels.len(),
            });
        }
        if labels.iter().any(|&b| b != 1.0 && b != -1.0) {
            return Err(Error::Infeasible("labels must be exactly ±1".into()));
        }
        if !features.is_finite() {
            return Err(Error::NonFinite { what: "features" });
        }
        Ok(Self {
            features,
            labels,
            provenance,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn num_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn num_features(&self) -> usize {
        self.features.cols()
    }
}

/// Parse the libsvm text format: one sample per nonempty line,
/// `<label> <index>:<value> ...` with 1-based strictly increasing indices.
/// Anything after `#` on a line is a comment. The two distinct raw labels map
/// to ±1 with the numerically larger becoming +1.
pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut raw_labels: Vec<f64> = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut max_index = 0usize;
    let mut distinct: Vec<f64> = Vec::new();

    for (line_no, line) in reader.lines().enumerate() {
        let line_no = line_no + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label_token = tokens.next().expect("nonempty line has a first token");
        let label: f64 = label_token.parse().map_err(|_| Error::MalformedToken {
            line: line_no,
            token: label_token.to_string(),
        })?;
        if !distinct.contains(&label) {
            distinct.push(label);
            if distinct.len() > 2 {
                return Err(Error::TooManyLabels { line: line_no });
            }
        }

        let mut entries: Vec<(usize, f64)> = Vec::new();
        let mut prev_index = 0usize;
        for token in tokens {
            let malformed = || Error::MalformedToken {
                line: line_no,
                token: token.to_string(),
            };
            let (idx_str, val_str) = token.split_once(':').ok_or_else(malformed)?;
            let index: usize = idx_str.parse().map_err(|_| malformed())?;
            let value: f64 = val_str.parse().map_err(|_| malformed())?;
            if index == 0 {
                return Err(malformed());
            }
            if !value.is_finite() {
                return Err(malformed());
            }
            if index <= prev_index {
                return Err(Error::NonincreasingIndex { line: line_no });
            }
            prev_index = index;
            max_index = max_index.max(index);
            entries.push((index, value));
        }
        raw_labels.push(label);
        rows.push(entries);
    }

    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n = max_index.max(1);
    let mut features = Matrix::zeros(rows.len(), n);
    for (i, entries) in rows.iter().enumerate() {
        for &(index, value) in entries {
            features.set(i, index - 1, value);
        }
    }

    let positive = match distinct.len() {
        1 => {
            // single-class file: keep −1 as −1, anything else becomes +1
            if distinct[0] < 0.0 {
                f64::INFINITY
            } else {
                distinct[0]
            }
        }
        _ => distinct[0].max(distinct[1]),
    };
    let labels: Vec<f64> = raw_labels
        .iter()
        .map(|&l| if l == positive { 1.0 } else { -1.0 })
        .collect();

    Dataset::from_parts(features, labels, "libsvm".into())
}

/// Serialize a dataset back to libsvm text. All entries are written, so a
/// parse round trip reproduces the dense feature matrix exactly.
pub fn write_libsvm(dataset: &Dataset) -> String {
    let mut out = String::new();
    for i in 0..dataset.num_samples() {
        let label = if dataset.labels()[i] > 0.0 { "+1" } else { "-1" };
        out.push_str(label);
        for (j, &v) in dataset.features().row(i).iter().enumerate() {
            out.push_str(&format!(" {}:{}", j + 1, v));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureDistribution {
    /// `a_ij ~ N(0, 1)`.
    Normal,
    /// `a_ij ~ U[0, 1]`.
    Uniform,
}

/// Sample a classification instance: features per `dist`, labels from the
/// sign of a hidden normal direction (sign(0) → +1), then exactly
/// `round(flip·m)` labels flipped, chosen uniformly without replacement.
pub fn generate_synthetic_dro(
    n: usize,
    m: usize,
    dist: FeatureDistribution,
    flip: f64,
    seed: u64,
) -> Result<Dataset> {
    if n == 0 || m == 0 {
        return Err(Error::Empty { what: "dataset shape" });
    }
    if !(0.0..=1.0).contains(&flip) {
        return Err(Error::InvalidParameter {
            name: "flip fraction",
            value: flip,
        });
    }

    let mut truth_rng = substream(seed, 0);
    let ground_truth: Vec<f64> = (0..n)
        .map(|_| StandardNormal.sample(&mut truth_rng))
        .collect();

    let mut feature_rng = substream(seed, 1);
    let mut features = Matrix::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            let v = match dist {
                FeatureDistribution::Normal => StandardNormal.sample(&mut feature_rng),
                FeatureDistribution::Uniform => feature_rng.random_range(0.0..1.0),
            };
            features.set(i, j, v);
        }
    }

    let mut labels: Vec<f64> = (0..m)
        .map(|i| {
            let margin: f64 = features
                .row(i)
                .iter()
                .zip(&ground_truth)
                .map(|(&a, &x)| a * x)
                .sum();
            if margin < 0.0 {
                -1.0
            } else {
                1.0
            }
        })
        .collect();

    let mut flip_rng = substream(seed, 2);
    let flips = (flip * m as f64).round() as usize;
    for idx in sample(&mut flip_rng, m, flips) {
        labels[idx] = -labels[idx];
    }

    let tag = match dist {
        FeatureDistribution::Normal => "normal",
        FeatureDistribution::Uniform => "uniform",
    };
    Dataset::from_parts(
        features,
        labels,
        format!("synthetic-{tag}(n={n},m={m},flip={flip},seed={seed})"),
    )
}

/// Payoff matrix with i.i.d. entries, `U[0,1]` or `N(0,1)`.
pub fn generate_matrix(
    n: usize,
    m: usize,
    dist: FeatureDistribution,
    seed: u64,
) -> Result<Matrix> {
    if n == 0 || m == 0 {
        return Err(Error::Empty { what: "matrix shape" });
    }
    let mut rng = substream(seed, 0);
    let mut a = Matrix::zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let v = match dist {
                FeatureDistribution::Uniform => rng.random_range(0.0..1.0),
                FeatureDistribution::Normal => StandardNormal.sample(&mut rng),
            };
            a.set(i, j, v);
        }
    }
    Ok(a)
}

fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
