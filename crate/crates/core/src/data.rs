//! Logit containers and the derivations everything else builds on.
//!
//! A `LogitMatrix` is the universal exchange format: one row of raw
//! pre-softmax scores per sample. `LabeledLogits` pairs it with ground-truth
//! labels, from which predictions and the correctness vector follow. The
//! band-projection diagnostics quantify how tightly the logits hug the
//! hyperplane orthogonal to the all-ones direction.

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};

/// An `n x c` matrix of raw classifier logits.
///
/// Construction validates the container invariants once; every entry is
/// finite, `c >= 2`, `n >= 1`. Downstream code relies on these holding.
#[derive(Debug, Clone, PartialEq)]
pub struct LogitMatrix {
    values: Array2<f64>,
}

impl LogitMatrix {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let (n, c) = values.dim();
        if n < 1 {
            return Err(Error::invalid("logit matrix must have at least one row"));
        }
        if c < 2 {
            return Err(Error::invalid(format!(
                "logit matrix must have at least 2 classes, got {c}"
            )));
        }
        for (i, row) in values.rows().into_iter().enumerate() {
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::at_row(i, format!("non-finite logit in column {j}")));
            }
        }
        Ok(Self { values })
    }

    pub fn num_samples(&self) -> usize {
        self.values.nrows()
    }

    pub fn num_classes(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.values.row(i)
    }

    /// Predicted label per row: argmax with ties broken toward the lowest
    /// class index, so the correctness vector is reproducible.
    pub fn predictions(&self) -> Vec<usize> {
        self.values.rows().into_iter().map(|r| argmax(&r)).collect()
    }
}

/// Argmax with first-index tie-break.
pub(crate) fn argmax(row: &ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    let mut best_val = row[0];
    for (j, &v) in row.iter().enumerate().skip(1) {
        if v > best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

/// Logits paired with ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledLogits {
    logits: LogitMatrix,
    labels: Vec<usize>,
}

impl LabeledLogits {
    pub fn new(logits: LogitMatrix, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != logits.num_samples() {
            return Err(Error::invalid(format!(
                "label count {} does not match sample count {}",
                labels.len(),
                logits.num_samples()
            )));
        }
        let c = logits.num_classes();
        for (i, &y) in labels.iter().enumerate() {
            if y >= c {
                return Err(Error::at_row(i, format!("label {y} out of range for {c} classes")));
            }
        }
        Ok(Self { logits, labels })
    }

    pub fn logits(&self) -> &LogitMatrix {
        &self.logits
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_samples(&self) -> usize {
        self.logits.num_samples()
    }

    pub fn num_classes(&self) -> usize {
        self.logits.num_classes()
    }

    /// New set containing the given rows (indices may repeat).
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid("cannot select an empty subset"));
        }
        let c = self.num_classes();
        let mut values = Array2::zeros((indices.len(), c));
        let mut labels = Vec::with_capacity(indices.len());
        for (out, &i) in indices.iter().enumerate() {
            values.row_mut(out).assign(&self.logits.row(i));
            labels.push(self.labels[i]);
        }
        LabeledLogits::new(LogitMatrix::new(values)?, labels)
    }
}

/// Per-sample correctness flags; the mean is the true accuracy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectnessVector {
    flags: Vec<bool>,
}

impl CorrectnessVector {
    pub fn new(flags: Vec<bool>) -> Self {
        Self { flags }
    }

    pub fn flags(&self) -> &[bool] {
        &self.flags
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn accuracy(&self) -> f64 {
        let correct = self.flags.iter().filter(|&&d| d).count();
        correct as f64 / self.flags.len() as f64
    }
}

/// Predictions, correctness flags, and true accuracy for a labeled set.
#[derive(Debug, Clone)]
pub struct Scored {
    pub predictions: Vec<usize>,
    pub correctness: CorrectnessVector,
    pub accuracy: f64,
}

/// Derives predicted labels, the correctness vector, and the true accuracy.
pub fn predict_and_score(data: &LabeledLogits) -> Scored {
    let predictions = data.logits().predictions();
    let flags: Vec<bool> = predictions
        .iter()
        .zip(data.labels())
        .map(|(&p, &y)| p == y)
        .collect();
    let correctness = CorrectnessVector::new(flags);
    let accuracy = correctness.accuracy();
    Scored { predictions, correctness, accuracy }
}

/// Row-wise softmax with temperature scaling.
///
/// Stabilized by row-max subtraction, which the softmax shift invariance
/// makes exact. `temperature = 1` is the plain softmax.
pub fn softmax(logits: &LogitMatrix, temperature: f64) -> Result<Array2<f64>> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::invalid(format!("temperature must be positive, got {temperature}")));
    }
    let mut out = logits.values().clone();
    for mut row in out.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = ((*v - max) / temperature).exp();
            sum += *v;
        }
        row.mapv_inplace(|v| v / sum);
    }
    Ok(out)
}

/// Row-wise softmax of a single logit row.
pub fn softmax_row(row: &ArrayView1<'_, f64>, temperature: f64) -> Array1<f64> {
    let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Array1<f64> = row.mapv(|v| ((v - max) / temperature).exp());
    let sum = out.sum();
    out.mapv_inplace(|v| v / sum);
    out
}

/// Spread of logits along the all-ones direction.
#[derive(Debug, Clone, Copy)]
pub struct BandStats {
    /// Unbiased standard deviation of the projections.
    pub std: f64,
    /// Lower endpoint of the empirical central range (an order statistic).
    pub lower: f64,
    /// Upper endpoint of the empirical central range (an order statistic).
    pub upper: f64,
}

impl BandStats {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Projection length of each row onto the unit all-ones vector:
/// `l_i = (1/sqrt(c)) * sum_j z_ij`.
pub fn band_projections(logits: &LogitMatrix) -> Vec<f64> {
    let c = logits.num_classes() as f64;
    let inv_sqrt_c = 1.0 / c.sqrt();
    logits
        .values()
        .rows()
        .into_iter()
        .map(|r| r.sum() * inv_sqrt_c)
        .collect()
}

/// Std and empirical central `confidence` range of the all-ones projections.
///
/// The range endpoints are order statistics: with `q = (1 - confidence) / 2`,
/// the lower endpoint is the `floor(q * n)`-th smallest projection and the
/// upper endpoint its mirror from the top.
pub fn band_projection_stats(logits: &LogitMatrix, confidence: f64) -> Result<BandStats> {
    let n = logits.num_samples();
    if n < 2 {
        return Err(Error::invalid("band statistics require at least 2 samples"));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::invalid(format!("confidence must be in (0,1), got {confidence}")));
    }
    let mut proj = band_projections(logits);
    let mean = proj.iter().sum::<f64>() / n as f64;
    let var = proj.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    proj.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - confidence) / 2.0;
    let k = ((tail * n as f64).floor() as usize).min(n / 2);
    let k = k.min(n - 1 - k);
    Ok(BandStats { std: var.sqrt(), lower: proj[k], upper: proj[n - 1 - k] })
}

/// Upper bound on the band width for a zero-bias linear layer whose weights
/// and inputs both satisfy the Xavier variance condition: `4 z sqrt(1/(m+c))`
/// at z-score `z`, embedding dimension `m`, class count `c`.
pub fn band_width_bound(m: usize, c: usize, z: f64) -> f64 {
    debug_assert!(m >= 1 && c >= 2 && z > 0.0);
    4.0 * z * (1.0 / (m + c) as f64).sqrt()
}
