//! Shared data model: sample matrices, class-probability matrices and
//! Gaussian moment pairs.

use crate::error::{Error, Result};

/// Row sums of a [`ProbMatrix`] may deviate from one by at most this much
/// before the row is rejected; accepted rows are renormalized.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// An `n × dim` matrix of finite sample vectors, rows are samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    n: usize,
    dim: usize,
    values: Vec<f64>,
    labels: Option<Vec<u32>>,
}

impl DataSet {
    pub fn new(n: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::Validation(format!(
                "dataset must have n >= 1 and dim >= 1 (got n={n}, dim={dim})"
            )));
        }
        if values.len() != n * dim {
            return Err(Error::Validation(format!(
                "expected {} values for {n}x{dim}, got {}",
                n * dim,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite value {} at row {}, column {}",
                values[pos],
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self {
            n,
            dim,
            values,
            labels: None,
        })
    }

    /// Builds a dataset from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::Validation(format!(
                    "row {i} has {} columns, expected {dim}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), dim, values)
    }

    /// Attaches one class label per row.
    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Validation(format!(
                "{} labels supplied for {} rows",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    /// New dataset made of the given rows, in the given order. Labels follow
    /// their rows.
    ///
    /// Panics if an index is out of bounds.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut values = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        let mut out = Self::new(indices.len(), self.dim, values)?;
        if let Some(labels) = &self.labels {
            out.labels = Some(indices.iter().map(|&i| labels[i]).collect());
        }
        Ok(out)
    }

    /// Distinct labels in ascending order, or `None` for unlabeled data.
    pub fn classes(&self) -> Option<Vec<u32>> {
        let mut classes = self.labels.clone()?;
        classes.sort_unstable();
        classes.dedup();
        Some(classes)
    }

    pub(crate) fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Per-sample class probabilities `p(y|x)`: `n` rows of `k` entries, each
/// row a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbMatrix {
    n: usize,
    k: usize,
    values: Vec<f64>,
}

impl ProbMatrix {
    /// Validates and renormalizes rows. Rows whose sum is off by more than
    /// [`ROW_SUM_TOLERANCE`] are rejected, as are negative or non-finite
    /// entries.
    pub fn new(n: usize, k: usize, mut values: Vec<f64>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::Validation(format!(
                "probability matrix must be non-empty (got {n}x{k})"
            )));
        }
        if values.len() != n * k {
            return Err(Error::Validation(format!(
                "expected {} entries for {n}x{k}, got {}",
                n * k,
                values.len()
            )));
        }
        for (i, row) in values.chunks_exact_mut(k).enumerate() {
            if let Some(&bad) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::Validation(format!(
                    "row {i} has invalid probability {bad}"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::Validation(format!("row {i} sums to {sum}, not 1")));
            }
            if sum != 1.0 {
                row.iter_mut().for_each(|v| *v /= sum);
            }
        }
        Ok(Self { n, k, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let k = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut values = Vec::with_capacity(rows.len() * k);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != k {
                return Err(Error::Validation(format!(
                    "row {i} has {} columns, expected {k}",
                    row.len()
                )));
            }
            values.extend_from_slice(row);
        }
        Self::new(rows.len(), k, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.k)
    }

    /// Column mean, i.e. the marginal `p(y)`.
    ///
    /// Columns are summed with Neumaier compensation so that identical rows
    /// reproduce themselves exactly; otherwise `KL(p ‖ p(y))` picks up
    /// rounding noise and IS of a constant matrix drifts off 1.
    pub fn marginal(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.k];
        let mut comp = vec![0.0; self.k];
        for row in self.rows() {
            for ((s, c), &v) in sum.iter_mut().zip(comp.iter_mut()).zip(row) {
                let t = *s + v;
                *c += if s.abs() >= v.abs() {
                    (*s - t) + v
                } else {
                    (v - t) + *s
                };
                *s = t;
            }
        }
        let n = self.n as f64;
        sum.iter().zip(&comp).map(|(s, c)| (s + c) / n).collect()
    }
}

/// Mean vector and covariance matrix of a feature distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentPair {
    mu: Vec<f64>,
    /// Row-major `dim × dim`.
    sigma: Vec<f64>,
}

impl MomentPair {
    pub fn new(mu: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        let dim = mu.len();
        if dim == 0 {
            return Err(Error::Validation("empty mean vector".into()));
        }
        if sigma.len() != dim * dim {
            return Err(Error::Shape(format!(
                "covariance has {} entries, expected {}",
                sigma.len(),
                dim * dim
            )));
        }
        if mu.iter().chain(&sigma).any(|v| !v.is_finite()) {
            return Err(Error::Validation("non-finite moment".into()));
        }
        for i in 0..dim {
            if sigma[i * dim + i] < -1e-9 {
                return Err(Error::Validation(format!(
                    "negative variance {} on diagonal {i}",
                    sigma[i * dim + i]
                )));
            }
            for j in (i + 1)..dim {
                let (a, b) = (sigma[i * dim + j], sigma[j * dim + i]);
                if (a - b).abs() > 1e-9 {
                    return Err(Error::Validation(format!(
                        "covariance not symmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { mu, sigma })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_values() {
        let err = DataSet::new(1, 2, vec![0.0, f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(DataSet::new(1, 2, vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(DataSet::new(0, 2, vec![]).is_err());
        assert!(DataSet::new(2, 2, vec![0.0; 3]).is_err());
        assert!(DataSet::from_rows(&[vec![0.0, 1.0], vec![2.0]]).is_err());
    }

    #[test]
    fn labels_must_match_rows() {
        let ds = DataSet::from_rows(&[[0.0], [1.0]]).unwrap();
        assert!(ds.clone().with_labels(vec![1]).is_err());
        let ds = ds.with_labels(vec![3, 1]).unwrap();
        assert_eq!(ds.classes().unwrap(), vec![1, 3]);
    }

    #[test]
    fn select_keeps_labels() {
        let ds = DataSet::from_rows(&[[0.0], [1.0], [2.0]])
            .unwrap()
            .with_labels(vec![5, 6, 7])
            .unwrap();
        let sub = ds.select(&[2, 0]).unwrap();
        assert_eq!(sub.values(), &[2.0, 0.0]);
        assert_eq!(sub.labels().unwrap(), &[7, 5]);
    }

    #[test]
    fn prob_rows_renormalized_within_tolerance() {
        let p = ProbMatrix::from_rows(&[[0.5, 0.5000001]]).unwrap();
        let s: f64 = p.row(0).iter().sum();
        assert!((s - 1.0).abs() <= 1e-9);
        assert!(matches!(
            ProbMatrix::from_rows(&[[0.7, 0.7]]),
            Err(Error::Validation(_))
        ));
        assert!(ProbMatrix::from_rows(&[[1.5, -0.5]]).is_err());
    }

    #[test]
    fn marginal_is_column_mean() {
        let p = ProbMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.5, 0.5]]).unwrap();
        assert_eq!(p.marginal(), vec![0.5, 0.5]);
    }

    #[test]
    fn marginal_of_identical_rows_is_exact() {
        for n in [3, 25, 1000] {
            let p = ProbMatrix::from_rows(&vec![vec![0.1; 10]; n]).unwrap();
            assert_eq!(p.marginal(), p.row(0), "n = {n}");
        }
    }

    #[test]
    fn moment_pair_checks_symmetry() {
        assert!(MomentPair::new(vec![0.0, 0.0], vec![1.0, 0.5, 0.5, 1.0]).is_ok());
        assert!(MomentPair::new(vec![0.0, 0.0], vec![1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(MomentPair::new(vec![0.0], vec![-1.0]).is_err());
    }
}
