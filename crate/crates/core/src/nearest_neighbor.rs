//! Leave-one-out 1-nearest-neighbor two-sample test.
//!
//! Every point of `R ∪ G` is classified by its nearest other point. An
//! accuracy near 0.5 means the sets are indistinguishable, 1 means they
//! separate perfectly, and values below 0.5 mean generated points sit on top
//! of real ones.

use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::DataSet;
use crate::distances::distance_matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LooTally {
    pub n_real: usize,
    pub n_gen: usize,
    pub correct_real: usize,
    pub correct_gen: usize,
}

impl LooTally {
    pub fn accuracy(&self) -> f64 {
        (self.correct_real + self.correct_gen) as f64 / (self.n_real + self.n_gen) as f64
    }
}

/// Per-class correct counts of the leave-one-out 1-NN classifier.
///
/// A point counts as correct only when its nearest same-class neighbor is
/// strictly closer than its nearest opposite-class neighbor; ties go to the
/// opposite class. With this rule a generated set identical to the real one
/// scores exactly 0.
pub fn loo_1nn(real: &DataSet, generated: &DataSet) -> Result<LooTally> {
    if real.dim() != generated.dim() {
        return Err(Error::Shape(format!(
            "real dim {} != generated dim {}",
            real.dim(),
            generated.dim()
        )));
    }
    if real.n() != generated.n() {
        return Err(Error::Constraint(format!(
            "1-NN test needs equally many real and generated samples ({} vs {})",
            real.n(),
            generated.n()
        )));
    }
    if real.n() < 2 {
        return Err(Error::Degenerate(
            "1-NN test needs at least 2 samples per set".into(),
        ));
    }

    let n_real = real.n();
    let mut pooled = real.values().to_vec();
    pooled.extend_from_slice(generated.values());
    let pooled = DataSet::new(n_real + generated.n(), real.dim(), pooled)?;
    let total = pooled.n();
    let matrix = distance_matrix(&pooled);

    let correct: Vec<bool> = matrix
        .par_chunks(total)
        .enumerate()
        .map(|(i, row)| {
            let is_real = i < n_real;
            let mut same = f64::INFINITY;
            let mut other = f64::INFINITY;
            for (j, &d) in row.iter().enumerate() {
                if j == i {
                    continue;
                }
                if (j < n_real) == is_real {
                    same = same.min(d);
                } else {
                    other = other.min(d);
                }
            }
            same < other
        })
        .collect();

    Ok(LooTally {
        n_real,
        n_gen: generated.n(),
        correct_real: correct[..n_real].iter().filter(|c| **c).count(),
        correct_gen: correct[n_real..].iter().filter(|c| **c).count(),
    })
}

/// Leave-one-out accuracy of the 1-NN classifier on `R ∪ G`.
pub fn loo_1nn_accuracy(real: &DataSet, generated: &DataSet) -> Result<f64> {
    Ok(loo_1nn(real, generated)?.accuracy())
}

/// Maps an accuracy onto `[0, 1]` with the optimum 0.5 sent to 1:
/// `−|2·acc − 1| + 1`.
pub fn r1nnc(acc: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&acc) {
        return Err(Error::Parameter(format!(
            "accuracy must lie in [0, 1], got {acc}"
        )));
    }
    Ok(-(2.0 * acc - 1.0).abs() + 1.0)
}
