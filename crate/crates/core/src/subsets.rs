//! Averaging equal-size metrics over subsets when set sizes differ.
//!
//! The larger set is shuffled with the given seed and cut into
//! `⌊large / small⌋` consecutive chunks of the smaller set's size (the
//! remainder is dropped). The metric is evaluated on `(real, chunk)` or
//! `(chunk, generated)`, keeping argument order, and the values averaged.

use serde::Serialize;

use crate::dataset::DataSet;
use crate::error::Result;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetAverage {
    pub mean: f64,
    pub subset_size: usize,
    pub per_subset: Vec<f64>,
}

pub fn subset_average<F>(
    real: &DataSet,
    generated: &DataSet,
    seed: u64,
    mut metric: F,
) -> Result<SubsetAverage>
where
    F: FnMut(&DataSet, &DataSet) -> Result<f64>,
{
    let per_subset = if real.n() == generated.n() {
        vec![metric(real, generated)?]
    } else {
        let real_is_small = real.n() < generated.n();
        let (small, large) = if real_is_small {
            (real, generated)
        } else {
            (generated, real)
        };
        let size = small.n();
        let mut order: Vec<usize> = (0..large.n()).collect();
        let mut gen = rng::seeded(seed);
        rng::partial_shuffle(&mut gen, &mut order, large.n());
        let mut values = Vec::with_capacity(large.n() / size);
        for chunk in order.chunks_exact(size) {
            let part = large.select(chunk)?;
            let v = if real_is_small {
                metric(small, &part)?
            } else {
                metric(&part, small)?
            };
            values.push(v);
        }
        values
    };
    let mean = per_subset.iter().sum::<f64>() / per_subset.len() as f64;
    Ok(SubsetAverage {
        mean,
        subset_size: real.n().min(generated.n()),
        per_subset,
    })
}
