//! Intra-class (ICD) and between-class (BCD) Euclidean distance sets.
//!
//! Each distance is `sqrt(Σ_k (x_k − y_k)²)` accumulated left to right in
//! `f64`, so every entry is bit-identical to a plain double loop no matter
//! how the work is split across threads. Rows are processed in parallel
//! into disjoint regions of one output buffer, which is then sorted.

use rayon::prelude::*;

use crate::dataset::DataSet;
use crate::error::{Error, Result};

/// Where a [`DistanceSet`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// All unordered pairs inside one set of `n` points.
    Intra { n: usize },
    /// All pairs across two sets.
    Between { n_x: usize, n_y: usize },
}

impl Provenance {
    /// Number of distances the provenance implies.
    pub fn cardinality(&self) -> usize {
        match *self {
            Provenance::Intra { n } => n * n.saturating_sub(1) / 2,
            Provenance::Between { n_x, n_y } => n_x * n_y,
        }
    }
}

/// Sorted multiset of non-negative pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSet {
    values: Vec<f64>,
    provenance: Provenance,
}

impl DistanceSet {
    /// Ascending distances.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// `len × 1` dataset, for dumping to dsetbin.
    pub fn to_dataset(&self) -> Result<DataSet> {
        DataSet::new(self.values.len(), 1, self.values.clone())
    }
}

/// Euclidean distance with a fixed left-to-right accumulation order.
#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    acc.sqrt()
}

/// Distances from `x` to each row of `others` (row-major, `dim` wide).
///
/// Four rows are handled together so the independent accumulators overlap in
/// the pipeline; each accumulator still sums in index order.
fn distances_to_rows(x: &[f64], others: &[f64], dim: usize, out: &mut [f64]) {
    debug_assert_eq!(others.len(), out.len() * dim);
    let mut rows = others.chunks_exact(4 * dim);
    let mut outs = out.chunks_exact_mut(4);
    for (block, o) in (&mut rows).zip(&mut outs) {
        let (r0, rest) = block.split_at(dim);
        let (r1, rest) = rest.split_at(dim);
        let (r2, r3) = rest.split_at(dim);
        let (mut a0, mut a1, mut a2, mut a3) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for k in 0..dim {
            let xk = x[k];
            let d0 = xk - r0[k];
            let d1 = xk - r1[k];
            let d2 = xk - r2[k];
            let d3 = xk - r3[k];
            a0 += d0 * d0;
            a1 += d1 * d1;
            a2 += d2 * d2;
            a3 += d3 * d3;
        }
        o[0] = a0.sqrt();
        o[1] = a1.sqrt();
        o[2] = a2.sqrt();
        o[3] = a3.sqrt();
    }
    for (row, o) in rows
        .remainder()
        .chunks_exact(dim)
        .zip(outs.into_remainder())
    {
        *o = euclidean(x, row);
    }
}

fn sort_distances(values: &mut [f64]) {
    values.par_sort_unstable_by(f64::total_cmp);
}

/// All `n(n−1)/2` distances between distinct points of `x`, ascending.
pub fn icd_set(x: &DataSet) -> Result<DistanceSet> {
    let n = x.n();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "intra-class distances need at least 2 points, got {n}"
        )));
    }
    let dim = x.dim();
    let provenance = Provenance::Intra { n };
    let mut values = vec![0.0; provenance.cardinality()];

    // Row i owns the pairs (i, j) for j > i.
    let mut regions = Vec::with_capacity(n - 1);
    let mut rest = values.as_mut_slice();
    for i in 0..n - 1 {
        let (head, tail) = rest.split_at_mut(n - 1 - i);
        regions.push((i, head));
        rest = tail;
    }
    let data = x.values();
    regions.into_par_iter().for_each(|(i, out)| {
        distances_to_rows(x.row(i), &data[(i + 1) * dim..], dim, out);
    });

    sort_distances(&mut values);
    Ok(DistanceSet { values, provenance })
}

/// All `N_x · N_y` distances between a point of `x` and a point of `y`,
/// ascending.
pub fn bcd_set(x: &DataSet, y: &DataSet) -> Result<DistanceSet> {
    if x.dim() != y.dim() {
        return Err(Error::Shape(format!(
            "dimension mismatch: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    let provenance = Provenance::Between {
        n_x: x.n(),
        n_y: y.n(),
    };
    let mut values = vec![0.0; provenance.cardinality()];
    values
        .par_chunks_mut(y.n())
        .zip(x.values().par_chunks(x.dim()))
        .for_each(|(out, row)| distances_to_rows(row, y.values(), y.dim(), out));

    sort_distances(&mut values);
    Ok(DistanceSet { values, provenance })
}

/// Full symmetric `n × n` distance matrix, row-major, zero diagonal.
pub fn distance_matrix(x: &DataSet) -> Vec<f64> {
    let n = x.n();
    let dim = x.dim();
    let mut m = vec![0.0; n * n];
    let data = x.values();
    m.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
        if i + 1 < n {
            distances_to_rows(x.row(i), &data[(i + 1) * dim..], dim, &mut out[i + 1..]);
        }
    });
    for i in 0..n {
        for j in 0..i {
            m[i * n + j] = m[j * n + i];
        }
    }
    m
}
