//! Distance-based separability index (DSI) and the Likeness Score.
//!
//! For real data `R` and generated data `G` the three distance sets are the
//! ICDs of `R`, the ICDs of `G`, and the BCDs between them. Then
//!
//! ```text
//! s_r = KS(ICD_r, BCD)    s_g = KS(ICD_g, BCD)
//! DSI = max(s_r, s_g)     LS  = 1 − DSI
//! ```
//!
//! When `R` and `G` come from one distribution the three sets share a
//! distribution, so LS approaches 1. Duplicated generated samples show up as
//! mass at zero in `ICD_g`, copies of real samples as mass at zero in the BCD.

use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::dataset::DataSet;
use crate::distances::{bcd_set, icd_set, DistanceSet};
use crate::error::{Error, Result};
use crate::ks::ks_distance;

pub const DEFAULT_HISTOGRAM_BINS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LsCounts {
    pub icd_real: usize,
    pub icd_gen: usize,
    pub bcd: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LsReport {
    /// KS(ICD_real, BCD).
    pub s_r: f64,
    /// KS(ICD_gen, BCD).
    pub s_g: f64,
    pub dsi: f64,
    pub ls: f64,
    /// KS(ICD_real, ICD_gen). Diagnostic only, it ignores location and takes
    /// no part in the score.
    pub ks_icd: f64,
    pub counts: LsCounts,
}

/// The three distance sets behind one real-vs-generated comparison.
#[derive(Debug, Clone)]
pub struct SeparabilitySets {
    pub icd_real: DistanceSet,
    pub icd_gen: DistanceSet,
    pub bcd: DistanceSet,
}

impl SeparabilitySets {
    pub fn compute(real: &DataSet, generated: &DataSet) -> Result<Self> {
        if real.dim() != generated.dim() {
            return Err(Error::Shape(format!(
                "real dim {} != generated dim {}",
                real.dim(),
                generated.dim()
            )));
        }
        Ok(Self {
            icd_real: icd_set(real)?,
            icd_gen: icd_set(generated)?,
            bcd: bcd_set(real, generated)?,
        })
    }

    pub fn report(&self) -> Result<LsReport> {
        let s_r = ks_distance(&self.icd_real, &self.bcd)?;
        let s_g = ks_distance(&self.icd_gen, &self.bcd)?;
        let dsi = s_r.max(s_g);
        Ok(LsReport {
            s_r,
            s_g,
            dsi,
            ls: 1.0 - dsi,
            ks_icd: ks_distance(&self.icd_real, &self.icd_gen)?,
            counts: LsCounts {
                icd_real: self.icd_real.len(),
                icd_gen: self.icd_gen.len(),
                bcd: self.bcd.len(),
            },
        })
    }

    /// Normalized histograms of the three sets over shared equal-width bins
    /// spanning `[0, max]`, or `[0, zoom·max]` when zoomed.
    ///
    /// Frequencies are fractions of each whole set, so bar heights agree
    /// between zoomed and unzoomed views. Without zoom each frequency vector
    /// sums to one; with zoom, distances past the window are left out.
    pub fn histograms(&self, bins: usize, zoom: Option<f64>) -> Result<HistogramTriple> {
        if bins == 0 {
            return Err(Error::Parameter("histogram needs at least one bin".into()));
        }
        if let Some(z) = zoom {
            if !(z > 0.0 && z <= 1.0) {
                return Err(Error::Parameter(format!(
                    "zoom must lie in (0, 1], got {z}"
                )));
            }
        }
        let max = [&self.icd_real, &self.icd_gen, &self.bcd]
            .iter()
            .filter_map(|d| d.max())
            .fold(0.0, f64::max);
        // All points coincide: every distance is 0, pick a unit range.
        let full = if max > 0.0 { max } else { 1.0 };
        let upper = full * zoom.unwrap_or(1.0);
        let edges: Vec<f64> = (0..=bins)
            .map(|k| {
                if k == bins {
                    upper
                } else {
                    upper * k as f64 / bins as f64
                }
            })
            .collect();
        Ok(HistogramTriple {
            icd_real: bin_fractions(self.icd_real.values(), &edges),
            icd_gen: bin_fractions(self.icd_gen.values(), &edges),
            bcd: bin_fractions(self.bcd.values(), &edges),
            edges,
        })
    }
}

/// Bins are `[e_k, e_{k+1})`, the last one closed on the right.
fn bin_fractions(sorted: &[f64], edges: &[f64]) -> Vec<f64> {
    let n = sorted.len() as f64;
    let bins = edges.len() - 1;
    let below = |e: f64| sorted.partition_point(|&v| v < e);
    (0..bins)
        .map(|k| {
            let lo = below(edges[k]);
            let hi = if k + 1 == bins {
                sorted.partition_point(|&v| v <= edges[k + 1])
            } else {
                below(edges[k + 1])
            };
            (hi - lo) as f64 / n
        })
        .collect()
}

/// Likeness Score of a generated set against a real set.
pub fn likeness_score(real: &DataSet, generated: &DataSet) -> Result<LsReport> {
    SeparabilitySets::compute(real, generated)?.report()
}

/// Histograms of ICD_real, ICD_gen and BCD on shared bins.
pub fn distance_histograms(
    real: &DataSet,
    generated: &DataSet,
    bins: usize,
    zoom: Option<f64>,
) -> Result<HistogramTriple> {
    if bins == 0 {
        return Err(Error::Parameter("histogram needs at least one bin".into()));
    }
    SeparabilitySets::compute(real, generated)?.histograms(bins, zoom)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramTriple {
    /// `bins + 1` strictly increasing edges.
    pub edges: Vec<f64>,
    pub icd_real: Vec<f64>,
    pub icd_gen: Vec<f64>,
    pub bcd: Vec<f64>,
}

impl HistogramTriple {
    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    /// CSV with header `bin_left,bin_right,icd_real,icd_gen,bcd`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "bin_left,bin_right,icd_real,icd_gen,bcd")?;
        for k in 0..self.bins() {
            writeln!(
                w,
                "{},{},{},{},{}",
                self.edges[k],
                self.edges[k + 1],
                self.icd_real[k],
                self.icd_gen[k],
                self.bcd[k]
            )?;
        }
        Ok(())
    }
}

/// Fraction of distances `≤ threshold`.
pub fn near_zero_mass(ds: &DistanceSet, threshold: f64) -> Result<f64> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::Parameter(format!(
            "threshold must be >= 0, got {threshold}"
        )));
    }
    if ds.is_empty() {
        return Ok(0.0);
    }
    let count = ds.values().partition_point(|&v| v <= threshold);
    Ok(count as f64 / ds.len() as f64)
}

/// How per-class KS distances combine into one multi-class DSI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    Max,
    Avg,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Ok(Self::Max),
            "avg" | "mean" => Ok(Self::Avg),
            other => Err(Error::Parameter(format!("unknown aggregation '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassSeparability {
    pub label: u32,
    pub n: usize,
    /// KS(ICD of the class, BCD between the class and all other points).
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MulticlassDsi {
    pub overall: f64,
    pub aggregation: Aggregation,
    pub per_class: Vec<ClassSeparability>,
}

/// One-versus-others DSI over a labeled dataset.
///
/// Classes whose points all coincide have every distance equal to zero and
/// score `s = 0`.
pub fn dsi_multiclass(data: &DataSet, aggregation: Aggregation) -> Result<MulticlassDsi> {
    let labels = data
        .labels()
        .ok_or_else(|| Error::Constraint("multi-class DSI needs labeled data".into()))?;
    let classes = data.classes().unwrap_or_default();
    if classes.len() < 2 {
        return Err(Error::Degenerate(format!(
            "multi-class DSI needs at least 2 classes, found {}",
            classes.len()
        )));
    }
    let mut per_class = Vec::with_capacity(classes.len());
    for &label in &classes {
        let (inside, outside): (Vec<usize>, Vec<usize>) =
            (0..data.n()).partition(|&i| labels[i] == label);
        if inside.len() < 2 {
            return Err(Error::Degenerate(format!(
                "class {label} has {} member(s), need at least 2",
                inside.len()
            )));
        }
        let class = data.select(&inside)?;
        let others = data.select(&outside)?;
        let s = ks_distance(&icd_set(&class)?, &bcd_set(&class, &others)?)?;
        per_class.push(ClassSeparability {
            label,
            n: inside.len(),
            s,
        });
    }
    let overall = match aggregation {
        Aggregation::Max => per_class.iter().map(|c| c.s).fold(0.0, f64::max),
        Aggregation::Avg => per_class.iter().map(|c| c.s).sum::<f64>() / per_class.len() as f64,
    };
    Ok(MulticlassDsi {
        overall,
        aggregation,
        per_class,
    })
}
