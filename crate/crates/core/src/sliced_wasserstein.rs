//! Sliced Wasserstein distance over random unit directions.
//!
//! Each slice projects both sets onto one direction drawn uniformly from the
//! sphere and takes the 1-D Wasserstein-1 distance of the projections. A
//! repeat averages `n_slices` slices; the report gives the mean and sample
//! standard deviation over repeats. Slice `(repeat, s)` draws its direction
//! from its own generator seeded by `derive_seed(seed, repeat, s)`, so slices
//! evaluate in parallel with thread-independent results.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwdConfig {
    pub n_slices: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for SwdConfig {
    fn default() -> Self {
        Self {
            n_slices: 100,
            repeats: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwdReport {
    pub mean: f64,
    pub std: f64,
    pub per_repeat: Vec<f64>,
}

/// Wasserstein-1 distance between two equally sized 1-D samples (any order).
pub fn wasserstein_1d(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Constraint(format!(
            "1-D Wasserstein needs equal sample sizes ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::Degenerate("empty samples".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable_by(f64::total_cmp);
    b.sort_unstable_by(f64::total_cmp);
    Ok(sorted_w1(&a, &b))
}

/// Mean `|a_(i) − b_(i)|` over sorted inputs. The gaps are summed in
/// ascending order so the value does not depend on the direction sign.
fn sorted_w1(a: &[f64], b: &[f64]) -> f64 {
    let mut gaps: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect();
    gaps.sort_unstable_by(f64::total_cmp);
    gaps.iter().sum::<f64>() / gaps.len() as f64
}

/// Mean and sample standard deviation via Welford's update. Constant inputs
/// give their value and zero exactly.
fn mean_std(values: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
    }
    let std = if values.len() > 1 {
        (m2 / (values.len() - 1) as f64).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

fn random_direction(dim: usize, seed: u64) -> Vec<f64> {
    let mut gen = rng::seeded(seed);
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut gen)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn project(data: &DataSet, direction: &[f64]) -> Vec<f64> {
    let mut p: Vec<f64> = data
        .rows()
        .map(|row| {
            let mut acc = 0.0;
            for (x, u) in row.iter().zip(direction) {
                acc += x * u;
            }
            acc
        })
        .collect();
    p.sort_unstable_by(f64::total_cmp);
    p
}

pub fn sliced_wasserstein(
    real: &DataSet,
    generated: &DataSet,
    config: &SwdConfig,
) -> Result<SwdReport> {
    if real.dim() != generated.dim() {
        return Err(Error::Shape(format!(
            "real dim {} != generated dim {}",
            real.dim(),
            generated.dim()
        )));
    }
    if real.n() != generated.n() {
        return Err(Error::Constraint(format!(
            "sliced Wasserstein needs equally many real and generated samples ({} vs {})",
            real.n(),
            generated.n()
        )));
    }
    if config.n_slices == 0 || config.repeats == 0 {
        return Err(Error::Parameter(
            "n_slices and repeats must both be at least 1".into(),
        ));
    }

    let per_repeat: Vec<f64> = (0..config.repeats)
        .map(|rep| {
            let slices: Vec<f64> = (0..config.n_slices)
                .into_par_iter()
                .map(|s| {
                    let dir = random_direction(
                        real.dim(),
                        rng::derive_seed(config.seed, rep as u64, s as u64),
                    );
                    sorted_w1(&project(real, &dir), &project(generated, &dir))
                })
                .collect();
            mean_std(&slices).0
        })
        .collect();
    let (mean, std) = mean_std(&per_repeat);
    Ok(SwdReport {
        mean,
        std,
        per_repeat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w1_examples() {
        assert_eq!(wasserstein_1d(&[0.0, 1.0], &[1.0, 2.0]).unwrap(), 1.0);
        assert_eq!(wasserstein_1d(&[3.0, 1.0], &[1.0, 3.0]).unwrap(), 0.0);
        assert_eq!(wasserstein_1d(&[0.0], &[-2.5]).unwrap(), 2.5);
        assert!(matches!(
            wasserstein_1d(&[0.0], &[1.0, 2.0]),
            Err(Error::Constraint(_))
        ));
    }

    #[test]
    fn welford_constant_is_exact() {
        let (m, s) = mean_std(&[0.1; 7]);
        assert_eq!(m, 0.1);
        assert_eq!(s, 0.0);
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn directions_are_unit() {
        for seed in 0..20 {
            let d = random_direction(5, seed);
            let n: f64 = d.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        for seed in 0..50 {
            let d = random_direction(1, seed);
            assert_eq!(d[0].abs(), 1.0);
        }
    }

    #[test]
    fn identical_sets_are_zero() {
        let r = DataSet::new(4, 3, (0..12).map(|k| k as f64 * 0.3).collect()).unwrap();
        let rep = sliced_wasserstein(
            &r,
            &r,
            &SwdConfig {
                n_slices: 7,
                repeats: 3,
                seed: 5,
            },
        )
        .unwrap();
        assert_eq!(rep.mean, 0.0);
        assert_eq!(rep.std, 0.0);
        assert_eq!(rep.per_repeat, vec![0.0; 3]);
    }

    #[test]
    fn parameter_checks() {
        let r = DataSet::new(2, 1, vec![0.0, 1.0]).unwrap();
        let g = DataSet::new(3, 1, vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            sliced_wasserstein(&r, &g, &SwdConfig::default()),
            Err(Error::Constraint(_))
        ));
        let cfg = SwdConfig {
            n_slices: 0,
            ..SwdConfig::default()
        };
        assert!(matches!(
            sliced_wasserstein(&r, &r, &cfg),
            Err(Error::Parameter(_))
        ));
    }
}
