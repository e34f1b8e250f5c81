//! # likeness
//!
//! Evaluates a generative model by comparing a set of real samples with a
//! set of generated samples directly.
//!
//! The main measure is the Likeness Score: with `ICD_r`, `ICD_g` the
//! intra-set Euclidean distances of the real and generated sets and `BCD`
//! the distances between them,
//!
//! ```text
//! LS = 1 − max(KS(ICD_r, BCD), KS(ICD_g, BCD))
//! ```
//!
//! where `KS` is the two-sample Kolmogorov–Smirnov distance. LS is 1 when
//! the three distance distributions coincide, which happens exactly when
//! both sets come from one distribution.
//!
//! Alongside it the crate implements the usual comparison measures:
//!
//! | Module | Measure |
//! |--------|---------|
//! | [`nearest_neighbor`] | leave-one-out 1-NN two-sample accuracy and its regularized form |
//! | [`sliced_wasserstein`] | sliced Wasserstein distance over random directions |
//! | [`classic`] | IS, Mode Score, AM score and FID from external classifier outputs |
//! | [`synthetic`] | virtual generator outputs from MNIST, Gaussian fixtures |
//!
//! ```
//! use likeness::{likeness_score, DataSet};
//!
//! let real = DataSet::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
//! let gen = DataSet::from_rows(&[[0.1, 0.0], [0.9, 0.1], [0.0, 1.1]]).unwrap();
//! let report = likeness_score(&real, &gen).unwrap();
//! assert!((0.0..=1.0).contains(&report.ls));
//! ```

pub mod classic;
pub mod dataset;
pub mod distances;
pub mod error;
pub mod io;
pub mod ks;
pub mod nearest_neighbor;
pub mod rng;
pub mod separability;
pub mod sliced_wasserstein;
pub mod subsets;
pub mod synthetic;

pub use dataset::{DataSet, MomentPair, ProbMatrix};
pub use distances::{bcd_set, icd_set, DistanceSet, Provenance};
pub use error::{Error, Result};
pub use io::DataFormat;
pub use ks::{ks_distance, Ecdf};
pub use nearest_neighbor::{loo_1nn_accuracy, r1nnc};
pub use separability::{
    distance_histograms, dsi_multiclass, likeness_score, near_zero_mass, Aggregation,
    HistogramTriple, LsReport,
};
pub use sliced_wasserstein::{sliced_wasserstein, SwdConfig, SwdReport};
