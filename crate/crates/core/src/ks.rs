//! Two-sample Kolmogorov–Smirnov distance.

use crate::distances::DistanceSet;
use crate::error::{Error, Result};

/// A sample already sorted ascending.
pub trait SortedSample {
    fn sorted_values(&self) -> &[f64];
}

impl SortedSample for DistanceSet {
    fn sorted_values(&self) -> &[f64] {
        self.values()
    }
}

impl SortedSample for Ecdf {
    fn sorted_values(&self) -> &[f64] {
        &self.points
    }
}

/// Empirical CDF, `F(t) = #{p ≤ t} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    points: Vec<f64>,
}

impl Ecdf {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Degenerate("empty sample".into()));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(
                "sample contains non-finite values".into(),
            ));
        }
        points.sort_unstable_by(f64::total_cmp);
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.points.partition_point(|&p| p <= t) as f64 / self.points.len() as f64
    }
}

/// `sup_t |F_a(t) − F_b(t)|`.
pub fn ks_distance<A, B>(a: &A, b: &B) -> Result<f64>
where
    A: SortedSample + ?Sized,
    B: SortedSample + ?Sized,
{
    ks_distance_sorted(a.sorted_values(), b.sorted_values())
}

/// KS distance between two ascending slices.
///
/// Both ECDFs are evaluated right after every distinct merged value, so ties
/// within or across samples are exact. The gap is tracked as the integer
/// `|i·n_b − j·n_a|` and divided once at the end.
pub fn ks_distance_sorted(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Degenerate(format!(
            "KS distance needs non-empty samples (sizes {} and {})",
            a.len(),
            b.len()
        )));
    }
    debug_assert!(a.windows(2).all(|w| w[0] <= w[1]));
    debug_assert!(b.windows(2).all(|w| w[0] <= w[1]));

    let (na, nb) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut best: u128 = 0;
    while i < na && j < nb {
        let t = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < na && a[i] <= t {
            i += 1;
        }
        while j < nb && b[j] <= t {
            j += 1;
        }
        let lhs = i as u128 * nb as u128;
        let rhs = j as u128 * na as u128;
        best = best.max(lhs.abs_diff(rhs));
    }
    // Once one side is exhausted the gap only shrinks toward zero.
    Ok(best as f64 / (na as f64 * nb as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ks(a: &[f64], b: &[f64]) -> f64 {
        ks_distance(
            &Ecdf::new(a.to_vec()).unwrap(),
            &Ecdf::new(b.to_vec()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn identical_samples() {
        assert_eq!(ks(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 0.0);
    }

    #[test]
    fn disjoint_supports() {
        assert_eq!(ks(&[0.0, 0.0], &[1.0, 1.0]), 1.0);
    }

    #[test]
    fn interleaved() {
        // F_a: 1→.5, 1.5→.5, 2→1; F_b: 1→0, 1.5→.5, 2→.5, 2.5→1
        assert_eq!(ks(&[1.0, 2.0], &[1.5, 2.5]), 0.5);
    }

    #[test]
    fn ties_across_samples() {
        assert_eq!(ks(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]), 1.0 / 3.0);
    }

    #[test]
    fn unequal_sizes() {
        assert_eq!(ks(&[0.0], &[0.0, 1.0, 2.0, 3.0]), 0.75);
    }

    #[test]
    fn empty_is_degenerate() {
        assert!(matches!(
            ks_distance_sorted(&[], &[1.0]),
            Err(Error::Degenerate(_))
        ));
        assert!(Ecdf::new(vec![]).is_err());
    }

    #[test]
    fn ecdf_steps() {
        let f = Ecdf::new(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(2.0), 0.75);
        assert_eq!(f.eval(3.0), 1.0);
    }
}
