//! Classifier-output measures: Inception Score, Mode Score, AM score and
//! the Fréchet distance between feature Gaussians (FID).
//!
//! Class probabilities and feature vectors are produced by an external
//! network and read from files; nothing here runs a classifier. Logarithms
//! are natural.

use nalgebra::DMatrix;

use crate::dataset::{DataSet, MomentPair, ProbMatrix};
use crate::error::{Error, Result};

const DISTRIBUTION_TOLERANCE: f64 = 1e-6;

/// Relative tolerance below which negative or imaginary eigenvalue parts of
/// `Σ_a Σ_b` are treated as round-off.
pub const EIGEN_CLAMP_TOLERANCE: f64 = 1e-8;

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Validation("empty distribution".into()));
    }
    if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::Validation(format!("invalid probability {bad}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(Error::Validation(format!("probabilities sum to {sum}")));
    }
    Ok(())
}

fn entropy_unchecked(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| v * v.ln())
        .sum::<f64>()
}

/// `Σ p ln(p/q)`; `+∞` when `q` is zero somewhere `p` is not.
fn kl_unchecked(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi == 0.0 {
                return f64::INFINITY;
            }
            acc += pi * (pi / qi).ln();
        }
    }
    acc
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(entropy_unchecked(p))
}

/// `KL(p ‖ q)` in nats. Returns `+∞` when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Shape(format!(
            "distributions have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    check_distribution(p)?;
    check_distribution(q)?;
    Ok(kl_unchecked(p, q))
}

fn mean_kl_to(pg: &ProbMatrix, target: &[f64]) -> f64 {
    pg.rows().map(|row| kl_unchecked(row, target)).sum::<f64>() / pg.n() as f64
}

/// `exp(E_x[KL(p(y|x) ‖ p(y))])`, in `[1, K]`.
pub fn inception_score(pg: &ProbMatrix) -> f64 {
    let marginal = pg.marginal();
    mean_kl_to(pg, &marginal).exp()
}

fn check_same_classes(pg: &ProbMatrix, pr: &ProbMatrix) -> Result<()> {
    if pg.k() != pr.k() {
        return Err(Error::Shape(format!(
            "generated probabilities have {} classes, real have {}",
            pg.k(),
            pr.k()
        )));
    }
    Ok(())
}

/// `exp(E_x[KL(p(y|x) ‖ p(y_r))] − KL(p(y) ‖ p(y_r)))`. Larger is better.
///
/// Undefined when the generated set puts mass on a class the real marginal
/// never predicts; that case is reported as a numerical error.
pub fn mode_score(pg: &ProbMatrix, pr: &ProbMatrix) -> Result<f64> {
    check_same_classes(pg, pr)?;
    let real_marginal = pr.marginal();
    let gen_marginal = pg.marginal();
    let expected = mean_kl_to(pg, &real_marginal);
    let correction = kl_unchecked(&gen_marginal, &real_marginal);
    if !expected.is_finite() || !correction.is_finite() {
        return Err(Error::Numerical(
            "mode score undefined: generated mass on a class absent from the real marginal".into(),
        ));
    }
    Ok((expected - correction).exp())
}

/// `E_x[H(p(y|x))] + KL(p(y_r) ‖ p(y))`. Smaller is better; `+∞` when the
/// generated marginal misses a class the real marginal predicts.
pub fn am_score(pg: &ProbMatrix, pr: &ProbMatrix) -> Result<f64> {
    check_same_classes(pg, pr)?;
    let mean_entropy = pg.rows().map(entropy_unchecked).sum::<f64>() / pg.n() as f64;
    Ok(mean_entropy + kl_unchecked(&pr.marginal(), &pg.marginal()))
}

/// Sample mean and unbiased (divisor `n − 1`) covariance of the rows.
pub fn estimate_moments(f: &DataSet) -> Result<MomentPair> {
    let (n, dim) = (f.n(), f.dim());
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "moment estimation needs at least 2 samples, got {n}"
        )));
    }
    let x = DMatrix::from_row_slice(n, dim, f.values());
    let mu: Vec<f64> = x.row_mean().iter().copied().collect();
    let mut centered = x;
    for mut row in centered.row_iter_mut() {
        for (v, m) in row.iter_mut().zip(&mu) {
            *v -= m;
        }
    }
    let cov = centered.tr_mul(&centered) / (n - 1) as f64;
    let mut sigma = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let v = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            sigma[i * dim + j] = v;
            sigma[j * dim + i] = v;
        }
    }
    MomentPair::new(mu, sigma)
}

/// `tr((Σ_a Σ_b)^{1/2})` from the eigenvalues of the product.
fn trace_sqrt_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    let eig = (a * b).complex_eigenvalues();
    let scale = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let tol = EIGEN_CLAMP_TOLERANCE * scale;
    let mut acc = 0.0;
    for z in eig.iter() {
        if z.re < -tol || z.im.abs() > tol {
            return Err(Error::Numerical(format!(
                "covariance product has eigenvalue {z} outside the PSD clamp tolerance"
            )));
        }
        acc += z.re.max(0.0).sqrt();
    }
    Ok(acc)
}

fn check_psd(sigma: &DMatrix<f64>) -> Result<()> {
    let eig = sigma.clone().symmetric_eigenvalues();
    let scale = eig.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if let Some(v) = eig.iter().find(|v| **v < -EIGEN_CLAMP_TOLERANCE * scale) {
        return Err(Error::Numerical(format!(
            "covariance has negative eigenvalue {v}"
        )));
    }
    Ok(())
}

/// `‖μ_a − μ_b‖² + tr(Σ_a + Σ_b − 2(Σ_a Σ_b)^{1/2})`.
///
/// Identical covariances contribute no trace term (the matrix square root of
/// `Σ²` is `Σ` for PSD `Σ`), so pure mean shifts are exact.
pub fn frechet_distance(a: &MomentPair, b: &MomentPair) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Shape(format!(
            "moment dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let dim = a.dim();
    let mean_term: f64 = a
        .mu()
        .iter()
        .zip(b.mu())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    let sa = DMatrix::from_row_slice(dim, dim, a.sigma());
    let trace_term = if a.sigma() == b.sigma() {
        check_psd(&sa)?;
        0.0
    } else {
        let sb = DMatrix::from_row_slice(dim, dim, b.sigma());
        let cross = trace_sqrt_product(&sa, &sb)?;
        sa.trace() + sb.trace() - 2.0 * cross
    };
    // The trace term is non-negative in exact arithmetic.
    Ok((mean_term + trace_term).max(0.0))
}

/// Fréchet distance between the Gaussians fitted to two feature sets.
pub fn fid(real_features: &DataSet, gen_features: &DataSet) -> Result<f64> {
    if real_features.dim() != gen_features.dim() {
        return Err(Error::Shape(format!(
            "feature dimensions {} and {}",
            real_features.dim(),
            gen_features.dim()
        )));
    }
    frechet_distance(
        &estimate_moments(real_features)?,
        &estimate_moments(gen_features)?,
    )
}
