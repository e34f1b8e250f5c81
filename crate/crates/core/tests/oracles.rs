//! Checks against independent brute-force implementations.

#![allow(clippy::needless_range_loop)]

use likeness::classic::{am_score, frechet_distance, inception_score, mode_score};
use likeness::distances::{bcd_set, icd_set};
use likeness::ks::{ks_distance, Ecdf};
use likeness::nearest_neighbor::loo_1nn_accuracy;
use likeness::separability::{dsi_multiclass, likeness_score, near_zero_mass, Aggregation};
use likeness::sliced_wasserstein::{sliced_wasserstein, wasserstein_1d, SwdConfig};
use likeness::synthetic::{gaussian_cloud, median_filter};
use likeness::{rng, DataSet, MomentPair, ProbMatrix};
use rand::Rng;
use rand_pcg::Pcg32;

fn naive_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        s += (a[k] - b[k]) * (a[k] - b[k]);
    }
    s.sqrt()
}

fn random_data(gen: &mut Pcg32, n: usize, dim: usize, integer_grid: bool) -> DataSet {
    let values = (0..n * dim)
        .map(|_| {
            if integer_grid {
                f64::from(gen.random_range(0..4u32))
            } else {
                gen.random_range(-5.0..5.0)
            }
        })
        .collect();
    DataSet::new(n, dim, values).unwrap()
}

/// Fraction of `sample` that is `<= t`, by counting.
fn count_cdf(sample: &[f64], t: f64) -> f64 {
    sample.iter().filter(|&&v| v <= t).count() as f64 / sample.len() as f64
}

fn grid_ks(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .chain(b)
        .map(|&t| (count_cdf(a, t) - count_cdf(b, t)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn ks_matches_grid_oracle() {
    let mut gen = rng::seeded(101);
    for case in 0..200 {
        let na = gen.random_range(1..=200);
        let nb = gen.random_range(1..=200);
        // Every other case draws from a small integer range to force ties.
        let draw = |g: &mut Pcg32| {
            if case % 2 == 0 {
                g.random_range(-3.0..3.0)
            } else {
                f64::from(g.random_range(0..6u32))
            }
        };
        let a: Vec<f64> = (0..na).map(|_| draw(&mut gen)).collect();
        let b: Vec<f64> = (0..nb).map(|_| draw(&mut gen)).collect();
        let got = ks_distance(
            &Ecdf::new(a.clone()).unwrap(),
            &Ecdf::new(b.clone()).unwrap(),
        )
        .unwrap();
        let want = grid_ks(&a, &b);
        assert!((got - want).abs() <= 1e-12, "case {case}: {got} vs {want}");
    }
}

#[test]
fn ks_hand_example() {
    // F_a at 1, 1.5, 2, 2.5 = .5, .5, 1, 1; F_b = 0, .5, .5, 1.
    assert_eq!(grid_ks(&[1.0, 2.0], &[1.5, 2.5]), 0.5);
    let got = ks_distance(
        &Ecdf::new(vec![1.0, 2.0]).unwrap(),
        &Ecdf::new(vec![1.5, 2.5]).unwrap(),
    )
    .unwrap();
    assert_eq!(got, 0.5);
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

#[test]
fn distance_sets_match_double_loop() {
    let mut gen = rng::seeded(202);
    for case in 0..50 {
        let n = gen.random_range(2..40);
        let m = gen.random_range(1..40);
        let dim = gen.random_range(1..20);
        let x = random_data(&mut gen, n, dim, case % 5 == 0);
        let y = random_data(&mut gen, m, dim, case % 5 == 0);

        let mut icd = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                icd.push(naive_distance(x.row(i), x.row(j)));
            }
        }
        icd.sort_by(f64::total_cmp);
        assert_eq!(
            bits(icd_set(&x).unwrap().values()),
            bits(&icd),
            "icd case {case}"
        );

        let mut bcd = Vec::new();
        for i in 0..n {
            for j in 0..m {
                bcd.push(naive_distance(x.row(i), y.row(j)));
            }
        }
        bcd.sort_by(f64::total_cmp);
        assert_eq!(
            bits(bcd_set(&x, &y).unwrap().values()),
            bits(&bcd),
            "bcd case {case}"
        );
    }
}

/// Brute-force LOOCV with ties resolved in favor of the opposite class.
fn brute_loo(real: &DataSet, gen: &DataSet) -> f64 {
    let points: Vec<(&[f64], bool)> = real
        .rows()
        .map(|r| (r, true))
        .chain(gen.rows().map(|r| (r, false)))
        .collect();
    let mut correct = 0;
    for (i, (p, class)) in points.iter().enumerate() {
        let mut best = f64::INFINITY;
        let mut predicted = !class;
        for (j, (q, other)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = naive_distance(p, q);
            if d < best || (d == best && other != class) {
                best = d;
                predicted = *other;
            }
        }
        if predicted == *class {
            correct += 1;
        }
    }
    correct as f64 / points.len() as f64
}

#[test]
fn loo_matches_brute_force() {
    let mut gen = rng::seeded(303);
    for case in 0..100 {
        let dim = gen.random_range(1..6);
        let grid = case % 3 == 0;
        let r = random_data(&mut gen, 20, dim, grid);
        let g = random_data(&mut gen, 20, dim, grid);
        assert_eq!(
            loo_1nn_accuracy(&r, &g).unwrap(),
            brute_loo(&r, &g),
            "case {case}"
        );
    }
}

fn random_probs(gen: &mut Pcg32, n: usize, k: usize) -> ProbMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let raw: Vec<f64> = (0..k)
                .map(|_| {
                    if gen.random_bool(0.1) {
                        0.0
                    } else {
                        -gen.random_range(1e-9f64..1.0).ln()
                    }
                })
                .collect();
            let s: f64 = raw.iter().sum();
            if s == 0.0 {
                let mut r = vec![0.0; k];
                r[0] = 1.0;
                r
            } else {
                raw.iter().map(|v| v / s).collect()
            }
        })
        .collect();
    ProbMatrix::from_rows(&rows).unwrap()
}

fn column_mean(p: &ProbMatrix) -> Vec<f64> {
    let mut m = vec![0.0; p.k()];
    for i in 0..p.n() {
        for j in 0..p.k() {
            m[j] += p.row(i)[j] / p.n() as f64;
        }
    }
    m
}

fn direct_kl(p: &[f64], q: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..p.len() {
        if p[j] > 0.0 {
            s += p[j] * (p[j].ln() - q[j].ln());
        }
    }
    s
}

#[test]
fn classic_scores_match_direct_formulas() {
    let mut gen = rng::seeded(404);
    for case in 0..20 {
        let pg = random_probs(&mut gen, 50, 10);
        let pr = random_probs(&mut gen, 40, 10);
        let py = column_mean(&pg);
        let pyr = column_mean(&pr);

        let mut is_sum = 0.0;
        let mut ms_sum = 0.0;
        let mut h_sum = 0.0;
        for i in 0..pg.n() {
            let row = pg.row(i);
            is_sum += direct_kl(row, &py);
            ms_sum += direct_kl(row, &pyr);
            h_sum -= row
                .iter()
                .filter(|v| **v > 0.0)
                .map(|v| v * v.ln())
                .sum::<f64>();
        }
        let n = pg.n() as f64;
        let is = (is_sum / n).exp();
        let ms = (ms_sum / n - direct_kl(&py, &pyr)).exp();
        let am = h_sum / n + direct_kl(&pyr, &py);

        assert!((inception_score(&pg) - is).abs() <= 1e-12, "IS case {case}");
        assert!(
            (mode_score(&pg, &pr).unwrap() - ms).abs() <= 1e-12,
            "MS case {case}"
        );
        assert!(
            (am_score(&pg, &pr).unwrap() - am).abs() <= 1e-12,
            "AM case {case}"
        );
    }
}

#[test]
fn frechet_diagonal_closed_form() {
    let mut gen = rng::seeded(505);
    for case in 0..20 {
        let dim = gen.random_range(1..8);
        let mu_a: Vec<f64> = (0..dim).map(|_| gen.random_range(-3.0..3.0)).collect();
        let mu_b: Vec<f64> = (0..dim).map(|_| gen.random_range(-3.0..3.0)).collect();
        let s: Vec<f64> = (0..dim).map(|_| gen.random_range(0.01..5.0)).collect();
        let t: Vec<f64> = (0..dim).map(|_| gen.random_range(0.01..5.0)).collect();
        let diag = |d: &[f64]| {
            let mut m = vec![0.0; dim * dim];
            for i in 0..dim {
                m[i * dim + i] = d[i];
            }
            m
        };
        let a = MomentPair::new(mu_a.clone(), diag(&s)).unwrap();
        let b = MomentPair::new(mu_b.clone(), diag(&t)).unwrap();
        let mut want = 0.0;
        for i in 0..dim {
            want += (mu_a[i] - mu_b[i]).powi(2) + (s[i].sqrt() - t[i].sqrt()).powi(2);
        }
        let got = frechet_distance(&a, &b).unwrap();
        assert!((got - want).abs() <= 1e-9, "case {case}: {got} vs {want}");
    }
}

#[test]
fn fid_one_dimensional_scalar_formula() {
    let r = gaussian_cloud(500, &[1.0], 2.0, 1).unwrap();
    let g = gaussian_cloud(400, &[-0.5], 0.7, 2).unwrap();
    let stats = |d: &DataSet| {
        let n = d.n() as f64;
        let m = d.values().iter().sum::<f64>() / n;
        let v = d.values().iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v)
    };
    let (m1, v1) = stats(&r);
    let (m2, v2) = stats(&g);
    let want = (m1 - m2).powi(2) + (v1.sqrt() - v2.sqrt()).powi(2);
    let got = likeness::classic::fid(&r, &g).unwrap();
    assert!((got - want).abs() <= 1e-9, "{got} vs {want}");
}

#[test]
fn likeness_score_by_enumeration() {
    let r = [[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]];
    let g = [[1.0, 1.0], [4.0, 1.0], [1.0, 6.0]];
    let mut icd_r = Vec::new();
    let mut icd_g = Vec::new();
    let mut bcd = Vec::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            icd_r.push(naive_distance(&r[i], &r[j]));
            icd_g.push(naive_distance(&g[i], &g[j]));
        }
        for j in 0..3 {
            bcd.push(naive_distance(&r[i], &g[j]));
        }
    }
    assert_eq!((icd_r.len(), icd_g.len(), bcd.len()), (3, 3, 9));
    let s_r = grid_ks(&icd_r, &bcd);
    let s_g = grid_ks(&icd_g, &bcd);

    let report = likeness_score(
        &DataSet::from_rows(&r).unwrap(),
        &DataSet::from_rows(&g).unwrap(),
    )
    .unwrap();
    assert!((report.s_r - s_r).abs() <= 1e-15);
    assert!((report.s_g - s_g).abs() <= 1e-15);
    assert!((report.ls - (1.0 - s_r.max(s_g))).abs() <= 1e-15);
}

#[test]
fn multiclass_three_clusters() {
    let mut gen = rng::seeded(606);
    let centers = [[0.0, 0.0], [50.0, 0.0], [0.0, 50.0]];
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..10 {
            rows.push([
                center[0] + gen.random_range(-1.0..1.0),
                center[1] + gen.random_range(-1.0..1.0),
            ]);
            labels.push(c as u32);
        }
    }
    let data = DataSet::from_rows(&rows)
        .unwrap()
        .with_labels(labels.clone())
        .unwrap();
    let out = dsi_multiclass(&data, Aggregation::Avg).unwrap();

    for (c, class) in out.per_class.iter().enumerate() {
        let mut icd = Vec::new();
        let mut bcd = Vec::new();
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                let (li, lj) = (labels[i] as usize, labels[j] as usize);
                if li == c && lj == c && i < j {
                    icd.push(naive_distance(&rows[i], &rows[j]));
                } else if li == c && lj != c {
                    bcd.push(naive_distance(&rows[i], &rows[j]));
                }
            }
        }
        let want = grid_ks(&icd, &bcd);
        assert!((class.s - want).abs() <= 1e-12);
        assert!(class.s >= 0.9, "class {c}: {}", class.s);
    }
    assert!(out.overall >= 0.9);
}

#[test]
fn median_filter_matches_sorting_oracle() {
    let mut gen = rng::seeded(707);
    for case in 0..20 {
        let h = gen.random_range(1..12);
        let w = gen.random_range(1..12);
        let window = [3, 5][case % 2];
        let img: Vec<f64> = (0..h * w)
            .map(|_| f64::from(gen.random_range(0..256u32)) / 255.0)
            .collect();
        let got = median_filter(&img, h, w, window).unwrap();
        let half = (window / 2) as isize;
        for r in 0..h {
            for c in 0..w {
                let mut nb = Vec::new();
                for dr in -half..=half {
                    for dc in -half..=half {
                        let rr = (r as isize + dr).max(0).min(h as isize - 1) as usize;
                        let cc = (c as isize + dc).max(0).min(w as isize - 1) as usize;
                        nb.push(img[rr * w + cc]);
                    }
                }
                nb.sort_by(f64::total_cmp);
                assert_eq!(got[r * w + c], nb[nb.len() / 2], "case {case} ({r},{c})");
            }
        }
    }
}

#[test]
fn swd_of_mean_shift() {
    let delta = 2.0;
    let r = gaussian_cloud(2000, &[0.0, 0.0], 1.0, 10).unwrap();
    let g = gaussian_cloud(2000, &[delta, 0.0], 1.0, 11).unwrap();
    let cfg = SwdConfig {
        n_slices: 200,
        repeats: 1,
        seed: 3,
    };
    let got = sliced_wasserstein(&r, &g, &cfg).unwrap().mean;
    // E|cos θ| over uniform planar directions is 2/π.
    let want = 2.0 / std::f64::consts::PI * delta;
    assert!((got - want).abs() <= 0.1 * want, "{got} vs {want}");
}

#[test]
fn swd_one_dimensional_reduction() {
    let r = gaussian_cloud(300, &[0.0], 1.0, 20).unwrap();
    let g = gaussian_cloud(300, &[0.4], 1.5, 21).unwrap();
    let exact = wasserstein_1d(r.values(), g.values()).unwrap();
    for n_slices in [1, 3, 7, 50] {
        let cfg = SwdConfig {
            n_slices,
            repeats: 2,
            seed: n_slices as u64,
        };
        let rep = sliced_wasserstein(&r, &g, &cfg).unwrap();
        assert_eq!(rep.mean.abs(), exact);
        assert!(rep.per_repeat.iter().all(|v| *v == exact));
    }
}

#[test]
fn duplicated_sources_mass_at_zero() {
    let src = gaussian_cloud(20, &[0.0; 5], 1.0, 30).unwrap();
    let tiled: Vec<usize> = (0..100).flat_map(|_| 0..20).collect();
    let g = src.select(&tiled).unwrap();
    let icd = icd_set(&g).unwrap();
    // 20 groups of 100 identical points: 20·C(100,2) zero pairs out of C(2000,2).
    let want = (20.0 * 4950.0) / 1_999_000.0;
    assert_eq!(near_zero_mass(&icd, 0.0).unwrap(), want);

    let r = gaussian_cloud(2000, &[0.0; 5], 1.0, 31).unwrap();
    let h = likeness::distance_histograms(&r, &g, 100, None).unwrap();
    assert!(h.icd_gen[0] >= want);
    assert!(h.icd_gen[0] - want < 0.01);
}

#[test]
fn same_distribution_histograms_overlap() {
    let r = gaussian_cloud(1000, &[0.0, 0.0], 1.0, 40).unwrap();
    let g = gaussian_cloud(1000, &[0.0, 0.0], 1.0, 41).unwrap();
    let h = likeness::distance_histograms(&r, &g, 100, None).unwrap();
    let gap = h
        .icd_real
        .iter()
        .zip(&h.bcd)
        .chain(h.icd_gen.iter().zip(&h.bcd))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(gap <= 0.05, "gap {gap}");
}
