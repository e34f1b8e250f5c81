//! Virtual generator outputs built from a labeled image corpus, and seeded
//! Gaussian point clouds.
//!
//! From the digit-8 images, three disjoint subsets are drawn: the real set,
//! the optimal generated set (`opt`) and a 20-image source. Then
//!
//! * `ld`  (lack of diversity): the 20 source images, each repeated 100 times;
//! * `lc`  (lack of creativity): the real set passed through a 3×3 median filter;
//! * `lcd` (both): 20 images of `lc` repeated 100 times;
//! * `lin` (lack of inheritance): 2000 images of digit 7.
//!
//! Copies are tiled: row `c·20 + j` of `ld` is source image `j`.

use std::path::Path;

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::io::{save_dataset, DataFormat};
use crate::rng;

/// Median of every `window × window` neighborhood, with edge pixels
/// replicated outward. `img` is row-major `height × width`.
pub fn median_filter(img: &[f64], height: usize, width: usize, window: usize) -> Result<Vec<f64>> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::Parameter(format!(
            "median window must be odd and at least 3, got {window}"
        )));
    }
    if img.len() != height * width {
        return Err(Error::Shape(format!(
            "image has {} pixels, expected {height}x{width}",
            img.len()
        )));
    }
    let half = (window / 2) as isize;
    let clamp = |v: isize, hi: usize| v.clamp(0, hi as isize - 1) as usize;
    let mut neighborhood = Vec::with_capacity(window * window);
    let mut out = Vec::with_capacity(img.len());
    for r in 0..height {
        for c in 0..width {
            neighborhood.clear();
            for dr in -half..=half {
                let rr = clamp(r as isize + dr, height);
                for dc in -half..=half {
                    let cc = clamp(c as isize + dc, width);
                    neighborhood.push(img[rr * width + cc]);
                }
            }
            // Lower middle element; the exact median for odd counts.
            let mid = (neighborhood.len() - 1) / 2;
            let (_, m, _) = neighborhood.select_nth_unstable_by(mid, f64::total_cmp);
            out.push(*m);
        }
    }
    Ok(out)
}

/// Parameters of the virtual-set construction. Defaults follow the MNIST
/// setup: 28×28 images, digit 8 as the real class, digit 7 as the foreign
/// class, 2000-image sets, 20 sources copied 100 times, 3×3 median filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualSetConfig {
    pub height: usize,
    pub width: usize,
    pub real_label: u32,
    pub foreign_label: u32,
    pub set_size: usize,
    pub sources: usize,
    pub copies: usize,
    pub window: usize,
}

impl Default for VirtualSetConfig {
    fn default() -> Self {
        Self {
            height: 28,
            width: 28,
            real_label: 8,
            foreign_label: 7,
            set_size: 2000,
            sources: 20,
            copies: 100,
            window: 3,
        }
    }
}

/// Corpus row indices behind each member of a [`VirtualSets`] build.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirtualSetIndices {
    pub real: Vec<usize>,
    pub opt: Vec<usize>,
    pub ld_sources: Vec<usize>,
    /// Rows of `lc` (not of the corpus) that seed `lcd`.
    pub lcd_sources: Vec<usize>,
    pub lin: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VirtualSets {
    pub real: DataSet,
    pub opt: DataSet,
    pub lc: DataSet,
    pub ld: DataSet,
    pub lcd: DataSet,
    pub lin: DataSet,
    pub indices: VirtualSetIndices,
}

impl VirtualSets {
    /// `(name, set)` pairs in a fixed order.
    pub fn members(&self) -> [(&'static str, &DataSet); 6] {
        [
            ("real", &self.real),
            ("opt", &self.opt),
            ("lc", &self.lc),
            ("ld", &self.ld),
            ("lcd", &self.lcd),
            ("lin", &self.lin),
        ]
    }

    /// The five generated sets, excluding `real`.
    pub fn generated(&self) -> [(&'static str, &DataSet); 5] {
        let [_, opt, lc, ld, lcd, lin] = self.members();
        [opt, lc, ld, lcd, lin]
    }

    /// Writes `<name>.dsetbin` per member plus `manifest.json`.
    pub fn write_dir(&self, dir: impl AsRef<Path>, seed: u64, corpus_digest: &str) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut entries = Vec::new();
        for (name, set) in self.members() {
            let file = format!("{name}.dsetbin");
            save_dataset(set, dir.join(&file), DataFormat::Dsetbin)?;
            entries.push(ManifestEntry {
                name,
                file,
                rows: set.n(),
                dim: set.dim(),
            });
        }
        let manifest = Manifest {
            seed,
            corpus_digest,
            sets: entries,
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Format(format!("manifest serialization: {e}")))?;
        text.push('\n');
        std::fs::write(dir.join("manifest.json"), text)?;
        Ok(())
    }
}

#[derive(Serialize)]
struct ManifestEntry {
    name: &'static str,
    file: String,
    rows: usize,
    dim: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    seed: u64,
    corpus_digest: &'a str,
    sets: Vec<ManifestEntry>,
}

/// [`build_virtual_sets_with`] under the default MNIST configuration.
pub fn build_virtual_sets(images: &DataSet, labels: &[u32], seed: u64) -> Result<VirtualSets> {
    build_virtual_sets_with(images, labels, seed, &VirtualSetConfig::default())
}

/// Builds the five virtual generated sets and the real set.
///
/// Randomness, in order, from one seeded generator: a partial shuffle of the
/// real-class indices (first `set_size` → real, next `set_size` → opt, next
/// `sources` → ld sources), a partial shuffle of the foreign-class indices
/// (first `set_size` → lin), then a partial shuffle of `0..set_size` picking
/// the `lc` rows for lcd.
pub fn build_virtual_sets_with(
    images: &DataSet,
    labels: &[u32],
    seed: u64,
    config: &VirtualSetConfig,
) -> Result<VirtualSets> {
    if labels.len() != images.n() {
        return Err(Error::Shape(format!(
            "{} labels for {} images",
            labels.len(),
            images.n()
        )));
    }
    if images.dim() != config.height * config.width {
        return Err(Error::Shape(format!(
            "images have {} pixels, expected {}x{}",
            images.dim(),
            config.height,
            config.width
        )));
    }
    if config.sources == 0 || config.sources > config.set_size {
        return Err(Error::Parameter(format!(
            "source count {} must lie in 1..={}",
            config.sources, config.set_size
        )));
    }
    let of_label =
        |l: u32| -> Vec<usize> { (0..labels.len()).filter(|&i| labels[i] == l).collect() };
    let mut real_pool = of_label(config.real_label);
    let mut foreign_pool = of_label(config.foreign_label);
    let needed = 2 * config.set_size + config.sources;
    if real_pool.len() < needed {
        return Err(Error::Constraint(format!(
            "corpus has {} images labeled {}, need {needed}",
            real_pool.len(),
            config.real_label
        )));
    }
    if foreign_pool.len() < config.set_size {
        return Err(Error::Constraint(format!(
            "corpus has {} images labeled {}, need {}",
            foreign_pool.len(),
            config.foreign_label,
            config.set_size
        )));
    }

    let mut gen = rng::seeded(seed);
    rng::partial_shuffle(&mut gen, &mut real_pool, needed);
    rng::partial_shuffle(&mut gen, &mut foreign_pool, config.set_size);
    let mut lc_rows: Vec<usize> = (0..config.set_size).collect();
    rng::partial_shuffle(&mut gen, &mut lc_rows, config.sources);

    let n = config.set_size;
    let indices = VirtualSetIndices {
        real: real_pool[..n].to_vec(),
        opt: real_pool[n..2 * n].to_vec(),
        ld_sources: real_pool[2 * n..needed].to_vec(),
        lcd_sources: lc_rows[..config.sources].to_vec(),
        lin: foreign_pool[..n].to_vec(),
    };

    let real = images.select(&indices.real)?;
    let opt = images.select(&indices.opt)?;
    let lin = images.select(&indices.lin)?;

    let mut lc_values = Vec::with_capacity(n * images.dim());
    for row in real.rows() {
        lc_values.extend(median_filter(
            row,
            config.height,
            config.width,
            config.window,
        )?);
    }
    let lc = DataSet::new(n, images.dim(), lc_values)?;

    let tiled = |sources: &[usize]| -> Vec<usize> {
        (0..config.copies)
            .flat_map(|_| sources.iter().copied())
            .collect()
    };
    let ld = images.select(&tiled(&indices.ld_sources))?;
    let lcd = lc.select(&tiled(&indices.lcd_sources))?;

    Ok(VirtualSets {
        real: strip_labels(real)?,
        opt: strip_labels(opt)?,
        lc,
        ld: strip_labels(ld)?,
        lcd,
        lin: strip_labels(lin)?,
        indices,
    })
}

fn strip_labels(ds: DataSet) -> Result<DataSet> {
    let (n, dim) = (ds.n(), ds.dim());
    DataSet::new(n, dim, ds.into_values())
}

/// `n` i.i.d. draws from `N(mean, stddev² I)`.
pub fn gaussian_cloud(n: usize, mean: &[f64], stddev: f64, seed: u64) -> Result<DataSet> {
    if n == 0 || mean.is_empty() {
        return Err(Error::Parameter("need n >= 1 and a non-empty mean".into()));
    }
    if !(stddev > 0.0 && stddev.is_finite()) {
        return Err(Error::Parameter(format!(
            "stddev must be positive, got {stddev}"
        )));
    }
    let mut gen = rng::seeded(seed);
    let mut values = Vec::with_capacity(n * mean.len());
    for _ in 0..n {
        for &m in mean {
            let z: f64 = StandardNormal.sample(&mut gen);
            values.push(m + stddev * z);
        }
    }
    DataSet::new(n, mean.len(), values)
}
