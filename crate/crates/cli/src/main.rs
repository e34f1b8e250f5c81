//! `likeness` command-line tool.
//!
//! Exit codes: 0 success, 2 input/format/usage error, 3 a metric constraint
//! was violated (unequal set sizes, missing inputs for a requested metric,
//! degenerate classes, ...).

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use likeness::io::{load_dataset, load_labels, load_prob_matrix, sha256_file};
use likeness::nearest_neighbor::loo_1nn;
use likeness::separability::{near_zero_mass, SeparabilitySets};
use likeness::subsets::subset_average;
use likeness::synthetic::build_virtual_sets;
use likeness::{classic, Aggregation, DataFormat, DataSet, Error, SwdConfig};

use report::Report;

#[derive(Debug)]
pub enum CliError {
    /// Exit code 2.
    Input(String),
    /// Exit code 3.
    Constraint(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Constraint(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Constraint(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Format(_) | Error::Validation(_) | Error::Parameter(_) => {
                CliError::Input(e.to_string())
            }
            Error::Degenerate(_) | Error::Shape(_) | Error::Constraint(_) | Error::Numerical(_) => {
                CliError::Constraint(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "likeness",
    version,
    about = "Evaluate generated samples against real samples"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write a JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,

    /// Leave the timestamp out of the JSON report.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Likeness Score, regularized 1-NN accuracy and sliced Wasserstein distance.
    Score(ScoreArgs),
    /// IS, MS, AM and FID from externally computed probabilities and features.
    Classic(ClassicArgs),
    /// Histograms of the three distance sets as CSV.
    Hist(HistArgs),
    /// Build the virtual generated sets from an MNIST-style corpus.
    Synth(SynthArgs),
    /// One-versus-others separability of a labeled dataset.
    Multiclass(MulticlassArgs),
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    real: PathBuf,
    #[arg(long)]
    gen: PathBuf,
    /// idx, csv or dsetbin; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<String>,
    /// Comma-separated subset of ls, r1nnc, swd.
    #[arg(long, default_value = "ls")]
    metrics: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    swd_slices: usize,
    #[arg(long, default_value_t = 10)]
    swd_repeats: usize,
    /// Average r1nnc/swd over random equal-size subsets of the larger set.
    #[arg(long)]
    subset_average: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ClassicArgs {
    #[arg(long)]
    probs_gen: Option<PathBuf>,
    #[arg(long)]
    probs_real: Option<PathBuf>,
    #[arg(long)]
    features_real: Option<PathBuf>,
    #[arg(long)]
    features_gen: Option<PathBuf>,
    /// Feature file format; inferred from the extension when omitted.
    #[arg(long)]
    format: Option<String>,
    /// Comma-separated subset of is, ms, am, fid.
    #[arg(long)]
    metrics: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct HistArgs {
    #[arg(long)]
    real: PathBuf,
    #[arg(long)]
    gen: PathBuf,
    #[arg(long)]
    format: Option<String>,
    #[arg(long, default_value_t = likeness::separability::DEFAULT_HISTOGRAM_BINS)]
    bins: usize,
    /// Only bin the lowest fraction of the pooled distance range.
    #[arg(long)]
    zoom: Option<f64>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SynthArgs {
    /// IDX image file.
    #[arg(long)]
    images: PathBuf,
    /// IDX (or one-column CSV) label file.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct MulticlassArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    format: Option<String>,
    /// max or avg.
    #[arg(long, default_value = "max")]
    agg: String,
    #[command(flatten)]
    output: Output,
}

fn resolve_format(path: &Path, explicit: Option<&str>) -> Result<DataFormat, CliError> {
    match explicit {
        Some(f) => Ok(f.parse()?),
        None => DataFormat::from_path(path).ok_or_else(|| {
            CliError::Input(format!(
                "cannot infer the format of {}; pass --format",
                path.display()
            ))
        }),
    }
}

fn load(path: &Path, format: Option<&str>, report: &mut Report) -> Result<DataSet, CliError> {
    let ds = load_dataset(path, resolve_format(path, format)?)?;
    report.add_input(path)?;
    Ok(ds)
}

fn parse_metrics<'a>(list: &'a str, known: &[&str]) -> Result<Vec<&'a str>, CliError> {
    let metrics: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .collect();
    if metrics.is_empty() {
        return Err(CliError::Input("no metrics requested".into()));
    }
    if let Some(bad) = metrics.iter().find(|m| !known.contains(m)) {
        return Err(CliError::Input(format!(
            "unknown metric '{bad}' (expected one of {})",
            known.join(", ")
        )));
    }
    Ok(metrics)
}

fn finish(mut report: Report, output: &Output) -> Result<(), CliError> {
    print!("{}", report.table());
    if let Some(path) = &output.json {
        report.write_json(path, !output.no_timestamp)?;
    }
    Ok(())
}

fn cmd_score(args: &ScoreArgs) -> Result<(), CliError> {
    let metrics = parse_metrics(&args.metrics, &["ls", "r1nnc", "swd"])?;
    let mut report = Report::new("score");
    let real = load(&args.real, args.format.as_deref(), &mut report)?;
    let gen = load(&args.gen, args.format.as_deref(), &mut report)?;

    let seeded = metrics.contains(&"swd") || (args.subset_average && metrics.contains(&"r1nnc"));
    if seeded {
        report.seed = Some(args.seed);
    }
    let unequal = real.n() != gen.n();
    if unequal && !args.subset_average {
        if let Some(m) = metrics.iter().find(|m| **m != "ls") {
            return Err(CliError::Constraint(format!(
                "{m} needs equally many real and generated samples ({} vs {}); \
                 use --subset-average",
                real.n(),
                gen.n()
            )));
        }
    }

    for metric in metrics {
        match metric {
            "ls" => {
                let r = SeparabilitySets::compute(&real, &gen)?.report()?;
                report.add_metric(
                    "ls",
                    r.ls,
                    json!({
                        "s_r": r.s_r,
                        "s_g": r.s_g,
                        "dsi": r.dsi,
                        "ks_icd": r.ks_icd,
                        "counts": r.counts,
                    }),
                );
            }
            "r1nnc" => {
                if unequal {
                    let avg = subset_average(&real, &gen, args.seed, |r, g| {
                        likeness::r1nnc(loo_1nn(r, g)?.accuracy())
                    })?;
                    report.add_metric(
                        "r1nnc",
                        avg.mean,
                        json!({
                            "subset_size": avg.subset_size,
                            "per_subset": avg.per_subset,
                        }),
                    );
                } else {
                    let tally = loo_1nn(&real, &gen)?;
                    let acc = tally.accuracy();
                    report.add_metric(
                        "r1nnc",
                        likeness::r1nnc(acc)?,
                        json!({ "accuracy": acc, "tally": tally }),
                    );
                }
            }
            "swd" => {
                let config = SwdConfig {
                    n_slices: args.swd_slices,
                    repeats: args.swd_repeats,
                    seed: args.seed,
                };
                if unequal {
                    let avg = subset_average(&real, &gen, args.seed, |r, g| {
                        Ok(likeness::sliced_wasserstein(r, g, &config)?.mean)
                    })?;
                    report.add_metric(
                        "swd",
                        avg.mean,
                        json!({
                            "n_slices": config.n_slices,
                            "repeats": config.repeats,
                            "subset_size": avg.subset_size,
                            "per_subset": avg.per_subset,
                        }),
                    );
                } else {
                    let r = likeness::sliced_wasserstein(&real, &gen, &config)?;
                    report.add_metric(
                        "swd",
                        r.mean,
                        json!({
                            "std": r.std,
                            "per_repeat": r.per_repeat,
                            "n_slices": config.n_slices,
                            "repeats": config.repeats,
                        }),
                    );
                }
            }
            _ => unreachable!(),
        }
    }
    finish(report, &args.output)
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, metric: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Constraint(format!("{metric} needs --{flag}")))
}

fn cmd_classic(args: &ClassicArgs) -> Result<(), CliError> {
    let metrics = parse_metrics(&args.metrics, &["is", "ms", "am", "fid"])?;
    let mut report = Report::new("classic");
    for metric in metrics {
        match metric {
            "is" => {
                let path = require(&args.probs_gen, "probs-gen", "is")?;
                let pg = load_prob_matrix(path)?;
                report.add_input(path)?;
                report.add_metric(
                    "is",
                    classic::inception_score(&pg),
                    json!({ "n": pg.n(), "k": pg.k() }),
                );
            }
            "ms" | "am" => {
                let pg_path = require(&args.probs_gen, "probs-gen", metric)?;
                let pr_path = require(&args.probs_real, "probs-real", metric)?;
                let pg = load_prob_matrix(pg_path)?;
                let pr = load_prob_matrix(pr_path)?;
                report.add_input(pg_path)?;
                report.add_input(pr_path)?;
                let value = if metric == "ms" {
                    classic::mode_score(&pg, &pr)?
                } else {
                    classic::am_score(&pg, &pr)?
                };
                report.add_metric(
                    metric,
                    value,
                    json!({ "n_gen": pg.n(), "n_real": pr.n(), "k": pg.k() }),
                );
            }
            "fid" => {
                let fr = require(&args.features_real, "features-real", "fid")?;
                let fg = require(&args.features_gen, "features-gen", "fid")?;
                let real = load(fr, args.format.as_deref(), &mut report)?;
                let gen = load(fg, args.format.as_deref(), &mut report)?;
                report.add_metric(
                    "fid",
                    classic::fid(&real, &gen)?,
                    json!({ "n_real": real.n(), "n_gen": gen.n(), "dim": real.dim() }),
                );
            }
            _ => unreachable!(),
        }
    }
    finish(report, &args.output)
}

fn cmd_hist(args: &HistArgs) -> Result<(), CliError> {
    let mut report = Report::new("hist");
    let real = load(&args.real, args.format.as_deref(), &mut report)?;
    let gen = load(&args.gen, args.format.as_deref(), &mut report)?;
    let sets = SeparabilitySets::compute(&real, &gen)?;
    let hist = sets.histograms(args.bins, args.zoom)?;
    let mut csv = Vec::new();
    hist.write_csv(&mut csv)?;
    std::fs::write(&args.out, csv)?;
    for (name, set) in [
        ("icd_real_zero_mass", &sets.icd_real),
        ("icd_gen_zero_mass", &sets.icd_gen),
        ("bcd_zero_mass", &sets.bcd),
    ] {
        report.add_metric(
            name,
            near_zero_mass(set, 0.0)?,
            json!({ "size": set.len() }),
        );
    }
    finish(report, &args.output)
}

fn cmd_synth(args: &SynthArgs) -> Result<(), CliError> {
    let images = load_dataset(&args.images, DataFormat::Idx)?;
    let labels = load_labels(&args.labels)?;
    let digest = format!(
        "{}:{}",
        sha256_file(&args.images)?,
        sha256_file(&args.labels)?
    );
    let sets = build_virtual_sets(&images, &labels, args.seed)?;
    sets.write_dir(&args.out_dir, args.seed, &digest)?;
    for (name, set) in sets.members() {
        println!("{name:<4}  {} rows", set.n());
    }
    Ok(())
}

fn cmd_multiclass(args: &MulticlassArgs) -> Result<(), CliError> {
    let agg: Aggregation = args.agg.parse()?;
    let mut report = Report::new("multiclass");
    let data = load(&args.data, args.format.as_deref(), &mut report)?;
    let labels = load_labels(&args.labels)?;
    report.add_input(&args.labels)?;
    let data = data.with_labels(labels)?;
    let out = likeness::dsi_multiclass(&data, agg)?;
    for class in &out.per_class {
        report.add_metric(
            &format!("s_{}", class.label),
            class.s,
            json!({ "label": class.label, "n": class.n }),
        );
    }
    report.add_metric(
        "dsi",
        out.overall,
        json!({ "aggregation": out.aggregation, "classes": out.per_class.len() }),
    );
    finish(report, &args.output)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot start thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Score(a) => cmd_score(a),
        Command::Classic(a) => cmd_classic(a),
        Command::Hist(a) => cmd_hist(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Multiclass(a) => cmd_multiclass(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
