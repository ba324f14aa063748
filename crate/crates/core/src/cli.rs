//! The `groupdiff` command-line interface.
//!
//! Every subcommand writes its CSV artifacts and a `manifest.json` into the
//! directory given by `--out`. Failures print a one-line JSON error object on
//! stderr; usage errors exit with 2, domain errors with 1.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::aspect::InfluenceModel;
use crate::binning::{per_degree_mean, LogBase, SqrtLogBins};
use crate::dataio::{assemble_dataset, degree_histograms, parse_edge_file, write_edge_files, DatasetStats, IngestReport};
use crate::error::{Error, Result};
use crate::evaluation::{cumulative_rs_curve, evaluate, split, sweep, SweepFamily, Weighting};
use crate::graph::{CoupledDataset, NodeId, Side};
use crate::recommend::{recommend_top, Algorithm, BlendNormalization};
use crate::similarity::similarity_correlation_sample;
use crate::synth::{synth_generate, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "groupdiff", version, about = "Diffusion recommenders on coupled user-object / user-group networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and filter the edge files; write dataset statistics.
    Ingest(IngestArgs),
    /// Split user-object links into training and probe sets.
    Split(SplitArgs),
    /// Top-L recommendation lists for selected users.
    Recommend(RecommendArgs),
    /// Ranking scores of one algorithm on one random split.
    Evaluate(EvaluateArgs),
    /// Influence curve, degree correlations, similarity sample, degree histograms.
    Analyze(AnalyzeArgs),
    /// Mean and spread of overall ranking score across a parameter grid.
    Sweep(SweepArgs),
    /// Generate a synthetic coupled dataset as two edge files.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// user<TAB>object edge file
    #[arg(long)]
    objects: PathBuf,
    /// user<TAB>group edge file
    #[arg(long)]
    groups: PathBuf,
    /// Field separator of both edge files
    #[arg(long, default_value_t = '\t')]
    delimiter: char,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory (created if missing)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct AlgoArgs {
    /// md, hdh, ucf, icf, sd or blend
    #[arg(long)]
    algo: String,
    /// HDH mixing exponent (hdh, blend)
    #[arg(long, default_value_t = 0.4)]
    lambda: f64,
    /// Degree exponent of the SD+HDH blend
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Mix raw HDH and SD scores instead of unit-sum normalized ones
    #[arg(long)]
    raw_blend: bool,
}

impl AlgoArgs {
    fn algorithm(&self) -> Result<Algorithm> {
        let mut algo = Algorithm::from_name(&self.algo, self.lambda, self.beta)?;
        if let Algorithm::Blend { normalization, .. } = &mut algo {
            if self.raw_blend {
                *normalization = BlendNormalization::Raw;
            }
        }
        Ok(algo)
    }
}

#[derive(Debug, Args)]
struct IngestArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct SplitArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 0.8)]
    fraction: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct RecommendArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Target user id; repeat for several users. All users when omitted.
    #[arg(long = "user")]
    users: Vec<String>,
    /// List length
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long, default_value_t = 0.8)]
    fraction: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Average per user first when building the cumulative curve
    #[arg(long)]
    per_user: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LogBaseArg {
    Natural,
    Ten,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Users drawn for the similarity pair sample (default: min(50, users))
    #[arg(long)]
    sample_size: Option<usize>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Logarithm in the bin scale a = 0.5 log 5
    #[arg(long, value_enum, default_value_t = LogBaseArg::Natural)]
    log_base: LogBaseArg,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// vary lambda of HDH
    Hdh,
    /// vary beta of the SD+HDH blend
    Blend,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Comma-separated parameter values
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<f64>,
    /// HDH lambda used inside the blend family
    #[arg(long, default_value_t = 0.4)]
    lambda: f64,
    #[arg(long)]
    raw_blend: bool,
    #[arg(long, default_value_t = 5)]
    splits: usize,
    #[arg(long, default_value_t = 0.8)]
    fraction: f64,
    /// First split seed; split s uses seed + s
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 2000)]
    n_users: usize,
    #[arg(long, default_value_t = 1000)]
    n_objects: usize,
    #[arg(long, default_value_t = 100)]
    n_groups: usize,
    #[arg(long, default_value_t = 2.5)]
    object_exponent: f64,
    #[arg(long, default_value_t = 2.5)]
    group_exponent: f64,
    #[arg(long, default_value_t = 10)]
    clusters: usize,
    #[arg(long, default_value_t = 0.9)]
    alignment: f64,
    #[arg(long, default_value_t = 0.8)]
    taste_strength: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

/// Runs the CLI and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", json!({ "error": { "kind": "usage", "message": e.to_string().trim_end() } }));
            return 2;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", json!({ "error": { "kind": e.kind(), "message": e.to_string() } }));
            1
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Ingest(a) => ingest(a),
        Command::Split(a) => run_split(a),
        Command::Recommend(a) => recommend(a),
        Command::Evaluate(a) => run_evaluate(a),
        Command::Analyze(a) => analyze(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Synth(a) => synth(a),
    }
}

struct Loaded {
    dataset: CoupledDataset,
    report: IngestReport,
    inputs: Value,
}

fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

fn load(data: &DataArgs) -> Result<Loaded> {
    let uo = parse_edge_file(&data.objects, data.delimiter)?;
    let ug = parse_edge_file(&data.groups, data.delimiter)?;
    let (dataset, report) = assemble_dataset(&uo, &ug)?;
    let inputs = json!([
        { "role": "objects", "path": data.objects.display().to_string(), "sha256": sha256_file(&data.objects)? },
        { "role": "groups", "path": data.groups.display().to_string(), "sha256": sha256_file(&data.groups)? },
    ]);
    Ok(Loaded { dataset, report, inputs })
}

/// Accumulates CSV files in an output directory, then writes the manifest.
struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn create(out: &OutArgs) -> Result<Self> {
        fs::create_dir_all(&out.out)?;
        Ok(Output { dir: out.out.clone(), files: Vec::new() })
    }

    fn csv<R, F>(&mut self, name: &str, header: &[&str], rows: R, mut row: F) -> Result<()>
    where
        R: IntoIterator,
        F: FnMut(R::Item) -> Vec<String>,
    {
        let mut w = csv::Writer::from_path(self.dir.join(name)).map_err(csv_error)?;
        w.write_record(header).map_err(csv_error)?;
        for item in rows {
            w.write_record(row(item)).map_err(csv_error)?;
        }
        w.flush()?;
        self.files.push(name.to_owned());
        Ok(())
    }

    fn raw(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_owned());
        self.dir.join(name)
    }

    fn manifest(self, command: &str, mut fields: Value) -> Result<()> {
        let obj = fields.as_object_mut().expect("manifest fields are an object");
        obj.insert("command".into(), json!(command));
        obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        obj.insert("outputs".into(), json!(self.files));
        let text = serde_json::to_string_pretty(&fields)?;
        fs::write(self.dir.join("manifest.json"), text + "\n")?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn label(labels: &crate::graph::Labels, id: NodeId) -> String {
    labels.label(id).unwrap_or_default().to_owned()
}

fn write_stats(out: &mut Output, dataset: &CoupledDataset) -> Result<()> {
    let header: Vec<&str> = DatasetStats::CSV_HEADER.split(',').collect();
    let stats = DatasetStats::of(dataset);
    out.csv("stats.csv", &header, [stats], |s| {
        [s.users, s.objects, s.groups, s.user_object_pairs, s.user_group_pairs]
            .map(|v| v.to_string())
            .to_vec()
    })
}

fn ingest(a: IngestArgs) -> Result<()> {
    let loaded = load(&a.data)?;
    let mut out = Output::create(&a.out)?;
    write_stats(&mut out, &loaded.dataset)?;
    out.manifest("ingest", json!({ "inputs": loaded.inputs, "ingest": loaded.report }))
}

fn run_split(a: SplitArgs) -> Result<()> {
    let loaded = load(&a.data)?;
    let sp = split(&loaded.dataset, a.fraction, a.seed)?;
    let mut out = Output::create(&a.out)?;
    let objects = out.raw("train_objects.tsv");
    let groups = out.raw("train_groups.tsv");
    write_edge_files(&sp.train, &objects, &groups)?;
    let ds = &loaded.dataset;
    out.csv("probe.csv", &["user", "object", "scorable"], &sp.probe, |p| {
        vec![label(ds.users(), p.user), label(ds.objects(), p.object), p.scorable.to_string()]
    })?;
    out.manifest(
        "split",
        json!({
            "inputs": loaded.inputs,
            "ingest": loaded.report,
            "seeds": { "split": a.seed },
            "fraction": a.fraction,
            "counts": {
                "train_edges": sp.train.user_object().edge_count(),
                "probe_edges": sp.probe.len(),
                "unscorable_probe_edges": sp.unscorable_count(),
            },
        }),
    )
}

fn recommend(a: RecommendArgs) -> Result<()> {
    let algo = a.algo.algorithm()?;
    let loaded = load(&a.data)?;
    let ds = &loaded.dataset;
    let targets: Vec<NodeId> = if a.users.is_empty() {
        (0..ds.user_count()).map(NodeId::from).collect()
    } else {
        a.users.iter().map(|u| ds.user_id(u)).collect::<Result<_>>()?
    };
    let mut rows = Vec::new();
    for &t in &targets {
        let scores = algo.score(ds, t)?;
        for (rank, (o, s)) in recommend_top(&scores, a.top).into_iter().enumerate() {
            rows.push((t, rank + 1, o, s));
        }
    }
    let mut out = Output::create(&a.out)?;
    out.csv("recommendations.csv", &["user", "rank", "object", "score"], rows, |(t, r, o, s)| {
        vec![label(ds.users(), t), r.to_string(), label(ds.objects(), o), s.to_string()]
    })?;
    out.manifest(
        "recommend",
        json!({
            "inputs": loaded.inputs,
            "ingest": loaded.report,
            "algorithm": algo,
            "top": a.top,
            "targets": targets.len(),
        }),
    )
}

fn run_evaluate(a: EvaluateArgs) -> Result<()> {
    let algo = a.algo.algorithm()?;
    let loaded = load(&a.data)?;
    let sp = split(&loaded.dataset, a.fraction, a.seed)?;
    let result = evaluate(&algo, &sp)?;
    let weighting = if a.per_user { Weighting::User } else { Weighting::Link };
    let ds = &loaded.dataset;
    let mut out = Output::create(&a.out)?;
    out.csv("rs_links.csv", &["user", "object", "ranking_score"], &result.links, |r| {
        vec![label(ds.users(), r.user), label(ds.objects(), r.object), r.value.to_string()]
    })?;
    let mean = if result.links.is_empty() {
        None
    } else {
        let curve = cumulative_rs_curve(&result.links, &sp.train, weighting)?;
        out.csv("rs_curve.csv", &["degree", "cumulative_rs", "n"], curve, |p| {
            vec![p.degree.to_string(), p.cumulative_rs.to_string(), p.n.to_string()]
        })?;
        Some(result.mean())
    };
    out.manifest(
        "evaluate",
        json!({
            "inputs": loaded.inputs,
            "ingest": loaded.report,
            "algorithm": algo,
            "seeds": { "split": a.seed },
            "fraction": a.fraction,
            "weighting": weighting,
            "mean_rs": mean,
            "counts": {
                "probe_edges": sp.probe.len(),
                "scored_links": result.links.len(),
                "unscorable_probe_edges": result.unscorable,
            },
        }),
    )
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let loaded = load(&a.data)?;
    let ds = &loaded.dataset;
    let base = match a.log_base {
        LogBaseArg::Natural => LogBase::Natural,
        LogBaseArg::Ten => LogBase::Ten,
    };
    let bins = SqrtLogBins::new(base);
    let model = InfluenceModel::new(ds);
    let curve = model.curve(&bins);
    let mut out = Output::create(&a.out)?;
    out.csv(
        "influence_curve.csv",
        &["bin_index", "x_low", "x_high", "mean_influence", "user_count"],
        &curve.points,
        |p| vec![p.bin_index.to_string(), p.x_low.to_string(), p.x_high.to_string(), p.mean.to_string(), p.count.to_string()],
    )?;

    let uo = ds.user_object();
    let ug = ds.user_group();
    out.csv("degree_correlation.csv", &["user", "k_objects", "k_groups"], 0..ds.user_count(), |u| {
        vec![label(ds.users(), NodeId::from(u)), uo.left_degree(u).to_string(), ug.left_degree(u).to_string()]
    })?;
    let per_degree = per_degree_mean((0..ds.user_count()).map(|u| (uo.left_degree(u), ug.left_degree(u) as f64)));
    out.csv("degree_correlation_curve.csv", &["k_objects", "mean_k_groups", "user_count"], per_degree, |p| {
        vec![p.bin_index.to_string(), p.mean.to_string(), p.count.to_string()]
    })?;

    let sample_size = a.sample_size.unwrap_or(ds.user_count().min(50));
    let pairs = similarity_correlation_sample(ds, sample_size, a.seed)?;
    out.csv("similarity_pairs.csv", &["user_i", "user_j", "s_object", "s_group"], &pairs, |p| {
        vec![label(ds.users(), p.user_i), label(ds.users(), p.user_j), p.s_object.to_string(), p.s_group.to_string()]
    })?;

    out.csv("degree_histogram.csv", &["kind", "degree", "count"], degree_histograms(ds), |(k, d, n)| {
        vec![k.to_owned(), d.to_string(), n.to_string()]
    })?;

    out.manifest(
        "analyze",
        json!({
            "inputs": loaded.inputs,
            "ingest": loaded.report,
            "seeds": { "similarity_sample": a.seed },
            "similarity_sample_size": sample_size,
            "influence": {
                "log_base": base,
                "bin_scale": bins.scale(),
                "excluded_users": curve.excluded_users,
                "empty_group_memberships": curve.empty_group_memberships,
            },
            "degree_correlation_binning": "per_degree",
            "max_degrees": {
                "user_objects": uo.max_degree(Side::Left),
                "user_groups": ug.max_degree(Side::Left),
            },
        }),
    )
}

fn run_sweep(a: SweepArgs) -> Result<()> {
    let family = match a.family {
        FamilyArg::Hdh => SweepFamily::HdhLambda,
        FamilyArg::Blend => SweepFamily::BlendBeta {
            lambda: a.lambda,
            normalization: if a.raw_blend { BlendNormalization::Raw } else { BlendNormalization::UnitSum },
        },
    };
    let loaded = load(&a.data)?;
    let result = sweep(family, &loaded.dataset, &a.grid, a.splits, a.seed, a.fraction)?;
    let mut out = Output::create(&a.out)?;
    out.csv("sweep.csv", &["parameter", "mean_rs", "stddev", "n_splits"], &result.rows, |r| {
        vec![r.parameter.to_string(), r.mean_rs.to_string(), r.stddev_rs.to_string(), r.n_splits.to_string()]
    })?;
    out.manifest(
        "sweep",
        json!({
            "inputs": loaded.inputs,
            "ingest": loaded.report,
            "family": family,
            "grid": a.grid,
            "seeds": { "base": a.seed, "n_splits": a.splits },
            "fraction": a.fraction,
            "argmin": result.argmin,
        }),
    )
}

fn synth(a: SynthArgs) -> Result<()> {
    let config = SynthConfig {
        n_users: a.n_users,
        n_objects: a.n_objects,
        n_groups: a.n_groups,
        object_degree_exponent: a.object_exponent,
        group_degree_exponent: a.group_exponent,
        n_taste_clusters: a.clusters,
        group_taste_alignment: a.alignment,
        object_taste_strength: a.taste_strength,
        seed: a.seed,
        ..SynthConfig::default()
    };
    let ds = synth_generate(&config)?;
    let mut out = Output::create(&a.out)?;
    let objects = out.raw("objects.tsv");
    let groups = out.raw("groups.tsv");
    write_edge_files(&ds, &objects, &groups)?;
    write_stats(&mut out, &ds)?;
    out.manifest("synth", json!({ "config": config, "seeds": { "synth": a.seed } }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with_args(["groupdiff", "frobnicate"]), 2);
        assert_eq!(main_with_args(["groupdiff", "ingest", "--bogus"]), 2);
        assert_eq!(main_with_args(["groupdiff", "--help"]), 0);
    }

    #[test]
    fn domain_errors_exit_one() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o");
        let code = main_with_args([
            "groupdiff",
            "ingest",
            "--objects",
            "/nonexistent/a.tsv",
            "--groups",
            "/nonexistent/b.tsv",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 1);
    }
}
