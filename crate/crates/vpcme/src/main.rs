use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use vpcme::harness::{self, ExperimentConfig, Method, SweepParameter, SweepSpec};
use vpcme::model_file::ModelFile;
use vpcme::report::{self, CvReport, DataSource, StatsReport, SweepReport, VERSION};
use vpcme::{io as csvio, synth};
use vpcme_core::{MultiLabelDataset, Standardizer, VpcmeConfig};

#[derive(Parser)]
#[command(name = "vpcme", version, about = "Multi-label ensembles of pairwise-constraint projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dataset statistics as JSON.
    Stats {
        data: PathBuf,
        #[arg(long)]
        labels: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeated k-fold cross-validation of one method.
    Cv {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "vpcme")]
        method: Method,
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Cross-validate VPCME for each value of the similarity threshold.
    SweepTheta {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "vpcme")]
        method: Method,
        /// Comma-separated values; default 0.1, 0.2, …, 1.0.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Cross-validate VPCME for each ensemble size.
    SweepSize {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "vpcme")]
        method: Method,
        /// Comma-separated values; default 1, 10, 20, 30, 40, 50.
        #[arg(long, value_delimiter = ',')]
        values: Vec<usize>,
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Cross-validate several methods on identical splits and t-test every pair.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        /// Comma-separated methods; default all three.
        #[arg(long, value_enum, value_delimiter = ',')]
        method: Vec<Method>,
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// Train on the whole dataset and save the model as JSON.
    Train {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value = "vpcme")]
        method: Method,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a CSV with a saved model; writes per-label scores and predictions as CSV.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Feature rows, optionally followed by the model's label columns.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic dataset with three labels.
    Synth {
        #[arg(long, value_enum, default_value = "linear")]
        kind: SynthKind,
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Label flip probability (linear only).
        #[arg(long, default_value_t = 0.1)]
        noise: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    /// Labels are the signs of the first three features.
    Sign,
    /// Thresholded linear combinations with label noise.
    Linear,
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    data: PathBuf,
    /// Number of trailing label columns.
    #[arg(long)]
    labels: usize,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 0.6)]
    theta: f64,
    #[arg(long, default_value_t = 30)]
    ensemble_size: usize,
    #[arg(long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Standardize features with statistics of each training set.
    #[arg(long)]
    zscore: bool,
}

#[derive(Args)]
struct ExpArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall time to the report (makes reruns differ).
    #[arg(long)]
    timing: bool,
}

impl ModelArgs {
    fn vpcme(&self) -> VpcmeConfig {
        VpcmeConfig {
            ensemble_size: self.ensemble_size,
            theta: self.theta,
            k_neighbors: self.k,
            seed: self.seed,
            ..VpcmeConfig::default()
        }
    }
}

impl ExpArgs {
    fn config(&self, method: Method) -> ExperimentConfig {
        ExperimentConfig {
            method,
            vpcme: self.model.vpcme(),
            folds: self.folds,
            repeats: self.repeats,
            seed: self.model.seed,
            zscore: self.model.zscore,
        }
    }
}

fn load(args: &DataArgs) -> anyhow::Result<(MultiLabelDataset, DataSource)> {
    let ds = csvio::load_csv(&args.data, args.labels).with_context(|| format!("loading {}", args.data.display()))?;
    Ok((ds, DataSource { path: args.data.display().to_string(), label_count: args.labels }))
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("{}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(path: Option<&Path>, json: String) -> anyhow::Result<()> {
    let mut w = output(path)?;
    w.write_all(json.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn elapsed(start: Instant, timing: bool) -> Option<f64> {
    timing.then(|| start.elapsed().as_secs_f64())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let start = Instant::now();
    match cli.command {
        Command::Stats { data, labels, out } => {
            let ds = csvio::load_csv(&data, labels).with_context(|| format!("loading {}", data.display()))?;
            let label_frequency = (0..ds.label_count()).map(|l| ds.label_rows().filter(|r| r[l]).count()).collect();
            let rep = StatsReport {
                command: "stats".into(),
                version: VERSION.into(),
                data: DataSource { path: data.display().to_string(), label_count: labels },
                stats: ds.stats(),
                label_names: ds.label_names().to_vec(),
                label_frequency,
            };
            emit(out.as_deref(), report::to_json(&rep)?)
        }
        Command::Cv { data, method, exp } => {
            let (ds, source) = load(&data)?;
            let cfg = exp.config(method);
            let outcome = harness::cross_validate(&ds, &cfg)?;
            let rep = CvReport {
                command: "cv".into(),
                version: VERSION.into(),
                data: Some(source),
                config: cfg.echo(),
                report: outcome.report,
                unit_results: outcome.units,
                wall_time_seconds: elapsed(start, exp.timing),
            };
            emit(exp.out.as_deref(), report::to_json(&rep)?)
        }
        Command::SweepTheta { data, method, values, exp } => {
            let spec = if values.is_empty() {
                SweepSpec::theta_default()
            } else {
                SweepSpec { parameter: SweepParameter::Theta, values }
            };
            sweep(&data, method, spec, &exp, start)
        }
        Command::SweepSize { data, method, values, exp } => {
            let spec = if values.is_empty() {
                SweepSpec::ensemble_size_default()
            } else {
                SweepSpec {
                    parameter: SweepParameter::EnsembleSize,
                    values: values.iter().map(|&v| v as f64).collect(),
                }
            };
            sweep(&data, method, spec, &exp, start)
        }
        Command::Compare { data, method, exp } => {
            let (ds, source) = load(&data)?;
            let methods = if method.is_empty() { Method::ALL.to_vec() } else { method };
            let cfgs: Vec<_> = methods.into_iter().map(|m| exp.config(m)).collect();
            let mut rep = harness::compare_methods(&ds, &cfgs, Some(source))?;
            rep.wall_time_seconds = elapsed(start, exp.timing);
            emit(exp.out.as_deref(), report::to_json(&rep)?)
        }
        Command::Train { data, method, model, out } => {
            let (ds, _) = load(&data)?;
            let (train, standardizer) = if model.zscore {
                let z = Standardizer::fit(ds.features());
                (ds.with_features(z.apply(ds.features())?)?, Some(z))
            } else {
                (ds.clone(), None)
            };
            let cfg = model.vpcme();
            let trained = harness::train_method(&train, method, &cfg)?;
            ModelFile::new(method, cfg, ds.label_names().to_vec(), standardizer, trained).save(&out)?;
            Ok(())
        }
        Command::Predict { model, data, out } => {
            let m = ModelFile::load(&model)?;
            predict(&m, &data, out.as_deref())
        }
        Command::Synth { kind, n, seed, noise, out } => {
            if !(0.0..=1.0).contains(&noise) {
                bail!("noise must lie in [0, 1], got {noise}");
            }
            let ds = match kind {
                SynthKind::Sign => synth::sign_labels(n, seed),
                SynthKind::Linear => synth::linear_labels(n, seed, noise),
            };
            let mut w = output(out.as_deref())?;
            csvio::write_csv(&ds, &mut w)?;
            w.flush()?;
            Ok(())
        }
    }
}

fn sweep(data: &DataArgs, method: Method, spec: SweepSpec, exp: &ExpArgs, start: Instant) -> anyhow::Result<()> {
    let (ds, source) = load(data)?;
    let cfg = exp.config(method);
    let points = harness::run_sweep(&ds, &cfg, &spec)?;
    let rep = SweepReport {
        command: match spec.parameter {
            SweepParameter::Theta => "sweep-theta",
            SweepParameter::EnsembleSize => "sweep-size",
        }
        .into(),
        version: VERSION.into(),
        data: Some(source),
        config: cfg.echo(),
        parameter: spec.parameter,
        points,
        wall_time_seconds: elapsed(start, exp.timing),
    };
    emit(exp.out.as_deref(), report::to_json(&rep)?)
}

fn predict(m: &ModelFile, data: &Path, out: Option<&Path>) -> anyhow::Result<()> {
    let file = File::open(data).with_context(|| format!("{}", data.display()))?;
    let rows = csvio::read_numeric_rows(file)?;
    let k = m.feature_count;
    let r = m.label_names.len();
    let mut w = csv::Writer::from_writer(output(out)?);
    let mut header = vec!["instance".to_string()];
    header.extend(m.label_names.iter().map(|l| format!("score:{l}")));
    header.extend(m.label_names.iter().map(|l| format!("pred:{l}")));
    w.write_record(&header)?;
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k && row.len() != k + r {
            bail!("row {}: expected {k} features (or {} with labels), found {} columns", i + 1, k + r, row.len());
        }
        let p = m.predict(&row[..k]).with_context(|| format!("row {}", i + 1))?;
        let mut rec = vec![i.to_string()];
        rec.extend(p.scores.iter().map(f64::to_string));
        rec.extend(p.labels.iter().map(|&b| u8::from(b).to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
