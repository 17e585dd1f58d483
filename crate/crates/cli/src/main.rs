mod config;
mod error;
mod evaluate;
mod prep;
mod synth;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use genmetrics::analysis::{MetricReport, Sampling, DEFAULT_FRACTIONS};
use genmetrics::features::{BackboneSpec, Registry};
use genmetrics::metrics::ManifoldParams;
use genmetrics::pixel::FilterKind;

use config::{parse_ref_split, RunConfig};
use error::{data, CliError, CliResult};
use evaluate::{write_text, CompareSettings, EvalSettings};

const THREADS_ENV: &str = "GENMETRICS_THREADS";
const DEFAULT_BACKBONE: &str = "InceptionV3";
const DEFAULT_SPLITS: usize = 10;

#[derive(Parser)]
#[command(name = "genmetrics", version, about = "Generative-model evaluation toolkit")]
struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Resize, normalize and quantize a directory of images to PNG.
    Prep(PrepArgs),
    /// Compute the metric report of generated features against a reference.
    Metrics(MetricsArgs),
    /// Sample-efficiency curves and a ranking of several generated sets.
    Compare(CompareArgs),
    /// Re-render a stored report, or export the backbone registry.
    Report(ReportArgs),
    /// Write a synthetic GMF1 feature file.
    Synth(SynthArgs),
}

#[derive(Args, Default)]
struct Shared {
    /// Backbone name from the registry.
    #[arg(long)]
    backbone: Option<String>,
    /// Resampling filter (bilinear, bicubic, lanczos, nearest).
    #[arg(long)]
    filter: Option<FilterKind>,
    /// Allow a backbone filter other than the backbone's friendly one.
    #[arg(long)]
    override_friendly_resizer: bool,
    /// Registry manifest to use instead of the built-in backbones.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Args, Default)]
struct MetricFlags {
    /// k for precision and recall.
    #[arg(long)]
    k_pr: Option<usize>,
    /// k for density and coverage.
    #[arg(long)]
    k_dc: Option<usize>,
    /// Chunks for the classifier score.
    #[arg(long)]
    splits: Option<usize>,
    /// Reference split declaration, NAME:COUNT.
    #[arg(long)]
    ref_split: Option<String>,
    /// Acknowledge that generated and reference counts differ.
    #[arg(long)]
    allow_count_mismatch: bool,
}

#[derive(Args)]
struct PrepArgs {
    /// Directory of PNG/JPEG images.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Square output side (training route only).
    #[arg(long)]
    resolution: Option<usize>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference (real) GMF1 features.
    #[arg(long)]
    real: PathBuf,
    /// Generated GMF1 features.
    #[arg(long)]
    fake: PathBuf,
    /// Model name in the report; defaults to the generated file stem.
    #[arg(long)]
    model: Option<String>,
    /// JSON report path; a CSV is written next to it. Without it the JSON
    /// goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    shared: Shared,
    #[command(flatten)]
    metric: MetricFlags,
}

#[derive(Args)]
struct CompareArgs {
    /// Source (real) GMF1 features.
    #[arg(long)]
    source: PathBuf,
    /// Generated GMF1 feature files to compare.
    targets: Vec<PathBuf>,
    /// Comma-separated fraction grid ending in 1.0.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    fractions: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Subsample with replacement.
    #[arg(long)]
    with_replacement: bool,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    shared: Shared,
    #[command(flatten)]
    metric: MetricFlags,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    /// Stored JSON report.
    #[arg(required_unless_present = "export_registry", conflicts_with = "export_registry")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the backbone registry manifest instead.
    #[arg(long)]
    export_registry: bool,
    #[arg(long)]
    registry: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    out: PathBuf,
    /// Pool features from the PNGs in this directory instead of sampling.
    #[arg(long)]
    images: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 16)]
    dim: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mean: f64,
    #[arg(long, default_value_t = 1.0)]
    std: f64,
    /// Add labels and posteriors over this many classes.
    #[arg(long)]
    classes: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn shared_config(s: &Shared, m: Option<&MetricFlags>) -> RunConfig {
    RunConfig {
        backbone: s.backbone.clone(),
        filter: s.filter,
        override_friendly_resizer: s.override_friendly_resizer.then_some(true),
        registry: s.registry.clone(),
        k_pr: m.and_then(|m| m.k_pr),
        k_dc: m.and_then(|m| m.k_dc),
        splits: m.and_then(|m| m.splits),
        ref_split: m.and_then(|m| m.ref_split.clone()),
        allow_count_mismatch: m.and_then(|m| m.allow_count_mismatch.then_some(true)),
        ..Default::default()
    }
}

fn merged(flags: RunConfig, path: Option<&Path>) -> CliResult<RunConfig> {
    Ok(match path {
        Some(p) => flags.or(RunConfig::load(p)?),
        None => flags,
    })
}

fn registry(cfg: &RunConfig) -> CliResult<Registry> {
    match &cfg.registry {
        None => Ok(Registry::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(data(p.display()))?;
            Registry::from_json(&text).map_err(data(p.display()))
        }
    }
}

fn backbone(cfg: &RunConfig) -> CliResult<BackboneSpec> {
    let name = cfg.backbone.as_deref().unwrap_or(DEFAULT_BACKBONE);
    registry(cfg)?.get(name).cloned().map_err(|e| CliError::Usage(e.to_string()))
}

/// The backbone filter: the friendly one unless an override is acknowledged.
fn backbone_filter(cfg: &RunConfig, spec: &BackboneSpec) -> CliResult<FilterKind> {
    let filter = cfg.filter.unwrap_or(spec.friendly_filter);
    if filter != spec.friendly_filter && !cfg.override_friendly_resizer.unwrap_or(false) {
        return Err(CliError::Usage(format!(
            "{} expects the {} resizer; pass --override-friendly-resizer to use {filter}",
            spec.name, spec.friendly_filter
        )));
    }
    Ok(filter)
}

fn eval_settings(cfg: &RunConfig) -> CliResult<EvalSettings> {
    let spec = backbone(cfg)?;
    let backbone_filter = backbone_filter(cfg, &spec)?;
    let defaults = ManifoldParams::default();
    let splits = cfg.splits.unwrap_or(DEFAULT_SPLITS);
    if splits == 0 {
        return Err(CliError::Usage("--splits must be positive".into()));
    }
    Ok(EvalSettings {
        spec,
        params: ManifoldParams { k_pr: cfg.k_pr.unwrap_or(defaults.k_pr), k_dc: cfg.k_dc.unwrap_or(defaults.k_dc) },
        splits,
        backbone_filter,
        allow_count_mismatch: cfg.allow_count_mismatch.unwrap_or(false),
    })
}

fn run_prep(args: PrepArgs, config: Option<&Path>) -> CliResult<()> {
    let mut flags = shared_config(&args.shared, None);
    flags.resolution = args.resolution;
    flags.out = args.out;
    let cfg = merged(flags, config)?;
    let out = cfg.out.clone().ok_or_else(|| CliError::Usage("prep needs --out".into()))?;
    let mode = if cfg.backbone.is_some() {
        let spec = backbone(&cfg)?;
        if cfg.resolution.is_some_and(|r| r != spec.input_resolution) {
            return Err(CliError::Usage(format!("{} takes {} pixel inputs", spec.name, spec.input_resolution)));
        }
        let filter = backbone_filter(&cfg, &spec)?;
        prep::PrepMode::Backbone { override_acknowledged: filter != spec.friendly_filter, filter, spec }
    } else {
        let resolution = cfg.resolution.ok_or_else(|| CliError::Usage("prep needs --resolution".into()))?;
        if resolution == 0 {
            return Err(CliError::Usage("--resolution must be positive".into()));
        }
        let filter = cfg.filter.unwrap_or(FilterKind::Bicubic);
        if !matches!(filter, FilterKind::Bicubic | FilterKind::Lanczos) {
            return Err(CliError::Usage(format!("training images need bicubic or lanczos, not {filter}")));
        }
        prep::PrepMode::Training { resolution, filter }
    };
    let n = prep::run(&args.input, &out, mode)?;
    println!("prepared {n} images into {}", out.display());
    Ok(())
}

fn run_metrics(args: MetricsArgs, config: Option<&Path>) -> CliResult<()> {
    let mut flags = shared_config(&args.shared, Some(&args.metric));
    flags.out = args.out;
    let cfg = merged(flags, config)?;
    let reference = parse_ref_split(
        cfg.ref_split.as_deref().ok_or_else(|| CliError::Usage("metrics needs --ref-split NAME:COUNT".into()))?,
    )?;
    let settings = eval_settings(&cfg)?;
    let real = evaluate::load(&args.real)?;
    let fake = evaluate::load(&args.fake)?;
    let model = args.model.unwrap_or_else(|| evaluate::file_stem(&args.fake));
    let report = evaluate::build_report(&model, &real, &fake, &reference, &settings)?;
    match &cfg.out {
        Some(path) => {
            write_text(path, &report.to_json())?;
            write_text(&path.with_extension("csv"), &report.to_csv())?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_json()),
    }
    Ok(())
}

fn run_compare(args: CompareArgs, config: Option<&Path>) -> CliResult<()> {
    let mut flags = shared_config(&args.shared, Some(&args.metric));
    flags.fractions = (!args.fractions.is_empty()).then_some(args.fractions);
    flags.seed = args.seed;
    flags.sampling = args.with_replacement.then_some(Sampling::WithReplacement);
    flags.out = args.out;
    let cfg = merged(flags, config)?;
    if args.targets.is_empty() {
        return Err(CliError::Usage("compare needs at least one target file".into()));
    }
    let reference = cfg.ref_split.as_deref().map(parse_ref_split).transpose()?;
    let out = cfg.out.clone().ok_or_else(|| CliError::Usage("compare needs --out DIR".into()))?;
    let settings = CompareSettings {
        eval: eval_settings(&cfg)?,
        fractions: cfg.fractions.clone().unwrap_or_else(|| DEFAULT_FRACTIONS.to_vec()),
        seed: cfg.seed.unwrap_or(0),
        sampling: cfg.sampling.unwrap_or_default(),
    };
    let ranking = evaluate::compare(&args.source, &args.targets, reference, &settings, &out)?;
    print!("{}", ranking.to_text());
    Ok(())
}

fn run_report(args: ReportArgs, config: Option<&Path>) -> CliResult<()> {
    let text = if args.export_registry {
        let flags = RunConfig { registry: args.registry, ..Default::default() };
        registry(&merged(flags, config)?)?.to_json()
    } else {
        let input = args.input.expect("clap enforces input");
        let raw = std::fs::read_to_string(&input).map_err(data(input.display()))?;
        let report = MetricReport::from_json(&raw).map_err(data(input.display()))?;
        match args.format {
            Format::Text => report.to_text(),
            Format::Csv => report.to_csv(),
            Format::Json => report.to_json(),
        }
    };
    match &args.out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_synth(args: SynthArgs) -> CliResult<()> {
    match &args.images {
        Some(dir) => {
            let n = synth::from_images(dir, &args.out, args.classes, args.seed)?;
            println!("wrote {n} pooled feature rows to {}", args.out.display());
        }
        None => {
            let p = synth::GaussianParams {
                count: args.count,
                dim: args.dim,
                mean: args.mean,
                std: args.std,
                classes: args.classes,
                seed: args.seed,
            };
            synth::gaussian(&args.out, &p)?;
            println!("wrote {} x {} features to {}", args.count, args.dim, args.out.display());
        }
    }
    Ok(())
}

fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let config = cli.config.as_deref();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Prep(a) => run_prep(a, config),
        Command::Metrics(a) => run_metrics(a, config),
        Command::Compare(a) => run_compare(a, config),
        Command::Report(a) => run_report(a, config),
        Command::Synth(a) => run_synth(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
