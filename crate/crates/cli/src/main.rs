use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dynfeat::classify::{cross_validate, CvOptions, CvReport, Hyper, ModelKind, ModelSpec};
use dynfeat::features::{
    columns_for_groups, export_csv, extract_features, greedy_forward_selection, FeatureConfig, FeatureMatrix,
    Family, Selection, CONFIG_KEYS,
};
use dynfeat::graph::{
    generate_fixed_vertex_dataset, generate_planted_signal_dataset, load_dataset, save_tu_dataset,
    save_weighted_graphs, Dataset, DatasetStats, FixedVertexParams, PlantedSignalParams,
};
use dynfeat::profiles::topology_profiles;
use dynfeat::{Error, Result};

#[derive(Parser)]
#[command(name = "dynfeat", version, about = "Random-walk assortativity features for graph classification")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print dataset statistics as CSV.
    Stats(DatasetArgs),
    /// Write the feature matrix of a dataset as CSV.
    #[command(after_help = config_help())]
    Extract {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        features: FeatureArgs,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeated stratified cross-validation of a classifier on the features.
    #[command(after_help = config_help())]
    Evaluate {
        #[command(flatten)]
        data: DatasetArgs,
        #[command(flatten)]
        features: FeatureArgs,
        #[arg(long, value_enum, default_value_t = Model::Svm)]
        model: Model,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report 0 seconds, making output byte-identical across reruns.
        #[arg(long)]
        no_timing: bool,
    },
    /// Second-eigenvector assortativity curves on the six reference topologies.
    DemoFig1 {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        t_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic labeled dataset.
    GenSynth(SynthArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// Directory holding the dataset files.
    #[arg(long, env = "DYNFEAT_DATA_DIR")]
    dataset_dir: PathBuf,
    /// Dataset name: `{name}_A.txt` (TU layout) or `{name}.edges`.
    #[arg(long)]
    name: String,
}

#[derive(Args)]
struct FeatureArgs {
    /// `key = value` feature configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Attribute preset used when the config does not set `family`.
    #[arg(long, value_enum, default_value_t = FamilyArg::Bio)]
    family: FamilyArg,
    /// Add per-vertex features (all graphs must share their vertex set).
    #[arg(long)]
    fixed_vertex: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Bio,
    Social,
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Svm,
    Rf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthKind {
    FixedVertex,
    PlantedSignal,
}

#[derive(Clone, Copy, ValueEnum)]
enum SynthFormat {
    Tu,
    Weighted,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_enum)]
    kind: SynthKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory to write into (created if missing).
    #[arg(long)]
    out_dir: PathBuf,
    /// Dataset name (default: the kind).
    #[arg(long)]
    name: Option<String>,
    /// File layout (default: weighted for fixed_vertex, tu for planted_signal).
    #[arg(long, value_enum)]
    format: Option<SynthFormat>,
    /// fixed_vertex: vertices per graph.
    #[arg(long, default_value_t = 84)]
    nodes: usize,
    /// fixed_vertex: graphs in the block-structured class.
    #[arg(long, default_value_t = 91)]
    class_a: usize,
    /// fixed_vertex: graphs in the density-matched random class.
    #[arg(long, default_value_t = 113)]
    class_b: usize,
    #[arg(long, default_value_t = 3)]
    blocks: usize,
    #[arg(long, default_value_t = 0.3)]
    p_in: f64,
    #[arg(long, default_value_t = 0.05)]
    p_out: f64,
    #[arg(long, default_value_t = 10)]
    max_weight: u32,
    /// planted_signal: graphs per class.
    #[arg(long, default_value_t = 60)]
    per_class: usize,
}

fn config_help() -> String {
    format!("Feature config keys:\n{CONFIG_KEYS}")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Stats(data) => {
            let ds = load(&data)?;
            println!("{}", DatasetStats::CSV_HEADER);
            println!("{}", ds.stats());
            Ok(())
        }
        Command::Extract { data, features, out } => {
            let ds = load(&data)?;
            let cfg = feature_config(&features)?;
            let fm = extract_features(&ds, &cfg)?;
            export_csv(&fm, &out)?;
            eprintln!("wrote {} x {} features to {}", fm.nrows(), fm.ncols(), out.display());
            Ok(())
        }
        Command::Evaluate {
            data,
            features,
            model,
            folds,
            repeats,
            seed,
            out,
            no_timing,
        } => {
            let ds = load(&data)?;
            let cfg = feature_config(&features)?;
            let kind = match model {
                Model::Svm => ModelKind::LinearSvm,
                Model::Rf => ModelKind::RandomForest,
            };
            let spec = ModelSpec::new(kind, seed);
            let opts = CvOptions {
                folds,
                repeats,
                seed,
                ..CvOptions::default()
            };
            let mut fm = extract_features(&ds, &cfg)?;
            if cfg.selection == Selection::GreedyForward {
                fm = select(&fm, kind, folds, seed)?;
            }
            let mut report = cross_validate(&fm, &spec, &opts, None)?;
            report.dataset = ds.name.clone();
            if no_timing {
                report.runtime_seconds = 0.0;
            }
            print_report(&report, !no_timing, out.as_deref())
        }
        Command::DemoFig1 { n, t_max, seed, out } => {
            let mut body = String::from("topology,t,u\n");
            for p in topology_profiles(n, t_max, seed)? {
                for (t, u) in p.values.iter().enumerate() {
                    body.push_str(&format!("{},{t},{u:?}\n", p.topology));
                }
            }
            write_or_print(out.as_deref(), &body)
        }
        Command::GenSynth(args) => gen_synth(args),
    }
}

fn load(data: &DatasetArgs) -> Result<Dataset> {
    load_dataset(&data.dataset_dir, &data.name)
}

fn feature_config(args: &FeatureArgs) -> Result<FeatureConfig> {
    let family = match args.family {
        FamilyArg::Bio => Family::Bio,
        FamilyArg::Social => Family::Social,
    };
    let base = FeatureConfig::for_family(family);
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            FeatureConfig::parse(&text, base)?
        }
        None => base,
    };
    if args.fixed_vertex {
        cfg.fixed_vertex_mode = true;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn select(fm: &FeatureMatrix, kind: ModelKind, folds: usize, seed: u64) -> Result<FeatureMatrix> {
    let hyper = match kind {
        ModelKind::LinearSvm => Hyper::C(1.0),
        ModelKind::RandomForest => Hyper::Trees(100),
    };
    let groups = greedy_forward_selection(fm, hyper, folds, seed)?;
    let names: Vec<&str> = groups.iter().map(|g| g.config_name()).collect();
    eprintln!("selected attributes: {}", names.join(", "));
    Ok(fm.select_columns(&columns_for_groups(fm, &groups)))
}

fn print_report(report: &CvReport, timing: bool, out: Option<&Path>) -> Result<()> {
    let csv = format!("{}\n{}\n", CvReport::CSV_HEADER, report.csv_row(timing));
    println!("{report}");
    println!();
    print!("{csv}");
    if let Some(path) = out {
        fs::write(path, &csv).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    }
    Ok(())
}

fn write_or_print(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        }),
        None => {
            let _ = std::io::stdout().write_all(body.as_bytes());
            Ok(())
        }
    }
}

fn gen_synth(args: SynthArgs) -> Result<()> {
    let (ds, default_format) = match args.kind {
        SynthKind::FixedVertex => {
            let params = FixedVertexParams {
                n: args.nodes,
                class_a: args.class_a,
                class_b: args.class_b,
                blocks: args.blocks,
                p_in: args.p_in,
                p_out: args.p_out,
                max_weight: args.max_weight,
            };
            (generate_fixed_vertex_dataset(&params, args.seed)?, SynthFormat::Weighted)
        }
        SynthKind::PlantedSignal => {
            let params = PlantedSignalParams {
                per_class: args.per_class,
                ..PlantedSignalParams::default()
            };
            (generate_planted_signal_dataset(&params, args.seed)?, SynthFormat::Tu)
        }
    };
    let name = args.name.unwrap_or_else(|| match args.kind {
        SynthKind::FixedVertex => "fixed_vertex".into(),
        SynthKind::PlantedSignal => "planted_signal".into(),
    });
    fs::create_dir_all(&args.out_dir).map_err(|e| Error::Io {
        path: args.out_dir.clone(),
        source: e,
    })?;
    match args.format.unwrap_or(default_format) {
        SynthFormat::Tu => save_tu_dataset(&ds, &args.out_dir, &name)?,
        SynthFormat::Weighted => save_weighted_graphs(&ds, args.out_dir.join(format!("{name}.edges")))?,
    }
    eprintln!("wrote {} graphs to {}", ds.len(), args.out_dir.display());
    Ok(())
}
