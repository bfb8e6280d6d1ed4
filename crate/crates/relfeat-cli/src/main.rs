//! Command-line front end: ingest datasets, export feature files, train
//! and evaluate models, and drive full experiment sweeps.
//!
//! Exit codes: 0 on success, 2 on input/parse errors, 3 on solver
//! convergence failures.

use clap::{Args, Parser, Subcommand};
use relfeat::cluster;
use relfeat::experiment::{
    self, load_dataset, parse_config, run_experiment, DataSource, FeatureFactory, DEFAULT_GRID,
};
use relfeat::io;
use relfeat::learn;
use relfeat::recipe::{Recipe, RecipeAtom, DEFAULT_DISTANCES, DEFAULT_EPS, DEFAULT_WALK_WEIGHT};
use relfeat::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "relfeat", version, about = "Relational feature toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dataset (LINQS citation files or a generic edge list) into a
    /// dataset directory.
    Ingest(IngestArgs),
    /// Build a feature file from an ingested dataset.
    Features(FeaturesArgs),
    /// Train a one-vs-rest logistic regression model on a feature file.
    Train(TrainArgs),
    /// Evaluate a model on a feature file.
    Eval(EvalArgs),
    /// Run a full experiment sweep from a config file.
    Experiment(ExperimentArgs),
    /// Aggregate a results CSV into per-(recipe, ratio) statistics.
    Summarize(SummarizeArgs),
}

#[derive(Args)]
struct IngestArgs {
    /// LINQS content file (one node per line).
    #[arg(long, requires = "cites", conflicts_with = "edgelist")]
    content: Option<PathBuf>,
    /// LINQS cites file (one citation per line).
    #[arg(long, requires = "content")]
    cites: Option<PathBuf>,
    /// Generic weighted edge list instead of citation files.
    #[arg(long, conflicts_with = "cites")]
    edgelist: Option<PathBuf>,
    /// Node count hint for edge lists (isolated tail nodes).
    #[arg(long)]
    n_hint: Option<usize>,
    /// Output dataset directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FeaturesArgs {
    /// Ingested dataset directory.
    #[arg(long)]
    dataset: PathBuf,
    /// Feature recipe, e.g. "bow+ncc[1,2,3]+rwr[0.9,0.0001]+clusters".
    #[arg(long)]
    recipe: String,
    /// Output feature file.
    #[arg(long)]
    out: PathBuf,
    /// Seed for the cluster partitioner.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict neighbor-ID columns to labeled nodes.
    #[arg(long)]
    labeled_only: bool,
    /// Walk weight for rwr atoms given without parameters.
    #[arg(long)]
    r: Option<f64>,
    /// Sparsification threshold for rwr atoms given without parameters.
    #[arg(long)]
    eps: Option<f64>,
    /// Distance list for neighborhood atoms given without parameters.
    #[arg(long, value_delimiter = ',')]
    distances: Option<Vec<usize>>,
    /// Use precomputed cluster assignment files (one id per line; one file
    /// per clustering) instead of the internal partitioner.
    #[arg(long, value_delimiter = ',')]
    cluster_assignments: Option<Vec<PathBuf>>,
}

#[derive(Args)]
struct TrainArgs {
    /// Input feature file (rows with label "?" are ignored).
    #[arg(long)]
    features: PathBuf,
    /// Penalty weight on the data loss.
    #[arg(long = "C", conflicts_with = "grid")]
    c: Option<f64>,
    /// Grid-search C over {0.001, …, 1000} by stratified cross-validation.
    #[arg(long)]
    grid: bool,
    /// Cross-validation folds for --grid.
    #[arg(long, default_value_t = 3)]
    folds: usize,
    /// Seed for fold assignment.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output model file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    /// Feature file to score (rows with label "?" are skipped).
    #[arg(long)]
    features: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat key = value config file.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV (appended; header written once).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Results CSV produced by `experiment`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output TSV with mean ± std per (dataset, recipe, ratio).
    #[arg(long)]
    out: PathBuf,
    /// Optional gnuplot script drawing accuracy-vs-ratio curves.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Convergence { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> relfeat::Result<()> {
    match cli.command {
        Command::Ingest(args) => ingest(args),
        Command::Features(args) => features(args),
        Command::Train(args) => train(args),
        Command::Eval(args) => eval(args),
        Command::Experiment(args) => experiment_cmd(args),
        Command::Summarize(args) => summarize_cmd(args),
    }
}

fn ingest(args: IngestArgs) -> relfeat::Result<()> {
    let source = match (&args.content, &args.cites, &args.edgelist) {
        (Some(content), Some(cites), None) => DataSource::Linqs {
            content: content.clone(),
            cites: cites.clone(),
        },
        (None, None, Some(path)) => DataSource::Edgelist {
            path: path.clone(),
            n_hint: args.n_hint,
        },
        _ => {
            return Err(Error::input(
                "ingest needs either --content and --cites, or --edgelist",
            ))
        }
    };
    let ds = load_dataset(&source)?;
    io::save_dataset_dir(&ds, &args.out)?;
    let s = ds.summary();
    println!(
        "ingested {}: {} nodes, {} links, {} classes, dictionary {}, avg degree {:.4}",
        ds.name, s.nodes, s.links, s.classes, s.dictionary, s.avg_degree
    );
    if ds.link_stats.dangling_dropped > 0 {
        eprintln!(
            "warning: dropped {} citation(s) referencing unknown ids",
            ds.link_stats.dangling_dropped
        );
    }
    if ds.link_stats.self_citations > 0 {
        eprintln!(
            "warning: {} self-citation(s) counted as links but not stored as edges",
            ds.link_stats.self_citations
        );
    }
    Ok(())
}

fn apply_flag_overrides(recipe: &mut Recipe, args: &FeaturesArgs) {
    for atom in &mut recipe.atoms {
        match atom {
            RecipeAtom::NeighborIds { distances }
            | RecipeAtom::Ncc { distances }
            | RecipeAtom::Ncp { distances } => {
                if let Some(ds) = &args.distances {
                    if distances.as_slice() == DEFAULT_DISTANCES {
                        let mut ds = ds.clone();
                        ds.sort_unstable();
                        ds.dedup();
                        *distances = ds;
                    }
                }
            }
            RecipeAtom::Rwr { r, eps } => {
                if let (Some(flag_r), true) = (args.r, *r == DEFAULT_WALK_WEIGHT) {
                    *r = flag_r;
                }
                if let (Some(flag_eps), true) = (args.eps, *eps == DEFAULT_EPS) {
                    *eps = flag_eps;
                }
            }
            _ => {}
        }
    }
    if args.labeled_only {
        recipe.labeled_only = true;
    }
}

fn features(args: FeaturesArgs) -> relfeat::Result<()> {
    let ds = io::load_dataset_dir(&args.dataset)?;
    let mut recipe = Recipe::parse(&args.recipe)?;
    apply_flag_overrides(&mut recipe, &args);
    if recipe.is_empty() {
        return Err(Error::input("recipe is empty"));
    }
    let cluster_override = match &args.cluster_assignments {
        Some(paths) => {
            let mut partitions = Vec::new();
            for path in paths {
                let assignment = cluster::parse_assignment_file(path)?;
                let c = assignment.iter().copied().max().map_or(0, |m| m as usize + 1);
                partitions.push(cluster::Partition::from_assignment(
                    &ds.graphs[0],
                    c,
                    assignment,
                )?);
            }
            Some(cluster::membership_matrix(&partitions, ds.node_count())?)
        }
        None => None,
    };
    let factory = FeatureFactory::with_cluster_override(&ds, &recipe, args.seed, cluster_override)?;
    let visible = ds.labels.labeled_nodes();
    let x = factory.assemble(&visible)?;
    let y: Vec<Option<usize>> = (0..ds.node_count()).map(|i| ds.labels.label(i)).collect();
    io::write_features(&x, &y, &args.out)?;
    println!(
        "wrote {} rows × {} columns ({} nonzeros, recipe {}) to {}",
        x.n_rows(),
        x.n_cols(),
        x.nnz(),
        recipe,
        args.out.display()
    );
    Ok(())
}

fn train(args: TrainArgs) -> relfeat::Result<()> {
    let (x, y) = io::read_features(&args.features)?;
    let labeled: Vec<usize> = (0..x.n_rows()).filter(|&i| y[i].is_some()).collect();
    if labeled.is_empty() {
        return Err(Error::input("no labeled rows in the feature file"));
    }
    let x_train = x.select_rows(&labeled);
    let y_train: Vec<usize> = labeled.iter().map(|&i| y[i].unwrap()).collect();
    let n_classes = y_train.iter().copied().max().unwrap() + 1;
    let c = match (args.c, args.grid) {
        (Some(c), false) => c,
        (None, true) => {
            let gs = learn::grid_search_c(
                &x_train,
                &y_train,
                n_classes,
                &DEFAULT_GRID,
                args.folds,
                args.seed,
            )?;
            if gs.folds_used < args.folds {
                eprintln!(
                    "warning: reduced cross-validation to {} folds (smallest class)",
                    gs.folds_used
                );
            }
            println!("grid search selected C = {}", gs.best_c);
            gs.best_c
        }
        _ => return Err(Error::input("train needs exactly one of --C or --grid")),
    };
    let model = learn::train_logreg_ova(&x_train, &y_train, n_classes, c)?;
    learn::write_model(&model, &args.out)?;
    let pred = learn::predict(&model, &x_train)?;
    let acc = learn::micro_accuracy(&pred, &y_train)?;
    println!(
        "trained {} classes on {} rows (C = {c}); training accuracy {acc:.4}; model written to {}",
        n_classes,
        labeled.len(),
        args.out.display()
    );
    Ok(())
}

fn eval(args: EvalArgs) -> relfeat::Result<()> {
    let model = learn::read_model(&args.model)?;
    let (x, y) = io::read_features(&args.features)?;
    let labeled: Vec<usize> = (0..x.n_rows()).filter(|&i| y[i].is_some()).collect();
    if labeled.is_empty() {
        return Err(Error::input("no labeled rows to score"));
    }
    let x_eval = x.select_rows(&labeled);
    let truth: Vec<usize> = labeled.iter().map(|&i| y[i].unwrap()).collect();
    let pred = learn::predict(&model, &x_eval)?;
    let acc = learn::micro_accuracy(&pred, &truth)?;
    println!("{acc}");
    Ok(())
}

fn experiment_cmd(args: ExperimentArgs) -> relfeat::Result<()> {
    let config = parse_config(&args.config)?;
    let records = run_experiment(&config)?;
    io::write_results(&records, &args.out)?;
    let total_secs: f64 = records.iter().map(|r| r.wall_secs).sum();
    eprintln!(
        "{} records in {total_secs:.1}s appended to {}",
        records.len(),
        args.out.display()
    );
    for row in experiment::summarize(&records) {
        println!(
            "{}\t{}\tratio {}\tmean {:.4}\tstd {:.4}\t(n={})",
            row.dataset, row.recipe, row.ratio, row.mean, row.std, row.count
        );
    }
    Ok(())
}

fn summarize_cmd(args: SummarizeArgs) -> relfeat::Result<()> {
    let records = io::read_results(&args.input)?;
    let rows = experiment::summarize(&records);
    experiment::write_summary_tsv(&rows, &args.out)?;
    if let Some(plot) = &args.plot {
        experiment::write_plot_spec(&rows, &args.out, plot)?;
        println!("wrote plot spec to {}", plot.display());
    }
    println!("wrote {} summary rows to {}", rows.len(), args.out.display());
    Ok(())
}
