//! The experiment harness: singleton removal, class-balanced splits over a
//! ratio grid, per-split feature assembly, model training and evaluation,
//! and CSV/summary emission.

use crate::cluster;
use crate::error::{Error, Result};
use crate::graph::build_label_matrix;
use crate::io::{self, Dataset, ResultRecord};
use crate::learn::{self, WvrnParams};
use crate::neighborhood::{self, NeighborhoodShells};
use crate::recipe::{Recipe, RecipeAtom};
use crate::rwr;
use crate::sparse::{concat_blocks, SparseFeatureMatrix};
use crate::split::class_balanced_split;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const DEFAULT_GRID: [f64; 7] = [0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0];
pub const DEFAULT_FOLDS: usize = 3;
pub const RWR_TOL: f64 = 1e-8;
pub const RWR_MAX_ITER: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Logreg,
    Wvrn,
    Majority,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Logreg => write!(f, "logreg"),
            ModelKind::Wvrn => write!(f, "wvrn"),
            ModelKind::Majority => write!(f, "majority"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Linqs { content: PathBuf, cites: PathBuf },
    Edgelist { path: PathBuf, n_hint: Option<usize> },
    Dir(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: Option<String>,
    pub source: DataSource,
    pub recipe: Recipe,
    pub ratios: Vec<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
    pub grid: Vec<f64>,
    pub folds: usize,
    pub model: ModelKind,
    pub wvrn: WvrnParams,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions < 1 {
            return Err(Error::input("repetitions must be at least 1"));
        }
        if self.ratios.is_empty() {
            return Err(Error::input("at least one ratio is required"));
        }
        for &r in &self.ratios {
            let tenth = (r * 10.0).round();
            if !(1.0..=9.0).contains(&tenth) || (r - tenth / 10.0).abs() > 1e-9 {
                return Err(Error::input(format!(
                    "ratio {r} is not one of 0.1, 0.2, …, 0.9"
                )));
            }
        }
        if self.model == ModelKind::Logreg {
            if self.recipe.is_empty() {
                return Err(Error::input("logreg experiments need a non-empty recipe"));
            }
            if self.grid.is_empty() {
                return Err(Error::input("grid must be non-empty"));
            }
            if self.grid.iter().any(|&c| !(c > 0.0)) {
                return Err(Error::input("grid values must be positive"));
            }
            if self.folds < 2 {
                return Err(Error::input("folds must be at least 2"));
            }
        }
        Ok(())
    }

    /// Recipe string recorded in result rows.
    pub fn recipe_label(&self) -> String {
        match self.model {
            ModelKind::Logreg => self.recipe.to_string(),
            ModelKind::Wvrn => "wvrn".to_string(),
            ModelKind::Majority => "majority".to_string(),
        }
    }
}

/// Parse a flat `key = value` experiment config.
///
/// Recognized keys: `name`, `content`, `cites`, `edgelist`, `n_hint`,
/// `dataset_dir`, `recipe`, `ratios`, `repetitions`, `seed`, `grid`,
/// `folds`, `model`, `wvrn_max_iters`, `wvrn_beta0`, `wvrn_decay`,
/// `wvrn_tol`. Lists are comma-separated. Lines starting with `#` are
/// comments. Relative paths resolve against the config file's directory.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut kv = std::collections::BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (key, value) = t
            .split_once('=')
            .ok_or_else(|| Error::parse(path, k + 1, "expected key = value"))?;
        kv.insert(key.trim().to_string(), value.trim().to_string());
    }
    let resolve = |p: &str| -> PathBuf {
        let pb = PathBuf::from(p);
        if pb.is_absolute() {
            pb
        } else {
            base.join(pb)
        }
    };
    let source = match (kv.get("content"), kv.get("cites"), kv.get("edgelist"), kv.get("dataset_dir")) {
        (Some(content), Some(cites), None, None) => DataSource::Linqs {
            content: resolve(content),
            cites: resolve(cites),
        },
        (None, None, Some(edges), None) => DataSource::Edgelist {
            path: resolve(edges),
            n_hint: match kv.get("n_hint") {
                Some(v) => Some(
                    v.parse()
                        .map_err(|_| Error::input(format!("bad n_hint {v:?}")))?,
                ),
                None => None,
            },
        },
        (None, None, None, Some(dir)) => DataSource::Dir(resolve(dir)),
        _ => {
            return Err(Error::input(
                "config must name exactly one source: content+cites, edgelist, or dataset_dir",
            ))
        }
    };
    let parse_f64_list = |key: &str, default: &[f64]| -> Result<Vec<f64>> {
        match kv.get(key) {
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::input(format!("bad {key} entry {s:?}")))
                })
                .collect(),
            None => Ok(default.to_vec()),
        }
    };
    let ratios = parse_f64_list(
        "ratios",
        &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9],
    )?;
    let grid = parse_f64_list("grid", &DEFAULT_GRID)?;
    let parse_num = |key: &str, default: u64| -> Result<u64> {
        match kv.get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::input(format!("bad {key} {v:?}"))),
            None => Ok(default),
        }
    };
    let model = match kv.get("model").map(|s| s.as_str()) {
        None | Some("logreg") => ModelKind::Logreg,
        Some("wvrn") => ModelKind::Wvrn,
        Some("majority") => ModelKind::Majority,
        Some(other) => return Err(Error::input(format!("unknown model {other:?}"))),
    };
    let recipe = match kv.get("recipe") {
        Some(r) => Recipe::parse(r)?,
        None => Recipe {
            atoms: Vec::new(),
            labeled_only: false,
        },
    };
    let mut wvrn = WvrnParams::default();
    if let Some(v) = kv.get("wvrn_max_iters") {
        wvrn.max_iters = v
            .parse()
            .map_err(|_| Error::input(format!("bad wvrn_max_iters {v:?}")))?;
    }
    let parse_f64 = |key: &str| -> Result<Option<f64>> {
        match kv.get(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::input(format!("bad {key} {v:?}"))),
            None => Ok(None),
        }
    };
    if let Some(v) = parse_f64("wvrn_beta0")? {
        wvrn.beta0 = v;
    }
    if let Some(v) = parse_f64("wvrn_decay")? {
        wvrn.decay = v;
    }
    if let Some(v) = parse_f64("wvrn_tol")? {
        wvrn.tol = v;
    }
    let config = ExperimentConfig {
        name: kv.get("name").cloned(),
        source,
        recipe,
        ratios,
        repetitions: parse_num("repetitions", 10)? as usize,
        base_seed: parse_num("seed", 0)?,
        grid,
        folds: parse_num("folds", DEFAULT_FOLDS as u64)? as usize,
        model,
        wvrn,
    };
    config.validate()?;
    Ok(config)
}

pub fn load_dataset(source: &DataSource) -> Result<Dataset> {
    match source {
        DataSource::Linqs { content, cites } => io::parse_linqs(content, cites),
        DataSource::Dir(dir) => io::load_dataset_dir(dir),
        DataSource::Edgelist { path, n_hint } => {
            let graph = io::parse_edgelist(path, *n_hint)?;
            let n = graph.node_count();
            let labels = crate::graph::LabelAssignment::new(Vec::new(), vec![None; n])?;
            let node_ids = (0..n).map(|i| i.to_string()).collect();
            let links = graph.edge_count();
            Dataset::new(
                path.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "edgelist".into()),
                vec![graph],
                SparseFeatureMatrix::empty(n),
                labels,
                node_ids,
                io::LinkStats {
                    links,
                    ..Default::default()
                },
            )
        }
    }
}

/// Split-independent feature state, computed once per dataset.
pub struct FeatureFactory<'a> {
    ds: &'a Dataset,
    shells: Vec<NeighborhoodShells>,
    cached: Vec<CachedAtom>,
    recipe: Recipe,
}

enum CachedAtom {
    /// Fully split-independent block.
    Ready(SparseFeatureMatrix),
    /// Neighbor-ID blocks per relation, maskable per split.
    Ids(Vec<SparseFeatureMatrix>),
    /// Label-dependent block, built per split.
    PerSplit,
}

impl<'a> FeatureFactory<'a> {
    pub fn new(ds: &'a Dataset, recipe: &Recipe, seed: u64) -> Result<Self> {
        Self::with_cluster_override(ds, recipe, seed, None)
    }

    /// Like [`FeatureFactory::new`] but substituting a precomputed
    /// cluster-membership matrix (for example read from assignment files)
    /// for the internal partitioner.
    pub fn with_cluster_override(
        ds: &'a Dataset,
        recipe: &Recipe,
        seed: u64,
        cluster_override: Option<SparseFeatureMatrix>,
    ) -> Result<Self> {
        let shells = match recipe.max_distance() {
            Some(d_max) => ds
                .graphs
                .iter()
                .map(|g| neighborhood::compute_shells(g, d_max))
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let mut cached = Vec::with_capacity(recipe.atoms.len());
        for atom in &recipe.atoms {
            let entry = match atom {
                RecipeAtom::Bow => CachedAtom::Ready(ds.attributes.clone()),
                RecipeAtom::NeighborIds { distances } => {
                    let per_rel = shells
                        .iter()
                        .map(|sh| neighborhood::neighbor_id_features(sh, distances))
                        .collect::<Result<Vec<_>>>()?;
                    if recipe.labeled_only {
                        CachedAtom::Ids(per_rel)
                    } else {
                        CachedAtom::Ready(concat_blocks(&per_rel)?)
                    }
                }
                RecipeAtom::Ncc { .. } | RecipeAtom::Ncp { .. } => CachedAtom::PerSplit,
                RecipeAtom::Rwr { r, eps } => {
                    if !(*r > 0.0 && *r < 1.0) {
                        return Err(Error::input(format!("rwr walk weight {r} not in (0, 1)")));
                    }
                    // the recipe's r weights the walk; the solver's restart
                    // probability is its complement
                    let restart = 1.0 - r;
                    let mut parts = Vec::new();
                    for g in &ds.graphs {
                        let w = rwr::transition_matrix(g);
                        let p = rwr::rwr_steady_state(&w, restart, RWR_TOL, RWR_MAX_ITER)?;
                        parts.push(rwr::rwr_features(&p, *eps)?);
                    }
                    CachedAtom::Ready(concat_blocks(&parts)?)
                }
                RecipeAtom::Clusters => match &cluster_override {
                    Some(m) => {
                        if m.n_rows() != ds.node_count() {
                            return Err(Error::input(
                                "cluster override row count does not match the dataset",
                            ));
                        }
                        CachedAtom::Ready(m.clone())
                    }
                    None => {
                        let mut parts = Vec::new();
                        for g in &ds.graphs {
                            let (_, m) = cluster::cluster_membership_features(g, seed)?;
                            parts.push(m);
                        }
                        CachedAtom::Ready(concat_blocks(&parts)?)
                    }
                },
            };
            cached.push(entry);
        }
        Ok(FeatureFactory {
            ds,
            shells,
            cached,
            recipe: recipe.clone(),
        })
    }

    /// Assemble the full feature matrix for one split's visible label set.
    pub fn assemble(&self, train_visible: &[usize]) -> Result<SparseFeatureMatrix> {
        let n = self.ds.node_count();
        let label_matrix = build_label_matrix(&self.ds.labels, train_visible)?;
        let mut keep = vec![false; n];
        for &i in train_visible {
            keep[i] = true;
        }
        let mut parts = Vec::with_capacity(self.recipe.atoms.len());
        for (atom, cached) in self.recipe.atoms.iter().zip(&self.cached) {
            match cached {
                CachedAtom::Ready(m) => parts.push(m.clone()),
                CachedAtom::Ids(per_rel) => {
                    for m in per_rel {
                        parts.push(neighborhood::restrict_neighbor_ids(m, n, &keep)?);
                    }
                }
                CachedAtom::PerSplit => match atom {
                    RecipeAtom::Ncc { distances } => {
                        for sh in &self.shells {
                            parts.push(neighborhood::ncc_features(sh, &label_matrix, distances)?);
                        }
                    }
                    RecipeAtom::Ncp { distances } => {
                        for sh in &self.shells {
                            parts.push(neighborhood::ncp_features(sh, &label_matrix, distances)?);
                        }
                    }
                    _ => unreachable!("only ncc/ncp are per-split"),
                },
            }
        }
        concat_blocks(&parts)
    }
}

/// Run the full protocol for one configuration: singleton removal once,
/// then one record per (ratio, repetition) cell, sorted by (ratio, seed).
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let raw = load_dataset(&config.source)?;
    let (ds, _) = raw.remove_singletons();
    let dataset_name = config.name.clone().unwrap_or_else(|| ds.name.clone());
    let recipe_label = config.recipe_label();

    let factory = match config.model {
        ModelKind::Logreg => Some(FeatureFactory::new(&ds, &config.recipe, config.base_seed)?),
        _ => None,
    };

    let n_classes = ds.labels.class_count();
    let mut ratios = config.ratios.clone();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut records = Vec::with_capacity(ratios.len() * config.repetitions);
    for &ratio in &ratios {
        for rep in 0..config.repetitions {
            let seed = config.base_seed + rep as u64;
            let started = Instant::now();
            let split = class_balanced_split(&ds.labels, ratio, seed)?;
            let y_train: Vec<usize> = split
                .train
                .iter()
                .map(|&i| ds.labels.label(i).expect("train nodes are labeled"))
                .collect();
            let test_labeled: Vec<usize> = split
                .test
                .iter()
                .copied()
                .filter(|&i| ds.labels.label(i).is_some())
                .collect();
            let truth: Vec<usize> = test_labeled
                .iter()
                .map(|&i| ds.labels.label(i).unwrap())
                .collect();
            let accuracy = match config.model {
                ModelKind::Logreg => {
                    let factory = factory.as_ref().unwrap();
                    let x = factory.assemble(&split.train)?;
                    let x_train = x.select_rows(&split.train);
                    let best_c = if config.grid.len() == 1 {
                        config.grid[0]
                    } else {
                        let cv_seed = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
                        learn::grid_search_c(
                            &x_train,
                            &y_train,
                            n_classes,
                            &config.grid,
                            config.folds,
                            cv_seed,
                        )?
                        .best_c
                    };
                    let model = learn::train_logreg_ova(&x_train, &y_train, n_classes, best_c)?;
                    let x_test = x.select_rows(&test_labeled);
                    let pred = learn::predict(&model, &x_test)?;
                    learn::micro_accuracy(&pred, &truth)?
                }
                ModelKind::Wvrn => {
                    let scores = learn::wvrn_relaxation_labeling(
                        &ds.graphs[0],
                        &ds.labels,
                        &split.train,
                        &config.wvrn,
                    )?;
                    let pred_all = learn::predict_from_scores(&scores);
                    let pred: Vec<usize> = test_labeled.iter().map(|&i| pred_all[i]).collect();
                    learn::micro_accuracy(&pred, &truth)?
                }
                ModelKind::Majority => {
                    let majority = learn::majority_baseline(&y_train, n_classes)?;
                    let pred = vec![majority; truth.len()];
                    learn::micro_accuracy(&pred, &truth)?
                }
            };
            records.push(ResultRecord {
                dataset: dataset_name.clone(),
                recipe: recipe_label.clone(),
                ratio,
                seed,
                accuracy,
                wall_secs: started.elapsed().as_secs_f64(),
            });
        }
    }
    records.sort_by(|a, b| {
        (a.recipe.as_str(), a.ratio, a.seed)
            .partial_cmp(&(b.recipe.as_str(), b.ratio, b.seed))
            .unwrap()
    });
    Ok(records)
}

/// Mean/σ of accuracy per (dataset, recipe, ratio) group.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub dataset: String,
    pub recipe: String,
    pub ratio: f64,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
}

pub fn summarize(records: &[ResultRecord]) -> Vec<SummaryRow> {
    let mut groups: std::collections::BTreeMap<(String, String, u64), Vec<f64>> =
        std::collections::BTreeMap::new();
    for r in records {
        groups
            .entry((r.dataset.clone(), r.recipe.clone(), r.ratio.to_bits()))
            .or_default()
            .push(r.accuracy);
    }
    let mut rows: Vec<SummaryRow> = groups
        .into_iter()
        .map(|((dataset, recipe, ratio_bits), accs)| {
            let n = accs.len();
            let mean = accs.iter().sum::<f64>() / n as f64;
            let var = accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n as f64;
            SummaryRow {
                dataset,
                recipe,
                ratio: f64::from_bits(ratio_bits),
                count: n,
                mean,
                std: var.sqrt(),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        (a.dataset.as_str(), a.recipe.as_str(), a.ratio)
            .partial_cmp(&(b.dataset.as_str(), b.recipe.as_str(), b.ratio))
            .unwrap()
    });
    rows
}

pub fn write_summary_tsv(rows: &[SummaryRow], path: &Path) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "dataset\trecipe\tratio\tn\tmean\tstd")?;
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.dataset, r.recipe, r.ratio, r.count, r.mean, r.std
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Emit a gnuplot script drawing accuracy-vs-ratio curves, one line per
/// (dataset, recipe), reading from the given TSV.
pub fn write_plot_spec(rows: &[SummaryRow], tsv_path: &Path, out_path: &Path) -> Result<()> {
    use std::io::Write;
    let mut series: Vec<(String, String)> = Vec::new();
    for r in rows {
        let key = (r.dataset.clone(), r.recipe.clone());
        if !series.contains(&key) {
            series.push(key);
        }
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(out_path)?);
    writeln!(out, "set datafile separator '\\t'")?;
    writeln!(out, "set xlabel 'labeled ratio'")?;
    writeln!(out, "set ylabel 'micro accuracy'")?;
    writeln!(out, "set yrange [0:1]")?;
    writeln!(out, "set key bottom right")?;
    write!(out, "plot")?;
    for (k, (dataset, recipe)) in series.iter().enumerate() {
        if k > 0 {
            write!(out, ",")?;
        }
        write!(
            out,
            " '{}' using 3:(strcol(1) eq '{dataset}' && strcol(2) eq '{recipe}' ? $5 : 1/0):6 with yerrorlines title '{dataset} {recipe}'",
            tsv_path.display()
        )?;
    }
    writeln!(out)?;
    out.flush()?;
    Ok(())
}
