//! L2-penalized logistic regression, one binary subproblem per class.
//!
//! Each class `m` minimizes
//!
//! ```text
//! f(w, b) = 0.5·‖w‖² + C · Σ_i log(1 + exp(−t_i · (w·x_i + b)))
//! ```
//!
//! with `t_i = +1` for class-m rows and −1 otherwise. `C` multiplies the
//! data loss, so small `C` means strong regularization; the intercept is
//! not penalized. Optimization is full-batch L-BFGS with a strong-Wolfe
//! line search and is deterministic. A run counts as converged when the
//! gradient ∞-norm drops to `GRAD_TOL` or the iteration cap is hit.

use crate::error::{Error, Result};
use crate::sparse::SparseFeatureMatrix;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

pub const GRAD_TOL: f64 = 1e-6;
pub const MAX_ITER: usize = 1000;
const LBFGS_MEMORY: usize = 10;

/// Per-class weight vectors and intercepts for one-vs-rest prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    classes: Vec<String>,
    n_cols: usize,
    c_value: f64,
    weights: Vec<Vec<f64>>, // [class][column]
    intercepts: Vec<f64>,
    fits: Vec<FitStats>,
}

/// Optimizer trace for one binary subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct FitStats {
    /// Objective after every accepted step, starting with the initial value.
    pub objective_trace: Vec<f64>,
    pub grad_inf_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl LinearModel {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn c_value(&self) -> f64 {
        self.c_value
    }

    pub fn weights(&self, class: usize) -> &[f64] {
        &self.weights[class]
    }

    pub fn intercept(&self, class: usize) -> f64 {
        self.intercepts[class]
    }

    pub fn fits(&self) -> &[FitStats] {
        &self.fits
    }

    /// Objective value of class `m` at the stored optimum.
    pub fn objective(&self, class: usize) -> f64 {
        *self.fits[class]
            .objective_trace
            .last()
            .expect("trace never empty")
    }
}

#[inline]
fn log1pexp(z: f64) -> f64 {
    // log(1 + e^z) without overflow
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Objective and gradient of one binary subproblem at `theta = [w..., b]`.
fn objective_grad(
    x: &SparseFeatureMatrix,
    targets: &[f64],
    c: f64,
    theta: &[f64],
    grad: &mut [f64],
) -> f64 {
    let d = x.n_cols();
    let (w, b) = (&theta[..d], theta[d]);
    grad[..d].copy_from_slice(w);
    grad[d] = 0.0;
    let obj = 0.5 * w.iter().map(|v| v * v).sum::<f64>();
    let mut loss = 0.0;
    for i in 0..x.n_rows() {
        let z = x.row_dot(i, w) + b;
        let t = targets[i];
        loss += log1pexp(-t * z);
        let resid = -t * sigmoid(-t * z);
        let scaled = c * resid;
        for &(col, v) in x.row(i) {
            grad[col as usize] += scaled * v;
        }
        grad[d] += scaled;
    }
    obj + c * loss
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Strong-Wolfe line search (c1 = 1e-4, c2 = 0.9) by bracketing + bisection.
/// Returns the accepted step and the number of function evaluations.
#[allow(clippy::too_many_arguments)]
fn wolfe_search(
    x: &SparseFeatureMatrix,
    targets: &[f64],
    c: f64,
    theta: &[f64],
    dir: &[f64],
    f0: f64,
    g0_dot_d: f64,
    trial: &mut Vec<f64>,
    grad: &mut Vec<f64>,
) -> Option<(f64, f64)> {
    const C1: f64 = 1e-4;
    const C2: f64 = 0.9;
    let eval = |alpha: f64, trial: &mut Vec<f64>, grad: &mut Vec<f64>| -> (f64, f64) {
        trial.clear();
        trial.extend(theta.iter().zip(dir).map(|(t, d)| t + alpha * d));
        let f = objective_grad(x, targets, c, trial, grad);
        let gd = grad.iter().zip(dir).map(|(g, d)| g * d).sum::<f64>();
        (f, gd)
    };
    let mut alpha = 1.0f64;
    let mut lo = 0.0f64;
    let mut f_lo = f0;
    let mut hi = f64::INFINITY;
    for _ in 0..60 {
        let (f, gd) = eval(alpha, trial, grad);
        if !f.is_finite() || f > f0 + C1 * alpha * g0_dot_d {
            hi = alpha;
        } else if gd < C2 * g0_dot_d {
            lo = alpha;
            f_lo = f;
        } else {
            return Some((alpha, f));
        }
        alpha = if hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            2.0 * alpha
        };
        if hi - lo < 1e-16 * (1.0 + hi) {
            break;
        }
    }
    // fall back to the best sufficient-decrease point found
    if lo > 0.0 && f_lo < f0 {
        let (f, _) = eval(lo, trial, grad);
        return Some((lo, f));
    }
    None
}

/// Minimize one binary subproblem with L-BFGS.
fn train_binary(x: &SparseFeatureMatrix, targets: &[f64], c: f64) -> (Vec<f64>, f64, FitStats) {
    let d = x.n_cols();
    let dim = d + 1;
    let mut theta = vec![0.0f64; dim];
    let mut grad = vec![0.0f64; dim];
    let mut f = objective_grad(x, targets, c, &theta, &mut grad);
    let mut trace = vec![f];
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut rho: Vec<f64> = Vec::new();
    let mut trial = vec![0.0f64; dim];
    let mut new_grad = vec![0.0f64; dim];
    let mut iterations = 0;
    let mut converged = inf_norm(&grad) <= GRAD_TOL;

    while !converged && iterations < MAX_ITER {
        // two-loop recursion
        let mut dir: Vec<f64> = grad.iter().map(|g| -g).collect();
        let k = s_hist.len();
        let mut alphas = vec![0.0f64; k];
        for i in (0..k).rev() {
            let a = rho[i] * s_hist[i].iter().zip(&dir).map(|(s, d)| s * d).sum::<f64>();
            alphas[i] = a;
            for (dj, yj) in dir.iter_mut().zip(&y_hist[i]) {
                *dj -= a * yj;
            }
        }
        if k > 0 {
            let last = k - 1;
            let sy: f64 = s_hist[last].iter().zip(&y_hist[last]).map(|(s, y)| s * y).sum();
            let yy: f64 = y_hist[last].iter().map(|y| y * y).sum();
            if sy > 0.0 && yy > 0.0 {
                let gamma = sy / yy;
                dir.iter_mut().for_each(|dj| *dj *= gamma);
            }
        }
        for i in 0..k {
            let beta = rho[i] * y_hist[i].iter().zip(&dir).map(|(y, d)| y * d).sum::<f64>();
            for (dj, sj) in dir.iter_mut().zip(&s_hist[i]) {
                *dj += (alphas[i] - beta) * sj;
            }
        }
        let g_dot_d: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
        if g_dot_d >= 0.0 {
            // not a descent direction; restart from steepest descent
            s_hist.clear();
            y_hist.clear();
            rho.clear();
            dir = grad.iter().map(|g| -g).collect();
        }
        let g_dot_d: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();

        match wolfe_search(x, targets, c, &theta, &dir, f, g_dot_d, &mut trial, &mut new_grad) {
            Some((_, f_new)) => {
                debug_assert!(f_new <= f, "objective must not increase");
                let s: Vec<f64> = trial.iter().zip(&theta).map(|(t, o)| t - o).collect();
                let y: Vec<f64> = new_grad.iter().zip(&grad).map(|(n, o)| n - o).collect();
                let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
                if sy > 1e-12 {
                    if s_hist.len() == LBFGS_MEMORY {
                        s_hist.remove(0);
                        y_hist.remove(0);
                        rho.remove(0);
                    }
                    rho.push(1.0 / sy);
                    s_hist.push(s);
                    y_hist.push(y);
                }
                theta.copy_from_slice(&trial);
                grad.copy_from_slice(&new_grad);
                f = f_new;
                trace.push(f);
            }
            None => break, // line search exhausted: gradient is numerically flat
        }
        iterations += 1;
        converged = inf_norm(&grad) <= GRAD_TOL;
    }

    let stats = FitStats {
        objective_trace: trace,
        grad_inf_norm: inf_norm(&grad),
        iterations,
        converged,
    };
    (theta, f, stats)
}

/// Train one binary classifier per class on the given rows.
///
/// `y[i]` is the class index of row `i`; every class in `0..n_classes`
/// must have at least one row. `c` multiplies the data loss.
pub fn train_logreg_ova(
    x: &SparseFeatureMatrix,
    y: &[usize],
    n_classes: usize,
    c: f64,
) -> Result<LinearModel> {
    train_logreg_ova_named(
        x,
        y,
        &(0..n_classes).map(|m| m.to_string()).collect::<Vec<_>>(),
        c,
    )
}

/// [`train_logreg_ova`] with explicit class names.
pub fn train_logreg_ova_named(
    x: &SparseFeatureMatrix,
    y: &[usize],
    classes: &[String],
    c: f64,
) -> Result<LinearModel> {
    let n_classes = classes.len();
    if x.n_rows() != y.len() {
        return Err(Error::input(format!(
            "feature rows ({}) and labels ({}) disagree",
            x.n_rows(),
            y.len()
        )));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::input(format!("C must be positive, got {c}")));
    }
    let mut counts = vec![0usize; n_classes];
    for &yi in y {
        if yi >= n_classes {
            return Err(Error::input(format!(
                "label {yi} out of range for {n_classes} classes"
            )));
        }
        counts[yi] += 1;
    }
    let present = counts.iter().filter(|&&k| k > 0).count();
    if present < 2 {
        return Err(Error::input(
            "training data must contain at least two classes",
        ));
    }
    if let Some(m) = counts.iter().position(|&k| k == 0) {
        return Err(Error::input(format!(
            "class {m} ({}) has no training rows",
            classes[m]
        )));
    }
    if !x.max_abs().is_finite() {
        return Err(Error::input("non-finite feature values"));
    }

    let d = x.n_cols();
    let mut weights = Vec::with_capacity(n_classes);
    let mut intercepts = Vec::with_capacity(n_classes);
    let mut fits = Vec::with_capacity(n_classes);
    let mut targets = vec![0.0f64; y.len()];
    for m in 0..n_classes {
        for (t, &yi) in targets.iter_mut().zip(y) {
            *t = if yi == m { 1.0 } else { -1.0 };
        }
        let (theta, _, stats) = train_binary(x, &targets, c);
        weights.push(theta[..d].to_vec());
        intercepts.push(theta[d]);
        fits.push(stats);
    }
    Ok(LinearModel {
        classes: classes.to_vec(),
        n_cols: d,
        c_value: c,
        weights,
        intercepts,
        fits,
    })
}

/// Per-class sigmoid scores renormalized to sum to one per row.
pub fn predict_proba(model: &LinearModel, x: &SparseFeatureMatrix) -> Result<Vec<Vec<f64>>> {
    if x.n_cols() != model.n_cols {
        return Err(Error::input(format!(
            "model expects {} columns, features have {}",
            model.n_cols,
            x.n_cols()
        )));
    }
    let c = model.class_count();
    let mut out = Vec::with_capacity(x.n_rows());
    for i in 0..x.n_rows() {
        let mut scores: Vec<f64> = (0..c)
            .map(|m| sigmoid(x.row_dot(i, &model.weights[m]) + model.intercepts[m]))
            .collect();
        let total: f64 = scores.iter().sum();
        if total > 0.0 {
            scores.iter_mut().for_each(|s| *s /= total);
        }
        out.push(scores);
    }
    Ok(out)
}

/// Argmax class per row; ties break to the lowest class index.
pub fn predict(model: &LinearModel, x: &SparseFeatureMatrix) -> Result<Vec<usize>> {
    Ok(predict_proba(model, x)?
        .into_iter()
        .map(|scores| argmax(&scores))
        .collect())
}

pub(crate) fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (m, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = m;
        }
    }
    best
}

/// Fraction of positions where `pred` equals `truth`.
pub fn micro_accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::input(format!(
            "prediction length {} != truth length {}",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::input("cannot score an empty prediction"));
    }
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / pred.len() as f64)
}

/// Most frequent training class; ties break to the lowest index.
pub fn majority_baseline(y_train: &[usize], n_classes: usize) -> Result<usize> {
    if y_train.is_empty() {
        return Err(Error::input("majority baseline needs training labels"));
    }
    let mut counts = vec![0usize; n_classes];
    for &yi in y_train {
        if yi >= n_classes {
            return Err(Error::input(format!("label {yi} out of range")));
        }
        counts[yi] += 1;
    }
    let mut best = 0;
    for m in 1..n_classes {
        if counts[m] > counts[best] {
            best = m;
        }
    }
    Ok(best)
}

/// Deterministic stratified fold assignment: members of every class are
/// shuffled with the seeded generator and dealt round-robin over folds.
pub fn stratified_folds(
    y: &[usize],
    n_classes: usize,
    folds: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    if folds < 2 {
        return Err(Error::input("need at least 2 folds"));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut by_class = vec![Vec::new(); n_classes];
    for (i, &yi) in y.iter().enumerate() {
        if yi >= n_classes {
            return Err(Error::input(format!("label {yi} out of range")));
        }
        by_class[yi].push(i);
    }
    let mut out = vec![Vec::new(); folds];
    let mut next = 0usize;
    for members in by_class.iter_mut() {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            out[next % folds].push(i);
            next += 1;
        }
    }
    for fold in out.iter_mut() {
        fold.sort_unstable();
    }
    Ok(out)
}

/// Cross-validated grid-search result.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSearch {
    pub best_c: f64,
    pub folds_used: usize,
    /// `(C, pooled CV micro accuracy)` in grid order.
    pub scores: Vec<(f64, f64)>,
}

/// Pick the penalty weight by stratified k-fold cross-validation on the
/// training rows. Ties go to the smaller C (stronger regularization). When
/// some class has fewer members than `folds`, the fold count drops to that
/// class size (minimum 2).
pub fn grid_search_c(
    x: &SparseFeatureMatrix,
    y: &[usize],
    n_classes: usize,
    grid: &[f64],
    folds: usize,
    seed: u64,
) -> Result<GridSearch> {
    if grid.is_empty() {
        return Err(Error::input("grid must be non-empty"));
    }
    if folds < 2 {
        return Err(Error::input("need at least 2 folds"));
    }
    let mut counts = vec![0usize; n_classes];
    for &yi in y {
        if yi >= n_classes {
            return Err(Error::input(format!("label {yi} out of range")));
        }
        counts[yi] += 1;
    }
    let min_class = counts.iter().copied().filter(|&k| k > 0).min().unwrap_or(0);
    if min_class < 2 {
        return Err(Error::input(
            "grid search needs at least 2 members per class",
        ));
    }
    let folds_used = folds.min(min_class).max(2);
    let fold_sets = stratified_folds(y, n_classes, folds_used, seed)?;

    let mut scores = Vec::with_capacity(grid.len());
    for &c in grid {
        let mut hits = 0usize;
        let mut total = 0usize;
        for held in 0..folds_used {
            let test_idx = &fold_sets[held];
            let train_idx: Vec<usize> = (0..folds_used)
                .filter(|&f| f != held)
                .flat_map(|f| fold_sets[f].iter().copied())
                .collect();
            let x_train = x.select_rows(&train_idx);
            let y_train: Vec<usize> = train_idx.iter().map(|&i| y[i]).collect();
            let model = train_logreg_ova(&x_train, &y_train, n_classes, c)?;
            let x_test = x.select_rows(test_idx);
            let pred = predict(&model, &x_test)?;
            hits += pred
                .iter()
                .zip(test_idx.iter().map(|&i| y[i]))
                .filter(|&(p, t)| *p == t)
                .count();
            total += test_idx.len();
        }
        scores.push((c, hits as f64 / total as f64));
    }
    let mut best = 0usize;
    for k in 1..scores.len() {
        let (ck, sk) = scores[k];
        let (cb, sb) = scores[best];
        if sk > sb || (sk == sb && ck < cb) {
            best = k;
        }
    }
    Ok(GridSearch {
        best_c: scores[best].0,
        folds_used,
        scores,
    })
}

/// Text serialization: a `#key=value` header line followed by one sparse
/// weight line per class (`<intercept> <col>:<value> ...`).
pub fn write_model(model: &LinearModel, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut out = BufWriter::new(file);
    writeln!(
        out,
        "#classes={} #cols={} #C={}",
        model.classes.join(","),
        model.n_cols,
        model.c_value
    )?;
    for m in 0..model.class_count() {
        write!(out, "{}", model.intercepts[m])?;
        for (col, &v) in model.weights[m].iter().enumerate() {
            if v != 0.0 {
                write!(out, " {col}:{v}")?;
            }
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_model(path: &Path) -> Result<LinearModel> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, "empty model file"))??;
    let mut classes: Option<Vec<String>> = None;
    let mut n_cols: Option<usize> = None;
    let mut c_value: Option<f64> = None;
    for token in header.split_whitespace() {
        if let Some(rest) = token.strip_prefix("#classes=") {
            classes = Some(rest.split(',').map(|s| s.to_string()).collect());
        } else if let Some(rest) = token.strip_prefix("#cols=") {
            n_cols = Some(
                rest.parse()
                    .map_err(|_| Error::parse(path, 1, "bad #cols"))?,
            );
        } else if let Some(rest) = token.strip_prefix("#C=") {
            c_value = Some(rest.parse().map_err(|_| Error::parse(path, 1, "bad #C"))?);
        }
    }
    let classes = classes.ok_or_else(|| Error::parse(path, 1, "missing #classes"))?;
    let n_cols = n_cols.ok_or_else(|| Error::parse(path, 1, "missing #cols"))?;
    let c_value = c_value.ok_or_else(|| Error::parse(path, 1, "missing #C"))?;
    let mut weights = Vec::with_capacity(classes.len());
    let mut intercepts = Vec::with_capacity(classes.len());
    for (k, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = k + 2;
        let mut parts = line.split_whitespace();
        let b: f64 = parts
            .next()
            .ok_or_else(|| Error::parse(path, lineno, "missing intercept"))?
            .parse()
            .map_err(|_| Error::parse(path, lineno, "bad intercept"))?;
        let mut w = vec![0.0f64; n_cols];
        for token in parts {
            let (col, val) = token
                .split_once(':')
                .ok_or_else(|| Error::parse(path, lineno, format!("bad entry {token:?}")))?;
            let col: usize = col
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad column index"))?;
            if col >= n_cols {
                return Err(Error::parse(path, lineno, format!("column {col} out of range")));
            }
            w[col] = val
                .parse()
                .map_err(|_| Error::parse(path, lineno, "bad weight value"))?;
        }
        weights.push(w);
        intercepts.push(b);
    }
    if weights.len() != classes.len() {
        return Err(Error::parse(
            path,
            1,
            format!(
                "expected {} weight lines, found {}",
                classes.len(),
                weights.len()
            ),
        ));
    }
    let fits = vec![
        FitStats {
            objective_trace: vec![f64::NAN],
            grad_inf_norm: f64::NAN,
            iterations: 0,
            converged: true,
        };
        classes.len()
    ];
    Ok(LinearModel {
        classes,
        n_cols,
        c_value,
        weights,
        intercepts,
        fits,
    })
}
