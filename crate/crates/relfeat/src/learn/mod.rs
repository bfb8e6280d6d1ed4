//! Prediction models: regularized one-vs-rest logistic regression with
//! grid-searched penalty, plus the weighted-vote relational neighbor
//! baseline.

pub mod logreg;
pub mod wvrn;

pub use logreg::{
    grid_search_c, majority_baseline, micro_accuracy, predict, predict_proba, read_model,
    stratified_folds, train_logreg_ova, train_logreg_ova_named, write_model, FitStats,
    GridSearch, LinearModel, GRAD_TOL, MAX_ITER,
};
pub use wvrn::{predict_from_scores, wvrn_relaxation_labeling, WvrnParams};
