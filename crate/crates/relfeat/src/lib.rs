//! relfeat: turn sparse relational structure into flat feature vectors and
//! classify nodes with ordinary iid learners.
//!
//! The toolkit covers the whole pipeline for citation-style networks:
//!
//! * [`graph`] — symmetric weighted sparse graphs, labels, singleton
//!   removal.
//! * [`neighborhood`] — exact hop-distance shells and the neighbor-ID /
//!   NCC / NCP feature families.
//! * [`rwr`] — random-walk-with-restart similarity features.
//! * [`cluster`] — a multilevel partitioner and stacked cluster-membership
//!   features.
//! * [`learn`] — L2-penalized one-vs-rest logistic regression with grid
//!   search, plus a weighted-vote relational neighbor baseline.
//! * [`experiment`] — class-balanced splits, the evaluation harness and
//!   result summaries.
//! * [`io`] — LINQS citation files, edge lists, sparse feature files and
//!   result CSVs.

pub mod cluster;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod learn;
pub mod neighborhood;
pub mod recipe;
pub mod rwr;
pub mod sparse;
pub mod split;

pub use error::{Error, Result};
pub use graph::{
    build_label_matrix, remove_singletons, LabelAssignment, LabelMatrix, RelationGraph,
};
pub use io::{Dataset, ResultRecord};
pub use recipe::{Recipe, RecipeAtom};
pub use sparse::{concat_blocks, FeatureBlock, SparseFeatureMatrix};
pub use split::{class_balanced_split, SplitSpec};
