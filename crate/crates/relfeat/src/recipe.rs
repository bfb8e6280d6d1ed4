//! Feature recipes: which feature families to build and with what
//! parameters, written as `+`-joined atoms like
//! `bow+ncc[1,2,3]+rwr[0.9,0.0001]+clusters`.

use crate::error::{Error, Result};
use std::fmt;

pub const DEFAULT_DISTANCES: [usize; 3] = [1, 2, 3];
pub const DEFAULT_WALK_WEIGHT: f64 = 0.9;
pub const DEFAULT_EPS: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum RecipeAtom {
    /// Raw attribute features carried by the dataset.
    Bow,
    /// Binary neighbor indicators at the given hop distances.
    NeighborIds { distances: Vec<usize> },
    /// Neighbor class counts at the given hop distances.
    Ncc { distances: Vec<usize> },
    /// Row-normalized neighbor class probabilities.
    Ncp { distances: Vec<usize> },
    /// Random-walk-with-restart similarity rows. `r` is the walk weight as
    /// swept in the experiments (larger = smoother similarity); the steady
    /// state is solved with restart probability `1 - r`.
    Rwr { r: f64, eps: f64 },
    /// Stacked cluster memberships over all power-of-two resolutions.
    Clusters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub atoms: Vec<RecipeAtom>,
    /// Restrict neighbor-ID columns to training-visible nodes.
    pub labeled_only: bool,
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Recipe> {
        let mut atoms = Vec::new();
        let mut labeled_only = false;
        for token in text.split('+') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let (name, args) = match token.find('[') {
                Some(open) => {
                    if !token.ends_with(']') {
                        return Err(Error::input(format!("unclosed '[' in {token:?}")));
                    }
                    let args: Vec<&str> = token[open + 1..token.len() - 1]
                        .split([',', ';'])
                        .map(|s| s.trim())
                        .filter(|s| !s.is_empty())
                        .collect();
                    (&token[..open], args)
                }
                None => (token, Vec::new()),
            };
            let parse_distances = |args: &[&str]| -> Result<Vec<usize>> {
                if args.is_empty() {
                    return Ok(DEFAULT_DISTANCES.to_vec());
                }
                let mut ds = Vec::new();
                for a in args {
                    let d: usize = a
                        .parse()
                        .map_err(|_| Error::input(format!("bad distance {a:?}")))?;
                    ds.push(d);
                }
                ds.sort_unstable();
                ds.dedup();
                Ok(ds)
            };
            match name {
                "bow" => atoms.push(RecipeAtom::Bow),
                "neighbor-ids" | "ids" => atoms.push(RecipeAtom::NeighborIds {
                    distances: parse_distances(&args)?,
                }),
                "ncc" => atoms.push(RecipeAtom::Ncc {
                    distances: parse_distances(&args)?,
                }),
                "ncp" => atoms.push(RecipeAtom::Ncp {
                    distances: parse_distances(&args)?,
                }),
                "rwr" => {
                    let r = match args.first() {
                        Some(a) => a
                            .parse()
                            .map_err(|_| Error::input(format!("bad walk weight {a:?}")))?,
                        None => DEFAULT_WALK_WEIGHT,
                    };
                    let eps = match args.get(1) {
                        Some(a) => a
                            .parse()
                            .map_err(|_| Error::input(format!("bad eps {a:?}")))?,
                        None => DEFAULT_EPS,
                    };
                    if args.len() > 2 {
                        return Err(Error::input("rwr takes at most [r, eps]"));
                    }
                    atoms.push(RecipeAtom::Rwr { r, eps });
                }
                "clusters" => atoms.push(RecipeAtom::Clusters),
                "labeled-only" => labeled_only = true,
                other => return Err(Error::input(format!("unknown feature family {other:?}"))),
            }
        }
        Ok(Recipe {
            atoms,
            labeled_only,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Largest hop distance any atom needs, if any.
    pub fn max_distance(&self) -> Option<usize> {
        self.atoms
            .iter()
            .filter_map(|a| match a {
                RecipeAtom::NeighborIds { distances }
                | RecipeAtom::Ncc { distances }
                | RecipeAtom::Ncp { distances } => distances.iter().copied().max(),
                _ => None,
            })
            .max()
    }

    /// True if any atom depends on the training labels of the split.
    pub fn label_dependent(&self) -> bool {
        self.labeled_only
            || self
                .atoms
                .iter()
                .any(|a| matches!(a, RecipeAtom::Ncc { .. } | RecipeAtom::Ncp { .. }))
    }
}

fn fmt_distances(f: &mut fmt::Formatter<'_>, name: &str, ds: &[usize]) -> fmt::Result {
    write!(f, "{name}[")?;
    for (k, d) in ds.iter().enumerate() {
        if k > 0 {
            write!(f, ",")?;
        }
        write!(f, "{d}")?;
    }
    write!(f, "]")
}

impl fmt::Display for RecipeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecipeAtom::Bow => write!(f, "bow"),
            RecipeAtom::NeighborIds { distances } => fmt_distances(f, "neighbor-ids", distances),
            RecipeAtom::Ncc { distances } => fmt_distances(f, "ncc", distances),
            RecipeAtom::Ncp { distances } => fmt_distances(f, "ncp", distances),
            RecipeAtom::Rwr { r, eps } => write!(f, "rwr[{r},{eps}]"),
            RecipeAtom::Clusters => write!(f, "clusters"),
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, atom) in self.atoms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            write!(f, "{atom}")?;
        }
        if self.labeled_only {
            if !self.atoms.is_empty() {
                write!(f, "+")?;
            }
            write!(f, "labeled-only")?;
        }
        Ok(())
    }
}
