//! Interactive playground: build a small graph, then explore the three
//! relational-feature views the toolkit computes — hop-distance shells,
//! random-walk-with-restart heat, and multilevel cluster memberships.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relfeat::cluster;
use relfeat::graph::RelationGraph;
use relfeat::neighborhood::compute_shells;
use relfeat::rwr::{rwr_steady_state, transition_matrix};
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Playground {
    graph: RelationGraph,
    positions: Vec<(f64, f64)>,
}

fn bridge_graph() -> (RelationGraph, Vec<(f64, f64)>) {
    let edges = [
        (0usize, 1usize, 1.0),
        (1, 2, 1.0),
        (0, 2, 1.0),
        (3, 4, 1.0),
        (4, 5, 1.0),
        (3, 5, 1.0),
        (2, 3, 1.0),
    ];
    let positions = vec![
        (0.12, 0.30),
        (0.12, 0.70),
        (0.32, 0.50),
        (0.68, 0.50),
        (0.88, 0.30),
        (0.88, 0.70),
    ];
    (RelationGraph::from_edges(6, &edges).unwrap(), positions)
}

fn block_graph(n: usize, seed: u64) -> (RelationGraph, Vec<(f64, f64)>) {
    let blocks = 4usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per = (n / blocks).max(2);
    let n = per * blocks;
    let centers = [(0.28, 0.28), (0.72, 0.28), (0.28, 0.72), (0.72, 0.72)];
    let mut positions = Vec::with_capacity(n);
    for i in 0..n {
        let (cx, cy) = centers[i / per];
        let jitter = |rng: &mut ChaCha8Rng| rng.random_range(-0.16f64..0.16);
        positions.push((
            (cx + jitter(&mut rng)).clamp(0.03, 0.97),
            (cy + jitter(&mut rng)).clamp(0.03, 0.97),
        ));
    }
    let mut edges = Vec::new();
    let p_in = (6.0 / per as f64).min(0.9);
    let p_out = 0.6 / n as f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if i / per == j / per { p_in } else { p_out };
            if rng.random_range(0.0..1.0) < p {
                edges.push((i, j, 1.0));
            }
        }
    }
    // keep each block internally connected so every node participates
    for b in 0..blocks {
        for k in 1..per {
            edges.push((b * per + k - 1, b * per + k, 1.0));
        }
    }
    for b in 1..blocks {
        edges.push((b * per - 1, b * per, 1.0));
    }
    (RelationGraph::from_edges(n, &edges).unwrap(), positions)
}

fn geometric_graph(n: usize, seed: u64) -> (RelationGraph, Vec<(f64, f64)>) {
    let n = n.max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let positions: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(0.03..0.97), rng.random_range(0.03..0.97)))
        .collect();
    // radius chosen for an average degree around six
    let radius = (6.0 / (std::f64::consts::PI * n as f64)).sqrt();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            if (dx * dx + dy * dy).sqrt() <= radius {
                edges.push((i, j, 1.0));
            }
        }
    }
    // attach stragglers to their nearest neighbor
    let g0 = RelationGraph::from_edges(n, &edges).unwrap();
    for i in 0..n {
        if g0.degree(i) == 0 {
            let nearest = (0..n)
                .filter(|&j| j != i)
                .min_by(|&a, &b| {
                    let da = (positions[i].0 - positions[a].0).hypot(positions[i].1 - positions[a].1);
                    let db = (positions[i].0 - positions[b].0).hypot(positions[i].1 - positions[b].1);
                    da.partial_cmp(&db).unwrap()
                })
                .unwrap();
            edges.push((i, nearest, 1.0));
        }
    }
    (RelationGraph::from_edges(n, &edges).unwrap(), positions)
}

fn build(preset: &str, n: usize, seed: u64) -> relfeat::Result<(RelationGraph, Vec<(f64, f64)>)> {
    match preset {
        "bridge" => Ok(bridge_graph()),
        "blocks" => Ok(block_graph(n, seed)),
        "geometric" => Ok(geometric_graph(n, seed)),
        other => Err(relfeat::Error::input(format!("unknown preset {other:?}"))),
    }
}

#[wasm_bindgen]
impl Playground {
    /// Presets: "bridge" (two triangles joined by one edge), "blocks"
    /// (four planted communities) and "geometric" (random geometric
    /// graph). `n` is ignored by the bridge preset.
    #[wasm_bindgen(constructor)]
    pub fn new(preset: &str, n: u32, seed: u32) -> Result<Playground, JsError> {
        let (graph, positions) = build(preset, n as usize, seed as u64).map_err(to_js_error)?;
        Ok(Playground { graph, positions })
    }

    pub fn node_count(&self) -> u32 {
        self.graph.node_count() as u32
    }

    pub fn edge_count(&self) -> u32 {
        self.graph.edge_count() as u32
    }

    /// Interleaved x, y in [0, 1].
    pub fn positions(&self) -> Vec<f64> {
        self.positions.iter().flat_map(|&(x, y)| [x, y]).collect()
    }

    /// Edge endpoints as flat (i, j) pairs.
    pub fn edges(&self) -> Vec<u32> {
        self.graph
            .edges()
            .into_iter()
            .flat_map(|(i, j, _)| [i as u32, j as u32])
            .collect()
    }

    /// Exact hop distance from `source` per node: 0 for the source itself,
    /// -1 beyond `d_max` or unreachable.
    pub fn shell_depths(&self, source: u32, d_max: u32) -> Result<Vec<i32>, JsError> {
        let n = self.graph.node_count();
        if source as usize >= n {
            return Err(JsError::new("source out of range"));
        }
        let shells =
            compute_shells(&self.graph, (d_max as usize).max(1)).map_err(to_js_error)?;
        let mut depth = vec![-1i32; n];
        depth[source as usize] = 0;
        for d in 1..=(d_max as usize).max(1) {
            for &j in shells.shell(source as usize, d) {
                depth[j as usize] = d as i32;
            }
        }
        Ok(depth)
    }

    /// Steady-state visit distribution of a walk restarting at `source`.
    /// `walk_weight` in (0, 1) is the r swept in the experiments: the walk
    /// follows edges with weight r and restarts with weight 1 - r.
    pub fn rwr_heat(&self, source: u32, walk_weight: f64) -> Result<Vec<f64>, JsError> {
        let n = self.graph.node_count();
        if source as usize >= n {
            return Err(JsError::new("source out of range"));
        }
        if !(walk_weight > 0.0 && walk_weight < 1.0) {
            return Err(JsError::new("walk weight must lie in (0, 1)"));
        }
        let w = transition_matrix(&self.graph);
        let restart = 1.0 - walk_weight;
        let p = rwr_steady_state(&w, restart, 1e-10, 100_000).map_err(to_js_error)?;
        Ok(p.column(source as usize).to_vec())
    }

    /// Cluster id per node for a c-way partition.
    pub fn cluster_labels(&self, c: u32, seed: u32) -> Result<Vec<u32>, JsError> {
        let p = cluster::partition(&self.graph, c as usize, seed as u64).map_err(to_js_error)?;
        Ok(p.assignment().to_vec())
    }

    /// Total weight of edges crossing the same partition.
    pub fn cluster_edge_cut(&self, c: u32, seed: u32) -> Result<f64, JsError> {
        let p = cluster::partition(&self.graph, c as usize, seed as u64).map_err(to_js_error)?;
        Ok(p.edge_cut())
    }

    /// Max cluster size over the ideal ⌈n/c⌉ for the same partition.
    pub fn cluster_balance(&self, c: u32, seed: u32) -> Result<f64, JsError> {
        let p = cluster::partition(&self.graph, c as usize, seed as u64).map_err(to_js_error)?;
        Ok(p.balance())
    }
}

fn to_js_error(err: relfeat::Error) -> JsError {
    JsError::new(&err.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bridge_preset_shape() {
        let pg = Playground::new("bridge", 0, 0).unwrap();
        assert_eq!(pg.node_count(), 6);
        assert_eq!(pg.edge_count(), 7);
        assert_eq!(pg.positions().len(), 12);
        assert_eq!(pg.edges().len(), 14);
    }

    #[test]
    fn shells_from_bridge_corner() {
        let pg = Playground::new("bridge", 0, 0).unwrap();
        let depth = pg.shell_depths(0, 3).unwrap();
        assert_eq!(depth[0], 0);
        assert_eq!(depth[1], 1);
        assert_eq!(depth[2], 1);
        assert_eq!(depth[3], 2);
        assert_eq!(depth[4], 3);
        assert_eq!(depth[5], 3);
    }

    #[test]
    fn rwr_heat_sums_to_one() {
        let pg = Playground::new("blocks", 40, 7).unwrap();
        let heat = pg.rwr_heat(0, 0.9).unwrap();
        let sum: f64 = heat.iter().sum();
        assert!((sum - 1.0).abs() < 1e-8);
        assert!(heat[0] > 0.0);
    }

    #[test]
    fn clusters_split_the_bridge() {
        let pg = Playground::new("bridge", 0, 0).unwrap();
        let labels = pg.cluster_labels(2, 1).unwrap();
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[0], labels[2]);
        assert_ne!(labels[0], labels[3]);
        assert_eq!(pg.cluster_edge_cut(2, 1).unwrap(), 1.0);
    }

    #[test]
    fn geometric_preset_has_no_isolated_nodes() {
        let pg = Playground::new("geometric", 60, 3).unwrap();
        let edges = pg.edges();
        let mut degree = vec![0usize; pg.node_count() as usize];
        for pair in edges.chunks(2) {
            degree[pair[0] as usize] += 1;
            degree[pair[1] as usize] += 1;
        }
        assert!(degree.iter().all(|&d| d > 0));
    }

    #[test]
    fn unknown_preset_rejected() {
        assert!(build("mystery", 10, 0).is_err());
    }
}
