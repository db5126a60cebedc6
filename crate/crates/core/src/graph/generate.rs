use rand::Rng as _;
use serde::Serialize;

use super::{edge_homophily, Graph, Partition};
use crate::error::{Error, Result};
use crate::rng;

/// Erdős–Rényi `G(n, p)`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut r = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("sampled edges are simple")
}

/// `G(n, p)` conditioned on connectivity (rejection sampling over derived seeds).
pub fn random_connected(n: usize, p: f64, seed: u64) -> Graph {
    (0..)
        .map(|attempt| erdos_renyi(n, p, rng::derive(seed, attempt)))
        .find(Graph::is_connected)
        .expect("infinite iterator")
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratedGraph {
    #[serde(skip)]
    pub graph: Graph,
    pub p_intra: f64,
    pub p_inter: f64,
    pub target_h: f64,
    /// Realized fraction of cross-class edges; `None` if no edge was sampled.
    pub realized_h: Option<f64>,
}

/// Two-parameter block model whose expected edge homophily is `target_h`
/// and whose expected average degree is `avg_degree`.
///
/// Vertex `v` gets label `partition.class_of(v) + 1`.
pub fn generate_class_graph(
    partition: &Partition,
    target_h: f64,
    avg_degree: f64,
    seed: u64,
) -> Result<GeneratedGraph> {
    if !(0.0..=1.0).contains(&target_h) {
        return Err(Error::Domain(format!("target_h {target_h} outside [0, 1]")));
    }
    if !(avg_degree.is_finite() && avg_degree > 0.0) {
        return Err(Error::Domain(format!("avg_degree {avg_degree} must be positive")));
    }
    let n = partition.n();
    let total_pairs = (n * n.saturating_sub(1) / 2) as f64;
    let intra_pairs: f64 = partition
        .sizes()
        .iter()
        .map(|&s| (s * s.saturating_sub(1) / 2) as f64)
        .sum();
    let inter_pairs = total_pairs - intra_pairs;
    if partition.k() == 1 && target_h != 0.0 {
        return Err(Error::Domain(
            "a single-class graph has no cross-class pairs; target_h must be 0".into(),
        ));
    }
    let expected_edges = avg_degree * n as f64 / 2.0;
    let solve = |share: f64, pairs: f64, what: &str| -> Result<f64> {
        if share == 0.0 {
            return Ok(0.0);
        }
        let p = share * expected_edges / pairs;
        if pairs == 0.0 || p > 1.0 {
            return Err(Error::Domain(format!(
                "infeasible: needs {:.1} {what} edges but only {pairs} {what} pairs exist",
                share * expected_edges
            )));
        }
        Ok(p)
    };
    let p_intra = solve(1.0 - target_h, intra_pairs, "intra-class")?;
    let p_inter = solve(target_h, inter_pairs, "inter-class")?;

    let mut r = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if partition.class_of(u) == partition.class_of(v) {
                p_intra
            } else {
                p_inter
            };
            if p > 0.0 && r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::new(n, edges)?
        .with_labels(partition.classes().iter().map(|c| c + 1).collect())?;
    let realized_h = edge_homophily(&graph).ok();
    Ok(GeneratedGraph {
        graph,
        p_intra,
        p_inter,
        target_h,
        realized_h,
    })
}
