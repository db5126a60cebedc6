//! Simple undirected graphs, their Laplacians, and labeled-graph metrics.

mod generate;
mod io;
pub mod named;

pub use generate::{erdos_renyi, generate_class_graph, random_connected, GeneratedGraph};
pub use io::{load_edge_list, GraphJson, LoadedGraph};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n` with optional class labels.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. Adjacency lists
/// are kept sorted so membership tests are a binary search.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops and out-of-range endpoints.
    /// Duplicate edges (in either orientation) are collapsed.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::Domain(format!("self-loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        list.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Self {
            n,
            edges: list,
            adj,
            labels: None,
        })
    }

    /// Attaches one label per vertex.
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Domain(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn adjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Component id per vertex, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Copy of the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Domain("permutation length differs from n".into()));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Domain("not a permutation".into()));
            }
        }
        let g = Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))?;
        match &self.labels {
            Some(l) => {
                let mut moved = vec![0; self.n];
                for v in 0..self.n {
                    moved[perm[v]] = l[v];
                }
                g.with_labels(moved)
            }
            None => Ok(g),
        }
    }

    /// Cartesian product `G □ G`; vertex `(u, v)` is indexed `u * n + v`.
    pub fn cartesian_product(&self) -> Graph {
        let n = self.n;
        let mut edges = Vec::with_capacity(2 * n * self.edges.len());
        for &(a, b) in &self.edges {
            for w in 0..n {
                // (w, a) ~ (w, b): first coordinate fixed
                edges.push((w * n + a, w * n + b));
                // (a, w) ~ (b, w): second coordinate fixed
                edges.push((a * n + w, b * n + w));
            }
        }
        Graph::new(n * n, edges).expect("product of a simple graph is simple")
    }

    /// Class partition induced by the labels (classes ordered by label value).
    pub fn partition(&self) -> Result<Partition> {
        let labels = self
            .labels
            .as_ref()
            .ok_or_else(|| Error::Domain("graph has no labels".into()))?;
        let mut distinct: Vec<usize> = labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let class_of = labels
            .iter()
            .map(|l| distinct.binary_search(l).expect("label present"))
            .collect();
        Partition::new(class_of)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Which Laplacian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianKind {
    /// `D - A`
    Combinatorial,
    /// `I - D^{-1/2} A D^{-1/2}`, with `D^{-1/2}` zero on isolated vertices.
    SymmetricNormalized,
}

impl std::str::FromStr for LaplacianKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "comb" | "combinatorial" => Ok(Self::Combinatorial),
            "norm" | "normalized" | "symmetric-normalized" => Ok(Self::SymmetricNormalized),
            other => Err(Error::Domain(format!("unknown laplacian kind `{other}`"))),
        }
    }
}

pub fn laplacian(g: &Graph, kind: LaplacianKind) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    match kind {
        LaplacianKind::Combinatorial => {
            for v in 0..n {
                l[(v, v)] = g.degree(v) as f64;
            }
            for &(u, v) in g.edges() {
                l[(u, v)] = -1.0;
                l[(v, u)] = -1.0;
            }
        }
        LaplacianKind::SymmetricNormalized => {
            let inv_sqrt: Vec<f64> = (0..n)
                .map(|v| match g.degree(v) {
                    0 => 0.0,
                    d => 1.0 / (d as f64).sqrt(),
                })
                .collect();
            for v in 0..n {
                l[(v, v)] = 1.0;
            }
            for &(u, v) in g.edges() {
                let w = -inv_sqrt[u] * inv_sqrt[v];
                l[(u, v)] = w;
                l[(v, u)] = w;
            }
        }
    }
    l
}

/// Fraction of edges whose endpoints carry different labels.
pub fn edge_homophily(g: &Graph) -> Result<f64> {
    let labels = g
        .labels()
        .ok_or_else(|| Error::Domain("edge homophily needs node labels".into()))?;
    if g.edge_count() == 0 {
        return Err(Error::Domain("edge homophily of an edgeless graph".into()));
    }
    let cross = g
        .edges()
        .iter()
        .filter(|&&(u, v)| labels[u] != labels[v])
        .count();
    Ok(cross as f64 / g.edge_count() as f64)
}

/// Assignment of vertices to `k` non-empty classes `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    class_of: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    pub fn new(class_of: Vec<usize>) -> Result<Self> {
        let k = class_of.iter().max().map_or(0, |&c| c + 1);
        let mut sizes = vec![0; k];
        for &c in &class_of {
            sizes[c] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::Domain(format!("class {empty} is empty")));
        }
        Ok(Self { class_of, sizes })
    }

    /// Classes laid out contiguously: the first `sizes[0]` vertices form class 0, etc.
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let class_of = sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
            .collect();
        Self::new(class_of)
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class_of
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Members of each class in increasing vertex order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (v, &c) in self.class_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}
