//! Color refinement: 1-WL on nodes and Local 2-GNN on ordered node pairs.
//!
//! The hash of each round is an injective relabeling: signatures are
//! numbered in order of first appearance, so ids are canonical and
//! reproducible. Several graphs can be refined against one shared
//! dictionary, which makes their colors directly comparable.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// `(1_{u=v}, 1_{uv in E})`.
pub fn atp(g: &Graph, u: usize, v: usize) -> (bool, bool) {
    (u == v, u != v && g.has_edge(u, v))
}

/// Quantizes real-valued node labels to 12 decimals and numbers the
/// distinct label vectors by first appearance.
pub fn quantize_labels(labels: &[Vec<f64>]) -> Vec<usize> {
    let key = |row: &Vec<f64>| -> Vec<i128> {
        row.iter().map(|x| (x * 1e12).round() as i128).collect()
    };
    canonical(labels.iter().map(key))
}

/// Numbers items by first appearance.
fn canonical<K: Eq + Hash>(items: impl IntoIterator<Item = K>) -> Vec<usize> {
    let mut dict = HashMap::new();
    items
        .into_iter()
        .map(|k| {
            let next = dict.len();
            *dict.entry(k).or_insert(next)
        })
        .collect()
}

fn class_count(colors: &[usize]) -> usize {
    let mut seen = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// Per-round colors of one refinement run.
#[derive(Debug, Clone, PartialEq)]
pub struct Refinement {
    history: Vec<Vec<usize>>,
    stable_round: Option<usize>,
}

impl Refinement {
    /// Colors after `round` rounds. Past the last computed round the final
    /// coloring is returned, which induces the same partition.
    pub fn colors_at(&self, round: usize) -> &[usize] {
        &self.history[round.min(self.history.len() - 1)]
    }

    pub fn final_colors(&self) -> &[usize] {
        self.history.last().expect("round 0 is always present")
    }

    pub fn history(&self) -> &[Vec<usize>] {
        &self.history
    }

    pub fn rounds_run(&self) -> usize {
        self.history.len() - 1
    }

    /// First round whose partition is no longer refined, if observed.
    pub fn stable_round(&self) -> Option<usize> {
        self.stable_round
    }

    pub fn class_count(&self) -> usize {
        class_count(self.final_colors())
    }

    pub fn export(&self) -> ColoringJson {
        ColoringJson::new(self.rounds_run(), self.final_colors().to_vec())
    }
}

/// `{round, colors, histogram}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub round: usize,
    pub colors: Vec<usize>,
    pub histogram: BTreeMap<usize, usize>,
}

impl ColoringJson {
    pub fn new(round: usize, colors: Vec<usize>) -> Self {
        let histogram = histogram(&colors);
        Self {
            round,
            colors,
            histogram,
        }
    }
}

pub fn histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// Generic joint refinement loop. `step` maps the previous colors of every
/// graph to one signature per element; signatures are then numbered jointly.
fn refine<S, F>(init: Vec<Vec<usize>>, max_rounds: usize, mut step: F) -> Vec<Refinement>
where
    S: Eq + Hash,
    F: FnMut(usize, &[usize]) -> Vec<S>,
{
    let sizes: Vec<usize> = init.iter().map(Vec::len).collect();
    let split = |flat: Vec<usize>| -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(sizes.len());
        let mut rest = flat.as_slice();
        for &s in &sizes {
            let (head, tail) = rest.split_at(s);
            out.push(head.to_vec());
            rest = tail;
        }
        out
    };
    let mut rounds: Vec<Vec<Vec<usize>>> = vec![split(canonical(init.into_iter().flatten()))];
    let mut stable = None;
    for _ in 0..max_rounds {
        let prev = rounds.last().expect("non-empty");
        let sigs: Vec<S> = prev
            .iter()
            .enumerate()
            .flat_map(|(gi, colors)| step(gi, colors))
            .collect();
        let next = split(canonical(sigs));
        let before = class_count(&prev.concat());
        let after = class_count(&next.concat());
        rounds.push(next);
        if after == before {
            stable = Some(rounds.len() - 2);
            break;
        }
    }
    (0..sizes.len())
        .map(|gi| Refinement {
            history: rounds.iter().map(|r| r[gi].clone()).collect(),
            stable_round: stable,
        })
        .collect()
}

fn initial_node_colors(g: &Graph, init: Option<&[usize]>) -> Vec<usize> {
    match init {
        Some(l) => {
            assert_eq!(l.len(), g.n(), "one initial label per node");
            l.to_vec()
        }
        None => vec![0; g.n()],
    }
}

/// 1-WL color refinement. `None` starts from a uniform coloring.
pub fn wl1_refine(g: &Graph, init: Option<&[usize]>, max_rounds: usize) -> Refinement {
    wl1_refine_joint(&[(g, init)], max_rounds).pop().expect("one graph")
}

/// 1-WL on several graphs with one shared color dictionary.
pub fn wl1_refine_joint(graphs: &[(&Graph, Option<&[usize]>)], max_rounds: usize) -> Vec<Refinement> {
    let init = graphs
        .iter()
        .map(|(g, l)| initial_node_colors(g, *l))
        .collect();
    refine(init, max_rounds, |gi, colors| {
        let g = graphs[gi].0;
        (0..g.n())
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect()
    })
}

/// Local 2-GNN refinement on ordered pairs. Pair `(u, v)` sits at index
/// `u * n + v`.
pub fn local2_refine(g: &Graph, init: Option<&[usize]>, max_rounds: usize) -> Refinement {
    local2_refine_joint(&[(g, init)], max_rounds).pop().expect("one graph")
}

pub fn local2_refine_joint(
    graphs: &[(&Graph, Option<&[usize]>)],
    max_rounds: usize,
) -> Vec<Refinement> {
    // the initial tuple is numbered jointly before the first round
    let init: Vec<Vec<(usize, usize, bool, bool)>> = graphs
        .iter()
        .map(|(g, l)| {
            let node = initial_node_colors(g, *l);
            let n = g.n();
            (0..n * n)
                .map(|p| {
                    let (u, v) = (p / n, p % n);
                    let (eq, edge) = atp(g, u, v);
                    (node[u], node[v], eq, edge)
                })
                .collect()
        })
        .collect();
    let flat = canonical(init.iter().flatten().copied());
    let mut offset = 0;
    let init_ids: Vec<Vec<usize>> = init
        .iter()
        .map(|v| {
            let ids = flat[offset..offset + v.len()].to_vec();
            offset += v.len();
            ids
        })
        .collect();
    refine(init_ids, max_rounds, |gi, colors| {
        let g = graphs[gi].0;
        let n = g.n();
        (0..n * n)
            .map(|p| {
                let (u, v) = (p / n, p % n);
                let mut from_u: Vec<usize> = g.neighbors(u).iter().map(|&w| colors[w * n + v]).collect();
                let mut from_v: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[u * n + w]).collect();
                from_u.sort_unstable();
                from_v.sort_unstable();
                (colors[p], from_u, from_v)
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefinementMode {
    Wl1,
    Local2,
}

/// True iff the stable color histograms of the two graphs differ under a
/// shared dictionary. Graph labels are used as initial colors when both
/// graphs carry them.
pub fn distinguishable(g1: &Graph, g2: &Graph, mode: RefinementMode) -> bool {
    if g1.n() != g2.n() {
        return true;
    }
    let (l1, l2) = match (g1.labels(), g2.labels()) {
        (Some(a), Some(b)) => (Some(a), Some(b)),
        _ => (None, None),
    };
    let graphs = [(g1, l1), (g2, l2)];
    let n = g1.n();
    let runs = match mode {
        RefinementMode::Wl1 => wl1_refine_joint(&graphs, n + 1),
        RefinementMode::Local2 => local2_refine_joint(&graphs, n * n + 1),
    };
    histogram(runs[0].final_colors()) != histogram(runs[1].final_colors())
}

/// True iff every class of `fine` lies inside one class of `coarse`.
pub fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    let mut map = HashMap::new();
    fine.iter()
        .zip(coarse)
        .all(|(f, c)| *map.entry(*f).or_insert(*c) == *c)
}
