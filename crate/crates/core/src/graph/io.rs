use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// JSON form of a graph: `{n, edges: [[u,v],...], labels: [...]|null}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: Option<Vec<usize>>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let g = Graph::new(j.n, j.edges.into_iter().map(|[u, v]| (u, v)))?;
        match j.labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }
}

/// A parsed edge list together with the id compaction that was applied.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `remap[i]` is the file id of dense vertex `i`; `None` when the file ids
    /// were already contiguous from 0.
    pub remap: Option<Vec<u64>>,
}

/// Parses the edge-list text format: `u v` or `u v label` per line, `#`
/// starts a comment. Ids are compacted to `0..n` if the file leaves gaps.
pub fn load_edge_list(text: &str) -> Result<LoadedGraph> {
    let mut raw_edges = Vec::new();
    let mut labels: BTreeMap<u64, (usize, usize)> = BTreeMap::new();
    let mut ids = std::collections::BTreeSet::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected `u v [label]`, found {} fields", fields.len()),
            });
        }
        let parse_id = |s: &str| -> Result<u64> {
            let v: i64 = s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("`{s}` is not an integer"),
            })?;
            if v < 0 {
                return Err(Error::Domain(format!("line {lineno}: negative vertex id {v}")));
            }
            Ok(v as u64)
        };
        let u = parse_id(fields[0])?;
        let v = parse_id(fields[1])?;
        if u == v {
            return Err(Error::Domain(format!("line {lineno}: self-loop at {u}")));
        }
        if let Some(l) = fields.get(2) {
            let label: usize = l.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("label `{l}` is not a non-negative integer"),
            })?;
            // the label column attaches to the first endpoint
            if let Some(&(prev, first_line)) = labels.get(&u) {
                if prev != label {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!(
                            "vertex {u} relabeled {label}, was {prev} on line {first_line}"
                        ),
                    });
                }
            } else {
                labels.insert(u, (label, lineno));
            }
        }
        ids.insert(u);
        ids.insert(v);
        raw_edges.push((u, v));
    }

    let max = ids.iter().next_back().copied();
    let contiguous = max.is_none_or(|m| m + 1 == ids.len() as u64);
    let order: Vec<u64> = ids.into_iter().collect();
    let index = |id: u64| -> usize {
        if contiguous {
            id as usize
        } else {
            order.binary_search(&id).expect("id collected")
        }
    };
    let n = order.len();
    let graph = Graph::new(n, raw_edges.iter().map(|&(u, v)| (index(u), index(v))))?;
    let graph = if labels.is_empty() {
        graph
    } else {
        let mut dense = vec![None; n];
        for (&id, &(l, _)) in &labels {
            dense[index(id)] = Some(l);
        }
        let missing: Vec<u64> = order
            .iter()
            .zip(&dense)
            .filter(|(_, l)| l.is_none())
            .map(|(&id, _)| id)
            .collect();
        if !missing.is_empty() {
            return Err(Error::Domain(format!(
                "labels given for some vertices but not for {missing:?}"
            )));
        }
        graph.with_labels(dense.into_iter().map(Option::unwrap).collect())?
    };
    Ok(LoadedGraph {
        graph,
        remap: (!contiguous).then_some(order),
    })
}
