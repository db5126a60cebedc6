//! Small named graphs used throughout tests and examples.

use super::Graph;

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
}

/// Disjoint union; vertices of `b` are shifted by `a.n()`. Labels are kept
/// only when both sides carry them.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.n();
    let g = Graph::new(
        a.n() + b.n(),
        a.edges()
            .iter()
            .copied()
            .chain(b.edges().iter().map(|&(u, v)| (u + shift, v + shift))),
    )
    .expect("union of simple graphs");
    match (a.labels(), b.labels()) {
        (Some(x), Some(y)) => g
            .with_labels(x.iter().chain(y).copied().collect())
            .expect("label count matches"),
        _ => g,
    }
}

/// Graph from LCF notation: a Hamiltonian cycle plus chords `i -- i + shifts[i]`.
pub fn lcf(n: usize, shifts: &[i64], repeats: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    let total = shifts.len() * repeats;
    for i in 0..total {
        let s = shifts[i % shifts.len()];
        let j = (i as i64 + s).rem_euclid(n as i64) as usize;
        edges.push((i % n, j));
    }
    Graph::new(n, edges).expect("valid LCF graph")
}

/// The Frucht graph: 12 vertices, cubic, trivial automorphism group.
pub fn frucht() -> Graph {
    lcf(12, &[-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2], 1)
}
