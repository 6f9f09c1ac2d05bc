//! Qubit routing on the coupling graph.

use crate::error::{Error, Result};
use crate::spin_model::CouplingGraph;

/// Shortest-path SWAP chain bringing the qubit at `k` adjacent to `i`.
///
/// Returns the forward chain of adjacent pairs, in application order; an
/// empty chain means `i` and `k` are already coupled. The caller applies the
/// chain, runs the gate on `i` and the last chain endpoint (or `k` itself
/// when the chain is empty), then applies the chain in reverse to restore
/// positions, for 2(d-1) SWAPs total at path length d.
pub fn route_swaps(graph: &CouplingGraph, i: usize, k: usize) -> Result<Vec<(usize, usize)>> {
    let n = graph.n_vertices();
    if i >= n || k >= n || i == k {
        return Err(Error::Compile(format!("bad routing pair ({i},{k})")));
    }
    if graph.has_edge(i, k) {
        return Ok(Vec::new());
    }
    // Breadth-first search from i; parent links reconstruct the path.
    let mut parent = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([i]);
    parent[i] = i;
    while let Some(v) = queue.pop_front() {
        if v == k {
            break;
        }
        for &w in graph.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    if parent[k] == usize::MAX {
        return Err(Error::Compile(format!(
            "spins {i} and {k} are not connected in the coupling graph"
        )));
    }
    let mut path = vec![k];
    while *path.last().unwrap() != i {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse(); // i, v1, ..., k
    // Walk k's qubit up the path until it sits next to i (at v1).
    let chain: Vec<(usize, usize)> = (1..path.len() - 1)
        .rev()
        .map(|a| (path[a], path[a + 1]))
        .collect();
    Ok(chain)
}
