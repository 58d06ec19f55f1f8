//! Direct isomorphism search, kept independent of the canonical labeling so
//! the two can check each other.

use crate::cliques::{bit, Bits, Row};
use crate::complex::CompatibilityGraph;

/// A facet bijection `map[i] = j` (facet `i` of `g1` to facet `j` of `g2`)
/// preserving adjacency, if one exists. Labels are ignored; dimensions must agree.
pub fn is_isomorphic(g1: &CompatibilityGraph, g2: &CompatibilityGraph) -> Option<Vec<usize>> {
    if g1.dimension() != g2.dimension() || g1.len() != g2.len() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let n = g1.len();
    let inv1 = invariants(g1.rows());
    let inv2 = invariants(g2.rows());
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }

    // match g1 vertices in BFS order so each new vertex has mapped neighbours
    let order = bfs_order(g1.rows());
    let mut map = vec![usize::MAX; n];
    let mut used: Row = 0;
    if extend(g1.rows(), g2.rows(), &inv1, &inv2, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

/// Per-vertex (degree, triangles through the vertex).
fn invariants(adj: &[Row]) -> Vec<(u32, u32)> {
    (0..adj.len())
        .map(|v| {
            let mut tri = 0;
            let mut rest = adj[v];
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                tri += (adj[w] & adj[v]).count_ones();
            }
            (adj[v].count_ones(), tri / 2)
        })
        .collect()
}

fn bfs_order(adj: &[Row]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in Bits(adj[v]) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a1: &[Row],
    a2: &[Row],
    inv1: &[(u32, u32)],
    inv2: &[(u32, u32)],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut Row,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    'candidates: for w in 0..a2.len() {
        if *used & bit(w) != 0 || inv1[v] != inv2[w] {
            continue;
        }
        for &u in &order[..depth] {
            let e1 = a1[v] & bit(u) != 0;
            let e2 = a2[w] & bit(map[u]) != 0;
            if e1 != e2 {
                continue 'candidates;
            }
        }
        map[v] = w;
        *used |= bit(w);
        if extend(a1, a2, inv1, inv2, order, depth + 1, map, used) {
            return true;
        }
        *used &= !bit(w);
        map[v] = usize::MAX;
    }
    false
}
