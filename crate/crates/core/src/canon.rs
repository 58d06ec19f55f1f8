//! Canonical labeling by colour refinement and individualization.
//!
//! The search tree individualizes one vertex of the first smallest
//! non-singleton cell at each level, refines to an equitable partition, and
//! keeps the lexicographically smallest adjacency code among the leaves.
//! Leaves with equal codes yield automorphisms; those fixing the current
//! prefix pointwise prune siblings in the same orbit.

use std::cmp::Ordering;
use std::fmt::Write;

use crate::cliques::{bit, Bits, Row};
use crate::complex::CompatibilityGraph;

/// Label-independent text encoding of `g` (dimension, size and adjacency).
pub fn canonical_form(g: &CompatibilityGraph) -> String {
    canonical_form_colored(g, &vec![0; g.len()])
}

/// Canonical form of a vertex-coloured graph; isomorphisms must preserve `colors`.
pub fn canonical_form_colored(g: &CompatibilityGraph, colors: &[u32]) -> String {
    let (order, _) = canonical_labeling(g, colors);
    encode(g, colors, &order)
}

/// Vertex order realizing the canonical form (`order[k]` is the vertex placed
/// at position `k`) and the number of leaves visited.
pub fn canonical_labeling(g: &CompatibilityGraph, colors: &[u32]) -> (Vec<usize>, u64) {
    assert_eq!(colors.len(), g.len(), "one colour per facet");
    let n = g.len();
    if n == 0 {
        return (Vec::new(), 1);
    }
    let mut distinct: Vec<u32> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let cells: Vec<u32> = colors
        .iter()
        .map(|c| distinct.binary_search(c).expect("colour present") as u32)
        .collect();

    let mut search = Search {
        adj: g.rows(),
        best: None,
        automorphisms: Vec::new(),
        leaves: 0,
    };
    let mut prefix = Vec::new();
    search.descend(cells, &mut prefix);
    let (_, order) = search.best.expect("at least one leaf");
    (order, search.leaves)
}

fn encode(g: &CompatibilityGraph, colors: &[u32], order: &[usize]) -> String {
    let mut position = vec![0usize; order.len()];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let mut out = format!("d{}n{}", g.dimension(), g.len());
    if colors.iter().any(|&c| c != 0) {
        out.push('c');
        for (k, &v) in order.iter().enumerate() {
            if k > 0 {
                out.push('.');
            }
            write!(out, "{}", colors[v]).unwrap();
        }
    }
    out.push(':');
    for &v in order {
        let row = Bits(g.rows()[v]).fold(0u128, |acc, w| acc | bit(position[w]));
        write!(out, "{row:x};").unwrap();
    }
    out
}

struct Search<'a> {
    adj: &'a [Row],
    best: Option<(Vec<Row>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
    leaves: u64,
}

impl Search<'_> {
    fn descend(&mut self, mut cells: Vec<u32>, prefix: &mut Vec<usize>) {
        refine(self.adj, &mut cells);
        let n = cells.len();
        let cell_count = cells.iter().max().map_or(0, |&m| m as usize + 1);
        if cell_count == n {
            self.leaf(&cells);
            return;
        }
        let mut sizes = vec![0usize; cell_count];
        for &c in &cells {
            sizes[c as usize] += 1;
        }
        let target = (0..cell_count)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .expect("partition is not discrete") as u32;

        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if !explored.is_empty() && self.same_orbit_as_explored(prefix, &explored, v) {
                continue;
            }
            let child: Vec<u32> = cells
                .iter()
                .enumerate()
                .map(|(w, &c)| match c.cmp(&target) {
                    Ordering::Less => c,
                    Ordering::Equal if w == v => c,
                    _ => c + 1,
                })
                .collect();
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    fn leaf(&mut self, cells: &[u32]) {
        self.leaves += 1;
        let mut order = vec![0usize; cells.len()];
        for (v, &c) in cells.iter().enumerate() {
            order[c as usize] = v;
        }
        let code: Vec<Row> = order
            .iter()
            .map(|&v| Bits(self.adj[v]).fold(0u128, |acc, w| acc | bit(cells[w] as usize)))
            .collect();
        match &self.best {
            None => self.best = Some((code, order)),
            Some((best_code, best_order)) => match code.cmp(best_code) {
                Ordering::Less => self.best = Some((code, order)),
                Ordering::Equal => {
                    let mut perm = vec![0usize; order.len()];
                    for (k, &v) in best_order.iter().enumerate() {
                        perm[v] = order[k];
                    }
                    if perm.iter().enumerate().any(|(i, &p)| i != p) {
                        self.automorphisms.push(perm);
                    }
                }
                Ordering::Greater => {}
            },
        }
    }

    /// Whether `v` shares an orbit with an explored sibling under the
    /// automorphisms found so far that fix `prefix` pointwise.
    fn same_orbit_as_explored(&self, prefix: &[usize], explored: &[usize], v: usize) -> bool {
        let n = self.adj.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for perm in &self.automorphisms {
            if prefix.iter().any(|&p| perm[p] != p) {
                continue;
            }
            any = true;
            for (x, &y) in perm.iter().enumerate() {
                let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == root)
    }
}

/// Refines `cells` (vertex → cell index, dense, ordered) to the coarsest
/// equitable partition below it. New cells are ordered by (old cell,
/// neighbour counts per cell), which depends on the graph only.
pub(crate) fn refine(adj: &[Row], cells: &mut [u32]) {
    let n = cells.len();
    let mut count = cells.iter().max().map_or(0, |&m| m as usize + 1);
    loop {
        let mut masks = vec![0u128; count];
        for (v, &c) in cells.iter().enumerate() {
            masks[c as usize] |= bit(v);
        }
        let mut signatures: Vec<(Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut sig = Vec::with_capacity(count + 1);
                sig.push(cells[v]);
                sig.extend(masks.iter().map(|m| (adj[v] & m).count_ones()));
                (sig, v)
            })
            .collect();
        signatures.sort_unstable();
        let mut next = 0u32;
        for k in 0..n {
            if k > 0 && signatures[k].0 != signatures[k - 1].0 {
                next += 1;
            }
            cells[signatures[k].1] = next;
        }
        let new_count = next as usize + 1;
        if new_count == count {
            return;
        }
        count = new_count;
    }
}
