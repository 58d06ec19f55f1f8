//! Clique kernels over bitset adjacency rows.
//!
//! Rows are `u128`, one per vertex; bit `j` of `adj[i]` is set iff `i ~ j`.

use std::ops::ControlFlow;

use crate::error::{Error, Result};

pub type Row = u128;

#[inline]
pub(crate) fn bit(i: usize) -> Row {
    1u128 << i
}

/// Mask of the first `n` vertices.
#[inline]
pub(crate) fn full_mask(n: usize) -> Row {
    if n >= 128 {
        Row::MAX
    } else {
        bit(n) - 1
    }
}

/// Iterator over set bits, lowest first.
pub(crate) struct Bits(pub Row);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// `counts[k]` is the number of cliques with `k` vertices, the empty clique included.
pub fn clique_counts(adj: &[Row]) -> Result<Vec<u64>> {
    fn walk(adj: &[Row], cand: Row, size: usize, counts: &mut Vec<u64>) -> Result<()> {
        if counts.len() <= size {
            counts.resize(size + 1, 0);
        }
        counts[size] = counts[size].checked_add(1).ok_or(Error::Overflow)?;
        for v in Bits(cand) {
            // only extend by vertices above v so each clique is visited once
            let higher = !full_mask(v + 1);
            walk(adj, cand & adj[v] & higher, size + 1, counts)?;
        }
        Ok(())
    }

    let mut counts = Vec::new();
    walk(adj, full_mask(adj.len()), 0, &mut counts)?;
    Ok(counts)
}

/// Bron–Kerbosch with Tomita pivoting. The visitor sees each maximal clique once
/// and may stop the enumeration early.
pub fn for_each_maximal_clique<F>(adj: &[Row], mut visit: F) -> ControlFlow<()>
where
    F: FnMut(Row) -> ControlFlow<()>,
{
    fn expand<F>(adj: &[Row], r: Row, mut p: Row, mut x: Row, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Row) -> ControlFlow<()>,
    {
        if p == 0 && x == 0 {
            return visit(r);
        }
        let pivot = Bits(p | x)
            .max_by_key(|&u| ((p & adj[u]).count_ones(), std::cmp::Reverse(u)))
            .expect("p | x is non-empty");
        for v in Bits(p & !adj[pivot]) {
            expand(adj, r | bit(v), p & adj[v], x & adj[v], visit)?;
            p &= !bit(v);
            x |= bit(v);
        }
        ControlFlow::Continue(())
    }

    expand(adj, 0, full_mask(adj.len()), 0, &mut visit)
}

/// First maximal clique whose size differs from `n`, if any.
pub fn find_non_pure_clique(adj: &[Row], n: usize) -> Option<Row> {
    let mut bad = None;
    let _ = for_each_maximal_clique(adj, |c| {
        if c.count_ones() as usize != n {
            bad = Some(c);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    bad
}

pub fn max_clique_size(adj: &[Row]) -> usize {
    let mut best = 0;
    let _ = for_each_maximal_clique(adj, |c| {
        best = best.max(c.count_ones() as usize);
        ControlFlow::Continue(())
    });
    best
}

pub fn maximal_cliques(adj: &[Row]) -> Vec<Row> {
    let mut out = Vec::new();
    let _ = for_each_maximal_clique(adj, |c| {
        out.push(c);
        ControlFlow::Continue(())
    });
    out.sort_unstable();
    out
}
