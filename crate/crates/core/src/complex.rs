//! Flag simple polytopes as facet compatibility graphs.
//!
//! A flag polytope is determined by which pairs of facets meet, so the graph
//! is the whole combinatorial type: faces of codimension `k` are the
//! `k`-cliques, and the polytope is simple of dimension `n` exactly when every
//! maximal clique has `n` vertices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cliques::{self, bit, full_mask, Bits, Row};
use crate::error::{Error, Result};
use crate::polynomial::{to_i64, IntPolynomial};

pub const MAX_FACETS: usize = 128;

/// What a facet stands for in the model that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FacetLabel {
    /// Diagonal `{a, b}` of a polygon, `a < b`.
    ADiag { a: usize, b: usize },
    /// Centrally symmetric pair of diagonals of a `2n`-gon, stored by its
    /// lexicographically smaller member.
    DPair { a: usize, b: usize },
    /// Diameter `{a, a + n}` with a colour in `{0, 1}`.
    DDiam { a: usize, color: u8 },
    /// Member of a building set, 1-based elements in increasing order.
    BSet { set: Vec<usize> },
    Derived { tag: String },
}

impl FacetLabel {
    pub fn derived(tag: impl Into<String>) -> Self {
        FacetLabel::Derived { tag: tag.into() }
    }
}

impl fmt::Display for FacetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetLabel::ADiag { a, b } => write!(f, "a{a}-{b}"),
            FacetLabel::DPair { a, b } => write!(f, "p{a}-{b}"),
            FacetLabel::DDiam { a, color } => write!(f, "d{a}c{color}"),
            FacetLabel::BSet { set } => {
                write!(f, "{{")?;
                for (i, x) in set.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            FacetLabel::Derived { tag } => f.write_str(tag),
        }
    }
}

/// Facet counts `f_0..f_n` of an `n`-polytope, `f_n = 1` counting the polytope itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector {
    dimension: usize,
    counts: Vec<u64>,
}

impl FVector {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        let dimension = counts
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidGraph("empty f-vector".into()))?;
        Ok(FVector { dimension, counts })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of `i`-dimensional faces.
    pub fn get(&self, i: usize) -> u64 {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn to_polynomial(&self) -> Result<IntPolynomial> {
        self.counts
            .iter()
            .map(|&c| to_i64(c))
            .collect::<Result<Vec<_>>>()
            .map(IntPolynomial::new)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityGraph {
    dimension: usize,
    facets: Vec<FacetLabel>,
    adj: Vec<Row>,
}

impl CompatibilityGraph {
    /// Builds a graph and checks the structural invariants (labels distinct,
    /// edges in range, no loops). Simplicity is checked separately.
    pub fn from_edges<I>(dimension: usize, facets: Vec<FacetLabel>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = facets.len();
        if n > MAX_FACETS {
            return Err(Error::TooManyFacets(n));
        }
        let distinct: BTreeSet<&FacetLabel> = facets.iter().collect();
        if distinct.len() != n {
            return Err(Error::InvalidGraph("facet labels are not distinct".into()));
        }
        let mut adj = vec![0; n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i},{j}) out of range")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at {i}")));
            }
            adj[i] |= bit(j);
            adj[j] |= bit(i);
        }
        Ok(CompatibilityGraph { dimension, facets, adj })
    }

    /// Edges given by a symmetric predicate evaluated on each unordered pair.
    pub fn from_fn<F>(dimension: usize, facets: Vec<FacetLabel>, mut compatible: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> bool,
    {
        let n = facets.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if compatible(i, j) {
                    edges.push((i, j));
                }
            }
        }
        Self::from_edges(dimension, facets, edges)
    }

    /// Graph with placeholder labels `v0, v1, ...`.
    pub fn unlabeled<I>(dimension: usize, vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let facets = (0..vertices).map(|i| FacetLabel::derived(format!("v{i}"))).collect();
        Self::from_edges(dimension, facets, edges)
    }

    pub(crate) fn from_rows(dimension: usize, facets: Vec<FacetLabel>, adj: Vec<Row>) -> Self {
        debug_assert_eq!(facets.len(), adj.len());
        CompatibilityGraph { dimension, facets, adj }
    }

    /// The point: dimension 0, no facets.
    pub fn point() -> Self {
        CompatibilityGraph { dimension: 0, facets: Vec::new(), adj: Vec::new() }
    }

    /// The segment: two disjoint facets.
    pub fn segment() -> Self {
        Self::unlabeled(1, 2, []).expect("segment is well formed")
    }

    pub fn cycle(len: usize) -> Result<Self> {
        Self::unlabeled(2, len, (0..len).map(|i| (i, (i + 1) % len)))
    }

    /// Facet graph of the `n`-cube: every pair meets except opposite facets.
    pub fn cube(n: usize) -> Result<Self> {
        Self::unlabeled(n, 2 * n, (0..2 * n).flat_map(|i| (i + 1..2 * n).filter(move |&j| j / 2 != i / 2).map(move |j| (i, j))))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facets(&self) -> &[FacetLabel] {
        &self.facets
    }

    pub fn label(&self, i: usize) -> &FacetLabel {
        &self.facets[i]
    }

    pub fn index_of(&self, label: &FacetLabel) -> Option<usize> {
        self.facets.iter().position(|l| l == label)
    }

    pub fn rows(&self) -> &[Row] {
        &self.adj
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i] & bit(j) != 0
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        Bits(self.adj[i])
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| Bits(self.adj[i] & !full_mask(i + 1)).map(move |j| (i, j)))
            .collect()
    }

    /// Induced subgraph on `vertices` (kept in the given order).
    pub fn induced(&self, vertices: &[usize], dimension: usize) -> Self {
        let facets = vertices.iter().map(|&v| self.facets[v].clone()).collect();
        let adj = vertices
            .iter()
            .map(|&v| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.adjacent(v, w))
                    .fold(0, |acc, (k, _)| acc | bit(k))
            })
            .collect();
        CompatibilityGraph { dimension, facets, adj }
    }

    pub fn with_dimension(mut self, dimension: usize) -> Self {
        self.dimension = dimension;
        self
    }

    pub fn with_labels(mut self, facets: Vec<FacetLabel>) -> Result<Self> {
        if facets.len() != self.len() {
            return Err(Error::InvalidGraph("label count mismatch".into()));
        }
        let distinct: BTreeSet<&FacetLabel> = facets.iter().collect();
        if distinct.len() != facets.len() {
            return Err(Error::InvalidGraph("facet labels are not distinct".into()));
        }
        self.facets = facets;
        Ok(self)
    }

    /// Vertices renumbered so that new vertex `k` is old vertex `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        self.induced(order, self.dimension)
    }

    pub fn is_simple(&self) -> bool {
        simplicity_check(self, self.dimension)
    }

    pub fn ensure_simple(&self) -> Result<()> {
        match cliques::find_non_pure_clique(&self.adj, self.dimension) {
            None => Ok(()),
            Some(c) => Err(Error::SimplicityViolation {
                expected: self.dimension,
                found: c.count_ones() as usize,
            }),
        }
    }

    pub fn is_clique(&self, members: &[usize]) -> bool {
        let mut seen: Row = 0;
        for &v in members {
            if v >= self.len() || seen & bit(v) != 0 || self.adj[v] & seen != seen {
                return false;
            }
            seen |= bit(v);
        }
        true
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<[usize; 2]> = self.edges().into_iter().map(|(i, j)| [i, j]).collect();
        // serde_json's default map is sorted, so key order is deterministic
        serde_json::json!({
            "dimension": self.dimension,
            "facets": self.facets,
            "edges": edges,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            dimension: usize,
            facets: Vec<FacetLabel>,
            edges: Vec<[usize; 2]>,
        }
        let wire: Wire = serde_json::from_value(value.clone()).map_err(|e| Error::InvalidGraph(e.to_string()))?;
        if let Some([i, j]) = wire.edges.iter().find(|[i, j]| i >= j) {
            return Err(Error::InvalidGraph(format!("edge [{i},{j}] is not written with i < j")));
        }
        Self::from_edges(wire.dimension, wire.facets, wire.edges.into_iter().map(|[i, j]| (i, j)))
    }
}

/// True iff every maximal clique of `g` has exactly `n` vertices.
pub fn simplicity_check(g: &CompatibilityGraph, n: usize) -> bool {
    cliques::find_non_pure_clique(&g.adj, n).is_none()
}

/// Face numbers from clique counts: `f_i` counts the `(n - i)`-cliques.
pub fn clique_f_vector(g: &CompatibilityGraph) -> Result<FVector> {
    g.ensure_simple()?;
    let n = g.dimension;
    let counts = cliques::clique_counts(&g.adj)?;
    let f = (0..=n).map(|i| counts.get(n - i).copied().unwrap_or(0)).collect();
    FVector::new(f)
}

/// The face cut out by the facets in `clique`, as a polytope in its own right:
/// its facets are the common neighbours of the clique.
pub fn face_graph(g: &CompatibilityGraph, clique: &[usize]) -> Result<CompatibilityGraph> {
    if !g.is_clique(clique) || clique.len() > g.dimension {
        return Err(Error::NotAClique(clique.to_vec()));
    }
    let common = clique.iter().fold(full_mask(g.len()), |acc, &v| acc & g.adj[v]);
    let vertices: Vec<usize> = Bits(common).collect();
    Ok(g.induced(&vertices, g.dimension - clique.len()))
}

/// Direct product: facets `F × Q` and `P × G`, every cross pair meets.
///
/// Labels are kept when the two label sets are disjoint; otherwise they are
/// prefixed with the factor index (`0.` / `1.`).
pub fn product(g1: &CompatibilityGraph, g2: &CompatibilityGraph) -> Result<CompatibilityGraph> {
    let (n1, n2) = (g1.len(), g2.len());
    if n1 + n2 > MAX_FACETS {
        return Err(Error::TooManyFacets(n1 + n2));
    }
    let left: BTreeSet<&FacetLabel> = g1.facets.iter().collect();
    let clash = g2.facets.iter().any(|l| left.contains(l));
    let facets = if clash {
        g1.facets
            .iter()
            .map(|l| FacetLabel::derived(format!("0.{l}")))
            .chain(g2.facets.iter().map(|l| FacetLabel::derived(format!("1.{l}"))))
            .collect()
    } else {
        g1.facets.iter().chain(&g2.facets).cloned().collect()
    };
    let right_mask = full_mask(n1 + n2) & !full_mask(n1);
    let adj = g1
        .adj
        .iter()
        .map(|&r| r | right_mask)
        .chain(g2.adj.iter().map(|&r| (r << n1) | full_mask(n1)))
        .collect();
    Ok(CompatibilityGraph::from_rows(g1.dimension + g2.dimension, facets, adj))
}

/// Splits `g` into indecomposable factors: the connected components of the
/// complement graph. Each factor's dimension is its own clique number.
pub fn decompose(g: &CompatibilityGraph) -> Vec<CompatibilityGraph> {
    let n = g.len();
    let all = full_mask(n);
    let mut unseen = all;
    let mut factors = Vec::new();
    while unseen != 0 {
        let start = unseen.trailing_zeros() as usize;
        let mut comp = bit(start);
        let mut frontier = bit(start);
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = all & !g.adj[v] & !bit(v) & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        unseen &= !comp;
        let vertices: Vec<usize> = Bits(comp).collect();
        let sub = g.induced(&vertices, 0);
        let dim = cliques::max_clique_size(&sub.adj);
        if dim > 0 {
            factors.push(sub.with_dimension(dim));
        }
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> CompatibilityGraph {
        CompatibilityGraph::unlabeled(2, n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn square_and_triangle_simplicity() {
        let square = CompatibilityGraph::cycle(4).unwrap();
        assert!(simplicity_check(&square, 2));
        let triangle = CompatibilityGraph::unlabeled(2, 3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!simplicity_check(&triangle, 2));
        assert_eq!(
            clique_f_vector(&triangle),
            Err(Error::SimplicityViolation { expected: 2, found: 3 })
        );
    }

    #[test]
    fn f_vectors_of_polygons() {
        assert_eq!(clique_f_vector(&CompatibilityGraph::cycle(4).unwrap()).unwrap().counts(), &[4, 4, 1]);
        assert_eq!(clique_f_vector(&CompatibilityGraph::cycle(5).unwrap()).unwrap().counts(), &[5, 5, 1]);
        assert_eq!(clique_f_vector(&CompatibilityGraph::point()).unwrap().counts(), &[1]);
        assert_eq!(clique_f_vector(&CompatibilityGraph::cube(3).unwrap()).unwrap().counts(), &[8, 12, 6, 1]);
    }

    #[test]
    fn face_graphs() {
        let square = CompatibilityGraph::cycle(4).unwrap();
        let seg = face_graph(&square, &[0]).unwrap();
        assert_eq!((seg.dimension(), seg.len(), seg.edge_count()), (1, 2, 0));

        let pentagon = CompatibilityGraph::cycle(5).unwrap();
        let pt = face_graph(&pentagon, &[0, 1]).unwrap();
        assert_eq!((pt.dimension(), pt.len()), (0, 0));

        assert_eq!(face_graph(&pentagon, &[0, 2]), Err(Error::NotAClique(vec![0, 2])));
        assert!(face_graph(&pentagon, &[0, 0]).is_err());
        assert!(face_graph(&pentagon, &[9]).is_err());
    }

    #[test]
    fn products() {
        let seg = CompatibilityGraph::segment();
        let sq = product(&seg, &seg).unwrap();
        assert_eq!((sq.dimension(), sq.len(), sq.edge_count()), (2, 4, 4));
        assert!(sq.is_simple());
        // clashing labels get prefixed
        assert_eq!(sq.label(0), &FacetLabel::derived("0.v0"));

        let pentagon = CompatibilityGraph::cycle(5).unwrap();
        assert_eq!(product(&pentagon, &CompatibilityGraph::point()).unwrap(), pentagon);
    }

    #[test]
    fn decomposition() {
        assert_eq!(decompose(&CompatibilityGraph::cycle(4).unwrap()).len(), 2);
        assert_eq!(decompose(&CompatibilityGraph::cycle(5).unwrap()).len(), 1);
        let cube = decompose(&CompatibilityGraph::cube(3).unwrap());
        assert_eq!(cube.len(), 3);
        assert!(cube.iter().all(|f| f.dimension() == 1 && f.len() == 2));
        assert!(decompose(&CompatibilityGraph::point()).is_empty());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = path(4);
        let v = g.to_json();
        assert_eq!(CompatibilityGraph::from_json(&v).unwrap(), g);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with(r#"{"dimension":2,"edges":[[0,1],[1,2],[2,3]],"facets":[{"kind":"derived","tag":"v0"}"#));

        let bad = serde_json::json!({"dimension": 1, "facets": [{"kind":"derived","tag":"x"},{"kind":"derived","tag":"y"}], "edges": [[1,0]]});
        assert!(CompatibilityGraph::from_json(&bad).is_err());
        let dup = serde_json::json!({"dimension": 1, "facets": [{"kind":"adiag","a":0,"b":2},{"kind":"adiag","a":0,"b":2}], "edges": []});
        assert!(CompatibilityGraph::from_json(&dup).is_err());
        let looped = CompatibilityGraph::unlabeled(1, 2, [(1, 1)]);
        assert!(looped.is_err());
    }

    #[test]
    fn label_wire_format() {
        let labels = vec![
            FacetLabel::ADiag { a: 0, b: 2 },
            FacetLabel::DPair { a: 0, b: 2 },
            FacetLabel::DDiam { a: 1, color: 1 },
            FacetLabel::BSet { set: vec![1, 2] },
            FacetLabel::derived("base0"),
        ];
        let text = serde_json::to_string(&serde_json::to_value(&labels).unwrap()).unwrap();
        assert_eq!(
            text,
            r#"[{"a":0,"b":2,"kind":"adiag"},{"a":0,"b":2,"kind":"dpair"},{"a":1,"color":1,"kind":"ddiam"},{"kind":"bset","set":[1,2]},{"kind":"derived","tag":"base0"}]"#
        );
    }
}
