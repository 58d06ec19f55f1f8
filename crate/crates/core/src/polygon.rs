//! Diagonal models of the type A and type D generalized associahedra.
//!
//! Polygon vertices are `0..m` counterclockwise. For type D the polygon has
//! `2n` vertices and the antipode of vertex `v` is `v + n mod 2n`.

use crate::complex::{CompatibilityGraph, FacetLabel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagonal {
    a: usize,
    b: usize,
}

impl Diagonal {
    /// Diagonal of the `m`-gon with the given endpoints in either order.
    pub fn new(x: usize, y: usize, m: usize) -> Result<Self> {
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        let invalid = Error::InvalidDiagonal { a, b, m };
        if b >= m || a == b || b - a == 1 || b - a == m - 1 {
            return Err(invalid);
        }
        Ok(Diagonal { a, b })
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.a, self.b)
    }

    fn valid_in(self, m: usize) -> bool {
        Diagonal::new(self.a, self.b, m).is_ok()
    }

    pub fn is_diameter(self, n: usize) -> bool {
        self.b - self.a == n
    }

    /// Image under the central symmetry of the `2n`-gon.
    pub fn antipode(self, n: usize) -> Diagonal {
        let m = 2 * n;
        let (x, y) = ((self.a + n) % m, (self.b + n) % m);
        Diagonal { a: x.min(y), b: x.max(y) }
    }

    fn shares_endpoint(self, other: Diagonal) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }

    /// Strictly inside the open arc `a < v < b`.
    fn separates(self, v: usize) -> bool {
        self.a < v && v < self.b
    }
}

/// Whether two diagonals share an interior point. Diagonals meeting only at a
/// polygon vertex do not cross.
pub fn diagonals_cross(d1: Diagonal, d2: Diagonal, m: usize) -> Result<bool> {
    for d in [d1, d2] {
        if !d.valid_in(m) {
            return Err(Error::InvalidDiagonal { a: d.a, b: d.b, m });
        }
    }
    Ok(cross_unchecked(d1, d2))
}

fn cross_unchecked(d1: Diagonal, d2: Diagonal) -> bool {
    !d1.shares_endpoint(d2) && (d1.separates(d2.a) != d1.separates(d2.b))
}

/// All diagonals of the `m`-gon in lexicographic order.
pub fn diagonals(m: usize) -> Vec<Diagonal> {
    (0..m)
        .flat_map(|a| (a + 2..m).map(move |b| (a, b)))
        .filter_map(|(a, b)| Diagonal::new(a, b, m).ok())
        .collect()
}

/// Facet graph of the `n`-dimensional associahedron: diagonals of the
/// `(n+3)`-gon, adjacent when they do not cross.
pub fn build_type_a(n: usize) -> Result<CompatibilityGraph> {
    let m = n + 3;
    let diags = diagonals(m);
    let labels = diags
        .iter()
        .map(|d| FacetLabel::ADiag { a: d.a, b: d.b })
        .collect();
    let g = CompatibilityGraph::from_fn(n, labels, |i, j| !cross_unchecked(diags[i], diags[j]))?;
    g.ensure_simple()?;
    Ok(g)
}

/// Facet of the type D model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeDFacet {
    /// Two centrally symmetric non-diameter diagonals, `d1 < d2`.
    Pair { d1: Diagonal, d2: Diagonal },
    /// Diameter `{a, a + n}` with `a < n`, in one of two colours.
    Diam { a: usize, color: u8 },
}

impl TypeDFacet {
    pub fn pair(d: Diagonal, n: usize) -> Result<Self> {
        if !d.valid_in(2 * n) || d.is_diameter(n) {
            return Err(Error::InvalidDiagonal { a: d.a, b: d.b, m: 2 * n });
        }
        let e = d.antipode(n);
        Ok(TypeDFacet::Pair { d1: d.min(e), d2: d.max(e) })
    }

    pub fn diameter(a: usize, color: u8, n: usize) -> Result<Self> {
        if a >= n || color > 1 || n < 2 {
            return Err(Error::InvalidDiagonal { a, b: a + n, m: 2 * n });
        }
        Ok(TypeDFacet::Diam { a, color })
    }

    pub fn label(self) -> FacetLabel {
        match self {
            TypeDFacet::Pair { d1, .. } => FacetLabel::DPair { a: d1.a, b: d1.b },
            TypeDFacet::Diam { a, color } => FacetLabel::DDiam { a, color },
        }
    }

    fn diagonals(self, n: usize) -> [Diagonal; 2] {
        match self {
            TypeDFacet::Pair { d1, d2 } => [d1, d2],
            TypeDFacet::Diam { a, .. } => {
                let d = Diagonal { a, b: a + n };
                [d, d]
            }
        }
    }
}

/// Type D compatibility: pairs and diameters are compatible when no
/// diagonal of one crosses a diagonal of the other; two diameters are
/// compatible when they share a colour, or differ in colour but connect the
/// same antipodal points.
pub fn compatible_type_d(f1: TypeDFacet, f2: TypeDFacet, n: usize) -> bool {
    match (f1, f2) {
        (TypeDFacet::Diam { a: a1, color: c1 }, TypeDFacet::Diam { a: a2, color: c2 }) => c1 == c2 || a1 == a2,
        _ => {
            let (x, y) = (f1.diagonals(n), f2.diagonals(n));
            x.iter().all(|&d| y.iter().all(|&e| !cross_unchecked(d, e)))
        }
    }
}

/// Facets of the type D model: pairs in order of their smaller diagonal,
/// then colour-0 diameters, then colour-1 diameters.
pub fn type_d_facets(n: usize) -> Result<Vec<TypeDFacet>> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let mut facets = Vec::with_capacity(n * n);
    for d in diagonals(2 * n) {
        if d.is_diameter(n) || d.antipode(n) < d {
            continue;
        }
        let e = d.antipode(n);
        if cross_unchecked(d, e) {
            return Err(Error::InvalidGraph(format!("antipodal diagonals {d:?} and {e:?} cross")));
        }
        facets.push(TypeDFacet::Pair { d1: d, d2: e });
    }
    for color in 0..2 {
        facets.extend((0..n).map(|a| TypeDFacet::Diam { a, color }));
    }
    Ok(facets)
}

/// Facet graph of the `n`-dimensional type D generalized associahedron, `n ≥ 2`.
pub fn build_type_d(n: usize) -> Result<CompatibilityGraph> {
    let facets = type_d_facets(n)?;
    let labels = facets.iter().map(|f| f.label()).collect();
    let g = CompatibilityGraph::from_fn(n, labels, |i, j| compatible_type_d(facets[i], facets[j], n))?;
    g.ensure_simple()?;
    Ok(g)
}
