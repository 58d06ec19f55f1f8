//! Building sets and nested-set complexes.
//!
//! Subsets of the ground set `[m] = {1..m}` are bitmasks with element `i`
//! at bit `i - 1`; `m ≤ 63`. The nestohedron `P_B` of a connected building
//! set on `[m]` has dimension `m - 1`, and its faces of codimension `k` are
//! the nested sets of size `k`.

use std::collections::HashSet;
use std::fmt;

use serde::Deserialize;
use serde_json::Value;

use crate::complex::{decompose, face_graph, CompatibilityGraph, FVector, FacetLabel};
use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 63;

pub type Subset = u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BuildingSet {
    ground: usize,
    /// Sorted by (cardinality, mask).
    sets: Vec<Subset>,
    lookup: MaskSet,
}

/// Membership table over masks, kept sorted for binary search.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct MaskSet(Vec<Subset>);

impl MaskSet {
    fn new(sets: &[Subset]) -> Self {
        let mut v = sets.to_vec();
        v.sort_unstable();
        MaskSet(v)
    }

    #[inline]
    fn contains(&self, s: Subset) -> bool {
        self.0.binary_search(&s).is_ok()
    }
}

/// Why a collection fails to be a connected building set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingSingleton(usize),
    MissingFullSet,
    NotUnionClosed(Vec<usize>, Vec<usize>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingSingleton(i) => write!(f, "singleton {{{i}}} is missing"),
            Violation::MissingFullSet => write!(f, "the full ground set is missing"),
            Violation::NotUnionClosed(a, b) => {
                write!(f, "{a:?} and {b:?} intersect but their union is missing")
            }
        }
    }
}

/// 1-based elements of a mask, increasing.
pub fn elements(s: Subset) -> Vec<usize> {
    (0..64).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn mask_of(elements: &[usize]) -> Subset {
    elements.iter().fold(0, |acc, &e| acc | 1 << (e - 1))
}

fn full(ground: usize) -> Subset {
    if ground == 64 {
        u64::MAX
    } else {
        (1u64 << ground) - 1
    }
}

/// Packs the bits of `s` lying in `within` densely, in increasing order.
fn compress(s: Subset, within: Subset) -> Subset {
    let mut out = 0;
    let mut k = 0;
    let mut rest = within;
    while rest != 0 {
        let i = rest.trailing_zeros();
        rest &= rest - 1;
        if s >> i & 1 == 1 {
            out |= 1 << k;
        }
        k += 1;
    }
    out
}

impl BuildingSet {
    /// Collects distinct non-empty masks inside `[ground]`. The axioms are
    /// not checked here; see [`BuildingSet::validate`].
    pub fn new<I>(ground: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Subset>,
    {
        if ground == 0 || ground > MAX_GROUND {
            return Err(Error::InvalidBuildingSet(format!("ground size {ground} outside 1..={MAX_GROUND}")));
        }
        let mut v: Vec<Subset> = Vec::new();
        for s in sets {
            if s == 0 {
                return Err(Error::InvalidBuildingSet("empty member".into()));
            }
            if s & !full(ground) != 0 {
                return Err(Error::InvalidBuildingSet(format!("member {:?} leaves the ground set", elements(s))));
            }
            v.push(s);
        }
        v.sort_unstable_by_key(|&s| (s.count_ones(), s));
        v.dedup();
        let lookup = MaskSet::new(&v);
        Ok(BuildingSet { ground, sets: v, lookup })
    }

    /// From 1-based element lists.
    pub fn from_lists(ground: usize, lists: &[&[usize]]) -> Result<Self> {
        if let Some(e) = lists.iter().flat_map(|l| l.iter()).find(|&&e| e == 0 || e > ground) {
            return Err(Error::InvalidBuildingSet(format!("element {e} outside [1, {ground}]")));
        }
        Self::new(ground, lists.iter().map(|l| mask_of(l)))
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    /// Dimension of the nestohedron, `ground - 1`.
    pub fn dimension(&self) -> usize {
        self.ground - 1
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.lookup.contains(s)
    }

    pub fn full_set(&self) -> Subset {
        full(self.ground)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        for i in 0..self.ground {
            if !self.contains(1 << i) {
                return Err(Violation::MissingSingleton(i + 1));
            }
        }
        if !self.contains(self.full_set()) {
            return Err(Violation::MissingFullSet);
        }
        for (k, &a) in self.sets.iter().enumerate() {
            for &b in &self.sets[k + 1..] {
                if a & b != 0 && !self.contains(a | b) {
                    return Err(Violation::NotUnionClosed(elements(a), elements(b)));
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn require_valid(&self) -> Result<()> {
        self.validate().map_err(|v| Error::InvalidBuildingSet(v.to_string()))
    }

    /// Inclusion-maximal members.
    pub fn maximal_members(&self) -> Vec<Subset> {
        self.sets
            .iter()
            .copied()
            .filter(|&s| !self.sets.iter().any(|&t| t != s && t & s == s))
            .collect()
    }

    /// Members other than the full set, in (cardinality, mask) order.
    pub fn proper_members(&self) -> Vec<Subset> {
        let top = self.full_set();
        debug_assert!(
            !self.is_valid() || self.maximal_members() == vec![top],
            "a connected building set has the full set as its only maximal member"
        );
        self.sets.iter().copied().filter(|&s| s != top).collect()
    }

    /// Two members can both belong to a nested set.
    pub fn compatible(&self, s: Subset, t: Subset) -> bool {
        let meet = s & t;
        meet == s || meet == t || (meet == 0 && !self.contains(s | t))
    }

    fn check_member(&self, s: Subset) -> Result<()> {
        if !self.contains(s) {
            return Err(Error::NotAMember);
        }
        if s == self.full_set() {
            return Err(Error::FullSet);
        }
        Ok(())
    }

    /// `B|_S`: members contained in `S`, re-indexed onto `[|S|]`.
    pub fn restriction(&self, s: Subset) -> Result<Reindexed> {
        self.check_member(s)?;
        let sets = self.sets.iter().filter(|&&t| t & s == t).map(|&t| compress(t, s));
        let set = BuildingSet::new(s.count_ones() as usize, sets)?;
        Reindexed::checked(set, elements(s), "restriction")
    }

    /// `B / S`: the non-empty differences `T \ S`, re-indexed onto `[m - |S|]`.
    pub fn contraction(&self, s: Subset) -> Result<Reindexed> {
        self.check_member(s)?;
        let rest = self.full_set() & !s;
        let sets = self
            .sets
            .iter()
            .map(|&t| t & rest)
            .filter(|&t| t != 0)
            .map(|t| compress(t, rest));
        let set = BuildingSet::new(rest.count_ones() as usize, sets)?;
        Reindexed::checked(set, elements(rest), "contraction")
    }

    /// Whether `members` (pairwise distinct proper members) form a nested set.
    pub fn is_nested(&self, members: &[Subset]) -> bool {
        let mut chosen: Vec<Subset> = Vec::with_capacity(members.len());
        for &s in members {
            if !chosen.iter().all(|&t| self.compatible(s, t)) || !self.unions_avoid(&chosen, s) {
                return false;
            }
            chosen.push(s);
        }
        true
    }

    /// Given a nested `chosen` and a member `s` compatible with each of them,
    /// checks that no union of `s` with a pairwise-disjoint subfamily of
    /// `chosen` (all disjoint from `s`) lies in `B`.
    fn unions_avoid(&self, chosen: &[Subset], s: Subset) -> bool {
        let disjoint: Vec<Subset> = chosen.iter().copied().filter(|&t| t & s == 0).collect();
        fn grow(b: &BuildingSet, pool: &[Subset], acc: Subset, used: Subset) -> bool {
            for (k, &t) in pool.iter().enumerate() {
                if t & used != 0 {
                    continue;
                }
                let u = acc | t;
                if b.contains(u) || !grow(b, &pool[k + 1..], u, used | t) {
                    return false;
                }
            }
            true
        }
        grow(self, &disjoint, s, s)
    }

    /// Walks pairwise-compatible families in index order. Families that are
    /// nested are counted by size; the walk stops at the first compatible
    /// family that is not nested when `stop_on_failure` is set.
    fn walk(&self, stop_on_failure: bool) -> (Vec<u64>, bool) {
        let members = self.proper_members();
        let mut counts = vec![0u64; members.len() + 1];
        let mut flag = true;
        let mut chosen = Vec::new();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            b: &BuildingSet,
            members: &[Subset],
            start: usize,
            chosen: &mut Vec<Subset>,
            counts: &mut [u64],
            flag: &mut bool,
            stop: bool,
        ) {
            counts[chosen.len()] += 1;
            for k in start..members.len() {
                let s = members[k];
                if !chosen.iter().all(|&t| b.compatible(s, t)) {
                    continue;
                }
                if !b.unions_avoid(chosen, s) {
                    *flag = false;
                    if stop {
                        return;
                    }
                    continue;
                }
                chosen.push(s);
                rec(b, members, k + 1, chosen, counts, flag, stop);
                chosen.pop();
                if stop && !*flag {
                    return;
                }
            }
        }
        rec(self, &members, 0, &mut chosen, &mut counts, &mut flag, stop_on_failure);
        (counts, flag)
    }

    /// Every pairwise compatible family is nested, i.e. `P_B` is flag.
    pub fn is_flag(&self) -> bool {
        self.walk(true).1
    }

    /// All proper members in (cardinality, mask) order, with the 1-based label of each.
    fn labels(&self) -> Vec<FacetLabel> {
        self.proper_members()
            .into_iter()
            .map(|s| FacetLabel::BSet { set: elements(s) })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let sets: Vec<Vec<usize>> = self.sets.iter().map(|&s| elements(s)).collect();
        serde_json::json!({ "ground": self.ground, "sets": sets })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            ground: usize,
            sets: Vec<Vec<usize>>,
        }
        let wire: Wire =
            serde_json::from_value(value.clone()).map_err(|e| Error::InvalidBuildingSet(e.to_string()))?;
        let lists: Vec<&[usize]> = wire.sets.iter().map(|v| v.as_slice()).collect();
        Self::from_lists(wire.ground, &lists)
    }
}

/// A building set on a re-indexed ground: element `k + 1` of `set` is
/// element `elements[k]` of the original ground.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reindexed {
    pub set: BuildingSet,
    pub elements: Vec<usize>,
}

impl Reindexed {
    fn checked(set: BuildingSet, elements: Vec<usize>, what: &str) -> Result<Self> {
        set.validate()
            .map_err(|v| Error::InvalidBuildingSet(format!("{what} is not a connected building set: {v}")))?;
        Ok(Reindexed { set, elements })
    }
}

/// `Σ_{S ∈ B \ B_max} P_{B|_S} × P_{B/S}`, one term per facet of `P_B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTerm {
    pub set: Subset,
    pub restriction: Reindexed,
    pub contraction: Reindexed,
}

pub fn validate_building_set(b: &BuildingSet) -> bool {
    b.is_valid()
}

pub fn nested_complex_f_vector(b: &BuildingSet) -> Result<FVector> {
    b.require_valid()?;
    let (counts, _) = b.walk(false);
    let n = b.dimension();
    FVector::new((0..=n).map(|i| counts.get(n - i).copied().unwrap_or(0)).collect())
}

pub fn flagness_check(b: &BuildingSet) -> bool {
    b.is_flag()
}

/// Facet graph of a flag nestohedron: proper members, adjacent when compatible.
pub fn nestohedron_graph(b: &BuildingSet) -> Result<CompatibilityGraph> {
    b.require_valid()?;
    if !b.is_flag() {
        return Err(Error::NotFlag);
    }
    let members = b.proper_members();
    let g = CompatibilityGraph::from_fn(b.dimension(), b.labels(), |i, j| b.compatible(members[i], members[j]))?;
    g.ensure_simple()?;
    Ok(g)
}

/// Vertex sets of connected induced subgraphs of a connected graph on
/// `[ground]` (edges 1-based).
pub fn graph_building_set(ground: usize, edges: &[(usize, usize)]) -> Result<BuildingSet> {
    if ground == 0 || ground > 20 {
        return Err(Error::InvalidBuildingSet(format!("graph building sets need 1..=20 vertices, got {ground}")));
    }
    let mut nbr = vec![0 as Subset; ground];
    for &(u, v) in edges {
        if u == 0 || v == 0 || u > ground || v > ground || u == v {
            return Err(Error::InvalidBuildingSet(format!("bad edge ({u},{v})")));
        }
        nbr[u - 1] |= 1 << (v - 1);
        nbr[v - 1] |= 1 << (u - 1);
    }
    let connected = |s: Subset| {
        let mut reach = s & s.wrapping_neg();
        loop {
            let next = elements(reach).iter().fold(reach, |acc, &e| acc | (nbr[e - 1] & s));
            if next == reach {
                return reach == s;
            }
            reach = next;
        }
    };
    if !connected(full(ground)) {
        return Err(Error::Disconnected);
    }
    BuildingSet::new(ground, (1..=full(ground)).filter(|&s| connected(s)))
}

/// Building set of the path `1 - 2 - ... - m`; its nestohedron is `As^{m-1}`.
pub fn path_building_set(ground: usize) -> Result<BuildingSet> {
    let edges: Vec<_> = (1..ground).map(|i| (i, i + 1)).collect();
    graph_building_set(ground, &edges)
}

/// Building set of the cycle on `[m]`, `m ≥ 3`; its nestohedron is the cyclohedron `Cy^{m-1}`.
pub fn cycle_building_set(ground: usize) -> Result<BuildingSet> {
    if ground < 3 {
        return Err(Error::InvalidRank(ground));
    }
    let mut edges: Vec<_> = (1..ground).map(|i| (i, i + 1)).collect();
    edges.push((ground, 1));
    graph_building_set(ground, &edges)
}

pub fn boundary_formula(b: &BuildingSet) -> Result<Vec<BoundaryTerm>> {
    b.require_valid()?;
    b.proper_members()
        .into_iter()
        .map(|s| {
            Ok(BoundaryTerm {
                set: s,
                restriction: b.restriction(s)?,
                contraction: b.contraction(s)?,
            })
        })
        .collect()
}

/// Facets witnessing that a polytope is not a nestohedron: the polytope is
/// indecomposable and at least `2n + 3` of its facets are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonNestohedronCertificate {
    pub dimension: usize,
    pub indecomposable_facets: Vec<usize>,
    pub threshold: usize,
}

/// Indecomposable facets of `g` (facets whose face graph has at most one factor).
pub fn indecomposable_facets(g: &CompatibilityGraph) -> Result<Vec<usize>> {
    (0..g.len())
        .filter_map(|f| match face_graph(g, &[f]) {
            Ok(face) => (decompose(&face).len() <= 1).then_some(Ok(f)),
            Err(e) => Some(Err(e)),
        })
        .collect()
}

pub fn non_nestohedron_certificate(g: &CompatibilityGraph) -> Result<Option<NonNestohedronCertificate>> {
    g.ensure_simple()?;
    if decompose(g).len() != 1 {
        return Ok(None);
    }
    let n = g.dimension();
    let threshold = 2 * n + 3;
    let facets = indecomposable_facets(g)?;
    Ok((facets.len() >= threshold).then_some(NonNestohedronCertificate {
        dimension: n,
        indecomposable_facets: facets,
        threshold,
    }))
}

/// Calls `visit` with every connected building set on `[ground]`.
///
/// Proper non-singleton subsets are decided in order of cardinality; a set
/// that is the union of two intersecting chosen members is forced in, and
/// nothing decided later can force an earlier exclusion, so every leaf is a
/// building set and each appears once.
pub fn for_each_connected_building_set<F>(ground: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&BuildingSet),
{
    if ground == 0 || ground > 6 {
        return Err(Error::InvalidBuildingSet(format!("exhaustive enumeration supports ground 1..=6, got {ground}")));
    }
    let top = full(ground);
    let mut candidates: Vec<Subset> = (1..top).filter(|s| s.count_ones() >= 2).collect();
    candidates.sort_unstable_by_key(|&s| (s.count_ones(), s));
    let base: Vec<Subset> = (0..ground).map(|i| 1 << i).chain([top]).collect();

    fn rec<F: FnMut(&BuildingSet)>(
        ground: usize,
        candidates: &[Subset],
        chosen: &mut Vec<Subset>,
        base: &[Subset],
        visit: &mut F,
    ) {
        let Some((&u, rest)) = candidates.split_first() else {
            let set = BuildingSet::new(ground, base.iter().chain(chosen.iter()).copied()).expect("masks in range");
            visit(&set);
            return;
        };
        let forced = chosen
            .iter()
            .enumerate()
            .any(|(i, &a)| chosen[i + 1..].iter().any(|&b| a & b != 0 && a | b == u));
        if !forced {
            rec(ground, rest, chosen, base, visit);
        }
        chosen.push(u);
        rec(ground, rest, chosen, base, visit);
        chosen.pop();
    }
    let mut chosen = Vec::new();
    rec(ground, &candidates, &mut chosen, &base, &mut visit);
    Ok(())
}

/// Building sets of all connected graphs on `[ground]`, one per isomorphism
/// class of graph (by canonical form), in a deterministic order.
pub fn graphical_building_sets(ground: usize) -> Result<Vec<BuildingSet>> {
    if ground == 0 || ground > 7 {
        return Err(Error::InvalidBuildingSet(format!("graph enumeration supports ground 1..=7, got {ground}")));
    }
    let pairs: Vec<(usize, usize)> = (1..=ground).flat_map(|u| (u + 1..=ground).map(move |v| (u, v))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = elements(mask).into_iter().map(|k| pairs[k - 1]).collect();
        let g = CompatibilityGraph::unlabeled(0, ground, edges.iter().map(|&(u, v)| (u - 1, v - 1)))?;
        if !seen.insert(crate::canon::canonical_form(&g)) {
            continue;
        }
        match graph_building_set(ground, &edges) {
            Ok(b) => out.push(b),
            Err(Error::Disconnected) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
