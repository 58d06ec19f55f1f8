//! Codimension-2 shavings, facet-type tallies and shaving-sequence search.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde_json::Value;

use crate::canon::{canonical_form, canonical_form_colored};
use crate::complex::{clique_f_vector, decompose, face_graph, product, CompatibilityGraph, FacetLabel};
use crate::error::{Error, Result};
use crate::polygon::{build_type_a, build_type_d};
use crate::polynomial::IntPolynomial;
use crate::vectors::{f_to_h, vectors};

/// One shaving: the codimension-2 face `f1 ∩ f2` is cut off and replaced by
/// the facet `new_label`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShaveStep {
    pub f1: FacetLabel,
    pub f2: FacetLabel,
    pub new_label: FacetLabel,
}

impl ShaveStep {
    pub fn to_json(&self) -> Value {
        serde_json::json!({ "f1": self.f1, "f2": self.f2 })
    }
}

fn check_edge(g: &CompatibilityGraph, f1: usize, f2: usize) -> Result<()> {
    if f1 >= g.len() || f2 >= g.len() || f1 == f2 || !g.adjacent(f1, f2) {
        return Err(Error::NotAdjacent(f1, f2));
    }
    Ok(())
}

fn cut_label(g: &CompatibilityGraph, f1: usize, f2: usize) -> FacetLabel {
    let (a, b) = (g.label(f1).to_string(), g.label(f2).to_string());
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let mut tag = format!("cut({a}|{b})");
    while g.index_of(&FacetLabel::derived(tag.clone())).is_some() {
        tag.push('\'');
    }
    FacetLabel::derived(tag)
}

/// Cuts off the face `f1 ∩ f2`: the edge `f1 f2` goes away and a new facet
/// meets `f1`, `f2` and all their common neighbours.
pub fn shave(g: &CompatibilityGraph, f1: usize, f2: usize) -> Result<CompatibilityGraph> {
    shave_labeled(g, f1, f2).map(|(h, _)| h)
}

fn shave_labeled(g: &CompatibilityGraph, f1: usize, f2: usize) -> Result<(CompatibilityGraph, ShaveStep)> {
    check_edge(g, f1, f2)?;
    if g.dimension() < 2 {
        return Err(Error::InvalidRank(g.dimension()));
    }
    let label = cut_label(g, f1, f2);
    let new = g.len();
    let common: Vec<usize> = g.neighbors(f1).filter(|&v| g.adjacent(f2, v)).collect();
    let mut facets = g.facets().to_vec();
    facets.push(label.clone());
    let edges = g
        .edges()
        .into_iter()
        .filter(|&(i, j)| (i, j) != (f1.min(f2), f1.max(f2)))
        .chain([(f1, new), (f2, new)])
        .chain(common.into_iter().map(|v| (v, new)));
    let h = CompatibilityGraph::from_edges(g.dimension(), facets, edges)?;
    h.ensure_simple()?;
    let step = ShaveStep { f1: g.label(f1).clone(), f2: g.label(f2).clone(), new_label: label };
    Ok((h, step))
}

/// The face being cut by `shave(g, f1, f2)`, of dimension `n - 2`.
pub fn shaved_face(g: &CompatibilityGraph, f1: usize, f2: usize) -> Result<CompatibilityGraph> {
    check_edge(g, f1, f2)?;
    face_graph(g, &[f1, f2])
}

/// `γ(P') = γ(P) + τ·γ(G)` where `G` is the shaved face.
pub fn gamma_after_shave(gamma_p: &IntPolynomial, gamma_face: &IntPolynomial) -> Result<IntPolynomial> {
    gamma_p.checked_add(&gamma_face.shift(1))
}

/// Both sides of the shaving identities, each computed by clique enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShaveIdentity {
    pub h_before: IntPolynomial,
    pub h_face: IntPolynomial,
    pub h_after: IntPolynomial,
    pub gamma_before: IntPolynomial,
    pub gamma_face: IntPolynomial,
    pub gamma_after: IntPolynomial,
}

impl ShaveIdentity {
    pub fn h_holds(&self) -> bool {
        self.h_before.checked_add(&self.h_face.shift(1)).is_ok_and(|h| h == self.h_after)
    }

    pub fn gamma_holds(&self) -> bool {
        gamma_after_shave(&self.gamma_before, &self.gamma_face).is_ok_and(|g| g == self.gamma_after)
    }
}

pub fn shave_identity(g: &CompatibilityGraph, f1: usize, f2: usize) -> Result<ShaveIdentity> {
    let before = vectors(g)?;
    let face = vectors(&shaved_face(g, f1, f2)?)?;
    let after = vectors(&shave(g, f1, f2)?)?;
    Ok(ShaveIdentity {
        h_before: before.h,
        h_face: face.h,
        h_after: after.h,
        gamma_before: before.gamma,
        gamma_face: face.gamma,
        gamma_after: after.gamma,
    })
}

/// Multiset of facet types. A type is the sorted list of canonical forms of
/// the facet's indecomposable factors; the point is the empty product.
#[derive(Debug, Clone, Default)]
pub struct FacetTypeTally {
    entries: BTreeMap<String, TallyEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TallyEntry {
    pub count: usize,
    /// Readable product of family names, e.g. `As^1 x As^1 x As^1`.
    pub name: String,
}

impl PartialEq for FacetTypeTally {
    fn eq(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|((k1, e1), (k2, e2))| k1 == k2 && e1.count == e2.count)
    }
}

impl Eq for FacetTypeTally {}

impl FacetTypeTally {
    fn add(&mut self, key: String, name: String, count: usize) {
        self.entries.entry(key).or_insert(TallyEntry { count: 0, name }).count += count;
    }

    pub fn total(&self) -> usize {
        self.entries.values().map(|e| e.count).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &TallyEntry)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e))
    }

    pub fn count_of(&self, name: &str) -> usize {
        self.entries.values().filter(|e| e.name == name).map(|e| e.count).sum()
    }

    /// `name → count`, merged over keys with the same name.
    pub fn by_name(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in self.entries.values() {
            *out.entry(e.name.clone()).or_insert(0) += e.count;
        }
        out
    }

    /// Keys present in either tally whose counts differ: `(name, self, other)`.
    pub fn differences(&self, other: &Self) -> Vec<(String, usize, usize)> {
        let keys: std::collections::BTreeSet<&String> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .filter_map(|k| {
                let a = self.entries.get(k);
                let b = other.entries.get(k);
                let (ca, cb) = (a.map_or(0, |e| e.count), b.map_or(0, |e| e.count));
                (ca != cb).then(|| (a.or(b).unwrap().name.clone(), ca, cb))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|(k, e)| serde_json::json!({ "type": e.name, "count": e.count, "canonical": k }))
                .collect(),
        )
    }
}

impl fmt::Display for FacetTypeTally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, count)) in self.by_name().iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{count}·[{name}]")?;
        }
        Ok(())
    }
}

/// Names indecomposable factors by comparison with the model families.
#[derive(Default)]
struct FamilyNames {
    by_dimension: HashMap<usize, Vec<(String, String)>>,
}

impl FamilyNames {
    fn name(&mut self, factor: &CompatibilityGraph, canonical: &str) -> String {
        let d = factor.dimension();
        let known = self.by_dimension.entry(d).or_insert_with(|| {
            let mut v = Vec::new();
            if let Ok(a) = build_type_a(d) {
                v.push((canonical_form(&a), format!("As^{d}")));
            }
            if d >= 4 {
                if let Ok(g) = build_type_d(d) {
                    v.push((canonical_form(&g), format!("D^{d}")));
                }
            }
            v
        });
        known
            .iter()
            .find(|(c, _)| c == canonical)
            .map(|(_, n)| n.clone())
            .unwrap_or_else(|| format!("P[d{d},{} facets]", factor.len()))
    }
}

fn type_of(g: &CompatibilityGraph, names: &mut FamilyNames) -> (String, String) {
    let mut factors: Vec<(String, String)> = decompose(g)
        .iter()
        .map(|f| {
            let c = canonical_form(f);
            let n = names.name(f, &c);
            (c, n)
        })
        .collect();
    if factors.is_empty() {
        return ("pt".into(), "pt".into());
    }
    factors.sort();
    let key = factors.iter().map(|(c, _)| c.as_str()).collect::<Vec<_>>().join(" x ");
    let mut labels: Vec<&str> = factors.iter().map(|(_, n)| n.as_str()).collect();
    labels.sort();
    (key, labels.join(" x "))
}

/// The boundary `dP`: every facet, typed by its product decomposition.
pub fn boundary(g: &CompatibilityGraph) -> Result<FacetTypeTally> {
    g.ensure_simple()?;
    let mut names = FamilyNames::default();
    let mut tally = FacetTypeTally::default();
    for f in 0..g.len() {
        let (key, name) = type_of(&face_graph(g, &[f])?, &mut names);
        tally.add(key, name, 1);
    }
    Ok(tally)
}

/// `n (Σ_{k=0}^{n-3} As^k × D^{n-k-1} + 2 As^{n-1})`, typed like [`boundary`].
pub fn expected_boundary_d(n: usize) -> Result<FacetTypeTally> {
    if n < 4 {
        return Err(Error::InvalidRank(n));
    }
    let mut names = FamilyNames::default();
    let mut tally = FacetTypeTally::default();
    for k in 0..=n - 3 {
        let term = product(&build_type_a(k)?, &build_type_d(n - k - 1)?)?;
        let (key, name) = type_of(&term, &mut names);
        tally.add(key, name, n);
    }
    let (key, name) = type_of(&build_type_a(n - 1)?, &mut names);
    tally.add(key, name, 2 * n);
    Ok(tally)
}

#[derive(Debug, Clone)]
pub struct Proposition1Report {
    pub n: usize,
    pub expected: FacetTypeTally,
    pub actual: FacetTypeTally,
    /// `(type, expected count, actual count)` for every disagreement.
    pub mismatches: Vec<(String, usize, usize)>,
}

impl Proposition1Report {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the boundary of the type D model with the predicted facet census.
pub fn verify_proposition1(n: usize) -> Result<Proposition1Report> {
    let expected = expected_boundary_d(n)?;
    let actual = boundary(&build_type_d(n)?)?;
    let mismatches = expected.differences(&actual);
    Ok(Proposition1Report { n, expected, actual, mismatches })
}

pub const BASE_LABELS: [&str; 2] = ["base0", "base1"];

/// `P × I` with the two new facets labelled `base0` and `base1`.
pub fn prism(g: &CompatibilityGraph) -> Result<CompatibilityGraph> {
    let interval = CompatibilityGraph::segment()
        .with_labels(BASE_LABELS.iter().map(|&t| FacetLabel::derived(t)).collect())?;
    product(g, &interval)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Any edge may be shaved at any step.
    Full,
    /// Shave faces of the `base0` facet of a prism, with one step in the
    /// middle that cuts between a shaving-created facet and an original one.
    Guided,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Full => "full",
            Strategy::Guided => "guided",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub sequence: Option<Vec<ShaveStep>>,
    pub nodes: u64,
    pub memo_entries: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Original,
    Base,
    Created,
}

struct SearchState {
    target_canonical: String,
    target_h: IntPolynomial,
    target_degrees: Vec<usize>,
    strategy: Strategy,
    dimension: usize,
    total_steps: usize,
    dead: HashSet<String>,
    nodes: u64,
    deadline: Option<Instant>,
}

/// Searches for `target - source` shavings turning `source` into a graph
/// isomorphic to `target`. Depth-first under a fixed edge order; states are
/// memoized by canonical form (coloured by facet role for the guided
/// strategy), and branches are pruned when some interior h-number is within
/// fewer units of the target's than there are steps left.
pub fn find_shaving_sequence(
    source: &CompatibilityGraph,
    target: &CompatibilityGraph,
    max_steps: usize,
    strategy: Strategy,
    budget: Option<Duration>,
) -> Result<SearchResult> {
    if source.dimension() != target.dimension() {
        return Err(Error::DimensionMismatch(source.dimension(), target.dimension()));
    }
    let needed = target
        .len()
        .checked_sub(source.len())
        .ok_or(Error::StepBudget { needed: 0, max_steps })?;
    if needed > max_steps {
        return Err(Error::StepBudget { needed, max_steps });
    }
    let mut roles = vec![Role::Original; source.len()];
    if strategy == Strategy::Guided {
        let base = source
            .index_of(&FacetLabel::derived(BASE_LABELS[0]))
            .ok_or_else(|| Error::InvalidGraph("guided search needs a prism source with a base0 facet".into()))?;
        roles[base] = Role::Base;
    }
    let mut state = SearchState {
        target_canonical: canonical_form(target),
        target_h: f_to_h(&clique_f_vector(target)?)?,
        target_degrees: degree_profile(target),
        strategy,
        dimension: source.dimension(),
        total_steps: needed,
        dead: HashSet::new(),
        nodes: 0,
        deadline: budget.map(|b| Instant::now() + b),
    };
    let mut path = Vec::new();
    let source_h = f_to_h(&clique_f_vector(source)?)?;
    let found = state.feasible(&source_h, needed) && state.search(source, &source_h, &roles, &mut path)?;
    Ok(SearchResult {
        sequence: found.then_some(path),
        nodes: state.nodes,
        memo_entries: state.dead.len(),
    })
}

impl SearchState {
    /// `h` is the h-polynomial of `g`; children get theirs from the shaved
    /// face alone via `h(P') = h(P) + t·h(G)`.
    fn search(
        &mut self,
        g: &CompatibilityGraph,
        h: &IntPolynomial,
        roles: &[Role],
        path: &mut Vec<ShaveStep>,
    ) -> Result<bool> {
        self.nodes += 1;
        if let Some(deadline) = self.deadline {
            if Instant::now() > deadline {
                return Err(Error::BudgetExhausted { nodes: self.nodes });
            }
        }
        let step = path.len();
        if step == self.total_steps {
            return Ok(canonical_form(g) == self.target_canonical);
        }
        let key = match self.strategy {
            Strategy::Full => canonical_form(g),
            Strategy::Guided => {
                let colors: Vec<u32> = roles.iter().map(|r| *r as u32).collect();
                canonical_form_colored(g, &colors)
            }
        };
        if self.dead.contains(&key) {
            return Ok(false);
        }
        let remaining_after = self.total_steps - step - 1;
        for (a, b) in self.candidates(g, roles, step) {
            let face = face_graph(g, &[a, b])?;
            let child_h = h.checked_add(&f_to_h(&clique_f_vector(&face)?)?.shift(1))?;
            if !self.feasible(&child_h, remaining_after) {
                continue;
            }
            let (child, shave_step) = shave_labeled(g, a, b)?;
            if remaining_after == 0 && degree_profile(&child) != self.target_degrees {
                continue;
            }
            let mut next_roles = roles.to_vec();
            next_roles.push(Role::Created);
            path.push(shave_step);
            if self.search(&child, &child_h, &next_roles, path)? {
                return Ok(true);
            }
            path.pop();
        }
        self.dead.insert(key);
        Ok(false)
    }

    /// Each shave adds `t·h(G)` and every coefficient of `h(G)` is at least
    /// 1, so `h_1..h_{n-1}` need one unit of room per remaining step.
    fn feasible(&self, h: &IntPolynomial, remaining: usize) -> bool {
        if remaining == 0 {
            return *h == self.target_h;
        }
        (1..self.dimension).all(|i| self.target_h.coeff(i) - h.coeff(i) >= remaining as i64)
    }

    fn candidates(&self, g: &CompatibilityGraph, roles: &[Role], step: usize) -> Vec<(usize, usize)> {
        let base_phase = self.dimension.saturating_sub(1).min(self.total_steps);
        let allowed = |i: usize, j: usize| match self.strategy {
            Strategy::Full => true,
            Strategy::Guided if step == base_phase => {
                let (ri, rj) = (roles[i], roles[j]);
                (ri == Role::Created && rj != Role::Created) || (rj == Role::Created && ri != Role::Created)
            }
            Strategy::Guided => roles[i] == Role::Base || roles[j] == Role::Base,
        };
        let mut edges: Vec<(usize, usize)> = g.edges().into_iter().filter(|&(i, j)| allowed(i, j)).collect();
        edges.sort_by_cached_key(|&(i, j)| (g.degree(i) + g.degree(j), g.label(i).to_string(), g.label(j).to_string()));
        edges
    }
}

fn degree_profile(g: &CompatibilityGraph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.len()).map(|i| g.degree(i)).collect();
    d.sort_unstable();
    d
}

/// Replays a sequence of shavings, addressing facets by label.
pub fn apply_sequence(source: &CompatibilityGraph, steps: &[ShaveStep]) -> Result<CompatibilityGraph> {
    let mut g = source.clone();
    for s in steps {
        let missing = || Error::InvalidGraph(format!("no facet labelled {} / {}", s.f1, s.f2));
        let a = g.index_of(&s.f1).ok_or_else(missing)?;
        let b = g.index_of(&s.f2).ok_or_else(missing)?;
        g = shave(&g, a, b)?;
    }
    Ok(g)
}

/// A verified shaving sequence from a prism to a target, with the γ-vector
/// after every step.
#[derive(Debug, Clone)]
pub struct ShavingCertificate {
    pub source: CompatibilityGraph,
    pub steps: Vec<ShaveStep>,
    pub target_canonical: String,
    pub final_canonical: String,
    /// γ of the source, then γ after each step.
    pub gamma_trace: Vec<IntPolynomial>,
    /// Whether `γ(P') = γ(P) + τ γ(G)` held at every step.
    pub gamma_identity_holds: bool,
    pub strategy: Strategy,
    pub nodes: u64,
}

impl ShavingCertificate {
    pub fn reaches_target(&self) -> bool {
        self.final_canonical == self.target_canonical
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "source": self.source.to_json(),
            "steps": self.steps.iter().map(ShaveStep::to_json).collect::<Vec<_>>(),
            "target_canonical": self.target_canonical,
            "gamma_trace": self.gamma_trace.iter().map(|g| g.coeffs().to_vec()).collect::<Vec<_>>(),
        })
    }
}

/// Replays `steps` from `source`, checking the γ update at each step against
/// direct computation.
pub fn certify(
    source: &CompatibilityGraph,
    target: &CompatibilityGraph,
    steps: Vec<ShaveStep>,
    strategy: Strategy,
    nodes: u64,
) -> Result<ShavingCertificate> {
    let mut g = source.clone();
    let mut trace = vec![vectors(&g)?.gamma];
    let mut holds = true;
    for s in &steps {
        let missing = || Error::InvalidGraph(format!("no facet labelled {} / {}", s.f1, s.f2));
        let a = g.index_of(&s.f1).ok_or_else(missing)?;
        let b = g.index_of(&s.f2).ok_or_else(missing)?;
        let identity = shave_identity(&g, a, b)?;
        holds &= identity.gamma_holds() && identity.h_holds();
        g = shave(&g, a, b)?;
        trace.push(identity.gamma_after);
    }
    Ok(ShavingCertificate {
        source: source.clone(),
        steps,
        target_canonical: canonical_form(target),
        final_canonical: canonical_form(&g),
        gamma_trace: trace,
        gamma_identity_holds: holds,
        strategy,
        nodes,
    })
}

/// Searches for the shavings taking `prism(D^{n-1})` to `D^n` (guided first,
/// then full), and certifies the result. `n = 3` runs the cube-to-`As^3` case.
pub fn verify_theorem2(n: usize, budget: Option<Duration>) -> Result<ShavingCertificate> {
    if n < 3 {
        return Err(Error::InvalidRank(n));
    }
    let source = prism(&build_type_d(n - 1)?)?;
    let target = build_type_d(n)?;
    let steps = 2 * n - 3;
    let started = Instant::now();
    let mut nodes = 0;
    for strategy in [Strategy::Guided, Strategy::Full] {
        let remaining = budget.map(|b| b.saturating_sub(started.elapsed()));
        let result = find_shaving_sequence(&source, &target, steps, strategy, remaining)?;
        nodes += result.nodes;
        if let Some(seq) = result.sequence {
            return certify(&source, &target, seq, strategy, nodes);
        }
    }
    Err(Error::SearchFailed)
}
