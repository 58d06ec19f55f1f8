//! The `verify` suites. Each runs over a rank range and yields a report with
//! one verdict per instance.

use std::time::{Duration, Instant};

use anyhow::{anyhow, bail};
use flagpoly::nestohedra::{
    elements, for_each_connected_building_set, nested_complex_f_vector, nestohedron_graph,
    non_nestohedron_certificate, BuildingSet,
};
use flagpoly::surgery::{verify_proposition1, verify_theorem2};
use flagpoly::vectors::gal_check;
use flagpoly::{clique_f_vector, face_graph, FacetLabel, IntPolynomial};
use serde_json::{json, Value};

use crate::commands::tool;
use crate::models::{Cache, Model};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Claim {
    Gal,
    Prop1,
    Prop2,
    Thm2,
    DehnSommerville,
    NestohedronCross,
}

impl Claim {
    pub fn as_str(self) -> &'static str {
        match self {
            Claim::Gal => "gal",
            Claim::Prop1 => "prop1",
            Claim::Prop2 => "prop2",
            Claim::Thm2 => "thm2",
            Claim::DehnSommerville => "dehn-sommerville",
            Claim::NestohedronCross => "nestohedron-cross",
        }
    }

    fn default_families(self) -> &'static [Family] {
        match self {
            Claim::Gal | Claim::Prop2 | Claim::DehnSommerville => &[Family::A, Family::D, Family::Cy],
            Claim::Prop1 | Claim::Thm2 => &[Family::D],
            Claim::NestohedronCross => &[Family::Nestohedron],
        }
    }

    fn default_max_rank(self) -> usize {
        match self {
            Claim::Gal | Claim::Prop2 | Claim::DehnSommerville => 6,
            Claim::Prop1 => 5,
            Claim::Thm2 | Claim::NestohedronCross => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    Cy,
    /// All connected building sets on `[n + 1]`.
    Nestohedron,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::D => "D",
            Family::Cy => "Cy",
            Family::Nestohedron => "nestohedron",
        }
    }

    fn min_rank(self) -> usize {
        match self {
            Family::A | Family::Nestohedron => 1,
            Family::D | Family::Cy => 2,
        }
    }

    fn model(self, n: usize) -> anyhow::Result<Model> {
        match self {
            Family::A => Model::type_a(n),
            Family::D => Model::type_d(n),
            Family::Cy => Model::cyclohedron(n),
            Family::Nestohedron => bail!("nestohedra are enumerated, not built by rank"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub families: Vec<Family>,
    pub min_rank: Option<usize>,
    pub max_rank: Option<usize>,
    pub budget: Option<Duration>,
    pub timings: bool,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub claim: Claim,
    pub instances: Vec<Value>,
    pub pass: bool,
    pub exhausted: bool,
}

impl Report {
    pub fn to_json(&self, opts: &Options, families: &[Family]) -> Value {
        json!({
            "claim": self.claim.as_str(),
            "families": families.iter().map(|f| f.as_str()).collect::<Vec<_>>(),
            "instances": self.instances,
            "pass": self.pass,
            "budget_exhausted": self.exhausted,
            "max_rank": opts.max_rank.unwrap_or(self.claim.default_max_rank()),
            "tool": tool(),
        })
    }

    /// `Ok` when every instance passed; otherwise the failure that sets the exit code.
    pub fn outcome(&self) -> Result<(), Failure> {
        if self.exhausted {
            Err(Failure::Budget(format!("{} did not finish within the budget", self.claim.as_str())))
        } else if !self.pass {
            let failed = self.instances.iter().filter(|i| i["pass"] == json!(false)).count();
            Err(Failure::Verification(format!("{}: {failed} instance(s) failed", self.claim.as_str())))
        } else {
            Ok(())
        }
    }
}

/// Runs `claim` and returns the report together with the families it covered.
pub fn run(claim: Claim, opts: &Options, cache: &Cache) -> Result<(Report, Vec<Family>), Failure> {
    let families = if opts.families.is_empty() { claim.default_families().to_vec() } else { opts.families.clone() };
    let max = opts.max_rank.unwrap_or(claim.default_max_rank());
    let mut report = Report { claim, instances: Vec::new(), pass: true, exhausted: false };
    let started = Instant::now();
    for &family in &families {
        check_family(claim, family)?;
        let min = opts.min_rank.unwrap_or(0).max(family.min_rank()).max(claim_min_rank(claim));
        for n in min..=max {
            let t0 = Instant::now();
            let remaining = opts.budget.map(|b| b.saturating_sub(started.elapsed()));
            let mut instance = instance(claim, family, n, cache, remaining)?;
            let pass = instance["pass"] == json!(true);
            report.pass &= pass;
            if instance["status"] == json!("budget-exhausted") {
                report.exhausted = true;
            }
            if opts.timings {
                instance["millis"] = json!(t0.elapsed().as_millis() as u64);
            }
            report.instances.push(instance);
        }
    }
    Ok((report, families))
}

fn claim_min_rank(claim: Claim) -> usize {
    match claim {
        Claim::Prop1 => 4,
        Claim::Thm2 => 3,
        _ => 0,
    }
}

fn check_family(claim: Claim, family: Family) -> Result<(), Failure> {
    let ok = match claim {
        Claim::Prop1 | Claim::Thm2 => family == Family::D,
        Claim::NestohedronCross => family == Family::Nestohedron,
        _ => family != Family::Nestohedron,
    };
    if ok {
        Ok(())
    } else {
        Err(anyhow!("claim {} does not apply to family {}", claim.as_str(), family.as_str()).into())
    }
}

fn header(m: &Model, n: usize) -> Value {
    json!({ "model": m.id.to_string(), "digest": m.digest(), "rank": n })
}

fn instance(claim: Claim, family: Family, n: usize, cache: &Cache, budget: Option<Duration>) -> Result<Value, Failure> {
    if claim == Claim::NestohedronCross {
        return cross_check_ground(n + 1);
    }
    let m = family.model(n)?;
    let mut v = header(&m, n);
    let o = v.as_object_mut().expect("object");
    let pass = match claim {
        Claim::Gal => {
            let s = cache.summary(&m)?;
            let gamma = s.gamma()?;
            o.insert("gamma".into(), json!(gamma.coeffs()));
            gal_check(&gamma)
        }
        Claim::DehnSommerville => {
            let simple = m.graph.is_simple();
            o.insert("simple".into(), json!(simple));
            if simple {
                let s = cache.summary(&m)?;
                let h = s.h()?;
                let palindromic = h.is_palindromic(n);
                o.insert("f".into(), json!(s.f));
                o.insert("h".into(), json!(h.coeffs()));
                o.insert("palindromic".into(), json!(palindromic));
                palindromic && s.f[n] == 1 && (n == 0 || s.f[n - 1] == m.graph.len() as u64)
            } else {
                false
            }
        }
        Claim::Prop1 => {
            let r = verify_proposition1(n)?;
            o.insert("actual".into(), r.actual.to_json());
            o.insert("expected".into(), r.expected.to_json());
            o.insert(
                "mismatches".into(),
                json!(r.mismatches.iter().map(|(t, e, a)| json!({"type": t, "expected": e, "actual": a})).collect::<Vec<_>>()),
            );
            r.holds()
        }
        Claim::Prop2 => {
            let cert = non_nestohedron_certificate(&m.graph)?;
            // the certificate is expected exactly for type D in rank ≥ 4
            let expected = family == Family::D && n >= 4;
            o.insert("certificate_fired".into(), json!(cert.is_some()));
            o.insert("certificate_expected".into(), json!(expected));
            if let Some(c) = &cert {
                o.insert("indecomposable_facets".into(), json!(c.indecomposable_facets.len()));
                o.insert("threshold".into(), json!(c.threshold));
            }
            cert.is_some() == expected
        }
        Claim::Thm2 => match verify_theorem2(n, budget) {
            Ok(c) => {
                o.insert("steps".into(), json!(c.steps.len()));
                o.insert("strategy".into(), json!(c.strategy.as_str()));
                o.insert("search_nodes".into(), json!(c.nodes));
                o.insert(
                    "gamma_trace".into(),
                    json!(c.gamma_trace.iter().map(IntPolynomial::coeffs).collect::<Vec<_>>()),
                );
                o.insert("gamma_identity_holds".into(), json!(c.gamma_identity_holds));
                o.insert("reaches_target".into(), json!(c.reaches_target()));
                c.reaches_target() && c.gamma_identity_holds && c.steps.len() == 2 * n - 3
            }
            Err(flagpoly::Error::BudgetExhausted { nodes }) => {
                o.insert("status".into(), json!("budget-exhausted"));
                o.insert("search_nodes".into(), json!(nodes));
                false
            }
            Err(flagpoly::Error::SearchFailed) => {
                o.insert("status".into(), json!("search-failed"));
                false
            }
            Err(e) => return Err(e.into()),
        },
        Claim::NestohedronCross => unreachable!(),
    };
    o.insert("pass".into(), json!(pass));
    Ok(v)
}

/// Every check a flag building set must pass; returns the names of those that fail.
pub fn flag_nestohedron_failures(b: &BuildingSet) -> anyhow::Result<Vec<&'static str>> {
    let mut failed = Vec::new();
    let g = nestohedron_graph(b)?;
    let n = b.dimension();
    let f = clique_f_vector(&g)?;
    if nested_complex_f_vector(b)? != f {
        failed.push("f-vector");
    }
    let h = flagpoly::f_to_h(&f)?;
    if !g.is_simple() || !h.is_palindromic(n) {
        failed.push("dehn-sommerville");
    } else if !gal_check(&flagpoly::h_to_gamma(&h, n)?) {
        failed.push("gal");
    }
    if !facet_correspondence(b, &g)? {
        failed.push("facet-correspondence");
    }
    if n >= 1 && non_nestohedron_certificate(&g)?.is_some() {
        failed.push("certificate");
    }
    Ok(failed)
}

/// Each facet `S` of `P_B` has the f-polynomial of `P_{B|S} × P_{B/S}`.
pub fn facet_correspondence(b: &BuildingSet, g: &flagpoly::CompatibilityGraph) -> anyhow::Result<bool> {
    for term in flagpoly::nestohedra::boundary_formula(b)? {
        let label = FacetLabel::BSet { set: elements(term.set) };
        let facet = g.index_of(&label).ok_or_else(|| anyhow!("no facet {label}"))?;
        let face = clique_f_vector(&face_graph(g, &[facet])?)?.to_polynomial()?;
        let r = nested_complex_f_vector(&term.restriction.set)?.to_polynomial()?;
        let c = nested_complex_f_vector(&term.contraction.set)?.to_polynomial()?;
        if face != r.checked_mul(&c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cross_check_ground(ground: usize) -> Result<Value, Failure> {
    if ground > 5 {
        return Err(anyhow!("exhaustive nestohedron cross-check supports rank ≤ 4 (ground ≤ 5)").into());
    }
    let (mut total, mut flag) = (0u64, 0u64);
    let mut failures = Vec::new();
    let mut error = None;
    for_each_connected_building_set(ground, |b| {
        total += 1;
        if error.is_some() || !b.is_flag() {
            return;
        }
        flag += 1;
        match flag_nestohedron_failures(b) {
            Ok(f) if f.is_empty() => {}
            Ok(f) => failures.push(json!({ "building_set": b.to_json(), "failed": f })),
            Err(e) => error = Some(e),
        }
    })?;
    if let Some(e) = error {
        return Err(e.into());
    }
    Ok(json!({
        "ground": ground,
        "rank": ground - 1,
        "building_sets": total,
        "flag_building_sets": flag,
        "failures": failures,
        "pass": failures.is_empty(),
    }))
}
