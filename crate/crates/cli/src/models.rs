//! Model specifications, identifiers and the on-disk memo cache.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use flagpoly::nestohedra::{cycle_building_set, nestohedron_graph, BuildingSet};
use flagpoly::surgery::prism;
use flagpoly::vectors::{f_to_h, h_to_gamma};
use flagpoly::{build_type_a, build_type_d, canonical_form, clique_f_vector, CompatibilityGraph, IntPolynomial};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    D,
    Nestohedron,
    Derived,
}

impl Family {
    fn as_str(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::D => "D",
            Family::Nestohedron => "nestohedron",
            Family::Derived => "derived",
        }
    }
}

/// Family plus rank (for A and D) or a digest of the defining JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelId {
    pub family: Family,
    pub key: String,
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.family.as_str(), self.key)
    }
}

/// SHA-256 of the compact JSON text (keys sorted), first 16 hex digits.
pub fn digest(value: &Value) -> String {
    let text = serde_json::to_string(value).expect("JSON values serialize");
    hex::encode(&Sha256::digest(text.as_bytes())[..8])
}

pub struct Model {
    pub id: ModelId,
    pub graph: CompatibilityGraph,
}

impl Model {
    pub fn new(id: ModelId, graph: CompatibilityGraph) -> Self {
        Model { id, graph }
    }

    pub fn type_a(n: usize) -> anyhow::Result<Self> {
        Ok(Model::new(ModelId { family: Family::A, key: n.to_string() }, build_type_a(n)?))
    }

    pub fn type_d(n: usize) -> anyhow::Result<Self> {
        Ok(Model::new(ModelId { family: Family::D, key: n.to_string() }, build_type_d(n)?))
    }

    pub fn nestohedron(b: &BuildingSet) -> anyhow::Result<Self> {
        let id = ModelId { family: Family::Nestohedron, key: digest(&b.to_json()) };
        Ok(Model::new(id, nestohedron_graph(b)?))
    }

    /// The cyclohedron `Cy^n`, from the cycle building set on `[n + 1]`.
    pub fn cyclohedron(n: usize) -> anyhow::Result<Self> {
        Self::nestohedron(&cycle_building_set(n + 1)?)
    }

    pub fn derived(graph: CompatibilityGraph) -> Self {
        let id = ModelId { family: Family::Derived, key: digest(&graph.to_json()) };
        Model::new(id, graph)
    }

    pub fn digest(&self) -> String {
        digest(&self.graph.to_json())
    }
}

/// Parses `A<n>`, `D<n>`, `Cy<n>`, `cube<n>`, `prism:<spec>`, or a path to
/// a graph or building-set JSON file.
pub fn parse_spec(spec: &str) -> anyhow::Result<Model> {
    if let Some(inner) = spec.strip_prefix("prism:") {
        let base = parse_spec(inner)?;
        return Ok(Model::derived(prism(&base.graph)?));
    }
    let rank = |prefix: &str| -> Option<anyhow::Result<usize>> {
        spec.strip_prefix(prefix)
            .filter(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()))
            .map(|r| r.parse::<usize>().map_err(|e| anyhow!("bad rank in {spec:?}: {e}")))
    };
    if let Some(n) = rank("Cy") {
        return Model::cyclohedron(n?);
    }
    if let Some(n) = rank("cube") {
        return Ok(Model::derived(CompatibilityGraph::cube(n?)?));
    }
    if let Some(n) = rank("A") {
        return Model::type_a(n?);
    }
    if let Some(n) = rank("D") {
        return Model::type_d(n?);
    }
    load_file(Path::new(spec))
}

pub fn read_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A building set file (`{"ground", "sets"}`) becomes its nestohedron;
/// anything else must be a graph file.
pub fn load_file(path: &Path) -> anyhow::Result<Model> {
    let value = read_json(path)?;
    if value.get("ground").is_some() {
        let b = BuildingSet::from_json(&value)?;
        if let Err(v) = b.validate() {
            bail!("{}: not a connected building set: {v}", path.display());
        }
        return Model::nestohedron(&b);
    }
    Ok(Model::derived(CompatibilityGraph::from_json(&value)?))
}

/// Canonical form and f-vector of a model, memoized on disk by model id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub canonical: String,
    pub f: Vec<u64>,
}

impl Summary {
    pub fn h(&self) -> anyhow::Result<IntPolynomial> {
        Ok(f_to_h(&flagpoly::FVector::new(self.f.clone())?)?)
    }

    pub fn gamma(&self) -> anyhow::Result<IntPolynomial> {
        Ok(h_to_gamma(&self.h()?, self.f.len() - 1)?)
    }
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> anyhow::Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating cache directory {}", d.display()))?;
        }
        Ok(Cache { dir })
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    fn path(&self, model: &Model) -> Option<PathBuf> {
        // the digest guards against a stale entry for a different graph under the same id
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.{}.json", model.id, model.digest())))
    }

    pub fn summary(&self, model: &Model) -> anyhow::Result<Summary> {
        let path = self.path(model);
        if let Some(p) = &path {
            if let Some(hit) = fs::read_to_string(p).ok().and_then(|t| parse_summary(&t)) {
                return Ok(hit);
            }
        }
        let summary = Summary {
            canonical: canonical_form(&model.graph),
            f: clique_f_vector(&model.graph)?.counts().to_vec(),
        };
        if let Some(p) = path {
            let body = serde_json::json!({ "canonical": summary.canonical, "f": summary.f });
            let tmp = p.with_extension("tmp");
            fs::write(&tmp, body.to_string()).and_then(|_| fs::rename(&tmp, &p)).ok();
        }
        Ok(summary)
    }
}

fn parse_summary(text: &str) -> Option<Summary> {
    let v: Value = serde_json::from_str(text).ok()?;
    let canonical = v.get("canonical")?.as_str()?.to_string();
    let f = v
        .get("f")?
        .as_array()?
        .iter()
        .map(|x| x.as_u64())
        .collect::<Option<Vec<_>>>()?;
    (!f.is_empty()).then_some(Summary { canonical, f })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs() {
        assert_eq!(parse_spec("A3").unwrap().graph.len(), 9);
        assert_eq!(parse_spec("D4").unwrap().id.to_string(), "D-4");
        assert_eq!(parse_spec("prism:D3").unwrap().graph.len(), 11);
        assert_eq!(parse_spec("Cy2").unwrap().graph.len(), 6);
        assert_eq!(parse_spec("cube3").unwrap().graph.len(), 6);
        assert!(parse_spec("D1").is_err());
        assert!(parse_spec("no-such-file.json").is_err());
    }

    #[test]
    fn digests_are_stable() {
        let v = serde_json::json!({"b": 1, "a": [1, 2]});
        assert_eq!(digest(&v), digest(&serde_json::json!({"a": [1, 2], "b": 1})));
        assert_eq!(digest(&v).len(), 16);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf())).unwrap();
        let m = Model::type_d(4).unwrap();
        let cold = cache.summary(&m).unwrap();
        let warm = cache.summary(&m).unwrap();
        assert_eq!(cold, warm);
        assert_eq!(cold, Cache::disabled().summary(&m).unwrap());
        assert_eq!(cold.f[0], 50);
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
