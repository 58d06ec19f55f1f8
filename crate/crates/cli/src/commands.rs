//! Bodies of the `model`, `vectors`, `shave` and `find-sequence` commands.
//! Each returns the text to print; the binary decides where it goes.

use std::path::Path;
use std::time::Duration;

use anyhow::anyhow;
use flagpoly::surgery::{certify, find_shaving_sequence, shave, Strategy, BASE_LABELS};
use flagpoly::vectors::gal_check;
use flagpoly::{CompatibilityGraph, FacetLabel};
use serde_json::{json, Value};

use crate::models::{load_file, parse_spec, read_json, Cache, Model};
use crate::{render, Failure, VERSION};

pub fn tool() -> Value {
    json!({ "name": "flagpoly", "version": VERSION })
}

/// `model <family> <arg>`: the facet compatibility graph of a model.
pub fn model(family: &str, arg: &str) -> Result<String, Failure> {
    let rank = || arg.parse::<usize>().map_err(|_| anyhow!("expected a rank, got {arg:?}"));
    let m = match family {
        "A" => Model::type_a(rank()?)?,
        "D" => Model::type_d(rank()?)?,
        "Cy" => Model::cyclohedron(rank()?)?,
        "nestohedron" => load_file(Path::new(arg))?,
        "spec" => parse_spec(arg)?,
        other => return Err(anyhow!("unknown family {other:?} (expected A, D, Cy, nestohedron or spec)").into()),
    };
    Ok(render(&m.graph.to_json()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// `vectors <graph.json>`: f, h and γ of a simple polytope.
pub fn vectors(path: &Path, format: Format, cache: &Cache) -> Result<String, Failure> {
    let m = load_file(path)?;
    m.graph.ensure_simple()?;
    let s = cache.summary(&m)?;
    let h = s.h()?;
    let gamma = s.gamma()?;
    Ok(match format {
        Format::Json => render(&json!({
            "model": m.id.to_string(),
            "digest": m.digest(),
            "dimension": m.graph.dimension(),
            "f": s.f,
            "h": h.coeffs(),
            "gamma": gamma.coeffs(),
            "gamma_nonnegative": gal_check(&gamma),
            "tool": tool(),
        })),
        Format::Csv => {
            let mut out = String::from("vector,index,value\n");
            let rows: [(&str, Vec<i64>); 3] = [
                ("f", s.f.iter().map(|&x| x as i64).collect()),
                ("h", h.coeffs().to_vec()),
                ("gamma", gamma.coeffs().to_vec()),
            ];
            for (name, values) in rows {
                for (i, v) in values.iter().enumerate() {
                    out.push_str(&format!("{name},{i},{v}\n"));
                }
            }
            out
        }
    })
}

/// `shave --graph <file> --edge i j`: the graph after cutting off `F_i ∩ F_j`.
pub fn shave_file(path: &Path, i: usize, j: usize) -> Result<String, Failure> {
    let g = CompatibilityGraph::from_json(&read_json(path)?)?;
    g.ensure_simple()?;
    Ok(render(&shave(&g, i, j)?.to_json()))
}

/// `find-sequence`: a certified shaving sequence from `source` to `target`.
pub fn find_sequence(
    source: &str,
    target: &str,
    max_steps: Option<usize>,
    strategy: Option<Strategy>,
    budget: Option<Duration>,
) -> Result<String, Failure> {
    let source = parse_spec(source)?.graph;
    let target = parse_spec(target)?.graph;
    source.ensure_simple()?;
    target.ensure_simple()?;
    let steps = match max_steps {
        Some(s) => s,
        None => target
            .len()
            .checked_sub(source.len())
            .ok_or_else(|| anyhow!("target has fewer facets than source; shaving only adds facets"))?,
    };
    let has_base = BASE_LABELS.iter().all(|l| source.index_of(&FacetLabel::derived(*l)).is_some());
    let strategy = strategy.unwrap_or(if has_base { Strategy::Guided } else { Strategy::Full });
    if strategy == Strategy::Guided && !has_base {
        return Err(anyhow!("the guided strategy needs a prism source (facets base0 and base1)").into());
    }
    let result = find_shaving_sequence(&source, &target, steps, strategy, budget)?;
    let Some(seq) = result.sequence else {
        return Err(Failure::Verification(format!(
            "no sequence of {steps} shavings found ({} nodes, {} dead states)",
            result.nodes, result.memo_entries
        )));
    };
    let cert = certify(&source, &target, seq, strategy, result.nodes)?;
    if !cert.reaches_target() || !cert.gamma_identity_holds {
        return Err(Failure::Verification("replayed sequence does not certify".into()));
    }
    let mut out = cert.to_json();
    let obj = out.as_object_mut().expect("certificate is an object");
    obj.insert("strategy".into(), json!(strategy.as_str()));
    obj.insert("search_nodes".into(), json!(result.nodes));
    obj.insert("gamma_identity_holds".into(), json!(cert.gamma_identity_holds));
    obj.insert("tool".into(), tool());
    Ok(render(&out))
}
