//! On-disk formats: instances, families, generator side records.
//!
//! Instances and families are single compact JSON documents with sorted
//! edge lists and no trailing newline, so re-serializing a loaded file
//! reproduces it byte for byte.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hypermatch_core::constructions::ConstructionMeta;
use hypermatch_core::rainbow::HypergraphFamily;
use hypermatch_core::{Edge, KPartiteHypergraph, Position};
use serde::{Deserialize, Serialize};

/// Bumped whenever any file or report layout changes.
pub const FORMAT_VERSION: &str = "1";

/// Input the loaders refuse; the CLI maps it to exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("malformed {what}: {detail}")]
pub struct Malformed {
    pub what: &'static str,
    pub detail: String,
}

fn malformed(what: &'static str, detail: impl ToString) -> anyhow::Error {
    Malformed {
        what,
        detail: detail.to_string(),
    }
    .into()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    k: usize,
    class_sizes: Vec<Position>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    k: usize,
    class_sizes: Vec<Position>,
    members: Vec<Vec<Edge>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
}

pub fn instance_to_json(h: &KPartiteHypergraph) -> String {
    let file = InstanceFile {
        k: h.k(),
        class_sizes: h.class_sizes().to_vec(),
        edges: h.edges().to_vec(),
    };
    serde_json::to_string(&file).expect("instance serializes")
}

fn build(k: usize, class_sizes: Vec<Position>, edges: Vec<Edge>, what: &'static str) -> Result<KPartiteHypergraph> {
    if k != class_sizes.len() {
        return Err(malformed(
            what,
            format!("k = {k} but {} class sizes", class_sizes.len()),
        ));
    }
    KPartiteHypergraph::new(class_sizes, edges).map_err(|e| malformed(what, e))
}

pub fn instance_from_json(text: &str) -> Result<KPartiteHypergraph> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| malformed("instance", e))?;
    build(file.k, file.class_sizes, file.edges, "instance")
}

pub fn family_to_json(f: &HypergraphFamily) -> String {
    let file = FamilyFile {
        k: f.k(),
        class_sizes: f.class_sizes().to_vec(),
        members: f.members().iter().map(|h| h.edges().to_vec()).collect(),
        m: f.declared_m(),
    };
    serde_json::to_string(&file).expect("family serializes")
}

pub fn family_from_json(text: &str) -> Result<HypergraphFamily> {
    let file: FamilyFile = serde_json::from_str(text).map_err(|e| malformed("family", e))?;
    if file.k != file.class_sizes.len() {
        return Err(malformed("family", "k does not match class_sizes"));
    }
    let members = file
        .members
        .into_iter()
        .map(|edges| build(file.k, file.class_sizes.clone(), edges, "family"))
        .collect::<Result<Vec<_>>>()?;
    let family = HypergraphFamily::with_shape(file.class_sizes, members).map_err(|e| malformed("family", e))?;
    Ok(match file.m {
        Some(m) => family.with_declared_m(m),
        None => family,
    })
}

/// Generator side record written next to each generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaRecord {
    pub construction: String,
    pub parameters: serde_json::Value,
    pub a_sets: Vec<Vec<Position>>,
}

impl MetaRecord {
    pub fn new(meta: &ConstructionMeta, parameters: serde_json::Value) -> Self {
        MetaRecord {
            construction: meta.construction.clone(),
            parameters,
            a_sets: meta.a_sets(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_instance(path: &Path) -> Result<KPartiteHypergraph> {
    instance_from_json(&read_text(path)?).with_context(|| format!("loading {}", path.display()))
}

pub fn load_family(path: &Path) -> Result<HypergraphFamily> {
    family_from_json(&read_text(path)?).with_context(|| format!("loading {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypermatch_core::constructions::{complete, space_barrier};
    use hypermatch_core::DegreeProfile;

    #[test]
    fn instance_round_trip_is_byte_exact() {
        let h = space_barrier(3, 3, &DegreeProfile::new(vec![1, 1, 0])).unwrap().graph;
        let text = instance_to_json(&h);
        assert!(!text.ends_with(char::is_whitespace));
        let back = instance_from_json(&text).unwrap();
        assert_eq!(back, h);
        assert_eq!(instance_to_json(&back), text);
        assert!(text.starts_with(r#"{"k":3,"class_sizes":[3,3,3],"edges":[[0,0,0],"#));
    }

    #[test]
    fn loader_rejects_bad_instances() {
        for bad in [
            r#"{"k":2,"class_sizes":[2,2],"edges":[[0,0],[0,0]]}"#,
            r#"{"k":2,"class_sizes":[2,2],"edges":[[0,2]]}"#,
            r#"{"k":3,"class_sizes":[2,2],"edges":[]}"#,
            r#"{"k":2,"class_sizes":[2,2],"edges":[[0]]}"#,
            r#"{"k":2,"class_sizes":[2,2],"edges":[],"extra":1}"#,
            "not json",
        ] {
            let err = instance_from_json(bad).unwrap_err();
            assert!(err.downcast_ref::<Malformed>().is_some(), "{bad}");
        }
    }

    #[test]
    fn family_round_trip() {
        let c = complete(3, 2).unwrap();
        let e = KPartiteHypergraph::empty(vec![2, 2, 2]).unwrap();
        let f = HypergraphFamily::new(vec![c, e]).unwrap().with_declared_m(0);
        let text = family_to_json(&f);
        let back = family_from_json(&text).unwrap();
        assert_eq!(family_to_json(&back), text);
        assert_eq!(back.t(), 2);
        assert_eq!(back.declared_m(), Some(0));
    }
}
