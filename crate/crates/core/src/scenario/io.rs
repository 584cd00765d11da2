//! Instance and scenario files.
//!
//! Instance format (1-based indices, omitted triples mean 0):
//!
//! ```json
//! { "n": 2, "links": [[1,1],[2,2]], "affectance": [[2,1,1,0.25]] }
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::affectance::{AffectanceMatrix, Instance, LayerTopology};
use crate::error::{Error, Result};
use crate::scenario::office::OfficeGridSpec;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    n: usize,
    links: Vec<RawLink>,
    #[serde(default)]
    affectance: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(try_from = "(usize, usize)")]
struct RawLink(usize, usize);

impl TryFrom<(usize, usize)> for RawLink {
    type Error = String;

    fn try_from((v, w): (usize, usize)) -> std::result::Result<Self, String> {
        if v == 0 || w == 0 {
            return Err(format!("link [{v},{w}] uses a 0 index; indices are 1-based"));
        }
        Ok(RawLink(v - 1, w - 1))
    }
}

/// `[u, v, w, value]`. Range and self-affectance are checked here so that
/// serde reports the offending line.
#[derive(Deserialize)]
#[serde(try_from = "(usize, usize, usize, f64)")]
struct RawEntry(usize, usize, usize, f64);

impl TryFrom<(usize, usize, usize, f64)> for RawEntry {
    type Error = String;

    fn try_from((u, v, w, a): (usize, usize, usize, f64)) -> std::result::Result<Self, String> {
        if u == 0 || v == 0 || w == 0 {
            return Err(format!("entry [{u},{v},{w},{a}] uses a 0 index; indices are 1-based"));
        }
        if !(0.0..=1.0).contains(&a) {
            return Err(format!("affectance a({u},({v},{w})) = {a} outside [0,1]"));
        }
        if u == v && a != 0.0 {
            return Err(format!("self-affectance a({u},({u},{w})) = {a} must be 0"));
        }
        Ok(RawEntry(u - 1, v - 1, w - 1, a))
    }
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let topo = LayerTopology::new(raw.n, raw.links.iter().map(|l| (l.0, l.1)))?;
    let matrix = AffectanceMatrix::new(&topo, raw.affectance.iter().map(|e| (e.0, (e.1, e.2), e.3)))?;
    Ok(Instance::new(topo, matrix))
}

/// Serializes with one affectance triple per line; only nonzero entries are written.
pub fn instance_to_json(inst: &Instance) -> String {
    let mut out = format!("{{\n  \"n\": {},\n  \"links\": [", inst.n());
    for (k, (v, w)) in inst.topology().links().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", v + 1, w + 1);
    }
    out.push_str("],\n  \"affectance\": [");
    for (k, (u, (v, w), a)) in inst.entries().enumerate() {
        out.push_str(if k == 0 { "\n    " } else { ",\n    " });
        let value = serde_json::to_string(&a).expect("finite affectance");
        let _ = write!(out, "[{}, {}, {}, {}]", u + 1, v + 1, w + 1, value);
    }
    out.push_str("\n  ]\n}\n");
    out
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    instance_from_json(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, instance_to_json(inst)).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load_office_spec(path: impl AsRef<Path>) -> Result<OfficeGridSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let spec: OfficeGridSpec =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    spec.validate()?;
    Ok(spec)
}

pub fn save_office_spec(spec: &OfficeGridSpec, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(spec).expect("spec serializes");
    fs::write(path, text + "\n").map_err(|e| Error::io(path.display().to_string(), e))
}
